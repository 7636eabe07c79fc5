"""Worked-example vectors shipped with the package.

``data/appendix.json`` holds the published listings verbatim as 1-based
integer arrays and the exponents as decimal strings.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .analysis import DHTranscript, ElGamalTranscript
from .perm_core import Permutation

__all__ = ["load_raw", "dh_vector", "elgamal_vector", "dh_transcript", "elgamal_transcript"]

_PERM_KEYS = {
    "p", "g", "alice_token", "bob_token", "alice_key", "bob_key",
    "pm", "pn", "pr", "ps", "public_a", "public_b", "k", "msg", "y1", "y2", "recovered",
}
_INT_KEYS = {"order", "g_order", "alice_power", "bob_power", "m", "n", "r", "s", "t"}


@lru_cache(maxsize=None)
def load_raw() -> dict:
    text = resources.files("permpqc").joinpath("data/appendix.json").read_text()
    return json.loads(text)


def _typed(section: dict) -> dict:
    out = {}
    for key, value in section.items():
        if key in _PERM_KEYS:
            out[key] = Permutation(value)
        elif key in _INT_KEYS:
            out[key] = int(value)
        else:
            out[key] = tuple(value)
    return out


def dh_vector() -> dict:
    return _typed(load_raw()["dh"])


def elgamal_vector() -> dict:
    return _typed(load_raw()["elgamal"])


def dh_transcript() -> DHTranscript:
    v = dh_vector()
    return DHTranscript(
        token_a=v["alice_token"],
        token_b=v["bob_token"],
        key_a=v["alice_key"],
        key_b=v["bob_key"],
        secret_a=v["alice_power"],
        secret_b=v["bob_power"],
        cycle_lengths=v["cycle_lengths"],
        order=v["order"],
    )


def elgamal_transcript() -> ElGamalTranscript:
    v = elgamal_vector()
    return ElGamalTranscript(
        g=v["g"],
        m=v["m"], n=v["n"], r=v["r"], s=v["s"], t=v["t"],
        public_a=v["public_a"],
        public_b=v["public_b"],
        msg=v["msg"],
        y1=v["y1"],
        y2=v["y2"],
        recovered=v["recovered"],
        listings={name: v[name] for name in ("pm", "pn", "pr", "ps", "k")},
        cycle_lengths=v["cycle_lengths"],
        order=v["order"],
        g_cycle_lengths=v["g_cycle_lengths"],
        g_order=v["g_order"],
    )
