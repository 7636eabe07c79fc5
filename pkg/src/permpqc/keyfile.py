"""Versioned, human-diffable key files.

A key file is a JSON object with a fixed key order and one line per field,
so re-serialising a parsed file reproduces it byte for byte::

    {
      "format": "permpqc-keyfile",
      "format_version": 1,
      "role": "dh_token",
      "params": {"dim": 16, "degree": 381, "omega": "32589158477190044730"},
      "payload": {
        "token": [162, 132, 1, ...]
      }
    }

Permutations are 1-based integer arrays, exponents are decimal strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Union

from .group_gen import GroupParams, InvalidDimensionError, make_params
from .perm_core import Permutation, PermutationError

__all__ = ["FORMAT_VERSION", "ROLES", "KeyFileError", "KeyFile", "serialize", "parse", "save", "load"]

FORMAT_NAME = "permpqc-keyfile"
FORMAT_VERSION = 1

PERM, EXP, VARIANT = "perm", "exp", "variant"

# role -> ordered {field: (kind, required)}
ROLES: dict[str, dict[str, tuple[str, bool]]] = {
    "generator": {"p": (PERM, True), "q": (PERM, False)},
    "auxiliary": {"g": (PERM, True)},
    "dh_secret": {"secret": (EXP, True), "token": (PERM, False)},
    "dh_token": {"token": (PERM, True)},
    "elgamal_private": {"variant": (VARIANT, True), "m": (EXP, True), "n": (EXP, True)},
    "elgamal_public": {"variant": (VARIANT, True), "value": (PERM, True)},
    "ciphertext": {"variant": (VARIANT, True), "y1": (PERM, True), "y2": (PERM, True)},
    "message": {"msg": (PERM, True), "rank": (EXP, False)},
}
VARIANTS = ("dcp", "dp")


class KeyFileError(ValueError):
    pass


@dataclass(frozen=True)
class KeyFile:
    role: str
    params: GroupParams
    payload: dict
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        _validate(self.role, self.params, self.payload)

    def __getitem__(self, key: str) -> Any:
        return self.payload[key]

    def get(self, key: str, default: Any = None) -> Any:
        return self.payload.get(key, default)


def _validate(role: str, params: GroupParams, payload: dict) -> None:
    if role not in ROLES:
        raise KeyFileError(f"unknown role {role!r}")
    schema = ROLES[role]
    extra = set(payload) - set(schema)
    if extra:
        raise KeyFileError(f"unexpected payload fields for {role}: {sorted(extra)}")
    for name, (kind, required) in schema.items():
        if name not in payload:
            if required:
                raise KeyFileError(f"{role} is missing field {name!r}")
            continue
        value = payload[name]
        if kind == PERM:
            if not isinstance(value, Permutation):
                raise KeyFileError(f"field {name!r} must be a permutation")
            if value.degree != params.degree:
                raise KeyFileError(
                    f"field {name!r} has degree {value.degree}, params need {params.degree}"
                )
        elif kind == EXP:
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise KeyFileError(f"field {name!r} must be a non-negative integer")
        elif value not in VARIANTS:
            raise KeyFileError(f"variant must be one of {VARIANTS}, got {value!r}")


def serialize(kf: KeyFile) -> str:
    params = {"dim": kf.params.dim, "degree": kf.params.degree, "omega": str(kf.params.omega)}
    lines = [
        "{",
        f'  "format": {json.dumps(FORMAT_NAME)},',
        f'  "format_version": {kf.format_version},',
        f'  "role": {json.dumps(kf.role)},',
        f'  "params": {json.dumps(params)},',
        '  "payload": {',
    ]
    fields = []
    for name, (kind, _) in ROLES[kf.role].items():
        if name not in kf.payload:
            continue
        value = kf.payload[name]
        if kind == PERM:
            encoded = json.dumps(list(value.images))
        elif kind == EXP:
            encoded = json.dumps(str(value))
        else:
            encoded = json.dumps(value)
        fields.append(f"    {json.dumps(name)}: {encoded}")
    lines.append(",\n".join(fields))
    lines += ["  }", "}"]
    return "\n".join(lines) + "\n"


def parse(text: str) -> KeyFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise KeyFileError(f"not a key file: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise KeyFileError("not a key file: missing format marker")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise KeyFileError(f"unsupported format_version {version!r}")
    role = doc.get("role")
    if role not in ROLES:
        raise KeyFileError(f"unknown role {role!r}")
    raw_params = doc.get("params") or {}
    try:
        params = make_params(raw_params.get("dim"))
    except (InvalidDimensionError, TypeError) as exc:
        raise KeyFileError(str(exc)) from None
    if raw_params.get("degree") != params.degree or raw_params.get("omega") != str(params.omega):
        raise KeyFileError("params record is inconsistent with its dimension")

    payload = {}
    raw_payload = doc.get("payload")
    if not isinstance(raw_payload, dict):
        raise KeyFileError("payload must be an object")
    schema = ROLES[role]
    for name, value in raw_payload.items():
        if name not in schema:
            raise KeyFileError(f"unexpected payload field {name!r} for {role}")
        kind = schema[name][0]
        if kind == PERM:
            if not isinstance(value, list):
                raise KeyFileError(f"field {name!r} must be an integer array")
            try:
                payload[name] = Permutation(value)
            except PermutationError as exc:
                raise KeyFileError(f"field {name!r}: {exc}") from None
        elif kind == EXP:
            if not isinstance(value, str) or not value.isdigit():
                raise KeyFileError(f"field {name!r} must be a decimal string")
            payload[name] = int(value)
        else:
            payload[name] = value
    return KeyFile(role, params, payload, version)


def save(path: Union[str, Path], kf: KeyFile) -> None:
    Path(path).write_text(serialize(kf))


def load(path: Union[str, Path]) -> KeyFile:
    return parse(Path(path).read_text())
