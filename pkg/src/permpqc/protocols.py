"""Diffie-Hellman and the two ElGamal variants over a cyclic permutation group.

Products are right-to-left (see :mod:`permpqc.perm_core`), so the formula
``x g y`` is ``compose(compose(x, g), y)``.

Secret exponents are drawn uniformly from ``[1, omega - 1]``. Every function
that samples also accepts the exponent as a keyword so test vectors can be
replayed; forced values are used as given, including 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .group_gen import GroupParams, validate_generator
from .perm_core import (
    DegreeMismatchError,
    Permutation,
    SeededRng,
    compose,
    inverse,
    power,
)

__all__ = [
    "InvalidGeneratorError",
    "DHKeyPair",
    "ElGamalPrivateDCP",
    "ElGamalPrivateDP",
    "ElGamalPublicKey",
    "Ciphertext",
    "sample_exponent",
    "dh_keygen",
    "dh_shared_key",
    "elgamal_dcp_keygen",
    "elgamal_dcp_encrypt",
    "elgamal_dcp_decrypt",
    "elgamal_dp_keygen",
    "elgamal_dp_encrypt",
    "elgamal_dp_decrypt",
]


class InvalidGeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class DHKeyPair:
    secret: int
    token: Permutation


@dataclass(frozen=True)
class ElGamalPrivateDCP:
    m: int
    n: int


@dataclass(frozen=True)
class ElGamalPrivateDP:
    """``m`` is an exponent of ``p``, ``n`` an exponent of ``q``."""

    m: int
    n: int


@dataclass(frozen=True)
class ElGamalPublicKey:
    value: Permutation


@dataclass(frozen=True)
class Ciphertext:
    y1: Permutation
    y2: Permutation


def sample_exponent(params: GroupParams, rng: SeededRng) -> int:
    return 1 + rng.uniform_below(params.omega - 1)


def _exponent(params: GroupParams, rng: Optional[SeededRng], forced: Optional[int]) -> int:
    if forced is not None:
        if forced < 0:
            raise ValueError("exponents must be non-negative")
        return int(forced)
    if rng is None:
        raise ValueError("an rng is required unless the exponent is given")
    return sample_exponent(params, rng)


def _require_generator(params: GroupParams, p: Permutation, name: str = "p") -> None:
    check = validate_generator(params, p)
    if not check:
        raise InvalidGeneratorError(f"{name} is not a valid generator: {check.diagnostic}")


def _require_degree(params: GroupParams, **perms: Permutation) -> None:
    for name, perm in perms.items():
        if perm.degree != params.degree:
            raise DegreeMismatchError(
                f"{name} has degree {perm.degree}, parameters need {params.degree}"
            )


def _sandwich(left: Permutation, middle: Permutation, right: Permutation) -> Permutation:
    return compose(compose(left, middle), right)


# -- Diffie-Hellman ---------------------------------------------------------

def dh_keygen(
    params: GroupParams,
    p: Permutation,
    rng: Optional[SeededRng] = None,
    *,
    secret: Optional[int] = None,
) -> DHKeyPair:
    _require_generator(params, p)
    a = _exponent(params, rng, secret)
    return DHKeyPair(a, power(p, a))


def dh_shared_key(own_secret: int, other_token: Permutation) -> Permutation:
    return power(other_token, own_secret)


# -- ElGamal over the double coset problem ----------------------------------

def elgamal_dcp_keygen(
    params: GroupParams,
    p: Permutation,
    g: Permutation,
    rng: Optional[SeededRng] = None,
    *,
    m: Optional[int] = None,
    n: Optional[int] = None,
) -> tuple[ElGamalPrivateDCP, ElGamalPublicKey]:
    _require_degree(params, g=g)
    _require_generator(params, p)
    m = _exponent(params, rng, m)
    n = _exponent(params, rng, n)
    return ElGamalPrivateDCP(m, n), ElGamalPublicKey(_sandwich(power(p, m), g, power(p, n)))


def elgamal_dcp_encrypt(
    params: GroupParams,
    p: Permutation,
    g: Permutation,
    receiver_pub: ElGamalPublicKey,
    sender_priv: ElGamalPrivateDCP,
    msg: Permutation,
    rng: Optional[SeededRng] = None,
    *,
    t: Optional[int] = None,
) -> Ciphertext:
    """Encrypt with a fresh session key ``k = p^t``.

    ``y1 = k^m g k^n`` and ``y2 = msg (k^m P_B k^n)``, where ``(m, n)`` is
    the sender's long-term private key.
    """
    _require_degree(params, p=p, g=g, receiver_pub=receiver_pub.value, msg=msg)
    t = _exponent(params, rng, t)
    k = power(p, t)
    km, kn = power(k, sender_priv.m), power(k, sender_priv.n)
    y1 = _sandwich(km, g, kn)
    y2 = compose(msg, _sandwich(km, receiver_pub.value, kn))
    return Ciphertext(y1, y2)


def elgamal_dcp_decrypt(
    receiver_priv: ElGamalPrivateDCP,
    p: Permutation,
    ct: Ciphertext,
) -> Permutation:
    """Recover ``y2 (p^r y1 p^s)^-1``."""
    if not (p.degree == ct.y1.degree == ct.y2.degree):
        raise DegreeMismatchError("ciphertext and generator degrees differ")
    mask = _sandwich(power(p, receiver_priv.m), ct.y1, power(p, receiver_priv.n))
    return compose(ct.y2, inverse(mask))


# -- ElGamal over the decomposition problem ---------------------------------

def elgamal_dp_keygen(
    params: GroupParams,
    p: Permutation,
    q: Permutation,
    g: Permutation,
    rng: Optional[SeededRng] = None,
    *,
    m: Optional[int] = None,
    n: Optional[int] = None,
) -> tuple[ElGamalPrivateDP, ElGamalPublicKey]:
    _require_degree(params, g=g)
    _require_generator(params, p, "p")
    _require_generator(params, q, "q")
    m = _exponent(params, rng, m)
    n = _exponent(params, rng, n)
    return ElGamalPrivateDP(m, n), ElGamalPublicKey(_sandwich(power(p, m), g, power(q, n)))


def elgamal_dp_encrypt(
    params: GroupParams,
    p: Permutation,
    q: Permutation,
    g: Permutation,
    receiver_pub: ElGamalPublicKey,
    sender_priv: ElGamalPrivateDP,
    msg: Permutation,
    rng: Optional[SeededRng] = None,
    *,
    t: Optional[int] = None,
    u: Optional[int] = None,
) -> Ciphertext:
    _require_degree(params, p=p, q=q, g=g, receiver_pub=receiver_pub.value, msg=msg)
    t = _exponent(params, rng, t)
    u = _exponent(params, rng, u)
    k, l = power(p, t), power(q, u)
    km, ln = power(k, sender_priv.m), power(l, sender_priv.n)
    y1 = _sandwich(km, g, ln)
    y2 = compose(msg, _sandwich(km, receiver_pub.value, ln))
    return Ciphertext(y1, y2)


def elgamal_dp_decrypt(
    receiver_priv: ElGamalPrivateDP,
    p: Permutation,
    q: Permutation,
    ct: Ciphertext,
) -> Permutation:
    if not (p.degree == q.degree == ct.y1.degree == ct.y2.degree):
        raise DegreeMismatchError("ciphertext and generator degrees differ")
    mask = _sandwich(power(p, receiver_priv.m), ct.y1, power(q, receiver_priv.n))
    return compose(ct.y2, inverse(mask))
