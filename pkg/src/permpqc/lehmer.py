"""Factoradic (Lehmer code) ranking of permutations.

Ranks are lexicographic: the digit at position ``i`` counts later images
smaller than ``images[i]``, and ``rank = sum(d_i * (n-1-i)!)``. This is the
factoradic numbering of OEIS A007623.
"""

from __future__ import annotations

import math
import warnings
from typing import Optional

import numpy as np

from .perm_core import Permutation, InvalidDegreeError

__all__ = [
    "RankOutOfRangeError",
    "MessageTooLargeError",
    "MessageCapacityWarning",
    "lehmer_digits",
    "rank",
    "unrank",
    "encode_message",
    "decode_message",
]


class RankOutOfRangeError(ValueError):
    pass


class MessageTooLargeError(RankOutOfRangeError):
    pass


class MessageCapacityWarning(UserWarning):
    """Message integer is a valid rank but not below the subgroup order."""


def lehmer_digits(p: Permutation) -> list[int]:
    a = p.array
    # smaller[i, j] is True when j > i and a[j] < a[i]
    smaller = np.triu(a[None, :] < a[:, None], k=1)
    return smaller.sum(axis=1).tolist()


def rank(p: Permutation) -> int:
    n = p.degree
    r = 0
    for i, d in enumerate(lehmer_digits(p)):
        r = r * (n - i) + d
    return r


def unrank(n: int, r: int) -> Permutation:
    if not isinstance(n, int) or n < 1:
        raise InvalidDegreeError(f"degree must be a positive integer, got {n!r}")
    if r < 0 or r >= math.factorial(n):
        raise RankOutOfRangeError(f"rank must lie in [0, {n}!)")
    digits = [0] * n
    for radix in range(1, n + 1):
        r, digits[n - radix] = divmod(r, radix)
    pool = list(range(1, n + 1))
    return Permutation([pool.pop(d) for d in digits])


def encode_message(n: int, m: int, omega: Optional[int] = None) -> Permutation:
    """Map an integer message to the permutation of that rank.

    ``m >= n!`` is rejected. When ``omega`` is given and ``m >= omega`` a
    :class:`MessageCapacityWarning` is issued but the message is encoded.
    """
    if m < 0:
        raise MessageTooLargeError("message must be a non-negative integer")
    if m >= math.factorial(n):
        raise MessageTooLargeError(f"message does not fit in a rank of S_{n}")
    if omega is not None and m >= omega:
        warnings.warn(
            f"message {m} is not below the subgroup order {omega}",
            MessageCapacityWarning,
            stacklevel=2,
        )
    return unrank(n, m)


def decode_message(p: Permutation) -> int:
    return rank(p)
