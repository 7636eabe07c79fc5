"""Public parameters and random high-order generators.

A generator's cycles have the first ``dim`` primes as lengths, so its order
is their product (a primorial) and it acts on ``sum(primes)`` points.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .perm_core import (
    DegreeMismatchError,
    Permutation,
    SeededRng,
    cycle_decomposition,
    random_permutation,
    shuffle,
)

__all__ = [
    "DEFAULT_DIM",
    "MAX_DIM",
    "InvalidDimensionError",
    "GroupParams",
    "GeneratorCheck",
    "first_primes",
    "make_params",
    "generate_generator",
    "validate_generator",
]

DEFAULT_DIM = 16
# Above DEFAULT_DIM the CLI asks for an explicit opt-in flag.
MAX_DIM = 50


class InvalidDimensionError(ValueError):
    pass


def _is_prime(k: int) -> bool:
    if k < 2:
        return False
    d = 2
    while d * d <= k:
        if k % d == 0:
            return False
        d += 1
    return True


def first_primes(count: int) -> list[int]:
    primes: list[int] = []
    k = 2
    while len(primes) < count:
        if _is_prime(k):
            primes.append(k)
        k += 1
    return primes


@dataclass(frozen=True)
class GroupParams:
    dim: int
    primes: tuple[int, ...]
    partition_sums: tuple[int, ...] = field(repr=False)
    primorials: tuple[int, ...] = field(repr=False)

    @property
    def degree(self) -> int:
        return self.partition_sums[-1]

    @property
    def omega(self) -> int:
        return self.primorials[-1]


@lru_cache(maxsize=None)
def make_params(dim: int) -> GroupParams:
    if not isinstance(dim, int) or dim < 1:
        raise InvalidDimensionError(f"dimension must be a positive integer, got {dim!r}")
    if dim > MAX_DIM:
        raise InvalidDimensionError(f"dimension {dim} exceeds the supported maximum {MAX_DIM}")
    primes = first_primes(dim)
    sums, prods = [], []
    s, prod = 0, 1
    for q in primes:
        s += q
        prod *= q
        sums.append(s)
        prods.append(prod)
    return GroupParams(dim, tuple(primes), tuple(sums), tuple(prods))


def generate_generator(params: GroupParams, rng: SeededRng) -> Permutation:
    """Random permutation whose cycle type is exactly ``params.primes``.

    A uniformly random arrangement of the points is cut into consecutive
    blocks whose lengths follow a shuffled copy of the prime list; each
    block ``b`` becomes the cycle ``b[0] -> b[1] -> ... -> b[-1] -> b[0]``.
    """
    sigma = random_permutation(params.degree, rng).array
    lengths = list(params.primes)
    shuffle(lengths, rng)
    images = np.empty(params.degree, dtype=np.intp)
    start = 0
    for length in lengths:
        block = sigma[start:start + length]
        images[block] = np.roll(block, -1)
        start += length
    return Permutation._wrap(images)


@dataclass(frozen=True)
class GeneratorCheck:
    ok: bool
    missing: tuple[int, ...] = ()
    unexpected: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    @property
    def diagnostic(self) -> str:
        if self.ok:
            return "cycle lengths match the prime list"
        parts = []
        if self.missing:
            parts.append(f"missing cycle lengths {list(self.missing)}")
        if self.unexpected:
            parts.append(f"unexpected cycle lengths {list(self.unexpected)}")
        return "; ".join(parts)


def validate_generator(params: GroupParams, p: Permutation) -> GeneratorCheck:
    if p.degree != params.degree:
        raise DegreeMismatchError(
            f"generator has degree {p.degree}, parameters need {params.degree}"
        )
    have = cycle_decomposition(p).length_multiset()
    want = Counter(params.primes)
    missing = sorted((want - have).elements())
    unexpected = sorted((have - want).elements())
    return GeneratorCheck(not missing and not unexpected, tuple(missing), tuple(unexpected))
