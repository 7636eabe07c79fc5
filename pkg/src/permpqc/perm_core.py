"""Permutation algebra on {1..n}.

Permutations are immutable and stored 0-based in a read-only numpy array;
every public surface (constructor, ``images``, text form) is 1-based.

Products follow the right-to-left convention ``(p * q)(i) == p(q(i))``:
``q`` is applied first. This is the order that reproduces the published
ElGamal public keys, so all golden vectors pin it.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, MutableSequence, Sequence

import numpy as np

__all__ = [
    "PermutationError",
    "InvalidDegreeError",
    "DegreeMismatchError",
    "Permutation",
    "CycleDecomposition",
    "SeededRng",
    "identity",
    "compose",
    "inverse",
    "power",
    "cycle_decomposition",
    "order",
    "random_permutation",
    "shuffle",
]

MASK64 = (1 << 64) - 1

# Flipped on by the test suite: re-validate bijectivity of every result.
DEBUG_CHECKS = False


class PermutationError(ValueError):
    """Raised for malformed permutations."""


class InvalidDegreeError(PermutationError):
    pass


class DegreeMismatchError(PermutationError):
    pass


def _is_bijection(arr: np.ndarray) -> bool:
    n = arr.shape[0]
    if n == 0:
        return False
    seen = np.zeros(n, dtype=bool)
    if arr.min() < 0 or arr.max() >= n:
        return False
    seen[arr] = True
    return bool(seen.all())


class Permutation:
    """A bijection of {1..n}; ``images[i-1]`` is the image of point ``i``."""

    __slots__ = ("_a", "_hash")

    def __init__(self, images: Iterable[int]):
        if isinstance(images, np.ndarray) and images.dtype.kind in "iu":
            values = images.tolist()
        else:
            values = list(images)
        if not all(isinstance(v, (int, np.integer)) and not isinstance(v, bool) for v in values):
            raise PermutationError("images must be integers")
        try:
            arr = np.array(values, dtype=np.intp)
        except OverflowError:
            raise PermutationError("image out of range") from None
        if arr.ndim != 1 or arr.shape[0] == 0:
            raise InvalidDegreeError("a permutation needs degree >= 1")
        arr -= 1
        if not _is_bijection(arr):
            raise PermutationError(
                f"images are not a bijection of 1..{arr.shape[0]}"
            )
        arr.flags.writeable = False
        self._a = arr
        self._hash = None

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "Permutation":
        # Trusted internal constructor: arr is a 0-based bijection we own.
        if DEBUG_CHECKS and not _is_bijection(arr):
            raise AssertionError("internal operation produced a non-bijection")
        obj = cls.__new__(cls)
        arr.flags.writeable = False
        obj._a = arr
        obj._hash = None
        return obj

    @classmethod
    def from_text(cls, text: str) -> "Permutation":
        """Parse whitespace separated 1-based images.

        Braces and commas are ignored so listings can be pasted as printed,
        e.g. ``{3, 378, 273, ...}``.
        """
        cleaned = text.replace(",", " ").replace("{", " ").replace("}", " ")
        tokens = cleaned.split()
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise PermutationError("permutation text must contain integers only") from None
        return cls(values)

    def to_text(self) -> str:
        return " ".join(str(int(x) + 1) for x in self._a)

    @property
    def degree(self) -> int:
        return int(self._a.shape[0])

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(int(x) + 1 for x in self._a)

    @property
    def array(self) -> np.ndarray:
        """Read-only 0-based image array."""
        return self._a

    def __call__(self, point: int) -> int:
        if not 1 <= point <= self.degree:
            raise IndexError(f"point {point} outside 1..{self.degree}")
        return int(self._a[point - 1]) + 1

    def __len__(self) -> int:
        return self.degree

    def __iter__(self):
        return iter(self.images)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._a.tobytes())
        return self._hash

    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        return compose(self, other)

    def __pow__(self, e: int) -> "Permutation":
        if e < 0:
            return power(inverse(self), -e)
        return power(self, e)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._a, np.arange(self.degree)))

    def __repr__(self) -> str:
        imgs = self.images
        if len(imgs) > 12:
            body = ", ".join(map(str, imgs[:10])) + ", ..."
        else:
            body = ", ".join(map(str, imgs))
        return f"Permutation([{body}])"

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class CycleDecomposition:
    """Disjoint cycles in canonical form, fixed points included.

    Each cycle starts at its smallest point and cycles are sorted by that
    point, so ``(c_1, ..., c_k)`` means ``c_1 -> c_2 -> ... -> c_k -> c_1``.
    """

    cycles: tuple[tuple[int, ...], ...]

    @property
    def degree(self) -> int:
        return sum(len(c) for c in self.cycles)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cycles)

    def length_multiset(self) -> Counter:
        return Counter(self.lengths)

    def nontrivial(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c for c in self.cycles if len(c) > 1)

    def to_permutation(self) -> Permutation:
        images = [0] * self.degree
        for cyc in self.cycles:
            for j, point in enumerate(cyc):
                images[point - 1] = cyc[(j + 1) % len(cyc)]
        return Permutation(images)


def _check_degree(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InvalidDegreeError(f"degree must be a positive integer, got {n!r}")


def _check_same_degree(p: Permutation, q: Permutation) -> None:
    if p.degree != q.degree:
        raise DegreeMismatchError(f"degree mismatch: {p.degree} vs {q.degree}")


def identity(n: int) -> Permutation:
    _check_degree(n)
    return Permutation._wrap(np.arange(n, dtype=np.intp))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Group product ``p * q``: apply ``q`` first, then ``p``."""
    _check_same_degree(p, q)
    return Permutation._wrap(p._a[q._a])


def inverse(p: Permutation) -> Permutation:
    out = np.empty_like(p._a)
    out[p._a] = np.arange(p.degree, dtype=np.intp)
    return Permutation._wrap(out)


def _power_array(base: np.ndarray, e: int) -> np.ndarray:
    # Right-to-left binary square and multiply; all factors are powers of
    # base, so they commute and the product order is immaterial.
    result = np.arange(base.shape[0], dtype=np.intp)
    while e:
        if e & 1:
            result = result[base]
        e >>= 1
        if e:
            base = base[base]
    return result


def power(p: Permutation, e: int) -> Permutation:
    """``p`` composed with itself ``e`` times, in O(n log e)."""
    if e < 0:
        raise ValueError("exponent must be non-negative")
    return Permutation._wrap(_power_array(p._a, int(e)))


def cycle_decomposition(p: Permutation) -> CycleDecomposition:
    a = p._a.tolist()
    seen = [False] * len(a)
    cycles = []
    for start in range(len(a)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x + 1)
            x = a[x]
        cycles.append(tuple(cyc))
    return CycleDecomposition(tuple(cycles))


def order(p: Permutation) -> int:
    return math.lcm(*cycle_decomposition(p).lengths)


class SeededRng:
    """SplitMix64 generator with unbiased bounded sampling.

    The stream is fixed bit for bit:

    * ``next_u64``: ``state += 0x9E3779B97F4A7C15``, then the SplitMix64
      finalizer (xor-shift 30, ``* 0xBF58476D1CE4E5B9``, xor-shift 27,
      ``* 0x94D049BB133111EB``, xor-shift 31), all mod 2**64.
    * ``uniform_below(k)``: with ``b = (k - 1).bit_length()``, concatenate
      ``ceil(b / 64)`` words (first word most significant), keep the low
      ``b`` bits, and reject until the value is below ``k``.

    Not safe to share between threads.
    """

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform_below(self, k: int) -> int:
        if k < 1:
            raise ValueError("upper bound must be >= 1")
        if k == 1:
            return 0
        bits = (k - 1).bit_length()
        words = -(-bits // 64)
        mask = (1 << bits) - 1
        while True:
            x = 0
            for _ in range(words):
                x = (x << 64) | self.next_u64()
            x &= mask
            if x < k:
                return x

    def uniform_range(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed interval [lo, hi]."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.uniform_below(hi - lo + 1)


def shuffle(items: MutableSequence, rng: SeededRng) -> None:
    """Durstenfeld's in-place Fisher-Yates shuffle, walking i from n-1 down to 1."""
    for i in range(len(items) - 1, 0, -1):
        j = rng.uniform_below(i + 1)
        items[i], items[j] = items[j], items[i]


def random_permutation(n: int, rng: SeededRng) -> Permutation:
    _check_degree(n)
    arr = list(range(n))
    shuffle(arr, rng)
    return Permutation._wrap(np.array(arr, dtype=np.intp))


def from_cycles(n: int, cycles: Sequence[Sequence[int]]) -> Permutation:
    """Build a degree-``n`` permutation from disjoint 1-based cycles."""
    _check_degree(n)
    images = list(range(1, n + 1))
    for cyc in cycles:
        for j, point in enumerate(cyc):
            images[point - 1] = cyc[(j + 1) % len(cyc)]
    return Permutation(images)
