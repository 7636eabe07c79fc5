"""Latency micro-benchmarks for the core operations."""

from __future__ import annotations

import os
import platform
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .group_gen import generate_generator, make_params
from .perm_core import SeededRng, compose, power, random_permutation
from .protocols import dh_keygen, dh_shared_key

__all__ = ["OPERATIONS", "REFERENCE_DH_SESSION_MS", "BenchReport", "run_bench", "hardware_note"]

OPERATIONS = ("dh-session", "power", "compose")

# Mean session time reported for interpreted Mathematica on a 2.20 GHz Core i5.
REFERENCE_DH_SESSION_MS = 93.75


def hardware_note() -> str:
    cpu = platform.processor() or platform.machine()
    return (
        f"{platform.system()} {platform.release()} {cpu}, {os.cpu_count()} cpus, "
        f"python {platform.python_version()}, numpy {np.__version__}"
    )


@dataclass(frozen=True)
class BenchReport:
    operation: str
    iterations: int
    mean_us: float
    p50_us: float
    p99_us: float
    min_us: float
    max_us: float
    hardware: str
    baseline_ms: Optional[float] = None

    @property
    def ratio_to_baseline(self) -> Optional[float]:
        if self.baseline_ms is None:
            return None
        return (self.mean_us / 1000.0) / self.baseline_ms

    CSV_HEADER = "operation,iterations,mean_us,p50_us,p99_us,min_us,max_us,baseline_ms,ratio"

    def to_csv(self) -> str:
        ratio = "" if self.ratio_to_baseline is None else f"{self.ratio_to_baseline:.6f}"
        base = "" if self.baseline_ms is None else f"{self.baseline_ms}"
        row = (
            f"{self.operation},{self.iterations},{self.mean_us:.3f},{self.p50_us:.3f},"
            f"{self.p99_us:.3f},{self.min_us:.3f},{self.max_us:.3f},{base},{ratio}"
        )
        return self.CSV_HEADER + "\n" + row

    def to_text(self) -> str:
        lines = [
            f"{self.operation}: {self.iterations} iterations",
            f"  mean {self.mean_us:.1f} us  p50 {self.p50_us:.1f} us  p99 {self.p99_us:.1f} us",
            f"  min {self.min_us:.1f} us  max {self.max_us:.1f} us",
        ]
        if self.baseline_ms is not None:
            lines.append(
                f"  reference {self.baseline_ms} ms per session; measured mean is "
                f"{self.ratio_to_baseline:.4f}x of it ({1 / self.ratio_to_baseline:.0f}x faster)"
            )
        lines.append(f"  hardware: {self.hardware}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["ratio_to_baseline"] = self.ratio_to_baseline
        return d


def _exponent_with_bits(bits: int, rng: SeededRng) -> int:
    if bits < 1:
        raise ValueError("exponent bits must be >= 1")
    top = 1 << (bits - 1)
    return top | rng.uniform_below(top)


def run_bench(
    operation: str,
    iterations: int,
    *,
    dim: int = 16,
    seed: int = 0,
    exponent_bits: Optional[int] = None,
) -> BenchReport:
    """Time ``iterations`` independent runs of ``operation`` on one thread.

    ``dh-session`` is two key generations plus both shared-key computations.
    ``power`` raises a fixed generator to fresh exponents, either of
    ``exponent_bits`` bits or uniform below the subgroup order.
    """
    if operation not in OPERATIONS:
        raise ValueError(f"unknown operation {operation!r}; choose from {OPERATIONS}")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    params = make_params(dim)
    rng = SeededRng(seed)
    p = generate_generator(params, rng)
    samples = np.empty(iterations, dtype=np.float64)
    clock = time.perf_counter_ns

    if operation == "dh-session":
        for i in range(iterations):
            start = clock()
            alice = dh_keygen(params, p, rng)
            bob = dh_keygen(params, p, rng)
            key_a = dh_shared_key(alice.secret, bob.token)
            key_b = dh_shared_key(bob.secret, alice.token)
            samples[i] = clock() - start
            if key_a != key_b:
                raise AssertionError("shared keys differ")
    elif operation == "power":
        for i in range(iterations):
            if exponent_bits is None:
                e = rng.uniform_below(params.omega)
            else:
                e = _exponent_with_bits(exponent_bits, rng)
            start = clock()
            power(p, e)
            samples[i] = clock() - start
    else:
        x = random_permutation(params.degree, rng)
        y = random_permutation(params.degree, rng)
        for i in range(iterations):
            start = clock()
            compose(x, y)
            samples[i] = clock() - start

    us = samples / 1000.0
    return BenchReport(
        operation=operation,
        iterations=iterations,
        mean_us=float(us.mean()),
        p50_us=float(np.percentile(us, 50)),
        p99_us=float(np.percentile(us, 99)),
        min_us=float(us.min()),
        max_us=float(us.max()),
        hardware=hardware_note(),
        baseline_ms=REFERENCE_DH_SESSION_MS if operation == "dh-session" else None,
    )
