"""Discrete-log oracles and transcript audits.

``dlp_cycle_attack`` recovers ``a`` from ``p^a`` in time linear in the degree:
on each cycle of ``p`` the target acts as a rotation, the rotation amount is
``a`` modulo the cycle length, and the residues recombine by CRT. This is a
property of generators whose cycle lengths are coprime. It says nothing
about the double coset or decomposition maps used by the ElGamal variants
when ``g`` lies outside ``<p>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .group_gen import GroupParams, validate_generator
from .perm_core import (
    DegreeMismatchError,
    Permutation,
    compose,
    cycle_decomposition,
    inverse,
    order,
    power,
)

__all__ = [
    "NotInSubgroupError",
    "UnsupportedStructureError",
    "NonCoprimeModuliError",
    "DlpSolution",
    "dlp_brute_force",
    "dlp_cycle_attack",
    "crt_combine",
    "detect_convention",
    "DHTranscript",
    "ElGamalTranscript",
    "AuditCheck",
    "AuditReport",
    "audit_session",
]


class NotInSubgroupError(ValueError):
    pass


class UnsupportedStructureError(ValueError):
    pass


class NonCoprimeModuliError(ValueError):
    pass


@dataclass(frozen=True)
class DlpSolution:
    exponent: int
    modulus: int
    residues: tuple[tuple[int, int], ...]


def dlp_brute_force(p: Permutation, target: Permutation, limit: int) -> Optional[int]:
    """Smallest ``e`` in ``[0, limit)`` with ``p^e == target``, else None."""
    if p.degree != target.degree:
        raise DegreeMismatchError("degree mismatch")
    step = p.array
    want = target.array
    cur = np.arange(p.degree, dtype=np.intp)
    for e in range(limit):
        if np.array_equal(cur, want):
            return e
        cur = cur[step]
    return None


def crt_combine(residues: Sequence[tuple[int, int]]) -> int:
    """Unique ``x < prod(moduli)`` with ``x = r_i (mod m_i)`` for every pair."""
    x, modulus = 0, 1
    for r, m in residues:
        if m < 1:
            raise ValueError("moduli must be positive")
        if math.gcd(modulus, m) != 1:
            raise NonCoprimeModuliError(f"modulus {m} shares a factor with {modulus}")
        x += modulus * ((r - x) * pow(modulus, -1, m) % m)
        modulus *= m
    return x % modulus


def dlp_cycle_attack(p: Permutation, target: Permutation) -> DlpSolution:
    if p.degree != target.degree:
        raise DegreeMismatchError("degree mismatch")
    cycles = cycle_decomposition(p).cycles
    lengths = [len(c) for c in cycles if len(c) > 1]
    for i, a in enumerate(lengths):
        for b in lengths[i + 1:]:
            if math.gcd(a, b) != 1:
                raise UnsupportedStructureError(
                    f"cycle lengths {a} and {b} are not coprime"
                )

    # position of every point along its own cycle
    where = [0] * p.degree
    for cyc in cycles:
        for j, point in enumerate(cyc):
            where[point - 1] = j
    tgt = target.array
    residues = []
    for cyc in cycles:
        image = int(tgt[cyc[0] - 1]) + 1
        j = where[image - 1]
        if j >= len(cyc) or cyc[j] != image:
            raise NotInSubgroupError(
                f"target moves point {cyc[0]} off its cycle under p"
            )
        residues.append((j, len(cyc)))

    exponent = crt_combine(residues)
    if power(p, exponent) != target:
        raise NotInSubgroupError("target is not a power of p")
    return DlpSolution(exponent, math.prod(lengths), tuple(residues))


def detect_convention(
    p: Permutation, g: Permutation, m: int, n: int, public: Permutation
) -> Optional[str]:
    """Which product order turns ``p^m g p^n`` into ``public``.

    Returns ``"right-to-left"`` when ``(x y)(i) = x(y(i))`` reproduces it,
    ``"left-to-right"`` when ``(x y)(i) = y(x(i))`` does, else None.
    """
    pm, pn = power(p, m), power(p, n)
    if compose(compose(pm, g), pn) == public:
        return "right-to-left"
    if compose(compose(pn, g), pm) == public:
        return "left-to-right"
    return None


# -- audits ------------------------------------------------------------------

@dataclass(frozen=True)
class DHTranscript:
    token_a: Permutation
    token_b: Permutation
    key_a: Optional[Permutation] = None
    key_b: Optional[Permutation] = None
    secret_a: Optional[int] = None
    secret_b: Optional[int] = None
    cycle_lengths: Optional[tuple[int, ...]] = None
    order: Optional[int] = None


@dataclass(frozen=True)
class ElGamalTranscript:
    """Published values of a DCP ElGamal run.

    ``listings`` holds optional intermediate values keyed by name
    (``pm``, ``pn``, ``pr``, ``ps``, ``k``); each is checked against its
    claimed definition.
    """

    g: Permutation
    m: int
    n: int
    r: int
    s: int
    t: int
    public_a: Permutation
    public_b: Permutation
    msg: Permutation
    y1: Permutation
    y2: Permutation
    recovered: Optional[Permutation] = None
    listings: dict = field(default_factory=dict)
    cycle_lengths: Optional[tuple[int, ...]] = None
    order: Optional[int] = None
    g_cycle_lengths: Optional[tuple[int, ...]] = None
    g_order: Optional[int] = None


@dataclass(frozen=True)
class AuditCheck:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class AuditReport:
    kind: str
    checks: tuple[AuditCheck, ...]

    @property
    def consistent(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[AuditCheck]:
        return [c for c in self.checks if not c.ok]

    def check(self, name: str) -> AuditCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "consistent": self.consistent,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
        }

    def to_text(self) -> str:
        lines = [f"audit: {self.kind}"]
        for c in self.checks:
            mark = "ok  " if c.ok else "FAIL"
            lines.append(f"  [{mark}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        lines.append(f"  consistent: {'yes' if self.consistent else 'no'}")
        if not self.consistent:
            lines.append("  not reproducible: " + ", ".join(c.name for c in self.failures))
        return "\n".join(lines)


def _generator_checks(params, p, published_lengths, published_order, label="p"):
    checks = []
    gc = validate_generator(params, p)
    checks.append(AuditCheck(f"{label} cycle type", bool(gc), gc.diagnostic))
    if published_lengths is not None:
        have = sorted(len(c) for c in cycle_decomposition(p).nontrivial())
        ok = have == sorted(published_lengths)
        checks.append(AuditCheck(
            f"{label} published cycle lengths", ok,
            "multiset matches" if ok else f"computed {have}",
        ))
    ord_p = order(p)
    if published_order is not None:
        checks.append(AuditCheck(
            f"{label} published order", ord_p == published_order, f"order {ord_p}",
        ))
    return checks


def _recover(p: Permutation, target: Permutation):
    try:
        return dlp_cycle_attack(p, target).exponent
    except (NotInSubgroupError, UnsupportedStructureError):
        return None


def _audit_dh(params: GroupParams, p: Permutation, tr: DHTranscript) -> AuditReport:
    checks = _generator_checks(params, p, tr.cycle_lengths, tr.order)
    omega = params.omega
    recovered = {}
    for side, token, stated in (("a", tr.token_a, tr.secret_a), ("b", tr.token_b, tr.secret_b)):
        e = _recover(p, token)
        recovered[side] = e if e is not None else stated
        if e is None:
            checks.append(AuditCheck(f"token_{side} in <p>", False, "cycle attack found no exponent"))
            continue
        checks.append(AuditCheck(f"token_{side} in <p>", True, f"recovered exponent {e}"))
        if stated is not None:
            ok = e == stated % omega
            checks.append(AuditCheck(
                f"secret_{side} matches token", ok,
                "stated secret reproduces the token" if ok else f"token implies {e}, stated {stated}",
            ))
    a, b = recovered["a"], recovered["b"]
    key_a = power(tr.token_b, a) if a is not None else None
    key_b = power(tr.token_a, b) if b is not None else None
    if tr.key_a is not None:
        checks.append(AuditCheck("key_a == token_b^a", key_a is not None and key_a == tr.key_a))
    if tr.key_b is not None:
        checks.append(AuditCheck("key_b == token_a^b", key_b is not None and key_b == tr.key_b))
    if tr.key_a is not None and tr.key_b is not None:
        checks.append(AuditCheck("key_a == key_b", tr.key_a == tr.key_b))
    else:
        checks.append(AuditCheck("key_a == key_b", key_a is not None and key_a == key_b))
    checks.append(AuditCheck(
        "attack cost", True,
        f"brute force over Z_omega needs up to {omega} (~2^{math.log2(omega):.1f}) trials; "
        f"cycle attack walks {params.degree} points",
    ))
    return AuditReport("diffie-hellman", tuple(checks))


def _audit_elgamal(params: GroupParams, p: Permutation, tr: ElGamalTranscript) -> AuditReport:
    checks = _generator_checks(params, p, tr.cycle_lengths, tr.order)
    g = tr.g
    if tr.g_cycle_lengths is not None or tr.g_order is not None:
        cd = cycle_decomposition(g)
        have = sorted(len(c) for c in cd.nontrivial())
        fixed = sum(1 for c in cd.cycles if len(c) == 1)
        if tr.g_cycle_lengths is not None:
            ok = have == sorted(tr.g_cycle_lengths)
            checks.append(AuditCheck(
                "g published cycle lengths", ok,
                f"non-trivial cycles match, {fixed} fixed point(s) not listed" if ok
                else f"computed {have}",
            ))
        if tr.g_order is not None:
            og = order(g)
            checks.append(AuditCheck("g published order", og == tr.g_order, f"order {og}"))

    for label, public, (e1, e2) in (("P_A", tr.public_a, (tr.m, tr.n)), ("P_B", tr.public_b, (tr.r, tr.s))):
        conv = detect_convention(p, g, e1, e2, public)
        checks.append(AuditCheck(
            f"{label} == p^x g p^y", conv == "right-to-left",
            f"reproduced under {conv} composition" if conv else "not reproduced under either order",
        ))

    exps = {"m": tr.m, "n": tr.n, "r": tr.r, "s": tr.s, "t": tr.t}
    claimed = {"pm": "m", "pn": "n", "pr": "r", "ps": "s", "k": "t"}
    seen: dict[Permutation, str] = {}
    for name, listing in tr.listings.items():
        sym = claimed[name]
        ok = listing == power(p, exps[sym])
        if ok:
            detail = f"equals p^{sym}"
        else:
            hints = []
            for other, val in exps.items():
                if listing == power(g, val):
                    hints.append(f"equals g^{other} instead of p^{sym}")
            if _recover(p, listing) is None:
                hints.append("not in <p>")
            detail = "; ".join(hints) or "unexplained"
        if listing in seen:
            detail += f"; identical to listing {seen[listing]}"
        else:
            seen[listing] = name
        checks.append(AuditCheck(f"listing {name}", ok, detail))
        if name == "k":
            t = _recover(p, listing)
            checks.append(AuditCheck(
                "session exponent from k", t is not None and t == tr.t % params.omega,
                f"cycle attack recovers t = {t}",
            ))

    k = power(p, tr.t)
    km, kn = power(k, tr.m), power(k, tr.n)
    checks.append(AuditCheck("y1 == k^m g k^n", compose(compose(km, g), kn) == tr.y1))
    checks.append(AuditCheck(
        "y2 == msg (k^m P_B k^n)",
        compose(tr.msg, compose(compose(km, tr.public_b), kn)) == tr.y2,
    ))
    mask = compose(compose(power(p, tr.r), tr.y1), power(p, tr.s))
    decrypted = compose(tr.y2, inverse(mask))
    checks.append(AuditCheck(
        "published (y1, y2) decrypt to msg", decrypted == tr.msg,
        "y2 (p^r y1 p^s)^-1 with the receiver key",
    ))
    if tr.recovered is not None:
        checks.append(AuditCheck("recovered listing == decryption", tr.recovered == decrypted))
        checks.append(AuditCheck("recovered listing == msg", tr.recovered == tr.msg))
    return AuditReport("elgamal-dcp", tuple(checks))


def audit_session(params: GroupParams, p: Permutation, transcript) -> AuditReport:
    """Recompute every published value and report which ones agree.

    Failures are reported, never raised.
    """
    if isinstance(transcript, DHTranscript):
        return _audit_dh(params, p, transcript)
    if isinstance(transcript, ElGamalTranscript):
        return _audit_elgamal(params, p, transcript)
    raise TypeError(f"unsupported transcript type {type(transcript).__name__}")
