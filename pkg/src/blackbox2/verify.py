"""Independent brute-force oracles: closure enumeration, order fingerprints,
and reference fingerprints of the expected target groups.

The reference side deliberately avoids the construction pipeline: small
symmetric/alternating groups come from permutations, matrix reference
groups from exhaustive enumeration of all 2x2 matrices over a fresh field,
and element orders on the reference side from repeated multiplication.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

from .blackbox import BlackBox, factorize
from .errors import Overflow
from .ff import ctx_create
from .matgrp import Flavor, Mat2, canonicalize, mat_eq, mat_mul

DEFAULT_CAP = 2_000_000


@dataclass(frozen=True)
class GroupFingerprint:
    order: int
    histogram: tuple  # sorted ((element order, count), ...)

    @classmethod
    def from_counts(cls, counts: dict) -> "GroupFingerprint":
        return cls(order=sum(counts.values()),
                   histogram=tuple(sorted(counts.items())))

    def histogram_dict(self) -> dict:
        return dict(self.histogram)

    def to_json(self) -> dict:
        return {"order": self.order,
                "histogram": {str(k): v for k, v in self.histogram}}

    @classmethod
    def from_json(cls, obj: dict) -> "GroupFingerprint":
        return cls(order=obj["order"],
                   histogram=tuple(sorted((int(k), v) for k, v in
                                          obj["histogram"].items())))


def closure_enumerate(generators: list[Mat2], flavor: Flavor,
                      cap: int = DEFAULT_CAP) -> set[Mat2]:
    """Breadth-first closure under right multiplication, canonical forms."""
    if cap < 1:
        raise Overflow("cap must be >= 1")
    canon = {canonicalize(g, flavor) for g in generators}
    frontier = list(canon)
    while frontier:
        new = []
        for m in frontier:
            for g in generators:
                c = canonicalize(mat_mul(m, g), flavor)
                if c not in canon:
                    canon.add(c)
                    new.append(c)
                    if len(canon) > cap:
                        raise Overflow(f"closure exceeded cap {cap}")
        frontier = new
    return canon


def fingerprint(bb: BlackBox, elements) -> GroupFingerprint:
    """Order histogram of a set already closed under multiplication."""
    counts: dict[int, int] = {}
    for m in elements:
        o = bb.element_order(m)
        counts[o] = counts.get(o, 0) + 1
    return GroupFingerprint.from_counts(counts)


# ---------------------------------------------------------------------------
# reference side
# ---------------------------------------------------------------------------

def _perm_order(perm: tuple) -> int:
    # lcm of cycle lengths
    n = len(perm)
    seen = [False] * n
    order = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        g = _gcd(order, length)
        order = order // g * length
    return order


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _perm_parity(perm: tuple) -> int:
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return inv % 2


@lru_cache(maxsize=None)
def _sym4_fingerprint() -> GroupFingerprint:
    counts: dict[int, int] = {}
    for perm in itertools.permutations(range(4)):
        o = _perm_order(perm)
        counts[o] = counts.get(o, 0) + 1
    return GroupFingerprint.from_counts(counts)


@lru_cache(maxsize=None)
def _alt4_fingerprint() -> GroupFingerprint:
    counts: dict[int, int] = {}
    for perm in itertools.permutations(range(4)):
        if _perm_parity(perm) == 0:
            o = _perm_order(perm)
            counts[o] = counts.get(o, 0) + 1
    return GroupFingerprint.from_counts(counts)


def _all_matrices(flavor: Flavor, p: int, a: int):
    """Every element of the flavor group over a fresh GF(p^a), by exhaustive
    scan of all 2x2 matrices (no generators, no closure)."""
    ctx = ctx_create(p, a, 0)
    one = ctx.one()
    seen = set()
    out = []
    for ea in ctx.elements():
        for eb in ctx.elements():
            for ec in ctx.elements():
                for ed in ctx.elements():
                    det = ctx.sub(ctx.mul(ea, ed), ctx.mul(eb, ec))
                    if flavor is Flavor.PGL2:
                        if not any(det):
                            continue
                    elif det != one:
                        continue
                    m = Mat2(ctx, ea, eb, ec, ed)
                    c = canonicalize(m, flavor)
                    if c not in seen:
                        seen.add(c)
                        out.append(c)
    return ctx, out


def _brute_order(m: Mat2, flavor: Flavor) -> int:
    ident = Mat2(m.ctx, m.ctx.one(), m.ctx.zero(), m.ctx.zero(), m.ctx.one())
    cur = m
    o = 1
    while not mat_eq(cur, ident, flavor):
        cur = mat_mul(cur, m)
        o += 1
    return o


@lru_cache(maxsize=None)
def _matrix_group_fingerprint(flavor: Flavor, p: int, a: int) -> GroupFingerprint:
    _, elems = _all_matrices(flavor, p, a)
    counts: dict[int, int] = {}
    for m in elems:
        o = _brute_order(m, flavor)
        counts[o] = counts.get(o, 0) + 1
    return GroupFingerprint.from_counts(counts)


@lru_cache(maxsize=None)
def _quaternion_normalizer_fingerprint(q: int) -> GroupFingerprint:
    """N(Q8) in SL2(q) by exhaustive search (q = 5 gives the order-24
    group SL2(3), q = 7 the order-48 binary octahedral group)."""
    p = q if q in (5, 7) else None
    assert p is not None
    _, elems = _all_matrices(Flavor.SL2, p, 1)
    order4 = [m for m in elems if _brute_order(m, Flavor.SL2) == 4]
    quat = None
    for u in order4:
        u_inv = mat_mul(mat_mul(u, u), u)  # u^3 = u^-1
        for v in order4:
            if v is u:
                continue
            # quaternion relations: v^-1 u v = u^-1, v^2 = u^2
            v_inv = mat_mul(mat_mul(v, v), v)
            if (mat_mul(mat_mul(v_inv, u), v).entries() == u_inv.entries()
                    and mat_mul(v, v).entries() == mat_mul(u, u).entries()):
                quat = closure_enumerate([u, v], Flavor.SL2, cap=16)
                break
        if quat is not None and len(quat) == 8:
            break
    assert quat is not None and len(quat) == 8
    quat_keys = {m.entries() for m in quat}
    norm = []
    for g in elems:
        g_inv = None
        # brute inverse via order
        o = _brute_order(g, Flavor.SL2)
        g_inv = g
        for _ in range(o - 2):
            g_inv = mat_mul(g_inv, g)
        if o == 1:
            g_inv = g
        conj = {mat_mul(mat_mul(g_inv, m), g).entries() for m in quat}
        if conj == quat_keys:
            norm.append(g)
    counts: dict[int, int] = {}
    for m in norm:
        o = _brute_order(m, Flavor.SL2)
        counts[o] = counts.get(o, 0) + 1
    return GroupFingerprint.from_counts(counts)


_MATRIX_TARGET = re.compile(r"^(PGL2|PSL2|SL2)\((\d+)\)$")


def expected_order(target: str, p: int | None = None,
                   a: int | None = None) -> int:
    """Order of a target group, for cap gating before enumeration."""
    if target == "Sym4":
        return 24
    if target == "Alt4":
        return 12
    if target == "SL2(3)-normalizer(order24)":
        return 24
    if target == "normalizer(order48)":
        return 48
    m = _MATRIX_TARGET.match(target)
    if m:
        flavor, n = m.group(1), int(m.group(2))
        order = n * (n * n - 1)
        return order // 2 if flavor == "PSL2" else order
    raise ValueError(f"unknown target {target!r}")


def reference_fingerprint(target: str, p: int | None = None,
                          a: int | None = None) -> GroupFingerprint:
    """Fingerprint of the expected isomorphism type, built independently."""
    if target == "Sym4":
        return _sym4_fingerprint()
    if target == "Alt4":
        return _alt4_fingerprint()
    if target == "SL2(3)-normalizer(order24)":
        return _quaternion_normalizer_fingerprint(5)
    if target == "normalizer(order48)":
        return _quaternion_normalizer_fingerprint(7)
    m = _MATRIX_TARGET.match(target)
    if m:
        flavor = Flavor(m.group(1).lower())
        n = int(m.group(2))
        if p is None or a is None or p ** a != n:
            fac = factorize(n)
            assert len(fac) == 1, f"target field size {n} is not a prime power"
            p, a = next(iter(fac.items()))
        return _matrix_group_fingerprint(flavor, p, a)
    raise ValueError(f"unknown target {target!r}")


def assert_type(observed: GroupFingerprint, expected: GroupFingerprint) -> bool:
    """Order + full order-histogram match (separates every in-scope target
    pair of equal order; checked as a test-suite property)."""
    return (observed.order == expected.order
            and observed.histogram == expected.histogram)
