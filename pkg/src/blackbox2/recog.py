"""Las Vegas constructions in black-box PGL2/PSL2/SL2(p^k).

Pipeline: field-size determination, right-type involutions, centralizer
sampling from involution commutators, torus generators, the order-3 element
permuting a commuting involution triple, and assembly of the Sym4 / Alt4 /
quaternion-normalizer and subfield subgroups.

Every construction verifies its defining relations before returning: the
pipeline either returns a checked result or raises RetryBudgetExhausted.
For SL2 the conjugation identities are checked in the central quotient
(pseudo-involutions square to -I); order checks on torus elements stay
literal so that s and r get their exact advertised orders.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum

from .blackbox import BlackBox, factorize
from .errors import (DivisorUnavailable, ExceedsKMax, InvalidSubfieldDegree,
                     RetryBudgetExhausted, Undecided, UnsupportedFlavor)
from .matgrp import Flavor, Mat2, mat_neg

RETRY_BUDGET_ENV = "BLACKBOX2_RETRY_BUDGET"
DEFAULT_RETRY_BUDGET = 64
TYPE_TEST_SAMPLES = 40


def retry_budget() -> int:
    raw = os.environ.get(RETRY_BUDGET_ENV)
    if raw:
        return max(int(raw), 1)
    return DEFAULT_RETRY_BUDGET


class TypeTag(Enum):
    PLUS = "+"
    MINUS = "-"
    UNIQUE = "unique"    # PSL2: single involution class
    PSEUDO = "pseudo"    # SL2: square is the central involution


@dataclass
class RightInvolution:
    i: Mat2
    tag: TypeTag
    torus_order: int


@dataclass
class Order3Witness:
    """Transcript of the order-3 element construction."""
    g: Mat2
    h1: Mat2
    n1: Mat2
    h2: Mat2
    n2: Mat2
    x: Mat2


@dataclass
class ConstructionResult:
    flavor: Flavor
    p: int
    k: int
    target: str
    generators: list[Mat2]
    i: Mat2
    j: Mat2
    k_inv: Mat2              # ij
    x: Mat2
    witness: Order3Witness
    torus_order: int | None
    s: Mat2 | None = None
    r: Mat2 | None = None
    t: Mat2 | None = None
    a: int | None = None
    counters: dict = field(default_factory=dict)
    seed: int | None = None
    retries: int = 0
    stage_counters: dict = field(default_factory=dict)


class _Stages:
    """Per-stage counter deltas and retry tally for one construction run."""

    def __init__(self, bb: BlackBox):
        self.bb = bb
        self.retries = 0
        self.stages: dict[str, dict] = {}
        self._mark = bb.counters.snapshot()

    def close(self, name: str) -> None:
        now = self.bb.counters.snapshot()
        self.stages[name] = {k: now[k] - self._mark[k] for k in now}
        self._mark = now


# ---------------------------------------------------------------------------
# Step 1: field size
# ---------------------------------------------------------------------------

def find_field_size(bb: BlackBox, p: int, k_max: int,
                    sample_budget: int) -> int:
    """Recover the extension degree from sampled element orders.

    Returns the minimal l <= k_max such that every sampled g satisfies
    g^(p(p^(2l)-1)) = 1.  A sample containing elements of orders q-1 and
    q+1 excludes every smaller l.
    """
    samples = [bb.random() for _ in range(sample_budget)]
    for ell in range(1, k_max + 1):
        e = p * (p ** (2 * ell) - 1)
        if all(bb.eq(bb.pow(g, e), bb.identity()) for g in samples):
            return ell
    raise ExceedsKMax(f"no extension degree <= {k_max} fits the sample")


def default_sample_budget(p: int, k_max: int) -> int:
    import math
    return 16 * math.ceil(math.log(math.log(p ** k_max)) + 1)


# ---------------------------------------------------------------------------
# Step 2: involutions, centralizers, tori
# ---------------------------------------------------------------------------

def make_involution(bb: BlackBox, budget: int | None = None) -> Mat2:
    """Involution (PGL2/PSL2) or pseudo-involution (SL2) from random elements.

    Squares g^u until the identity appears; the last non-identity term is
    the involution.  Random elements have even order with probability at
    least 1/4, so few retries are expected.
    """
    budget = budget or retry_budget()
    ident = bb.identity()
    for _ in range(budget):
        g = bb.random()
        a = bb.pow(g, bb.u)
        if bb.flavor is Flavor.SL2:
            # walk the literal chain; the pseudo-involution is the entry
            # whose square is the central involution -I
            neg_ident = mat_neg(ident)
            cur = a
            for _ in range(bb.e2 + 1):
                if bb.eq(cur, ident):
                    break
                sq = bb.mul(cur, cur)
                if bb.eq(sq, neg_ident):
                    return cur
                cur = sq
            continue  # chain bottomed at -I or started at identity
        if bb.is_identity(a):
            continue  # odd order
        prev, cur = None, a
        for _ in range(bb.e2 + 1):
            if bb.is_identity(cur):
                break
            prev, cur = cur, bb.mul(cur, cur)
        if prev is not None and bb.is_identity(cur):
            return prev
    raise RetryBudgetExhausted("make_involution: no even-order element found")


def bray_centralizer_sample(bb: BlackBox, i: Mat2):
    """One centralizer sample from c = i^-1 * i^g.

    Returns (z, "odd") with z uniform over C(i) when c has odd order,
    (w, "even") with w a non-uniform commuting involution when even, or
    None on a degenerate draw.  For SL2 "centralizing" means modulo the
    center, i.e. z^-1 i z in {i, -i}.
    """
    ident = bb.identity()
    g = bb.random()
    c = bb.mul(bb.inv(i), bb.conj(i, g))
    if bb.eq_mod_center(c, ident):
        return (g, "odd")
    cu = bb.pow(c, bb.u)
    if bb.eq_mod_center(cu, ident):
        n = bb.pow(c, (bb.u + 1) // 2)
        z = bb.mul(g, bb.inv(n))
        if bb.eq_mod_center(bb.conj(i, z), i):
            return (z, "odd")
        return None
    # even order: square down to a commuting involution
    cur = cu
    w = None
    for _ in range(bb.e2 + 1):
        if bb.eq_mod_center(cur, ident):
            break
        w, cur = cur, bb.mul(cur, cur)
    if w is None or not bb.eq_mod_center(cur, ident):
        return None
    if bb.eq_mod_center(bb.conj(i, w), i):
        return (w, "even")
    return None


def involution_type(bb: BlackBox, i: Mat2, q: int,
                    samples: int = TYPE_TEST_SAMPLES) -> TypeTag:
    """Classify an involution by the order profile of its centralizer.

    A centralizer element z with z^2 != 1 and z^(q+1) != 1 certifies
    +-type (torus of order q-1); with z^(q-1) != 1, --type.  PSL2 has a
    single class; every SL2 pseudo-involution lies in the 4-divisible
    torus, so neither needs the test.
    """
    if bb.flavor is Flavor.PSL2:
        return TypeTag.UNIQUE
    if bb.flavor is Flavor.SL2:
        return TypeTag.PSEUDO
    ident = bb.identity()
    for _ in range(samples):
        smp = bray_centralizer_sample(bb, i)
        if smp is None or smp[1] != "odd":
            continue
        z = smp[0]
        if bb.eq(bb.mul(z, z), ident):
            continue
        if not bb.eq(bb.pow(z, q + 1), ident):
            return TypeTag.PLUS
        if not bb.eq(bb.pow(z, q - 1), ident):
            return TypeTag.MINUS
    raise Undecided(f"no type certificate in {samples} centralizer samples")


def right_type_torus_order(flavor: Flavor, q: int) -> int:
    """Torus order |T| in C(i) for a right-type involution."""
    if flavor is Flavor.PSL2:
        return (q - 1) // 2 if q % 4 == 1 else (q + 1) // 2
    return q - 1 if q % 4 == 1 else q + 1


def right_type_involution(bb: BlackBox, q: int,
                          stats: _Stages | None = None) -> RightInvolution:
    """Loop make_involution + involution_type until the right class shows up."""
    budget = retry_budget()
    torus = right_type_torus_order(bb.flavor, q)
    if bb.flavor in (Flavor.PSL2, Flavor.SL2):
        # single class (PSL2) / all pseudo-involutions right type (SL2)
        i = make_involution(bb)
        tag = TypeTag.UNIQUE if bb.flavor is Flavor.PSL2 else TypeTag.PSEUDO
        return RightInvolution(i, tag, torus)
    want = TypeTag.PLUS if q % 4 == 1 else TypeTag.MINUS
    for _ in range(budget):
        i = make_involution(bb)
        try:
            tag = involution_type(bb, i, q)
        except Undecided:
            if stats:
                stats.retries += 1
            continue
        if tag is want:
            return RightInvolution(i, tag, torus)
        if stats:
            stats.retries += 1
    raise RetryBudgetExhausted("right_type_involution: budget exhausted")


def _has_exact_order(bb: BlackBox, y: Mat2, d: int) -> bool:
    """Literal for SL2, canonical-form equality otherwise."""
    ident = bb.identity()
    if not bb.eq(bb.pow(y, d), ident):
        return False
    for rho in factorize(d):
        if bb.eq(bb.pow(y, d // rho), ident):
            return False
    return True


def torus_generator(bb: BlackBox, inv: RightInvolution,
                    required_orders, stats: _Stages | None = None) -> Mat2:
    """Torus element whose relevant power orders are verified exactly.

    Accepts t with t^2 != 1, t^(|T|/2) != 1, t^|T| = 1 and, for each
    required d, t^(|T|/d) of exact order d.  The paper's t^2/t^(|T|/2)
    test alone does not pin the odd part of |t|; the exact-order checks
    on the powers actually used guarantee |s| and |r| downstream.  For
    SL2 additionally t^(|T|/4) must be +-i, which rules out order-4
    lifts of inverting involutions masquerading as torus elements.
    """
    budget = retry_budget()
    T = inv.torus_order
    ident = bb.identity()
    required = sorted(set(required_orders))
    for _ in range(budget):
        smp = bray_centralizer_sample(bb, inv.i)
        if smp is None or smp[1] != "odd":
            if stats:
                stats.retries += 1
            continue
        t = smp[0]
        if bb.eq(bb.mul(t, t), ident):
            ok = False
        elif not bb.eq(bb.pow(t, T), ident):
            ok = False
        elif T > 2 and bb.eq(bb.pow(t, T // 2), ident):
            ok = False
        else:
            ok = all(_has_exact_order(bb, bb.pow(t, T // d), d)
                     for d in required if T % d == 0)
            if ok and bb.flavor is Flavor.SL2:
                ok = bb.eq_mod_center(bb.pow(t, T // 4), inv.i)
        if ok:
            return t
        if stats:
            stats.retries += 1
    raise RetryBudgetExhausted("torus_generator: budget exhausted")


def inverting_involution(bb: BlackBox, inv: RightInvolution, t: Mat2,
                         stats: _Stages | None = None) -> Mat2:
    """Right-type involution j in C(i) inverting the torus; <i,j> is a
    Klein four-group (PGL2/PSL2) or quaternion group (SL2)."""
    budget = retry_budget()
    ident = bb.identity()
    q_tag = inv.tag
    t_inv = bb.inv(t)
    for _ in range(budget):
        smp = bray_centralizer_sample(bb, inv.i)
        if smp is None:
            if stats:
                stats.retries += 1
            continue
        w = smp[0]
        if bb.flavor is Flavor.SL2:
            neg_ident = mat_neg(ident)
            if (bb.eq(bb.mul(w, w), neg_ident)
                    and not bb.eq_mod_center(w, inv.i)
                    and bb.eq(bb.conj(inv.i, w), bb.inv(inv.i))
                    and bb.eq(bb.conj(t, w), t_inv)):
                return w
        else:
            if (bb.eq(bb.mul(w, w), ident)
                    and not bb.is_identity(w)
                    and not bb.eq(w, inv.i)
                    and bb.eq(bb.conj(t, w), t_inv)):
                if bb.flavor is Flavor.PGL2:
                    try:
                        if involution_type(bb, w, bb.ctx.q) is not q_tag:
                            if stats:
                                stats.retries += 1
                            continue
                    except Undecided:
                        if stats:
                            stats.retries += 1
                        continue
                return w
        if stats:
            stats.retries += 1
    raise RetryBudgetExhausted("inverting_involution: budget exhausted")


def centralizer_involution(bb: BlackBox, i: Mat2,
                           stats: _Stages | None = None) -> Mat2:
    """Any involution in C(i) distinct from i (PSL2 Alt4 branch, where the
    torus may be too small to carry an order-4 element)."""
    budget = retry_budget()
    ident = bb.identity()
    for _ in range(budget):
        smp = bray_centralizer_sample(bb, i)
        if smp is None:
            if stats:
                stats.retries += 1
            continue
        w = smp[0]
        if (bb.eq(bb.mul(w, w), ident) and not bb.is_identity(w)
                and not bb.eq(w, i)):
            return w
        if stats:
            stats.retries += 1
    raise RetryBudgetExhausted("centralizer_involution: budget exhausted")


def sl2_quaternion_partner(bb: BlackBox, i: Mat2,
                           stats: _Stages | None = None) -> Mat2:
    """Pseudo-involution j with j^2 = i^2 = -I and i^j = i^-1, so that
    <i,j> is a quaternion group.  Torus-free (used when q = +-3 mod 8)."""
    budget = retry_budget()
    neg_ident = mat_neg(bb.identity())
    for _ in range(budget):
        smp = bray_centralizer_sample(bb, i)
        if smp is None:
            if stats:
                stats.retries += 1
            continue
        w = smp[0]
        if (bb.eq(bb.mul(w, w), neg_ident)
                and not bb.eq_mod_center(w, i)
                and bb.eq(bb.conj(i, w), bb.inv(i))):
            return w
        if stats:
            stats.retries += 1
    raise RetryBudgetExhausted("sl2_quaternion_partner: budget exhausted")


# ---------------------------------------------------------------------------
# Step 3: the order-3 element
# ---------------------------------------------------------------------------

def _odd_sqrt_mod_center(bb: BlackBox, h: Mat2) -> Mat2 | None:
    """odd_order_sqrt against the flavor's working equality (central
    quotient for SL2, plain otherwise)."""
    if not bb.eq_mod_center(bb.pow(h, bb.u), bb.identity()):
        return None
    return bb.pow(h, (bb.u + 1) // 2)


def order3_element(bb: BlackBox, i: Mat2, j: Mat2,
                   stats: _Stages | None = None) -> Order3Witness:
    """Element x of order 3 with k^x = j, j^x = i, i^x = k for k = ij.

    Draws g until both h1 = i*j^g and h2 = j*k^(g n1^-1) have odd order,
    then verifies the full relation set and retries on any degenerate
    draw.  Given h1 odd, h2 = j * k^(g n1^-1) lies in the dihedral
    centralizer C(i), whose torus has only oddpart(|T|) odd-order
    elements; the per-draw success rate is roughly 0.7 * oddpart(|T|)/|T|,
    so the draw budget scales with the 2-part of |T| to keep the failure
    probability negligible at large even torus orders.
    """
    torus = right_type_torus_order(bb.flavor, bb.ctx.q)
    two_part = torus & -torus
    budget = retry_budget() * min(two_part, 1024)
    k = bb.mul(i, j)
    ident = bb.identity()
    eqf = bb.eq_mod_center
    gens = bb.generators
    ng = len(gens)
    g = bb.random()
    for attempt in range(budget):
        if attempt:
            # retries recycle the oracle draw: a two-sided generator walk
            # re-randomizes g at multiplication cost, with a fresh draw
            # mixed in every 8th attempt, so the random-element count per
            # stage stays bounded while the success event still varies
            if attempt % 8 == 0:
                g = bb.mul(g, bb.random())
            else:
                g = bb.mul(gens[attempt % ng],
                           bb.mul(g, gens[(3 * attempt + 1) % ng]))
        h1 = bb.mul(i, bb.conj(j, g))
        n1 = _odd_sqrt_mod_center(bb, h1)
        if n1 is None:
            if stats:
                stats.retries += 1
            continue
        gn1 = bb.mul(g, bb.inv(n1))
        s_prime = bb.conj(k, gn1)
        h2 = bb.mul(j, s_prime)
        n2 = _odd_sqrt_mod_center(bb, h2)
        if n2 is None:
            if stats:
                stats.retries += 1
            continue
        x = bb.mul(gn1, bb.inv(n2))
        if (not eqf(x, ident)
                and eqf(bb.pow(x, 3), ident)
                and eqf(bb.conj(k, x), j)
                and eqf(bb.conj(j, x), i)
                and eqf(bb.conj(i, x), k)):
            return Order3Witness(g=g, h1=h1, n1=n1, h2=h2, n2=n2, x=x)
        if stats:
            stats.retries += 1
    raise RetryBudgetExhausted("order3_element: budget exhausted")


def odd_odd_fraction(bb: BlackBox, i: Mat2, j: Mat2, trials: int) -> float:
    """Fraction of sampled g for which both involution products
    h1 = i * j^g and h2 = j * k^g have odd order.

    This is the reduced event from the probability bound (products of
    random conjugate right-type involutions), which is what the
    1/2 - 1/2q estimate actually covers.  The sequential Step-3 event,
    with h2 built from g*n1^-1, concentrates h2 inside the dihedral
    centralizer C(i) and its odd-order fraction there can be far smaller;
    the pipeline compensates with the adaptive budget in order3_element."""
    k = bb.mul(i, j)
    hits = 0
    for _ in range(trials):
        g = bb.random()
        h1 = bb.mul(i, bb.conj(j, g))
        if _odd_sqrt_mod_center(bb, h1) is None:
            continue
        h2 = bb.mul(j, bb.conj(k, g))
        if _odd_sqrt_mod_center(bb, h2) is not None:
            hits += 1
    return hits / trials


# ---------------------------------------------------------------------------
# Steps 4-5: assembly
# ---------------------------------------------------------------------------

def _sym4_core(bb: BlackBox, q: int, required, stats: _Stages):
    """Shared Steps 2-3: right involution, torus element, inverting
    involution, order-3 witness."""
    inv = right_type_involution(bb, q, stats)
    stats.close("involution")
    t = torus_generator(bb, inv, required, stats)
    stats.close("torus")
    j = inverting_involution(bb, inv, t, stats)
    stats.close("inverting")
    wit = order3_element(bb, inv.i, j, stats)
    stats.close("order3")
    return inv, t, j, wit


def construct_sym4(bb: BlackBox, p: int, k: int) -> ConstructionResult:
    """Theorem-level construction: Sym4 for PGL2; Sym4 or Alt4 for PSL2
    depending on q mod 8.  SL2 callers use construct_sl2_normalizer."""
    if bb.flavor is Flavor.SL2:
        raise UnsupportedFlavor("use construct_sl2_normalizer for SL2")
    q = p ** k
    stats = _Stages(bb)
    alt4 = bb.flavor is Flavor.PSL2 and q % 8 in (3, 5)
    if alt4:
        inv = right_type_involution(bb, q, stats)
        stats.close("involution")
        j = centralizer_involution(bb, inv.i, stats)
        stats.close("inverting")
        wit = order3_element(bb, inv.i, j, stats)
        stats.close("order3")
        res = ConstructionResult(
            flavor=bb.flavor, p=p, k=k, target="Alt4",
            generators=[inv.i, j, wit.x], i=inv.i, j=j,
            k_inv=bb.mul(inv.i, j), x=wit.x, witness=wit,
            torus_order=inv.torus_order, seed=bb.seed)
    else:
        inv, t, j, wit = _sym4_core(bb, q, {4}, stats)
        s = bb.pow(t, inv.torus_order // 4)
        if not (_has_exact_order(bb, s, 4)
                and bb.eq(bb.mul(s, s), inv.i)):
            raise RetryBudgetExhausted("construct_sym4: s postcondition failed")
        stats.close("assemble")
        res = ConstructionResult(
            flavor=bb.flavor, p=p, k=k, target="Sym4",
            generators=[s, wit.x], i=inv.i, j=j, k_inv=bb.mul(inv.i, j),
            x=wit.x, witness=wit, torus_order=inv.torus_order, s=s, t=t,
            seed=bb.seed)
    res.retries = stats.retries
    res.stage_counters = stats.stages
    res.counters = bb.counters.snapshot()
    return res


def construct_sl2_normalizer(bb: BlackBox, p: int, k: int) -> ConstructionResult:
    """Normalizer of a quaternion group V = <i,j> in SL2(q): <i,j,x> of
    order 24 when q = +-3 mod 8, <i,j,s,x> of order 48 otherwise (s of
    order 8 in C(i))."""
    if bb.flavor is not Flavor.SL2:
        raise UnsupportedFlavor("construct_sl2_normalizer needs SL2 flavor")
    q = p ** k
    stats = _Stages(bb)
    inv = right_type_involution(bb, q, stats)
    stats.close("involution")
    if q % 8 in (1, 7):
        t = torus_generator(bb, inv, {8}, stats)
        stats.close("torus")
        j = inverting_involution(bb, inv, t, stats)
        stats.close("inverting")
        wit = order3_element(bb, inv.i, j, stats)
        stats.close("order3")
        s = bb.pow(t, inv.torus_order // 8)
        if not (_has_exact_order(bb, s, 8)
                and bb.eq_mod_center(bb.mul(s, s), inv.i)):
            raise RetryBudgetExhausted("sl2 normalizer: s postcondition failed")
        stats.close("assemble")
        res = ConstructionResult(
            flavor=bb.flavor, p=p, k=k, target="normalizer(order48)",
            generators=[inv.i, j, s, wit.x], i=inv.i, j=j,
            k_inv=bb.mul(inv.i, j), x=wit.x, witness=wit,
            torus_order=inv.torus_order, s=s, t=t, seed=bb.seed)
    else:
        j = sl2_quaternion_partner(bb, inv.i, stats)
        stats.close("inverting")
        wit = order3_element(bb, inv.i, j, stats)
        stats.close("order3")
        res = ConstructionResult(
            flavor=bb.flavor, p=p, k=k, target="SL2(3)-normalizer(order24)",
            generators=[inv.i, j, wit.x], i=inv.i, j=j,
            k_inv=bb.mul(inv.i, j), x=wit.x, witness=wit,
            torus_order=inv.torus_order, seed=bb.seed)
    res.retries = stats.retries
    res.stage_counters = stats.stages
    res.counters = bb.counters.snapshot()
    return res


def subfield_torus_divisor(p: int, a: int, torus_order: int,
                           flavor: Flavor) -> int:
    """Order of the torus element r generating the subfield construction.

    PGL2/SL2: whichever of p^a -+ 1 is divisible by 4 (exactly one is).
    PSL2: whichever of (p^a -+ 1)/2 is even.
    """
    pa = p ** a
    if flavor is Flavor.PSL2:
        cands = [(pa - 1) // 2, (pa + 1) // 2]
        d = cands[0] if cands[0] % 2 == 0 else cands[1]
    else:
        d = pa - 1 if (pa - 1) % 4 == 0 else pa + 1
    if torus_order % d != 0:
        raise DivisorUnavailable(
            f"divisor {d} does not divide torus order {torus_order}")
    return d


def _exceptional_subfield(flavor: Flavor, p: int, a: int) -> bool:
    if a != 1:
        return False
    if flavor is Flavor.PGL2:
        return p == 5
    return p in (5, 7)


def construct_subfield(bb: BlackBox, p: int, k: int, a: int) -> ConstructionResult:
    """Subfield subgroup over GF(p^a), a | k, as <r, x> with r a torus
    element of order p^a -+ 1 (or the PSL2 analogue).

    Exceptional cases (a = 1 with p = 5, plus p = 7 for (P)SL2): the
    construction bottoms out at the Sym4-scale subgroup instead, and the
    result's target records that expectation.
    """
    if k % a != 0:
        raise InvalidSubfieldDegree(f"a={a} does not divide k={k}")
    q = p ** k
    if _exceptional_subfield(bb.flavor, p, a):
        if bb.flavor is Flavor.SL2:
            res = construct_sl2_normalizer(bb, p, k)
        else:
            res = construct_sym4(bb, p, k)
        res.a = a
        return res
    if bb.flavor is Flavor.SL2:
        stats = _Stages(bb)
        inv = right_type_involution(bb, q, stats)
        stats.close("involution")
        d = subfield_torus_divisor(p, a, inv.torus_order, bb.flavor)
        required = {d} | ({8} if q % 8 in (1, 7) else {4})
        t = torus_generator(bb, inv, required, stats)
        stats.close("torus")
        j = inverting_involution(bb, inv, t, stats)
        stats.close("inverting")
        wit = order3_element(bb, inv.i, j, stats)
        stats.close("order3")
        target = f"SL2({p ** a})"
    else:
        stats = _Stages(bb)
        inv = right_type_involution(bb, q, stats)
        stats.close("involution")
        d = subfield_torus_divisor(p, a, inv.torus_order, bb.flavor)
        required = {d}
        if inv.torus_order % 4 == 0:
            required.add(4)
        t = torus_generator(bb, inv, required, stats)
        stats.close("torus")
        if bb.flavor is Flavor.PSL2 and inv.torus_order % 4 != 0:
            j = centralizer_involution(bb, inv.i, stats)
        else:
            j = inverting_involution(bb, inv, t, stats)
        stats.close("inverting")
        wit = order3_element(bb, inv.i, j, stats)
        stats.close("order3")
        target = f"{'PGL2' if bb.flavor is Flavor.PGL2 else 'PSL2'}({p ** a})"
    r = bb.pow(t, inv.torus_order // d)
    if not _has_exact_order(bb, r, d):
        raise RetryBudgetExhausted("construct_subfield: |r| postcondition failed")
    s = None
    if inv.torus_order % 4 == 0 and bb.flavor is not Flavor.SL2:
        s = bb.pow(t, inv.torus_order // 4)
    stats.close("assemble")
    res = ConstructionResult(
        flavor=bb.flavor, p=p, k=k, target=target,
        generators=[r, wit.x], i=inv.i, j=j, k_inv=bb.mul(inv.i, j),
        x=wit.x, witness=wit, torus_order=inv.torus_order, s=s, r=r, t=t,
        a=a, seed=bb.seed, retries=stats.retries)
    res.stage_counters = stats.stages
    res.counters = bb.counters.snapshot()
    return res
