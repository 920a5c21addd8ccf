"""Acceptance gate: ten criteria, one test (and one pass/fail line) each.

Observed fingerprints here come from closure enumeration plus repeated-
multiplication orders, independent of the construction pipeline's own
postcondition checks.
"""

import math
import statistics
import time

import pytest

from blackbox2 import recog
from blackbox2.blackbox import BlackBox
from blackbox2.errors import RetryBudgetExhausted
from blackbox2.matgrp import Flavor, mat_mul
from blackbox2.recog import (construct_sl2_normalizer, construct_subfield,
                             construct_sym4, default_sample_budget,
                             find_field_size, odd_odd_fraction)
from blackbox2.verify import (GroupFingerprint, _all_matrices, _brute_order,
                              closure_enumerate, reference_fingerprint)

SYM4 = reference_fingerprint("Sym4")
ALT4 = reference_fingerprint("Alt4")
N24 = reference_fingerprint("SL2(3)-normalizer(order24)")
N48 = reference_fingerprint("normalizer(order48)")
Q8_HIST = ((1, 1), (2, 1), (4, 6))


def brute_fingerprint(generators, flavor, cap):
    elems = closure_enumerate(generators, flavor, cap=cap)
    counts = {}
    for m in elems:
        o = _brute_order(m, flavor)
        counts[o] = counts.get(o, 0) + 1
    return GroupFingerprint.from_counts(counts)


def _report(n, text):
    print(f"criterion {n:02d} PASS: {text}")


def test_criterion_01_sym4_pgl2():
    fields = [(3, 2), (13, 1), (5, 2), (3, 3), (7, 2), (3, 4), (11, 2)]
    t0 = time.monotonic()
    for p, k in fields:
        verified = 0
        for seed in range(100):
            try:
                bb = BlackBox.create(Flavor.PGL2, p, k, seed=seed)
                res = construct_sym4(bb, p, k)
            except RetryBudgetExhausted:
                continue
            fp = brute_fingerprint(res.generators, Flavor.PGL2, cap=100)
            if fp == SYM4:
                verified += 1
        assert verified >= 95, f"q={p}^{k}: only {verified}/100 verified"
    elapsed = time.monotonic() - t0
    assert elapsed < 120, f"took {elapsed:.1f}s, budget 120s"
    _report(1, f"7 fields x 100 runs, all >= 95/100 Sym4-verified, "
               f"{elapsed:.1f}s")


def test_criterion_02_psl2_dichotomy():
    cases = {(5, 1): ALT4, (11, 1): ALT4, (13, 1): ALT4, (3, 3): ALT4,
             (7, 1): SYM4, (3, 2): SYM4, (17, 1): SYM4, (5, 2): SYM4}
    for (p, k), expected in cases.items():
        for seed in range(20):
            bb = BlackBox.create(Flavor.PSL2, p, k, seed=seed)
            res = construct_sym4(bb, p, k)
            fp = brute_fingerprint(res.generators, Flavor.PSL2, cap=100)
            assert fp == expected, \
                f"PSL2({p}^{k}) seed {seed}: got order {fp.order}"
    _report(2, "PSL2 order-12/order-24 split correct for 8 fields x 20 runs")


def test_criterion_03_sl2_quaternion_normalizer():
    cases = {(5, 1): N24, (7, 1): N48, (3, 2): N48}
    for (p, k), expected in cases.items():
        for seed in range(10):
            bb = BlackBox.create(Flavor.SL2, p, k, seed=seed)
            res = construct_sl2_normalizer(bb, p, k)
            fp = brute_fingerprint(res.generators, Flavor.SL2, cap=100)
            assert fp == expected, \
                f"SL2({p}^{k}) seed {seed}: got {fp.to_json()}"
            quat = brute_fingerprint([res.i, res.j], Flavor.SL2, cap=16)
            assert quat.histogram == Q8_HIST, \
                f"SL2({p}^{k}) seed {seed}: <i,j> is {quat.to_json()}"
    _report(3, "SL2(5)->24, SL2(7)/SL2(9)->48, <i,j> always quaternion")


def test_criterion_04_subfield_orders_exact():
    pgl2_cases = [(7, 2, 1), (11, 2, 1), (13, 2, 1), (3, 4, 2), (3, 4, 1)]
    psl2_cases = [(11, 2, 1), (13, 2, 1)]
    for p, k, a in pgl2_cases:
        want = p ** a * (p ** (2 * a) - 1)
        for seed in range(3):
            bb = BlackBox.create(Flavor.PGL2, p, k, seed=seed)
            res = construct_subfield(bb, p, k, a)
            got = len(closure_enumerate(res.generators, Flavor.PGL2,
                                        cap=want * 2))
            assert got == want, f"PGL2 {(p, k, a)} seed {seed}: {got}"
    for p, k, a in psl2_cases:
        want = p ** a * (p ** (2 * a) - 1) // 2
        for seed in range(3):
            bb = BlackBox.create(Flavor.PSL2, p, k, seed=seed)
            res = construct_subfield(bb, p, k, a)
            got = len(closure_enumerate(res.generators, Flavor.PSL2,
                                        cap=want * 2))
            assert got == want, f"PSL2 {(p, k, a)} seed {seed}: {got}"
    _report(4, "subfield subgroup orders exact for 5 PGL2 + 2 PSL2 cases")


def test_criterion_05_exceptional_cases():
    cases = [(Flavor.PGL2, 5, 2), (Flavor.PSL2, 7, 2), (Flavor.PSL2, 5, 2)]
    for flavor, p, k in cases:
        for seed in range(10):
            bb = BlackBox.create(flavor, p, k, seed=seed)
            res = construct_subfield(bb, p, k, 1)
            fp = brute_fingerprint(res.generators, flavor, cap=100)
            assert fp.order == 24, \
                f"{flavor.value}({p}^{k}) a=1 seed {seed}: order {fp.order}"
    _report(5, "exceptional a=1 constructions land on order 24, 10/10 each")


def test_criterion_06_field_size_recovery():
    configs = [(p, k) for p in (3, 5, 7, 11) for k in (1, 2, 3)]
    configs += [(3, 4), (3, 6)]
    for p, k in configs:
        budget = default_sample_budget(p, max(k, 8))
        hits = 0
        for seed in range(50):
            bb = BlackBox.create(Flavor.PGL2, p, k, seed=seed)
            if find_field_size(bb, p, max(k, 8), budget) == k:
                hits += 1
        assert hits >= 49, f"(p,k)=({p},{k}): {hits}/50 recovered"
    _report(6, "field size recovered >= 49/50 for all 14 configurations")


def test_criterion_07_odd_odd_fraction_bound():
    slack = 3 * math.sqrt(0.25 / 1000)
    for p, k in [(3, 2), (3, 3)]:
        q = p ** k
        bb = BlackBox.create(Flavor.PGL2, p, k, seed=0)
        res = construct_sym4(bb, p, k)
        frac = odd_odd_fraction(bb, res.i, res.j, 1000)
        bound = (0.5 - 0.5 / q) - slack
        assert frac >= bound, f"q={q}: {frac:.3f} < {bound:.3f}"
    _report(7, "odd-odd draw fraction meets the 1/2 - 1/2q bound "
               "minus 3 sigma in PGL2(9) and PGL2(27)")


def test_criterion_08_scaling():
    p = 3
    klist = [2, 4, 8, 16]
    trials = 5
    med_rand, med_mul = {}, {}
    for k in klist:
        rands, muls = [], []
        for trial in range(trials):
            bb = BlackBox.create(Flavor.PGL2, p, k, seed=100 + trial)
            res = construct_sym4(bb, p, k)
            rands.append(res.counters["rand"])
            muls.append(res.counters["mul"])
        med_rand[k] = statistics.median(rands)
        med_mul[k] = statistics.median(muls)

    assert med_rand[16] <= 3 * med_rand[2], \
        f"rand medians {med_rand[2]} -> {med_rand[16]} grew over 3x"

    def shape(k):
        q = float(p) ** k
        return k * math.log(math.log(q)) * math.log(q) + math.log(q)

    c = med_mul[2] / shape(2)
    for k in klist:
        assert med_mul[k] <= 4 * c * shape(k), \
            f"k={k}: mul median {med_mul[k]} above 4x calibrated bound"
    _report(8, f"rand medians {[med_rand[k] for k in klist]}, mul medians "
               f"{[med_mul[k] for k in klist]} within calibrated bounds")


def test_criterion_09_dihedral_trick_exhaustive():
    ctx, elems = _all_matrices(Flavor.PGL2, 5, 1)
    involutions = [m for m in elems if _brute_order(m, Flavor.PGL2) == 2]
    bb = BlackBox(Flavor.PGL2, ctx, involutions[:2], seed=0, burnin=0)
    checked = failures = 0
    for u in involutions:
        for v in involutions:
            prod = mat_mul(u, v)
            if _brute_order(prod, Flavor.PGL2) % 2 == 0:
                continue
            n = bb.odd_order_sqrt(prod)
            assert n is not None
            checked += 1
            if not bb.eq(bb.conj(u, n), v):
                failures += 1
    assert checked > 0 and failures == 0, \
        f"{failures}/{checked} dihedral-trick conjugations failed"
    _report(9, f"dihedral trick exact on all {checked} odd-product "
               "involution pairs in PGL2(5)")


def test_criterion_10_las_vegas_contract(monkeypatch):
    # starve the retry budget so stage failures actually occur, then check
    # that every result that does come back still verifies
    monkeypatch.setenv(recog.RETRY_BUDGET_ENV, "2")
    successes = failures = 0
    for seed in range(200):
        bb = BlackBox.create(Flavor.PGL2, 3, 2, seed=seed)
        try:
            res = construct_sym4(bb, 3, 2)
        except RetryBudgetExhausted:
            failures += 1
            continue
        fp = brute_fingerprint(res.generators, Flavor.PGL2, cap=100)
        assert fp == SYM4, f"seed {seed}: unverified result escaped"
        successes += 1
    for seed in range(60):
        bb = BlackBox.create(Flavor.SL2, 5, 1, seed=seed)
        try:
            res = construct_sl2_normalizer(bb, 5, 1)
        except RetryBudgetExhausted:
            failures += 1
            continue
        fp = brute_fingerprint(res.generators, Flavor.SL2, cap=100)
        assert fp == N24, f"SL2 seed {seed}: unverified result escaped"
        successes += 1
    assert successes > 0 and failures > 0, \
        "stress run must exercise both outcomes"
    _report(10, f"budget-starved stress: {successes} returns all verified, "
                f"{failures} declared failures, zero silent errors")
