"""Brute-force oracles: closure, fingerprints, reference groups."""

import random

import pytest

from blackbox2.blackbox import BlackBox
from blackbox2.errors import Overflow
from blackbox2.ff import ctx_create
from blackbox2.matgrp import Flavor, standard_generators
from blackbox2.verify import (GroupFingerprint, assert_type, closure_enumerate,
                              expected_order, fingerprint,
                              reference_fingerprint)

# frozen reference fingerprints, each produced by an independent oracle
# (permutation enumeration or exhaustive 2x2 matrix scan + repeated
# multiplication), never by the construction pipeline
SYM4_HIST = ((1, 1), (2, 9), (3, 8), (4, 6))
ALT4_HIST = ((1, 1), (2, 3), (3, 8))
N24_HIST = ((1, 1), (2, 1), (3, 8), (4, 6), (6, 8))
N48_HIST = ((1, 1), (2, 1), (3, 8), (4, 18), (6, 8), (8, 12))
Q8_HIST = ((1, 1), (2, 1), (4, 6))


def test_reference_fingerprints_frozen():
    assert reference_fingerprint("Sym4").histogram == SYM4_HIST
    assert reference_fingerprint("Alt4").histogram == ALT4_HIST
    assert reference_fingerprint("SL2(3)-normalizer(order24)").histogram == \
        N24_HIST
    assert reference_fingerprint("normalizer(order48)").histogram == N48_HIST


def test_exceptional_isomorphisms_cross_check():
    # PGL2(3) = Sym4 and PSL2(3) = Alt4; the two reference paths
    # (permutations vs matrix scan) must agree exactly
    assert reference_fingerprint("PGL2(3)").histogram == SYM4_HIST
    assert reference_fingerprint("PSL2(3)").histogram == ALT4_HIST


def test_expected_order_table():
    assert expected_order("Sym4") == 24
    assert expected_order("Alt4") == 12
    assert expected_order("SL2(3)-normalizer(order24)") == 24
    assert expected_order("normalizer(order48)") == 48
    assert expected_order("PGL2(7)") == 336
    assert expected_order("PSL2(11)") == 660
    assert expected_order("SL2(9)") == 720
    assert expected_order("PGL2(9)", p=3, a=2) == 720
    with pytest.raises(ValueError):
        expected_order("Frobnitz")


def test_assert_type_separates_equal_orders():
    # Sym4 and the order-24 quaternion normalizer share their order but
    # not their histogram
    sym4 = reference_fingerprint("Sym4")
    n24 = reference_fingerprint("SL2(3)-normalizer(order24)")
    assert sym4.order == n24.order == 24
    assert assert_type(sym4, sym4)
    assert not assert_type(sym4, n24)


def test_closure_enumerate_known_orders():
    ctx = ctx_create(5, 1, 0)
    gens = standard_generators(Flavor.PGL2, ctx, random.Random(0))
    assert len(closure_enumerate(gens, Flavor.PGL2)) == 120
    psl_gens = standard_generators(Flavor.PSL2, ctx, random.Random(0))
    assert len(closure_enumerate(psl_gens, Flavor.PSL2)) == 60


def test_closure_enumerate_cap():
    ctx = ctx_create(5, 1, 0)
    gens = standard_generators(Flavor.PGL2, ctx, random.Random(0))
    with pytest.raises(Overflow):
        closure_enumerate(gens, Flavor.PGL2, cap=50)


def test_fingerprint_of_whole_small_group():
    bb = BlackBox.create(Flavor.PSL2, 3, 1, seed=0)
    elems = closure_enumerate(bb.generators, Flavor.PSL2)
    fp = fingerprint(bb, elems)
    # PSL2(3) = Alt4
    assert fp == reference_fingerprint("Alt4")


def test_fingerprint_json_roundtrip():
    fp = reference_fingerprint("Sym4")
    assert GroupFingerprint.from_json(fp.to_json()) == fp
