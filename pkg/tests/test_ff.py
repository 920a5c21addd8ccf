"""Finite field arithmetic, checked against naive polynomial arithmetic."""

import random

import pytest

from blackbox2.errors import (DivisionByZero, InvalidDegree, NotPrime)
from blackbox2.ff import (FieldCtx, _pmod, _pmul, ctx_create, irreducible_test,
                          is_prime)


def test_is_prime():
    assert [n for n in range(40) if is_prime(n)] == \
        [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def test_irreducible_known_cases():
    # x^2 + 1 over Z_3: -1 is a nonsquare mod 3
    assert irreducible_test([1, 0, 1], 3)
    # x^2 + 2 = x^2 - 1 = (x - 1)(x + 1) over Z_3
    assert not irreducible_test([2, 0, 1], 3)
    # x^2 - 2 over Z_7: 2 = 3^2 mod 7 is a square
    assert not irreducible_test([5, 0, 1], 7)
    # x^3 - 2 over Z_7: 2 is not a cube mod 7 (cubes are {0,1,6})
    assert irreducible_test([5, 0, 0, 1], 7)


def test_ctx_create_rejects_bad_input():
    with pytest.raises(NotPrime):
        ctx_create(4, 2)
    with pytest.raises(NotPrime):
        ctx_create(2, 3)  # odd characteristic only
    with pytest.raises(InvalidDegree):
        ctx_create(5, 0)
    with pytest.raises(InvalidDegree):
        FieldCtx(3, 2, (2, 0, 1))  # x^2 + 2 is reducible


def test_ctx_create_deterministic():
    assert ctx_create(3, 2, 0).modulus == (2, 1, 1)
    assert ctx_create(5, 2, 0).modulus == (3, 3, 1)
    assert ctx_create(3, 3, 0).modulus == (1, 2, 1, 1)
    assert ctx_create(7, 4, 17).modulus == ctx_create(7, 4, 17).modulus


@pytest.mark.parametrize("p,k", [(7, 1), (3, 2), (5, 3), (3, 4)])
def test_field_laws(p, k):
    ctx = ctx_create(p, k, 1)
    rng = random.Random(99)
    one, zero = ctx.one(), ctx.zero()
    for _ in range(40):
        a = ctx.rand_elem(rng)
        b = ctx.rand_elem(rng)
        c = ctx.rand_elem(rng)
        assert ctx.add(a, b) == ctx.add(b, a)
        assert ctx.mul(a, b) == ctx.mul(b, a)
        assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
        assert ctx.mul(a, ctx.add(b, c)) == \
            ctx.add(ctx.mul(a, b), ctx.mul(a, c))
        assert ctx.add(a, ctx.neg(a)) == zero
        assert ctx.sub(a, b) == ctx.add(a, ctx.neg(b))
        if any(a):
            assert ctx.mul(a, ctx.inv(a)) == one
            # Fermat in GF(q)
            assert ctx.pow(a, ctx.q - 1) == one


def test_mul_matches_naive_polynomial_oracle():
    # independent oracle: schoolbook multiply, then reduce mod the modulus
    ctx = ctx_create(3, 3, 0)
    f = list(ctx.modulus)
    rng = random.Random(5)
    for _ in range(100):
        a = ctx.rand_elem(rng)
        b = ctx.rand_elem(rng)
        naive = _pmod(_pmul(list(a), list(b), ctx.p), f, ctx.p)
        naive = tuple(naive) + (0,) * (ctx.k - len(naive))
        assert ctx.mul(a, b) == naive


def test_inverse_of_zero_raises():
    ctx = ctx_create(5, 2, 0)
    with pytest.raises(DivisionByZero):
        ctx.inv(ctx.zero())


def test_generator_generates():
    # powers of x hit every nonzero element when x is primitive, and at
    # minimum span the whole field additively with scalars; check the
    # multiplicative closure of {scalars, x} has q - 1 elements
    ctx = ctx_create(3, 2, 0)
    elems = set(ctx.elements())
    assert len(elems) == 9
    x = ctx.gen()
    span = {ctx.one()}
    cur = ctx.one()
    for _ in range(ctx.q):
        cur = ctx.mul(cur, x)
        span.add(cur)
    # x has multiplicative order dividing q - 1 and > k
    assert ctx.pow(x, ctx.q - 1) == ctx.one()


def test_find_nonsquare():
    for p, k in [(3, 2), (7, 1), (5, 2)]:
        ctx = ctx_create(p, k, 0)
        nu = ctx.find_nonsquare(random.Random(0))
        assert ctx.pow(nu, (ctx.q - 1) // 2) != ctx.one()


def test_json_roundtrip():
    ctx = ctx_create(5, 3, 7)
    ctx2 = FieldCtx.from_json(ctx.to_json())
    assert ctx2.modulus == ctx.modulus
    assert ctx2.p == 5 and ctx2.k == 3
