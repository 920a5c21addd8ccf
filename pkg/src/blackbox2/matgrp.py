"""2x2 matrix realization of SL2/PSL2/PGL2(q).

A :class:`Mat2` is a raw "string": distinct matrices may encrypt the same
projective element.  All quotient semantics live in :func:`canonicalize` /
:func:`mat_eq`, keyed by the group flavor.
"""

from __future__ import annotations

import random
from enum import Enum

from .errors import ContextMismatch, SingularMatrix
from .ff import FieldCtx


class Flavor(str, Enum):
    SL2 = "sl2"
    PSL2 = "psl2"
    PGL2 = "pgl2"


class Mat2:
    """Invertible 2x2 matrix over GF(p^k), entries row-major (a, b; c, d)."""

    __slots__ = ("ctx", "a", "b", "c", "d")

    def __init__(self, ctx: FieldCtx, a, b, c, d):
        self.ctx = ctx
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other):
        return (isinstance(other, Mat2) and self.ctx is other.ctx
                and self.a == other.a and self.b == other.b
                and self.c == other.c and self.d == other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        return f"Mat2({self.a}, {self.b}; {self.c}, {self.d})"

    def to_json(self) -> dict:
        return {"rows": [[list(self.a), list(self.b)],
                         [list(self.c), list(self.d)]]}

    @classmethod
    def from_json(cls, ctx: FieldCtx, obj: dict) -> "Mat2":
        (r0, r1) = obj["rows"]
        return cls(ctx, ctx.elem(r0[0]), ctx.elem(r0[1]),
                   ctx.elem(r1[0]), ctx.elem(r1[1]))


def identity(ctx: FieldCtx) -> Mat2:
    return Mat2(ctx, ctx.one(), ctx.zero(), ctx.zero(), ctx.one())


def mat_det(x: Mat2):
    f = x.ctx
    return f.sub(f.mul(x.a, x.d), f.mul(x.b, x.c))


def mat_mul(x: Mat2, y: Mat2) -> Mat2:
    if x.ctx is not y.ctx:
        raise ContextMismatch("operands from different field contexts")
    f = x.ctx
    return Mat2(f,
                f.add(f.mul(x.a, y.a), f.mul(x.b, y.c)),
                f.add(f.mul(x.a, y.b), f.mul(x.b, y.d)),
                f.add(f.mul(x.c, y.a), f.mul(x.d, y.c)),
                f.add(f.mul(x.c, y.b), f.mul(x.d, y.d)))


def mat_inv(x: Mat2) -> Mat2:
    f = x.ctx
    det = mat_det(x)
    if not any(det):
        raise SingularMatrix(f"singular matrix {x!r}")
    di = f.inv(det)
    return Mat2(f, f.mul(x.d, di), f.mul(f.neg(x.b), di),
                f.mul(f.neg(x.c), di), f.mul(x.a, di))


def mat_neg(x: Mat2) -> Mat2:
    f = x.ctx
    return Mat2(f, f.neg(x.a), f.neg(x.b), f.neg(x.c), f.neg(x.d))


def mat_scalar_mul(x: Mat2, s) -> Mat2:
    f = x.ctx
    return Mat2(f, f.mul(x.a, s), f.mul(x.b, s), f.mul(x.c, s), f.mul(x.d, s))


def canonicalize(x: Mat2, flavor: Flavor) -> Mat2:
    """Canonical form defining string equality for the given flavor.

    SL2: identity map (strings are literal).
    PGL2: divide by the first nonzero entry in scan order (a, b, c, d).
    PSL2: of M and -M keep the one whose first nonzero entry has the
    lexicographically smaller coefficient tuple.
    """
    if flavor is Flavor.SL2:
        return x
    f = x.ctx
    if flavor is Flavor.PGL2:
        if not any(mat_det(x)):
            raise SingularMatrix(f"singular matrix {x!r}")
        for e in x.entries():
            if any(e):
                if e == f.one():
                    return x
                return mat_scalar_mul(x, f.inv(e))
        raise SingularMatrix("zero matrix")
    # PSL2: pick between M and -M
    for e in x.entries():
        if any(e):
            ne = f.neg(e)
            if ne < e:
                return mat_neg(x)
            return x
    raise SingularMatrix("zero matrix")


def mat_eq(x: Mat2, y: Mat2, flavor: Flavor) -> bool:
    if x.ctx is not y.ctx:
        raise ContextMismatch("operands from different field contexts")
    if flavor is Flavor.SL2:
        return x.entries() == y.entries()
    return canonicalize(x, flavor).entries() == canonicalize(y, flavor).entries()


def standard_generators(flavor: Flavor, ctx: FieldCtx,
                        rng: random.Random | None = None) -> list[Mat2]:
    """Transvections; for PGL2 also diag(nu, 1) with nu a nonsquare.

    For k > 1 the unit transvections alone only reach the prime-field
    subgroup, so transvections with entry x (the residue class generating
    GF(p^k) over Z_p) are added.  Generation is checked at desk scale by
    closure enumeration in the test suite.
    """
    one, zero = ctx.one(), ctx.zero()
    gens = [Mat2(ctx, one, one, zero, one),
            Mat2(ctx, one, zero, one, one)]
    if ctx.k > 1:
        x = ctx.gen()
        gens.append(Mat2(ctx, one, x, zero, one))
        gens.append(Mat2(ctx, one, zero, x, one))
    if flavor is Flavor.PGL2:
        nu = ctx.find_nonsquare(rng or random.Random(0))
        gens.append(Mat2(ctx, nu, zero, zero, one))
    return gens


def exponent_for(flavor: Flavor, p: int, k: int) -> int:
    """Global exponent E = q(q^2 - 1); valid (not tight) for all three flavors."""
    q = p ** k
    return q * (q * q - 1)
