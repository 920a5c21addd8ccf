"""The oracle wrapper: random elements, counted group operations, big powers.

A :class:`BlackBox` owns single-threaded mutable state (RNG, product
replacement slots, counters); parallel experiments use independent handles
with distinct seeds.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import matgrp
from .errors import ExponentViolated
from .ff import FieldCtx, ctx_create
from .matgrp import Flavor, Mat2

PR_SLOTS = 10
PR_BURNIN = 200


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization, adequate at desk scale."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass
class OpCounters:
    mul: int = 0
    inv: int = 0
    eq: int = 0
    rand: int = 0

    def snapshot(self) -> dict:
        return {"mul": self.mul, "inv": self.inv, "eq": self.eq, "rand": self.rand}

    def reset(self) -> None:
        self.mul = self.inv = self.eq = self.rand = 0


class BlackBox:
    """BB1-BB4 oracle over the matrix backend."""

    def __init__(self, flavor: Flavor, ctx: FieldCtx, generators: list[Mat2],
                 seed=0, slots: int = PR_SLOTS, burnin: int = PR_BURNIN):
        self.flavor = flavor
        self.ctx = ctx
        self.generators = list(generators)
        self.E = matgrp.exponent_for(flavor, ctx.p, ctx.k)
        u, e2 = self.E, 0
        while u % 2 == 0:
            u //= 2
            e2 += 1
        self.u = u
        self.e2 = e2
        self.seed = seed
        self.rng = random.Random(seed)
        self.counters = OpCounters()
        self._id = matgrp.identity(ctx)
        self._E_factors: dict[int, int] | None = None
        # product replacement state: generators cyclically repeated
        n = len(self.generators)
        self._slots = [self.generators[i % n] for i in range(max(slots, n))]
        self._acc = self._id
        for _ in range(burnin):
            self._pr_step()

    @classmethod
    def create(cls, flavor: Flavor, p: int, k: int, seed=0) -> "BlackBox":
        ctx = ctx_create(p, k, seed)
        rng = random.Random(seed)
        gens = matgrp.standard_generators(flavor, ctx, rng)
        return cls(flavor, ctx, gens, seed)

    # -- BB1: random elements --

    def _pr_step(self) -> Mat2:
        rng = self.rng
        n = len(self._slots)
        s = rng.randrange(n)
        t = rng.randrange(n - 1)
        if t >= s:
            t += 1
        other = self._slots[t]
        if rng.getrandbits(1):
            other = matgrp.mat_inv(other)
        if rng.getrandbits(1):
            new = matgrp.mat_mul(self._slots[s], other)
        else:
            new = matgrp.mat_mul(other, self._slots[s])
        self._slots[s] = new
        self._acc = matgrp.mat_mul(self._acc, new)  # rattle
        return self._acc

    def random(self) -> Mat2:
        self.counters.rand += 1
        return self._pr_step()

    # -- BB2/BB3: counted group operations --

    def identity(self) -> Mat2:
        return self._id

    def mul(self, x: Mat2, y: Mat2) -> Mat2:
        self.counters.mul += 1
        return matgrp.mat_mul(x, y)

    def inv(self, x: Mat2) -> Mat2:
        self.counters.inv += 1
        return matgrp.mat_inv(x)

    def eq(self, x: Mat2, y: Mat2) -> bool:
        self.counters.eq += 1
        return matgrp.mat_eq(x, y, self.flavor)

    def eq_mod_center(self, x: Mat2, y: Mat2) -> bool:
        """Equality in the central quotient; differs from eq only for SL2."""
        self.counters.eq += 1
        if self.flavor is Flavor.SL2:
            return matgrp.mat_eq(x, y, Flavor.PSL2)
        return matgrp.mat_eq(x, y, self.flavor)

    def is_identity(self, x: Mat2) -> bool:
        return self.eq(x, self._id)

    def conj(self, x: Mat2, g: Mat2) -> Mat2:
        """x^g = g^-1 x g."""
        return self.mul(self.inv(g), self.mul(x, g))

    # -- BB4: big powers --

    def pow(self, x: Mat2, n: int) -> Mat2:
        if n < 0:
            return self.pow(self.inv(x), -n)
        result = self._id
        base = x
        while n > 0:
            if n & 1:
                result = self.mul(result, base)
            if n > 1:
                base = self.mul(base, base)
            n >>= 1
        return result

    def odd_order_sqrt(self, h: Mat2) -> Mat2 | None:
        """n with n^2 = h and n in <h>, or None when h has even order.

        Powers by (u+1)/2 for u the odd part of E instead of computing the
        exact order of h, keeping within black-box constraints.
        """
        if not self.eq(self.pow(h, self.u), self._id):
            return None
        return self.pow(h, (self.u + 1) // 2)

    # -- verification-only order oracle --

    def exponent_factors(self) -> dict[int, int]:
        if self._E_factors is None:
            q = self.ctx.q
            f = {self.ctx.p: self.ctx.k}
            for n in (q - 1, q + 1):
                for prime, e in factorize(n).items():
                    f[prime] = f.get(prime, 0) + e
            self._E_factors = f
        return self._E_factors

    def element_order(self, x: Mat2) -> int:
        """Exact order under this flavor's equality.  Not used by the Las
        Vegas pipeline; relies on E factoring by trial division."""
        if not self.eq(self.pow(x, self.E), self._id):
            raise ExponentViolated("x^E != 1: backend bug or foreign element")
        o = self.E
        for prime in self.exponent_factors():
            while o % prime == 0 and self.eq(self.pow(x, o // prime), self._id):
                o //= prime
        return o
