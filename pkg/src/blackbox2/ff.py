"""Exact arithmetic in GF(p^k) via polynomial residues.

Field elements are plain tuples of k integers in [0, p), constant term first.
All arithmetic lives on :class:`FieldCtx`; elements carry no back-reference,
so they hash and compare as ordinary tuples (canonical representation).
"""

from __future__ import annotations

import random

from .errors import DivisionByZero, InvalidDegree, NotPrime, RetryBudgetExhausted

FieldElem = tuple  # k integers in [0, p), constant term first


def is_prime(n: int) -> bool:
    """Trial-division primality check, adequate at desk scale."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# -- dense polynomial helpers over Z_p (coefficient lists, constant first) --

def _ptrim(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return a[:i]


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _ptrim([c % p for c in out])


def _pmod(a, f, p):
    """Remainder of a modulo monic f."""
    a = [c % p for c in a]
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] % p
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return _ptrim(a[:df])


def _ppowmod(a, e, f, p):
    """a^e mod f by square-and-multiply."""
    result = [1]
    base = _pmod(a, f, p)
    while e > 0:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _ptrim([c % p for c in a]), _ptrim([c % p for c in b])
    while b:
        # make b monic so _pmod applies
        lead_inv = pow(b[-1], p - 2, p)
        bm = [(c * lead_inv) % p for c in b]
        a, b = b, _pmod(a, bm, p)
    return a


def irreducible_test(f: list[int], p: int) -> bool:
    """Rabin irreducibility criterion for a monic polynomial over Z_p."""
    f = list(f)
    k = len(f) - 1
    if k < 1 or f[-1] != 1:
        raise InvalidDegree(f"need a monic polynomial of degree >= 1, got {f}")
    if k == 1:
        return True
    x = [0, 1]
    # x^{p^k} == x mod f
    xq = x
    for _ in range(k):
        xq = _ppowmod(xq, p, f, p)
    if _ptrim(_pmod([(a - b) % p for a, b in
                     zip(xq + [0] * len(x), x + [0] * len(xq))], f, p)) != []:
        return False
    # gcd(x^{p^{k/l}} - x, f) = 1 for every prime l | k
    for ell in _prime_divisors(k):
        xe = x
        for _ in range(k // ell):
            xe = _ppowmod(xe, p, f, p)
        diff = [(a - b) % p for a, b in
                zip(xe + [0] * len(x), x + [0] * len(xe))]
        g = _pgcd(diff, f, p)
        if len(g) > 1:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FieldCtx:
    """GF(p^k) with a fixed monic irreducible modulus.

    Immutable after construction; safe to share between threads.
    """

    __slots__ = ("p", "k", "modulus", "q", "_red")

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        if not is_prime(p) or p == 2:
            raise NotPrime(f"p must be an odd prime, got {p}")
        if k < 1:
            raise InvalidDegree(f"k must be >= 1, got {k}")
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise InvalidDegree(f"modulus must be monic of degree {k}")
        if k > 1 and not irreducible_test(list(modulus), p):
            raise InvalidDegree(f"modulus {modulus} is reducible over Z_{p}")
        self.p = p
        self.k = k
        self.modulus = modulus
        self.q = p ** k
        # reduction rows: x^{k+i} mod f as k-tuples, i = 0..k-2 (shift-and-reduce)
        red = []
        cur = [(-c) % p for c in modulus[:k]]
        red.append(tuple(cur))
        for _ in range(k - 2):
            overflow = cur[-1]
            cur = [0] + cur[:-1]
            if overflow:
                cur = [(cur[j] + overflow * red[0][j]) % p for j in range(k)]
            red.append(tuple(cur))
        self._red = red

    # -- element constructors --

    def zero(self) -> FieldElem:
        return (0,) * self.k

    def one(self) -> FieldElem:
        return (1,) + (0,) * (self.k - 1)

    def scalar(self, c: int) -> FieldElem:
        return (c % self.p,) + (0,) * (self.k - 1)

    def gen(self) -> FieldElem:
        """The residue class of x (equals the scalar 0 when k = 1)."""
        if self.k == 1:
            return (0,)
        return (0, 1) + (0,) * (self.k - 2)

    def elem(self, coeffs) -> FieldElem:
        coeffs = list(coeffs) + [0] * (self.k - len(coeffs))
        if len(coeffs) != self.k:
            raise InvalidDegree(f"need at most {self.k} coefficients")
        return tuple(c % self.p for c in coeffs)

    def elements(self):
        """Iterate all q field elements (desk scale only)."""
        import itertools
        for tup in itertools.product(range(self.p), repeat=self.k):
            yield tup

    def rand_elem(self, rng: random.Random) -> FieldElem:
        return tuple(rng.randrange(self.p) for _ in range(self.k))

    # -- arithmetic --

    def add(self, a: FieldElem, b: FieldElem) -> FieldElem:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a: FieldElem, b: FieldElem) -> FieldElem:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a: FieldElem) -> FieldElem:
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a: FieldElem, b: FieldElem) -> FieldElem:
        p = self.p
        k = self.k
        if k == 1:
            return ((a[0] * b[0]) % p,)
        conv = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        out = conv[:k]
        red = self._red
        for i in range(k, 2 * k - 1):
            c = conv[i]
            if c:
                row = red[i - k]
                for j in range(k):
                    out[j] += c * row[j]
        return tuple(c % p for c in out)

    def inv(self, a: FieldElem) -> FieldElem:
        if not any(a):
            raise DivisionByZero("inverse of zero field element")
        p = self.p
        if self.k == 1:
            return (pow(a[0], p - 2, p),)
        # extended Euclid on polynomials: find u with u*a == 1 mod modulus
        r0, r1 = list(self.modulus), _ptrim(list(a))
        s0, s1 = [], [1]
        while r1:
            lead_inv = pow(r1[-1], p - 2, p)
            r1m = [(c * lead_inv) % p for c in r1]
            # quotient of r0 by monic r1m
            quot = [0] * (max(len(r0) - len(r1m) + 1, 0))
            rem = [c % p for c in r0]
            for i in range(len(rem) - 1, len(r1m) - 2, -1):
                c = rem[i] % p
                if c:
                    quot[i - (len(r1m) - 1)] = c
                    for j in range(len(r1m)):
                        rem[i - (len(r1m) - 1) + j] = (
                            rem[i - (len(r1m) - 1) + j] - c * r1m[j]) % p
            rem = _ptrim(rem)
            # undo the monic scaling: r0 = q*r1m + rem = (q*lead_inv)*r1 + rem
            quot = [(c * lead_inv) % p for c in quot]
            r0, r1 = r1, rem
            qs1 = _pmul(quot, s1, p)
            news = [(x - y) % p for x, y in
                    zip(s0 + [0] * len(qs1), qs1 + [0] * len(s0))]
            s0, s1 = s1, _ptrim(news)
        # r0 is gcd (a nonzero constant since modulus is irreducible)
        c_inv = pow(r0[0], p - 2, p)
        u = [(c * c_inv) % p for c in s0]
        u = u[: self.k] + [0] * (self.k - len(u))
        return tuple(u)

    def pow(self, a: FieldElem, n: int) -> FieldElem:
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one()
        base = a
        while n > 0:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def find_nonsquare(self, rng: random.Random) -> FieldElem:
        """Random search for z with z^((q-1)/2) != 1; success chance 1/2 per draw."""
        half = (self.q - 1) // 2
        one = self.one()
        for _ in range(256):
            z = self.rand_elem(rng)
            if not any(z):
                continue
            if self.pow(z, half) != one:
                return z
        raise RetryBudgetExhausted("no nonsquare found in 256 draws (RNG pathology?)")

    # -- serialization --

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldCtx":
        return cls(obj["p"], obj["k"], tuple(obj["modulus"]))

    def __repr__(self):
        return f"FieldCtx(p={self.p}, k={self.k}, modulus={self.modulus})"


def ctx_create(p: int, k: int, seed=0) -> FieldCtx:
    """Build GF(p^k), choosing the modulus by seeded random search.

    Deterministic for a fixed seed.  For k = 1 the modulus is x - 0 and
    elements are scalars.
    """
    if not is_prime(p) or p == 2:
        raise NotPrime(f"p must be an odd prime, got {p}")
    if k < 1:
        raise InvalidDegree(f"k must be >= 1, got {k}")
    if k == 1:
        return FieldCtx(p, 1, (0, 1))
    rng = random.Random(seed)
    for _ in range(200 * k):
        f = [rng.randrange(p) for _ in range(k)] + [1]
        if f[0] == 0:
            continue  # divisible by x
        if irreducible_test(f, p):
            return FieldCtx(p, k, tuple(f))
    raise RetryBudgetExhausted(f"no irreducible degree-{k} modulus found over Z_{p}")
