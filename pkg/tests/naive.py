"""Deliberately naive reference implementations used as test oracles.

Nothing here imports codekit; elements of F_{p^r} are coefficient lists,
products are schoolbook multiply-then-reduce, elimination picks pivots at
random, and distances come from listing every codeword.
"""

from __future__ import annotations

import itertools
import random


class NaiveGF:
    """F_p[X]/(modulus) with elements encoded as integers sum c_i p^i."""

    def __init__(self, p: int, modulus):
        self.p = p
        self.modulus = list(modulus)
        self.r = len(self.modulus) - 1
        self.order = p**self.r

    def to_poly(self, a: int) -> list[int]:
        out = []
        for _ in range(self.r):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_poly(self, c) -> int:
        return sum(int(x) * self.p**i for i, x in enumerate(c))

    def add(self, a: int, b: int) -> int:
        x, y = self.to_poly(a), self.to_poly(b)
        return self.from_poly([(u + v) % self.p for u, v in zip(x, y)])

    def neg(self, a: int) -> int:
        return self.from_poly([(-u) % self.p for u in self.to_poly(a)])

    def mul(self, a: int, b: int) -> int:
        x, y = self.to_poly(a), self.to_poly(b)
        prod = [0] * (2 * self.r)
        for i, u in enumerate(x):
            for j, v in enumerate(y):
                prod[i + j] = (prod[i + j] + u * v) % self.p
        # reduce top-down by the monic modulus
        for d in range(len(prod) - 1, self.r - 1, -1):
            c = prod[d]
            if c:
                for i, m in enumerate(self.modulus):
                    prod[d - self.r + i] = (prod[d - self.r + i] - c * m) % self.p
        return self.from_poly(prod[: self.r])

    def pow(self, a: int, e: int) -> int:
        out = 1
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def inv(self, a: int) -> int:
        for b in range(1, self.order):
            if self.mul(a, b) == 1:
                return b
        raise ZeroDivisionError(a)


def monic_irreducibles(p: int, r: int) -> list[tuple[int, ...]]:
    """All monic irreducible degree-r polynomials over F_p by trial division by every lower-degree monic."""

    def mul(f, g):
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
        return tuple(out)

    reducible = set()
    for d in range(1, r // 2 + 1):
        for low1 in itertools.product(range(p), repeat=d):
            for low2 in itertools.product(range(p), repeat=r - d):
                reducible.add(mul(low1 + (1,), low2 + (1,)))
    return [f + (1,) for f in itertools.product(range(p), repeat=r) if f + (1,) not in reducible]


def rank(gf, rows, seed: int = 0) -> int:
    """Rank by Gaussian elimination with a randomly chosen pivot row each step."""
    rng = random.Random(seed)
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rk = 0
    for c in range(ncols):
        cands = [i for i in range(rk, len(m)) if m[i][c]]
        if not cands:
            continue
        piv = rng.choice(cands)
        m[rk], m[piv] = m[piv], m[rk]
        inv = gf.inv(m[rk][c])
        m[rk] = [gf.mul(inv, x) for x in m[rk]]
        for i in range(len(m)):
            if i != rk and m[i][c]:
                f = gf.neg(m[i][c])
                m[i] = [gf.add(x, gf.mul(f, y)) for x, y in zip(m[i], m[rk])]
        rk += 1
    return rk


def span(gf, rows) -> set[tuple[int, ...]]:
    """Every vector in the row span, by listing all coefficient tuples."""
    rows = [tuple(r) for r in rows]
    if not rows:
        return set()
    n = len(rows[0])
    out = set()
    for coeffs in itertools.product(range(gf.order), repeat=len(rows)):
        v = [0] * n
        for c, r in zip(coeffs, rows):
            if c:
                v = [gf.add(x, gf.mul(c, y)) for x, y in zip(v, r)]
        out.add(tuple(v))
    return out


def min_weight(vectors) -> int:
    return min(sum(1 for x in v if x) for v in vectors if any(v))


def rs_generator(gf, points, k):
    return [[gf.pow(a, i) if i else 1 for a in points] for i in range(k)]


def trace(gf_ext, x: int, q: int, k: int) -> int:
    """x + x^q + ... + x^{q^{k-1}} computed by repeated multiplication."""
    total, y = 0, x
    for _ in range(k):
        total = gf_ext.add(total, y)
        y = gf_ext.pow(y, q)
    return total


class NaiveTower:
    """F_{q^k} = base[X]/(gamma) over a NaiveGF base; elements encoded base-q."""

    def __init__(self, base: NaiveGF, gamma):
        self.base = base
        self.gamma = list(gamma)
        self.k = len(self.gamma) - 1
        self.order = base.order**self.k

    def to_poly(self, a: int) -> list[int]:
        q = self.base.order
        return [(a // q**i) % q for i in range(self.k)]

    def from_poly(self, c) -> int:
        return sum(int(x) * self.base.order**i for i, x in enumerate(c))

    def add(self, a: int, b: int) -> int:
        return self.from_poly([self.base.add(u, v) for u, v in zip(self.to_poly(a), self.to_poly(b))])

    def neg(self, a: int) -> int:
        return self.from_poly([self.base.neg(u) for u in self.to_poly(a)])

    def mul(self, a: int, b: int) -> int:
        B = self.base
        x, y = self.to_poly(a), self.to_poly(b)
        prod = [0] * (2 * self.k)
        for i, u in enumerate(x):
            for j, v in enumerate(y):
                prod[i + j] = B.add(prod[i + j], B.mul(u, v))
        for d in range(len(prod) - 1, self.k - 1, -1):
            c = prod[d]
            if c:
                for i, m in enumerate(self.gamma):
                    prod[d - self.k + i] = B.add(prod[d - self.k + i], B.neg(B.mul(c, m)))
        return self.from_poly(prod[: self.k])

    def pow(self, a: int, e: int) -> int:
        out = 1
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def inv(self, a: int) -> int:
        for b in range(1, self.order):
            if self.mul(a, b) == 1:
                return b
        raise ZeroDivisionError(a)
