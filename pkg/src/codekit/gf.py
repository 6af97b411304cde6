"""Finite fields F_{p^r} and field towers F_q ⊆ F_{q^k}.

Every field element is encoded as a non-negative integer: the coefficient
vector in the polynomial basis, read as base-p digits (lowest degree first).
For a tower extension F_{q^k} = F_q[X]/(gamma) the element sum_i c_i X^i with
c_i in F_q is encoded as sum_i c_i q^i, which is again a base-p digit string.
Addition is therefore digit-wise mod p in every field of characteristic p.

Scalar arithmetic works for any order up to ``MAX_ORDER``.  Vectorized
arithmetic on numpy integer arrays uses log/antilog tables and is available
for orders up to ``TABLE_ORDER``.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass
from types import SimpleNamespace
from typing import Iterator, Union

import numpy as np

from codekit.errors import FieldError

MAX_ORDER = 2**32
TABLE_ORDER = 2**16
# Full q x q add/mul tables below this order; log tables above it.
SMALL_TABLE_ORDER = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, r)`` with ``q == p**r``, or raise FieldError."""
    factors = prime_factors(q) if q > 1 else []
    if len(factors) != 1:
        raise FieldError(f"{q} is not a prime power")
    p = factors[0]
    r = 0
    while q > 1:
        q //= p
        r += 1
    return p, r


def _digits(x: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        x, d = divmod(x, base)
        out.append(d)
    return out


def _undigits(ds, base: int) -> int:
    x = 0
    for d in reversed(list(ds)):
        x = x * base + int(d)
    return x


class Field:
    """Arithmetic shared by prime fields, extension fields and tower extensions.

    Subclasses define ``p``, ``order``, ``prime_degree`` and ``mul_int``.
    """

    p: int
    order: int
    prime_degree: int

    # -- scalar arithmetic on int encodings -------------------------------

    def mul_int(self, a: int, b: int) -> int:
        raise NotImplementedError

    def add_int(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.prime_degree == 1:
            return (a + b) % self.p
        p = self.p
        out, scale = 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += ((da + db) % p) * scale
            scale *= p
        return out

    def neg_int(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.prime_degree == 1:
            return (-a) % self.p
        p = self.p
        out, scale = 0, 1
        while a:
            a, d = divmod(a, p)
            out += ((-d) % p) * scale
            scale *= p
        return out

    def sub_int(self, a: int, b: int) -> int:
        return self.add_int(a, self.neg_int(b))

    def pow_int(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv_int(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul_int(result, a)
            a = self.mul_int(a, a)
            e >>= 1
        return result

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.prime_degree == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow_int(a, self.order - 2)

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.order:
            raise FieldError(f"{a} is not an element of {self}")
        return a

    # -- convenience ------------------------------------------------------

    def elem(self, value: int) -> FieldElem:
        return FieldElem(self, int(value))

    @property
    def zero(self) -> FieldElem:
        return FieldElem(self, 0)

    @property
    def one(self) -> FieldElem:
        return FieldElem(self, 1)

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def random(self, rng: np.random.Generator, size=None) -> np.ndarray:
        return rng.integers(0, self.order, size=size, dtype=np.int64)

    # -- vectorized arithmetic on int arrays ------------------------------

    def _tables(self) -> SimpleNamespace:
        return _build_tables(self)

    def add(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.prime_degree == 1:
            return (a + b) % self.p
        t = self._tables()
        if t.add is not None:
            return t.add[a, b]
        return _digitwise(a, b, self.p, self.prime_degree, lambda x, y: x + y)

    def neg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        if self.prime_degree == 1:
            return (-a) % self.p
        return self._tables().neg[a]

    def sub(self, a, b) -> np.ndarray:
        return self.add(a, self.neg(b))

    def mul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.prime_degree == 1:
            return (a * b) % self.p
        t = self._tables()
        if t.mul is not None:
            return t.mul[a, b]
        out = t.exp[(t.log[a] + t.log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        if self.prime_degree == 1:
            return self._tables().inv[a]
        return self._tables().inv[a]

    def pow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        t = self._tables()
        out = t.exp[(t.log[a] * (e % (self.order - 1))) % (self.order - 1)]
        if e > 0:
            return np.where(a == 0, 0, out)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return out

    def sum(self, a, axis=None) -> np.ndarray:
        """Field sum of array entries along ``axis``."""
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            if axis is None:
                return np.bitwise_xor.reduce(a, axis=None)
            return np.bitwise_xor.reduce(a, axis=axis)
        if self.prime_degree == 1:
            return a.sum(axis=axis) % self.p
        p = self.p
        out = 0
        scale = 1
        for _ in range(self.prime_degree):
            out = out + ((a // scale % p).sum(axis=axis) % p) * scale
            scale *= p
        return np.asarray(out, dtype=np.int64)

    def dot(self, a, b) -> int:
        return int(self.sum(self.mul(a, b)))


def _digitwise(a, b, p, length, op):
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    scale = 1
    for _ in range(length):
        out += (op(a // scale % p, b // scale % p) % p) * scale
        scale *= p
    return out


@functools.lru_cache(maxsize=None)
def _build_tables(field: Field) -> SimpleNamespace:
    q = field.order
    if q > TABLE_ORDER:
        raise FieldError(f"vectorized arithmetic needs order <= {TABLE_ORDER}, got {q}")
    gen = primitive_element(field)
    exp = np.empty(q - 1, dtype=np.int64)
    x = 1
    for i in range(q - 1):
        exp[i] = x
        x = field.mul_int(x, gen)
    log = np.zeros(q, dtype=np.int64)
    log[exp] = np.arange(q - 1)
    inv = np.zeros(q, dtype=np.int64)
    inv[exp] = exp[(-np.arange(q - 1)) % (q - 1)]
    elems = np.arange(q, dtype=np.int64)
    neg = _digitwise(elems, elems, field.p, field.prime_degree, lambda x, y: -x)
    add = mul = None
    if q <= SMALL_TABLE_ORDER and field.prime_degree > 1:
        add = _digitwise(elems[:, None], elems[None, :], field.p, field.prime_degree,
                         lambda x, y: x + y)
        mul = exp[(log[:, None] + log[None, :]) % (q - 1)]
        mul[0, :] = 0
        mul[:, 0] = 0
    return SimpleNamespace(exp=exp, log=log, inv=inv, neg=neg, add=add, mul=mul, generator=gen)


def primitive_element(field: Field) -> int:
    """Smallest (by encoding) generator of the multiplicative group."""
    q = field.order
    if q == 2:
        return 1
    factors = prime_factors(q - 1)
    for g in range(2, q):
        if all(field.pow_int(g, (q - 1) // f) != 1 for f in factors):
            return g
    raise FieldError(f"no primitive element found in {field}")  # pragma: no cover


# ---------------------------------------------------------------------------
# polynomials over a field: lists of int encodings, lowest degree first


def poly_trim(f: list[int]) -> list[int]:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_add(F: Field, f, g) -> list[int]:
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return poly_trim([F.add_int(a, b) for a, b in zip(f, g)])


def poly_sub(F: Field, f, g) -> list[int]:
    return poly_add(F, f, [F.neg_int(c) for c in g])


def poly_mul(F: Field, f, g) -> list[int]:
    f, g = poly_trim(f), poly_trim(g)
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] = F.add_int(out[i + j], F.mul_int(a, b))
    return poly_trim(out)


def poly_divmod(F: Field, f, g) -> tuple[list[int], list[int]]:
    f, g = poly_trim(f), poly_trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = F.inv_int(g[-1])
    rem = list(f)
    quot = [0] * max(len(f) - len(g) + 1, 0)
    for i in range(len(f) - len(g), -1, -1):
        c = F.mul_int(rem[i + len(g) - 1], lead_inv)
        quot[i] = c
        if c:
            for j, gj in enumerate(g):
                rem[i + j] = F.sub_int(rem[i + j], F.mul_int(c, gj))
    return poly_trim(quot), poly_trim(rem[: len(g) - 1])


def poly_mod(F: Field, f, g) -> list[int]:
    return poly_divmod(F, f, g)[1]


def poly_powmod(F: Field, f, e: int, mod) -> list[int]:
    result = [1]
    base = poly_mod(F, f, mod)
    while e:
        if e & 1:
            result = poly_mod(F, poly_mul(F, result, base), mod)
        base = poly_mod(F, poly_mul(F, base, base), mod)
        e >>= 1
    return result


def poly_gcd(F: Field, f, g) -> list[int]:
    f, g = poly_trim(f), poly_trim(g)
    while g:
        f, g = g, poly_mod(F, f, g)
    if not f:
        return f
    lead_inv = F.inv_int(f[-1])
    return [F.mul_int(c, lead_inv) for c in f]


def poly_eval(F: Field, f, x: int) -> int:
    acc = 0
    for c in reversed(poly_trim(f)):
        acc = F.add_int(F.mul_int(acc, x), c)
    return acc


def is_irreducible(F: Field, f) -> bool:
    """Rabin's test for a monic polynomial ``f`` over ``F``."""
    f = poly_trim(f)
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    q = F.order
    x = [0, 1]

    def frob_power(i):
        h = x
        for _ in range(i):
            h = poly_powmod(F, h, q, f)
        return h

    if poly_trim(poly_sub(F, frob_power(k), x)):
        return False
    for s in prime_factors(k):
        h = poly_sub(F, frob_power(k // s), x)
        if len(poly_gcd(F, f, h)) != 1:
            return False
    return True


def smallest_irreducible(F: Field, k: int) -> tuple[int, ...]:
    """Monic irreducible degree-``k`` polynomial over ``F`` with the smallest encoding.

    Candidates X^k + sum_{i<k} c_i X^i are ordered by the integer sum_i c_i q^i.
    """
    q = F.order
    if k == 1:
        return (0, 1)
    for m in range(1, q**k):
        coeffs = _digits(m, q, k)
        if coeffs[0] == 0:  # divisible by X
            continue
        f = coeffs + [1]
        if is_irreducible(F, f):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {k} over {F}")  # pragma: no cover


# ---------------------------------------------------------------------------
# concrete fields


@dataclass(frozen=True)
class FieldSpec(Field):
    """The field F_{p^r} = F_p[X]/(modulus).

    Attributes:
        p: prime characteristic.
        r: extension degree over F_p.
        modulus: monic irreducible polynomial of degree r, low-to-high.
    """

    p: int
    r: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if self.r < 1:
            raise FieldError("extension degree must be >= 1")
        if self.p**self.r > MAX_ORDER:
            raise FieldError(f"field order {self.p}^{self.r} exceeds {MAX_ORDER}")
        mod = tuple(int(c) for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.r + 1 or mod[-1] != 1 or any(not 0 <= c < self.p for c in mod):
            raise FieldError(f"modulus {list(mod)} is not monic of degree {self.r} over F_{self.p}")
        if self.r > 1 and not is_irreducible(_prime_field(self.p), list(mod)):
            raise FieldError(f"modulus {list(mod)} is reducible over F_{self.p}")

    @property
    def order(self) -> int:
        return self.p**self.r

    @property
    def prime_degree(self) -> int:
        return self.r

    def __str__(self) -> str:
        return f"F_{self.order}"

    def mul_int(self, a: int, b: int) -> int:
        p, r = self.p, self.r
        if r == 1:
            return a * b % p
        if p == 2:
            mod = _undigits(self.modulus, 2)
            out = 0
            while b:
                if b & 1:
                    out ^= a
                b >>= 1
                a <<= 1
                if (a >> r) & 1:
                    a ^= mod
            return out
        da, db = _digits(a, p, r), _digits(b, p, r)
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        mod = self.modulus
        for i in range(2 * r - 2, r - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(r):
                    prod[i - r + j] -= c * mod[j]
        return _undigits([c % p for c in prod[:r]], p)

    def coeffs(self, a: int) -> list[int]:
        return _digits(self.check(a), self.p, self.r)

    def from_coeffs(self, coeffs) -> int:
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != self.r or any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"{coeffs} is not a coefficient vector of {self}")
        return _undigits(coeffs, self.p)


@functools.lru_cache(maxsize=None)
def _prime_field(p: int) -> FieldSpec:
    return FieldSpec(p, 1, (0, 1))


@dataclass(frozen=True)
class ExtensionField(Field):
    """F_{q^k} = F_q[X]/(gamma) with coefficients kept over a non-prime base F_q."""

    base: Field
    gamma: tuple[int, ...]

    def __post_init__(self):
        gamma = tuple(int(c) for c in self.gamma)
        object.__setattr__(self, "gamma", gamma)
        k = len(gamma) - 1
        if k < 1 or gamma[-1] != 1 or any(not 0 <= c < self.base.order for c in gamma):
            raise FieldError(f"gamma {list(gamma)} is not monic over {self.base}")
        if self.base.order**k > MAX_ORDER:
            raise FieldError(f"field order {self.base.order}^{k} exceeds {MAX_ORDER}")
        if not is_irreducible(self.base, list(gamma)):
            raise FieldError(f"gamma {list(gamma)} is reducible over {self.base}")

    @property
    def k(self) -> int:
        return len(self.gamma) - 1

    @property
    def p(self) -> int:  # type: ignore[override]
        return self.base.p

    @property
    def order(self) -> int:  # type: ignore[override]
        return self.base.order**self.k

    @property
    def prime_degree(self) -> int:  # type: ignore[override]
        return self.base.prime_degree * self.k

    def __str__(self) -> str:
        return f"F_{self.order}/{self.base}"

    def mul_int(self, a: int, b: int) -> int:
        B, q, k = self.base, self.base.order, self.k
        da, db = _digits(a, q, k), _digits(b, q, k)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] = B.add_int(prod[i + j], B.mul_int(x, y))
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i]
            if c:
                for j in range(k):
                    prod[i - k + j] = B.sub_int(prod[i - k + j], B.mul_int(c, self.gamma[j]))
        return _undigits(prod[:k], q)

    def coeffs(self, a: int) -> list[int]:
        return _digits(self.check(a), self.base.order, self.k)

    def from_coeffs(self, coeffs) -> int:
        coeffs = [self.base.check(c) for c in coeffs]
        if len(coeffs) != self.k:
            raise FieldError(f"expected {self.k} coefficients over {self.base}")
        return _undigits(coeffs, self.base.order)


def make_field(p: int, r: int = 1) -> FieldSpec:
    """F_{p^r} with the smallest-encoding monic irreducible modulus."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if r < 1:
        raise FieldError("extension degree must be >= 1")
    if p**r > MAX_ORDER:
        raise FieldError(f"field order {p}^{r} exceeds {MAX_ORDER}")
    return FieldSpec(p, r, smallest_irreducible(_prime_field(p), r))


@dataclass(frozen=True)
class FieldElem:
    """A single field element with operator overloading."""

    field: Field
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.check(self.value))

    @property
    def coeffs(self) -> list:
        """Polynomial-basis coefficients.

        Residues mod p for a FieldSpec; base-field FieldElems for a tower extension.
        """
        if isinstance(self.field, ExtensionField):
            return [FieldElem(self.field.base, c) for c in self.field.coeffs(self.value)]
        return self.field.coeffs(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldError(f"mismatched fields {self.field} and {other.field}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field.check(int(other))
        return NotImplemented

    def __add__(self, other):
        return FieldElem(self.field, self.field.add_int(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub_int(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElem(self.field, self.field.sub_int(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul_int(self.value, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(self.field, self.field.neg_int(self.value))

    def inverse(self) -> FieldElem:
        return FieldElem(self.field, self.field.inv_int(self.value))

    def __truediv__(self, other):
        return self * FieldElem(self.field, self._other(other)).inverse()

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow_int(self.value, e))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElem({self.field}, {self.value})"


AnyField = Union[FieldSpec, ExtensionField]


# ---------------------------------------------------------------------------
# towers


@dataclass(frozen=True)
class TowerSpec:
    """A degree-k extension F_q ⊆ F_{q^k} = F_q[X]/(gamma).

    Elements of ``ext`` are length-k coefficient vectors over ``base``;
    ``flatten`` reads them off and ``unflatten`` rebuilds them.
    """

    base: Field
    gamma: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(int(c) for c in self.gamma))

    @property
    def k(self) -> int:
        return len(self.gamma) - 1

    @functools.cached_property
    def ext(self) -> Field:
        base = self.base
        if self.k == 1:
            return base
        if isinstance(base, FieldSpec) and base.r == 1:
            return FieldSpec(base.p, self.k, self.gamma)
        return ExtensionField(base, self.gamma)

    def _check_ext(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if np.any((x < 0) | (x >= self.ext.order)):
            raise FieldError(f"element not in {self.ext}")
        return x

    def flatten(self, x) -> np.ndarray:
        """Coordinates over the base in the basis 1, X, ..., X^{k-1}; appends an axis."""
        x = self._check_ext(x)
        q = self.base.order
        return np.stack([(x // q**i) % q for i in range(self.k)], axis=-1)

    def unflatten(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        if v.shape[-1] != self.k:
            raise FieldError(f"expected trailing dimension {self.k}")
        if np.any((v < 0) | (v >= self.base.order)):
            raise FieldError(f"coordinates not in {self.base}")
        q = self.base.order
        return (v * q ** np.arange(self.k, dtype=np.int64)).sum(axis=-1)

    def basis_element(self, i: int) -> int:
        """Encoding of X^i (reduced) in ext."""
        return self.ext.pow_int(self.base.order if self.k > 1 else 0, i) if i else 1

    def trace(self, x: int) -> int:
        """tr_{F_{q^k}/F_q}(x) = sum_i x^{q^i}."""
        x = int(self._check_ext(x))
        E, q = self.ext, self.base.order
        acc, y = 0, x
        for _ in range(self.k):
            acc = E.add_int(acc, y)
            y = E.pow_int(y, q)
        if acc >= q:
            raise FieldError("trace did not land in the base field")  # pragma: no cover
        return acc

    def mul_matrix(self, a: int) -> np.ndarray:
        """k x k matrix over the base of the F_q-linear map z -> a*z."""
        cols = [self.ext.mul_int(int(a), self.basis_element(j)) for j in range(self.k)]
        return self.flatten(np.array(cols)).T.copy()

    def trace_gram(self) -> np.ndarray:
        """Gram matrix tr(X^i X^j) of the trace form in the polynomial basis."""
        return _trace_gram(self)

    def trace_functional(self) -> np.ndarray:
        """Row vector t with t . flatten(x) = tr(x)."""
        return np.array([self.trace(self.basis_element(i)) for i in range(self.k)], dtype=np.int64)


@functools.lru_cache(maxsize=None)
def _trace_gram(t: TowerSpec) -> np.ndarray:
    g = np.empty((t.k, t.k), dtype=np.int64)
    for i in range(t.k):
        for j in range(t.k):
            g[i, j] = t.trace(t.ext.mul_int(t.basis_element(i), t.basis_element(j)))
    g.setflags(write=False)
    return g


def make_tower(base: Field, k: int) -> TowerSpec:
    """Tower over ``base`` of degree ``k`` using the smallest-encoding irreducible gamma."""
    if k < 1:
        raise FieldError("tower degree must be >= 1")
    if base.order**k > MAX_ORDER:
        raise FieldError(f"field order {base.order}^{k} exceeds {MAX_ORDER}")
    return TowerSpec(base, smallest_irreducible(base, k))


def trace_to_base(t: TowerSpec, x: int) -> int:
    return t.trace(x)


def flatten(t: TowerSpec, x) -> np.ndarray:
    return t.flatten(x)


def unflatten(t: TowerSpec, v) -> np.ndarray:
    return t.unflatten(v)


# ---------------------------------------------------------------------------
# parsing field descriptions like "13", "4^2", "2^2^2"

_FIELD_RE = re.compile(r"^\d+(\^\d+)*$")


def field_from_order(q: int) -> FieldSpec:
    p, r = prime_power(q)
    return make_field(p, r)


def parse_field(text: str) -> Field:
    """Parse ``"q"`` or ``"q^k1^k2..."`` into a field.

    The leading ``q`` is a prime power built by make_field; each further
    ``^k`` adds a tower level of degree k over the previous field.
    ``"4^2"`` is F_16 presented over F_4.
    """
    text = text.strip()
    if not _FIELD_RE.match(text):
        raise FieldError(f"cannot parse field description {text!r}")
    parts = [int(x) for x in text.split("^")]
    F: Field = field_from_order(parts[0])
    if len(parts) > 1 and is_prime(parts[0]):
        # "2^4" means F_16 with a prime-field modulus, not a tower over F_2
        F = make_field(parts[0], parts[1])
        parts = parts[1:]
    for k in parts[1:]:
        F = make_tower(F, k).ext
    return F


def field_label(F: Field) -> str:
    return str(F)


def iter_vectors(F: Field, length: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(F.order), repeat=length)
