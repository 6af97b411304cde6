"""Dense exact linear algebra over a finite field.

Matrices are 2-D numpy int64 arrays of field encodings (see ``codekit.gf``);
the field is passed explicitly.  Subspaces are represented by the rows of
their RREF basis, so equality of subspaces is equality of arrays.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from codekit.errors import BudgetExceeded, FieldError
from codekit.gf import Field

DEFAULT_BUDGET = 2**24


def default_budget() -> int:
    """Enumeration budget, overridable through ``CODEKIT_BUDGET``."""
    env = os.environ.get("CODEKIT_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"CODEKIT_BUDGET must be an integer, got {env!r}") from exc
    return DEFAULT_BUDGET


def as_matrix(F: Field, m, cols: Optional[int] = None) -> np.ndarray:
    """Coerce ``m`` to a 2-D int64 array with entries checked against ``F``."""
    a = np.asarray(m, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size or cols is None else a.reshape(0, cols)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    if a.size == 0 and cols is not None:
        a = a.reshape(a.shape[0] if a.shape[1] == cols else 0, cols)
    if np.any((a < 0) | (a >= F.order)):
        raise FieldError(f"matrix has entries outside {F}")
    return a


def empty(cols: int) -> np.ndarray:
    return np.zeros((0, cols), dtype=np.int64)


@dataclass(frozen=True)
class RREF:
    matrix: np.ndarray
    pivots: tuple[int, ...]
    rank: int

    @property
    def basis(self) -> np.ndarray:
        return self.matrix[: self.rank]


def rref(F: Field, m) -> RREF:
    """Reduced row echelon form; pivots chosen leftmost column first, then topmost row."""
    a = np.array(m, dtype=np.int64, copy=True)
    if a.ndim != 2:
        raise ValueError("rref expects a 2-D array")
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r] = F.mul(a[r], F.inv_int(lead))
        col = a[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            a[others] = F.sub(a[others], F.mul(col[others, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return RREF(a, tuple(pivots), r)


def row_basis(F: Field, m) -> np.ndarray:
    """RREF basis (nonzero rows) of the row space."""
    m = np.asarray(m, dtype=np.int64)
    if m.shape[0] == 0:
        return m.reshape(0, m.shape[1]).copy()
    return rref(F, m).basis.copy()


def rank(F: Field, m) -> int:
    m = np.asarray(m, dtype=np.int64)
    if m.shape[0] == 0:
        return 0
    return rref(F, m).rank


def kernel(F: Field, m) -> np.ndarray:
    """RREF basis of the right null space {v : m v^T = 0}, one vector per row."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    red = rref(F, m)
    piv = list(red.pivots)
    free = [c for c in range(cols) if c not in set(piv)]
    out = np.zeros((len(free), cols), dtype=np.int64)
    block = red.matrix[: red.rank]
    for idx, f in enumerate(free):
        out[idx, f] = 1
        if piv:
            out[idx, piv] = F.neg(block[:, f])
    return row_basis(F, out) if len(free) else out


def solve(F: Field, m, b) -> Optional[np.ndarray]:
    """One solution x of m x = b with free variables 0, or None when inconsistent."""
    m = np.asarray(m, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if b.shape[0] != m.shape[0]:
        raise ValueError("right-hand side length does not match row count")
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.zeros(cols, dtype=np.int64)
    red = rref(F, np.concatenate([m, b[:, None]], axis=1))
    if red.pivots and red.pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for row, c in enumerate(red.pivots):
        x[c] = red.matrix[row, cols]
    return x


def solve_left(F: Field, basis, targets) -> Optional[np.ndarray]:
    """Coefficients c with c @ basis = t for each row t of ``targets`` (None if any fails)."""
    basis = np.asarray(basis, dtype=np.int64)
    targets = np.atleast_2d(np.asarray(targets, dtype=np.int64))
    k = basis.shape[0]
    if targets.shape[0] == 0:
        return np.zeros((0, k), dtype=np.int64)
    red = rref(F, np.concatenate([basis.T, targets.T], axis=1))
    if red.pivots and red.pivots[-1] >= k:
        return None
    out = np.zeros((targets.shape[0], k), dtype=np.int64)
    for row, c in enumerate(red.pivots):
        out[:, c] = red.matrix[row, k:]
    return out


def inverse(F: Field, m) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    red = rref(F, np.concatenate([m, np.eye(n, dtype=np.int64)], axis=1))
    if red.rank < n or red.pivots[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return red.matrix[:, n:].copy()


def matmul(F: Field, a, b) -> np.ndarray:
    """Matrix product over ``F``."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    row_vec = a.ndim == 1
    if row_vec:
        a = a[None, :]
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    inner = b.shape[0]
    if F.prime_degree == 1:
        p = F.p
        if inner * (p - 1) ** 2 < 2**53:
            out = (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % p
        else:
            out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
            step = max(1, (2**53) // ((p - 1) ** 2 + 1))
            for s in range(0, inner, step):
                part = a[:, s : s + step].astype(np.float64) @ b[s : s + step].astype(np.float64)
                out = (out + part.astype(np.int64) % p) % p
    else:
        out = _matmul_ext(F, a, b)
    if vec:
        out = out[:, 0]
    return out[0] if row_vec else out


def _matmul_ext(F: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    rows, inner = a.shape
    cols = b.shape[1]
    out = np.zeros((rows, cols), dtype=np.int64)
    if inner == 0 or rows == 0 or cols == 0:
        return out
    chunk = max(1, 2**22 // max(1, rows * cols))
    if F.p == 2:
        for s in range(0, inner, chunk):
            prod = F.mul(a[:, s : s + chunk, None], b[None, s : s + chunk, :])
            out ^= np.bitwise_xor.reduce(prod, axis=1)
        return out
    p, r = F.p, F.prime_degree
    digits = np.zeros((r, rows, cols), dtype=np.int64)
    for s in range(0, inner, chunk):
        prod = F.mul(a[:, s : s + chunk, None], b[None, s : s + chunk, :])
        scale = 1
        for d in range(r):
            digits[d] += (prod // scale % p).sum(axis=1)
            scale *= p
        digits %= p
    scale = 1
    for d in range(r):
        out += digits[d] * scale
        scale *= p
    return out


def scale_rows(F: Field, m, coeffs) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    return F.mul(np.asarray(coeffs, dtype=np.int64)[:, None], m)


def in_rowspace(F: Field, basis, vecs) -> np.ndarray:
    """Boolean mask: which rows of ``vecs`` lie in rowspace(basis)."""
    vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
    basis = np.asarray(basis, dtype=np.int64)
    if basis.shape[0] == 0:
        return ~np.any(vecs, axis=1)
    red = rref(F, basis)
    resid = reduce_mod(F, vecs, red.basis, red.pivots)
    return ~np.any(resid, axis=1)


def reduce_mod(F: Field, vecs, basis_rref, pivots=None) -> np.ndarray:
    """Eliminate the pivot coordinates of an RREF basis from each row of ``vecs``.

    The result is the canonical representative of each coset ``v + rowspace``.
    """
    vecs = np.array(np.atleast_2d(vecs), dtype=np.int64, copy=True)
    basis_rref = np.asarray(basis_rref, dtype=np.int64)
    if basis_rref.shape[0] == 0:
        return vecs
    if pivots is None:
        pivots = [int(np.flatnonzero(row)[0]) for row in basis_rref]
    coeffs = vecs[:, list(pivots)]
    return F.sub(vecs, matmul(F, coeffs, basis_rref))


def span_sum(F: Field, *mats) -> np.ndarray:
    mats = [np.asarray(m, dtype=np.int64) for m in mats]
    return row_basis(F, np.concatenate(mats, axis=0))


def intersection(F: Field, a, b) -> np.ndarray:
    """RREF basis of rowspace(a) ∩ rowspace(b), via the kernel of the stacked duals."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[1]:
        raise ValueError("width mismatch")
    if a.shape[0] == 0 or b.shape[0] == 0:
        return empty(a.shape[1])
    stacked = np.concatenate([kernel(F, a), kernel(F, b)], axis=0)
    return kernel(F, stacked)


def restrict_columns(F: Field, m, keep) -> np.ndarray:
    """Row space of ``m`` projected onto the coordinates ``keep`` (in RREF)."""
    m = np.asarray(m, dtype=np.int64)
    keep = _check_index(keep, m.shape[1])
    return row_basis(F, m[:, keep])


def shorten(F: Field, m, zero_on) -> np.ndarray:
    """RREF basis of {c in rowspace(m) : c_i = 0 for i in zero_on} (full length)."""
    m = np.asarray(m, dtype=np.int64)
    zero_on = _check_index(zero_on, m.shape[1])
    if not zero_on:
        return row_basis(F, m)
    coeffs = kernel(F, m[:, zero_on].T)
    return row_basis(F, matmul(F, coeffs, m)) if coeffs.shape[0] else empty(m.shape[1])


def _check_index(idx, n: int) -> list[int]:
    idx = [int(i) for i in idx]
    if any(i < 0 or i >= n for i in idx):
        raise IndexError(f"index out of range for length {n}")
    return idx


def same_space(F: Field, a, b) -> bool:
    ra, rb = row_basis(F, a), row_basis(F, b)
    return ra.shape == rb.shape and bool(np.array_equal(ra, rb))


def contains(F: Field, big, small) -> bool:
    small = np.asarray(small, dtype=np.int64)
    if small.shape[0] == 0:
        return True
    return bool(np.all(in_rowspace(F, big, small)))


def extend_to_complement(F: Field, sub, space) -> np.ndarray:
    """Rows of ``space`` completing an RREF basis of ``sub`` to one of rowspace(space).

    Both inputs are row spaces of the same width and rowspace(sub) ⊆ rowspace(space).
    """
    sub = row_basis(F, sub)
    space = row_basis(F, space)
    chosen = []
    cur = sub
    for row in space:
        if cur.shape[0] == 0 or not in_rowspace(F, cur, row)[0]:
            chosen.append(row)
            cur = row_basis(F, np.concatenate([cur, row[None, :]], axis=0))
    return np.array(chosen, dtype=np.int64).reshape(len(chosen), space.shape[1])


# ---------------------------------------------------------------------------
# enumeration


def combination_table(F: Field, rows) -> np.ndarray:
    """All q^t linear combinations of the t given rows.

    Entry ``i`` uses coefficients given by the base-q digits of ``i``, first
    row most significant (the order of ``itertools.product``).
    """
    rows = np.asarray(rows, dtype=np.int64)
    n = rows.shape[1]
    table = np.zeros((1, n), dtype=np.int64)
    elems = F.elements()
    for row in rows:
        scaled = F.mul(elems[:, None], row[None, :])
        table = F.add(table[:, None, :], scaled[None, :, :]).reshape(-1, n)
    return table


def min_weight(
    F: Field,
    logical,
    stabilizer=None,
    budget: Optional[int] = None,
    floor: int = 1,
) -> tuple[int, np.ndarray]:
    """Minimum Hamming weight of ``x L + y S`` over x ≠ 0 and all y.

    ``logical`` rows L must be independent modulo rowspace(S), so the set
    enumerated is exactly span(L, S) minus span(S).  Logical coefficient
    vectors are normalized projectively (first nonzero entry 1), which leaves
    weights unchanged.  Returns ``(weight, witness)``; stops early once a
    vector of weight ``floor`` is seen.
    """
    L = np.asarray(logical, dtype=np.int64)
    n = L.shape[1]
    S = empty(n) if stabilizer is None else np.asarray(stabilizer, dtype=np.int64).reshape(-1, n)
    k, s = L.shape[0], S.shape[0]
    if k == 0:
        raise ValueError("no logical rows: the enumerated set is empty")
    q = F.order
    budget = default_budget() if budget is None else budget
    total = (q**k - 1) // (q - 1) * q**s
    if total > budget:
        raise BudgetExceeded(f"enumeration of {total} vectors exceeds budget {budget}")

    # inner table over the trailing stabilizer rows, outer loop over the rest
    t = 0
    while t < s and q ** (t + 1) * n <= 2**22:
        t += 1
    inner = combination_table(F, S[s - t :]) if t else np.zeros((1, n), dtype=np.int64)
    outer_rows = np.concatenate([L, S[: s - t]], axis=0)
    best, witness = n + 1, None
    for coeffs in _projective_prefix(q, k, s - t):
        base = matmul(F, np.array(coeffs, dtype=np.int64), outer_rows) if outer_rows.size else np.zeros(n, np.int64)
        cand = F.add(base[None, :], inner)
        weights = np.count_nonzero(cand, axis=1)
        i = int(np.argmin(weights))
        if weights[i] < best:
            best, witness = int(weights[i]), cand[i].copy()
            if best <= floor:
                break
    return best, witness


def _projective_prefix(q: int, k: int, extra: int):
    """Coefficient tuples (x, y) with x ∈ F^k projectively normalized and y ∈ F^extra."""
    for lead in range(k):
        for tail in itertools.product(range(q), repeat=k - lead - 1):
            x = (0,) * lead + (1,) + tail
            for y in itertools.product(range(q), repeat=extra):
                yield x + y
