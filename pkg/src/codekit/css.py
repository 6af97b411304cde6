"""CSS codes with explicit encoding maps, concatenation and restriction.

A CssCode is stored through the data that determines it:

* ``x_stab``: RREF basis of Q_X^⊥ (the X-stabilizers),
* ``encz``: k x n matrix whose row j is the canonical representative of
  Enc_Z(e_j), reduced modulo ``x_stab``,
* optionally ``encx``: k x n X-representatives, together with the Gram matrix
  ``pairing`` they realize, ``encx @ encz.T == pairing``.

Q_Z = span(encz) + Q_X^⊥ and Q_X = (Q_X^⊥)^⊥ follow; both are computed lazily
so that long concatenated codes never materialize large bases.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from codekit import flinalg as fl
from codekit.errors import BudgetExceeded, CompatibilityError, InvalidCodeError
from codekit.gf import Field, TowerSpec


@dataclass(frozen=True, eq=False)
class CssCode:
    """A CSS code CSS(Q_X, Q_Z; Enc_X, Enc_Z) over ``field``.

    Attributes:
        field: alphabet F_q.
        x_stab: RREF basis of Q_X^⊥.
        encz: k x n canonical Z-representatives (rows).
        encx: optional k x n X-representatives (rows).
        pairing: Gram matrix ``encx @ encz.T`` when ``encx`` is present.
        info: distance bounds and construction notes.
    """

    field: Field
    x_stab: np.ndarray
    encz: np.ndarray
    encx: Optional[np.ndarray] = None
    pairing: Optional[np.ndarray] = None
    info: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.encz.shape[1]

    @property
    def k(self) -> int:
        return self.encz.shape[0]

    @property
    def params(self) -> tuple[int, int]:
        return self.n, self.k

    @property
    def encz_reps(self) -> np.ndarray:
        """n x k matrix; column j is the canonical representative of Enc_Z(e_j)."""
        return self.encz.T

    @property
    def encx_reps(self) -> Optional[np.ndarray]:
        return None if self.encx is None else self.encx.T

    @functools.cached_property
    def x_pivots(self) -> tuple[int, ...]:
        return tuple(int(np.flatnonzero(row)[0]) for row in self.x_stab)

    @functools.cached_property
    def qz_basis(self) -> np.ndarray:
        return fl.span_sum(self.field, self.x_stab, self.encz)

    @functools.cached_property
    def qx_basis(self) -> np.ndarray:
        return fl.kernel(self.field, self.x_stab) if self.x_stab.shape[0] else np.eye(self.n, dtype=np.int64)

    @functools.cached_property
    def z_stab(self) -> np.ndarray:
        return fl.kernel(self.field, self.qz_basis)

    def qz_spanning(self) -> np.ndarray:
        """Canonical representatives together with the X-stabilizer rows; spans Q_Z."""
        return np.concatenate([self.encz, self.x_stab], axis=0)

    def canonical(self, vecs) -> np.ndarray:
        """Reduce rows modulo Q_X^⊥ to canonical coset representatives."""
        return fl.reduce_mod(self.field, vecs, self.x_stab, self.x_pivots)

    def z_logical(self, vecs) -> Optional[np.ndarray]:
        """Logical coordinates of Q_Z vectors, or None if some vector lies outside Q_Z."""
        basis = self.qz_spanning()
        coeffs = fl.solve_left(self.field, basis, vecs)
        return None if coeffs is None else coeffs[:, : self.k]

    def encode_z(self, msg) -> np.ndarray:
        return fl.matmul(self.field, np.asarray(msg, dtype=np.int64), self.encz)

    def with_info(self, **kv) -> CssCode:
        info = dict(self.info)
        info.update(kv)
        return CssCode(self.field, self.x_stab, self.encz, self.encx, self.pairing, info)

    def validate(self) -> None:
        """Check every structural invariant; raise InvalidCodeError on failure."""
        F = self.field
        s, n = self.x_stab.shape
        if self.encz.ndim != 2 or self.encz.shape[1] != n:
            raise InvalidCodeError("encz width differs from code length")
        for name, m in (("x_stab", self.x_stab), ("encz", self.encz)):
            if np.any((m < 0) | (m >= F.order)):
                raise InvalidCodeError(f"{name} has entries outside {F}")
        if s and not np.array_equal(fl.row_basis(F, self.x_stab), self.x_stab):
            raise InvalidCodeError("x_stab is not an RREF basis of Q_X^⊥")
        if not np.array_equal(self.canonical(self.encz), self.encz):
            raise InvalidCodeError("encz representatives are not canonical modulo Q_X^⊥")
        if self.k and fl.rank(F, self.encz) != self.k:
            raise InvalidCodeError("encz representatives are dependent modulo Q_X^⊥")
        if self.encx is not None:
            self._validate_encx()

    def _validate_encx(self) -> None:
        F = self.field
        if self.encx.shape != self.encz.shape:
            raise InvalidCodeError("encx shape differs from encz shape")
        if self.x_stab.shape[0] and np.any(fl.matmul(F, self.encx, self.x_stab.T)):
            raise InvalidCodeError("X-representative outside Q_X")
        gram = fl.matmul(F, self.encx, self.encz.T)
        if self.pairing is None or not np.array_equal(gram, self.pairing):
            raise InvalidCodeError("encx does not realize the recorded pairing")
        if fl.rank(F, gram) != self.k:
            raise InvalidCodeError("X-representatives are dependent modulo Q_Z^⊥")

    def __eq__(self, other) -> bool:
        if not isinstance(other, CssCode) or self.field != other.field:
            return False
        return (
            np.array_equal(self.x_stab, other.x_stab)
            and np.array_equal(self.encz, other.encz)
            and _opt_equal(self.encx, other.encx)
            and _opt_equal(self.pairing, other.pairing)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"CssCode([[{self.n},{self.k}]]_{self.field.order})"


def _opt_equal(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return bool(np.array_equal(a, b))


def from_parts(F: Field, x_stab, encz, encx=None, pairing=None, info=None) -> CssCode:
    """Build from a spanning set of Q_X^⊥ and Z-representatives (canonicalized here).

    Raises InvalidCodeError when the representatives do not form a basis of
    Q_Z / Q_X^⊥.
    """
    encz = np.asarray(encz, dtype=np.int64)
    n = encz.shape[1]
    x_stab = fl.row_basis(F, np.asarray(x_stab, dtype=np.int64).reshape(-1, n))
    pivots = [int(np.flatnonzero(row)[0]) for row in x_stab]
    reps = fl.reduce_mod(F, encz, x_stab, pivots)
    if reps.shape[0] and fl.rank(F, reps) != reps.shape[0]:
        raise InvalidCodeError("Z-representatives are dependent modulo Q_X^⊥")
    if encx is not None:
        encx = np.asarray(encx, dtype=np.int64)
        if pairing is None:
            pairing = fl.matmul(F, encx, reps.T)
        pairing = np.asarray(pairing, dtype=np.int64)
    code = CssCode(F, x_stab, reps, encx, pairing, dict(info or {}))
    code.validate()
    return code


def make_css(F: Field, qx, qz, encz_reps) -> CssCode:
    """CSS(Q_X, Q_Z; Enc_Z) from bases of Q_X, Q_Z and an n x k representative matrix.

    Validates Q_X^⊥ ⊆ Q_Z, k = dim Q_Z − dim Q_X^⊥, every representative in
    Q_Z, and independence of the representatives modulo Q_X^⊥.
    """
    qx = np.asarray(qx, dtype=np.int64)
    qz = np.asarray(qz, dtype=np.int64)
    reps = np.asarray(encz_reps, dtype=np.int64)
    n = qz.shape[1] if qz.ndim == 2 else reps.shape[0]
    qx = qx.reshape(-1, n)
    qz = qz.reshape(-1, n)
    reps = reps.reshape(n, -1).T
    x_stab = fl.kernel(F, qx) if qx.shape[0] else np.eye(n, dtype=np.int64)
    if not fl.contains(F, qz, x_stab):
        raise InvalidCodeError("Q_X^⊥ is not contained in Q_Z")
    k = fl.rank(F, qz) - x_stab.shape[0]
    if reps.shape[0] != k:
        raise InvalidCodeError(f"expected {k} Z-representatives, got {reps.shape[0]}")
    if k and not fl.contains(F, qz, reps):
        raise InvalidCodeError("Z-representative outside Q_Z")
    return from_parts(F, x_stab, reps)


def lift_css(F: Field, gen) -> CssCode:
    """CSS(F_q^n, C; Enc_Z = rows of ``gen``)."""
    gen = np.asarray(gen, dtype=np.int64)
    return from_parts(F, fl.empty(gen.shape[1]), gen)


# ---------------------------------------------------------------------------
# bilinear forms and compatible X encoders


@dataclass(frozen=True)
class BilinearSpec:
    """A bilinear form on F_q^k: the standard dot product or a tower's trace form."""

    kind: str
    k: int
    tower: Optional[TowerSpec] = None

    def __post_init__(self):
        if self.kind not in ("standard", "trace"):
            raise ValueError(f"unknown bilinear form kind {self.kind!r}")
        if self.kind == "trace" and (self.tower is None or self.tower.k != self.k):
            raise ValueError("trace form needs a tower of matching degree")

    @classmethod
    def standard(cls, k: int) -> BilinearSpec:
        return cls("standard", k)

    @classmethod
    def trace(cls, tower: TowerSpec) -> BilinearSpec:
        return cls("trace", tower.k, tower)

    def gram(self) -> np.ndarray:
        if self.kind == "standard":
            return np.eye(self.k, dtype=np.int64)
        return np.array(self.tower.trace_gram(), dtype=np.int64)

    def field(self) -> Optional[Field]:
        return None if self.tower is None else self.tower.base


def compatible_encx(code: CssCode, form: BilinearSpec) -> CssCode:
    """Return ``code`` with X-representatives compatible with Enc_Z under ``form``.

    Follows the dual-basis construction: a_i = e_i and b_j = G^{-1} e_j are
    dual under B; f_j = Enc_Z(e_j) and the e_i are dual bases of the two
    logical quotients under x'·z'.  M (columns = Enc_Z(b_j) in the f basis)
    is G^{-1}, and Enc_X(a_i) is row i of M^{-1} in the e basis.
    """
    F = code.field
    k, n = code.k, code.n
    if form.k != k:
        raise CompatibilityError(f"form has dimension {form.k}, code has k = {k}")
    G = form.gram()
    try:
        g_inv = fl.inverse(F, G)
    except ZeroDivisionError as exc:
        raise CompatibilityError("bilinear form is degenerate") from exc
    # dual basis e_i of Q_X / Q_Z^⊥: e_i ⊥ Q_X^⊥ and e_i · f_j = δ_ij
    system = np.concatenate([code.x_stab, code.encz], axis=0)
    s = code.x_stab.shape[0]
    e_basis = np.zeros((k, n), dtype=np.int64)
    for i in range(k):
        rhs = np.zeros(s + k, dtype=np.int64)
        rhs[s + i] = 1
        sol = fl.solve(F, system, rhs)
        if sol is None:
            raise CompatibilityError("dim(Q_X / Q_Z^⊥) differs from k")
        e_basis[i] = sol
    m = g_inv  # coordinates of Enc_Z(b_j) in the f basis
    m_inv = fl.inverse(F, m)
    encx = fl.matmul(F, m_inv, e_basis) if k else e_basis
    pairing = fl.matmul(F, encx, code.encz.T)
    if not np.array_equal(pairing, G):
        raise CompatibilityError("constructed X encoder does not realize the form")  # pragma: no cover
    out = CssCode(F, code.x_stab, code.encz, encx, pairing, dict(code.info))
    out.validate()
    return out


def check_compatible(code: CssCode, form: BilinearSpec) -> bool:
    return code.encx is not None and code.pairing is not None and np.array_equal(code.pairing, form.gram())


# ---------------------------------------------------------------------------
# concatenation and restriction


def _inner_encode(inner_rows: np.ndarray, tower: TowerSpec, outer_vecs: np.ndarray) -> np.ndarray:
    """Apply inner representatives symbol-wise to rows of F_{q^k} vectors."""
    F = tower.base
    m, n_out = outer_vecs.shape
    flat = tower.flatten(outer_vecs).reshape(m * n_out, tower.k)
    blocks = fl.matmul(F, flat, inner_rows)
    return blocks.reshape(m, n_out * inner_rows.shape[1])


def _basis_multiples(tower: TowerSpec, vecs: np.ndarray) -> np.ndarray:
    """Rows X^t * v for t < k, ordered (v, t)."""
    E = tower.ext
    scalars = np.array([tower.basis_element(t) for t in range(tower.k)], dtype=np.int64)
    out = E.mul(vecs[:, None, :], scalars[None, :, None])
    return out.reshape(vecs.shape[0] * tower.k, vecs.shape[1])


def concatenate(inner: CssCode, tower: TowerSpec, outer: CssCode) -> CssCode:
    """The concatenated code Q_in ∘ Q_out over the tower's base field.

    Logical index ``j * k_in + t`` is the outer logical X^t e_j; coordinate
    index ``i * n_in + a`` is coordinate ``a`` of the inner block for outer
    symbol ``i``.
    """
    F = tower.base
    if inner.field != F:
        raise CompatibilityError(f"inner code is over {inner.field}, tower base is {F}")
    if outer.field != tower.ext:
        raise CompatibilityError(f"outer code is over {outer.field}, tower extension is {tower.ext}")
    if inner.k != tower.k:
        raise CompatibilityError(f"inner k = {inner.k} differs from tower degree {tower.k}")
    if not check_compatible(inner, BilinearSpec.trace(tower)):
        raise CompatibilityError("inner encoders are not compatible under the trace form")
    if not check_compatible(outer, BilinearSpec.standard(outer.k)):
        raise CompatibilityError("outer encoders are not compatible under the standard form")
    n_in, n_out = inner.n, outer.n
    n = n_in * n_out
    # per-block inner X-stabilizers
    s_in = inner.x_stab.shape[0]
    blocks = np.zeros((n_out * s_in, n), dtype=np.int64)
    for i in range(n_out):
        blocks[i * s_in : (i + 1) * s_in, i * n_in : (i + 1) * n_in] = inner.x_stab
    outer_stab = _inner_encode(inner.encz, tower, _basis_multiples(tower, outer.x_stab))
    x_stab = np.concatenate([blocks, outer_stab], axis=0)
    encz = _inner_encode(inner.encz, tower, _basis_multiples(tower, outer.encz))
    encx = _inner_encode(inner.encx, tower, _basis_multiples(tower, outer.encx))
    pairing = np.kron(np.eye(outer.k, dtype=np.int64), np.asarray(inner.pairing))
    d_in, d_out = distance_bound(inner), distance_bound(outer)
    info = {
        "construction": "concatenation",
        "d_bound": d_in * d_out,
        "d_reason": "concatenation product bound",
    }
    return from_parts(F, x_stab, encz, encx, pairing, info)


def restrict(code: CssCode, s) -> CssCode:
    """Q|_S = CSS(Q_X, im Enc_Z(S); Enc_Z|_S) for S spanned by the rows of ``s``.

    The X encoder is dropped; rebuild it with compatible_encx when needed.
    """
    F = code.field
    s = np.asarray(s, dtype=np.int64).reshape(-1, code.k)
    if s.shape[0] == 0:
        raise InvalidCodeError("restriction to S = {0} leaves no logical qudits")
    if fl.rank(F, s) != s.shape[0]:
        raise InvalidCodeError("rows of S are dependent")
    encz = fl.matmul(F, s, code.encz)
    info = {k: v for k, v in code.info.items() if k in ("d_bound", "d_reason")}
    if "d_bound" in info:
        info["d_reason"] = f"{info['d_reason']}, kept by restriction"
    info["construction"] = "restriction"
    return from_parts(F, code.x_stab, encz, info=info)


# ---------------------------------------------------------------------------
# distance


def distance_bound(code: CssCode) -> int:
    """Best recorded lower bound on the distance (exact value when known)."""
    if "d_exact" in code.info:
        return int(code.info["d_exact"])
    return int(code.info.get("d_bound", 1))


def _x_logical_rows(code: CssCode) -> np.ndarray:
    if code.encx is not None:
        return code.encx
    return fl.extend_to_complement(code.field, code.z_stab, code.qx_basis)


def css_distance_sides(code: CssCode, budget: Optional[int] = None) -> dict:
    """Exact minimum weights of Q_Z ∖ Q_X^⊥ and Q_X ∖ Q_Z^⊥, each None if over budget."""
    if code.k == 0:
        raise InvalidCodeError("k = 0: no logical operators, distance undefined")
    F = code.field
    budget = fl.default_budget() if budget is None else budget
    q = F.order
    out: dict = {}
    dim_z = code.x_stab.shape[0] + code.k
    if q**dim_z <= budget:
        out["z"] = fl.min_weight(F, code.encz, code.x_stab, budget=budget)[0]
    else:
        out["z"] = None
    dim_x = code.n - code.x_stab.shape[0]
    if q**dim_x <= budget:
        out["x"] = fl.min_weight(F, _x_logical_rows(code), code.z_stab, budget=budget)[0]
    else:
        out["x"] = None
    return out


def css_distance_bruteforce(code: CssCode, budget: Optional[int] = None) -> int:
    """Exact CSS distance by enumerating both Q_Z and Q_X."""
    budget = fl.default_budget() if budget is None else budget
    q = code.field.order
    dim_z = code.x_stab.shape[0] + code.k
    dim_x = code.n - code.x_stab.shape[0]
    if code.k == 0:
        raise InvalidCodeError("k = 0: no logical operators, distance undefined")
    if q**dim_x + q**dim_z > budget:
        raise BudgetExceeded(f"q^dim(Q_X) + q^dim(Q_Z) = {q**dim_x + q**dim_z} exceeds budget {budget}")
    sides = css_distance_sides(code, budget)
    return min(sides["x"], sides["z"])


@dataclass(frozen=True)
class DistanceReport:
    value: int
    exact: bool
    z_side: tuple[Optional[int], str]
    x_side: tuple[Optional[int], str]
    reason: str

    def describe(self) -> str:
        if self.exact:
            return f"exact {self.value}"
        return f"certified ≥ {self.value} ({self.reason})"


def css_distance(code: CssCode, budget: Optional[int] = None) -> DistanceReport:
    """Exact distance when enumerable, else the best certified lower bound.

    A side that is enumerable is reported exactly; the other side falls back
    to the construction bound recorded in ``code.info``.
    """
    sides = css_distance_sides(code, budget)
    z_bound = int(code.info.get("d_z_bound", code.info.get("d_bound", 1)))
    x_bound = int(code.info.get("d_x_bound", code.info.get("d_bound", 1)))
    reason = code.info.get("d_reason", "trivial bound")
    z = (sides["z"], "exact") if sides["z"] is not None else (z_bound, "certified")
    x = (sides["x"], "exact") if sides["x"] is not None else (x_bound, "certified")
    exact = z[1] == "exact" and x[1] == "exact"
    value = min(z[0], x[0])
    if not exact:
        # a certified overall bound may beat the per-side numbers
        value = max(value, int(code.info.get("d_bound", 1))) if z[1] == x[1] == "certified" else value
    return DistanceReport(value, exact, z, x, "brute force" if exact else reason)
