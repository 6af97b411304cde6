"""Transversal CCZ codes from classical codes, and certificate verification.

For three CSS codes with Z-representatives z' of logicals z and a
coefficients vector b, the transversal CCZ identity reads

    sum_j z1_j z2_j z3_j  ==  sum_j b_j z1'_j z2'_j z3'_j

for every logical triple and every choice of representatives.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from codekit import flinalg as fl
from codekit.classical import LinearCode, distance_bruteforce, dual_code, full_rs, make_code, star, star_product_span
from codekit.css import CssCode, distance_bound, from_parts
from codekit.errors import BudgetExceeded, ConstraintError, InvalidCodeError
from codekit.gf import Field

# Deterministic verification is refused above this many field multiply-adds.
DETERMINISTIC_LIMIT = 10**9


@dataclass(frozen=True, eq=False)
class TransversalTriple:
    """Three [[n, k]]_q CSS codes and a coefficients vector b."""

    codes: tuple[CssCode, CssCode, CssCode]
    b: np.ndarray
    same_code: bool
    info: dict = field(default_factory=dict, compare=False)

    @property
    def field(self) -> Field:
        return self.codes[0].field

    @property
    def n(self) -> int:
        return self.codes[0].n

    @property
    def k(self) -> int:
        return self.codes[0].k

    def validate(self) -> None:
        F = self.field
        for c in self.codes:
            if c.field != F or c.n != self.n or c.k != self.k:
                raise InvalidCodeError("triple members must share field, n and k")
            c.validate()
        if self.b.shape != (self.n,):
            raise InvalidCodeError(f"coefficients vector has length {self.b.shape}, expected {self.n}")
        if np.any((self.b < 0) | (self.b >= F.order)):
            raise InvalidCodeError("coefficients vector has entries outside the field")
        if self.same_code and not (self.codes[0] == self.codes[1] == self.codes[2]):
            raise InvalidCodeError("same_code set but the codes differ")

    def with_b(self, b) -> TransversalTriple:
        return TransversalTriple(self.codes, np.asarray(b, dtype=np.int64), self.same_code, dict(self.info))

    def __repr__(self) -> str:
        return f"TransversalTriple([[{self.n},{self.k}]]_{self.field.order}, same_code={self.same_code})"


def make_triple(codes: Sequence[CssCode], b, info=None) -> TransversalTriple:
    codes = tuple(codes)
    if len(codes) == 1:
        codes = codes * 3
    if len(codes) != 3:
        raise InvalidCodeError("a triple needs three codes")
    same = codes[0] is codes[1] is codes[2] or codes[0] == codes[1] == codes[2]
    if same:
        codes = (codes[0],) * 3
    t = TransversalTriple(codes, np.asarray(b, dtype=np.int64).reshape(-1), bool(same), dict(info or {}))
    t.validate()
    return t


@dataclass
class Certificate:
    """Outcome of a verification run."""

    kind: str
    mode: str
    passed: bool
    checks: int = 0
    samples: Optional[int] = None
    seed: Optional[int] = None
    failure: Optional[str] = None
    params: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> Certificate:
        return cls(**d)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f", samples={self.samples}, seed={self.seed}" if self.samples is not None else ""
        tail = f": {self.failure}" if self.failure else ""
        return f"{self.kind} {self.mode} {status} ({self.checks} checks{extra}){tail}"


# ---------------------------------------------------------------------------
# builders


def _bound(name: str, exact_fn, certified: Optional[int], size: int, budget: int):
    """Exact value when enumeration of ``size`` vectors fits the budget, else the certified one."""
    if size <= budget:
        return exact_fn(), "exact"
    if certified is None:
        raise ConstraintError(
            f"{name} cannot be brute-forced within budget {budget} and no certified bound was supplied"
        )
    return int(certified), "certified"


def classical_parameters(
    codes: Sequence[LinearCode],
    budget: Optional[int] = None,
    certified: Optional[dict] = None,
) -> dict:
    """ℓ, d, d', d⊥ for a classical code (or the slot-wise minimum over three codes)."""
    budget = fl.default_budget() if budget is None else budget
    certified = dict(certified or {})
    c0 = codes[0]
    q = c0.field.order
    ell = min(c.k for c in codes)
    out = {"l": (ell, "exact")}
    d_vals = []
    dp_vals = []
    for c in _unique(codes):
        d_vals.append(_bound("d", lambda c=c: distance_bruteforce(c, budget), certified.get("d"), q**c.k, budget))
        dual = dual_code(c)
        dp_vals.append(
            _bound("d⊥", lambda dual=dual: distance_bruteforce(dual, budget), certified.get("d_perp"), q**dual.k, budget)
            if dual.k
            else (c.n + 1, "exact")
        )
    c3 = star_product_span(*(list(codes) * 3)[:3]) if len(codes) == 1 else star_product_span(*codes)
    out["d"] = min(d_vals)
    out["d_perp"] = min(dp_vals)
    out["d_star3"] = _bound(
        "d'", lambda: distance_bruteforce(c3, budget), certified.get("d_star3"), q**c3.k, budget
    )
    return out


def _unique(codes):
    seen = []
    for c in codes:
        if not any(c is s or c == s for s in seen):
            seen.append(c)
    return seen


def css_from_classical(c: LinearCode, a_set: Sequence[int]) -> tuple[CssCode, np.ndarray]:
    """Q_X = C⊥|_{A^c}, Q_Z = C|_{A^c} with Enc_Z(e_j) = c|_{A^c} where c|_A = e_j.

    Returns the code and the k x n matrix of messages (over the generator of
    ``c``) whose codewords restrict to e_j on A.
    """
    F = c.field
    a_set = [int(a) for a in a_set]
    if len(set(a_set)) != len(a_set) or any(not 0 <= a < c.n for a in a_set):
        raise ConstraintError("A must be a set of distinct coordinates")
    comp = [i for i in range(c.n) if i not in set(a_set)]
    k = len(a_set)
    if fl.rank(F, c.gen[:, a_set]) != k:
        raise ConstraintError("C|_A = F_q^A violated: the A-columns of the generator are not of full rank")
    msgs = fl.solve_left(F, c.gen[:, a_set], np.eye(k, dtype=np.int64))
    words = fl.matmul(F, msgs, c.gen)
    x_stab = fl.shorten(F, c.gen, a_set)[:, comp]
    code = from_parts(F, x_stab, words[:, comp])
    return code, words


def _coefficients_vector(F: Field, c3_gen: np.ndarray, a_set: Sequence[int], comp: Sequence[int]) -> np.ndarray:
    """b with b . c|_{A^c} = sum_{j∈A} c_j on C^{*3}, zero on the non-pivot complement."""
    aug = np.concatenate([c3_gen[:, comp], c3_gen[:, list(a_set)]], axis=1)
    red = fl.rref(F, aug)
    b = np.zeros(len(comp), dtype=np.int64)
    for row, p in enumerate(red.pivots):
        if p >= len(comp):
            raise ConstraintError("k < d' violated: C^{*3} restricted to A^c is not injective")
        b[p] = F.sum(red.matrix[row, len(comp) :])
    return b


def build_from_classical(
    c,
    a_set: Sequence[int],
    budget: Optional[int] = None,
    certified: Optional[dict] = None,
) -> TransversalTriple:
    """Transversal-CCZ triple from a classical code C (or three codes) and a set A.

    Args:
        c: a LinearCode, or a sequence of three LinearCodes sharing a field and length.
        a_set: coordinates A with |A| = k and C|_A = F_q^A.
        budget: enumeration budget for exact ℓ, d, d', d⊥.
        certified: construction-certified bounds ``{"d", "d_star3", "d_perp"}``
            used when a value cannot be brute-forced.

    Raises:
        ConstraintError: naming the failed inequality among ℓ, d, d', d⊥.
    """
    codes = [c] if isinstance(c, LinearCode) else list(c)
    if len(codes) not in (1, 3):
        raise ValueError("pass one classical code or three")
    F = codes[0].field
    n = codes[0].n
    if any(x.field != F or x.n != n for x in codes):
        raise ValueError("classical codes must share field and length")
    k = len(a_set)
    if k < 1:
        raise ConstraintError("k ≥ 1 violated")
    params = classical_parameters(codes, budget, certified)
    for name, label in (("l", "ℓ"), ("d", "d"), ("d_star3", "d'"), ("d_perp", "d⊥")):
        val, how = params[name]
        if not k < val:
            raise ConstraintError(f"k < {label} violated: k = {k}, {label} = {val} ({how})")
    comp = [i for i in range(n) if i not in set(int(a) for a in a_set)]
    members = [css_from_classical(x, a_set)[0] for x in codes]
    if len(codes) == 1:
        c3 = star_product_span(codes[0], codes[0], codes[0])
    else:
        c3 = star_product_span(*codes)
    b = _coefficients_vector(F, c3.gen, a_set, comp)
    d, d_perp = params["d"][0], params["d_perp"][0]
    bounds = {
        "d_bound": min(d, d_perp) - k,
        "d_z_bound": d - k,
        "d_x_bound": d_perp - k,
        "d_reason": "classical distance bounds minus |A|",
    }
    members = [m.with_info(**bounds, construction="classical-to-quantum") for m in members]
    info = {
        "construction": "classical-to-quantum",
        "a_set": [int(a) for a in a_set],
        "classical": {k_: {"value": int(v[0]), "how": v[1]} for k_, v in params.items()},
    }
    return make_triple(members, b, info)


def rs_transversal(F: Field, k: int, ell: int, budget: Optional[int] = None) -> TransversalTriple:
    """[[q−k, k, ℓ+1−k]]_q from C = ev_{F_q}(F_q[X]^{<ℓ}), A = the k largest points."""
    q = F.order
    n = q - k
    if not k < ell:
        raise ConstraintError(f"k < ℓ violated: k = {k}, ℓ = {ell}")
    if not 2 * ell <= q:
        raise ConstraintError(f"ℓ ≤ q/2 violated: ℓ = {ell}, q = {q}")
    if not 3 * (ell - 1) < n:
        raise ConstraintError(f"3(ℓ−1) < n violated: 3(ℓ−1) = {3 * (ell - 1)}, n = q−k = {n}")
    if k < 1:
        raise ConstraintError("k ≥ 1 violated")
    c = full_rs(F, ell)
    certified = {"d": q - ell + 1, "d_star3": q - 3 * (ell - 1), "d_perp": ell + 1}
    a_set = list(range(q - k, q))
    t = build_from_classical(c, a_set, budget, certified)
    info = dict(t.info)
    info.update({"construction": "rs", "q": q, "k": k, "l": ell, "d_claim": ell + 1 - k})
    return TransversalTriple(t.codes, t.b, t.same_code, info)


# ---------------------------------------------------------------------------
# verification


def _logical_cubic(F: Field, z1, z2, z3) -> np.ndarray:
    return F.sum(star(F, z1, z2, z3), axis=-1)


def _trilinear(F: Field, b, u, v, w) -> np.ndarray:
    """T[i,j,l] = sum_x b_x u[i,x] v[j,x] w[l,x]."""
    bu = F.mul(np.asarray(u), np.asarray(b)[None, :])
    out = np.zeros((u.shape[0], v.shape[0], w.shape[0]), dtype=np.int64)
    for i in range(u.shape[0]):
        out[i] = fl.matmul(F, F.mul(bu[i][None, :], v), w.T)
    return out


def deterministic_cost(t: TransversalTriple) -> int:
    n, k = t.n, t.k
    cost = k**3 * n
    for h in range(3):
        s = t.codes[h].x_stab.shape[0]
        u = t.codes[(h + 1) % 3].qz_spanning().shape[0]
        v = t.codes[(h + 2) % 3].qz_spanning().shape[0]
        cost += s * u * v * n
    return cost


def verify_ccz(
    t: TransversalTriple,
    mode: str = "det",
    samples: int = 1000,
    seed: int = 0,
    limit: int = DETERMINISTIC_LIMIT,
) -> Certificate:
    """Certify the transversal CCZ identity for a triple.

    ``mode="det"`` proves it for every logical triple and every representative
    by trilinearity: (i) the identity on all logical basis triples using
    canonical representatives, (ii) for each slot h, each X-stabilizer g of
    code h and all u, v from spanning sets of the other two Q_Z spaces,
    sum b g u v = 0.  ``mode="rand"`` checks ``samples`` uniformly random
    logical triples with uniformly random representatives.
    """
    if mode in ("det", "deterministic"):
        return _verify_ccz_det(t, limit)
    if mode in ("rand", "randomized"):
        return _verify_ccz_rand(t, samples, seed)
    raise ValueError(f"unknown mode {mode!r}")


def _params(t: TransversalTriple) -> dict:
    return {
        "n": t.n,
        "k": t.k,
        "q": t.field.order,
        "d": {"value": min(distance_bound(c) for c in t.codes), "flag": "bound"},
    }


def _verify_ccz_det(t: TransversalTriple, limit: int) -> Certificate:
    F = t.field
    cost = deterministic_cost(t)
    if cost > limit:
        raise BudgetExceeded(
            f"deterministic check needs about {cost} multiply-adds, over the limit {limit}; use randomized mode"
        )
    cert = Certificate("ccz", "deterministic", True, params=_params(t))
    r1, r2, r3 = (c.encz for c in t.codes)
    k = t.k
    basis = _trilinear(F, t.b, r1, r2, r3)
    expected = np.zeros((k, k, k), dtype=np.int64)
    expected[np.arange(k), np.arange(k), np.arange(k)] = 1
    cert.checks += k**3
    bad = np.argwhere(basis != expected)
    if bad.size:
        i, j, l = (int(x) for x in bad[0])
        cert.passed = False
        cert.failure = f"basis identity fails at logical triple ({i + 1},{j + 1},{l + 1}): got {basis[i, j, l]}"
        return cert
    for h in range(3):
        g_rows = t.codes[h].x_stab
        u = t.codes[(h + 1) % 3].qz_spanning()
        v = t.codes[(h + 2) % 3].qz_spanning()
        if g_rows.shape[0] == 0:
            continue
        vals = _trilinear(F, t.b, g_rows, u, v)
        cert.checks += vals.size
        if np.any(vals):
            g = int(np.argwhere(vals)[0][0])
            cert.passed = False
            cert.failure = f"representative dependence in slot {h + 1} at X-stabilizer {g}"
            return cert
    cert.notes.append(f"basis triples {k**3}; stabilizer checks cover all representatives")
    return cert


def sample_representatives(code: CssCode, logical: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random representatives of Enc_Z(z) for each row z of ``logical``."""
    F = code.field
    reps = fl.matmul(F, logical, code.encz)
    s = code.x_stab.shape[0]
    if s:
        y = F.random(rng, (logical.shape[0], s))
        reps = F.add(reps, fl.matmul(F, y, code.x_stab))
    return reps


def _verify_ccz_rand(t: TransversalTriple, samples: int, seed: int, batch: int = 250) -> Certificate:
    F = t.field
    rng = np.random.default_rng(seed)
    cert = Certificate("ccz", "randomized", True, samples=samples, seed=seed, params=_params(t))
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        zs = [F.random(rng, (m, t.k)) for _ in range(3)]
        reps = [sample_representatives(c, z, rng) for c, z in zip(t.codes, zs)]
        lhs = _logical_cubic(F, *zs)
        rhs = F.sum(F.mul(star(F, *reps), t.b[None, :]), axis=1)
        bad = np.flatnonzero(lhs != rhs)
        cert.checks += m
        if bad.size:
            cert.passed = False
            cert.failure = f"identity fails at sample {done + int(bad[0])}"
            cert.checks = done + int(bad[0]) + 1
            return cert
        done += m
    return cert


def _coset_table(code: CssCode) -> tuple[np.ndarray, np.ndarray]:
    """All (logical, representative) pairs of the code."""
    F = code.field
    k, s = code.k, code.x_stab.shape[0]
    rows = np.concatenate([code.encz, code.x_stab], axis=0)
    reps = fl.combination_table(F, rows)
    coeffs = np.array(list(itertools.product(range(F.order), repeat=k + s)), dtype=np.int64).reshape(-1, k + s)
    return coeffs[:, :k], reps


def verify_ccz_exhaustive_oracle(t: TransversalTriple, budget: Optional[int] = None) -> bool:
    """Check the CCZ identity literally for every logical and representative triple."""
    F = t.field
    budget = fl.default_budget() if budget is None else budget
    q = F.order
    sizes = [q ** (c.k + c.x_stab.shape[0]) for c in t.codes]
    total = sizes[0] * sizes[1] * sizes[2]
    if total > budget:
        raise BudgetExceeded(f"exhaustive oracle needs {total} triples, over budget {budget}")
    tables = [_coset_table(c) for c in t.codes]
    (l1, z1), (l2, z2), (l3, z3) = tables
    for a in range(z1.shape[0]):
        lhs = fl.matmul(F, F.mul(l1[a][None, :], l2), l3.T)
        rhs = fl.matmul(F, F.mul(F.mul(z1[a], t.b)[None, :], z2), z3.T)
        if not np.array_equal(lhs, rhs):
            return False
    return True


def derive_u_certificate(
    t: TransversalTriple,
    ccz: Optional[Certificate] = None,
    budget: Optional[int] = None,
    limit: int = DETERMINISTIC_LIMIT,
) -> Certificate:
    """Certificate that a single CCZ code also supports transversal U_q with the same b.

    Setting all three logicals (and representatives) equal in the CCZ
    identity yields the cubic identity.  When the code is small enough, the
    cubic identity is also checked for every z and every representative.
    """
    if not t.same_code:
        raise InvalidCodeError("same_code required: a U certificate needs one code used three times")
    if ccz is None:
        ccz = verify_ccz(t, "det", limit=limit)
    cert = Certificate("u", "from-ccz", ccz.passed, checks=ccz.checks, params=_params(t))
    cert.notes.append(f"derived from {ccz.mode} CCZ certificate")
    if not ccz.passed:
        cert.failure = f"CCZ certificate failed: {ccz.failure}"
        return cert
    budget = fl.default_budget() if budget is None else budget
    code = t.codes[0]
    F = t.field
    size = F.order ** (code.k + code.x_stab.shape[0])
    if size <= budget:
        logical, reps = _coset_table(code)
        lhs = F.sum(F.pow(logical, 3), axis=1)
        rhs = F.sum(F.mul(F.pow(reps, 3), t.b[None, :]), axis=1)
        cert.checks += size
        if not np.array_equal(lhs, rhs):
            cert.passed = False
            cert.failure = "cubic identity fails on some representative"
        else:
            cert.notes.append(f"cubic identity checked exhaustively over {size} representatives")
    else:
        cert.notes.append("exhaustive cubic cross-check skipped: over budget")
    return cert
