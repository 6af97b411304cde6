"""Multiplication-friendly codes for a tower F_q ⊆ F_{q^k}.

Messages in F_{q^k} are coordinate vectors over F_q in the basis
1, X, ..., X^{k-1} of F_q[X]/(gamma); member h encodes X^t as row t of its
encoder.  ``dec`` is the k x n matrix of the decoding map acting on column
vectors, so ``flatten(z_1 ... z_m) == dec @ (z_1' * ... * z_m')``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from codekit import flinalg as fl
from codekit.classical import LinearCode, make_code, star, vandermonde
from codekit.css import CssCode, from_parts, restrict
from codekit.errors import BudgetExceeded, ConstraintError, InvalidCodeError
from codekit.gf import Field, TowerSpec, make_tower
from codekit.transversal import Certificate, css_from_classical, sample_representatives

RM_SIZE_BOUND = 2**16

Member = Union[LinearCode, CssCode]


@dataclass(frozen=True, eq=False)
class MFCollection:
    """m codes and a decoding map satisfying the multiplication-friendly identity.

    Attributes:
        m: number of factors.
        tower: F_q ⊆ F_{q^k}.
        members: m LinearCodes (classical) or m CssCodes (quantum).
        dec: k x n decoding matrix over F_q.
        kind: ``"classical"`` or ``"quantum"``.
    """

    m: int
    tower: TowerSpec
    members: tuple
    dec: np.ndarray
    kind: str
    info: dict = field(default_factory=dict, compare=False)

    @property
    def field(self) -> Field:
        return self.tower.base

    @property
    def k(self) -> int:
        return self.tower.k

    @property
    def n(self) -> int:
        return self.dec.shape[1]

    def member(self, h: int) -> Member:
        """Member h, 1-based."""
        return self.members[h - 1]

    def encoders(self) -> list[np.ndarray]:
        return [member_encoder(c) for c in self.members]

    def validate(self) -> None:
        if self.kind not in ("classical", "quantum"):
            raise InvalidCodeError(f"unknown MF kind {self.kind!r}")
        if len(self.members) != self.m or self.m < 1:
            raise InvalidCodeError("member count differs from m")
        if self.dec.shape != (self.k, self.n):
            raise InvalidCodeError(f"Dec has shape {self.dec.shape}, expected {(self.k, self.n)}")
        want = LinearCode if self.kind == "classical" else CssCode
        for c in self.members:
            if not isinstance(c, want):
                raise InvalidCodeError(f"{self.kind} collection holds a {type(c).__name__}")
            if c.field != self.field or c.n != self.n or member_encoder(c).shape[0] != self.k:
                raise InvalidCodeError("members must share q, n and k with the tower and Dec")
            c.validate()
        if np.any((self.dec < 0) | (self.dec >= self.field.order)):
            raise InvalidCodeError("Dec has entries outside the field")

    def with_dec(self, dec) -> MFCollection:
        return MFCollection(self.m, self.tower, self.members, np.asarray(dec, dtype=np.int64), self.kind, dict(self.info))

    def __repr__(self) -> str:
        return f"MFCollection({self.kind}, m={self.m}, [{self.n},{self.k}]_{self.field.order})"


def member_encoder(c: Member) -> np.ndarray:
    if isinstance(c, CssCode):
        return c.encz
    return c.encoder if c.encoder is not None else c.gen


def _make(m, tower, members, dec, kind, info) -> MFCollection:
    mf = MFCollection(m, tower, tuple(members), np.asarray(dec, dtype=np.int64), kind, dict(info))
    mf.validate()
    return mf


# ---------------------------------------------------------------------------
# polynomial matrices


def reduction_matrix(tower: TowerSpec, length: int) -> np.ndarray:
    """k x length matrix; column i holds the coordinates of X^i mod gamma."""
    cols = [tower.basis_element(i) for i in range(length)]
    return tower.flatten(np.array(cols, dtype=np.int64)).T.reshape(tower.k, length)


def interpolation_matrix(F: Field, points: Sequence[int]) -> np.ndarray:
    """M with M @ z = coefficients of the degree < |points| interpolant of z."""
    return fl.inverse(F, vandermonde(F, points, len(points)).T)


def evaluation_matrix(F: Field, points: Sequence[int], length: int) -> np.ndarray:
    """E with E @ f = ev_points(f) for coefficient vectors of the given length."""
    return vandermonde(F, points, length).T


# ---------------------------------------------------------------------------
# constructions


def mf_rs(F: Field, n: int, k: int, m: int, tower: Optional[TowerSpec] = None) -> MFCollection:
    """Reed-Solomon MF code: Enc(f) = ev_A(f), A = the first n points of F_q."""
    q = F.order
    if k < 1:
        raise ConstraintError("k ≥ 1 violated")
    if not m * (k - 1) < n:
        raise ConstraintError(f"m(k−1) < n violated: m(k−1) = {m * (k - 1)}, n = {n}")
    if not n <= q:
        raise ConstraintError(f"n ≤ q violated: n = {n}, q = {q}")
    tower = tower or make_tower(F, k)
    points = list(range(n))
    enc = vandermonde(F, points, k)
    dec = fl.matmul(F, reduction_matrix(tower, n), interpolation_matrix(F, points))
    code = make_code(F, enc, encoder=enc, eval_points=points, info={"family": "mf-rs"})
    return _make(m, tower, [code] * m, dec, "classical", {"family": "rs", "n": n, "k": k, "m": m})


def rm_points(q: int, nvars: int) -> np.ndarray:
    """All points of F_q^nvars in lexicographic order, one per row."""
    return np.array(list(itertools.product(range(q), repeat=nvars)), dtype=np.int64).reshape(q**nvars, nvars)


def mf_rm(
    F: Field,
    k: int,
    m: int,
    tower: Optional[TowerSpec] = None,
    size_bound: int = RM_SIZE_BOUND,
) -> MFCollection:
    """Reed-Muller MF collection of m distinct [q^{m(k−1)}, k]_q codes.

    Variables X_{h,j} (h < m, 1 ≤ j < k) are ordered h-major; member h encodes
    f as the evaluation of f_0 + sum_j f_j X_{h,j} over F_q^{m(k−1)}.
    """
    q = F.order
    if k < 1:
        raise ConstraintError("k ≥ 1 violated")
    nvars = m * (k - 1)
    n = q**nvars
    if n > size_bound:
        raise ConstraintError(f"n = q^(m(k−1)) = {n} exceeds the size bound {size_bound}")
    tower = tower or make_tower(F, k)
    pts = rm_points(q, nvars)
    members = []
    for h in range(m):
        enc = np.ones((k, n), dtype=np.int64)
        for j in range(1, k):
            enc[j] = pts[:, h * (k - 1) + (j - 1)]
        members.append(make_code(F, enc, encoder=enc, info={"family": "mf-rm", "member": h + 1}))
    dec = rm_decoder(tower, m, pts)
    return _make(m, tower, members, dec, "classical", {"family": "rm", "n": n, "k": k, "m": m})


def rm_decoder(tower: TowerSpec, m: int, pts: np.ndarray) -> np.ndarray:
    """Dec columns: the point indicator prod (1 − (X_{h,j} − x_{h,j})^{q−1}) with X_{h,j} ← X^j, mod gamma."""
    E = tower.ext
    q, k = tower.base.order, tower.k
    powers = [tower.basis_element(j) for j in range(k)]
    # factor value for (variable slot j, coordinate value x)
    factor = {}
    for j in range(1, k):
        for x in range(q):
            diff = E.sub_int(powers[j], x)
            factor[j, x] = E.sub_int(1, E.pow_int(diff, q - 1))
    cols = np.empty(pts.shape[0], dtype=np.int64)
    for idx, pt in enumerate(pts):
        acc = 1
        for v, x in enumerate(pt):
            acc = E.mul_int(acc, factor[v % (k - 1) + 1, int(x)])
        cols[idx] = acc
    return tower.flatten(cols).T.reshape(k, pts.shape[0])


def lift_classical(mf: MFCollection) -> MFCollection:
    """CSS(F_q^n, C^(h); Enc_Z = Enc^(h)) for every member; Dec unchanged."""
    if mf.kind != "classical":
        raise InvalidCodeError("lift_classical expects a classical collection")
    members = []
    cache: dict[int, CssCode] = {}
    for c in mf.members:
        key = id(c)
        if key not in cache:
            cache[key] = from_parts(
                mf.field,
                fl.empty(mf.n),
                member_encoder(c),
                info={"d_bound": 1, "d_reason": "trivial bound", "construction": "lifted classical"},
            )
        members.append(cache[key])
    info = dict(mf.info)
    info["lifted"] = True
    return _make(mf.m, mf.tower, members, mf.dec, "quantum", info)


def mf_quantum(
    F: Field,
    k: int,
    r: int,
    ell: int,
    m: int,
    tower: Optional[TowerSpec] = None,
) -> MFCollection:
    """Distance-bearing quantum MF code [[q−r, k, ≥ ℓ+1−r]]_q (all members equal)."""
    q = F.order
    checks = [
        (1 <= k, "k ≥ 1"),
        (k <= r, f"k ≤ r violated: k = {k}, r = {r}"),
        (r <= ell, f"r ≤ ℓ violated: r = {r}, ℓ = {ell}"),
        (2 * ell <= q, f"ℓ ≤ q/2 violated: ℓ = {ell}, q = {q}"),
        (m * (k - 1) < r, f"m(k−1) < r violated: m(k−1) = {m * (k - 1)}, r = {r}"),
        (m * (ell - 1) < q - r, f"m(ℓ−1) < n violated: m(ℓ−1) = {m * (ell - 1)}, n = q−r = {q - r}"),
    ]
    failed = [msg if "violated" in msg else f"{msg} violated" for ok, msg in checks if not ok]
    if failed:
        raise ConstraintError("; ".join(failed))
    tower = tower or make_tower(F, k)
    c = make_code(F, vandermonde(F, range(q), ell), encoder=vandermonde(F, range(q), ell))
    a_set = list(range(r))
    comp = list(range(r, q))
    base, _ = css_from_classical(c, a_set)
    s = vandermonde(F, a_set, k)  # ev_A(X^t), t < k
    code = restrict(base, s).with_info(
        d_bound=ell + 1 - r,
        d_reason="classical distance bounds minus |A|",
        construction="quantum MF",
    )
    n = q - r
    dec = fl.matmul(
        F,
        reduction_matrix(tower, r),
        fl.matmul(F, interpolation_matrix(F, a_set), fl.matmul(F, evaluation_matrix(F, a_set, n), interpolation_matrix(F, comp))),
    )
    info = {"family": "quantum", "k": k, "r": r, "l": ell, "m": m, "n": n}
    return _make(m, tower, [code] * m, dec, "quantum", info)


# ---------------------------------------------------------------------------
# verification


def _ext_product_coords(tower: TowerSpec, exps: np.ndarray) -> np.ndarray:
    """Coordinates of X^e for each exponent e."""
    E = tower.ext
    alpha = tower.basis_element(1) if tower.k > 1 else 0
    vals = np.array([E.pow_int(alpha, int(e)) if e else 1 for e in exps], dtype=np.int64)
    return tower.flatten(vals)


def _tuple_products(F: Field, rows_per_slot: Sequence[np.ndarray]) -> np.ndarray:
    """Star products of every tuple (one row per slot), lexicographic in the slots."""
    prod = rows_per_slot[0]
    for rows in rows_per_slot[1:]:
        prod = F.mul(prod[:, None, :], rows[None, :, :]).reshape(-1, prod.shape[1])
    return prod


def verify_mf(mf: MFCollection, mode: str = "det", samples: int = 1000, seed: int = 0) -> Certificate:
    """Certify the multiplication-friendly identity z_1 ... z_m = Dec(z_1' * ... * z_m').

    Deterministic mode checks all k^m basis tuples with canonical
    representatives and, for quantum collections, that Dec kills every star
    product with an X-stabilizer in one slot and spanning vectors of Q_Z in
    the others.  Both sides are multilinear, so this covers every tuple and
    every representative.
    """
    if mode in ("det", "deterministic"):
        return _verify_mf_det(mf)
    if mode in ("rand", "randomized"):
        return _verify_mf_rand(mf, samples, seed)
    raise ValueError(f"unknown mode {mode!r}")


def _verify_mf_det(mf: MFCollection) -> Certificate:
    F = mf.field
    k, m = mf.k, mf.m
    cert = Certificate("mf", "deterministic", True, params={"n": mf.n, "k": k, "q": F.order, "m": m})
    encs = mf.encoders()
    prods = _tuple_products(F, encs)
    got = fl.matmul(F, mf.dec, prods.T).T
    exps = np.array([sum(t) for t in itertools.product(range(k), repeat=m)], dtype=np.int64)
    want = _ext_product_coords(mf.tower, exps)
    cert.checks += len(exps)
    bad = np.flatnonzero(np.any(got != want, axis=1))
    if bad.size:
        t = next(itertools.islice(itertools.product(range(k), repeat=m), int(bad[0]), None))
        cert.passed = False
        cert.failure = f"basis tuple {tuple(x for x in t)} (exponents of X) decodes incorrectly"
        return cert
    if mf.kind == "quantum":
        spans = [c.qz_spanning() for c in mf.members]
        for h, c in enumerate(mf.members):
            if c.x_stab.shape[0] == 0:
                continue
            slots = [spans[i] if i != h else c.x_stab for i in range(m)]
            prods = _tuple_products(F, slots)
            vals = fl.matmul(F, mf.dec, prods.T)
            cert.checks += prods.shape[0]
            if np.any(vals):
                cert.passed = False
                cert.failure = f"representative dependence in slot {h + 1}"
                return cert
    cert.notes.append(f"{k}^{m} basis tuples")
    return cert


def ext_multiply(tower: TowerSpec, coords: Sequence[np.ndarray]) -> np.ndarray:
    """Row-wise product in F_{q^k} of coordinate vectors, returned as coordinates."""
    E = tower.ext
    vals = [tower.unflatten(c) for c in coords]
    out = vals[0]
    for v in vals[1:]:
        if E.order <= 2**16:
            out = E.mul(out, v)
        else:
            out = np.array([E.mul_int(int(a), int(b)) for a, b in zip(out, v)], dtype=np.int64)
    return tower.flatten(out)


def _sample_member(c: Member, z: np.ndarray, rng) -> np.ndarray:
    if isinstance(c, CssCode):
        return sample_representatives(c, z, rng)
    return fl.matmul(c.field, z, member_encoder(c))


def _verify_mf_rand(mf: MFCollection, samples: int, seed: int) -> Certificate:
    F = mf.field
    rng = np.random.default_rng(seed)
    cert = Certificate("mf", "randomized", True, samples=samples, seed=seed,
                       params={"n": mf.n, "k": mf.k, "q": F.order, "m": mf.m})
    zs = [F.random(rng, (samples, mf.k)) for _ in range(mf.m)]
    reps = [_sample_member(c, z, rng) for c, z in zip(mf.members, zs)]
    got = fl.matmul(F, mf.dec, star(F, *reps).T).T
    want = ext_multiply(mf.tower, zs)
    cert.checks = samples
    bad = np.flatnonzero(np.any(got != want, axis=1))
    if bad.size:
        cert.passed = False
        cert.failure = f"identity fails at sample {int(bad[0])}"
    return cert


def verify_mf_exhaustive_oracle(mf: MFCollection, budget: Optional[int] = None) -> bool:
    """Literal check over every message tuple and every representative tuple."""
    F = mf.field
    budget = fl.default_budget() if budget is None else budget
    q, k, m = F.order, mf.k, mf.m
    tables = []
    total = 1
    for c in mf.members:
        rows = np.concatenate([c.encz, c.x_stab], axis=0) if isinstance(c, CssCode) else member_encoder(c)
        reps = fl.combination_table(F, rows)
        coeffs = np.array(list(itertools.product(range(q), repeat=rows.shape[0])), dtype=np.int64)
        tables.append((coeffs.reshape(-1, rows.shape[0])[:, :k], reps))
        total *= reps.shape[0]
    if total > budget:
        raise BudgetExceeded(f"exhaustive MF oracle needs {total} tuples, over budget {budget}")
    # loop over all but the last two slots; the last two are handled by broadcasting
    (za, ra), (zb, rb) = tables[-2:] if m >= 2 else (tables[0], (np.zeros((1, k), np.int64), None))
    if m == 1:
        got = fl.matmul(F, mf.dec, ra.T).T
        return bool(np.array_equal(got, za))
    one = tower_one(mf.tower)
    for combo in itertools.product(*(range(t[1].shape[0]) for t in tables[:-2])):
        prefix = np.ones(mf.n, dtype=np.int64)
        zs = [one]
        for h, i in enumerate(combo):
            prefix = F.mul(prefix, tables[h][1][i])
            zs.append(tables[h][0][i])
        zpre = ext_multiply(mf.tower, [np.array(zs)[j][None, :] for j in range(len(zs))])
        prod = F.mul(F.mul(prefix[None, None, :], ra[:, None, :]), rb[None, :, :])
        got = fl.matmul(F, mf.dec, prod.reshape(-1, mf.n).T).T
        za_all = np.repeat(za, zb.shape[0], axis=0)
        zb_all = np.tile(zb, (za.shape[0], 1))
        want = ext_multiply(mf.tower, [np.repeat(zpre, za_all.shape[0], axis=0), za_all, zb_all])
        if not np.array_equal(got, want):
            return False
    return True


def tower_one(tower: TowerSpec) -> np.ndarray:
    v = np.zeros(tower.k, dtype=np.int64)
    v[0] = 1
    return v


def solve_dec(mf_members: Sequence[Member], tower: TowerSpec) -> Optional[np.ndarray]:
    """Any decoding matrix making the basis-tuple identity hold, or None if none exists.

    Only classical members (or lifted ones) are considered: the identity on
    basis tuples is a linear system in the entries of Dec.
    """
    F = tower.base
    k = tower.k
    m = len(mf_members)
    encs = [member_encoder(c) for c in mf_members]
    prods = _tuple_products(F, encs)
    exps = np.array([sum(t) for t in itertools.product(range(k), repeat=m)], dtype=np.int64)
    want = _ext_product_coords(tower, exps)
    # row i of Dec solves prods @ dec_i = want[:, i]
    dec = np.zeros((k, prods.shape[1]), dtype=np.int64)
    for i in range(k):
        x = fl.solve(F, prods, want[:, i])
        if x is None:
            return None
        dec[i] = x
    return dec


def shared_member_variant(mf: MFCollection, h: int = 1) -> MFCollection:
    """The same collection with every member replaced by member h (Dec unchanged)."""
    members = [mf.member(h)] * mf.m
    info = dict(mf.info)
    info["shared_member"] = h
    return MFCollection(mf.m, mf.tower, tuple(members), mf.dec, mf.kind, info)


def permute_rm_members(mf: MFCollection, shift: int) -> list[int]:
    """Coordinate permutation induced by cyclically shifting the member index h.

    Returns ``perm`` such that the generator of member h + shift, with its
    columns reordered by ``perm``, equals the generator of member h.
    """
    q, k, m = mf.field.order, mf.k, mf.m
    nvars = m * (k - 1)
    pts = rm_points(q, nvars)
    index = {tuple(p): i for i, p in enumerate(pts)}
    perm = []
    for p in pts:
        blocks = [p[h * (k - 1) : (h + 1) * (k - 1)] for h in range(m)]
        rolled = [blocks[(h - shift) % m] for h in range(m)]
        perm.append(index[tuple(np.concatenate(rolled))] if nvars else 0)
    return perm
