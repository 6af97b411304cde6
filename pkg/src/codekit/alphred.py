"""Alphabet reduction of transversal-CCZ triples and the iterated pipeline.

``diamond(mf, triple, r)`` concatenates each code of a triple over F_{q^k̄}
with a member of a 4-multiplication-friendly collection over F_q, restricts
to the logicals (F_q^A)^k and builds the new coefficients vector
b̃_j = (η ∘ Dec)(b̄_j * ·), where b̄_j is the member-4 canonical representative
of b_j and η(f) = sum_{a∈A} f(a).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from codekit import flinalg as fl
from codekit.classical import star, vandermonde
from codekit.css import BilinearSpec, CssCode, compatible_encx, concatenate, distance_bound, restrict
from codekit.errors import CompatibilityError, ConstraintError, FieldError
from codekit.gf import MAX_ORDER, Field, TowerSpec, make_tower
from codekit.multfriendly import (
    MFCollection,
    interpolation_matrix,
    lift_classical,
    mf_quantum,
    mf_rm,
    mf_rs,
)
from codekit.transversal import TransversalTriple, make_triple, rs_transversal


@dataclass(frozen=True, eq=False)
class DiamondInput:
    """Inputs of one alphabet-reduction step.

    Attributes:
        mf: 4-member quantum MF collection over F_q with dimension k̄.
        triple: transversal triple over F_{q^k̄} = mf.tower.ext.
        r: restriction parameter, 3(r−1) < k̄ and r ≤ q.
        a_set: the points A ⊆ F_q, |A| = r.
    """

    mf: MFCollection
    triple: TransversalTriple
    r: int
    a_set: tuple[int, ...]

    @property
    def tower(self) -> TowerSpec:
        return self.mf.tower

    def check(self) -> None:
        kbar, q = self.mf.k, self.mf.field.order
        if self.mf.m != 4:
            raise ConstraintError(f"m = 4 violated: the collection has m = {self.mf.m}")
        if self.r < 1:
            raise ConstraintError("r ≥ 1 violated")
        if not 3 * (self.r - 1) < kbar:
            raise ConstraintError(f"3(r−1) < k̄ violated: 3(r−1) = {3 * (self.r - 1)}, k̄ = {kbar}")
        if not self.r <= q:
            raise ConstraintError(f"r ≤ q violated: r = {self.r}, q = {q}")
        if len(self.a_set) != self.r or len(set(self.a_set)) != self.r:
            raise ConstraintError("|A| = r violated")
        if self.triple.field != self.tower.ext:
            raise CompatibilityError(
                f"triple is over {self.triple.field}, the MF tower extension is {self.tower.ext}"
            )


def make_input(mf: MFCollection, triple: TransversalTriple, r: int = 1, a_set=None) -> DiamondInput:
    """DiamondInput with A = the first r points; classical collections are lifted."""
    if mf.kind == "classical":
        mf = lift_classical(mf)
    a = tuple(range(r)) if a_set is None else tuple(int(x) for x in a_set)
    inp = DiamondInput(mf, triple, r, a)
    inp.check()
    return inp


def eta_functional(F: Field, a_set: Sequence[int], kbar: int) -> np.ndarray:
    """Row vector η with η · coeffs(f) = sum_{a∈A} f(a) for deg f < k̄."""
    return F.sum(vandermonde(F, a_set, kbar), axis=1)


def restriction_basis(F: Field, a_set: Sequence[int], kbar: int, k: int) -> np.ndarray:
    """Rows spanning (F_q^A)^k inside F_{q^k̄}^k, flattened with index j·k̄ + t.

    Row j·r + i is the Lagrange polynomial of the i-th point of A placed in
    component j, so logical coordinate (j, a) is the value at a.
    """
    r = len(a_set)
    lag = interpolation_matrix(F, a_set).T  # row i: coefficients of L_{a_i}
    out = np.zeros((k * r, k * kbar), dtype=np.int64)
    for j in range(k):
        out[j * r : (j + 1) * r, j * kbar : j * kbar + r] = lag
    return out


def _ensure_encx(code: CssCode, form: BilinearSpec) -> CssCode:
    if code.encx is not None and code.pairing is not None and np.array_equal(code.pairing, form.gram()):
        return code
    return compatible_encx(code, form)


def _prepared(inp: DiamondInput):
    tower = inp.tower
    trace = BilinearSpec.trace(tower)
    std = BilinearSpec.standard(inp.triple.k)
    cache: dict[int, CssCode] = {}
    inner = []
    for c in inp.mf.members:
        if id(c) not in cache:
            cache[id(c)] = _ensure_encx(c, trace)
        inner.append(cache[id(c)])
    ocache: dict[int, CssCode] = {}
    outer = []
    for c in inp.triple.codes:
        if id(c) not in ocache:
            ocache[id(c)] = _ensure_encx(c, std)
        outer.append(ocache[id(c)])
    return inner, outer


def coefficients_functionals(inp: DiamondInput, inner4: Optional[CssCode] = None) -> np.ndarray:
    """b̃ as a length n̄·n vector: block j is (η · Dec) * b̄_j."""
    F = inp.mf.field
    tower = inp.tower
    member4 = inner4 if inner4 is not None else inp.mf.member(4)
    eta = eta_functional(F, inp.a_set, inp.mf.k)
    functional = fl.matmul(F, eta, inp.mf.dec)  # length n̄
    bflat = tower.flatten(inp.triple.b)  # n x k̄
    bbar = fl.matmul(F, bflat, member4.encz)  # n x n̄, canonical reps
    return F.mul(bbar, functional[None, :]).reshape(-1)


def diamond(mf_or_input, triple: Optional[TransversalTriple] = None, r: int = 1, a_set=None) -> TransversalTriple:
    """The reduced triple Q̄^(h) ⋄_r Q^(h) over F_q with coefficients vector b̃.

    Accepts either a DiamondInput or ``(mf, triple, r[, a_set])``.
    """
    inp = mf_or_input if isinstance(mf_or_input, DiamondInput) else make_input(mf_or_input, triple, r, a_set)
    inp.check()
    F = inp.mf.field
    inner, outer = _prepared(inp)
    s_basis = restriction_basis(F, inp.a_set, inp.mf.k, inp.triple.k)
    codes = []
    built: dict[tuple[int, int], CssCode] = {}
    for h in range(3):
        key = (id(inner[h]), id(outer[h]))
        if key not in built:
            built[key] = restrict(concatenate(inner[h], inp.tower, outer[h]), s_basis)
        codes.append(built[key])
    b_tilde = coefficients_functionals(inp, inner[3])
    prov = list(inp.triple.info.get("levels", []))
    level = {
        "q": F.order,
        "n_bar": inp.mf.n,
        "k_bar": inp.mf.k,
        "d_bar": min(distance_bound(c) for c in inp.mf.members[:3]),
        "r": inp.r,
        "family": inp.mf.info.get("family", "custom"),
    }
    info = {
        "construction": "diamond",
        "levels": [level] + prov,
        "base": inp.triple.info.get("base", _base_record(inp.triple)),
        "r": inp.r,
        "a_set": list(inp.a_set),
    }
    return make_triple(codes, b_tilde, info)


def _base_record(t: TransversalTriple) -> dict:
    rec = {"q": t.field.order, "n": t.n, "k": t.k, "d": min(distance_bound(c) for c in t.codes)}
    for key in ("construction", "k", "l"):
        if key in t.info:
            rec["family" if key == "construction" else key] = t.info[key]
    return rec


# ---------------------------------------------------------------------------
# proof-chain audit


@dataclass
class AuditReport:
    passed: bool
    checked: int = 0
    links: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    degree_max: int = -1


def _slot_generators(inner: CssCode, outer: CssCode, tower: TowerSpec):
    """Representative shifts with provenance: (kind, outer shift, flat shift)."""
    E = tower.ext
    n_out, n_in = outer.n, inner.n
    gens = [("logical", np.zeros(n_out, np.int64), np.zeros(n_out * n_in, np.int64))]
    for g in outer.x_stab:
        for t in range(tower.k):
            shift = E.mul(g, tower.basis_element(t))
            flat = fl.matmul(tower.base, tower.flatten(shift), inner.encz).reshape(-1)
            gens.append(("outer-stabilizer", shift, flat))
    for i in range(n_out):
        for g in inner.x_stab:
            flat = np.zeros(n_out * n_in, np.int64)
            flat[i * n_in : (i + 1) * n_in] = g
            gens.append(("inner-stabilizer", np.zeros(n_out, np.int64), flat))
    return gens


def audit_diamond(inp: DiamondInput, out: TransversalTriple) -> AuditReport:
    """Check each link of the chain of equalities behind b̃, on basis tuples.

    For every triple of logical basis vectors and every combination of one
    representative shift per slot (none, or one recorded stabilizer
    generator) the six quantities

        E0 = sum over all coordinates of b̃ z̃1 z̃2 z̃3
        E1 = sum_j b̃_j · (z̃1_j * z̃2_j * z̃3_j)
        E2 = sum_j η(Dec(b̄_j * z̃1_j * z̃2_j * z̃3_j))
        E3 = sum_j η(b_j z1'_j z2'_j z3'_j)            (products in F_{q^k̄})
        E4 = η(sum_j f1_j f2_j f3_j)                   (products in F_q[X])
        E5 = sum_j sum_{a∈A} z1_j(a) z2_j(a) z3_j(a)

    must agree.  Also asserts deg(f1 f2 f3) < k̄ on actual products, that η
    evaluated point-wise matches the materialized functional, and that each
    representative lies in the coset the output code assigns to it.
    """
    F = inp.mf.field
    tower = inp.tower
    E = tower.ext
    kbar, r, k = inp.mf.k, inp.r, inp.triple.k
    n_out, n_in = inp.triple.n, inp.mf.n
    inner, outer = _prepared(inp)
    report = AuditReport(True)

    eta = eta_functional(F, inp.a_set, kbar)
    for t in range(kbar):
        pointwise = 0
        for a in inp.a_set:
            pointwise = F.add_int(pointwise, F.pow_int(a, t) if t else 1)
        if pointwise != int(eta[t]):
            report.passed = False
            report.failures.append(f"η mismatch on X^{t}")
    report.links["eta"] = report.passed

    functional = fl.matmul(F, eta, inp.mf.dec)
    bflat = tower.flatten(inp.triple.b)
    bbar = fl.matmul(F, bflat, inner[3].encz)
    b_tilde = out.b.reshape(n_out, n_in)
    lag = interpolation_matrix(F, inp.a_set).T  # r x r, row i = coefficients of L_{a_i}

    gens = [_slot_generators(inner[h], outer[h], tower) for h in range(3)]
    link_ok = {f"E{i}=E{i + 1}": True for i in range(5)}

    def logical_data(h: int, idx: int):
        j, i = divmod(idx, r)
        f = np.zeros((k, kbar), np.int64)
        f[j, :r] = lag[i]
        zvals = np.zeros((k, r), np.int64)
        zvals[j, i] = 1
        ext_vec = tower.unflatten(f)  # length k over F_{q^k̄}
        zprime = np.zeros(n_out, np.int64)
        for jj in range(k):
            if ext_vec[jj]:
                zprime = E.add(zprime, E.mul(outer[h].encz[jj], int(ext_vec[jj])))
        ztil = fl.matmul(F, tower.flatten(zprime), inner[h].encz).reshape(-1)
        return f, zvals, zprime, ztil

    # each representative must lie in the output coset of its logical
    for h in range(3):
        for idx in range(k * r):
            _, _, _, ztil = logical_data(h, idx)
            canon = out.codes[h].canonical(ztil[None, :])[0]
            if not np.array_equal(canon, out.codes[h].encz[idx]):
                report.passed = False
                report.failures.append(f"slot {h + 1} logical {idx}: representative outside its coset")

    for idx in itertools.product(range(k * r), repeat=3):
        data = [logical_data(h, idx[h]) for h in range(3)]
        # E4 and E5 do not depend on representatives
        poly_sum = np.zeros(3 * kbar, np.int64)
        for j in range(k):
            prod = _poly_mul(F, _poly_mul(F, data[0][0][j], data[1][0][j], 3 * kbar), data[2][0][j], 3 * kbar)
            nz = np.flatnonzero(prod)
            if nz.size:
                report.degree_max = max(report.degree_max, int(nz[-1]))
                if nz[-1] >= kbar:
                    report.passed = False
                    report.failures.append(f"degree guard: deg = {int(nz[-1])} ≥ k̄ = {kbar}")
            poly_sum = F.add(poly_sum, prod)
        e4 = F.dot(eta, poly_sum[:kbar]) if not np.any(poly_sum[kbar:]) else None
        e5 = int(F.sum(star(F, data[0][1], data[1][1], data[2][1])))
        for combo in itertools.product(*(range(len(g)) for g in gens)):
            zp, zt = [], []
            for h in range(3):
                _, shift_out, shift_flat = gens[h][combo[h]]
                zp.append(E.add(data[h][2], shift_out))
                zt.append(F.add(data[h][3], shift_flat))
            prod_flat = star(F, *zt)
            e0 = F.dot(out.b, prod_flat)
            blocks = prod_flat.reshape(n_out, n_in)
            e1 = int(F.sum(F.sum(F.mul(b_tilde, blocks), axis=1)))
            decoded = fl.matmul(F, F.mul(bbar, blocks), inp.mf.dec.T)  # n x k̄
            e2 = int(F.sum(fl.matmul(F, decoded, eta)))
            ext_prod = E.mul(E.mul(E.mul(inp.triple.b, zp[0]), zp[1]), zp[2])
            e3 = int(F.sum(fl.matmul(F, tower.flatten(ext_prod), eta)))
            vals = [e0, e1, e2, e3, e4, e5]
            report.checked += 1
            for i in range(5):
                if vals[i] is None or vals[i + 1] is None or vals[i] != vals[i + 1]:
                    if link_ok[f"E{i}=E{i + 1}"]:
                        report.failures.append(f"E{i} ≠ E{i + 1} at logical {idx}, shifts {combo}: {vals}")
                    link_ok[f"E{i}=E{i + 1}"] = False
                    report.passed = False
    report.links.update(link_ok)
    return report


def _poly_mul(F: Field, f: np.ndarray, g: np.ndarray, length: int) -> np.ndarray:
    """Product of coefficient vectors, truncated or padded to ``length``."""
    out = np.zeros(len(f) + len(g), np.int64)
    for i, a in enumerate(f):
        if a:
            out[i : i + len(g)] = F.add(out[i : i + len(g)], F.mul(int(a), g))
    return np.pad(out, (0, max(0, length - len(out))))[:length]


# ---------------------------------------------------------------------------
# schedules and the pipeline


@dataclass(frozen=True)
class Level:
    """One MF level: family ``rs``, ``rm`` or ``quantum`` over F_{q_t}."""

    q: int
    family: str
    k_bar: int
    r: int
    n_bar: int
    r_bar: Optional[int] = None
    l_bar: Optional[int] = None

    def to_dict(self) -> dict:
        d = {"q": self.q, "family": self.family, "k_bar": self.k_bar, "r": self.r, "n_bar": self.n_bar}
        if self.r_bar is not None:
            d["r_bar"] = self.r_bar
            d["l_bar"] = self.l_bar
        return d


@dataclass(frozen=True)
class Schedule:
    """Levels processed right to left, plus an optional Reed-Solomon base code over q_T."""

    q: int
    levels: tuple[Level, ...]
    base: Optional[dict] = None
    name: str = "custom"

    @property
    def q_top(self) -> int:
        q = self.q
        for lv in self.levels:
            q = q**lv.k_bar
        return q

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "q": self.q,
            "levels": [lv.to_dict() for lv in self.levels],
            "base": self.base,
        }

    def fields(self, F1: Field) -> list[Field]:
        """F_{q_1}, ..., F_{q_T} as successive towers."""
        out = [F1]
        for lv in self.levels:
            out.append(make_tower(out[-1], lv.k_bar).ext)
        return out

    def build_collections(self, F1: Field) -> list[MFCollection]:
        fields = self.fields(F1)
        return [build_level(fields[t], lv) for t, lv in enumerate(self.levels)]

    def build_base(self, F1: Field) -> TransversalTriple:
        if self.base is None:
            raise ConstraintError("this schedule has no built-in base code; supply one")
        if self.base.get("family", "rs") != "rs":
            raise ConstraintError(f"unknown base family {self.base.get('family')!r}")
        FT = self.fields(F1)[-1]
        return rs_transversal(FT, int(self.base["k"]), int(self.base["l"]))


def build_level(F: Field, lv: Level, rm_size_bound: Optional[int] = None) -> MFCollection:
    if F.order != lv.q:
        raise FieldError(f"level expects q = {lv.q}, field has order {F.order}")
    tower = make_tower(F, lv.k_bar)
    if lv.family == "rs":
        return lift_classical(mf_rs(F, lv.n_bar, lv.k_bar, 4, tower))
    if lv.family == "rm":
        kwargs = {} if rm_size_bound is None else {"size_bound": rm_size_bound}
        mf = mf_rm(F, lv.k_bar, 4, tower, **kwargs)
        if mf.n != lv.n_bar:
            raise ConstraintError(f"RM level length {mf.n} differs from the scheduled n̄ = {lv.n_bar}")
        return lift_classical(mf)
    if lv.family == "quantum":
        return mf_quantum(F, lv.k_bar, lv.r_bar, lv.l_bar, 4, tower)
    raise ConstraintError(f"unknown MF family {lv.family!r}")


def _restriction_r(k_bar: int) -> int:
    return (k_bar - 1) // 3 + 1


def _b1_level(qt: int, kb: Optional[int] = None) -> Level:
    if qt < 5:
        kb = 3 if kb is None else kb
        return Level(qt, "rm", kb, _restriction_r(kb), qt ** (4 * (kb - 1)))
    if qt < 200:
        kb = (qt - 1) // 4 + 1 if kb is None else kb
        return Level(qt, "rs", kb, _restriction_r(kb), qt)
    kb = qt // 50 if kb is None else kb
    return Level(qt, "quantum", kb, _restriction_r(kb), qt - 5 * kb, 5 * kb, 10 * kb)


def schedule_b1(
    q: int,
    depth: int,
    bound: int = MAX_ORDER,
    k_bar: Optional[Sequence[Optional[int]]] = None,
    base: Optional[dict] = None,
) -> Schedule:
    """The RS/RM iterative schedule with depth T: T−1 MF levels and an RS base over q_T.

    Per level: q_t < 5 uses RM with k̄ = 3 (n̄ = q_t^8); 5 ≤ q_t < 200 uses RS
    with k̄ = ⌊(q_t−1)/4⌋+1 and n̄ = q_t; q_t ≥ 200 uses the quantum MF code
    with k̄ = ⌊q_t/50⌋, r̄ = 5k̄, ℓ̄ = 10k̄, n̄ = q_t − r̄.  The restriction is
    r_t = ⌊(k̄_t−1)/3⌋+1 and q_{t+1} = q_t^{k̄_t}.  The base code has
    k̂ = ⌊q_T/8⌋ and ℓ̂ = 2k̂.

    Args:
        k_bar: optional per-level k̄ overrides (None entries keep the default);
            the family still follows q_t and n̄, r_t follow k̄.
        base: optional overrides of the base code's ``k`` and ``l``.
    """
    if depth < 1:
        raise ConstraintError("T ≥ 1 violated")
    overrides = list(k_bar or [])
    if len(overrides) > depth - 1:
        raise ConstraintError(f"{len(overrides)} k̄ overrides for {depth - 1} levels")
    overrides += [None] * (depth - 1 - len(overrides))
    levels = []
    qt = q
    for t in range(depth - 1):
        lv = _b1_level(qt, overrides[t])
        if lv.k_bar < 1:
            raise ConstraintError(f"level {t + 1}: k̄ ≥ 1 violated")
        nxt = qt**lv.k_bar
        if nxt > bound:
            raise FieldError(f"level {t + 1}: q_{t + 2} = {qt}^{lv.k_bar} = {nxt} exceeds the field bound {bound}")
        levels.append(lv)
        qt = nxt
    k_hat = qt // 8
    base_code = {"family": "rs", "k": k_hat, "l": 2 * k_hat}
    base_code.update(base or {})
    name = "b1" if not any(overrides) and not base else "b1-override"
    return Schedule(q, tuple(levels), base_code, name=name)


def schedule_thm61(q: int, bound: int = MAX_ORDER) -> Schedule:
    """Levels up to the first q_T ≥ 64: RM with k̄ = 4 (n̄ = q^12) below 5, RS with k̄ = 2 otherwise; r = 1.

    The base code over q_T is left to the caller.
    """
    levels = []
    qt = q
    while qt < 64:
        if qt < 5:
            lv = Level(qt, "rm", 4, 1, qt**12)
        else:
            lv = Level(qt, "rs", 2, 1, qt)
        nxt = qt**lv.k_bar
        if nxt > bound:
            raise FieldError(f"level {len(levels) + 1}: q = {nxt} exceeds the field bound {bound}")
        levels.append(lv)
        qt = nxt
    return Schedule(q, tuple(levels), None, name="thm61")


def desk_q2_schedule() -> Schedule:
    """Two RM levels with k̄ = 2 over F_2 and F_4 and an RS [[14,2,4]]_16 base."""
    levels = (Level(2, "rm", 2, 1, 16), Level(4, "rm", 2, 1, 256))
    return Schedule(2, levels, {"family": "rs", "k": 2, "l": 5}, name="desk-q2")


def schedule_from_dict(d: dict) -> Schedule:
    """Parse a custom schedule: ``{"q", "levels": [{"family", "k_bar", "r", ...}], "base"}``.

    Level ``q`` and ``n_bar`` are filled in when omitted.
    """
    q = int(d["q"])
    levels = []
    qt = q
    for raw in d.get("levels", []):
        fam = raw["family"]
        kb = int(raw["k_bar"])
        r = int(raw.get("r", 1))
        if fam == "rm":
            nb = qt ** (4 * (kb - 1))
        elif fam == "rs":
            nb = int(raw.get("n_bar", qt))
        elif fam == "quantum":
            nb = qt - int(raw["r_bar"])
        else:
            raise ConstraintError(f"unknown MF family {fam!r}")
        if "n_bar" in raw and int(raw["n_bar"]) != nb:
            raise ConstraintError(f"n̄ = {raw['n_bar']} inconsistent with family {fam} over q = {qt}")
        lv = Level(qt, fam, kb, r, nb, raw.get("r_bar"), raw.get("l_bar"))
        levels.append(lv)
        qt = qt**kb
        if qt > MAX_ORDER:
            raise FieldError(f"level {len(levels)}: q = {qt} exceeds the field bound {MAX_ORDER}")
    return Schedule(q, tuple(levels), d.get("base"), name=str(d.get("name", "custom")))


def pipeline(
    base: TransversalTriple,
    schedule: Schedule,
    collections: Optional[Sequence[MFCollection]] = None,
    F1: Optional[Field] = None,
    progress=None,
) -> TransversalTriple:
    """Fold the diamond right to left over the schedule's levels, ending over F_{q_1}."""
    if collections is None:
        if F1 is None:
            raise ValueError("pass the bottom field F1 or prebuilt collections")
        collections = schedule.build_collections(F1)
    if len(collections) != len(schedule.levels):
        raise ValueError("one MF collection per level is required")
    cur = base
    for t in range(len(schedule.levels) - 1, -1, -1):
        lv = schedule.levels[t]
        try:
            cur = diamond(collections[t], cur, lv.r)
        except (ConstraintError, CompatibilityError, FieldError) as exc:
            raise type(exc)(f"level {t + 1}: {exc}") from exc
        if progress is not None:
            progress(t + 1, cur)
    info = dict(cur.info)
    info["schedule"] = schedule.to_dict()
    if not schedule.levels:
        return cur
    return TransversalTriple(cur.codes, cur.b, cur.same_code, info)


def build_pipeline(schedule: Schedule, F1: Field, progress=None) -> TransversalTriple:
    base = schedule.build_base(F1)
    return pipeline(base, schedule, F1=F1, progress=progress)


def gamma_exponent(n: int, k: int, d: int) -> float:
    """log(n/k) / log(d)."""
    if k < 1:
        raise ValueError("k ≥ 1 required")
    if d < 2:
        raise ValueError("d ≥ 2 required for the overhead exponent")
    return math.log(n / k) / math.log(d)
