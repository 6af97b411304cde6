from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codekit import flinalg as fl
from codekit.classical import full_rs, vandermonde
from codekit.css import (
    BilinearSpec,
    compatible_encx,
    concatenate,
    css_distance,
    css_distance_bruteforce,
    lift_css,
    make_css,
    restrict,
)
from codekit.errors import CompatibilityError, InvalidCodeError
from codekit.gf import make_field, make_tower
from codekit.multfriendly import lift_classical, mf_quantum, mf_rs
from codekit.transversal import css_from_classical, rs_transversal

import naive

F2, F5, F8 = make_field(2), make_field(5), make_field(2, 3)


def test_lift_has_no_x_stabilizers():
    c = lift_css(F5, full_rs(F5, 2).gen)
    assert c.x_stab.shape == (0, 5)
    assert c.k == 2


def test_make_css_from_rs_quotient():
    # Q_Z = RS_{<3}, Q_X = RS_{<3}: Q_X^⊥ = RS_{<2} ⊆ Q_Z
    qz = full_rs(F5, 3).gen
    reps = vandermonde(F5, range(5), 3)[2:].T
    c = make_css(F5, qz, qz, reps)
    assert c.params == (5, 1)


def test_make_css_rejects_non_nested():
    with pytest.raises(InvalidCodeError):
        make_css(F2, np.zeros((0, 3), dtype=np.int64), [[1, 1, 1]], np.array([[1], [1], [1]]))


def test_css_distance_4_1_5_matches_enumeration():
    t = rs_transversal(F5, 1, 2)
    code = t.codes[0]
    assert css_distance_bruteforce(code) == 2
    rep = css_distance(code)
    assert rep.exact and rep.describe() == "exact 2"
    # independent count: list F_5^4 and test orthogonality directly
    space = list(itertools.product(range(5), repeat=code.n))

    def perp(rows):
        return {v for v in space if all(sum(a * b for a, b in zip(v, r)) % 5 == 0 for r in rows)}

    ref = naive.NaiveGF(5, [0, 1])
    qz = naive.span(ref, np.concatenate([code.x_stab, code.encz]).tolist())
    x_perp = naive.span(ref, code.x_stab.tolist())
    qx = perp(code.x_stab.tolist())
    z_perp = perp(list(qz))
    d = min(naive.min_weight(qz - x_perp), naive.min_weight(qx - z_perp))
    assert d == 2


def test_distance_full_space_code():
    c = lift_css(F2, np.eye(3, dtype=np.int64))
    assert css_distance_bruteforce(c) == 1


def test_restrict_dims_and_identity():
    code = lift_classical(mf_rs(F5, 5, 2, 4)).members[0]
    assert restrict(code, np.eye(2, dtype=np.int64)) == code
    r = restrict(code, [[1, 0]])
    assert r.params == (5, 1)
    with pytest.raises(InvalidCodeError):
        restrict(code, np.zeros((0, 2), dtype=np.int64))


def test_restricted_distance_not_smaller():
    code, _ = css_from_classical(full_rs(make_field(7), 3), [5, 6])
    full = css_distance_bruteforce(code)
    for s in ([[1, 0]], [[0, 1]], [[1, 1]]):
        assert css_distance_bruteforce(restrict(code, s)) >= full


def test_concatenation_dimensions():
    F25 = make_field(5, 2)
    tower = make_tower(F5, 2)
    inner = compatible_encx(lift_classical(mf_rs(F5, 5, 2, 4, tower)).members[0], BilinearSpec.trace(tower))
    outer = compatible_encx(rs_transversal(F25, 2, 8).codes[0], BilinearSpec.standard(2))
    c = concatenate(inner, tower, outer)
    assert c.params == (115, 4)
    assert c.info["d_bound"] == 1 * 7
    assert fl.rank(F5, np.concatenate([c.x_stab, c.encz])) == c.x_stab.shape[0] + 4


def test_concatenation_with_trivial_inner():
    tower = make_tower(F5, 1)
    inner = compatible_encx(lift_css(F5, [[1]]), BilinearSpec.trace(tower))
    outer = compatible_encx(rs_transversal(F5, 1, 2).codes[0], BilinearSpec.standard(1))
    c = concatenate(inner, tower, outer)
    assert np.array_equal(c.x_stab, outer.x_stab) and np.array_equal(c.encz, outer.encz)


def test_concatenation_requires_compatible_encoders():
    tower = make_tower(F5, 2)
    inner = lift_classical(mf_rs(F5, 5, 2, 4, tower)).members[0]
    outer = rs_transversal(make_field(5, 2), 2, 8).codes[0]
    with pytest.raises(CompatibilityError):
        concatenate(inner, tower, outer)


def _pairing_holds(code, form) -> bool:
    F = code.field
    G = form.gram()
    k = code.k
    for i, j in itertools.product(range(k), repeat=2):
        if F.dot(code.encx[i], code.encz[j]) != G[i, j]:
            return False
    # single-stabilizer shifts of either representative
    for g in code.x_stab:
        for i, j in itertools.product(range(k), repeat=2):
            if F.dot(code.encx[i], F.add(code.encz[j], g)) != G[i, j]:
                return False
    for h in code.z_stab:
        for i, j in itertools.product(range(k), repeat=2):
            if F.dot(F.add(code.encx[i], h), code.encz[j]) != G[i, j]:
                return False
    return True


def test_trace_compatibility_exhaustive_f8():
    tower = make_tower(make_field(2), 3)
    mf = mf_quantum(F8, 1, 1, 2, 4)
    code = compatible_encx(mf.members[0], BilinearSpec.trace(make_tower(F8, 1)))
    # trace form of F_8/F_8 is the product; check every (x, z) in F_8 x F_8
    for x, z in itertools.product(range(8), repeat=2):
        ex = fl.matmul(F8, np.array([x]), code.encx)
        ez = fl.matmul(F8, np.array([z]), code.encz)
        assert F8.dot(ex, ez) == F8.mul_int(x, z)
    code2 = compatible_encx(lift_css(make_field(2), np.eye(3, dtype=np.int64)), BilinearSpec.trace(tower))
    for x, z in itertools.product(range(8), repeat=2):
        xv, zv = tower.flatten(x), tower.flatten(z)
        lhs = make_field(2).dot(fl.matmul(F2, xv, code2.encx), fl.matmul(F2, zv, code2.encz))
        assert lhs == tower.trace(F8.mul_int(x, z))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(5, 1, 2), (7, 1, 2), (8, 1, 2), (11, 2, 3), (13, 2, 4)]), st.sampled_from(["standard", "trace"]))
def test_compatible_encx_property(params, kind):
    from codekit.gf import field_from_order

    q, k, ell = params
    F = field_from_order(q)
    code = rs_transversal(F, k, ell).codes[0]
    if kind == "standard":
        form = BilinearSpec.standard(k)
        code = compatible_encx(code, form)
    else:
        # use the lifted code of an F_q-tower of degree k
        tower = make_tower(F, k)
        code = compatible_encx(lift_classical(mf_rs(F, q, k, 2, tower)).members[0], BilinearSpec.trace(tower))
        form = BilinearSpec.trace(tower)
    assert _pairing_holds(code, form)


def test_css_from_classical_parameters():
    code, _ = css_from_classical(full_rs(F5, 2), [4])
    assert code.params == (4, 1)
