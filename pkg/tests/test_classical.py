from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codekit import flinalg as fl
from codekit.classical import (
    distance_bruteforce,
    dual_code,
    full_rs,
    make_code,
    puncture,
    rs_code,
    star,
    star_product_span,
)
from codekit.gf import make_field

F2, F5, F13 = make_field(2), make_field(5), make_field(13)


def test_full_rs_parameters(oracle):
    c = full_rs(F5, 2)
    assert (c.n, c.k) == (5, 2)
    assert distance_bruteforce(c) == oracle["rs_5_2_distance"] == 4


def test_rs_full_dimension_is_whole_space():
    c = rs_code(F5, [0, 1, 2], 3)
    assert fl.same_space(F5, c.gen, np.eye(3, dtype=np.int64))


def test_dual_of_rs_is_rs(oracle):
    c = full_rs(F5, 2)
    d = dual_code(c)
    assert fl.same_space(F5, d.gen, full_rs(F5, 3).gen)
    assert distance_bruteforce(d) == oracle["rs_5_2_dual_distance"] == 3


def test_dual_trivial_cases():
    full = make_code(F2, np.eye(3, dtype=np.int64))
    assert dual_code(full).k == 0
    c = full_rs(F5, 2)
    assert dual_code(dual_code(c)) == c


def test_star_products(oracle):
    rep = make_code(F2, [[1, 1, 1]])
    assert star_product_span(rep, rep, rep) == rep
    zero = make_code(F2, fl.empty(3))
    assert star_product_span(rep, zero, rep).k == 0
    c3 = full_rs(F13, 3)
    s = star_product_span(c3, c3, c3)
    assert s.k == oracle["rs13_star3_rank"] == 7
    assert fl.same_space(F13, s.gen, full_rs(F13, 7).gen)


def test_puncture(oracle):
    c = full_rs(F5, 2)
    assert puncture(c, range(5)) == c
    p = puncture(c, [0, 1, 2, 3])
    assert (p.n, p.k) == (4, 2)
    assert distance_bruteforce(p) == oracle["rs_5_2_punctured_distance"] == 3
    zero = make_code(F5, fl.empty(4))
    assert puncture(zero, [0, 1]).k == 0


def test_distance_full_space():
    assert distance_bruteforce(make_code(F2, np.eye(3, dtype=np.int64))) == 1


def test_rs_rejects_repeated_points():
    with pytest.raises(ValueError):
        rs_code(F5, [0, 0, 1], 2)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([5, 7, 8, 9, 11]), st.integers(1, 4), st.integers(0, 2**31))
def test_rs_is_mds(q, k, seed):
    from codekit.gf import field_from_order

    F = field_from_order(q)
    rng = np.random.default_rng(seed)
    n = int(rng.integers(k, min(q, 7) + 1))
    pts = rng.choice(q, size=n, replace=False).tolist()
    c = rs_code(F, pts, k)
    assert c.k == k
    assert distance_bruteforce(c) == n - k + 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31))
def test_star_is_commutative_and_in_span(seed):
    rng = np.random.default_rng(seed)
    x, y, z = (F5.random(rng, 5) for _ in range(3))
    assert star(F5, x, y, z).tolist() == star(F5, z, x, y).tolist()
    c = full_rs(F5, 2)
    s = star_product_span(c, c, c)
    u, v, w = (fl.matmul(F5, F5.random(rng, 2), c.gen) for _ in range(3))
    assert fl.in_rowspace(F5, s.gen, star(F5, u, v, w)[None, :]).all()
