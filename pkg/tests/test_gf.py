from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codekit.errors import FieldError
from codekit.gf import (
    ExtensionField,
    FieldSpec,
    is_irreducible,
    make_field,
    make_tower,
    parse_field,
    smallest_irreducible,
)

import naive

FIELDS = [(2, 1), (3, 1), (5, 1), (13, 1), (2, 2), (2, 3), (2, 4), (3, 2), (5, 2), (7, 2)]


def test_prime_field_modulus_is_x():
    assert make_field(5, 1).modulus == (0, 1)


@pytest.mark.parametrize("p,r", [(2, 2), (2, 3), (2, 4), (3, 2), (5, 2), (7, 2)])
def test_modulus_matches_naive_search(oracle, p, r):
    assert list(make_field(p, r).modulus) == oracle["smallest_modulus"][f"{p},{r}"]


def test_f16_modulus_and_irreducible_list(oracle):
    assert make_field(2, 4).modulus == (1, 1, 0, 0, 1)
    F2 = make_field(2)
    found = [f for f in oracle["irreducibles_2_4"] if is_irreducible(F2, f)]
    assert found == oracle["irreducibles_2_4"]
    # every other monic quartic with nonzero constant is reducible
    for low in range(8):
        f = [1] + [(low >> i) & 1 for i in range(3)] + [1]
        assert is_irreducible(F2, f) == (f in oracle["irreducibles_2_4"])


def test_f4_x_squared():
    F = make_field(2, 2)
    assert F.mul_int(2, 2) == 3


def test_f8_inverses_exhaustive():
    F = make_field(2, 3)
    for a in range(1, 8):
        assert F.mul_int(a, F.inv_int(a)) == 1


def test_f25_products_match_schoolbook(oracle):
    F = make_field(5, 2)
    for a, b, c in oracle["f25_products"]:
        assert F.mul_int(a, b) == c
    a = np.array([x[0] for x in oracle["f25_products"]])
    b = np.array([x[1] for x in oracle["f25_products"]])
    assert F.mul(a, b).tolist() == [x[2] for x in oracle["f25_products"]]


def test_f16_table_matches_oracle(oracle):
    F = make_field(2, 4)
    e = F.elements()
    assert F.mul(e[:, None], e[None, :]).tolist() == oracle["f16_mul_table"]


def test_f16_over_f4_tower(oracle):
    F4 = make_field(2, 2)
    t = make_tower(F4, 2)
    assert list(t.gamma) == oracle["f16_over_f4_gamma"]
    assert isinstance(t.ext, ExtensionField)
    for a, b, c in oracle["f16_over_f4_products"]:
        assert t.ext.mul_int(a, b) == c


def test_tower_over_prime_is_fieldspec():
    t = make_tower(make_field(5), 2)
    assert t.ext == make_field(5, 2)
    assert make_tower(make_field(5), 1).ext == make_field(5)


def test_trace_values(oracle):
    t = make_tower(make_field(2), 2)
    assert t.trace(0) == 0
    assert t.trace(2) == oracle["f4_trace_of_x"] == 1
    t5 = make_tower(make_field(5), 3)
    for c in range(5):
        assert t5.trace(c) == (3 * c) % 5


def test_flatten_roundtrip_f4():
    t = make_tower(make_field(2), 2)
    assert t.flatten(0).tolist() == [0, 0]
    for v in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        assert t.flatten(t.unflatten(np.array(v))).tolist() == list(v)


def test_mul_matrix_witness_f25():
    t = make_tower(make_field(5), 2)
    rng = np.random.default_rng(3)
    for _ in range(30):
        a, b = (int(x) for x in rng.integers(0, 25, 2))
        lhs = t.flatten(t.ext.mul_int(a, b))
        rhs = (t.mul_matrix(a) @ t.flatten(b)) % 5
        assert lhs.tolist() == rhs.tolist()


def test_parse_field_forms():
    assert parse_field("13") == make_field(13)
    assert parse_field("2^4") == make_field(2, 4)
    assert isinstance(parse_field("4^2"), ExtensionField)
    assert parse_field("5^2") == make_field(5, 2)
    with pytest.raises(FieldError):
        parse_field("6")
    with pytest.raises(FieldError):
        parse_field("abc")


def test_invalid_fieldspec_rejected():
    with pytest.raises(FieldError):
        FieldSpec(4, 1, (0, 1))
    with pytest.raises(FieldError):
        FieldSpec(2, 2, (1, 0, 1))  # X^2+1 = (X+1)^2
    with pytest.raises(FieldError):
        make_field(2, 33)


def test_out_of_range_element():
    F = make_field(5)
    with pytest.raises(FieldError):
        F.check(5)


def test_smallest_irreducible_tower_f4():
    assert smallest_irreducible(make_field(2, 2), 2) == (2, 1, 1)


@st.composite
def field_and_elems(draw, count=3):
    p, r = draw(st.sampled_from(FIELDS))
    F = make_field(p, r)
    return F, [draw(st.integers(0, F.order - 1)) for _ in range(count)]


@settings(max_examples=150, deadline=None)
@given(field_and_elems())
def test_field_axioms(data):
    F, (a, b, c) = data
    assert F.add_int(a, b) == F.add_int(b, a)
    assert F.mul_int(a, b) == F.mul_int(b, a)
    assert F.mul_int(a, F.add_int(b, c)) == F.add_int(F.mul_int(a, b), F.mul_int(a, c))
    assert F.mul_int(F.mul_int(a, b), c) == F.mul_int(a, F.mul_int(b, c))
    assert F.add_int(a, F.neg_int(a)) == 0
    if a:
        assert F.mul_int(a, F.inv_int(a)) == 1


@settings(max_examples=80, deadline=None)
@given(field_and_elems(count=2))
def test_scalar_matches_naive(data):
    F, (a, b) = data
    ref = naive.NaiveGF(F.p, F.modulus)
    assert F.mul_int(a, b) == ref.mul(a, b)
    assert F.add_int(a, b) == ref.add(a, b)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 2**31))
def test_vectorized_matches_scalar(pr, seed):
    F = make_field(*pr)
    rng = np.random.default_rng(seed)
    a, b = F.random(rng, 20), F.random(rng, 20)
    assert F.mul(a, b).tolist() == [F.mul_int(int(x), int(y)) for x, y in zip(a, b)]
    assert F.sub(a, b).tolist() == [F.sub_int(int(x), int(y)) for x, y in zip(a, b)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 2), (2, 3), (3, 2), (5, 2), (2, 4)]), st.integers(0, 10**6))
def test_trace_is_linear_and_lands_in_base(pr, seed):
    base = make_field(*pr) if pr != (2, 4) else make_field(2, 2)
    t = make_tower(base, 2)
    rng = np.random.default_rng(seed)
    x, y = (int(v) for v in t.ext.random(rng, 2))
    c = int(base.random(rng))
    assert t.trace(t.ext.add_int(x, t.ext.mul_int(c, y))) == base.add_int(t.trace(x), base.mul_int(c, t.trace(y)))
    assert 0 <= t.trace(x) < base.order
