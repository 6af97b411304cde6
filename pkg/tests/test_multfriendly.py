from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codekit import flinalg as fl
from codekit.classical import star
from codekit.css import css_distance_bruteforce
from codekit.errors import ConstraintError, InvalidCodeError
from codekit.gf import make_field
from codekit.multfriendly import (
    ext_multiply,
    lift_classical,
    member_encoder,
    mf_quantum,
    mf_rm,
    mf_rs,
    permute_rm_members,
    shared_member_variant,
    solve_dec,
    tower_one,
    verify_mf,
    verify_mf_exhaustive_oracle,
)

from naive import NaiveGF

F2, F5 = make_field(2), make_field(5)
F8 = make_field(2, 3)


@pytest.fixture(scope="module")
def rs5():
    return mf_rs(F5, 5, 2, 4)


@pytest.fixture(scope="module")
def rm2():
    return mf_rm(F2, 2, 4)


def test_rs_collection_passes_with_sixteen_basis_checks(rs5):
    assert (rs5.n, rs5.k, rs5.m) == (5, 2, 4)
    cert = verify_mf(rs5)
    assert cert.passed and cert.checks == 16


def test_rs_one_times_one(rs5):
    one = tower_one(rs5.tower)
    w = fl.matmul(F5, one, member_encoder(rs5.member(1)))
    got = fl.matmul(F5, rs5.dec, star(F5, w, w, w, w))
    assert got.tolist() == [1, 0]


def test_rs_random_products_match_tower(rs5):
    rng = np.random.default_rng(4)
    E = rs5.tower.ext
    for _ in range(50):
        vals = E.random(rng, 4)
        coords = rs5.tower.flatten(vals)
        words = [fl.matmul(F5, z, member_encoder(rs5.member(h + 1))) for h, z in enumerate(coords)]
        want = 1
        for v in vals:
            want = E.mul_int(want, int(v))
        assert rs5.tower.unflatten(fl.matmul(F5, rs5.dec, star(F5, *words))) == want


def test_rs_constraints():
    with pytest.raises(ConstraintError, match=r"m\(k−1\) < n violated"):
        mf_rs(F5, 4, 2, 4)
    with pytest.raises(ConstraintError, match="n ≤ q violated"):
        mf_rs(F5, 6, 2, 4)


def test_rm_members_and_pass(rm2):
    assert rm2.n == 16 and rm2.k == 2
    assert len({tuple(map(tuple, member_encoder(c))) for c in rm2.members}) == 4
    assert verify_mf(rm2).passed


def test_rm_exhaustive_against_naive_f4(rm2):
    gamma = rm2.tower.gamma
    f4 = NaiveGF(2, gamma)
    encs = rm2.encoders()
    checks = 0
    for zs in itertools.product(range(4), repeat=4):
        words = [fl.matmul(F2, np.array(f4.to_poly(z)), e) for z, e in zip(zs, encs)]
        got = f4.from_poly(fl.matmul(F2, rm2.dec, star(F2, *words)))
        want = 1
        for z in zs:
            want = f4.mul(want, z)
        assert got == want
        checks += 1
    assert checks == 256
    assert verify_mf_exhaustive_oracle(rm2)


def test_rm_zeroed_dec_column_fails(rm2):
    dec = rm2.dec.copy()
    col = int(np.flatnonzero(np.any(dec != 0, axis=0))[0])
    dec[:, col] = 0
    bad = rm2.with_dec(dec)
    assert not verify_mf(bad).passed
    assert not verify_mf_exhaustive_oracle(bad)


def test_shared_member_rm_fails(rm2):
    shared = shared_member_variant(rm2)
    assert not verify_mf(shared).passed
    # no decoder at all works for a single shared code
    assert solve_dec(shared.members, shared.tower) is None


def test_rm_degenerate_repetition():
    mf = mf_rm(F5, 1, 3)
    assert mf.n == 1 and mf.k == 1
    assert verify_mf(mf).passed


def test_rm_size_bound():
    with pytest.raises(ConstraintError, match="size bound"):
        mf_rm(F2, 3, 4, size_bound=2**7)


@pytest.mark.parametrize("shift", [1, 2, 3])
def test_rm_members_are_permutation_equivalent(rm2, shift):
    perm = permute_rm_members(rm2, shift)
    assert sorted(perm) == list(range(rm2.n))
    for h in range(rm2.m):
        moved = member_encoder(rm2.members[(h + shift) % rm2.m])[:, perm]
        assert np.array_equal(moved, member_encoder(rm2.members[h]))


def test_lift_keeps_identity(rs5):
    lifted = lift_classical(rs5)
    assert lifted.kind == "quantum"
    for c in lifted.members:
        assert c.x_stab.shape[0] == 0 and (c.n, c.k) == (5, 2)
    assert verify_mf(lifted).passed
    with pytest.raises(InvalidCodeError):
        lift_classical(lifted)


def test_quantum_mf_8():
    mf = mf_quantum(F8, 1, 1, 2, 4)
    c = mf.member(1)
    assert (c.n, c.k) == (7, 1)
    assert verify_mf(mf).passed
    assert css_distance_bruteforce(c) == 2


def test_quantum_mf_exhaustive_small():
    mf = mf_quantum(make_field(7), 1, 1, 2, 2)
    assert verify_mf(mf).passed and verify_mf_exhaustive_oracle(mf)


def test_quantum_constraint_gate():
    with pytest.raises(ConstraintError, match=r"m\(ℓ−1\) < n violated: m\(ℓ−1\) = 24, n = q−r = 3"):
        mf_quantum(F8, 2, 5, 7, 4)
    with pytest.raises(ConstraintError, match="k ≤ r violated"):
        mf_quantum(F8, 2, 1, 2, 1)


def test_quantum_stabilizer_shift_is_invisible():
    mf = mf_quantum(make_field(11), 2, 3, 4, 2)
    rng = np.random.default_rng(0)
    F = mf.field
    E = mf.tower.ext
    c = mf.member(1)
    assert c.x_stab.shape[0] > 0
    for _ in range(20):
        zs = mf.tower.flatten(E.random(rng, 2))
        words = [fl.matmul(F, z, c.encz) for z in zs]
        shifted = [F.add(w, fl.matmul(F, F.random(rng, c.x_stab.shape[0]), c.x_stab)) for w in words]
        a = fl.matmul(F, mf.dec, star(F, *words))
        b = fl.matmul(F, mf.dec, star(F, *shifted))
        assert np.array_equal(a, b)
        assert np.array_equal(a, ext_multiply(mf.tower, [z[None, :] for z in zs])[0])


def test_zero_tuple(rs5):
    z = np.zeros(rs5.n, dtype=np.int64)
    assert not np.any(fl.matmul(F5, rs5.dec, star(F5, z, z, z, z)))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([(5, 5, 2, 4), (7, 7, 2, 3), (7, 7, 3, 2), (8, 8, 2, 5), (9, 9, 3, 3)]), st.integers(0, 2**31))
def test_rs_random_modes_agree(params, seed):
    from codekit.gf import field_from_order

    q, n, k, m = params
    mf = mf_rs(field_from_order(q), n, k, m)
    assert verify_mf(mf).passed
    assert verify_mf(mf, "rand", samples=100, seed=seed).passed
    dec = mf.dec.copy()
    rng = np.random.default_rng(seed)
    i, j = int(rng.integers(0, k)), int(rng.integers(0, n))
    dec[i, j] = (dec[i, j] + 1) % mf.field.order
    assert not verify_mf(mf.with_dec(dec)).passed


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**31))
def test_solve_dec_recovers_a_valid_decoder(seed):
    mf = mf_rs(F5, 5, 2, 3)
    dec = solve_dec(mf.members, mf.tower)
    assert dec is not None and verify_mf(mf.with_dec(dec)).passed
