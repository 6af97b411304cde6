"""Small randomized transversal-CCZ instances shared by the test modules."""

from __future__ import annotations

import numpy as np

from codekit.classical import make_code, rs_code
from codekit.gf import make_field
from codekit.transversal import build_from_classical


def tiny_instance(seed: int):
    """Generalized RS triple over F_5 or F_7 with n ≤ 8, k = 1 and random column multipliers.

    Each slot gets its own multipliers, so the three codes usually differ.
    """
    rng = np.random.default_rng(seed)
    q = int(rng.choice([5, 7]))
    F = make_field(q)
    n_full = int(rng.integers(5, q + 1))
    points = sorted(int(x) for x in rng.choice(q, size=n_full, replace=False))
    base = rs_code(F, points, 2)
    codes = []
    for _ in range(3):
        mult = rng.integers(1, q, size=n_full)
        codes.append(make_code(F, F.mul(base.gen, mult[None, :])))
    a = [int(rng.integers(0, n_full))]
    return build_from_classical(codes, a)


def plant_fault(triple, seed: int):
    """Perturb b at one random coordinate where every code's Q_Z has support."""
    F = triple.field
    rng = np.random.default_rng(seed)
    support = np.ones(triple.n, dtype=bool)
    for c in triple.codes:
        support &= np.any(np.concatenate([c.x_stab, c.encz]) != 0, axis=0)
    x = int(rng.choice(np.flatnonzero(support)))
    delta = int(rng.integers(1, F.order))
    b = triple.b.copy()
    b[x] = F.add_int(int(b[x]), delta)
    return triple.with_b(b), x
