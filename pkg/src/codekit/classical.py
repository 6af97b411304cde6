"""Classical linear codes: Reed-Solomon, duals, star products, puncturing."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from codekit import flinalg as fl
from codekit.errors import InvalidCodeError
from codekit.gf import Field


@dataclass(frozen=True, eq=False)
class LinearCode:
    """An [n, k]_q code with RREF generator and an optional designated encoder.

    Attributes:
        field: the alphabet F_q.
        gen: k x n generator matrix in RREF.
        encoder: optional k x n matrix; row i is Enc(e_i).
        eval_points: evaluation points when the code is an evaluation code.
    """

    field: Field
    gen: np.ndarray
    encoder: Optional[np.ndarray] = None
    eval_points: Optional[tuple[int, ...]] = None
    info: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.gen.shape[1]

    @property
    def k(self) -> int:
        return self.gen.shape[0]

    def validate(self) -> None:
        F = self.field
        if fl.rank(F, self.gen) != self.k:
            raise InvalidCodeError("generator rows are dependent")
        if not np.array_equal(fl.row_basis(F, self.gen), self.gen):
            raise InvalidCodeError("generator is not in RREF")
        if self.encoder is not None:
            if self.encoder.shape != self.gen.shape:
                raise InvalidCodeError("encoder shape differs from generator shape")
            if not fl.same_space(F, self.encoder, self.gen):
                raise InvalidCodeError("encoder rows do not span the code")
        if self.eval_points is not None:
            if len(self.eval_points) != self.n or len(set(self.eval_points)) != self.n:
                raise InvalidCodeError("evaluation points must be n distinct elements")

    def encode(self, msg) -> np.ndarray:
        enc = self.encoder if self.encoder is not None else self.gen
        return fl.matmul(self.field, np.asarray(msg, dtype=np.int64), enc)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinearCode)
            and self.field == other.field
            and np.array_equal(self.gen, other.gen)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LinearCode([{self.n},{self.k}]_{self.field.order})"


def make_code(F: Field, gen, encoder=None, eval_points=None, info=None) -> LinearCode:
    """Build a LinearCode from any spanning set (reduced to an RREF basis)."""
    gen = np.asarray(gen, dtype=np.int64)
    code = LinearCode(
        F,
        fl.row_basis(F, gen),
        None if encoder is None else np.asarray(encoder, dtype=np.int64),
        None if eval_points is None else tuple(int(a) for a in eval_points),
        dict(info or {}),
    )
    code.validate()
    return code


def vandermonde(F: Field, points: Sequence[int], k: int) -> np.ndarray:
    """k x |points| matrix with rows ev_A(X^i)."""
    pts = np.asarray(points, dtype=np.int64)
    rows = [np.ones(len(pts), dtype=np.int64)]
    for _ in range(1, k):
        rows.append(F.mul(rows[-1], pts))
    return np.array(rows[:k], dtype=np.int64).reshape(k, len(pts))


def rs_code(F: Field, points: Sequence[int], k: int) -> LinearCode:
    """ev_A(F_q[X]^{<k}) with the coefficient encoder f -> ev_A(f)."""
    points = [F.check(a) for a in points]
    if len(set(points)) != len(points):
        raise ValueError("evaluation points must be distinct")
    if not 0 <= k <= len(points):
        raise ValueError(f"dimension {k} must lie in [0, {len(points)}]")
    enc = vandermonde(F, points, k)
    return make_code(F, enc, encoder=enc, eval_points=points, info={"family": "rs", "k": k})


def full_rs(F: Field, k: int) -> LinearCode:
    return rs_code(F, list(range(F.order)), k)


def dual_code(c: LinearCode) -> LinearCode:
    return make_code(c.field, fl.kernel(c.field, c.gen) if c.k else np.eye(c.n, dtype=np.int64))


def star(F: Field, *vecs) -> np.ndarray:
    """Component-wise product of vectors (broadcasting)."""
    out = np.asarray(vecs[0], dtype=np.int64)
    for v in vecs[1:]:
        out = F.mul(out, v)
    return out


def star_product_span(c1: LinearCode, c2: LinearCode, c3: LinearCode) -> LinearCode:
    """span{x * y * z : x ∈ c1, y ∈ c2, z ∈ c3}."""
    F = c1.field
    if not (c1.field == c2.field == c3.field):
        raise ValueError("field mismatch")
    if not (c1.n == c2.n == c3.n):
        raise ValueError("length mismatch")
    if min(c1.k, c2.k, c3.k) == 0:
        return make_code(F, fl.empty(c1.n))
    prods = star(F, c1.gen[:, None, None, :], c2.gen[None, :, None, :], c3.gen[None, None, :, :])
    return make_code(F, prods.reshape(-1, c1.n))


def puncture(c: LinearCode, keep: Sequence[int]) -> LinearCode:
    """C|_keep: project every codeword onto the coordinates in ``keep``."""
    keep = [int(i) for i in keep]
    if not keep:
        raise ValueError("keep set must be nonempty")
    if any(i < 0 or i >= c.n for i in keep):
        raise IndexError("keep index out of range")
    pts = None if c.eval_points is None else [c.eval_points[i] for i in keep]
    return make_code(c.field, fl.restrict_columns(c.field, c.gen, keep), eval_points=pts)


def distance_bruteforce(c: LinearCode, budget: Optional[int] = None) -> int:
    """Exact minimum distance by enumerating the message space."""
    if c.k == 0:
        raise ValueError("the zero code has no nonzero codewords")
    return fl.min_weight(c.field, c.gen, budget=budget)[0]
