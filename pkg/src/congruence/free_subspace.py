"""Subspaces whose images under every tuple component are jointly independent."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import NotFoundError, ShapeError
from .matrix import Matrix, basis_completion, inverse, rank
from .tuple_rank import MatrixTuple, projective_points

DEFAULT_RETRIES = 16
DEFAULT_GRID_BUDGET = 4096
DEFAULT_ESCALATIONS = 2


@dataclass(frozen=True)
class FreeSubspace:
    basis: Matrix
    image_rank_check: int
    attempts: int = 0
    fallback: bool = False

    @property
    def dim(self) -> int:
        return self.basis.cols


def image_matrix(T: MatrixTuple, V: Matrix) -> Matrix:
    """[M_1 V | ... | M_s V]."""
    return Matrix.hstack([M @ V for M in T.matrices])


def _random_vector(T: MatrixTuple, level: int, rng) -> Matrix:
    ar = T.config.arith(level)
    return Matrix(T.config, ar.random((T.shape[1], 1), rng), level)


def _grid(T: MatrixTuple, budget: int):
    """Deterministic candidates: base-field projective points, or small integer vectors over Q."""
    k = T.shape[1]
    if T.config.is_tower:
        pts = projective_points(T.config, k, 0)
    else:
        small = [T.config.element(c) for c in (0, 1, -1, 2, -2)]
        pts = (
            (T.config.zero(),) * lead + (T.config.one(),) + tail
            for lead in range(k)
            for tail in itertools.product(small, repeat=k - lead - 1)
        )
    for v in itertools.islice(pts, budget):
        yield Matrix.column(T.config, v)


def _is_free(T: MatrixTuple, v: Matrix) -> bool:
    if v.is_zero():
        return False
    return rank(image_matrix(T, v)) == T.s


def find_free_vector(
    T: MatrixTuple,
    seed=None,
    retries: int = DEFAULT_RETRIES,
    min_field_size: int = 0,
    grid_budget: int = DEFAULT_GRID_BUDGET,
    escalations: int = DEFAULT_ESCALATIONS,
    stats: dict | None = None,
) -> Matrix:
    """A column v with M_1 v, ..., M_s v linearly independent.

    Random draws come first, then a deterministic grid over the base field,
    then random draws at higher tower levels.  Every candidate is checked by
    an exact rank computation.
    """
    rng = np.random.default_rng(seed)
    cfg = T.config
    stats = {} if stats is None else stats
    stats.setdefault("attempts", 0)
    stats.setdefault("fallback", False)
    if T.shape[1] == 0:
        raise NotFoundError("the tuple has no columns")
    if T.s == 0:
        return Matrix.column(cfg, [1] + [0] * (T.shape[1] - 1))
    level = max(T.level, cfg.level_for_size(min_field_size)) if cfg.is_tower else 0

    def draw(lev):
        for _ in range(retries):
            stats["attempts"] += 1
            v = _random_vector(T, lev, rng)
            if _is_free(T, v):
                return v
        return None

    v = draw(level)
    if v is not None:
        return v
    stats["fallback"] = True
    for v in _grid(T, grid_budget):
        if _is_free(T, v):
            return v
    if cfg.is_tower:
        for extra in range(1, escalations + 1):
            cfg.ensure_level(level + extra)
            v = draw(level + extra)
            if v is not None:
                return v
    raise NotFoundError("no free vector found; the tuple rank is probably below the number of components")


def _quotient(T: MatrixTuple, V2: Matrix | None, W2: Matrix | None):
    rows, cols = T.shape
    P = basis_completion(V2) if V2 is not None and V2.cols else Matrix.identity(T.config, cols, T.level)
    Q = basis_completion(W2) if W2 is not None and W2.cols else Matrix.identity(T.config, rows, T.level)
    a = V2.cols if V2 is not None else 0
    b = W2.cols if W2 is not None else 0
    Qi = inverse(Q)
    mats = [(Qi @ M @ P)[b:, a:] for M in T.matrices]
    return MatrixTuple.of(mats, None, T.config, check=False), P, Q


def quotient_tuple(T: MatrixTuple, V2: Matrix | None, W2: Matrix | None) -> MatrixTuple:
    """Induced tuple K^cols / V2 -> K^rows / W2 in complement coordinates.

    The output has rows - dim W2 rows and cols - dim V2 columns.
    """
    if V2 is not None and V2.rows != T.shape[1]:
        raise ShapeError("V2 must live in the domain")
    if W2 is not None and W2.rows != T.shape[0]:
        raise ShapeError("W2 must live in the codomain")
    return _quotient(T, V2, W2)[0]


def find_free_subspace(
    T: MatrixTuple,
    l: int,
    seed=None,
    retries: int = DEFAULT_RETRIES,
    min_field_size: int = 0,
    grid_budget: int = DEFAULT_GRID_BUDGET,
) -> FreeSubspace:
    """An l-dimensional V with dim(M_1 V + ... + M_s V) = l*s.

    Picks a free vector v, passes to the quotient by <v> and by the span of
    the M_i v, recurses on l - 1 and lifts the result back.
    """
    rng = np.random.default_rng(seed)
    stats: dict = {}
    cols = T.shape[1]
    if l > cols:
        raise NotFoundError(f"cannot fit a {l}-dimensional subspace in dimension {cols}")
    if T.s == 0:
        V = Matrix.identity(T.config, cols, T.level)[:, :l]
        return FreeSubspace(V, 0)
    vectors = []
    lift = Matrix.identity(T.config, cols, T.level)
    current = T
    for _ in range(l):
        v = find_free_vector(current, rng, retries, min_field_size, grid_budget, stats=stats)
        vectors.append(lift @ v)
        W2 = image_matrix(current, v)
        current, P, _ = _quotient(current, v, W2)
        lift = lift @ P[:, 1:]
    if vectors:
        V = Matrix.hstack(vectors)
    else:
        V = Matrix.zeros(T.config, cols, 0, T.level)
    rk = rank(image_matrix(T, V)) if l else 0
    if rk != l * T.s:
        raise NotFoundError(f"lifted subspace has image rank {rk}, expected {l * T.s}")
    return FreeSubspace(V, rk, stats.get("attempts", 0), stats.get("fallback", False))
