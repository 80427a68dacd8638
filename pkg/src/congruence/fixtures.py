"""Seeded random instances: matrices of prescribed rank, planted free subspaces, configurations."""

from __future__ import annotations

import numpy as np

from .errors import RankPreconditionError
from .field import FieldConfig
from .free_subspace import image_matrix
from .matrix import Matrix, SymKind, rank
from .normal_form import symplectic_form
from .tuple_rank import DEFAULT_BUDGET, MatrixTuple
from .witness import ConfigPoint, TargetCorner, phi_parametrize, rank_gate

MAX_TRIES = 200


def random_matrix(config: FieldConfig, rows: int, cols: int, rng, level: int = 0) -> Matrix:
    return Matrix(config, config.arith(level).random((rows, cols), rng), level)


def random_invertible(config: FieldConfig, N: int, rng, level: int = 0) -> Matrix:
    for _ in range(MAX_TRIES):
        g = random_matrix(config, N, N, rng, level)
        if rank(g) == N:
            return g
    raise RuntimeError("could not sample an invertible matrix")


def _nonzero_scalars(config, k, rng):
    out = []
    while len(out) < k:
        c = random_matrix(config, 1, 1, rng).entry(0, 0)
        if not c.is_zero():
            out.append(c)
    return out


def random_symmetric(config: FieldConfig, N: int, rng, r: int | None = None, level: int = 0) -> Matrix:
    """Random symmetric matrix of rank exactly r (full rank by default)."""
    r = N if r is None else r
    for _ in range(MAX_TRIES):
        A = random_matrix(config, N, r, rng, level)
        M = A @ Matrix.diagonal(config, _nonzero_scalars(config, r, rng)) @ A.T if r else Matrix.zeros(config, N, N)
        if rank(M) == r:
            return M
    raise RuntimeError(f"could not sample a symmetric matrix of rank {r}")


def random_skew(config: FieldConfig, N: int, rng, r: int | None = None, level: int = 0) -> Matrix:
    """Random skew matrix of even rank r (the largest even rank by default)."""
    r = N - N % 2 if r is None else r
    if r % 2:
        raise ValueError("skew-symmetric rank must be even")
    for _ in range(MAX_TRIES):
        A = random_matrix(config, N, r, rng, level)
        M = A @ symplectic_form(config, r, r) @ A.T if r else Matrix.zeros(config, N, N)
        if rank(M) == r:
            return M
    raise RuntimeError(f"could not sample a skew matrix of rank {r}")


def random_of_kind(config: FieldConfig, kind: SymKind, N: int, rng, level: int = 0) -> Matrix:
    A = random_matrix(config, N, N, rng, level)
    return A + A.T if SymKind(kind) is SymKind.SYMMETRIC else A - A.T


def alternating_kinds(s: int) -> list[SymKind]:
    return [SymKind.SYMMETRIC if i % 2 == 0 else SymKind.SKEW for i in range(s)]


def planted_free_tuple(config: FieldConfig, s: int, l: int, rng, kinds=None, N: int | None = None):
    """(T, V): a tuple with V of dimension 2^s l whose image has dimension s 2^s l."""
    K = 2**s * l
    N = K + s * K if N is None else N
    kinds = alternating_kinds(s) if kinds is None else [SymKind(k) for k in kinds]
    for _ in range(MAX_TRIES):
        T = MatrixTuple.of([random_of_kind(config, k, N, rng) for k in kinds], kinds)
        V = random_matrix(config, N, K, rng)
        if rank(image_matrix(T, V)) == s * K:
            return T, V
    raise RuntimeError("could not plant a free subspace")


def config_point(
    config: FieldConfig,
    p: int,
    q: int,
    n: int,
    N: int,
    rng,
    min_rank: int = 0,
    component_rank: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> ConfigPoint:
    """Random configuration whose component tuple ranks are certified >= min_rank.

    ``component_rank`` fixes the rank of every single component instead of
    making it full.
    """
    for _ in range(MAX_TRIES):
        sym = [random_symmetric(config, N, rng, component_rank) for _ in range(p)]
        alt_rank = None if component_rank is None else component_rank - component_rank % 2
        alt = [random_skew(config, N, rng, alt_rank) for _ in range(q)]
        col = random_matrix(config, N, n, rng)
        x = ConfigPoint(config, N, sym, alt, col)
        try:
            rank_gate(x, min_rank, budget=budget)
        except RankPreconditionError:
            continue
        return x
    raise RuntimeError("could not sample a configuration meeting the rank bound")


def random_target(config: FieldConfig, p: int, q: int, n: int, l: int, rng) -> TargetCorner:
    sym = [random_of_kind(config, SymKind.SYMMETRIC, l, rng) for _ in range(p)]
    alt = [random_of_kind(config, SymKind.SKEW, l, rng) for _ in range(q)]
    return TargetCorner(config, l, sym, alt, random_matrix(config, l, n, rng))


def density_demo(config: FieldConfig, N: int = 17) -> ConfigPoint:
    """(Id_N, diag(mu_1..mu_N)) with distinct nonzero mu taken in canonical order."""
    level = config.level_for_size(N + 1)
    mus = []
    for e in config.elements(level):
        if not e.is_zero():
            mus.append(e)
        if len(mus) == N:
            break
    return ConfigPoint(config, N, (Matrix.identity(config, N), Matrix.diagonal(config, mus)))


def phi_sample(config: FieldConfig, p: int, r: int, N: int, rng) -> list[Matrix]:
    """Random point in the image of phi_parametrize."""
    sym = [random_of_kind(config, SymKind.SYMMETRIC, N, rng) for _ in range(p - 1)]
    col = random_matrix(config, N, r, rng)
    lam = random_matrix(config, p, p, rng).tolist()
    return phi_parametrize(p, r, sym, col, lam)


def seeded(seed) -> np.random.Generator:
    return np.random.default_rng(seed)
