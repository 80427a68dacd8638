import pytest

from congruence import Matrix, MatrixTuple, find_free_subspace, find_free_vector, quotient_tuple, rank
from congruence.errors import NotFoundError
from congruence.fixtures import random_invertible, random_symmetric
from congruence.free_subspace import image_matrix


def test_free_vector_identity(Q):
    v = find_free_vector(MatrixTuple.of([Matrix.identity(Q, 2)]), seed=0)
    assert not v.is_zero()


def test_free_vector_pair(Q):
    T = MatrixTuple.of([Matrix.identity(Q, 2), Matrix.diagonal(Q, [1, 2])])
    v = Matrix.column(Q, [1, 1])
    assert rank(image_matrix(T, v)) == 2
    w = find_free_vector(T, seed=3)
    assert rank(image_matrix(T, w)) == 2


def test_free_vector_not_found(Q, F5):
    M = Matrix.from_rows(Q, [[1, 2], [0, 1]])
    with pytest.raises(NotFoundError):
        find_free_vector(MatrixTuple.of([M, M]), seed=0)
    M5 = Matrix.from_rows(F5, [[1, 2], [0, 1]])
    with pytest.raises(NotFoundError):
        find_free_vector(MatrixTuple.of([M5, M5]), seed=0, retries=2)


def test_grid_fallback_is_exercised(F5):
    T = MatrixTuple.of([Matrix.diagonal(F5, [1, 0, 0]), Matrix.diagonal(F5, [0, 1, 0])])
    stats = {}
    v = find_free_vector(T, seed=0, retries=0, stats=stats)
    assert stats["fallback"] and rank(image_matrix(T, v)) == 2


def test_quotient_examples(Q):
    T = MatrixTuple.of([Matrix.identity(Q, 4)])
    assert quotient_tuple(T, None, None).matrices == T.matrices
    e1 = Matrix.column(Q, [1, 0, 0, 0])
    assert quotient_tuple(T, e1, e1).matrices[0] == Matrix.identity(Q, 3)
    D = MatrixTuple.of([Matrix.diagonal(Q, [1, 2, 3])])
    f1 = Matrix.column(Q, [1, 0, 0])
    assert quotient_tuple(D, f1, f1).matrices[0] == Matrix.diagonal(Q, [2, 3])


def test_quotient_dimensions(F5, rng):
    T = MatrixTuple.of([random_symmetric(F5, 6, rng) for _ in range(2)])
    V2 = random_invertible(F5, 6, rng)[:, :2]
    W2 = random_invertible(F5, 6, rng)[:, :3]
    assert quotient_tuple(T, V2, W2).shape == (6 - 3, 6 - 2)


def test_free_subspace_examples(Q, F5, rng):
    fs = find_free_subspace(MatrixTuple.of([Matrix.identity(Q, 4)]), 2, seed=0)
    assert fs.dim == 2 and fs.image_rank_check == 2
    assert find_free_subspace(MatrixTuple.of([Matrix.identity(Q, 4)]), 0).basis.cols == 0
    g = random_invertible(F5, 6, rng)
    D1 = g @ Matrix.diagonal(F5, [1, 0, 0, 0, 0, 0]) @ g.T
    D2 = g @ Matrix.diagonal(F5, [0, 1, 0, 0, 0, 0]) @ g.T
    fs = find_free_subspace(MatrixTuple.of([D1, D2]), 1, seed=1)
    assert fs.image_rank_check == 2 == rank(image_matrix(MatrixTuple.of([D1, D2]), fs.basis))


def test_free_subspace_statistics(F5, rng):
    """Within the retry budget (no fallback) in at least 99% of 200 seeded runs."""
    s, l = 2, 2
    within = 0
    for seed in range(200):
        T = MatrixTuple.of([random_symmetric(F5, l * s + 2, rng) for _ in range(s)])
        fs = find_free_subspace(T, l, seed=seed)
        assert rank(image_matrix(T, fs.basis)) == l * s
        within += not fs.fallback
    assert within >= 198
