from fractions import Fraction

import pytest

from congruence import (
    LaurentMatrix,
    Matrix,
    basis_completion,
    congruence_apply,
    det,
    inverse,
    kernel,
    rank,
    solve,
    sym_skew_decompose,
)
from congruence.errors import DependentColumnsError, NegativeDegreeError, ShapeError
from congruence.fixtures import random_invertible, random_matrix, random_of_kind
from oracles import rank_fraction, rank_mod_p


def ints(M):
    return [[e.value[0] for e in row] for row in M.tolist()]


def test_rank_examples(Q):
    assert rank(Matrix.identity(Q, 3)) == 3
    assert rank(Matrix.zeros(Q, 4, 7)) == 0
    assert rank(Matrix.from_rows(Q, [[1, 2], [2, 4]])) == 1


def test_rank_matches_oracle_mod_p(F5, rng):
    for _ in range(100):
        r, c = (int(x) for x in rng.integers(1, 8, size=2))
        M = random_matrix(F5, r, c, rng)
        assert rank(M) == rank_mod_p(ints(M), 5)


def test_bareiss_matches_fraction_oracle(Q, rng):
    for _ in range(60):
        r, c = (int(x) for x in rng.integers(1, 7, size=2))
        k = int(rng.integers(0, min(r, c) + 1))
        M = random_matrix(Q, r, k, rng) @ random_matrix(Q, k, c, rng) if k else Matrix.zeros(Q, r, c)
        M = M.scale(Fraction(1, 3))
        rows = [[e.value for e in row] for row in M.tolist()]
        assert rank(M) == rank_fraction(rows)


def test_rank_rejects_laurent(Q):
    with pytest.raises(TypeError):
        rank(LaurentMatrix.monomial_diagonal(Q, [1, 0]))


def test_identity_action(Q):
    M = Matrix.from_rows(Q, [[1, 2], [3, 4]])
    assert congruence_apply(Matrix.identity(Q, 2), M) == M


def test_shear_on_hyperbolic_plane(Q):
    c = Q("5/7")
    g = Matrix.from_rows(Q, [[1, c], [0, 1]])
    M = Matrix.from_rows(Q, [[0, 1], [1, 0]])
    assert congruence_apply(g, M) == Matrix.from_rows(Q, [[2 * c, 1], [1, 0]])


def test_congruence_shape_mismatch(Q):
    with pytest.raises(ShapeError):
        congruence_apply(Matrix.identity(Q, 2), Matrix.identity(Q, 3))


def test_rank_invariance_under_congruence(F5, rng):
    for i in range(200):
        n = int(rng.integers(1, 7))
        M = random_matrix(F5, n, n, rng)
        g = random_invertible(F5, n, rng, level=i % 2)
        assert rank(congruence_apply(g, M)) == rank(M)


def test_action_axiom(F5, rng):
    for _ in range(50):
        n = int(rng.integers(1, 6))
        g, h = random_invertible(F5, n, rng), random_invertible(F5, n, rng)
        M = random_matrix(F5, n, n, rng)
        assert congruence_apply(g @ h, M) == congruence_apply(g, congruence_apply(h, M))


def test_congruence_preserves_kind(F5, rng):
    for kind in ("symmetric", "skew"):
        M = random_of_kind(F5, kind, 5, rng)
        g = random_invertible(F5, 5, rng)
        assert congruence_apply(g, M).satisfies(kind)


def test_decompose_example(Q):
    S, A = sym_skew_decompose(Matrix.from_rows(Q, [[0, 1], [0, 0]]))
    assert S == Matrix.from_rows(Q, [[0, "1/2"], ["1/2", 0]])
    assert A == Matrix.from_rows(Q, [[0, "1/2"], ["-1/2", 0]])


def test_decompose_pure_parts(Q, F5, rng):
    Sym = random_of_kind(F5, "symmetric", 4, rng)
    Alt = random_of_kind(F5, "skew", 4, rng)
    zero = Matrix.zeros(F5, 4, 4)
    assert sym_skew_decompose(Sym) == (Sym, zero)
    assert sym_skew_decompose(Alt) == (zero, Alt)
    for _ in range(20):
        M = random_matrix(Q, 4, 4, rng)
        S, A = sym_skew_decompose(M)
        assert S + A == M and S.is_symmetric() and A.is_skew()
    with pytest.raises(ShapeError):
        sym_skew_decompose(Matrix.zeros(Q, 2, 3))


def test_kernel_and_solve(F5, Q, rng):
    assert kernel(Matrix.identity(Q, 3)).cols == 0
    x = solve(Matrix.from_rows(F5, [[2]]), [1])
    assert x == Matrix.from_rows(F5, [[3]])
    for _ in range(30):
        M = random_matrix(F5, 4, 6, rng, level=1)
        K = kernel(M)
        assert K.cols == 6 - rank(M) and (M @ K).is_zero()
        b = M @ random_matrix(F5, 6, 2, rng)
        assert M @ solve(M, b) == b


def test_solve_inconsistent(Q):
    with pytest.raises(ValueError):
        solve(Matrix.from_rows(Q, [[1], [1]]), [1, 2])


def test_basis_completion(Q, F5, rng):
    e2 = Matrix.column(Q, [0, 1])
    B = basis_completion(e2, 2)
    assert B[:, 0] == e2 and rank(B) == 2
    for _ in range(20):
        V = random_matrix(F5, 6, 3, rng)
        if rank(V) < 3:
            continue
        B = basis_completion(V)
        assert B[:, :3] == V and rank(B) == 6
    with pytest.raises(DependentColumnsError):
        basis_completion(Matrix.from_rows(Q, [[1, 2], [1, 2]]))


def test_det_and_inverse(F5, rng):
    for _ in range(30):
        g = random_invertible(F5, 5, rng, level=1)
        h = random_invertible(F5, 5, rng)
        assert det(g @ h) == det(g) * det(h)
        assert inverse(g) @ g == Matrix.identity(F5, 5)
    with pytest.raises(ZeroDivisionError):
        inverse(Matrix.zeros(F5, 2, 2))


def test_laurent_matrix_limits(Q):
    D = LaurentMatrix.monomial_diagonal(Q, [-1, 1])
    M = Matrix.from_rows(Q, [[0, 2], [2, 3]])
    P = D @ M @ D.T
    assert P.entry(1, 1) == P.entry(1, 1).monomial(Q, 3, 2)
    assert P.eval_at_zero() == Matrix.from_rows(Q, [[0, 2], [2, 0]])
    with pytest.raises(NegativeDegreeError):
        (D @ Matrix.identity(Q, 2) @ D.T).eval_at_zero()
    assert P.evaluate(Q(2)) == D.evaluate(Q(2)) @ M @ D.evaluate(Q(2)).T
