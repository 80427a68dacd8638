"""Acceptance suite: one PASS/FAIL line per criterion, printed in the terminal summary."""

import csv
from pathlib import Path

import numpy as np

from congruence import (
    FieldConfig,
    MatrixTuple,
    SymKind,
    block_normal_form,
    rank,
    required_rank,
    skew_canonical,
    symmetric_canonical,
    tuple_rank_exhaustive,
    verify_witness,
    witness_full,
    witness_sym,
)
from congruence.cli import experiment_rows
from congruence.fixtures import (
    config_point,
    density_demo,
    phi_sample,
    planted_free_tuple,
    random_invertible,
    random_matrix,
    random_skew,
    random_symmetric,
    random_target,
)
from oracles import block_shape_ok, naive_tuple_rank, rank_mod_p

P = 5
RESULTS = Path(__file__).resolve().parent.parent / "results"


def ints(M):
    return [[e.value[0] if e.value else 0 for e in row] for row in M.tolist()]


def coeffs(M):
    return [[e.value for e in row] for row in M.tolist()]


def test_criterion_1_tuple_rank_oracle(criterion):
    F = FieldConfig.tower(P)
    rng = np.random.default_rng(1)
    with criterion(1, "tuple rank matches naive enumeration", 10) as info:
        agree = 0
        for _ in range(200):
            s, N = int(rng.integers(1, 4)), int(rng.integers(1, 7))
            T = MatrixTuple.of([random_matrix(F, N, N, rng) for _ in range(s)])
            mine = tuple_rank_exhaustive(T).value
            ref = naive_tuple_rank([ints(M) for M in T.matrices], P)
            assert mine == ref, (mine, ref)
            agree += 1
        info["agreed"] = f"{agree}/200"


def test_criterion_2_congruence_invariance(criterion):
    F = FieldConfig.tower(P)
    rng = np.random.default_rng(2)
    with criterion(2, "ranks invariant under g M g^T", 10) as info:
        for _ in range(200):
            s, N = int(rng.integers(1, 4)), int(rng.integers(1, 7))
            T = MatrixTuple.of([random_matrix(F, N, N, rng) for _ in range(s)])
            g = random_invertible(F, N, rng)
            gT = T.act(g)
            before = [rank_mod_p(ints(M), P) for M in T.matrices]
            after = [rank_mod_p(ints(M), P) for M in gT.matrices]
            assert before == after
            assert tuple_rank_exhaustive(gT).value == tuple_rank_exhaustive(T).value
        info["pairs"] = 200


def test_criterion_3_canonical_forms(criterion):
    F = FieldConfig.tower(P)
    rng = np.random.default_rng(3)
    with criterion(3, "canonical forms reproduce Id_r + 0 and symplectic + 0", 30) as info:
        for _ in range(200):
            N = int(rng.integers(1, 11))
            M = random_symmetric(F, N, rng, int(rng.integers(0, N + 1)))
            form = symmetric_canonical(M)
            assert form.normalized
            assert form.g @ M @ form.g.T == form.canonical()
            assert rank(form.g) == N
            assert form.rank == rank_mod_p(ints(M), P)
        for _ in range(200):
            N = int(rng.integers(1, 11))
            M = random_skew(F, N, rng, 2 * int(rng.integers(0, N // 2 + 1)))
            form = skew_canonical(M)
            assert form.g @ M @ form.g.T == form.canonical()
            assert form.rank % 2 == 0 and form.rank == rank_mod_p(ints(M), P)
        info["symmetric"] = 200
        info["skew"] = 200


def test_criterion_4_block_pattern(criterion):
    F = FieldConfig.tower(P)
    rng = np.random.default_rng(4)
    with criterion(4, "block normal form pattern", 60) as info:
        for s, l in ((1, 1), (2, 1), (2, 2), (3, 1)):
            for _ in range(100):
                T, V = planted_free_tuple(F, s, l, rng)
                g = block_normal_form(T, V)
                assert rank(g) == T.N
                out = T.act(g).matrices
                signs = [SymKind(k).sign for k in T.kinds]
                assert block_shape_ok([coeffs(M) for M in out], signs, l, P)
            info[f"s{s}l{l}"] = 100


def test_criterion_5_end_to_end(criterion):
    F = FieldConfig.tower(P)
    rng = np.random.default_rng(5)
    combos = [(p, q, n, l) for p, q, n in ((1, 0, 0), (1, 1, 0), (1, 1, 1)) for l in (1, 2)]
    with criterion(5, "witness_full verified", 120) as info:
        for i in range(50):
            p, q, n, l = combos[i % len(combos)]
            r = required_rank(p + q, l, n)
            x = config_point(F, p, q, n, 2 * r, rng, min_rank=2 * r)
            assert n == 0 or rank(x.col) == n
            t = random_target(F, p, q, n, l, rng)
            W = witness_full(x, t, seed=i)
            report = verify_witness(x, t, W)
            assert report.passed, report.failures
        info["instances"] = 50


def test_criterion_6_symmetric_only(criterion):
    F = FieldConfig.tower(P)
    rng = np.random.default_rng(6)
    combos = [(1, 1), (1, 2), (2, 1), (2, 2)]
    with criterion(6, "witness_sym verified", 60) as info:
        for i in range(50):
            p, l = combos[i % len(combos)]
            threshold = p * 2**p * l
            x = config_point(F, p, 0, 0, threshold + 1, rng, min_rank=threshold)
            t = random_target(F, p, 0, 0, l, rng)
            W = witness_sym(x.sym, t.sym, seed=i)
            assert verify_witness(x, t, W).passed
        info["instances"] = 50


def test_criterion_7_density_demo(criterion):
    F = FieldConfig.tower(P)
    rng = np.random.default_rng(7)
    with criterion(7, "(Id, generic diagonal) N=17", 30) as info:
        x = density_demo(F, 17)
        mus = [x.sym[1].entry(i, i) for i in range(17)]
        assert len({m.value for m in mus}) == 17
        for i in range(20):
            t = random_target(F, 2, 0, 0, 1, rng)
            W = witness_full(x, t, seed=i)
            assert verify_witness(x, t, W).passed
        info["targets"] = 20
        info["gate"] = W.gate["sym"]["value"]


def test_criterion_8_phi_rank_bound(criterion):
    F = FieldConfig.tower(P)
    rng = np.random.default_rng(8)
    with criterion(8, "phi outputs have tuple rank <= r", 10) as info:
        worst = 0
        for i in range(50):
            mats = phi_sample(F, 2 + i % 2, 2, 5, rng)
            value = naive_tuple_rank([ints(M) for M in mats], P)
            assert value == tuple_rank_exhaustive(MatrixTuple.of(mats)).value
            assert value <= 2
            worst = max(worst, value)
        info["max_rank"] = worst


def test_criterion_9_bound_experiment(criterion):
    """Non-gating: the CSV is the product, success rates are only reported."""
    F = FieldConfig.tower(P)
    RESULTS.mkdir(exist_ok=True)
    path = RESULTS / "bound_experiment.csv"
    with criterion(9, "bound-reduction sweep (non-gating)", 600) as info:
        rows = []
        for p, q, n, l in ((1, 0, 0, 1), (1, 0, 0, 2), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 1)):
            for R, seed, ok in experiment_rows(F, p, q, n, l, 20, 9, 16):
                rows.append((p, q, n, l, R, seed, int(ok)))
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["p", "q", "n", "l", "rank", "seed", "success"])
            w.writerows(rows)
        info["rows"] = len(rows)
        info["success"] = f"{sum(r[-1] for r in rows)}/{len(rows)}"
        info["csv"] = path.name
