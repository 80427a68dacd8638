"""Rank of a tuple of matrices: the least rank of a nonzero linear combination."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceededError, FieldMismatchError, RankPreconditionError, ShapeError
from .field import FieldConfig, FieldElem
from .matrix import Matrix, SymKind, _common, congruence_apply, rank

DEFAULT_BUDGET = 1 << 16
HEURISTIC_PRIMES = (5, 7, 11, 13)


@dataclass(frozen=True)
class MatrixTuple:
    """s matrices of one shape over one field, each optionally tagged with a SymKind."""

    config: FieldConfig
    matrices: tuple[Matrix, ...] = ()
    kinds: tuple[SymKind | None, ...] = ()
    shape: tuple[int, int] = (0, 0)

    @classmethod
    def of(cls, matrices, kinds=None, config: FieldConfig | None = None, check: bool = True) -> "MatrixTuple":
        matrices = list(matrices)
        if config is None:
            if not matrices:
                raise ValueError("an empty tuple needs an explicit config")
            config = matrices[0].config
        if any(m.config is not config for m in matrices):
            raise FieldMismatchError("tuple components belong to different fields")
        if matrices:
            matrices = _common(matrices)
        kinds = [None] * len(matrices) if kinds is None else [SymKind(k) if k is not None else None for k in kinds]
        if len(kinds) != len(matrices):
            raise ShapeError("one kind per component is required")
        shape = matrices[0].shape if matrices else (0, 0)
        if any(m.shape != shape for m in matrices):
            raise ShapeError("tuple components have different shapes")
        if check:
            for i, (m, k) in enumerate(zip(matrices, kinds)):
                if not m.satisfies(k):
                    raise ValueError(f"component {i} is not {k.value}")
        return cls(config, tuple(matrices), tuple(kinds), shape)

    @property
    def s(self) -> int:
        return len(self.matrices)

    @property
    def N(self) -> int:
        return self.shape[0]

    @property
    def level(self) -> int:
        return self.matrices[0].level if self.matrices else 0

    def __len__(self) -> int:
        return self.s

    def __getitem__(self, i: int) -> Matrix:
        return self.matrices[i]

    def act(self, g: Matrix) -> "MatrixTuple":
        """Congruence by g on every component."""
        return MatrixTuple.of([congruence_apply(g, m) for m in self.matrices], self.kinds, self.config, check=False)

    def restrict_columns(self, k: int) -> "MatrixTuple":
        return MatrixTuple.of([m[:, :k] for m in self.matrices], None, self.config, check=False)

    def combination(self, coeffs) -> Matrix:
        """sum_i coeffs[i] * M_i."""
        coeffs = [self.config.element(c) for c in coeffs]
        if len(coeffs) != self.s:
            raise ShapeError(f"expected {self.s} coefficients, got {len(coeffs)}")
        level = max([self.level] + [c.level for c in coeffs])
        mats = [m.lift(level) for m in self.matrices]
        ar = self.config.arith(level)
        stack = np.stack([m.data for m in mats])
        cvec = np.stack([ar.scalar(c) for c in coeffs])[:, None, None, :]
        total = ar.mul(stack, cvec).sum(axis=0)
        if self.config.is_tower:
            total %= self.config.p
        return Matrix(self.config, total, level)


@dataclass(frozen=True)
class RankCertificate:
    value: int | float
    witness_coeffs: tuple[FieldElem, ...] | None
    search_domain: str
    certified: bool = True
    level: int = 0
    details: dict = field(default_factory=dict)

    @property
    def is_infinite(self) -> bool:
        return self.value == math.inf


def rank_at(T: MatrixTuple, coeffs) -> int:
    coeffs = [T.config.element(c) for c in coeffs]
    if len(coeffs) != T.s:
        raise ShapeError(f"expected {T.s} coefficients, got {len(coeffs)}")
    if all(c.is_zero() for c in coeffs):
        raise ValueError("coefficient vector must be nonzero")
    return rank(T.combination(coeffs))


def projective_points(config: FieldConfig, s: int, level: int = 0):
    """Representatives of P^{s-1}(F_q) with first nonzero entry 1.

    Ordered by the position of the leading 1, then lexicographically in the
    canonical element order.
    """
    zero, one = config.zero(level), config.one(level)
    elems = list(config.elements(level))
    for lead in range(s):
        for tail in itertools.product(elems, repeat=s - lead - 1):
            yield (zero,) * lead + (one,) + tail


def tuple_rank_exhaustive(T: MatrixTuple, level: int = 0, budget: int = DEFAULT_BUDGET) -> RankCertificate:
    """Exact minimum of rank_at over P^{s-1} of the level-``level`` field."""
    if not T.config.is_tower:
        raise ValueError("exhaustive tuple rank needs a finite tower field")
    domain = f"P^{T.s - 1}(F_{T.config.p}^{2**level})" if T.s else "empty"
    if T.s == 0:
        return RankCertificate(math.inf, None, domain, True, level)
    q = T.config.size(level)
    if q**T.s > budget:
        raise BudgetExceededError(f"enumeration needs {q}^{T.s} points, budget is {budget}")
    best, best_coeffs = None, None
    for coeffs in projective_points(T.config, T.s, level):
        rk = rank(T.combination(coeffs))
        if best is None or rk < best:
            best, best_coeffs = rk, coeffs
            if rk == 0:
                break
    return RankCertificate(best, tuple(best_coeffs), domain, True, level)


def _reduce_mod(T: MatrixTuple, p: int) -> MatrixTuple | None:
    cfg = FieldConfig.tower(p)
    mats = []
    for m in T.matrices:
        try:
            rows = [[cfg.element(x.value) for x in row] for row in m.tolist()]
        except ZeroDivisionError:
            return None
        mats.append(Matrix.from_rows(cfg, rows) if rows else Matrix.zeros(cfg, *m.shape))
    return MatrixTuple.of(mats, None, cfg, check=False)


def tuple_rank_heuristic(T: MatrixTuple, budget: int = DEFAULT_BUDGET, primes=HEURISTIC_PRIMES) -> RankCertificate:
    """Uncertified tuple rank of a rational tuple.

    Reduces mod several small primes and enumerates each; the largest value
    is reported since reduction can only lower ranks.
    """
    if T.s == 0:
        return RankCertificate(math.inf, None, "empty", True)
    values = {}
    for p in primes:
        if p**T.s > budget:
            continue
        R = _reduce_mod(T, p)
        if R is not None:
            values[p] = tuple_rank_exhaustive(R, 0, budget).value
    if not values:
        raise BudgetExceededError("no prime fits the enumeration budget")
    best = max(values.values())
    domain = "reductions mod " + ", ".join(str(p) for p in values)
    return RankCertificate(best, None, domain, False, 0, {"per_prime": values})


def tuple_rank(T: MatrixTuple, level: int = 0, budget: int = DEFAULT_BUDGET) -> RankCertificate:
    if T.config.is_tower:
        return tuple_rank_exhaustive(T, level, budget)
    return tuple_rank_heuristic(T, budget)


def minimal_truncation(T: MatrixTuple, r: int, level: int = 0, budget: int = DEFAULT_BUDGET) -> int:
    """Least k such that the first k columns of T still have tuple rank >= r."""
    if r <= 0:
        return 0
    if tuple_rank(T, level, budget).value < r:
        raise RankPreconditionError(f"tuple rank is below {r}")
    lo, hi = 0, T.shape[1]
    # tuple rank is monotone in k, so bisect
    while lo < hi:
        mid = (lo + hi) // 2
        if tuple_rank(T.restrict_columns(mid), level, budget).value >= r:
            hi = mid
        else:
            lo = mid + 1
    return lo
