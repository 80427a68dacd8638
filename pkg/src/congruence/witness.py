"""Group curves G(t) whose congruence action reproduces a prescribed corner at t = 0.

A configuration x carries p symmetric and q skew N x N matrices and an N x n
block of columns, acted on by M -> g M g^T and C -> g C.  Given enough rank,
``witness_full`` builds a Laurent matrix G(t) with det G = c t^k such that
the leading l x l corners of G x_i G^T and the leading l x n block of G C
tend to any requested targets.  ``verify_witness`` re-checks a curve from
scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    BudgetExceededError,
    DependentColumnsError,
    HypothesisViolation,
    RankPreconditionError,
    ShapeError,
)
from .field import FieldConfig, FieldElem
from .free_subspace import DEFAULT_RETRIES, find_free_subspace
from .matrix import (
    LaurentMatrix,
    Matrix,
    SymKind,
    basis_completion,
    det,
    inverse,
    kernel,
    rank,
    solve,
)
from .normal_form import block_normal_form, closure_scaling_curve
from .tuple_rank import DEFAULT_BUDGET, MatrixTuple, tuple_rank

SYM = SymKind.SYMMETRIC
SKEW = SymKind.SKEW


@dataclass(frozen=True)
class ConfigPoint:
    config: FieldConfig
    N: int
    sym: tuple[Matrix, ...] = ()
    alt: tuple[Matrix, ...] = ()
    col: Matrix | None = None
    fin: tuple = ()

    def __post_init__(self):
        col = self.col if self.col is not None else Matrix.zeros(self.config, self.N, 0)
        object.__setattr__(self, "sym", tuple(self.sym))
        object.__setattr__(self, "alt", tuple(self.alt))
        object.__setattr__(self, "col", col)
        for M in self.sym + self.alt:
            if M.shape != (self.N, self.N):
                raise ShapeError(f"component of shape {M.shape} in a size-{self.N} configuration")
        if any(not M.is_symmetric() for M in self.sym):
            raise ValueError("x_sym components must be symmetric")
        if any(not M.is_skew() for M in self.alt):
            raise ValueError("x_alt components must be skew-symmetric")
        if col.rows != self.N:
            raise ShapeError("x_col must have N rows")

    @property
    def p(self) -> int:
        return len(self.sym)

    @property
    def q(self) -> int:
        return len(self.alt)

    @property
    def n(self) -> int:
        return self.col.cols

    @property
    def s(self) -> int:
        return self.p + self.q

    def act(self, g: Matrix) -> "ConfigPoint":
        return ConfigPoint(
            self.config,
            self.N,
            tuple(g @ M @ g.T for M in self.sym),
            tuple(g @ M @ g.T for M in self.alt),
            g @ self.col,
            self.fin,
        )


@dataclass(frozen=True)
class TargetCorner:
    config: FieldConfig
    l: int
    sym: tuple[Matrix, ...] = ()
    alt: tuple[Matrix, ...] = ()
    col: Matrix | None = None

    def __post_init__(self):
        object.__setattr__(self, "sym", tuple(self.sym))
        object.__setattr__(self, "alt", tuple(self.alt))
        if self.col is None:
            object.__setattr__(self, "col", Matrix.zeros(self.config, self.l, 0))
        for M in self.sym + self.alt:
            if M.shape != (self.l, self.l):
                raise ShapeError("target corners must be l x l")
        if any(not M.is_symmetric() for M in self.sym) or any(not M.is_skew() for M in self.alt):
            raise ValueError("target corners must have the component's symmetry")
        if self.col.rows != self.l:
            raise ShapeError("column target must have l rows")


@dataclass(frozen=True)
class CheckResult:
    name: str
    component: int
    row: int
    col: int
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> dict:
        return {"passed": self.passed, "checks": len(self.checks), "failures": len(self.failures)}


@dataclass
class WitnessCurve:
    G: LaurentMatrix
    det_certificate: tuple[FieldElem, int]
    report: VerificationReport | None = None
    gate: dict = field(default_factory=dict)
    stages: dict = field(default_factory=dict)


def required_rank(s: int, l: int, n: int) -> int:
    """Rank r such that component tuple ranks >= 2r suffice: s 2^s l + 2(s+1)n."""
    return s * 2**s * l + 2 * (s + 1) * n


# -- rank gate ------------------------------------------------------------------------


def _tuple_rank_status(mats, kind, level, budget) -> dict:
    if not mats:
        return {"value": "infinity", "status": "certified"}
    T = MatrixTuple.of(mats, [kind] * len(mats), check=False)
    try:
        cert = tuple_rank(T, level, budget)
    except BudgetExceededError:
        return {"value": None, "status": "asserted"}
    return {"value": cert.value, "status": "certified" if cert.certified else "heuristic"}


def rank_gate(x: ConfigPoint, threshold: int, level: int = 0, budget: int = DEFAULT_BUDGET) -> dict:
    """Check tuple ranks of x_sym and x_alt against ``threshold`` and rank(x_col) = n.

    Enumeration certifies a rank when the budget allows; otherwise the rank is
    taken as asserted and flagged.  Only certified shortfalls are fatal.
    """
    info = {"threshold": threshold}
    for name, mats, kind in (("sym", x.sym, SYM), ("alt", x.alt, SKEW)):
        st = _tuple_rank_status(list(mats), kind, level, budget)
        info[name] = st
        if st["status"] == "certified" and st["value"] != "infinity" and st["value"] < threshold:
            raise RankPreconditionError(f"tuple rank of x_{name} is {st['value']}, need {threshold}")
    rc = rank(x.col) if x.n else 0
    info["col"] = {"value": rc, "status": "certified"}
    if rc != x.n:
        raise RankPreconditionError(f"x_col has rank {rc}, need {x.n}")
    return info


# -- construction -------------------------------------------------------------------


def _half(cfg: FieldConfig) -> FieldElem:
    return cfg.element(Fraction(1, 2))


def _construct(x: ConfigPoint, target: TargetCorner, rng, retries: int) -> tuple[LaurentMatrix, tuple, dict]:
    cfg = x.config
    N, n, l = x.N, x.n, target.l
    mats = list(x.sym) + list(x.alt)
    kinds = [SYM] * x.p + [SKEW] * x.q
    goals = list(target.sym) + list(target.alt)
    s = len(mats)
    col = x.col
    stages: dict = {}

    # complement of span(x_col, M_i x_col) on which the tuple is restricted
    if n:
        B = kernel(Matrix.hstack([col] + [M @ col for M in mats]).T)
    else:
        B = Matrix.identity(cfg, N)
    restricted = [B.T @ M @ B for M in mats]
    loss = 2 * (s + 1) * n
    ranks = []
    for i, (M, R) in enumerate(zip(mats, restricted)):
        before, after = rank(M), rank(R)
        ranks.append({"component": i, "rank": before, "restricted": after})
        if after < before - loss:
            raise HypothesisViolation(f"restriction lost more than {loss} rank in component {i}")
    stages["complement_dim"] = B.cols
    stages["component_ranks"] = ranks

    if l == 0:
        g = Matrix.identity(cfg, N)
    else:
        if s:
            TB = MatrixTuple.of(restricted, kinds, cfg, check=False)
            V = find_free_subspace(TB, 2**s * l, rng, retries)
            stages["free_subspace"] = {
                "dim": V.dim,
                "image_rank": V.image_rank_check,
                "attempts": V.attempts,
                "fallback": V.fallback,
            }
            gb = block_normal_form(TB, V)
            F = B @ gb[:l, :].T
        else:
            F = B[:, :l]

        # new basis D = [X | M_1 F | ... | M_s F | rest | x_col] with F^T X = Id and
        # everything after X in ker F^T; g = D^-1 sends F to the first l coordinates
        images = [M @ F for M in mats]
        known = images + ([col] if n else [])
        X = solve(F.T, Matrix.identity(cfg, l))
        Kf = kernel(F.T)
        if known:
            known = Matrix.hstack(known)
            try:
                full = basis_completion(solve(Kf, known))
            except (DependentColumnsError, ValueError) as exc:
                raise HypothesisViolation(f"cannot complete the adapted basis: {exc}") from exc
            rest = Kf @ full[:, known.cols:]
        else:
            rest = Kf
        D = Matrix.hstack([X] + images + [rest] + ([col] if n else []))
        g = inverse(D)
    stages["levels"] = {"g": g.level}

    # shear with first block row (Id, A_1, ..., A_s, col')
    S = Matrix.identity(cfg, N)
    col_t = target.col
    for i, (M, goal) in enumerate(zip(mats, goals)):
        if n:
            tail = (g @ M @ g.T)[N - n:, N - n:]
            goal = goal - col_t @ tail @ col_t.T
        S = S.with_block(0, l + i * l, goal.scale(_half(cfg)))
    if n and l:
        S = S.with_block(0, N - n, col_t)

    G = S @ closure_scaling_curve(l, N, cfg, tail=n) @ g
    certificate = (det(g), N - 2 * l - n)
    return G, certificate, stages


def _check_target(x: ConfigPoint, target: TargetCorner):
    if target.config is not x.config:
        raise ShapeError("configuration and target use different fields")
    if len(target.sym) != x.p or len(target.alt) != x.q:
        raise ShapeError("target needs one corner per component")
    if target.col.cols != x.n:
        raise ShapeError("column target must have n columns")
    if target.l > x.N:
        raise ShapeError("corner larger than the configuration")


def witness_full(
    x: ConfigPoint,
    target: TargetCorner,
    seed=None,
    retries: int = DEFAULT_RETRIES,
    budget: int = DEFAULT_BUDGET,
    gate: bool = True,
    verify: bool = True,
) -> WitnessCurve:
    """Curve G(t) reproducing ``target`` in the limit; the rank gate uses 2r.

    With ``gate=False`` the rank gate is skipped, which is how constructions
    below the proven bound are attempted.
    """
    _check_target(x, target)
    r = required_rank(x.s, target.l, x.n)
    info = rank_gate(x, 2 * r, budget=budget) if gate else {"threshold": 2 * r, "skipped": True}
    info["r"] = r
    return _finish(x, target, seed, retries, info, verify)


def witness_sym(
    sym,
    targets,
    seed=None,
    retries: int = DEFAULT_RETRIES,
    budget: int = DEFAULT_BUDGET,
    gate: bool = True,
    verify: bool = True,
    l: int | None = None,
) -> WitnessCurve:
    """Symmetric-only witness; the gate is tuple rank >= p 2^p l."""
    sym = list(sym.matrices if isinstance(sym, MatrixTuple) else sym)
    if not sym:
        raise ShapeError("need at least one symmetric matrix")
    cfg = sym[0].config
    targets = list(targets)
    l = targets[0].rows if targets else (l or 0)
    x = ConfigPoint(cfg, sym[0].rows, tuple(sym))
    target = TargetCorner(cfg, l, tuple(targets))
    _check_target(x, target)
    threshold = x.p * 2**x.p * l
    info = rank_gate(x, threshold, budget=budget) if gate else {"threshold": threshold, "skipped": True}
    return _finish(x, target, seed, retries, info, verify)


def _finish(x, target, seed, retries, info, verify) -> WitnessCurve:
    rng = np.random.default_rng(seed)
    G, cert, stages = _construct(x, target, rng, retries)
    curve = WitnessCurve(G, cert, None, info, stages)
    if verify:
        curve.report = verify_witness(x, target, curve)
    return curve


# -- verification -----------------------------------------------------------------------


def _corner_checks(name, idx, P: LaurentMatrix, goal: Matrix, rows: int, cols: int) -> list[CheckResult]:
    corner = P[:rows, :cols]
    mins = corner.entry_min_degrees()
    const = corner.terms.get(0)
    out = []
    for a in range(rows):
        for b in range(cols):
            if mins[a, b] < 0:
                out.append(CheckResult(name, idx, a, b, False, f"negative degree {int(mins[a, b])}"))
                continue
            v = const.entry(a, b) if const is not None else P.config.zero()
            want = goal.entry(a, b)
            ok = v == want
            out.append(CheckResult(name, idx, a, b, ok, "" if ok else f"limit {v} != target {want}"))
    return out


def _det_points(cfg: FieldConfig, count: int, level: int):
    if not cfg.is_tower:
        return [cfg.element(k) for k in range(1, count + 1)]
    level = max(level, cfg.level_for_size(count + 1))
    pts = []
    for e in cfg.elements(level):
        if not e.is_zero():
            pts.append(e)
            if len(pts) == count:
                break
    return pts


def check_det_certificate(G: LaurentMatrix, certificate) -> CheckResult:
    """det G(t) = c t^k, decided by evaluation at enough distinct nonzero points.

    det G(t) - c t^k is a Laurent polynomial whose degrees lie between the sums
    of the row minimum and row maximum degrees (and k); after clearing the
    lowest power it vanishes identically iff it vanishes at that many points.
    """
    c, k = certificate
    if G.rows != G.cols:
        return CheckResult("det", -1, -1, -1, False, "curve is not square")
    if c.is_zero():
        return CheckResult("det", -1, -1, -1, False, "certificate constant is zero")
    bounds = G.row_degree_bounds()
    if any(b is None for b in bounds):
        return CheckResult("det", -1, -1, -1, False, "curve has a zero row")
    lo = min(sum(b[0] for b in bounds), k)
    hi = max(sum(b[1] for b in bounds), k)
    for t in _det_points(G.config, hi - lo + 1, G.level):
        if det(G.evaluate(t)) != c * t**k:
            return CheckResult("det", -1, -1, -1, False, f"det G({t}) differs from the certificate")
    return CheckResult("det", -1, -1, -1, True)


def verify_witness(x: ConfigPoint, target: TargetCorner, W: WitnessCurve) -> VerificationReport:
    """Recompute the transformed configuration over the Laurent ring and check every corner entry."""
    _check_target(x, target)
    G = W.G
    if G.shape != (x.N, x.N):
        raise ShapeError(f"curve has shape {G.shape}, configuration has N = {x.N}")
    l = target.l
    report = VerificationReport()
    report.checks.append(check_det_certificate(G, W.det_certificate))
    for name, comps, goals in (("sym", x.sym, target.sym), ("alt", x.alt, target.alt)):
        for i, (M, goal) in enumerate(zip(comps, goals)):
            P = G @ M @ G.T
            report.checks.extend(_corner_checks(name, i, P, goal, l, l))
    if x.n:
        report.checks.extend(_corner_checks("col", 0, G @ x.col, target.col, l, x.n))
    return report


# -- bounded-rank parametrization --------------------------------------------------------


def phi_parametrize(p: int, r: int, sym, col: Matrix, lam) -> list[Matrix]:
    """phi_i = sum_{j < p-1} lam[i][j] sym_j + lam[i][p-1] col col^T.

    ``sym`` holds p-1 symmetric N x N matrices and ``col`` is N x r; some
    nonzero combination of the outputs kills every sym_j, so the tuple rank
    of the image is at most r.
    """
    sym = list(sym)
    if p < 1:
        raise ValueError("p must be at least 1")
    if len(sym) != p - 1:
        raise ShapeError(f"expected {p - 1} symmetric matrices, got {len(sym)}")
    if col.cols != r:
        raise ShapeError(f"column block must have {r} columns")
    if any(M.shape != (col.rows, col.rows) for M in sym):
        raise ShapeError("symmetric inputs must be N x N with N = rows of the column block")
    lam = [list(row) for row in lam]
    if len(lam) != p or any(len(row) != p for row in lam):
        raise ShapeError("lambda must be a p x p grid")
    gram = col @ col.T
    out = []
    for i in range(p):
        total = gram.scale(lam[i][p - 1])
        for j in range(p - 1):
            total = total + sym[j].scale(lam[i][j])
        out.append(total)
    return out
