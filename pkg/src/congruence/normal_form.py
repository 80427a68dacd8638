"""Congruence canonical forms and the simultaneous block normal form.

Single matrices: a symmetric matrix is congruent to Id_r + 0 once square
roots are available, a skew matrix to r/2 symplectic blocks + 0 over any
field.  Tuples: ``block_normal_form`` moves a free subspace to the leading
coordinates, zeroes nested leading corners one component at a time and then
plants staggered identity blocks in the first l columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import HypothesisViolation, ShapeError
from .field import FieldConfig, FieldElem, sqrt
from .free_subspace import FreeSubspace, image_matrix
from .matrix import LaurentMatrix, Matrix, SymKind, basis_completion, inverse, rank
from .tuple_rank import MatrixTuple


@dataclass(frozen=True)
class SymmetricForm:
    g: Matrix
    rank: int
    diagonal: tuple[FieldElem, ...]
    square_classes: tuple
    normalized: bool

    def __iter__(self):
        return iter((self.g, self.rank))

    def canonical(self) -> Matrix:
        """The matrix g M g^T is expected to equal."""
        if self.normalized:
            return identity_form(self.g.config, self.g.rows, self.rank)
        n = self.g.rows
        vals = list(self.diagonal) + [0] * (n - self.rank)
        return Matrix.diagonal(self.g.config, vals)


@dataclass(frozen=True)
class SkewForm:
    g: Matrix
    rank: int

    def __iter__(self):
        return iter((self.g, self.rank))

    def canonical(self) -> Matrix:
        return symplectic_form(self.g.config, self.g.rows, self.rank)


def identity_form(config: FieldConfig, n: int, r: int) -> Matrix:
    return Matrix.diagonal(config, [1] * r + [0] * (n - r))


def symplectic_form(config: FieldConfig, n: int, r: int) -> Matrix:
    rows = [[0] * n for _ in range(n)]
    for k in range(0, r, 2):
        rows[k][k + 1] = 1
        rows[k + 1][k] = -1
    return Matrix.from_rows(config, rows) if n else Matrix.zeros(config, 0, 0)


def _swap(A, G, i, j):
    if i != j:
        A[[i, j]] = A[[j, i]]
        A[:, [i, j]] = A[:, [j, i]]
        G[[i, j]] = G[[j, i]]


def _squarefree(n: int) -> int:
    sign, n = (-1 if n < 0 else 1), abs(n)
    out, q = 1, 2
    while q * q <= n:
        while n % (q * q) == 0:
            n //= q * q
        if n % q == 0:
            out *= q
            n //= q
        q += 1
    return sign * out * n


def _square_class(d: FieldElem):
    if d.config.is_tower:
        return "square" if d.is_square() else "nonsquare"
    v = Fraction(d.value)
    return _squarefree(v.numerator * v.denominator)


def symmetric_canonical(M: Matrix, normalize: bool | None = None) -> SymmetricForm:
    """Congruence diagonalization g M g^T = diag(d_1..d_r, 0..), then scaling to Id_r + 0.

    Scaling needs square roots, so over the rationals it is skipped unless
    ``normalize`` is set, in which case a non-square pivot raises
    NotASquareError.  In the tower a pivot that is a non-square extends the
    tower.
    """
    if not M.is_symmetric():
        raise ValueError("symmetric_canonical needs a symmetric matrix")
    cfg = M.config
    normalize = cfg.is_tower if normalize is None else normalize
    ar = M.arith
    n = M.rows
    A = M.data.copy()
    G = ar.eye(n)
    r = 0
    for k in range(n):
        diag_nz = np.flatnonzero(~ar.is_zero(A[np.arange(k, n), np.arange(k, n)]))
        if len(diag_nz):
            piv = k + int(diag_nz[0])
        else:
            sub = ~ar.is_zero(A[k:, k:])
            if not sub.any():
                break
            i, j = (int(x) + k for x in np.argwhere(sub)[0])
            # row/col j into row/col i makes the (i, i) entry 2 A[i, j], nonzero as p != 2
            A[i] = ar.add(A[i], A[j])
            A[:, i] = ar.add(A[:, i], A[:, j])
            G[i] = ar.add(G[i], G[j])
            piv = i
        _swap(A, G, k, piv)
        if k + 1 < n:
            f = ar.mul(A[k + 1:, k], ar.inv_scalar(A[k, k]))
            A[k + 1:] = ar.sub(A[k + 1:], ar.outer(f, A[k]))
            A[:, k + 1:] = ar.sub(A[:, k + 1:], ar.outer(A[:, k], f))
            G[k + 1:] = ar.sub(G[k + 1:], ar.outer(f, G[k]))
        r = k + 1
    diagonal = tuple(ar.to_elem(A[i, i]) for i in range(r))
    classes = tuple(_square_class(d) for d in diagonal)
    g = Matrix(cfg, G, M.level)
    if normalize:
        scales = [sqrt(d).inverse() for d in diagonal] + [cfg.one()] * (n - r)
        g = Matrix.diagonal(cfg, scales) @ g
    return SymmetricForm(g, r, diagonal, classes, normalize)


def skew_canonical(M: Matrix) -> SkewForm:
    """g M g^T = r/2 copies of [[0, 1], [-1, 0]] followed by zeros."""
    if not M.is_skew():
        raise ValueError("skew_canonical needs a skew-symmetric matrix")
    ar = M.arith
    n = M.rows
    A = M.data.copy()
    G = ar.eye(n)
    pos = 0
    while pos + 1 < n:
        sub = ~ar.is_zero(A[pos:, pos:])
        if not sub.any():
            break
        i, j = (int(x) + pos for x in np.argwhere(sub)[0])
        _swap(A, G, pos, i)
        if j == pos:
            j = i
        _swap(A, G, pos + 1, j)
        inv = ar.inv_scalar(A[pos, pos + 1])
        A[pos] = ar.mul(A[pos], inv)
        A[:, pos] = ar.mul(A[:, pos], inv)
        G[pos] = ar.mul(G[pos], inv)
        rest = slice(pos + 2, n)
        if pos + 2 < n:
            w = A[rest, pos + 1].copy()
            u = A[rest, pos].copy()
            A[rest] = ar.add(ar.sub(A[rest], ar.outer(w, A[pos])), ar.outer(u, A[pos + 1]))
            A[:, rest] = ar.add(ar.sub(A[:, rest], ar.outer(A[:, pos], w)), ar.outer(A[:, pos + 1], u))
            G[rest] = ar.add(ar.sub(G[rest], ar.outer(w, G[pos])), ar.outer(u, G[pos + 1]))
        pos += 2
    return SkewForm(Matrix(M.config, G, M.level), pos)


def canonical_form(M: Matrix, kind: SymKind, normalize: bool = True):
    if SymKind(kind) is SymKind.SYMMETRIC:
        return symmetric_canonical(M, normalize)
    return skew_canonical(M)


def rank_r_zero_corner_witness(
    kind: SymKind, size: int, corner: int, r: int, config: FieldConfig | None = None
) -> Matrix:
    """Matrix of the given kind and rank r whose leading corner x corner block is zero.

    Hyperbolic pairs (i, corner + i) come first; the rest of the rank is
    unit diagonal entries (symmetric) or extra pairs (skew) outside the corner.
    """
    kind = SymKind(kind)
    config = FieldConfig.rational() if config is None else config
    if not 0 <= r <= size or 2 * corner > size:
        raise ValueError(f"no {kind.value} {size}x{size} matrix of rank {r} with a zero {corner}x{corner} corner")
    if kind is SymKind.SKEW and r % 2:
        raise ValueError("skew-symmetric matrices have even rank")
    sign = kind.sign
    rows = [[0] * size for _ in range(size)]
    h = min(r // 2, corner)
    for i in range(h):
        rows[i][corner + i] = 1
        rows[corner + i][i] = sign
    left = r - 2 * h
    start = corner + h if h < corner else 2 * corner
    if kind is SymKind.SYMMETRIC:
        for k in range(left):
            rows[start + k][start + k] = 1
    else:
        for k in range(0, left, 2):
            rows[start + k][start + k + 1] = 1
            rows[start + k + 1][start + k] = -1
    return Matrix.from_rows(config, rows) if size else Matrix.zeros(config, 0, 0)


# -- block pattern ----------------------------------------------------------------


@dataclass(frozen=True)
class BlockPattern:
    """Forced entries of the block normal form for s components and block size l.

    Component i has a zero l x l leading corner, Id_l as block (i+1) of the
    first l columns and zeros everywhere else in those columns, mirrored in
    the first l rows with the component's sign.  The
    strengthened form also forces the blocks (j, k) with 1 <= j, k <= s to vanish.
    """

    s: int
    l: int
    N: int
    kinds: tuple[SymKind, ...]
    strengthened: bool = False

    def expected(self, i: int) -> dict[tuple[int, int], int]:
        """(row, col) -> forced value (0, 1 or -1) for component i."""
        l, s = self.l, self.s
        eps = SymKind(self.kinds[i]).sign
        out = {}
        for row in range(self.N):
            for c in range(l):
                v = int(row // l == i + 1 and row % l == c)
                out[row, c] = v
                out[c, row] = eps * v
        if self.strengthened:
            for bj in range(1, s + 1):
                for bk in range(1, s + 1):
                    for a in range(l):
                        for c in range(l):
                            out[bj * l + a, bk * l + c] = 0
        return out

    def violations(self, mats) -> list[tuple[int, int, int, int]]:
        """(component, row, col, expected) for every forced entry that does not hold."""
        bad = []
        for i, M in enumerate(mats):
            for (a, c), v in sorted(self.expected(i).items()):
                if M.entry(a, c) != v:
                    bad.append((i, a, c, v))
        return bad

    def matches(self, mats) -> bool:
        return not self.violations(mats)


def _apply(mats, h: Matrix):
    return [h @ M @ h.T for M in mats]


def block_normal_form(T: MatrixTuple, V: FreeSubspace | Matrix, check: bool = True) -> Matrix:
    """g such that g . T has the block normal form, given V with dim M V = s 2^s l."""
    basis = V.basis if isinstance(V, FreeSubspace) else V
    s = T.s
    if any(k is None for k in T.kinds):
        raise ValueError("every component needs a symmetry kind")
    if s == 0:
        return Matrix.identity(T.config, T.N, T.level)
    K = basis.cols
    if K % (2**s):
        raise ShapeError(f"subspace dimension {K} is not a multiple of 2^{s}")
    l = K // 2**s
    N = T.N
    rk = rank(image_matrix(T, basis))
    if rk != s * K:
        raise HypothesisViolation(f"image of the subspace has dimension {rk}, need {s * K}")

    g = basis_completion(basis).T
    mats = _apply(T.matrices, g)

    for j in range(s, 0, -1):
        Kj = 2**j * l
        kind = T.kinds[j - 1]
        corner = mats[j - 1][:Kj, :Kj]
        rc = rank(corner)
        W = rank_r_zero_corner_witness(kind, Kj, Kj // 2, rc, T.config)
        g1 = canonical_form(corner, kind).g
        g2 = canonical_form(W, kind).g
        h = Matrix.block_diag([inverse(g2) @ g1, Matrix.identity(T.config, N - Kj)])
        mats = _apply(mats, h)
        g = h @ g
        half = Kj // 2
        if not mats[j - 1][:half, :half].is_zero():
            raise HypothesisViolation(f"corner of component {j} was not cleared")

    C = Matrix.hstack([M[l:, :l] for M in mats])
    if rank(C) != s * l:
        raise HypothesisViolation(f"first block columns have rank {rank(C)}, need {s * l}")
    h3 = inverse(basis_completion(C))
    h = Matrix.block_diag([Matrix.identity(T.config, l), h3])
    mats = _apply(mats, h)
    g = h @ g

    if check:
        bad = BlockPattern(s, l, N, T.kinds).violations(mats)
        if bad:
            raise HypothesisViolation(f"block pattern fails at {bad[:4]}")
    return g


def closure_scaling_curve(l: int, N: int, config: FieldConfig | None = None, tail: int = 0) -> LaurentMatrix:
    """diag(t^-1 Id_l, t Id_{N-l-tail}, Id_tail).

    Under congruence the block [[0, B], [C, D]] becomes [[0, B], [C, t^2 D]],
    so the limit at t = 0 keeps B, C and kills D.  A trailing block of size
    ``tail`` is left fixed.
    """
    config = FieldConfig.rational() if config is None else config
    if not 0 <= l <= N - tail:
        raise ValueError("need l + tail <= N")
    exps = [-1] * l + [1] * (N - l - tail) + [0] * tail
    return LaurentMatrix.monomial_diagonal(config, exps)
