"""Dense exact matrices over a field or over the Laurent ring K[t, 1/t].

A ``Matrix`` wraps an array of shape (rows, cols, d) handled by the field
backend for its level (d = 1 for the rationals).  A ``LaurentMatrix`` is a
finite map degree -> Matrix.  The group acts on square matrices by
congruence, g . M = g M g^T.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import DependentColumnsError, FieldMismatchError, NegativeDegreeError, ShapeError
from .field import FieldConfig, FieldElem
from .laurent import LaurentPoly


class SymKind(str, enum.Enum):
    SYMMETRIC = "symmetric"
    SKEW = "skew"

    @property
    def sign(self) -> int:
        return 1 if self is SymKind.SYMMETRIC else -1


def _common(mats):
    """Same config for all, lifted to the highest level among them."""
    config = mats[0].config
    for m in mats:
        if m.config is not config:
            raise FieldMismatchError("matrices belong to different fields")
    level = max(m.level for m in mats)
    return [m.lift(level) for m in mats]


class Matrix:
    __slots__ = ("config", "level", "data")

    def __init__(self, config: FieldConfig, data: np.ndarray, level: int = 0):
        self.config = config
        self.level = level if config.is_tower else 0
        self.data = data

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_rows(cls, config: FieldConfig, rows, level: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeError("ragged rows")
        elems = [[config.element(x) for x in r] for r in rows]
        top = max((e.level for r in elems for e in r), default=0)
        level = top if level is None else max(level, top)
        ar = config.arith(level)
        data = ar.zeros((len(rows), ncols))
        for i, r in enumerate(elems):
            for j, e in enumerate(r):
                data[i, j] = ar.scalar(e)
        return cls(config, data, level)

    @classmethod
    def zeros(cls, config: FieldConfig, rows: int, cols: int, level: int = 0) -> "Matrix":
        return cls(config, config.arith(level).zeros((rows, cols)), level)

    @classmethod
    def identity(cls, config: FieldConfig, n: int, level: int = 0) -> "Matrix":
        return cls(config, config.arith(level).eye(n), level)

    @classmethod
    def diagonal(cls, config: FieldConfig, values, level: int | None = None) -> "Matrix":
        values = list(values)
        n = len(values)
        return cls.from_rows(config, [[values[i] if i == j else 0 for j in range(n)] for i in range(n)], level)

    @classmethod
    def column(cls, config: FieldConfig, values, level: int | None = None) -> "Matrix":
        return cls.from_rows(config, [[v] for v in values], level)

    @staticmethod
    def hstack(mats) -> "Matrix":
        mats = _common(list(mats))
        return Matrix(mats[0].config, np.concatenate([m.data for m in mats], axis=1), mats[0].level)

    @staticmethod
    def vstack(mats) -> "Matrix":
        mats = _common(list(mats))
        return Matrix(mats[0].config, np.concatenate([m.data for m in mats], axis=0), mats[0].level)

    @staticmethod
    def block_diag(mats) -> "Matrix":
        mats = _common(list(mats))
        ar = mats[0].arith
        n = sum(m.rows for m in mats)
        k = sum(m.cols for m in mats)
        data = ar.zeros((n, k))
        i = j = 0
        for m in mats:
            data[i:i + m.rows, j:j + m.cols] = m.data
            i += m.rows
            j += m.cols
        return Matrix(mats[0].config, data, mats[0].level)

    # -- basic structure --------------------------------------------------------

    @property
    def arith(self):
        return self.config.arith(self.level)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def lift(self, level: int) -> "Matrix":
        if not self.config.is_tower or level == self.level:
            return self
        if level < self.level:
            raise ValueError("cannot lower the level of a matrix")
        ar = self.config.arith(level)
        return Matrix(self.config, ar.lift_array(self.data, 2**self.level), level)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.config, np.ascontiguousarray(self.data.transpose(1, 0, 2)), self.level)

    def entry(self, i: int, j: int) -> FieldElem:
        return self.arith.to_elem(self.data[i, j])

    def __getitem__(self, key):
        if isinstance(key, tuple) and len(key) == 2 and all(isinstance(k, (int, np.integer)) for k in key):
            return self.entry(*key)
        if not isinstance(key, tuple):
            key = (key, slice(None))
        key = tuple(slice(k, k + 1) if isinstance(k, (int, np.integer)) else k for k in key)
        return Matrix(self.config, self.data[key].copy(), self.level)

    def with_block(self, i: int, j: int, block: "Matrix") -> "Matrix":
        """Copy with ``block`` written at offset (i, j)."""
        a, b = _common([self, block])
        data = a.data.copy()
        data[i:i + b.rows, j:j + b.cols] = b.data
        return Matrix(a.config, data, a.level)

    def tolist(self) -> list[list[FieldElem]]:
        ar = self.arith
        return [[ar.to_elem(self.data[i, j]) for j in range(self.cols)] for i in range(self.rows)]

    def __repr__(self):
        body = "; ".join(" ".join(str(e) for e in row) for row in self.tolist())
        return f"Matrix({self.rows}x{self.cols}: [{body}])"

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, LaurentMatrix):
            return other + self
        a, b = _common([self, other])
        if a.shape != b.shape:
            raise ShapeError(f"cannot add {a.shape} and {b.shape}")
        return Matrix(a.config, a.arith.add(a.data, b.data), a.level)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Matrix(self.config, self.arith.neg(self.data), self.level)

    def __matmul__(self, other):
        if isinstance(other, LaurentMatrix):
            return LaurentMatrix.from_matrix(self) @ other
        a, b = _common([self, other])
        if a.cols != b.rows:
            raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
        return Matrix(a.config, a.arith.matmul(a.data, b.data), a.level)

    def scale(self, c) -> "Matrix":
        c = self.config.element(c)
        level = max(self.level, c.level)
        m = self.lift(level)
        ar = m.arith
        return Matrix(self.config, ar.mul(m.data, ar.scalar(c)), level)

    def __mul__(self, c):
        if isinstance(c, (Matrix, LaurentMatrix)):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.config is not self.config or other.shape != self.shape:
            return False
        a, b = _common([self, other])
        return bool(np.all(a.data == b.data))

    __hash__ = None

    def is_zero(self) -> bool:
        return bool(self.arith.is_zero(self.data).all())

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def is_skew(self) -> bool:
        return self.is_square() and self == -self.T

    def satisfies(self, kind: SymKind | None) -> bool:
        if kind is None:
            return True
        return self.is_symmetric() if SymKind(kind) is SymKind.SYMMETRIC else self.is_skew()


# -- elimination ----------------------------------------------------------------


def _echelon(M: Matrix, reduced: bool = True):
    """Row echelon form (reduced: Gauss-Jordan) with unit pivots; returns (data, pivots)."""
    ar = M.arith
    A = M.data.copy()
    m, n = M.shape
    row = 0
    pivots = []
    for col in range(n):
        if row == m:
            break
        nz = np.flatnonzero(~ar.is_zero(A[row:, col]))
        if not len(nz):
            continue
        piv = row + int(nz[0])
        if piv != row:
            A[[row, piv]] = A[[piv, row]]
        A[row, col:] = ar.mul(A[row, col:], ar.inv_scalar(A[row, col]))
        lo = 0 if reduced else row + 1
        cand = np.arange(lo, m)
        cand = cand[cand != row]
        if len(cand):
            cand = cand[~ar.is_zero(A[cand, col])]
        if len(cand):
            upd = ar.outer(A[cand, col], A[row, col:])
            A[cand, col:] = ar.sub(A[cand, col:], upd)
        pivots.append(col)
        row += 1
    return A, pivots


def _bareiss_rank(M: Matrix) -> int:
    """Fraction-free rank of a rational matrix: rows are cleared to integers first."""
    rows = []
    for r in M.data[..., 0].tolist():
        den = lcm(*(Fraction(x).denominator for x in r)) if r else 1
        rows.append([int(Fraction(x) * den) for x in r])
    m = len(rows)
    n = len(rows[0]) if rows else 0
    rank, prev = 0, 1
    for c in range(n):
        if rank == m:
            break
        piv = next((i for i in range(rank, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][c]
        for i in range(rank + 1, m):
            a = rows[i][c]
            ri = rows[i]
            rr = rows[rank]
            for j in range(c + 1, n):
                ri[j] = (ri[j] * p - a * rr[j]) // prev
            ri[c] = 0
        prev = p
        rank += 1
    return rank


def rank(M: Matrix) -> int:
    """Exact rank; fraction-free elimination over Q, Gaussian elimination in the tower."""
    if isinstance(M, LaurentMatrix):
        raise TypeError("rank is defined for matrices over a field, not over the Laurent ring")
    if M.rows == 0 or M.cols == 0:
        return 0
    if not M.config.is_tower:
        return _bareiss_rank(M)
    return len(_echelon(M, reduced=False)[1])


def det(M: Matrix) -> FieldElem:
    if not M.is_square():
        raise ShapeError("determinant of a non-square matrix")
    ar = M.arith
    A = M.data.copy()
    n = M.rows
    result = M.config.one(M.level)
    for col in range(n):
        nz = np.flatnonzero(~ar.is_zero(A[col:, col]))
        if not len(nz):
            return M.config.zero(M.level)
        piv = col + int(nz[0])
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
            result = -result
        p = A[col, col].copy()
        result = result * ar.to_elem(p)
        if col + 1 < n:
            f = ar.mul(A[col + 1:, col], ar.inv_scalar(p))
            A[col + 1:, col:] = ar.sub(A[col + 1:, col:], ar.outer(f, A[col, col:]))
    return result


def inverse(M: Matrix) -> Matrix:
    if not M.is_square():
        raise ShapeError("inverse of a non-square matrix")
    n = M.rows
    aug = Matrix.hstack([M, Matrix.identity(M.config, n, M.level)])
    R, pivots = _echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return Matrix(M.config, R[:, n:].copy(), aug.level)


def kernel(M: Matrix) -> Matrix:
    """Basis of the right null space, as columns."""
    R, pivots = _echelon(M)
    ar = M.arith
    n = M.cols
    free = [j for j in range(n) if j not in pivots]
    out = ar.zeros((n, len(free)))
    one = ar.eye(1)[0, 0]
    for k, f in enumerate(free):
        out[f, k] = one
        for i, pc in enumerate(pivots):
            out[pc, k] = ar.neg(R[i, f])
    return Matrix(M.config, out, M.level)


def solve(M: Matrix, b) -> Matrix:
    """One solution x of M x = b (free variables set to zero)."""
    if not isinstance(b, Matrix):
        b = Matrix.column(M.config, b)
    if b.rows != M.rows:
        raise ShapeError("right-hand side has the wrong number of rows")
    aug = Matrix.hstack([M, b])
    R, pivots = _echelon(aug)
    n = M.cols
    if any(p >= n for p in pivots):
        raise ValueError("inconsistent linear system")
    ar = aug.arith
    out = ar.zeros((n, b.cols))
    for i, pc in enumerate(pivots):
        out[pc] = R[i, n:]
    return Matrix(M.config, out, aug.level)


def basis_completion(V: Matrix, N: int | None = None) -> Matrix:
    """Invertible N x N matrix whose leading columns are the columns of V.

    The remaining columns are standard basis vectors e_j, taken in order for
    the non-pivot positions of V^T.
    """
    N = V.rows if N is None else N
    if V.rows != N:
        raise ShapeError("vectors have the wrong length")
    if V.cols == 0:
        return Matrix.identity(V.config, N, V.level)
    _, pivots = _echelon(V.T)
    if len(pivots) < V.cols:
        raise DependentColumnsError("input columns are linearly dependent")
    missing = [j for j in range(N) if j not in pivots]
    ar = V.arith
    E = ar.zeros((N, len(missing)))
    one = ar.eye(1)[0, 0]
    for k, j in enumerate(missing):
        E[j, k] = one
    return Matrix.hstack([V, Matrix(V.config, E, V.level)])


def congruence_apply(g, M):
    """g M g^T, for field or Laurent matrices."""
    if g.shape[0] != g.shape[1] or M.shape[0] != M.shape[1] or g.shape[1] != M.shape[0]:
        raise ShapeError(f"congruence needs square matrices of equal size, got {g.shape} and {M.shape}")
    return g @ M @ g.T


def sym_skew_decompose(M: Matrix) -> tuple[Matrix, Matrix]:
    """Unique split M = S + A with S symmetric and A skew."""
    if not M.is_square():
        raise ShapeError("decomposition needs a square matrix")
    half = M.config.element(Fraction(1, 2))
    return (M + M.T).scale(half), (M - M.T).scale(half)


# -- Laurent matrices -------------------------------------------------------------


class LaurentMatrix:
    """Matrix over K[t, 1/t] stored as degree -> coefficient matrix."""

    __slots__ = ("config", "shape", "terms")

    def __init__(self, config: FieldConfig, shape, terms=None):
        self.config = config
        self.shape = tuple(shape)
        terms = {int(k): m for k, m in (terms or {}).items() if not m.is_zero()}
        if terms:
            lifted = _common(list(terms.values()))
            terms = dict(zip(terms.keys(), lifted))
            for m in lifted:
                if m.shape != self.shape:
                    raise ShapeError("coefficient matrix has the wrong shape")
        self.terms = terms

    @classmethod
    def from_matrix(cls, M: Matrix, degree: int = 0) -> "LaurentMatrix":
        return cls(M.config, M.shape, {degree: M})

    @classmethod
    def monomial_diagonal(cls, config: FieldConfig, exponents, level: int = 0) -> "LaurentMatrix":
        """diag(t^e_1, ..., t^e_N)."""
        exponents = list(exponents)
        n = len(exponents)
        terms = {}
        for e in sorted(set(exponents)):
            terms[e] = Matrix.diagonal(config, [1 if x == e else 0 for x in exponents], level)
        return cls(config, (n, n), terms)

    @property
    def level(self) -> int:
        return max((m.level for m in self.terms.values()), default=0)

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def min_degree(self) -> int | None:
        return min(self.terms) if self.terms else None

    @property
    def max_degree(self) -> int | None:
        return max(self.terms) if self.terms else None

    def _as_laurent(self, other) -> "LaurentMatrix":
        if isinstance(other, Matrix):
            return LaurentMatrix.from_matrix(other)
        if other.config is not self.config:
            raise FieldMismatchError("Laurent matrices belong to different fields")
        return other

    def __add__(self, other):
        other = self._as_laurent(other)
        if other.shape != self.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        terms = dict(self.terms)
        for k, m in other.terms.items():
            terms[k] = terms[k] + m if k in terms else m
        return LaurentMatrix(self.config, self.shape, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentMatrix(self.config, self.shape, {k: -m for k, m in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._as_laurent(other))

    def __matmul__(self, other):
        other = self._as_laurent(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        terms: dict[int, Matrix] = {}
        for a, A in self.terms.items():
            for b, B in other.terms.items():
                P = A @ B
                terms[a + b] = terms[a + b] + P if a + b in terms else P
        return LaurentMatrix(self.config, (self.rows, other.cols), terms)

    def __rmatmul__(self, other):
        return self._as_laurent(other) @ self

    @property
    def T(self) -> "LaurentMatrix":
        return LaurentMatrix(self.config, (self.cols, self.rows), {k: m.T for k, m in self.terms.items()})

    def __getitem__(self, key):
        if isinstance(key, tuple) and len(key) == 2 and all(isinstance(k, (int, np.integer)) for k in key):
            return self.entry(*key)
        probe = np.empty(self.shape)[key if isinstance(key, tuple) else (key, slice(None))]
        shape = probe.shape if probe.ndim == 2 else (1, probe.shape[0])
        return LaurentMatrix(self.config, shape, {k: m[key] for k, m in self.terms.items()})

    def entry(self, i: int, j: int) -> LaurentPoly:
        return LaurentPoly(self.config, {k: m.entry(i, j) for k, m in self.terms.items()})

    def tolist(self) -> list[list[LaurentPoly]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def __eq__(self, other):
        if not isinstance(other, (Matrix, LaurentMatrix)):
            return NotImplemented
        other = self._as_laurent(other)
        return other.shape == self.shape and (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"LaurentMatrix({self.rows}x{self.cols}, degrees={sorted(self.terms)})"

    def entry_min_degrees(self) -> np.ndarray:
        """Per-entry minimum degree; entries that are zero get a large sentinel."""
        out = np.full(self.shape, np.iinfo(np.int64).max, dtype=np.int64)
        for k in sorted(self.terms, reverse=True):
            m = self.terms[k]
            nz = ~m.arith.is_zero(m.data)
            out[nz] = k
        return out

    def row_degree_bounds(self) -> list[tuple[int, int] | None]:
        bounds: list[tuple[int, int] | None] = [None] * self.rows
        for k, m in self.terms.items():
            nz_rows = np.flatnonzero((~m.arith.is_zero(m.data)).any(axis=1))
            for i in nz_rows:
                b = bounds[i]
                bounds[i] = (k, k) if b is None else (min(b[0], k), max(b[1], k))
        return bounds

    def eval_at_zero(self) -> Matrix:
        if self.terms and self.min_degree < 0:
            raise NegativeDegreeError(f"an entry keeps a term of degree {self.min_degree}")
        if 0 in self.terms:
            return self.terms[0]
        return Matrix.zeros(self.config, self.rows, self.cols, self.level)

    def evaluate(self, t: FieldElem) -> Matrix:
        if t.is_zero():
            return self.eval_at_zero()
        total = Matrix.zeros(self.config, self.rows, self.cols, max(self.level, t.level))
        for k, m in self.terms.items():
            total = total + m.scale(t**k)
        return total
