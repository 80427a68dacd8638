"""Exact scalars: the rationals, and a lazily grown quadratic tower over F_p.

Level k of the tower is F_{p^(2^k)}, obtained from level k-1 by adjoining a
square root x_k of a fixed non-square of level k-1.  A level-k element is
stored as 2^k base-field coefficients: the first half is the constant part,
the second half the coefficient of x_k, each half a level k-1 element.
Embedding a lower level into a higher one is zero padding on the right, so
old elements stay valid when the tower grows.

Two representations live here.  ``FieldElem`` is the immutable scalar used by
the public API.  The ``TowerArith``/``RationalArith`` backends operate on
numpy arrays whose trailing axis holds the coefficients, and are what the
matrix code uses.
"""

from __future__ import annotations

import itertools
import threading
from fractions import Fraction
from math import isqrt

import numpy as np

from .errors import FieldMismatchError, NotASquareError

RATIONAL = "rational"
TOWER = "tower"

# keeps every intermediate of the integer matmuls below 2**63
MAX_PRIME = 1 << 20


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in range(2, isqrt(n) + 1):
        if n % q == 0:
            return False
    return True


_RATIONAL_FIELD = None


class FieldConfig:
    """Shared description of a scalar field.

    For the tower, ``adjoined[k]`` is the level-k non-square whose square root
    generates level k+1.  Extension appends to this list; it is the only
    mutation and is serialized by a lock.
    """

    def __init__(self, kind: str = TOWER, p: int | None = 5, adjoined=()):
        if kind not in (RATIONAL, TOWER):
            raise ValueError(f"unknown field kind {kind!r}")
        self.kind = kind
        self._lock = threading.Lock()
        self._adjoined: list[tuple[int, ...]] = []
        self._nonresidues: dict[int, tuple[int, ...]] = {}
        self._arith: dict[int, object] = {}
        if kind == RATIONAL:
            if adjoined:
                raise ValueError("the rational field has no tower")
            self.p = None
            return
        p = int(p)
        if p == 2 or not _is_prime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        if p > MAX_PRIME:
            raise ValueError(f"p must be at most {MAX_PRIME}")
        self.p = p
        for a in adjoined:
            self._adjoin(a)

    @classmethod
    def tower(cls, p: int = 5) -> "FieldConfig":
        return cls(TOWER, p)

    @classmethod
    def rational(cls) -> "FieldConfig":
        # the rationals carry no state, so one shared instance keeps identity checks simple
        global _RATIONAL_FIELD
        if _RATIONAL_FIELD is None:
            _RATIONAL_FIELD = cls(RATIONAL, None)
        return _RATIONAL_FIELD

    @property
    def is_tower(self) -> bool:
        return self.kind == TOWER

    @property
    def max_level(self) -> int:
        return len(self._adjoined)

    @property
    def adjoined(self) -> tuple["FieldElem", ...]:
        return tuple(FieldElem(self, a, k) for k, a in enumerate(self._adjoined))

    def size(self, level: int = 0) -> int:
        if not self.is_tower:
            raise ValueError("the rational field is infinite")
        return self.p ** (2**level)

    def __reduce__(self):
        if not self.is_tower:
            return (FieldConfig.rational, ())
        return (FieldConfig, (TOWER, self.p, tuple(self._adjoined)))

    def __repr__(self) -> str:
        if not self.is_tower:
            return "FieldConfig(rational)"
        return f"FieldConfig(tower, p={self.p}, levels={self.max_level})"

    # -- tower growth ------------------------------------------------------

    def _adjoin(self, a) -> None:
        level = len(self._adjoined)
        if isinstance(a, FieldElem):
            a = a.value
        elif isinstance(a, int):
            a = (a,)
        a = tuple(int(c) % self.p for c in a)
        d = 2**level
        if len(a) > d or d % len(a):
            raise ValueError(f"adjoined element {a} does not fit level {level}")
        a = a + (0,) * (d - len(a))
        if not any(a) or self._is_square(a):
            raise ValueError(f"adjoined element {a} is a square at level {level}")
        self._adjoined.append(a)

    def _nonresidue(self, level: int) -> tuple[int, ...]:
        """First non-square of ``level`` in canonical (lexicographic) order."""
        if level < len(self._adjoined):
            return self._adjoined[level]
        if level not in self._nonresidues:
            d = 2**level
            for cand in itertools.product(range(self.p), repeat=d):
                if any(cand) and not self._is_square(cand):
                    self._nonresidues[level] = cand
                    break
        return self._nonresidues[level]

    def extend(self) -> int:
        """Adjoin one more square root; returns the new top level."""
        with self._lock:
            level = len(self._adjoined)
            self._adjoined.append(self._nonresidue(level))
            return level + 1

    def ensure_level(self, level: int) -> None:
        if not self.is_tower:
            if level:
                raise ValueError("the rational field has no tower levels")
            return
        while self.max_level < level:
            self.extend()

    def level_for_size(self, min_size: int) -> int:
        """Smallest level with at least ``min_size`` elements, extending as needed."""
        level = 0
        while self.p ** (2**level) < min_size:
            level += 1
        self.ensure_level(level)
        return level

    # -- tuple arithmetic (tower only) ----------------------------------------

    def _add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def _neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def _mul(self, a, b):
        d = len(a)
        if d == 1:
            return ((a[0] * b[0]) % self.p,)
        h = d // 2
        a0, a1, b0, b1 = a[:h], a[h:], b[:h], b[h:]
        alpha = self._adjoined[h.bit_length() - 1]
        lo = self._mul(a0, b0)
        hi = self._mul(a1, b1)
        mid = self._sub(self._sub(self._mul(self._add(a0, a1), self._add(b0, b1)), lo), hi)
        return self._add(lo, self._mul(alpha, hi)) + mid

    def _inv(self, a):
        d = len(a)
        if d == 1:
            if a[0] % self.p == 0:
                raise ZeroDivisionError("division by zero in the tower")
            return (pow(a[0], self.p - 2, self.p),)
        h = d // 2
        a0, a1 = a[:h], a[h:]
        alpha = self._adjoined[h.bit_length() - 1]
        norm = self._sub(self._mul(a0, a0), self._mul(alpha, self._mul(a1, a1)))
        ninv = self._inv(norm)
        return self._mul(a0, ninv) + self._mul(self._neg(a1), ninv)

    def _pow(self, a, e: int):
        result = (1,) + (0,) * (len(a) - 1)
        base = a
        while e:
            if e & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            e >>= 1
        return result

    def _is_square(self, a) -> bool:
        if not any(a):
            return True
        q = self.p ** len(a)
        one = (1,) + (0,) * (len(a) - 1)
        return self._pow(a, (q - 1) // 2) == one

    def _tonelli(self, a, level: int):
        """Square root of a square ``a`` at ``level`` (Tonelli-Shanks over F_q)."""
        d = len(a)
        one = (1,) + (0,) * (d - 1)
        if not any(a):
            return a
        q = self.p**d
        S, Q = 0, q - 1
        while Q % 2 == 0:
            S += 1
            Q //= 2
        z = self._nonresidue(level)
        M, c, t = S, self._pow(z, Q), self._pow(a, Q)
        R = self._pow(a, (Q + 1) // 2)
        while t != one:
            i, t2 = 0, t
            while t2 != one:
                t2 = self._mul(t2, t2)
                i += 1
            b = c
            for _ in range(M - i - 1):
                b = self._mul(b, b)
            M, c = i, self._mul(b, b)
            t, R = self._mul(t, c), self._mul(R, b)
        return R

    # -- element construction --------------------------------------------

    def element(self, value, level: int | None = None) -> "FieldElem":
        """Coerce ``value`` (int, Fraction, "a/b", coefficient list, FieldElem)."""
        if isinstance(value, FieldElem):
            if value.config is not self:
                raise FieldMismatchError("element belongs to a different field")
            return value if level is None else value.lift(level)
        if not self.is_tower:
            if isinstance(value, (list, tuple)):
                raise TypeError("the rational field has no coefficient lists")
            return FieldElem(self, Fraction(value), 0)
        if isinstance(value, (list, tuple)):
            coeffs = tuple(int(c) % self.p for c in value)
            d = len(coeffs)
            if d == 0 or d & (d - 1):
                raise ValueError("coefficient list length must be a power of two")
            lev = d.bit_length() - 1
            self.ensure_level(lev)
            elem = FieldElem(self, coeffs, lev)
        else:
            if isinstance(value, str):
                value = Fraction(value)
            if isinstance(value, Fraction):
                num, den = value.numerator % self.p, value.denominator % self.p
                if den == 0:
                    raise ZeroDivisionError(f"{value} has no image mod {self.p}")
                coeffs = ((num * pow(den, self.p - 2, self.p)) % self.p,)
            else:
                coeffs = (int(value) % self.p,)
            elem = FieldElem(self, coeffs, 0)
        return elem if level is None else elem.lift(level)

    __call__ = element

    def zero(self, level: int = 0) -> "FieldElem":
        return self.element(0, level if self.is_tower else None)

    def one(self, level: int = 0) -> "FieldElem":
        return self.element(1, level if self.is_tower else None)

    def elements(self, level: int = 0):
        """All elements of a tower level, in canonical order."""
        self.ensure_level(level)
        for cand in itertools.product(range(self.p), repeat=2**level):
            yield FieldElem(self, cand, level)

    def arith(self, level: int = 0):
        """Vectorized backend for arrays of this field at ``level``."""
        key = level if self.is_tower else 0
        backend = self._arith.get(key)
        if backend is None:
            if self.is_tower:
                self.ensure_level(level)
                backend = TowerArith(self, level)
            else:
                backend = RationalArith(self)
            self._arith[key] = backend
        return backend


class FieldElem:
    """Immutable exact scalar.

    ``value`` is a Fraction for the rational field, otherwise a tuple of
    2**level coefficients.  Elements of different levels compare equal when
    they agree after padding to a common level.
    """

    __slots__ = ("config", "level", "value")

    def __init__(self, config: FieldConfig, value, level: int = 0):
        self.config = config
        self.level = level
        self.value = value

    # -- structure ---------------------------------------------------------

    def lift(self, level: int) -> "FieldElem":
        if not self.config.is_tower or level == self.level:
            return self
        if level < self.level:
            raise ValueError("cannot lower the level of an element")
        self.config.ensure_level(level)
        pad = (0,) * (2**level - len(self.value))
        return FieldElem(self.config, self.value + pad, level)

    def trimmed(self) -> "FieldElem":
        """The same element at the lowest level containing it."""
        if not self.config.is_tower:
            return self
        v = self.value
        while len(v) > 1 and not any(v[len(v) // 2:]):
            v = v[: len(v) // 2]
        return FieldElem(self.config, v, len(v).bit_length() - 1)

    def coeffs(self) -> tuple:
        return (self.value,) if not self.config.is_tower else self.value

    def sort_key(self):
        """Key of the canonical total order: lexicographic on padded coefficients."""
        if not self.config.is_tower:
            return (self.value,)
        return self.trimmed().value

    def is_zero(self) -> bool:
        return not any(self.value) if self.config.is_tower else self.value == 0

    def _coerce(self, other) -> tuple["FieldElem", "FieldElem"]:
        if isinstance(other, FieldElem):
            if other.config is not self.config:
                raise FieldMismatchError("operands belong to different fields")
        else:
            other = self.config.element(other)
        if not self.config.is_tower:
            return self, other
        level = max(self.level, other.level)
        return self.lift(level), other.lift(level)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        a, b = self._coerce(other)
        cfg = self.config
        v = a.value + b.value if not cfg.is_tower else cfg._add(a.value, b.value)
        return FieldElem(cfg, v, a.level)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        cfg = self.config
        v = a.value - b.value if not cfg.is_tower else cfg._sub(a.value, b.value)
        return FieldElem(cfg, v, a.level)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        cfg = self.config
        v = -self.value if not cfg.is_tower else cfg._neg(self.value)
        return FieldElem(cfg, v, self.level)

    def __mul__(self, other):
        a, b = self._coerce(other)
        cfg = self.config
        v = a.value * b.value if not cfg.is_tower else cfg._mul(a.value, b.value)
        return FieldElem(cfg, v, a.level)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        cfg = self.config
        v = 1 / self.value if not cfg.is_tower else cfg._inv(self.value)
        return FieldElem(cfg, v, self.level)

    def __truediv__(self, other):
        a, b = self._coerce(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.config.element(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        cfg = self.config
        v = self.value**e if not cfg.is_tower else cfg._pow(self.value, e)
        return FieldElem(cfg, v, self.level)

    def is_square(self) -> bool:
        """Whether a square root exists at the element's own level."""
        if not self.config.is_tower:
            v = self.value
            return v >= 0 and isqrt(v.numerator) ** 2 == v.numerator and isqrt(v.denominator) ** 2 == v.denominator
        return self.config._is_square(self.value)

    def sqrt(self) -> "FieldElem":
        return sqrt(self)

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FieldElem):
            if isinstance(other, (int, Fraction)):
                try:
                    other = self.config.element(other)
                except ZeroDivisionError:
                    return False
            else:
                return NotImplemented
        if other.config is not self.config:
            return False
        if not self.config.is_tower:
            return self.value == other.value
        return self.trimmed().value == other.trimmed().value

    def __hash__(self):
        return hash(self.trimmed().value)

    def __repr__(self):
        if not self.config.is_tower:
            return f"FieldElem({self.value})"
        return f"FieldElem(F{self.config.p}[{self.level}]{self.value})"

    def __str__(self):
        if not self.config.is_tower:
            return str(self.value)
        t = self.trimmed()
        return str(t.value[0]) if t.level == 0 else str(t.value)


def field_arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    """Exact ``a op b`` for op in add/sub/mul/div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def sqrt(a: FieldElem) -> FieldElem:
    """Square root with the canonically least sign.

    In the tower a non-square of level k gets its root at level k+1, and the
    shared config grows if that level does not exist yet.  Over the
    rationals only perfect squares are accepted.
    """
    cfg = a.config
    if not cfg.is_tower:
        if not a.is_square():
            raise NotASquareError(f"{a.value} is not a rational square")
        v = a.value
        return FieldElem(cfg, Fraction(isqrt(v.numerator), isqrt(v.denominator)), 0)
    if a.is_zero():
        return a
    level = a.level
    if cfg._is_square(a.value):
        root = cfg._tonelli(a.value, level)
    else:
        cfg.ensure_level(level + 1)
        alpha = cfg._adjoined[level]
        half = cfg._tonelli(cfg._mul(a.value, cfg._inv(alpha)), level)
        root = (0,) * len(half) + half
        level += 1
    other = cfg._neg(root)
    return FieldElem(cfg, min(root, other), level)


def sample(config: FieldConfig, min_field_size: int = 0, seed=None) -> FieldElem:
    """Uniform element of the smallest tower level with at least ``min_field_size`` elements.

    ``seed`` is an int or a ``numpy.random.Generator``; passing the same int
    always yields the same element, passing a generator advances it.
    """
    if not config.is_tower:
        raise ValueError("sampling needs a finite tower field")
    rng = np.random.default_rng(seed)
    level = config.level_for_size(min_field_size)
    coeffs = rng.integers(0, config.p, size=2**level)
    return FieldElem(config, tuple(int(c) for c in coeffs), level)


# -- vectorized backends ------------------------------------------------------


class TowerArith:
    """Arithmetic on int64 arrays of shape (..., 2**level).

    Multiplication goes through the structure tensor ``T[m, u, v]``, the
    coefficient of basis element m in e_u * e_v, so matrix products reduce
    to one integer matmul of the regular representation.
    """

    kind = TOWER

    def __init__(self, config: FieldConfig, level: int):
        self.config = config
        self.level = level
        self.p = config.p
        self.d = d = 2**level
        T = np.zeros((d, d, d), dtype=np.int64)
        basis = [tuple(int(i == j) for i in range(d)) for j in range(d)]
        for u in range(d):
            for v in range(d):
                T[:, u, v] = config._mul(basis[u], basis[v])
        self.T = T

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(tuple(shape) + (self.d,), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        out[np.arange(n), np.arange(n), 0] = 1
        return out

    def scalar(self, elem: FieldElem) -> np.ndarray:
        return np.array(elem.lift(self.level).value, dtype=np.int64)

    def to_elem(self, arr) -> FieldElem:
        return FieldElem(self.config, tuple(int(x) for x in arr), self.level)

    def lift_array(self, arr: np.ndarray, from_d: int) -> np.ndarray:
        if from_d == self.d:
            return arr
        pad = [(0, 0)] * (arr.ndim - 1) + [(0, self.d - from_d)]
        return np.pad(arr, pad)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        """Elementwise product with numpy broadcasting over leading axes."""
        p = self.p
        if self.d == 1:
            return (a * b) % p
        La = np.einsum("...u,muv->...mv", a, self.T) % p
        return (La @ b[..., :, None])[..., 0] % p

    def outer(self, col, row):
        p, d = self.p, self.d
        n, m = col.shape[0], row.shape[0]
        if d == 1:
            return (col[:, None, :] * row[None, :, :]) % p
        Lc = np.einsum("iu,muv->imv", col, self.T) % p
        out = Lc.reshape(n * d, d) @ row.T
        return out.reshape(n, d, m).transpose(0, 2, 1) % p

    def matmul(self, A, B):
        p, d = self.p, self.d
        n, k = A.shape[:2]
        m = B.shape[1]
        if d == 1:
            return ((A[..., 0] @ B[..., 0]) % p)[..., None]
        LA = (np.einsum("iku,muv->imkv", A, self.T) % p).reshape(n * d, k * d)
        Bm = B.transpose(0, 2, 1).reshape(k * d, m)
        C = (LA @ Bm) % p
        return np.ascontiguousarray(C.reshape(n, d, m).transpose(0, 2, 1))

    def is_zero(self, a):
        return ~a.any(axis=-1)

    def inv_scalar(self, a):
        return np.array(self.config._inv(tuple(int(x) for x in a)), dtype=np.int64)

    def random(self, shape, rng) -> np.ndarray:
        return rng.integers(0, self.p, size=tuple(shape) + (self.d,), dtype=np.int64)


class RationalArith:
    """Object arrays of Fractions with a trailing axis of length 1."""

    kind = RATIONAL
    level = 0
    d = 1

    def __init__(self, config: FieldConfig):
        self.config = config

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(tuple(shape) + (1,), dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i, 0] = Fraction(1)
        return out

    def scalar(self, elem: FieldElem) -> np.ndarray:
        out = np.empty(1, dtype=object)
        out[0] = elem.value
        return out

    def to_elem(self, arr) -> FieldElem:
        return FieldElem(self.config, Fraction(arr[0]), 0)

    def lift_array(self, arr, from_d: int):
        return arr

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def outer(self, col, row):
        return col[:, None, :] * row[None, :, :]

    def matmul(self, A, B):
        n, k = A.shape[:2]
        m = B.shape[1]
        if k == 0:
            return self.zeros((n, m))
        return (A[..., 0] @ B[..., 0])[..., None]

    def is_zero(self, a):
        return np.asarray(a == 0, dtype=bool).all(axis=-1)

    def inv_scalar(self, a):
        out = np.empty(1, dtype=object)
        out[0] = 1 / Fraction(a[0])
        return out

    def random(self, shape, rng, bound: int = 9) -> np.ndarray:
        vals = rng.integers(-bound, bound + 1, size=tuple(shape))
        out = np.empty(vals.size, dtype=object)
        out[:] = [Fraction(int(v)) for v in vals.ravel()]
        return out.reshape(tuple(shape) + (1,))
