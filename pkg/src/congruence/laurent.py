"""Laurent polynomials K[t, 1/t] with exact coefficients.

Limits t -> 0 are taken algebraically: a Laurent polynomial has a limit iff
it has no negative-degree terms, and the limit is its constant term.
"""

from __future__ import annotations

from .errors import FieldMismatchError, NegativeDegreeError
from .field import FieldConfig, FieldElem


class LaurentPoly:
    """Finite map degree -> nonzero coefficient.  The zero polynomial is empty."""

    __slots__ = ("config", "terms")

    def __init__(self, config: FieldConfig, terms=None):
        self.config = config
        clean = {}
        for k, c in (terms or {}).items():
            c = config.element(c)
            if not c.is_zero():
                clean[int(k)] = c
        self.terms = clean

    @classmethod
    def monomial(cls, config: FieldConfig, coeff, degree: int = 0) -> "LaurentPoly":
        return cls(config, {degree: coeff})

    @classmethod
    def t(cls, config: FieldConfig) -> "LaurentPoly":
        return cls(config, {1: 1})

    # -- degrees --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def min_degree(self) -> int | None:
        return min(self.terms) if self.terms else None

    @property
    def max_degree(self) -> int | None:
        return max(self.terms) if self.terms else None

    def coeff(self, k: int) -> FieldElem:
        return self.terms.get(k, self.config.zero())

    # -- arithmetic --------------------------------------------------------------

    def _other(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.config is not self.config:
                raise FieldMismatchError("Laurent operands belong to different fields")
            return other
        return LaurentPoly(self.config, {0: other})

    def __add__(self, other):
        other = self._other(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return LaurentPoly(self.config, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.config, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        other = self._other(other)
        out: dict[int, FieldElem] = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                out[i + j] = out[i + j] + a * b if i + j in out else a * b
        return LaurentPoly(self.config, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                other = self._other(other)
            except (FieldMismatchError, TypeError, ValueError):
                return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted((k, hash(c)) for k, c in self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "LaurentPoly(0)"
        body = " + ".join(f"{self.terms[k]}*t^{k}" for k in sorted(self.terms))
        return f"LaurentPoly({body})"

    # -- evaluation ------------------------------------------------------------

    def evaluate(self, t: FieldElem) -> FieldElem:
        if t.is_zero():
            return eval_at_zero(self)
        total = self.config.zero()
        for k, c in self.terms.items():
            total = total + c * t**k
        return total

    def eval_at_zero(self) -> FieldElem:
        return eval_at_zero(self)

    def unit_data(self) -> tuple[FieldElem, int] | None:
        """(c, k) when the polynomial is the unit c*t^k, else None."""
        if len(self.terms) != 1:
            return None
        (k, c), = self.terms.items()
        return c, k

    def is_unit(self) -> bool:
        return self.unit_data() is not None


def eval_at_zero(a: LaurentPoly) -> FieldElem:
    """Constant term of ``a``; raises if a negative-degree term survives."""
    if a.terms and a.min_degree < 0:
        raise NegativeDegreeError(f"term of degree {a.min_degree} has no limit at t = 0")
    return a.terms.get(0, a.config.zero())


def laurent_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def is_unit(a: LaurentPoly) -> tuple[bool, tuple[FieldElem, int] | None]:
    data = a.unit_data()
    return data is not None, data
