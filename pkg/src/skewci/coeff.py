"""Exact coefficient arithmetic.

Two scalar variants are supported:

* rationals, represented by :class:`fractions.Fraction` (plain ``int`` values
  are accepted wherever a rational is expected), and
* univariate rational functions in a single parameter ``q`` with integer
  coefficients, represented by :class:`RationalFunction`.

Prime-field values (:class:`PrimeScalar`) are used only by witness searches.
Mixing the two exact variants in one operation raises :class:`MixedVariant`;
callers must promote explicitly with :meth:`Field.coerce`.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from sympy import ZZ, isprime

__all__ = [
    "CoefficientError",
    "DivisionByZero",
    "MixedVariant",
    "PoleAtValue",
    "BadPrime",
    "DenominatorVanishes",
    "RationalFunction",
    "PrimeScalar",
    "Field",
    "QQ",
    "QQ_q",
    "field_by_name",
    "scalar_arith",
    "specialize",
    "reduce_mod_p",
    "parse_scalar",
    "format_scalar",
]


class CoefficientError(ValueError):
    pass


class DivisionByZero(CoefficientError, ZeroDivisionError):
    pass


class MixedVariant(CoefficientError, TypeError):
    pass


class PoleAtValue(CoefficientError):
    pass


class BadPrime(CoefficientError):
    pass


class DenominatorVanishes(CoefficientError):
    pass


_FRAC_FIELD = ZZ.frac_field("q")
_Q = _FRAC_FIELD.gens[0]


class RationalFunction:
    """A reduced quotient of integer polynomials in ``q``.

    The denominator always has a positive leading coefficient, so two equal
    values share one representation.
    """

    __slots__ = ("_f",)

    def __init__(self, value=0):
        if isinstance(value, RationalFunction):
            self._f = value._f
        elif isinstance(value, bool):
            raise TypeError("bool is not a scalar")
        elif isinstance(value, int):
            self._f = _FRAC_FIELD(value)
        elif isinstance(value, Fraction):
            self._f = _FRAC_FIELD(value.numerator) / _FRAC_FIELD(value.denominator)
        elif getattr(value, "field", None) == _FRAC_FIELD.field:
            self._f = value
        else:
            raise TypeError(f"cannot build a rational function from {value!r}")

    @classmethod
    def q(cls) -> "RationalFunction":
        return cls(_Q)

    @classmethod
    def from_coefficients(cls, numerator, denominator=(1,)) -> "RationalFunction":
        """Build from coefficient lists, highest degree first."""
        num = _FRAC_FIELD(0)
        for c in numerator:
            num = num * _Q + int(c)
        den = _FRAC_FIELD(0)
        for c in denominator:
            den = den * _Q + int(c)
        if den == 0:
            raise DivisionByZero("zero denominator")
        return cls(num / den)

    @property
    def numerator(self) -> tuple[int, ...]:
        return _dense(self._f.numer)

    @property
    def denominator(self) -> tuple[int, ...]:
        return _dense(self._f.denom)

    def is_constant(self) -> bool:
        return len(self.numerator) <= 1 and len(self.denominator) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} depends on q")
        num = self.numerator
        return Fraction(num[0] if num else 0, self.denominator[0])

    def _other(self, other):
        if isinstance(other, RationalFunction):
            return other._f
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        if isinstance(other, Fraction):
            raise MixedVariant("cannot mix a rational with a rational function; promote first")
        return None

    def _binop(self, other, op, reflected=False):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return RationalFunction(op(o, self._f) if reflected else op(self._f, o))

    def __add__(self, other):
        return self._binop(other, operator.add)

    def __radd__(self, other):
        return self._binop(other, operator.add, True)

    def __sub__(self, other):
        return self._binop(other, operator.sub)

    def __rsub__(self, other):
        return self._binop(other, operator.sub, True)

    def __mul__(self, other):
        return self._binop(other, operator.mul)

    def __rmul__(self, other):
        return self._binop(other, operator.mul, True)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise DivisionByZero("division by zero rational function")
        return RationalFunction(self._f / o)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self._f == 0:
            raise DivisionByZero("division by zero rational function")
        return RationalFunction(o / self._f)

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(1) / RationalFunction(self._f ** (-k))
        return RationalFunction(self._f**k)

    def __neg__(self):
        return RationalFunction(-self._f)

    def __pos__(self):
        return self

    def __bool__(self):
        return self._f != 0

    def __eq__(self, other):
        if isinstance(other, Fraction):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, RationalFunction):
            return self._f == other._f
        if isinstance(other, int):
            return self._f == other
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.numerator, self.denominator))

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        return format_scalar(self)


def _dense(poly) -> tuple[int, ...]:
    """Coefficients of a univariate sympy ring element, highest degree first."""
    if poly == 0:
        return ()
    deg = poly.degree()
    coeffs = [0] * (deg + 1)
    for (e,), c in poly.terms():
        coeffs[deg - e] = int(c)
    return tuple(coeffs)


def _eval_dense(coeffs, x):
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


@dataclass(frozen=True, eq=False)
class PrimeScalar:
    """An element of the prime field F_p with p an odd prime."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus <= 2:
            raise BadPrime(f"modulus {self.modulus} excluded (characteristic must be odd)")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other):
        if isinstance(other, PrimeScalar):
            if other.modulus != self.modulus:
                raise MixedVariant("prime scalars with different moduli")
            return other.value
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else PrimeScalar(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else PrimeScalar(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else PrimeScalar(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else PrimeScalar(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeScalar(-self.value, self.modulus)

    def inverse(self) -> "PrimeScalar":
        if self.value == 0:
            raise DivisionByZero("inverse of 0 in F_p")
        return PrimeScalar(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * PrimeScalar(o, self.modulus).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PrimeScalar(o, self.modulus) * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self.value - o) % self.modulus == 0

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value


Scalar = Union[Fraction, RationalFunction]


class Field:
    """One of the two exact coefficient fields used by manifests."""

    def __init__(self, name: str, make):
        self.name = name
        self._make = make
        self.zero = make(0)
        self.one = make(1)

    def coerce(self, value):
        """Promote an int, Fraction, scalar literal or same-variant value into this field."""
        if isinstance(value, str):
            return parse_scalar(value, self)
        if isinstance(value, RationalFunction) and self is QQ:
            if not value.is_constant():
                raise MixedVariant(f"{value} is not a rational constant")
            return value.constant_value()
        return self._make(value)

    def __repr__(self):
        return f"Field({self.name!r})"


QQ = Field("Q", Fraction)
QQ_q = Field("Q(q)", RationalFunction)


def field_by_name(name: str) -> Field:
    if name in ("Q", "QQ"):
        return QQ
    if name in ("Q(q)", "QQ(q)"):
        return QQ_q
    raise CoefficientError(f"unknown field {name!r}; expected 'Q' or 'Q(q)'")


def _check_same_variant(a, b):
    if isinstance(a, RationalFunction) != isinstance(b, RationalFunction):
        if not (isinstance(a, int) or isinstance(b, int)):
            raise MixedVariant("operands belong to different scalar variants")


def scalar_arith(op: str, a, b=None):
    """Apply ``add``, ``mul``, ``neg`` or ``inv`` and return a canonical scalar."""
    if op in ("add", "mul"):
        if b is None:
            raise TypeError(f"{op} needs two operands")
        _check_same_variant(a, b)
        result = a + b if op == "add" else a * b
    elif op == "neg":
        result = -a
    elif op == "inv":
        if not a:
            raise DivisionByZero("inverse of zero")
        result = 1 / a if isinstance(a, RationalFunction) else 1 / Fraction(a)
    else:
        raise ValueError(f"unknown operation {op!r}")
    if isinstance(result, int):
        result = Fraction(result)
    return result


def specialize(a, q_value) -> Fraction:
    """Evaluate ``a`` at ``q = q_value``."""
    q_value = Fraction(q_value)
    if not isinstance(a, RationalFunction):
        return Fraction(a)
    den = _eval_dense(a.denominator, q_value)
    if den == 0:
        raise PoleAtValue(f"{a} has a pole at q = {q_value}")
    return _eval_dense(a.numerator, q_value) / den


def reduce_mod_p(a, p: int) -> PrimeScalar:
    """Image of a rational scalar in F_p."""
    if p == 2 or p < 2 or not isprime(p):
        raise BadPrime(f"{p} is not an odd prime")
    a = Fraction(a)
    if a.denominator % p == 0:
        raise DenominatorVanishes(f"denominator of {a} vanishes mod {p}")
    return PrimeScalar(a.numerator * pow(a.denominator, -1, p), p)


def parse_scalar(text: str, field: Field = QQ):
    """Parse a scalar literal such as ``3/4`` or ``(q - q^-1)/2``."""
    from .expr import parse_expression

    return parse_expression(text, field=field, generators=None)


def format_scalar(c) -> str:
    if isinstance(c, RationalFunction):
        num = _format_dense(c.numerator)
        den = c.denominator
        if den == (1,):
            return num
        den_s = _format_dense(den)
        if " " in num:
            num = f"({num})"
        if " " in den_s or "*" in den_s:
            den_s = f"({den_s})"
        return f"{num}/{den_s}"
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_dense(coeffs) -> str:
    if not coeffs:
        return "0"
    deg = len(coeffs) - 1
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        e = deg - i
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            mono = "q" if e == 1 else f"q^{e}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
