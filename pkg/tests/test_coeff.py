from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from skewci.coeff import (
    QQ,
    QQ_q,
    BadPrime,
    DenominatorVanishes,
    DivisionByZero,
    MixedVariant,
    PoleAtValue,
    PrimeScalar,
    RationalFunction,
    field_by_name,
    format_scalar,
    parse_scalar,
    reduce_mod_p,
    scalar_arith,
    specialize,
)

q = RationalFunction.q()


def test_rational_function_normal_form():
    f = (q**2 - 1) / (q - 1)
    assert f == q + 1
    assert f.numerator == (1, 1)
    assert f.denominator == (1,)
    assert ((q - 1) / (1 - q)) == -1


def test_rational_function_denominator_sign_is_positive():
    f = RationalFunction(1) / (-q)
    assert f.denominator[0] > 0
    assert f == -1 / q


def test_mixed_variant_rejected():
    with pytest.raises(MixedVariant):
        scalar_arith("add", Fraction(1, 2), q)
    with pytest.raises(MixedVariant):
        q + Fraction(1, 2)


def test_coerce_promotes():
    assert QQ_q.coerce(Fraction(1, 2)) * 2 == 1
    assert QQ.coerce(QQ_q.coerce(3)) == 3
    with pytest.raises(MixedVariant):
        QQ.coerce(q)
    assert QQ_q.coerce("q - q^-1") == q - 1 / q


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        q / RationalFunction(0)
    with pytest.raises(DivisionByZero):
        RationalFunction.from_coefficients([1], [0])


def test_specialize():
    assert specialize(q - 1 / q, 3) == Fraction(8, 3)
    assert specialize(Fraction(5, 7), 2) == Fraction(5, 7)
    with pytest.raises(PoleAtValue):
        specialize(1 / (q - 2), 2)


def test_reduce_mod_p():
    assert reduce_mod_p(Fraction(1, 2), 7) == PrimeScalar(4, 7)
    with pytest.raises(BadPrime):
        reduce_mod_p(1, 2)
    with pytest.raises(BadPrime):
        reduce_mod_p(1, 9)
    with pytest.raises(DenominatorVanishes):
        reduce_mod_p(Fraction(1, 7), 7)


def test_prime_scalar_arithmetic():
    a = PrimeScalar(3, 10007)
    assert a * a.inverse() == 1
    assert 1 / a == a.inverse()
    assert (a - a) == 0 and not (a - a)


def test_parse_and_format_roundtrip():
    for text in ["3/4", "-2", "(q^2 - 1)/q", "q", "1/q"]:
        field = QQ_q if "q" in text else QQ
        value = parse_scalar(text, field)
        assert parse_scalar(format_scalar(value), field) == value


def test_field_names():
    assert field_by_name("Q") is QQ and field_by_name("Q(q)") is QQ_q
    with pytest.raises(ValueError):
        field_by_name("R")


small = st.integers(-20, 20)


@given(small, small.filter(bool), small, small.filter(bool))
def test_rational_function_field_axioms(a, b, c, d):
    x = (q * a + b) / (q + d)
    y = RationalFunction.from_coefficients([c, b], [1, d]) if d != 0 else q
    assert x + y == y + x
    assert x * (y + 1) == x * y + x
    if x:
        assert (x / x) == 1


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_specialize_is_a_homomorphism(a, b):
    fa = q * QQ_q.coerce(a) + 1
    fb = q - QQ_q.coerce(b)
    assert specialize(fa * fb, 2) == specialize(fa, 2) * specialize(fb, 2)
    assert specialize(fa + fb, 5) == specialize(fa, 5) + specialize(fb, 5)
