import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopf3.errors import DomainError
from hopf3.rational import (GAUSS_I, GAUSS_ONE, GaussianRational,
                            format_rational, mpq, parse_rational, rat_normalize,
                            rational_sqrt)


def test_sign_and_gcd_normalization():
    q = rat_normalize(2, -4)
    assert q == mpq(-1, 2)
    assert q.denominator == 2 and q.numerator == -1


def test_zero_canonical_form():
    q = rat_normalize(0, 5)
    assert q.numerator == 0 and q.denominator == 1


def test_reduction_against_euclid_oracle():
    num, den = 109395, 761090
    g = math.gcd(num, den)
    q = rat_normalize(num, den)
    assert (q.numerator, q.denominator) == (num // g, den // g)
    assert q == mpq(21879, 152218)


def test_zero_denominator_rejected():
    with pytest.raises(DomainError):
        rat_normalize(1, 0)


def test_parse_and_format_round_trip():
    assert format_rational(parse_rational("-11/15")) == "-11/15"
    assert format_rational(parse_rational("4/2")) == "2"
    assert format_rational(parse_rational("7")) == "7"
    with pytest.raises(DomainError):
        parse_rational("1/0")
    with pytest.raises(DomainError):
        parse_rational("x")


def test_rational_sqrt():
    assert rational_sqrt(mpq(4, 9)) == mpq(2, 3)
    assert rational_sqrt(mpq(2)) is None
    assert rational_sqrt(mpq(-1)) is None


rationals = st.builds(
    mpq,
    st.integers(min_value=-10**6, max_value=10**6),
    st.integers(min_value=1, max_value=10**4),
)
gaussians = st.tuples(rationals, rationals).map(lambda t: GaussianRational(*t))


@given(gaussians, gaussians, gaussians)
@settings(max_examples=60, deadline=None)
def test_gaussian_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(gaussians)
@settings(max_examples=40, deadline=None)
def test_gaussian_inverse(a):
    if a:
        assert a / a == GAUSS_ONE
        assert (a * a.conjugate()).im == 0


def test_gaussian_i_square():
    assert GAUSS_I * GAUSS_I == GaussianRational(mpq(-1), mpq(0))


def test_gaussian_zero_divisor_rejected():
    with pytest.raises(DomainError):
        GAUSS_ONE / GaussianRational(mpq(0), mpq(0))
