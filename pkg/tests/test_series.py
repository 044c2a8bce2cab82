"""Series-kernel unit tests: frozen examples plus randomized algebraic laws."""

from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from qdivisor.series import (
    EXACT_PREC,
    DivergentFormalSum,
    EmptyWindow,
    OutOfWindow,
    PoleAtConstant,
    QLaurentSeries,
    QMonomial,
    add,
    coeff,
    equal_to_precision,
    from_monomial,
    invert,
    invert_binomial,
    mul,
    one,
    qpow,
    sum_terms,
    window,
    zero,
)


def S(coeffs, prec):
    return QLaurentSeries({e: mpq(c) for e, c in coeffs.items()}, prec)


# --------------------------------------------------------------------------
# construction and monomials

def test_monomial_ops():
    z = QMonomial(mpq(-1), 1)  # -q
    assert z.shift(2) == QMonomial(-1, 3)
    assert z.pow(3) == QMonomial(-1, 3)
    assert z.pow(2) == QMonomial(1, 2)
    assert z.reciprocal() == QMonomial(-1, -1)
    assert z.q_over() == QMonomial(-1, 0)
    assert QMonomial(mpq(2), 1) * QMonomial(mpq(3), -2) == QMonomial(6, -1)
    with pytest.raises(ValueError):
        QMonomial(mpq(0), 0)


def test_construction_normalizes():
    a = S({0: 1, 3: 0, 99: 5}, 10)  # zero coeff and out-of-window dropped
    assert a.coeffs == {0: 1}
    assert a.val == 0 and a.prec == 10
    z = S({}, 7)
    assert z.is_zero() and z.val == 8  # val = prec + 1 encodes known-zero


def test_immutability():
    a = S({0: 1}, 5)
    with pytest.raises(AttributeError):
        a.prec = 99


def test_from_monomial_examples():
    assert from_monomial(QMonomial(1, 0), 10) == S({0: 1}, 10)
    assert from_monomial(QMonomial(-1, 1), 5) == S({1: -1}, 5)
    half = from_monomial(QMonomial(mpq(1, 2), -3), 4)
    assert half == S({-3: mpq(1, 2)}, 4) and half.val == -3


# --------------------------------------------------------------------------
# ring operations

def test_add_examples():
    assert add(S({0: 1, 1: 1}, 9), S({0: -1, 1: 1}, 9)) == S({1: 2}, 9)
    a = S({2: 5, -1: 3}, 6)
    assert add(a, zero(6)) == a
    got = add(S({1: 1}, 3), S({5: 1}, 10))
    assert got == S({1: 1}, 3)  # q^5 lies beyond the common window


def test_mul_examples():
    got = mul(S({0: 1, 1: -1}, 3), S({0: 1, 1: 1, 2: 1, 3: 1}, 3))
    assert got == S({0: 1}, 3)  # telescopes; q^4 is beyond prec
    assert mul(S({-2: 1}, EXACT_PREC), S({5: 1}, EXACT_PREC)).coeffs == {3: 1}
    got = mul(S({0: 1, 1: -1, 2: -1, 3: 1}, EXACT_PREC),
              S({0: 1, 3: -1}, EXACT_PREC))
    assert got.coeffs == {0: 1, 1: -1, 2: -1, 4: 1, 5: 1, 6: -1}  # (q;q)_3


def test_mul_precision_rule():
    a = S({1: 1, 2: 7}, 5)   # val 1
    b = S({-2: 3, 0: 1}, 4)  # val -2
    assert mul(a, b).prec == min(5 + (-2), 4 + 1)


def test_invert_examples():
    assert invert(S({0: 1, 1: -1}, 4)) == S({e: 1 for e in range(5)}, 4)
    assert invert(S({0: 2}, 11)) == S({0: mpq(1, 2)}, 11)
    b = invert(S({1: 1, 2: -1}, 5))  # 1/(q(1-q))
    assert b.val == -1 and b.prec == 3
    assert b == S({-1: 1, 0: 1, 1: 1, 2: 1, 3: 1}, 3)
    assert equal_to_precision(mul(S({1: 1, 2: -1}, 5), b), one(3)).is_equal


def test_invert_errors():
    # a zero-to-precision series normalizes to val = prec + 1: empty window
    with pytest.raises(EmptyWindow):
        invert(S({}, 5))
    with pytest.raises(EmptyWindow):
        invert(S({9: 1}, 3))


def test_invert_binomial_examples():
    assert invert_binomial(1, 1, 4) == S({e: 1 for e in range(5)}, 4)
    assert invert_binomial(2, 0, 10) == S({0: -1}, 10)
    assert invert_binomial(1, -2, 6) == S({2: -1, 4: -1, 6: -1}, 6)
    with pytest.raises(PoleAtConstant):
        invert_binomial(1, 0, 5)
    assert invert_binomial(0, 3, 5) == one(5)


def test_sum_terms_divisor_coefficients():
    # q^n coefficient of sum q^k/(1-q^k) counts the divisors of n
    s = sum_terms(lambda k: mul(qpow(k), invert_binomial(1, k, 6)), 1, 6)
    assert coeff(s, 6) == 4
    assert coeff(s, 1) == 1 and coeff(s, 4) == 3
    # same with the term written as z q^k/(1 - z q^k) at z = 1
    z = QMonomial(mpq(1), 0)
    s2 = sum_terms(lambda k: mul(from_monomial(z.shift(k)),
                                 invert_binomial(z.c, z.s + k, 5)), 1, 5)
    assert [coeff(s2, n) for n in range(1, 6)] == [1, 2, 2, 3, 2]


def test_sum_terms_zero_and_divergence():
    assert sum_terms(lambda k: zero(8), 1, 8).is_zero()
    with pytest.raises(DivergentFormalSum):
        sum_terms(lambda k: qpow(0, 1, 10), 1, 10)


def test_coeff_contract():
    a = S({0: 1, 2: 2}, 3)
    assert coeff(a, 2) == 2
    assert coeff(a, 1) == 0  # absent within window means zero
    with pytest.raises(OutOfWindow):
        coeff(a, 5)


def test_equal_to_precision_examples():
    a = S({0: 1, 1: 1}, 10)
    assert equal_to_precision(a, a).status == "equal"
    b = S({0: 1, 1: 1, 9: 1}, 20)
    r = equal_to_precision(S({0: 1, 1: 1}, 20), b)
    assert (r.status, r.exponent, r.lhs, r.rhs) == ("mismatch", 9, 0, 1)
    # a known nonzero coefficient beyond the common window is inconclusive
    r = equal_to_precision(S({0: 1}, 3), S({0: 1, 9: 1}, 20))
    assert r.status == "insufficient_window"
    # two series that are zero to precision compare equal
    assert equal_to_precision(zero(5), zero(30)).is_equal


def test_window():
    a = S({0: 1, 4: 2}, 9)
    w = window(a, 3)
    assert w == S({0: 1}, 3)
    assert window(a, 20) is a


# --------------------------------------------------------------------------
# randomized algebraic laws

rationals = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 12))


@st.composite
def series(draw, min_val=-5, max_exp=10, invertible=False):
    exps = draw(st.lists(st.integers(min_val, max_exp), min_size=0, max_size=6))
    coeffs = {e: mpq(draw(rationals)) for e in exps}
    coeffs = {e: c for e, c in coeffs.items() if c != 0}
    if invertible and not coeffs:
        coeffs = {draw(st.integers(min_val, max_exp)): mpq(1)}
    prec = max(coeffs, default=0) + draw(st.integers(0, 8))
    return QLaurentSeries(coeffs, prec)


@settings(max_examples=200, deadline=None)
@given(series(invertible=True))
def test_mul_invert_is_one(a):
    b = invert(a)
    assert equal_to_precision(mul(a, b), one(b.prec + a.val)).is_equal


@settings(max_examples=100, deadline=None)
@given(series(), series(), series())
def test_ring_laws(a, b, c):
    assert mul(a, b) == mul(b, a)
    p = min(mul(mul(a, b), c).prec, mul(a, mul(b, c)).prec)
    assert equal_to_precision(window(mul(mul(a, b), c), p),
                              window(mul(a, mul(b, c)), p)).status != "mismatch"
    assert add(a, b) == add(b, a)
    lhs = mul(a, add(b, c))
    rhs = add(mul(a, b), mul(a, c))
    p = min(lhs.prec, rhs.prec)
    assert equal_to_precision(window(lhs, p), window(rhs, p)).status != "mismatch"


@settings(max_examples=50, deadline=None)
@given(st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5)),
       st.integers(-4, 4), st.integers(1, 20))
def test_invert_binomial_matches_invert(c, d, p):
    c = mpq(c)
    if c == 1 and d == 0:
        return
    direct = invert_binomial(c, d, p)
    if c == 0:
        assert direct == one(p)
        return
    embedded = QLaurentSeries({0: mpq(1), d: -c} if d != 0 else {0: 1 - c},
                              p + max(0, -2 * d))
    via_invert = invert(embedded)
    m = min(direct.prec, via_invert.prec)
    assert equal_to_precision(window(direct, m), window(via_invert, m)).is_equal


@settings(max_examples=50, deadline=None)
@given(series(invertible=True), st.integers(1, 10))
def test_precision_is_conservative(a, extra):
    # recomputing at a wider window never changes coefficients inside it
    lo = invert(a)
    hi = invert(QLaurentSeries(a.coeffs, a.prec + extra))
    assert equal_to_precision(window(hi, lo.prec), lo).is_equal
