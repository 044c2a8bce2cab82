"""q-analogue building blocks: frozen small cases and structural recurrences."""

import random
from fractions import Fraction

import pytest
from gmpy2 import mpq

from qdivisor.qobjects import (
    ChainSpec,
    PoleInRange,
    Q,
    chain_sum,
    chain_sum_naive,
    divisor_count,
    inv_pochhammer,
    lambert_term,
    odd_divisor_count,
    pochhammer,
    pochhammer_exact,
    q_harmonic,
    qbinomial,
    shifted_lambert,
    tri,
)
from qdivisor.series import (
    QLaurentSeries,
    QMonomial,
    add,
    coeff,
    equal_to_precision,
    from_monomial,
    invert_binomial,
    mul,
    one,
    qpow,
    window,
)


def S(coeffs, prec):
    return QLaurentSeries({e: mpq(c) for e, c in coeffs.items()}, prec)


def M(c, s=0):
    return QMonomial(mpq(c), s)


def assert_equal_series(a, b):
    r = equal_to_precision(a, b)
    assert r.is_equal, (r.status, r.exponent, r.lhs, r.rhs)


# --------------------------------------------------------------------------

def test_pochhammer_examples():
    assert pochhammer(Q, 3, 20).coeffs == \
        {0: 1, 1: -1, 2: -1, 4: 1, 5: 1, 6: -1}
    assert pochhammer(M(-7, 4), 0, 10) == one(10)
    p = pochhammer(M(1, -2), 2, 10)
    assert p.val == -3
    assert p.coeffs == {0: 1, -1: -1, -2: -1, -3: 1}  # (1-q^-2)(1-q^-1)


def test_pochhammer_vanishing_factor():
    # (1;q)_k contains the factor 1 - q^0 = 0, so the product is zero
    assert pochhammer_exact(M(1, 0), 3).is_zero()
    assert pochhammer_exact(M(1, -2), 4).is_zero()


def test_pochhammer_window_short_circuit():
    # high factors lie above the window and contribute only the constant 1
    a = pochhammer(Q, 500, 12)
    b = pochhammer(Q, 12, 12)
    assert_equal_series(a, b)


def test_qbinomial_examples():
    assert qbinomial(4, 2).coeffs == {0: 1, 1: 1, 2: 2, 3: 1, 4: 1}
    for n in range(6):
        assert qbinomial(n, 0).coeffs == {0: 1}
    assert qbinomial(3, 5).is_zero()
    assert qbinomial(3, -1).is_zero()


def test_qbinomial_pascal_recurrence():
    for n in range(1, 13):
        for k in range(0, n + 1):
            lhs = qbinomial(n, k)
            rhs = add(qbinomial(n - 1, k - 1),
                      mul(qpow(k), qbinomial(n - 1, k)))
            assert lhs.coeffs == rhs.coeffs, (n, k)


def test_sign_relation():
    # (q;q)_n = (-1)^m q^(m(m+1)/2) [n m] (q^-m;q)_m (q;q)_{n-m}
    for n in range(0, 9):
        for m in range(0, n + 1):
            lhs = pochhammer_exact(Q, n)
            rhs = mul(mul(qpow(tri(m), (-1) ** m), qbinomial(n, m)),
                      mul(pochhammer_exact(M(1, -m), m),
                          pochhammer_exact(Q, n - m)))
            assert lhs.coeffs == rhs.coeffs, (n, m)


def test_partial_fraction_relation():
    # z q^(k-1)/(1-z q^(k-1)) - q^k/(1-q^k)
    #   = -q^k (1-z/q) / ((1-z q^(k-1))(1-q^k))
    rng = random.Random(7)
    prec = 40
    for _ in range(20):
        z = M(Fraction(rng.randint(-9, 9) or 2, rng.randint(1, 5)),
              rng.randint(0, 3))
        k = rng.randint(1, 8)
        if z.c == 1 and z.s + k - 1 == 0:
            continue
        lhs = add(lambert_term(z.shift(k - 1), prec),
                  -lambert_term(M(1, k), prec))
        w = z.shift(k - 1)
        rhs = -mul(mul(qpow(k), add(one(), -from_monomial(z.shift(-1)))),
                   mul(invert_binomial(w.c, w.s, prec + max(0, -w.s)),
                       invert_binomial(1, k, prec)))
        assert_equal_series(window(lhs, prec), window(rhs, prec))


def test_q_harmonic_examples():
    assert q_harmonic(0, 10).is_zero()
    assert q_harmonic(2, 5) == S({1: 1, 2: 2, 3: 1, 4: 2, 5: 1}, 5)


def test_q_harmonic_counts_bounded_divisors():
    for n in range(0, 11):
        h = q_harmonic(n, 60)
        for j in range(1, 61):
            expect = sum(1 for d in range(1, j + 1) if j % d == 0 and d <= n)
            assert coeff(h, j) == expect, (n, j)


def test_shifted_lambert_examples():
    got = shifted_lambert(M(1, 1), 0, 1, 1, 4)  # z q/(1 - z q) at z = q
    assert got == S({2: 1, 4: 1}, 4)
    with pytest.raises(PoleInRange):
        shifted_lambert(M(1, 0), 1, 0, 5, 10)
    # excluding the pole index makes the same sum legal
    shifted_lambert(M(1, 0), 1, 0, 5, 10, exclude=1)
    # z = -q, k from 0 to infinity: sum -q^(k+1)/(1 + q^(k+1))
    got = shifted_lambert(M(-1, 1), 0, 0, None, 3)
    expect = S({1: -1, 3: -2}, 3)  # (-q+q^2-q^3) + (-q^2) + (-q^3)
    assert_equal_series(got, expect)


def test_chain_sum_single_level():
    # depth 1, n = 1, z = 2: -(q / ((1-2)(1-q))) = q/(1-q)
    got = chain_sum(ChainSpec("deep", 1, 1), M(2), 12)
    assert_equal_series(got, S({e: 1 for e in range(1, 13)}, 12))


def test_chain_tail_single_level():
    # depth 1, n = 2, z = q: difference of the two partial Lambert sums
    z = M(1, 1)
    got = chain_sum(ChainSpec("tail", 1, 2), z, 8)
    expect = add(lambert_term(z.shift(1 - 1), 8),  # k = 1..n-1 of zq^(k-1)/...
                 add(-lambert_term(M(1, 1), 8), -lambert_term(M(1, 2), 8)))
    assert_equal_series(got, expect)


def test_chain_pole_detection():
    with pytest.raises(PoleInRange):
        chain_sum(ChainSpec("deep", 2, 3), M(1, 1), 10)  # 1 - zq^(k-2) at k=1
    with pytest.raises(PoleInRange):
        chain_sum(ChainSpec("tail", 3, 4), M(1, 2), 10)


def test_chain_dp_equals_naive():
    zs = [M(2), M(Fraction(1, 2)), M(-1, 1), M(1, 2)]
    for kind in ("deep", "tail"):
        for m in range(1, 4):
            for n in range(1, 5):
                for z in zs:
                    spec = ChainSpec(kind, m, n)
                    try:
                        a = chain_sum(spec, z, 25)
                    except PoleInRange:
                        with pytest.raises(PoleInRange):
                            chain_sum_naive(spec, z, 25)
                        continue
                    b = chain_sum_naive(spec, z, 25)
                    assert_equal_series(window(a, 25), window(b, 25))


def test_chain_infinite_matches_large_finite():
    z = M(1, 3)
    for kind in ("deep", "tail"):
        inf = chain_sum(ChainSpec(kind, 2, None), z, 15)
        fin = chain_sum(ChainSpec(kind, 2, 40), z, 15)
        assert_equal_series(window(inf, 15), window(fin, 15))


def test_inv_pochhammer_pole():
    with pytest.raises(PoleInRange):
        inv_pochhammer(M(1, -2), 3, 10)
    got = inv_pochhammer(Q, 2, 8)
    check = mul(got, window(pochhammer_exact(Q, 2), 8))
    assert_equal_series(check, one(8))


def test_divisor_counts():
    assert divisor_count(1) == 1
    assert divisor_count(6) == 4
    assert divisor_count(36) == 9
    assert odd_divisor_count(6) == 2
    assert odd_divisor_count(1) == 1
    assert odd_divisor_count(96) == 2
    with pytest.raises(ValueError):
        divisor_count(0)
