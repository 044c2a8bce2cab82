"""q-analogue building blocks: Pochhammer products, Gaussian binomials,
q-harmonic numbers, shifted Lambert sums and nested chain sums.

Everything takes an explicit precision; nothing infers one.  Monomial
parameters (the letters z, v, x, y of the identities) are always substituted
as QMonomial values, never kept symbolic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from .series import (
    EXACT_PREC,
    DivergentFormalSum,
    QLaurentSeries,
    QMonomial,
    SeriesError,
    add,
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

Q = QMonomial(mpq(1), 1)  # the formal variable itself, as a monomial


class PoleInRange(SeriesError):
    """A summand denominator 1 - c q^d degenerates to zero at some index."""

    def __init__(self, k: int, detail: str = ""):
        self.k = k
        super().__init__(detail or f"zero denominator at index k={k}")


def tri(k: int) -> int:
    """The staircase exponent k(k+1)/2."""
    return k * (k + 1) // 2


@lru_cache(maxsize=None)
def pochhammer_exact(a: QMonomial, N: int) -> QLaurentSeries:
    """(a;q)_N = (1-a)(1-aq)...(1-aq^(N-1)) as an exact Laurent polynomial."""
    if N < 0:
        raise ValueError("pochhammer length must be nonnegative")
    if N == 0:
        return one()
    p = pochhammer_exact(a, N - 1)
    fc = {0: mpq(1)}
    e = a.s + N - 1
    fc[e] = fc.get(e, mpq(0)) - a.c  # e may be 0: the factor can vanish
    return mul(p, QLaurentSeries(fc, EXACT_PREC))


def pochhammer(a: QMonomial, N: int, prec: int) -> QLaurentSeries:
    """(a;q)_N windowed to prec.

    Factors lying wholly above the window (exponent s+j > prec with s >= 0)
    contribute only the constant 1 there and are skipped, which keeps N large
    cheap when only a fixed window is wanted.
    """
    if N < 0:
        raise ValueError("pochhammer length must be nonnegative")
    if a.s >= 0 and prec >= 0:
        N = min(N, max(0, prec - a.s + 1))
    return window(pochhammer_exact(a, N), prec)


@lru_cache(maxsize=None)
def qbinomial(n: int, k: int) -> QLaurentSeries:
    """Gaussian binomial [n k]: (q;q)_n / ((q;q)_k (q;q)_{n-k}), an exact
    polynomial for 0 <= k <= n and the zero series otherwise."""
    if k < 0 or k > n or n < 0:
        return zero(EXACT_PREC)
    if k == 0 or k == n:
        return one()
    deg = k * (n - k)
    num = pochhammer_exact(Q, n)
    den = mul(pochhammer_exact(Q, k), pochhammer_exact(Q, n - k))
    quot = mul(num, invert(window(den, deg)))
    return QLaurentSeries(quot.coeffs, EXACT_PREC)


@lru_cache(maxsize=None)
def inv_pochhammer(a: QMonomial, N: int, prec: int) -> QLaurentSeries:
    """1/(a;q)_N to precision prec (at least).

    Raises PoleInRange when some factor 1 - c q^(s+j) is the zero constant.
    """
    for j in range(N):
        if a.c == 1 and a.s + j == 0:
            raise PoleInRange(j, f"(a;q)_{N} contains the zero factor 1 - q^0")
    return invert(window(pochhammer_exact(a, N), prec))


@lru_cache(maxsize=None)
def inv_qfac(k: int, prec: int) -> QLaurentSeries:
    """1/(q;q)_k to precision prec."""
    return inv_pochhammer(Q, k, prec)


def lambert_term(w: QMonomial, prec: int) -> QLaurentSeries:
    """w/(1 - w) for a monomial w = c q^d, as a Laurent series."""
    if w.c == 1 and w.s == 0:
        raise PoleInRange(0, "w/(1-w) with w = 1")
    ib = invert_binomial(w.c, w.s, prec + max(0, -w.s))
    return mul(from_monomial(w), ib)


def q_harmonic(n: int, prec: int) -> QLaurentSeries:
    """H_n(q) = sum_{k=1..n} q^k/(1-q^k), truncated at prec."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = zero(prec)
    for k in range(1, n + 1):
        out = add(out, lambert_term(QMonomial(mpq(1), k), prec))
    return out


def shifted_lambert(z: QMonomial, m: int, k_from: int, k_to: int | None,
                    prec: int, exclude: int | None = None) -> QLaurentSeries:
    """sum over k of z q^(k-m) / (1 - z q^(k-m)).

    k runs from k_from to k_to inclusive (k_to=None means a formally
    convergent infinite sum), optionally skipping one excluded index.
    """
    if z.c == 1:
        k_pole = m - z.s
        if k_pole >= k_from and k_pole != exclude and (k_to is None or k_pole <= k_to):
            raise PoleInRange(k_pole)

    def term(k: int) -> QLaurentSeries:
        if k == exclude:
            return zero(prec)
        return lambert_term(z.shift(k - m), prec)

    if k_to is not None:
        out = zero(prec)
        for k in range(k_from, k_to + 1):
            out = add(out, term(k))
        return out
    return sum_terms(term, k_from, prec)


@dataclass(frozen=True)
class ChainSpec:
    """Shape of a nested chain sum over n >= k_1 >= k_2 >= ... >= 1.

    kind "deep" uses the level factor q^k / ((1 - z q^(k-i)) (1 - q^k)) at
    every level i = 1..depth and an overall leading minus.  kind "tail" uses
    q^k / ((1 - z q^(k-i-1)) (1 - q^k)) at levels 1..depth-1 and, at the
    deepest level, the difference of a z-Lambert partial sum (up to
    k_{depth-1} - 1) and a q-Lambert partial sum (up to k_{depth-1}); with
    depth 1 there are no outer levels and the difference is taken with the
    outer bound itself as upper index.
    """

    kind: str  # "deep" | "tail"
    depth: int
    upper: int | None  # None = infinite

    def __post_init__(self):
        if self.kind not in ("deep", "tail"):
            raise ValueError(f"unknown chain kind {self.kind!r}")
        if self.depth < 1:
            raise ValueError("chain depth must be positive")


def _check_chain_poles(spec: ChainSpec, z: QMonomial) -> None:
    if z.c != 1:
        return
    n = spec.upper
    if spec.kind == "deep":
        # factors 1 - z q^(k-i), 1 <= i <= depth, 1 <= k <= n
        for i in range(1, spec.depth + 1):
            k = i - z.s
            if k >= 1 and (n is None or k <= n):
                raise PoleInRange(k, f"1 - z q^({k}-{i}) vanishes")
    else:
        for i in range(1, spec.depth):
            k = i + 1 - z.s
            if k >= 1 and (n is None or k <= n):
                raise PoleInRange(k, f"1 - z q^({k}-{i}-1) vanishes")
        # innermost z-sum runs k = 1 .. k_prev - 1 <= n - 1
        k = spec.depth - z.s
        if k >= 1 and (n is None or k <= n - 1):
            raise PoleInRange(k, f"1 - z q^({k}-{spec.depth}) vanishes")


def chain_sum(spec: ChainSpec, z: QMonomial, prec: int) -> QLaurentSeries:
    """Evaluate a nested chain sum by prefix-sum dynamic programming.

    The work is O(depth * upper) series operations; the naive enumeration
    (chain_sum_naive) is kept only as a small-case oracle.
    """
    _check_chain_poles(spec, z)
    m = spec.depth

    if spec.kind == "deep":
        levels = m

        def factor(i: int, k: int) -> QLaurentSeries:
            w = z.shift(k - i)
            return mul(qpow(k), mul(invert_binomial(w.c, w.s, prec + max(0, -w.s)),
                                    invert_binomial(mpq(1), k, prec)))

        total = _chain_dp(levels, factor, None, spec.upper, prec)
        return -total

    levels = m - 1

    def factor(i: int, k: int) -> QLaurentSeries:
        w = z.shift(k - i - 1)
        return mul(qpow(k), mul(invert_binomial(w.c, w.s, prec + max(0, -w.s)),
                                invert_binomial(mpq(1), k, prec)))

    def g_increment(k: int) -> QLaurentSeries:
        # g(k) - g(k-1) where g(K) = sum_{j<K} z q^(j-m)/(1-z q^(j-m))
        #                          - sum_{j<=K} q^j/(1-q^j); g(0) = 0.
        inc = -lambert_term(QMonomial(mpq(1), k), prec)
        if k >= 2:
            inc = add(inc, lambert_term(z.shift(k - 1 - m), prec))
        return inc

    return _chain_dp(levels, factor, g_increment, spec.upper, prec)


def _chain_dp(levels: int, factor, g_increment, upper: int | None,
              prec: int, guard: int = 3) -> QLaurentSeries:
    """Shared DP loop: prefix sums from the innermost level outward."""
    prefix = [zero(prec) for _ in range(levels + 1)]  # prefix[j-1] = S_j(k)
    g = zero(prec)
    hard_cap = 10 * (prec + 50)
    consec = 0
    k = 0
    while True:
        k += 1
        if upper is not None and k > upper:
            break
        if upper is None and k > hard_cap:
            raise DivergentFormalSum(
                f"chain term valuations did not exceed {prec} after {hard_cap} terms")
        if g_increment is not None:
            g_inc = window(g_increment(k), prec)
            g = add(g, g_inc)
        if levels == 0:
            outer_delta = g_inc  # depth-1 tail: the result is g itself
        else:
            below = g if g_increment is not None else one()
            for j in range(levels, 0, -1):
                contrib = window(mul(factor(j, k), below), prec)
                prefix[j - 1] = add(prefix[j - 1], contrib)
                below = prefix[j - 1]
                if j == 1:
                    outer_delta = contrib
        if upper is None:
            grows = all(e > prec for e in outer_delta.coeffs)
            consec = consec + 1 if grows else 0
            if consec >= guard:
                break
    return g if levels == 0 else prefix[0]


def chain_sum_naive(spec: ChainSpec, z: QMonomial, prec: int) -> QLaurentSeries:
    """Direct enumeration of the nested sum; test oracle for small cases."""
    if spec.upper is None:
        raise ValueError("naive evaluation needs a finite upper bound")
    _check_chain_poles(spec, z)
    n, m = spec.upper, spec.depth

    if spec.kind == "deep":
        total = zero(prec)
        for tup in itertools.combinations_with_replacement(range(1, n + 1), m):
            ks = tuple(reversed(tup))  # k_1 >= k_2 >= ... >= k_m
            p = one()
            for i, k in enumerate(ks, start=1):
                w = z.shift(k - i)
                p = mul(p, mul(qpow(k),
                               mul(invert_binomial(w.c, w.s, prec + max(0, -w.s)),
                                   invert_binomial(mpq(1), k, prec))))
            total = add(total, p)
        return -total

    def g(K: int) -> QLaurentSeries:
        out = zero(prec)
        for j in range(1, K):
            out = add(out, lambert_term(z.shift(j - m), prec))
        for j in range(1, K + 1):
            out = add(out, -lambert_term(QMonomial(mpq(1), j), prec))
        return out

    if m == 1:
        return g(n)
    total = zero(prec)
    for tup in itertools.combinations_with_replacement(range(1, n + 1), m - 1):
        ks = tuple(reversed(tup))
        p = one()
        for i, k in enumerate(ks, start=1):
            w = z.shift(k - i - 1)
            p = mul(p, mul(qpow(k),
                           mul(invert_binomial(w.c, w.s, prec + max(0, -w.s)),
                               invert_binomial(mpq(1), k, prec))))
        total = add(total, mul(p, g(ks[-1])))
    return total


def divisor_count(n: int) -> int:
    """Number of positive divisors of n, by trial division up to sqrt(n)."""
    if n < 1:
        raise ValueError("n must be positive")
    count = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            count += 2 if d * d != n else 1
        d += 1
    return count


def odd_divisor_count(n: int) -> int:
    """Number of odd positive divisors of n."""
    while n % 2 == 0:
        n //= 2
    return divisor_count(n)
