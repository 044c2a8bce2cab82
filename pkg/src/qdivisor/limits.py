"""Exact rational arithmetic for the q -> 1 world.

All checks here compare two closed-form rational expressions with zero
tolerance: classical harmonic numbers, alternating binomial sums, nested
chain sums evaluated by prefix-sum dynamic programming, and the
partial-fraction key identity for complete homogeneous symmetric sums.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial


class PoleAtX(Exception):
    """A rational parameter lands on a vanishing denominator factor."""

    def __init__(self, factor: str):
        self.factor = factor
        super().__init__(f"vanishing factor: {factor}")


class DuplicateValues(Exception):
    """The partial-fraction identity needs pairwise distinct values."""


def harmonic(n: int) -> Fraction:
    """H_n = sum_{k=1..n} 1/k."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def rising_factorial(x: Fraction, N: int) -> Fraction:
    """(x)_N = x (x+1) ... (x+N-1); the empty product is 1."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    out = Fraction(1)
    for j in range(N):
        out *= x + j
    return out


def check_trigo(n: int) -> bool:
    """sum (-1)^(k-1) C(n,k)/k == H_n."""
    if n < 1:
        raise ValueError("n must be positive")
    lhs = sum((Fraction((-1) ** (k - 1) * comb(n, k), k) for k in range(1, n + 1)),
              Fraction(0))
    return lhs == harmonic(n)


def _chain_dp(m: int, n: int, level_term) -> Fraction:
    """sum over 1 <= k_m <= ... <= k_1 <= n of prod_i level_term(i, k_i)."""
    prefix = [Fraction(0)] * (n + 1)
    for k in range(1, n + 1):
        prefix[k] = prefix[k - 1] + level_term(m, k)
    for i in range(m - 1, 0, -1):
        new = [Fraction(0)] * (n + 1)
        for k in range(1, n + 1):
            new[k] = new[k - 1] + level_term(i, k) * prefix[k]
        prefix = new
    return prefix[n]


def chain_sum_naive(m: int, n: int, level_term) -> Fraction:
    """Direct enumeration of the same chain; small-case oracle."""
    total = Fraction(0)
    for tup in itertools.combinations_with_replacement(range(1, n + 1), m):
        ks = tuple(reversed(tup))  # k_1 >= ... >= k_m
        p = Fraction(1)
        for i, k in enumerate(ks, start=1):
            p *= level_term(i, k)
        total += p
    return total


def check_dilcher_noq(m: int, n: int) -> bool:
    """Alternating sum of C(n,k)/k^m versus the 1/(k_1...k_m) chain sum."""
    if m < 1 or n < 1:
        raise ValueError("m, n must be positive")
    lhs = sum((Fraction((-1) ** (k - 1) * comb(n, k)) / k ** m
               for k in range(1, n + 1)), Fraction(0))
    rhs = _chain_dp(m, n, lambda i, k: Fraction(1, k))
    return lhs == rhs


def check_multi_noq(m: int, n: int, x: Fraction) -> bool:
    """The x-deformed generalization of the Dilcher chain identity.

    Raises PoleAtX when (x-m)_{m+n} vanishes or some chain factor
    x + k - i is zero.
    """
    if m < 1 or n < 1:
        raise ValueError("m, n must be positive")
    x = Fraction(x)
    if rising_factorial(x - m, m + n) == 0:
        raise PoleAtX(f"(x-m)_{m + n} = 0 at x = {x}")
    for i in range(1, m + 1):
        for k in range(1, n + 1):
            if x + k - i == 0:
                raise PoleAtX(f"x + {k} - {i} = 0 at x = {x}")
    denom = rising_factorial(x - m, m + n)
    lhs = sum((comb(n, k) * rising_factorial(m - x, k)
               * rising_factorial(x, n - k) / (denom * k ** m)
               for k in range(1, n + 1)), Fraction(0))
    rhs = -_chain_dp(m, n, lambda i, k: Fraction(1, k) / (x + k - i))
    return lhs == rhs


def check_multi_noq_xm_limit(m: int, n: int) -> bool:
    """The x -> m endpoint: a factorial identity, checked exactly."""
    if m < 1 or n < 1:
        raise ValueError("m, n must be positive")
    lhs = sum((Fraction(comb(n, k) * factorial(k - 1) * factorial(m + n - k - 1))
               / k ** m for k in range(1, n + 1)), Fraction(0))
    c = Fraction(factorial(m - 1) * factorial(m + n - 1))
    rhs = c * _chain_dp(m, n, lambda i, k: Fraction(1, k * (k + m - i)))
    return lhs == rhs


def check_dilch2_noq(m: int, n: int, x: Fraction) -> bool:
    """The tail-difference variant.

    The chain has m-1 free indices; with m = 1 the denominator product is
    empty and the inner difference is evaluated with upper index n.
    """
    if m < 1 or n < 1:
        raise ValueError("m, n must be positive")
    x = Fraction(x)
    if rising_factorial(x - m, m + n - 1) == 0:
        raise PoleAtX(f"(x-m)_{m + n - 1} = 0 at x = {x}")
    for j in range(1, n):
        if x + j - m == 0:
            raise PoleAtX(f"x + {j} - {m} = 0 at x = {x}")
    for i in range(1, m):
        for k in range(1, n + 1):
            if x + k - i - 1 == 0:
                raise PoleAtX(f"x + {k} - {i} - 1 = 0 at x = {x}")
    denom = rising_factorial(x - m, m + n - 1)
    lhs = sum((comb(n, k) * rising_factorial(m - x, k)
               * rising_factorial(x - 1, n - k) / (denom * k ** m)
               for k in range(1, n + 1)), Fraction(0))

    def g(K: int) -> Fraction:
        return (sum((Fraction(1) / (x + j - m) for j in range(1, K)), Fraction(0))
                - harmonic(K))

    if m == 1:
        rhs = g(n)
    else:
        # chain over k_1 >= ... >= k_{m-1}, innermost weighted by g(k_{m-1})
        prefix = [Fraction(0)] * (n + 1)
        for k in range(1, n + 1):
            prefix[k] = prefix[k - 1] + g(k) * Fraction(1, k) / (x + k - m)
        for i in range(m - 2, 0, -1):
            new = [Fraction(0)] * (n + 1)
            for k in range(1, n + 1):
                new[k] = new[k - 1] + Fraction(1, k) / (x + k - i - 1) * prefix[k]
            prefix = new
        rhs = prefix[n]
    return lhs == rhs


def complete_homogeneous(a: tuple[Fraction, ...], m: int) -> Fraction:
    """h_m(a_1..a_N) = sum over weakly increasing index tuples of products."""
    n = len(a)
    prefix = [Fraction(0)] * (n + 1)
    for k in range(1, n + 1):
        prefix[k] = prefix[k - 1] + Fraction(a[k - 1])
    for _ in range(m - 1):
        new = [Fraction(0)] * (n + 1)
        for k in range(1, n + 1):
            new[k] = new[k - 1] + Fraction(a[k - 1]) * prefix[k]
        prefix = new
    return prefix[n] if m >= 1 else Fraction(1)


def check_zeng_key(a, m: int) -> bool:
    """h_m(a) equals the partial-fraction sum over leading values a_k^m."""
    if m < 1:
        raise ValueError("m must be positive")
    a = tuple(Fraction(v) for v in a)
    if any(v == 0 for v in a):
        raise ValueError("values must be nonzero")
    if len(set(a)) != len(a):
        raise DuplicateValues("values must be pairwise distinct")
    lhs = complete_homogeneous(a, m)
    rhs = Fraction(0)
    for k, ak in enumerate(a):
        p = Fraction(1)
        for j, aj in enumerate(a):
            if j != k:
                p /= 1 - aj / ak
        rhs += p * ak ** m
    return lhs == rhs
