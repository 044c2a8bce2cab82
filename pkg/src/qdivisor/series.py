"""Truncated formal Laurent series in q over exact rationals.

A series is stored as a sparse map exponent -> coefficient together with a
valuation lower bound ``val`` and a precision ``prec``: coefficients are exact
for every exponent e with val <= e <= prec and unknown (not zero!) beyond
prec.  ``val = prec + 1`` encodes "zero to the known precision".  All values
are immutable after construction and all operations are pure functions, so
series may be shared freely between threads or processes.

Coefficients are ``gmpy2.mpq`` rationals (arbitrary precision, always in
lowest terms with positive denominator).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Mapping

from gmpy2 import mpq

Rational = mpq

#: Sentinel precision for series that are exact Laurent polynomials (their
#: coefficients are known at every order).  Precision arithmetic caps here.
EXACT_PREC = 10 ** 9


class SeriesError(Exception):
    """Base class for series-kernel errors."""


class ZeroLeadingCoefficient(SeriesError):
    """invert() was given a series whose leading coefficient is zero."""


class EmptyWindow(SeriesError):
    """The series carries no known coefficients (prec < val)."""


class PoleAtConstant(SeriesError):
    """1/(1 - c q^0) with c = 1 has no Laurent expansion."""


class DivergentFormalSum(SeriesError):
    """Term valuations failed to grow past the requested precision."""


class OutOfWindow(SeriesError):
    """A coefficient beyond the precision window was requested."""


@dataclass(frozen=True)
class QMonomial:
    """A substitution value c * q^s with c a nonzero rational, s an integer."""

    c: Rational
    s: int

    def __post_init__(self):
        object.__setattr__(self, "c", mpq(self.c))
        if self.c == 0:
            raise ValueError("QMonomial coefficient must be nonzero")

    def shift(self, j: int) -> "QMonomial":
        """Multiply by q^j."""
        return QMonomial(self.c, self.s + j)

    def pow(self, k: int) -> "QMonomial":
        return QMonomial(self.c ** k, self.s * k)

    def reciprocal(self) -> "QMonomial":
        return QMonomial(1 / self.c, -self.s)

    def __mul__(self, other: "QMonomial") -> "QMonomial":
        return QMonomial(self.c * other.c, self.s + other.s)

    def q_over(self) -> "QMonomial":
        """The monomial q / self."""
        return QMonomial(1 / self.c, 1 - self.s)


class QLaurentSeries:
    """Immutable truncated Laurent series; see module docstring."""

    __slots__ = ("val", "prec", "coeffs")

    def __init__(self, coeffs: Mapping[int, Rational], prec: int):
        cleaned = {}
        for e, c in coeffs.items():
            if e > prec:
                continue
            c = mpq(c)
            if c != 0:
                cleaned[e] = c
        object.__setattr__(self, "coeffs", cleaned)
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "val", min(cleaned) if cleaned else prec + 1)

    def __setattr__(self, name, value):
        if hasattr(self, "coeffs") and name in self.__slots__:
            raise AttributeError("QLaurentSeries is immutable")
        object.__setattr__(self, name, value)

    def is_zero(self) -> bool:
        """True when all known coefficients vanish (up to prec)."""
        return not self.coeffs

    def items(self) -> Iterator[tuple[int, Rational]]:
        return iter(sorted(self.coeffs.items()))

    def scale(self, r) -> "QLaurentSeries":
        r = mpq(r)
        if r == 0:
            return QLaurentSeries({}, self.prec)
        return QLaurentSeries({e: c * r for e, c in self.coeffs.items()}, self.prec)

    def __neg__(self):
        return QLaurentSeries({e: -c for e, c in self.coeffs.items()}, self.prec)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, -other)

    def __mul__(self, other):
        return mul(self, other)

    def __eq__(self, other):
        # Structural equality (same window, same coefficients); use
        # equal_to_precision for the mathematical comparison.
        return (isinstance(other, QLaurentSeries)
                and self.prec == other.prec and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.prec, tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        if not self.coeffs:
            return f"<0 + O(q^{self.prec + 1})>"
        terms = " + ".join(f"({c})q^{e}" for e, c in sorted(self.coeffs.items()))
        tail = "" if self.prec >= EXACT_PREC else f" + O(q^{self.prec + 1})"
        return f"<{terms}{tail}>"


@dataclass(frozen=True)
class CompareResult:
    """Outcome of equal_to_precision: equal, mismatch or insufficient window."""

    status: str  # "equal" | "mismatch" | "insufficient_window"
    exponent: int | None = None
    lhs: Rational | None = None
    rhs: Rational | None = None

    @property
    def is_equal(self) -> bool:
        return self.status == "equal"


def zero(prec: int) -> QLaurentSeries:
    return QLaurentSeries({}, prec)


def one(prec: int = EXACT_PREC) -> QLaurentSeries:
    return QLaurentSeries({0: mpq(1)}, prec)


def from_monomial(m: QMonomial, prec: int = EXACT_PREC) -> QLaurentSeries:
    """Embed c*q^s as a series with the given precision."""
    return QLaurentSeries({m.s: m.c}, prec)


def qpow(e: int, coeff=1, prec: int = EXACT_PREC) -> QLaurentSeries:
    """Convenience: the series coeff * q^e (exact by default)."""
    return QLaurentSeries({e: mpq(coeff)}, prec)


def window(a: QLaurentSeries, prec: int) -> QLaurentSeries:
    """Restrict a series to precision prec (never extends knowledge)."""
    if prec >= a.prec:
        return a
    return QLaurentSeries({e: c for e, c in a.coeffs.items() if e <= prec}, prec)


def add(a: QLaurentSeries, b: QLaurentSeries) -> QLaurentSeries:
    prec = min(a.prec, b.prec)
    out = {e: c for e, c in a.coeffs.items() if e <= prec}
    for e, c in b.coeffs.items():
        if e > prec:
            continue
        s = out.get(e, 0) + c
        if s == 0:
            out.pop(e, None)
        else:
            out[e] = s
    return QLaurentSeries(out, prec)


def mul(a: QLaurentSeries, b: QLaurentSeries) -> QLaurentSeries:
    prec = min(a.prec + b.val, b.prec + a.val, EXACT_PREC)
    if a.is_zero() or b.is_zero():
        return QLaurentSeries({}, prec)
    if len(a.coeffs) > len(b.coeffs):
        a, b = b, a
    out: dict[int, Rational] = {}
    bitems = list(b.coeffs.items())
    for e1, c1 in a.coeffs.items():
        lim = prec - e1
        for e2, c2 in bitems:
            if e2 > lim:
                continue
            e = e1 + e2
            s = out.get(e, 0) + c1 * c2
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
    return QLaurentSeries(out, prec)


def invert(a: QLaurentSeries) -> QLaurentSeries:
    """Multiplicative inverse: b with a*b = 1 on the common window.

    Requires a nonzero leading coefficient at the (tight) valuation; the
    result has val = -v and prec = a.prec - 2v.
    """
    if a.prec < a.val:
        raise EmptyWindow("cannot invert a series with no known coefficients")
    if not a.coeffs:
        raise ZeroLeadingCoefficient("leading coefficient is zero")
    if a.prec >= EXACT_PREC:
        raise ValueError("window() an exact polynomial before inverting it")
    v = a.val
    n = a.prec - v  # number of known coefficient steps past the leading one
    acoef = [a.coeffs.get(v + j, mpq(0)) for j in range(n + 1)]
    lead = acoef[0]
    inv_lead = 1 / lead
    b = [inv_lead]
    for j in range(1, n + 1):
        s = mpq(0)
        for i in range(1, j + 1):
            ai = acoef[i]
            if ai:
                s += ai * b[j - i]
        b.append(-s * inv_lead)
    return QLaurentSeries({-v + j: b[j] for j in range(n + 1)}, a.prec - 2 * v)


def invert_binomial(c, d: int, prec: int) -> QLaurentSeries:
    """The Laurent expansion of 1/(1 - c q^d).

    For d > 0 this is the geometric series; for d = 0 the constant 1/(1-c);
    for d < 0 we rewrite 1 - c q^d = -c q^d (1 - q^(-d)/c), a genuine power
    series of valuation -d.
    """
    c = mpq(c)
    if c == 0:
        return one(prec)
    if d == 0:
        if c == 1:
            raise PoleAtConstant("1/(1 - q^0) has no expansion")
        return QLaurentSeries({0: 1 / (1 - c)}, prec)
    out: dict[int, Rational] = {}
    if d > 0:
        p = mpq(1)
        e = 0
        while e <= prec:
            out[e] = p
            p *= c
            e += d
    else:
        e = -d
        ci = 1 / c
        p = -ci
        exp = e
        while exp <= prec:
            out[exp] = p
            p *= ci
            exp += e
    return QLaurentSeries(out, prec)


def sum_terms(term: Callable[[int], QLaurentSeries], k0: int, prec: int,
              guard: int = 3, hard_cap: int | None = None) -> QLaurentSeries:
    """Sum term(k) for k >= k0, truncated at prec.

    Iteration stops once `guard` consecutive terms have true valuation above
    prec.  The term sequence must eventually have growing valuation; if the
    hard iteration cap is hit first, DivergentFormalSum is raised.
    """
    if hard_cap is None:
        hard_cap = 10 * (prec + 50)
    out: dict[int, Rational] = {}
    res_prec = prec
    consec = 0
    k = k0
    iterations = 0
    while consec < guard:
        iterations += 1
        if iterations > hard_cap:
            raise DivergentFormalSum(
                f"term valuations did not exceed {prec} after {hard_cap} terms")
        t = term(k)
        res_prec = min(res_prec, t.prec)
        contributed = False
        for e, c in t.coeffs.items():
            if e > prec:
                continue
            contributed = True
            s = out.get(e, 0) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        if contributed:
            consec = 0
        else:
            consec += 1
        k += 1
    return QLaurentSeries(out, res_prec)


def coeff(a: QLaurentSeries, e: int) -> Rational:
    """Exact coefficient of q^e; absent means zero, beyond prec means unknown."""
    if e > a.prec:
        raise OutOfWindow(f"coefficient of q^{e} unknown beyond precision {a.prec}")
    return a.coeffs.get(e, mpq(0))


def equal_to_precision(a: QLaurentSeries, b: QLaurentSeries) -> CompareResult:
    """Compare two series on their common window.

    Returns the first mismatching exponent if any; "insufficient_window" when
    one side has a known nonzero coefficient strictly above the common
    precision, so the agreement seen inside the window is not conclusive.
    Two series that are zero to their (common) precision compare equal.
    """
    min_prec = min(a.prec, b.prec)
    exps = sorted(set(a.coeffs) | set(b.coeffs))
    above = False
    for e in exps:
        if e > min_prec:
            above = True
            continue
        ca = a.coeffs.get(e, mpq(0))
        cb = b.coeffs.get(e, mpq(0))
        if ca != cb:
            return CompareResult("mismatch", e, ca, cb)
    if above:
        return CompareResult("insufficient_window")
    return CompareResult("equal")
