"""Declarative registry of the q-series identities, with parameter
validation, side evaluators and a single verify() entry point.

Each entry names its parameters, knows how to evaluate both sides as
truncated Laurent series at a requested order, and can pre-check the
parameter constraints (integer ranges, pole freedom of every inverted
factor, and valuation growth for the formally infinite sums).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from gmpy2 import mpq

from .literals import render_monomial
from .qobjects import (
    ChainSpec,
    PoleInRange,
    Q,
    chain_sum,
    inv_pochhammer,
    inv_qfac,
    lambert_term,
    pochhammer_exact,
    q_harmonic,
    qbinomial,
    shifted_lambert,
    tri,
)
from .series import (
    PoleAtConstant,
    QLaurentSeries,
    QMonomial,
    SeriesError,
    add,
    equal_to_precision,
    from_monomial,
    invert,
    invert_binomial,
    mul,
    qpow,
    sum_terms,
    window,
    zero,
)

ONE = QMonomial(mpq(1), 0)

DEFAULT_ORDER = 30

#: Extra orders the verdict must clear above the highest side valuation.
WINDOW_MARGIN = 10


class UnknownIdentity(Exception):
    pass


@dataclass(frozen=True)
class IdentityDescriptor:
    id: str
    params: tuple[tuple[str, str], ...]  # (name, "int" | "monomial")
    description: str
    infinite: bool = False
    valuation_note: str | None = None
    lhs: Callable = field(repr=False, compare=False, default=None)
    rhs: Callable = field(repr=False, compare=False, default=None)
    validate: Callable = field(repr=False, compare=False, default=None)

    def signature(self) -> str:
        return ", ".join(f"{n}: {k}" for n, k in self.params) or "(none)"


@dataclass
class VerificationReport:
    identity: str
    params: str
    order: int
    status: str  # "pass" | "fail" | "skipped"
    first_mismatch: tuple[int, str, str] | None = None
    skip_reason: str | None = None
    elapsed_ms: float = 0.0

    def to_row(self, keep_elapsed: bool = True) -> dict:
        fm = None
        if self.first_mismatch is not None:
            e, a, b = self.first_mismatch
            fm = {"exponent": e, "lhs": a, "rhs": b}
        return {
            "identity": self.identity,
            "params": self.params,
            "status": self.status,
            "first_mismatch": fm,
            "skip_reason": self.skip_reason,
            "elapsed_ms": round(self.elapsed_ms, 3) if keep_elapsed else 0,
        }


_REGISTRY: dict[str, IdentityDescriptor] = {}


def _register(id, params, description, lhs, rhs, validate=None, infinite=False, note=None):
    _REGISTRY[id] = IdentityDescriptor(
        id=id, params=tuple(params), description=description, infinite=infinite,
        valuation_note=note, lhs=lhs, rhs=rhs, validate=validate)


def _get(id: str) -> IdentityDescriptor:
    try:
        return _REGISTRY[id]
    except KeyError:
        raise UnknownIdentity(id) from None


# ---------------------------------------------------------------------------
# small shared pieces

def _sign(k: int) -> int:
    """(-1)^(k-1)."""
    return 1 if k % 2 == 1 else -1


def _ib(c, d: int, prec: int) -> QLaurentSeries:
    """1/(1 - c q^d) with enough slack for negative d."""
    return invert_binomial(mpq(c), d, prec + max(0, -d))


def _pow(a: QLaurentSeries, m: int) -> QLaurentSeries:
    out = a
    for _ in range(m - 1):
        out = mul(out, a)
    return out


def _prod(*factors: QLaurentSeries) -> QLaurentSeries:
    out = factors[0]
    for f in factors[1:]:
        out = mul(out, f)
    return out


def _sum(terms) -> QLaurentSeries:
    out = None
    for t in terms:
        out = t if out is None else add(out, t)
    if out is None:
        raise ValueError("empty sum needs an explicit zero")
    return out


def _poch_zero(a: QMonomial, N: int, name: str) -> str | None:
    """Violation text when an inverted (a;q)_N would contain a zero factor."""
    if a.c == 1 and 0 <= -a.s < N:
        return f"({name};q)_{N} contains the zero factor 1 - q^0"
    return None


def _lambert_pole(z: QMonomial, m: int, k_from: int, k_to: int | None,
                  name: str, exclude: int | None = None) -> str | None:
    if z.c != 1:
        return None
    k = m - z.s
    if k >= k_from and k != exclude and (k_to is None or k <= k_to):
        return f"1 - {name} q^({k}-{m}) vanishes at k={k}"
    return None


def _needs_positive_shift(z: QMonomial) -> str | None:
    if z.s < 1:
        return "infinite sum requires s >= 1 in z = c q^s"
    return None


# ---------------------------------------------------------------------------
# catalog entries

def _lhs_u81(p, prec):
    def term(k):
        return _prod(qpow(tri(k), _sign(k)), inv_qfac(k, prec), _ib(1, k, prec))
    return sum_terms(term, 1, prec)


def _rhs_u81(p, prec):
    return shifted_lambert(ONE, 0, 1, None, prec)


_register(
    "u81", [], "Uchimura's Lambert-series identity", _lhs_u81, _rhs_u81,
    infinite=True, note="term valuation k(k+1)/2 grows quadratically")


def _lhs_van_hamme(p, prec):
    n = p["n"]
    return _sum(_prod(window(qbinomial(n, k), prec + tri(k)),
                      qpow(tri(k), _sign(k)), _ib(1, k, prec))
                for k in range(1, n + 1)) if n else zero(prec)


def _rhs_van_hamme(p, prec):
    return q_harmonic(p["n"], prec)


_register(
    "van_hamme", [("n", "int")], "finite form of Uchimura's identity",
    _lhs_van_hamme, _rhs_van_hamme,
    validate=lambda p: None if p["n"] >= 0 else "n must be >= 0")


def _lhs_uchimura_m(p, prec):
    n, m = p["n"], p["m"]
    if n == 0:
        return zero(prec)
    return _sum(_prod(qbinomial(n, k), qpow(tri(k), _sign(k)), _ib(1, k + m, prec))
                for k in range(1, n + 1))


def _rhs_uchimura_m(p, prec):
    n, m = p["n"], p["m"]
    if n == 0:
        return zero(prec)
    return _sum(_prod(lambert_term(QMonomial(1, k), prec),
                      invert(window(qbinomial(k + m, m), prec)))
                for k in range(1, n + 1))


_register(
    "uchimura_m", [("n", "int"), ("m", "int")],
    "Uchimura's shifted-denominator generalization",
    _lhs_uchimura_m, _rhs_uchimura_m,
    validate=lambda p: None if p["n"] >= 0 and p["m"] >= 0 else "need n, m >= 0")


def _lhs_dilcher(p, prec):
    n, m = p["n"], p["m"]
    return _sum(_prod(qbinomial(n, k), qpow(tri(k - 1) + k * m, _sign(k)),
                      _pow(_ib(1, k, prec), m))
                for k in range(1, n + 1))


def _rhs_dilcher(p, prec):
    n, m = p["n"], p["m"]
    from .qobjects import _chain_dp
    return _chain_dp(m, lambda i, k: lambert_term(QMonomial(1, k), prec),
                     None, n, prec)


_register(
    "dilcher", [("n", "int"), ("m", "int")],
    "Dilcher's multiple-series generalization",
    _lhs_dilcher, _rhs_dilcher,
    validate=lambda p: None if p["n"] >= 1 and p["m"] >= 1 else "need n, m >= 1")


def _lhs_prodinger(p, prec):
    n, m = p["n"], p["m"]
    terms = [_prod(qbinomial(n, k), qpow(tri(k), _sign(k)), _ib(1, k - m, prec))
             for k in range(0, n + 1) if k != m]
    return _sum(terms) if terms else zero(prec)


def _rhs_prodinger(p, prec):
    n, m = p["n"], p["m"]
    lam = shifted_lambert(ONE, m, 0, n, prec, exclude=m)
    return _prod(qpow(tri(m), (-1) ** m), qbinomial(n, m), lam)


def _val_prodinger(p):
    n, m = p["n"], p["m"]
    if n < 0:
        return "n must be >= 0"
    if not 0 <= m <= n:
        return "m exceeds n" if m > n else "m must be >= 0"
    return None


_register(
    "prodinger", [("n", "int"), ("m", "int")],
    "Prodinger's excluded-index identity", _lhs_prodinger, _rhs_prodinger,
    validate=_val_prodinger)


def _lhs_thm1(p, prec):
    n, l, m, z = p["n"], p["l"], p["m"], p["z"]
    qz = z.q_over()
    terms = [_prod(qbinomial(n, k), pochhammer_exact(qz, k),
                   pochhammer_exact(z.shift(-l), n - k),
                   from_monomial(z.pow(k)), _ib(1, k - m, prec))
             for k in range(0, n + 1) if k != m]
    return _sum(terms) if terms else zero(prec)


def _rhs_thm1(p, prec):
    n, l, m, z = p["n"], p["l"], p["m"], p["z"]
    diff = add(shifted_lambert(z, m, 0, n - l - 1, prec),
               -shifted_lambert(ONE, m, 0, n, prec, exclude=m))
    return _prod(qpow(tri(m), (-1) ** m), qbinomial(n, m),
                 pochhammer_exact(z.shift(-l), l),
                 pochhammer_exact(z.shift(-m), n - l), diff)


def _val_thm1(p):
    n, l, m, z = p["n"], p["l"], p["m"], p["z"]
    if n < 0:
        return "n must be >= 0"
    if m > n:
        return "m exceeds n"
    if l > n:
        return "l exceeds n"
    if m < 0 or l < 0:
        return "l, m must be >= 0"
    return _lambert_pole(z, m, 0, n - l - 1, "z")


_register(
    "thm1", [("n", "int"), ("l", "int"), ("m", "int"), ("z", "monomial")],
    "two-parameter generalization of Prodinger's identity",
    _lhs_thm1, _rhs_thm1, validate=_val_thm1)


def _poch_ratio(z: QMonomial, m: int, k: int, N: int, prec: int):
    """(q^m/z;q)_k / (zq^-m;q)_N as (exact numerator, inverse-series) pair.

    At z = q^m both contain the vanishing factor 1 - q^0 (for k, N >= 1),
    which cancels in the limit z -> q^m: (1 - q^m/z)/(1 - zq^-m) -> -1, so
    the ratio is -(q;q)_{k-1} / (q;q)_{N-1}; the identities remain valid
    there and the evaluator must not divide by the zero product.
    """
    if z.c == 1 and z.s == m and N >= 1:
        return -pochhammer_exact(Q, k - 1), inv_qfac(N - 1, prec)
    return (pochhammer_exact(z.reciprocal().shift(m), k),
            inv_pochhammer(z.shift(-m), N, prec))


def _val_poch_ratio(z: QMonomial, m: int, N: int) -> str | None:
    """Pole check for the ratio above: a zero factor in (zq^-m;q)_N is fatal
    unless it is the cancelling one at z = q^m."""
    if z.c == 1 and z.s != m and 0 <= m - z.s < N:
        return f"(zq^-{m};q)_{N} contains the zero factor 1 - q^0"
    return None


def _lhs_thm2(p, prec):
    m, n, z = p["m"], p["n"], p["z"]
    return _sum(
        mul(_prod(qbinomial(n, k), num, pochhammer_exact(z, n - k),
                  from_monomial(z.pow(k)), _pow(_ib(1, k, prec), m)), den)
        for k in range(1, n + 1)
        for num, den in (_poch_ratio(z, m, k, m + n, prec),))


def _rhs_thm2(p, prec):
    return chain_sum(ChainSpec("deep", p["m"], p["n"]), p["z"], prec)


def _val_thm2(p):
    m, n, z = p["m"], p["n"], p["z"]
    if m < 1 or n < 1:
        return "need m, n >= 1"
    return _val_poch_ratio(z, m, m + n)


_register(
    "thm2", [("m", "int"), ("n", "int"), ("z", "monomial")],
    "z-deformed Dilcher identity (deep chain)", _lhs_thm2, _rhs_thm2,
    validate=_val_thm2)


def _thm3_half(nn, mm, z, v, prec):
    if nn == 0:
        return zero(prec)
    qz = z.q_over()
    return _sum(_prod(pochhammer_exact(qz, k), pochhammer_exact(v.shift(mm), k),
                      pochhammer_exact(z, nn - k), pochhammer_exact(z, mm),
                      from_monomial(z.pow(k)), inv_qfac(k, prec),
                      inv_pochhammer(v, k, prec), inv_qfac(nn - k, prec),
                      inv_pochhammer(QMonomial(1, k), mm + 1, prec))
                for k in range(1, nn + 1))


def _sym_rhs(m, n, z, prec):
    s_m = (_sum(_prod(qpow(k), _ib(z.c, z.s + k - 1, prec), _ib(1, k, prec))
                for k in range(1, m + 1)) if m else zero(prec))
    s_n = (_sum(_prod(qpow(k), _ib(z.c, z.s + k - 1, prec), _ib(1, k, prec))
                for k in range(1, n + 1)) if n else zero(prec))
    return _prod(pochhammer_exact(z.shift(-1), 1), pochhammer_exact(z, m),
                 pochhammer_exact(z, n), inv_qfac(m, prec), inv_qfac(n, prec),
                 add(s_m, -s_n))


def _lhs_thm3(p, prec):
    m, n, z, v = p["m"], p["n"], p["z"], p["v"]
    return add(_thm3_half(n, m, z, v, prec), -_thm3_half(m, n, z, v, prec))


def _rhs_thm3(p, prec):
    return _sym_rhs(p["m"], p["n"], p["z"], prec)


def _val_sym_core(m, n, z):
    if m < 0 or n < 0:
        return "need m, n >= 0"
    if z.c == 1 and 0 <= -z.s < max(m, n):
        return "1 - z q^(k-1) vanishes inside the symmetric sum"
    return None


def _val_thm3(p):
    err = _val_sym_core(p["m"], p["n"], p["z"])
    if err:
        return err
    return _poch_zero(p["v"], max(p["m"], p["n"]), "v")


_register(
    "thm3", [("m", "int"), ("n", "int"), ("z", "monomial"), ("v", "monomial")],
    "symmetric generalization of the finite form",
    _lhs_thm3, _rhs_thm3, validate=_val_thm3)


def _lhs_lagrange(p, prec):
    n, l, x, z = p["n"], p["l"], p["x"], p["z"]
    qz = z.q_over()
    return _sum(_prod(qbinomial(n, k), pochhammer_exact(qz, k),
                      pochhammer_exact(z.shift(-l), n - k),
                      from_monomial(z.pow(k)), _ib(x.c, x.s + k, prec))
                for k in range(0, n + 1))


def _rhs_lagrange(p, prec):
    n, l, x, z = p["n"], p["l"], p["x"], p["z"]
    return _prod(pochhammer_exact(Q, n), pochhammer_exact(x * z, n - l),
                 pochhammer_exact(z.shift(-l), l),
                 inv_pochhammer(x, n + 1, prec))


def _val_lagrange(p):
    n, l, x = p["n"], p["l"], p["x"]
    if n < 0:
        return "n must be >= 0"
    if not 0 <= l <= n:
        return "need 0 <= l <= n"
    if x.c == 1 and 0 <= -x.s <= n:
        return "1 - x q^k vanishes for some 0 <= k <= n"
    return None


_register(
    "lagrange_lemma",
    [("n", "int"), ("l", "int"), ("x", "monomial"), ("z", "monomial")],
    "Lagrange-interpolation evaluation of the kernel sum",
    _lhs_lagrange, _rhs_lagrange, validate=_val_lagrange)


def _lhs_cor_ourdiv(p, prec):
    n, m, z = p["n"], p["m"], p["z"]
    qz = z.q_over()
    terms = [_prod(qbinomial(n, k), pochhammer_exact(qz, k),
                   pochhammer_exact(z, n - k), from_monomial(z.pow(k)),
                   _ib(1, k - m, prec))
             for k in range(0, n + 1) if k != m]
    return _sum(terms) if terms else zero(prec)


def _rhs_cor_ourdiv(p, prec):
    n, m, z = p["n"], p["m"], p["z"]
    diff = add(shifted_lambert(z, m, 0, n - 1, prec),
               -shifted_lambert(ONE, m, 0, n, prec, exclude=m))
    return _prod(qpow(tri(m), (-1) ** m), qbinomial(n, m),
                 pochhammer_exact(z.shift(-m), n), diff)


def _val_cor_ourdiv(p):
    n, m, z = p["n"], p["m"], p["z"]
    if n < 0:
        return "n must be >= 0"
    if not 0 <= m <= n:
        return "m exceeds n" if m > n else "m must be >= 0"
    return _lambert_pole(z, m, 0, n - 1, "z")


_register(
    "cor_ourdiv", [("n", "int"), ("m", "int"), ("z", "monomial")],
    "l = 0 specialization of the two-parameter identity",
    _lhs_cor_ourdiv, _rhs_cor_ourdiv, validate=_val_cor_ourdiv)


def _lhs_cor_ourinfty(p, prec):
    m, z = p["m"], p["z"]
    qz = z.q_over()

    def term(k):
        if k == m:
            return zero(prec)
        return _prod(pochhammer_exact(qz, k), from_monomial(z.pow(k)),
                     inv_qfac(k, prec), _ib(1, k - m, prec))

    return sum_terms(term, 0, prec)


def _rhs_cor_ourinfty(p, prec):
    m, z = p["m"], p["z"]
    diff = add(shifted_lambert(z, m, 0, None, prec),
               -shifted_lambert(ONE, m, 0, None, prec, exclude=m))
    return _prod(qpow(tri(m), (-1) ** m), pochhammer_exact(z.shift(-m), m),
                 inv_qfac(m, prec), diff)


def _val_cor_ourinfty(p):
    m, z = p["m"], p["z"]
    if m < 0:
        return "m must be >= 0"
    err = _needs_positive_shift(z)
    if err:
        return err
    return _lambert_pole(z, m, 0, None, "z")


_register(
    "cor_ourinfty", [("m", "int"), ("z", "monomial")],
    "n -> infinity limit of the l = 0 case", _lhs_cor_ourinfty,
    _rhs_cor_ourinfty, validate=_val_cor_ourinfty, infinite=True,
    note="term valuation grows like k*s with s >= 1")


def _lhs_cor_ourinfty2(p, prec):
    z = p["z"]
    qz = z.q_over()

    def term(k):
        return _prod(pochhammer_exact(qz, k), from_monomial(z.pow(k)),
                     inv_qfac(k, prec), _ib(1, k, prec))

    return sum_terms(term, 1, prec)


def _rhs_cor_ourinfty2(p, prec):
    z = p["z"]
    return add(shifted_lambert(z, 0, 0, None, prec),
               -shifted_lambert(ONE, 0, 1, None, prec))


_register(
    "cor_ourinfty2", [("z", "monomial")], "m = 0 case of the infinite form",
    _lhs_cor_ourinfty2, _rhs_cor_ourinfty2,
    validate=lambda p: _needs_positive_shift(p["z"]), infinite=True,
    note="term valuation grows like k*s with s >= 1")


def _lhs_corteel_lovejoy(p, prec):
    minus_one = QMonomial(mpq(-1), 0)

    def term(k):
        return _prod(pochhammer_exact(minus_one, k),
                     from_monomial(QMonomial(mpq(-1) ** k, k)),
                     inv_qfac(k, prec), _ib(1, k, prec))

    return sum_terms(term, 1, prec)


def _rhs_corteel_lovejoy(p, prec):
    def term(k):
        return mul(qpow(k, -2), _ib(1, 2 * k, prec))

    return sum_terms(term, 1, prec)


_register(
    "corteel_lovejoy", [], "the z = -q overpartition case",
    _lhs_corteel_lovejoy, _rhs_corteel_lovejoy, infinite=True,
    note="coefficients count odd divisors (times -2)")


def _lhs_cor_our(p, prec):
    n, l, z = p["n"], p["l"], p["z"]
    if n == 0:
        return zero(prec)
    qz = z.q_over()
    return _sum(_prod(qbinomial(n, k), pochhammer_exact(qz, k),
                      pochhammer_exact(z.shift(-l), n - k),
                      from_monomial(z.pow(k)), _ib(1, k, prec))
                for k in range(1, n + 1))


def _rhs_cor_our(p, prec):
    n, l, z = p["n"], p["l"], p["z"]
    diff = add(shifted_lambert(z, 1, 1, n - l, prec), -q_harmonic(n, prec))
    return mul(pochhammer_exact(z.shift(-l), n), diff)


def _val_cor_our(p):
    n, l, z = p["n"], p["l"], p["z"]
    if n < 0:
        return "n must be >= 0"
    if not 0 <= l <= n:
        return "need 0 <= l <= n"
    return _lambert_pole(z, 1, 1, n - l, "z")


_register(
    "cor_our", [("n", "int"), ("l", "int"), ("z", "monomial")],
    "m = 0 specialization", _lhs_cor_our, _rhs_cor_our, validate=_val_cor_our)


def _lhs_cor1(p, prec):
    return _lhs_cor_our({"n": p["n"], "l": 0, "z": p["z"]}, prec)


def _rhs_cor1(p, prec):
    n, z = p["n"], p["z"]
    body = (_sum(_prod(qpow(k), _ib(z.c, z.s + k - 1, prec), _ib(1, k, prec))
                 for k in range(1, n + 1)) if n else zero(prec))
    return -mul(pochhammer_exact(z.shift(-1), n + 1), body)


def _val_cor1(p):
    n, z = p["n"], p["z"]
    if n < 0:
        return "n must be >= 0"
    if z.c == 1 and 0 <= -z.s < n:
        return "1 - z q^(k-1) vanishes for some 1 <= k <= n"
    return None


_register(
    "cor1", [("n", "int"), ("z", "monomial")],
    "single partial-fraction form (base of the deep chain)",
    _lhs_cor1, _rhs_cor1, validate=_val_cor1)


def _lhs_thm4(p, prec):
    m, n, z = p["m"], p["n"], p["z"]
    return _sum(
        mul(_prod(qbinomial(n, k), num, pochhammer_exact(z.shift(-1), n - k),
                  from_monomial(z.pow(k)), _pow(_ib(1, k, prec), m)), den)
        for k in range(1, n + 1)
        for num, den in (_poch_ratio(z, m, k, n + m - 1, prec),))


def _rhs_thm4(p, prec):
    return chain_sum(ChainSpec("tail", p["m"], p["n"]), p["z"], prec)


def _val_thm4(p):
    m, n, z = p["m"], p["n"], p["z"]
    if m < 1 or n < 1:
        return "need m, n >= 1"
    return _val_poch_ratio(z, m, n + m - 1)


_register(
    "thm4", [("m", "int"), ("n", "int"), ("z", "monomial")],
    "z-deformed identity with tail difference", _lhs_thm4, _rhs_thm4,
    validate=_val_thm4)


def _lhs_thm2_inf(p, prec):
    m, z = p["m"], p["z"]

    def term(k):
        num, den = _poch_ratio(z, m, k, m, prec)
        return mul(_prod(num, from_monomial(z.pow(k)), inv_qfac(k, prec),
                         _pow(_ib(1, k, prec), m)), den)

    return sum_terms(term, 1, prec)


def _rhs_thm2_inf(p, prec):
    return chain_sum(ChainSpec("deep", p["m"], None), p["z"], prec)


def _val_thm2_inf(p):
    m, z = p["m"], p["z"]
    if m < 1:
        return "m must be >= 1"
    err = _needs_positive_shift(z)
    if err:
        return err
    if z.c == 1 and z.s < m:
        return "z = q^s with s < m hits a zero chain factor"
    return _val_poch_ratio(z, m, m)


_register(
    "thm2_inf", [("m", "int"), ("z", "monomial")],
    "n -> infinity limit of the deep chain", _lhs_thm2_inf, _rhs_thm2_inf,
    validate=_val_thm2_inf, infinite=True,
    note="hypergeometric-type term valuation grows like k*s")


def _lhs_thm4_inf(p, prec):
    m, z = p["m"], p["z"]

    def term(k):
        num, den = _poch_ratio(z, m, k, m - 1, prec)
        return mul(_prod(num, from_monomial(z.pow(k)), inv_qfac(k, prec),
                         _pow(_ib(1, k, prec), m)), den)

    return sum_terms(term, 1, prec)


def _rhs_thm4_inf(p, prec):
    return chain_sum(ChainSpec("tail", p["m"], None), p["z"], prec)


def _val_thm4_inf(p):
    m, z = p["m"], p["z"]
    if m < 1:
        return "m must be >= 1"
    err = _needs_positive_shift(z)
    if err:
        return err
    if z.c == 1 and z.s < m:
        return "z = q^s with s < m hits a zero chain factor"
    return _val_poch_ratio(z, m, m - 1)


_register(
    "thm4_inf", [("m", "int"), ("z", "monomial")],
    "n -> infinity limit of the tail chain", _lhs_thm4_inf, _rhs_thm4_inf,
    validate=_val_thm4_inf, infinite=True,
    note="hypergeometric-type term valuation grows like k*s")


def _guo_zeng_side(nn, mm, x, y, v, z, prec):
    xyz = x * y * z
    pref = _prod(pochhammer_exact(x * z, mm), pochhammer_exact(y * z, mm),
                 inv_qfac(mm, prec), inv_pochhammer(xyz, mm, prec))
    body = _sum(_prod(pochhammer_exact(x, k), pochhammer_exact(y, k),
                      pochhammer_exact(v.shift(mm), k),
                      pochhammer_exact(z, nn - k), from_monomial(z.pow(k)),
                      inv_qfac(k, prec), inv_pochhammer(v, k, prec),
                      inv_pochhammer(xyz.shift(mm), k, prec),
                      inv_qfac(nn - k, prec))
                for k in range(0, nn + 1))
    return mul(pref, body)


def _lhs_guo_zeng(p, prec):
    return _guo_zeng_side(p["n"], p["m"], p["x"], p["y"], p["v"], p["z"], prec)


def _rhs_guo_zeng(p, prec):
    return _guo_zeng_side(p["m"], p["n"], p["x"], p["y"], p["v"], p["z"], prec)


def _val_guo_zeng(p):
    m, n = p["m"], p["n"]
    if m < 0 or n < 0:
        return "need m, n >= 0"
    x, y, v, z = p["x"], p["y"], p["v"], p["z"]
    xyz = x * y * z
    top = max(m, n)
    for mono, N, name in ((xyz, top, "xyz"), (v, top, "v"),
                          (xyz.shift(m), n, "xyz q^m"), (xyz.shift(n), m, "xyz q^n")):
        err = _poch_zero(mono, N, name)
        if err:
            return err
    return None


_register(
    "guo_zeng",
    [("m", "int"), ("n", "int"), ("x", "monomial"), ("y", "monomial"),
     ("v", "monomial"), ("z", "monomial")],
    "symmetric transformation behind the symmetric theorem",
    _lhs_guo_zeng, _rhs_guo_zeng, validate=_val_guo_zeng)


def _newsym_half(nn, mm, x, v, z, prec):
    if nn == 0:
        return zero(prec)
    qz = z.q_over()
    return _sum(_prod(pochhammer_exact(qz, k), pochhammer_exact(v.shift(mm), k),
                      pochhammer_exact(z, nn - k), pochhammer_exact(x * z, mm),
                      from_monomial(z.pow(k)), inv_qfac(k, prec),
                      inv_pochhammer(v, k, prec), inv_qfac(nn - k, prec),
                      inv_pochhammer(x.shift(k), mm + 1, prec))
                for k in range(1, nn + 1))


def _lhs_newsym(p, prec):
    m, n, x, v, z = p["m"], p["n"], p["x"], p["v"], p["z"]
    return add(_newsym_half(n, m, x, v, z, prec),
               -_newsym_half(m, n, x, v, z, prec))


def _rhs_newsym(p, prec):
    m, n, x, z = p["m"], p["n"], p["x"], p["z"]
    xq = x.shift(1)
    num = add(_prod(pochhammer_exact(z, m), pochhammer_exact(Q, n),
                    pochhammer_exact(x * z, n), pochhammer_exact(xq, m)),
              -_prod(pochhammer_exact(z, n), pochhammer_exact(Q, m),
                     pochhammer_exact(x * z, m), pochhammer_exact(xq, n)))
    return _prod(num, inv_qfac(m, prec), inv_qfac(n, prec),
                 inv_pochhammer(xq, m, prec), inv_pochhammer(xq, n, prec),
                 _ib(x.c, x.s, prec))


def _val_newsym(p):
    m, n, x, v = p["m"], p["n"], p["x"], p["v"]
    if m < 0 or n < 0:
        return "need m, n >= 0"
    if x.c == 1 and x.s == 0:
        return "x = 1 is a pole of the rewritten form"
    top = max(m, n)
    for k in range(1, top + 1):
        if x.c == 1 and 0 <= -(x.s + k) <= top:
            return "(x q^k;q) contains a zero factor"
    if x.c == 1 and 0 <= -(x.s + 1) < top:
        return "(x q;q) contains a zero factor"
    return _poch_zero(v, top, "v")


_register(
    "newsym",
    [("m", "int"), ("n", "int"), ("x", "monomial"), ("v", "monomial"),
     ("z", "monomial")],
    "rewritten symmetric transformation (y eliminated via y = q/z)",
    _lhs_newsym, _rhs_newsym, validate=_val_newsym)


def _cor_v_half(nn, mm, z, prec, shift):
    if nn == 0:
        return zero(prec)
    qz = z.q_over()
    zz = z.shift(shift)  # extra q^(mm*k) factor folded into the k-th power
    return _sum(_prod(pochhammer_exact(qz, k), pochhammer_exact(z, nn - k),
                      pochhammer_exact(z, mm), from_monomial(zz.pow(k)),
                      inv_qfac(k, prec), inv_qfac(nn - k, prec),
                      inv_pochhammer(QMonomial(1, k), mm + 1, prec))
                for k in range(1, nn + 1))


def _lhs_cor_v0(p, prec):
    m, n, z = p["m"], p["n"], p["z"]
    return add(_cor_v_half(n, m, z, prec, 0), -_cor_v_half(m, n, z, prec, 0))


def _rhs_cor_v0(p, prec):
    return _sym_rhs(p["m"], p["n"], p["z"], prec)


def _val_cor_v(p):
    return _val_sym_core(p["m"], p["n"], p["z"])


_register(
    "cor_v0", [("m", "int"), ("n", "int"), ("z", "monomial")],
    "v -> 0 case of the symmetric theorem", _lhs_cor_v0, _rhs_cor_v0,
    validate=_val_cor_v)


def _lhs_cor_vinf(p, prec):
    m, n, z = p["m"], p["n"], p["z"]
    return add(_cor_v_half(n, m, z, prec, m), -_cor_v_half(m, n, z, prec, n))


_register(
    "cor_vinf", [("m", "int"), ("n", "int"), ("z", "monomial")],
    "v -> infinity case of the symmetric theorem", _lhs_cor_vinf, _rhs_cor_v0,
    validate=_val_cor_v)


def _alt_half(nn, mm, prec, extra_per_k):
    if nn == 0:
        return zero(prec)
    return _sum(_prod(qpow(tri(k) + extra_per_k * k, (-1) ** k),
                      inv_qfac(k, prec), inv_qfac(nn - k, prec),
                      inv_pochhammer(QMonomial(1, k), mm + 1, prec))
                for k in range(1, nn + 1))


def _harmonic_diff_rhs(p, prec):
    m, n = p["m"], p["n"]
    return _prod(inv_qfac(m, prec), inv_qfac(n, prec),
                 add(q_harmonic(m, prec), -q_harmonic(n, prec)))


def _lhs_cor001(p, prec):
    m, n = p["m"], p["n"]
    return add(_alt_half(n, m, prec, 0), -_alt_half(m, n, prec, 0))


def _val_mn_nonneg(p):
    return None if p["m"] >= 0 and p["n"] >= 0 else "need m, n >= 0"


_register(
    "cor001", [("m", "int"), ("n", "int")],
    "z -> 0 limit of the v -> 0 case", _lhs_cor001, _harmonic_diff_rhs,
    validate=_val_mn_nonneg)


def _lhs_cor002(p, prec):
    m, n = p["m"], p["n"]
    return add(_alt_half(n, m, prec, m), -_alt_half(m, n, prec, n))


_register(
    "cor002", [("m", "int"), ("n", "int")],
    "z -> 0 limit of the v -> infinity case", _lhs_cor002, _harmonic_diff_rhs,
    validate=_val_mn_nonneg)


def _inv_lambert_rhs(p, prec):
    m, n = p["m"], p["n"]
    s_m = (_sum(_ib(1, k, prec) for k in range(1, m + 1)) if m else zero(prec))
    s_n = (_sum(_ib(1, k, prec) for k in range(1, n + 1)) if n else zero(prec))
    return _prod(inv_qfac(m, prec), inv_qfac(n, prec), add(s_m, -s_n))


def _lhs_qinv001(p, prec):
    m, n = p["m"], p["n"]
    return add(_alt_half(n, m, prec, m - n), -_alt_half(m, n, prec, n - m))


_register(
    "qinv001", [("m", "int"), ("n", "int")],
    "q -> 1/q rewrite of the first limiting identity",
    _lhs_qinv001, _inv_lambert_rhs, validate=_val_mn_nonneg)


def _lhs_qinv002(p, prec):
    m, n = p["m"], p["n"]
    return add(_alt_half(n, m, prec, -n), -_alt_half(m, n, prec, -m))


_register(
    "qinv002", [("m", "int"), ("n", "int")],
    "q -> 1/q rewrite of the second limiting identity",
    _lhs_qinv002, _inv_lambert_rhs, validate=_val_mn_nonneg)


def _lhs_gen_u81_a(p, prec):
    m = p["m"]

    def term(k):
        return _prod(qpow(tri(k), _sign(k)), inv_qfac(k, prec),
                     inv_pochhammer(QMonomial(1, k), m + 1, prec))

    head = sum_terms(term, 1, prec)
    tail = (_sum(_prod(qpow(tri(k), _sign(k)), inv_qfac(m - k, prec),
                       _ib(1, k, prec)) for k in range(1, m + 1))
            if m else zero(prec))
    return add(head, -tail)


def _rhs_gen_u81(p, prec):
    m = p["m"]
    return mul(inv_qfac(m, prec), shifted_lambert(ONE, 0, m + 1, None, prec))


_register(
    "gen_u81_a", [("m", "int")],
    "first generalization of the Lambert-series identity",
    _lhs_gen_u81_a, _rhs_gen_u81,
    validate=lambda p: None if p["m"] >= 0 else "m must be >= 0",
    infinite=True, note="term valuation k(k+1)/2 grows quadratically")


def _lhs_gen_u81_b(p, prec):
    m = p["m"]

    def term(k):
        return _prod(qpow(m * k + tri(k), _sign(k)), inv_qfac(k, prec),
                     inv_pochhammer(QMonomial(1, k), m + 1, prec))

    return sum_terms(term, 1, prec)


_register(
    "gen_u81_b", [("m", "int")],
    "second generalization of the Lambert-series identity",
    _lhs_gen_u81_b, _rhs_gen_u81,
    validate=lambda p: None if p["m"] >= 0 else "m must be >= 0",
    infinite=True, note="term valuation (m + k/2)(k+1) grows quadratically")


# ---------------------------------------------------------------------------
# public operations

def list_identities() -> list[IdentityDescriptor]:
    """All catalog entries in stable alphabetical order."""
    return [_REGISTRY[k] for k in sorted(_REGISTRY)]


def get_identity(id: str) -> IdentityDescriptor:
    return _get(id)


def render_params(id: str, p: dict) -> str:
    d = _get(id)
    parts = []
    for name, kind in d.params:
        v = p[name]
        parts.append(f"{name}={render_monomial(v) if kind == 'monomial' else v}")
    return ",".join(parts)


def validate_params(id: str, p: dict) -> str | None:
    """None when the parameters satisfy the entry's constraints, else a
    human-readable violation."""
    d = _get(id)
    for name, kind in d.params:
        if name not in p:
            return f"missing parameter {name}"
        if kind == "int" and not isinstance(p[name], int):
            return f"parameter {name} must be an integer"
        if kind == "monomial" and not isinstance(p[name], QMonomial):
            return f"parameter {name} must be a monomial"
    if d.validate is not None:
        return d.validate(p)
    return None


_BASE_MARGIN = 24
_MAX_RETRIES = 6


def evaluate_side(id: str, side: str, p: dict, prec: int) -> QLaurentSeries:
    """Evaluate one side to (at least) the requested order, windowed to it.

    Internally the expression is built at a higher working order and retried
    with more slack if precision propagation through negative valuations
    leaves the window short.
    """
    d = _get(id)
    if side.upper() == "LHS":
        fn = d.lhs
    elif side.upper() == "RHS":
        fn = d.rhs
    else:
        raise ValueError(f"side must be LHS or RHS, not {side!r}")
    margin = _BASE_MARGIN
    for _ in range(_MAX_RETRIES):
        s = fn(p, prec + margin)
        if s.prec >= prec:
            return window(s, prec)
        margin += (prec - s.prec) + 8
    raise SeriesError(f"could not reach order {prec} for {id} {side}")


def verify(id: str, p: dict, prec: int = DEFAULT_ORDER) -> VerificationReport:
    """Evaluate both sides, compare exactly, and fill a report row."""
    d = _get(id)
    rendered = render_params(id, p)
    t0 = time.perf_counter()

    def done(**kw):
        return VerificationReport(identity=id, params=rendered, order=prec,
                                  elapsed_ms=(time.perf_counter() - t0) * 1e3,
                                  **kw)

    violation = validate_params(id, p)
    if violation:
        return done(status="skipped", skip_reason=violation)
    try:
        lhs = evaluate_side(id, "LHS", p, prec)
        rhs = evaluate_side(id, "RHS", p, prec)
    except (PoleInRange, PoleAtConstant) as e:
        return done(status="skipped", skip_reason=f"pole: {e}")
    except SeriesError as e:
        return done(status="fail", skip_reason=f"error: {e}")
    cmp = equal_to_precision(lhs, rhs)
    if cmp.status == "mismatch":
        return done(status="fail",
                    first_mismatch=(cmp.exponent, str(cmp.lhs), str(cmp.rhs)))
    checked = min(lhs.prec, rhs.prec)
    vals = [s.val for s in (lhs, rhs) if not s.is_zero()]
    if cmp.status == "insufficient_window" or (
            vals and checked < max(vals) + WINDOW_MARGIN):
        return done(status="skipped",
                    skip_reason=f"insufficient window: checked up to q^{checked}")
    return done(status="pass")


# substitution-point lists for the default sweep grid
Z_POINTS = ["2", "1/2", "-3", "1*q^1", "-1*q^1", "2*q^1", "1*q^2", "-1/2*q^1"]
V_POINTS = ["1*q^1", "3", "-2*q^1"]
XY_POINTS = ["2", "1*q^1", "-1*q^1"]


def _rotated(lst, seed):
    k = seed % len(lst)
    return lst[k:] + lst[:k]


def default_suite(max_n: int, prec: int = DEFAULT_ORDER,
                  seed: int = 0) -> list[tuple[str, dict]]:
    """The sweep grid: integer parameters crossed up to max_n, monomial
    parameters drawn from the fixed point lists (paired, not crossed, when an
    identity takes several).  Constraint-violating points are emitted too and
    come back from verify() as skipped rows."""
    from .literals import parse_monomial
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    zs = [parse_monomial(t) for t in _rotated(Z_POINTS, seed)]
    vs = [parse_monomial(t) for t in _rotated(V_POINTS, seed)]
    xys = [parse_monomial(t) for t in _rotated(XY_POINTS, seed)]
    out: list[tuple[str, dict]] = []

    def emit(id, **p):
        out.append((id, p))

    emit("u81")
    emit("corteel_lovejoy")
    for n in range(1, max_n + 1):
        emit("van_hamme", n=n)
    for n in range(1, max_n + 1):
        for m in range(0, max_n + 1):
            emit("uchimura_m", n=n, m=m)
    for n in range(1, max_n + 1):
        for m in range(1, max_n + 1):
            emit("dilcher", n=n, m=m)
    for n in range(0, max_n + 1):
        for m in range(0, n + 1):
            emit("prodinger", n=n, m=m)
    for n in range(0, max_n + 1):
        for l in range(0, n + 1):
            for m in range(0, n + 1):
                for z in zs:
                    emit("thm1", n=n, l=l, m=m, z=z)
    for m in range(1, max_n + 1):
        for n in range(1, max_n + 1):
            for z in zs:
                emit("thm2", m=m, n=n, z=z)
                emit("thm4", m=m, n=n, z=z)
    for m in range(0, max_n + 1):
        for n in range(0, max_n + 1):
            for t, z in enumerate(zs):
                emit("thm3", m=m, n=n, z=z, v=vs[t % len(vs)])
            for z in zs:
                emit("cor_v0", m=m, n=n, z=z)
                emit("cor_vinf", m=m, n=n, z=z)
            emit("cor001", m=m, n=n)
            emit("cor002", m=m, n=n)
            emit("qinv001", m=m, n=n)
            emit("qinv002", m=m, n=n)
    for n in range(0, max_n + 1):
        for l in range(0, n + 1):
            for t, z in enumerate(zs):
                emit("lagrange_lemma", n=n, l=l, x=xys[t % len(xys)], z=z)
            for z in zs:
                emit("cor_our", n=n, l=l, z=z)
    for n in range(0, max_n + 1):
        for m in range(0, n + 1):
            for z in zs:
                emit("cor_ourdiv", n=n, m=m, z=z)
    for n in range(0, max_n + 1):
        for z in zs:
            emit("cor1", n=n, z=z)
    for m in range(0, max_n + 1):
        for z in zs:
            emit("cor_ourinfty", m=m, z=z)
    for z in zs:
        emit("cor_ourinfty2", z=z)
    for m in range(1, max_n + 1):
        for z in zs:
            emit("thm2_inf", m=m, z=z)
            emit("thm4_inf", m=m, z=z)
    for m in range(0, max_n + 1):
        for t, z in enumerate(zs):
            emit("guo_zeng", m=m, n=(m + t) % (max_n + 1), x=xys[t % 3],
                 y=xys[(t + 1) % 3], v=vs[t % 3], z=z)
    for m in range(0, max_n + 1):
        for n in range(0, max_n + 1):
            for t, z in enumerate(zs):
                if (t + m) % 2 == 0:  # thin the heavy six-parameter entry
                    emit("newsym", m=m, n=n, x=xys[t % 3], v=vs[t % 3], z=z)
    for m in range(0, max_n + 1):
        emit("gen_u81_a", m=m)
        emit("gen_u81_b", m=m)
    return out
