"""Textual forms for exact values: rationals `p` or `p/q`, and monomial
literals `C` or `C*q^S` (e.g. `-1*q^1` for -q, `1/2` for the constant 1/2).
Parsing and rendering round-trip exactly."""

from __future__ import annotations

import re
from fractions import Fraction

from gmpy2 import mpq

from .series import QMonomial

_RAT_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")
_MONO_RE = re.compile(r"^(-?\d+(?:/\d+)?)(?:\*q\^(-?\d+))?$")


def parse_rational(text: str) -> Fraction:
    m = _RAT_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def render_rational(r) -> str:
    r = mpq(r)
    return str(r)  # "p" or "p/q", lowest terms, positive denominator


def parse_monomial(text: str) -> QMonomial:
    m = _MONO_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a monomial literal: {text!r}")
    c = mpq(Fraction(m.group(1)))
    s = int(m.group(2)) if m.group(2) is not None else 0
    return QMonomial(c, s)


def render_monomial(m: QMonomial) -> str:
    if m.s == 0:
        return render_rational(m.c)
    return f"{render_rational(m.c)}*q^{m.s}"
