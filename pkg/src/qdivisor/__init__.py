"""Exact verification of q-series identities tied to divisor functions.

Truncated formal Laurent series over arbitrary-precision rationals, a
catalog of verifiable identities, exact rational checks for their q -> 1
endpoints, and a CLI front end.
"""

__version__ = "1.0.0"

from .series import (
    EXACT_PREC,
    CompareResult,
    DivergentFormalSum,
    EmptyWindow,
    OutOfWindow,
    PoleAtConstant,
    QLaurentSeries,
    QMonomial,
    SeriesError,
    ZeroLeadingCoefficient,
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
from .qobjects import (
    ChainSpec,
    PoleInRange,
    chain_sum,
    divisor_count,
    inv_pochhammer,
    inv_qfac,
    lambert_term,
    odd_divisor_count,
    pochhammer,
    pochhammer_exact,
    q_harmonic,
    qbinomial,
    shifted_lambert,
)
from .catalog import (
    DEFAULT_ORDER,
    IdentityDescriptor,
    UnknownIdentity,
    VerificationReport,
    default_suite,
    evaluate_side,
    get_identity,
    list_identities,
    validate_params,
    verify,
)
from .literals import (
    parse_monomial,
    parse_rational,
    render_monomial,
    render_rational,
)
from . import limits

__all__ = [name for name in dir() if not name.startswith("_")]
