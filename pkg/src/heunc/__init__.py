"""Confluent Heun functions, their derivatives, and confluent Heun polynomials.

>>> from heunc import HeunParams, heunc_eval
>>> heunc_eval(HeunParams(0, 0, 0, 0, 0), 0.5)
(1+0j)
"""

from .errors import (
    AlphaZero,
    DegreeTooLow,
    DeltaConditionViolated,
    HeunError,
    InvalidBeta,
    NoConvergence,
    OutOfDisk,
    VerificationFailed,
)
from .operator import (
    HeunOperator,
    apply,
    apply_shifted_chain,
    build_operator,
    eigen_shift_residual,
)
from .params import (
    EigenShift,
    HeunParams,
    MuNu,
    ShiftIndex,
    check_delta_condition,
    delta_for_condition,
    from_mu_nu,
    pochhammer,
    shift_params,
    to_mu_nu,
)
from .polynomials import (
    MuPolynomial,
    PnConstant,
    PolySolution,
    associate_params,
    construct_polynomial,
    delta_determinant,
    find_mu_roots,
    mu_to_eta,
    pn_constant,
    polynomial_spectrum,
)
from .series import (
    RecurrenceCoeffs,
    TruncatedSeries,
    differentiate,
    eval_derivative,
    mul_poly,
    recurrence_coeffs,
    taylor_coeffs,
)
from .series import eval as heunc_eval
from .verify import VerificationReport

__version__ = "0.1.0"
