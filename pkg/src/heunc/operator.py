"""The confluent Heun differential expression as exact polynomial coefficients.

Multiplying the equation through by z(z-1) gives

    D[H] = z(z-1) H'' + (alpha z(z-1) + (beta+1)(z-1) + (gamma+1) z) H'
           + (mu (z-1) + nu z) H

so the operator is fully described by three short coefficient arrays and can
be applied to truncated Taylor series without any quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegreeTooLow
from .params import EigenShift, HeunParams, shift_params, to_mu_nu
from .series import TruncatedSeries, differentiate, mul_poly, taylor_coeffs

P2 = np.array([0, -1, 1], dtype=complex)


@dataclass(frozen=True)
class HeunOperator:
    p2: np.ndarray
    p1: np.ndarray
    p0: np.ndarray
    source_params: HeunParams


def build_operator(p: HeunParams) -> HeunOperator:
    a, b, g = p.alpha, p.beta, p.gamma
    mn = to_mu_nu(p)
    p1 = np.array([-(b + 1), -a + b + g + 2, a], dtype=complex)
    p0 = np.array([-mn.mu, mn.mu + mn.nu], dtype=complex)
    return HeunOperator(P2.copy(), p1, p0, p)


def magnitude(op: HeunOperator) -> HeunOperator:
    """Operator with every coefficient replaced by its modulus (for error scales)."""
    return HeunOperator(np.abs(op.p2), np.abs(op.p1), np.abs(op.p0), op.source_params)


def apply(op: HeunOperator, s: TruncatedSeries) -> TruncatedSeries:
    """p2*s'' + p1*s' + p0*s, trusted to ``valid_degree(s) - 2``."""
    if s.valid_degree < 2:
        raise DegreeTooLow(f"apply needs valid_degree >= 2, got {s.valid_degree}")
    d1 = differentiate(s)
    d2 = differentiate(d1)
    v = s.valid_degree - 2
    out = (
        mul_poly(d2, op.p2).trusted[: v + 1]
        + mul_poly(d1, op.p1).trusted[: v + 1]
        + mul_poly(s, op.p0).trusted[: v + 1]
    )
    return TruncatedSeries(out, v)


def shifted_operator(p: HeunParams, k: int) -> HeunOperator:
    return build_operator(shift_params(p, k))


def apply_shifted_chain(p: HeunParams, first: int, last: int, s: TruncatedSeries) -> TruncatedSeries:
    """Apply D_first D_{first+1} ... D_last to ``s`` (D_last acts first).

    ``D_k`` is the operator of ``shift_params(p, k)``.
    """
    if not 1 <= first <= last:
        raise ValueError(f"need 1 <= first <= last, got first={first}, last={last}")
    need = 2 * (last - first + 1)
    if s.valid_degree < need:
        raise DegreeTooLow(f"chain of {last - first + 1} operators needs valid_degree >= {need}")
    for k in range(last, first - 1, -1):
        s = apply(shifted_operator(p, k), s)
    return s


def eigen_shift_residual(p: HeunParams, lam, M: int) -> float:
    """Max trusted |D_p H_lam - lam H_lam| relative to max |H_lam|, H_lam built with eta - lam."""
    if M < 4:
        raise ValueError("M must be at least 4")
    lam = lam.lam if isinstance(lam, EigenShift) else complex(lam)
    h = taylor_coeffs(p.with_eta(p.eta - lam), M)
    r = apply(build_operator(p), h) - h.scale(lam)
    scale = float(np.max(np.abs(h.trusted)))
    return float(np.max(np.abs(r.trusted))) / scale
