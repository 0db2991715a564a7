"""Coefficient-wise checks of the derivative and polynomial identities.

Every check compares two truncated series on their common trusted range.
The residual of coefficient ``k`` is divided by a magnitude bound obtained by
redoing the same computation with moduli (``|D| |s|`` for operators, the
modulus recurrence for HeunC coefficients).  That bound is the size of the
quantities that cancel, so the reported residual is a componentwise
relative error and does not blow up when the identity's two sides are
themselves tiny.

Each ``verify_*`` accepts ``perturb``: a relative corruption of one constant
in the identity.  It exists so tests can confirm the check is able to fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .operator import HeunOperator, apply, build_operator, magnitude, shifted_operator
from .params import HeunParams, delta_factor, delta_for_condition, to_mu_nu
from .polynomials import (
    associate_params,
    delta_determinant,
    find_mu_roots,
    polynomial_params,
    recurrence_determinant_ratio,
)
from .series import (
    TruncatedSeries,
    derivative_n,
    differentiate,
    mul_poly,
    taylor_coeffs,
    taylor_magnitudes,
)

BASE_TOL = 1e-11

TOLERANCES = {
    "ode": 1e-11,
    "basic": 1e-11,
    "four-term": 1e-11,
    "chain": 1e-10,
    "high-ode": 1e-10,
    "eigen": 1e-10,
    "darboux": 1e-10,
    "darboux-vanish": 1e-9,
    "selfadjoint": 1e-13,
    "swap": 1e-13,
    "determinant": 1e-8,
    "poly-tail": 1e-9,
}


def tolerance(identity: str, n: int = 1) -> float:
    """Tolerance for ``identity`` at derivative order ``n``.

    Repeated differentiation and operator chains grow the condition number,
    so a few orders are granted an extra factor of ten.
    """
    tol = TOLERANCES[identity]
    if identity == "four-term" and n >= 4:
        tol *= 10
    if identity == "high-ode" and n >= 3:
        tol *= 10
    return tol


@dataclass(frozen=True)
class VerificationReport:
    identity_name: str
    params: Optional[HeunParams]
    order_n: int
    residual: float
    tolerance: float
    passed: bool
    details: Tuple[Dict[str, Any], ...] = ()
    extras: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "identity": self.identity_name,
            "params": None if self.params is None else params_to_dict(self.params),
            "order_n": self.order_n,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "details": [dict(d) for d in self.details],
            "extras": {k: encode(v) for k, v in self.extras.items()},
        }


def encode(x):
    """JSON-friendly form: complex -> {"re", "im"}, arrays -> lists."""
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, np.ndarray):
        return [encode(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, dict):
        return {k: encode(v) for k, v in x.items()}
    return x


def params_to_dict(p: HeunParams) -> Dict[str, Any]:
    return {name: encode(getattr(p, name)) for name in ("alpha", "beta", "gamma", "delta", "eta")}


def _compare(
    name: str,
    p: Optional[HeunParams],
    n: int,
    lhs: TruncatedSeries,
    rhs: TruncatedSeries,
    scale: TruncatedSeries,
    tol: float,
    extras: Optional[Dict[str, Any]] = None,
    worst: int = 3,
) -> VerificationReport:
    v = min(lhs.valid_degree, rhs.valid_degree, scale.valid_degree)
    a = lhs.trusted[: v + 1]
    b = rhs.trusted[: v + 1]
    s = np.abs(scale.trusted[: v + 1])
    diff = np.abs(a - b)
    floor = np.finfo(float).tiny
    rel = np.where(diff == 0, 0.0, diff / np.maximum(s, floor))
    residual = float(np.max(rel))
    order = np.argsort(rel)[::-1][:worst]
    details = tuple(
        {
            "index": int(k),
            "relative": float(rel[k]),
            "lhs": encode(complex(a[k])),
            "rhs": encode(complex(b[k])),
        }
        for k in order
    )
    return VerificationReport(
        name, p, n, residual, tol, bool(residual < tol), details, dict(extras or {})
    )


def _zero(v: int) -> TruncatedSeries:
    return TruncatedSeries(np.zeros(v + 1), v)


def _abs_apply(op: HeunOperator, s: TruncatedSeries) -> TruncatedSeries:
    return apply(magnitude(op), s)


def _abs_chain(p: HeunParams, first: int, last: int, s: TruncatedSeries) -> TruncatedSeries:
    for k in range(last, first - 1, -1):
        s = _abs_apply(shifted_operator(p, k), s)
    return s


def _chain(p: HeunParams, first: int, last: int, s: TruncatedSeries) -> TruncatedSeries:
    for k in range(last, first - 1, -1):
        s = apply(shifted_operator(p, k), s)
    return s


def chain_eigenvalue(p: HeunParams, n: int) -> complex:
    """(-alpha)^n n! (delta/alpha + (beta+gamma)/2 + 1)_n as a product free of 1/alpha."""
    out = 1 + 0j
    for j in range(1, n + 1):
        out *= -delta_factor(p, j)
    return out


def verify_ode_residual(p: HeunParams, M: int = 60, *, perturb: float = 0.0) -> VerificationReport:
    """D H = 0 for the truncated HeunC series."""
    h = taylor_coeffs(p, M)
    op = build_operator(p.with_eta(p.eta * (1 + perturb)) if perturb else p)
    lhs = apply(op, h)
    scale = _abs_apply(op, taylor_magnitudes(p, M))
    return _compare("ode", p, 0, lhs, _zero(lhs.valid_degree), scale, tolerance("ode"))


def verify_basic_commutation(
    p: HeunParams,
    n: int,
    trials: int = 50,
    *,
    seed: int = 0,
    M: Optional[int] = None,
    perturb: float = 0.0,
    factor_shift: int = 0,
) -> VerificationReport:
    """d^n (D_0 s) = D_n s^(n) + n alpha (delta/alpha + (beta+gamma)/2 + n) s^(n-1).

    Checked on random series ``s`` that solve nothing.  ``factor_shift``
    replaces ``n`` by ``n + factor_shift`` in the scalar factor.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if M is None:
        M = n + 8
    rng = np.random.default_rng(seed)
    op0 = build_operator(p)
    opn = shifted_operator(p, n)
    m = n + factor_shift
    factor = m * (p.delta + p.alpha * (p.beta + p.gamma) / 2 + m * p.alpha) * (1 + perturb)
    worst_report = None
    for trial in range(trials):
        s = TruncatedSeries(rng.standard_normal(M + 1) + 1j * rng.standard_normal(M + 1), M)
        lhs = derivative_n(apply(op0, s), n)
        rhs = apply(opn, derivative_n(s, n))
        abs_s = TruncatedSeries(np.abs(s.coeffs), M)
        scale = derivative_n(_abs_apply(op0, abs_s), n) + _abs_apply(opn, derivative_n(abs_s, n))
        if n >= 1:
            rhs = rhs + derivative_n(s, n - 1).scale(factor)
            scale = scale + derivative_n(abs_s, n - 1).scale(abs(factor))
        rep = _compare("basic", p, n, lhs, rhs, scale, tolerance("basic", n), {"trial": trial})
        if worst_report is None or rep.residual > worst_report.residual:
            worst_report = rep
    extras = dict(worst_report.extras, trials=trials, factor=factor)
    return VerificationReport(
        "basic", p, n, worst_report.residual, worst_report.tolerance,
        worst_report.passed, worst_report.details, extras,
    )


def verify_four_term(p: HeunParams, n: int, M: Optional[int] = None, *, perturb: float = 0.0):
    """D_n H^(n) + n alpha(...) H^(n-1) = 0 for H = HeunC."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if M is None:
        M = 2 * n + 10
    if M < 2 * n + 6:
        raise ValueError(f"need M >= {2 * n + 6}")
    h = taylor_coeffs(p, M)
    hm = taylor_magnitudes(p, M)
    opn = shifted_operator(p, n)
    factor = delta_factor(p, n) * (1 + perturb)
    lhs = apply(opn, derivative_n(h, n))
    rhs = derivative_n(h, n - 1).scale(-factor)
    scale = _abs_apply(opn, derivative_n(hm, n)) + derivative_n(hm, n - 1).scale(abs(factor))
    return _compare("four-term", p, n, lhs, rhs, scale, tolerance("four-term", n), {"factor": factor})


def verify_chain(p: HeunParams, n: int, M: Optional[int] = None, *, perturb: float = 0.0):
    """D_1 D_2 ... D_n H^(n) = (-alpha)^n n! (delta/alpha+(beta+gamma)/2+1)_n H."""
    if not 1 <= n:
        raise ValueError("n must be >= 1")
    if M is None:
        M = 3 * n + 10
    if M < 3 * n + 8:
        raise ValueError(f"need M >= {3 * n + 8}")
    h = taylor_coeffs(p, M)
    hm = taylor_magnitudes(p, M)
    lam = chain_eigenvalue(p, n) * (1 + perturb)
    lhs = _chain(p, 1, n, derivative_n(h, n))
    rhs = h.scale(lam)
    scale = _abs_chain(p, 1, n, derivative_n(hm, n)) + hm.scale(abs(lam))
    return _compare("chain", p, n, lhs, rhs, scale, tolerance("chain", n), {"eigenvalue": lam})


def verify_high_order_ode(p: HeunParams, n: int, M: Optional[int] = None, *, perturb: float = 0.0):
    """D_0 D_1 ... D_n H^(n) = 0: an ODE of order 2(n+1) satisfied by H^(n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if M is None:
        M = 3 * n + 12
    if M < 3 * n + 10:
        raise ValueError(f"need M >= {3 * n + 10}")
    h = taylor_coeffs(p, M)
    hm = taylor_magnitudes(p, M)
    op0 = build_operator(p)
    inner = derivative_n(h, n)
    for k in range(n, 0, -1):
        op = shifted_operator(p, k)
        if perturb and k == n:
            # corrupt the innermost operator; a mutation applied after the chain drowns in cancellation
            op = HeunOperator(op.p2, op.p1 * (1 + perturb), op.p0, op.source_params)
        inner = apply(op, inner)
    lhs = apply(op0, inner)
    scale = _abs_apply(op0, _abs_chain(p, 1, n, derivative_n(hm, n)))
    return _compare("high-ode", p, n, lhs, _zero(lhs.valid_degree), scale, tolerance("high-ode", n))


def verify_eigen_shift(p: HeunParams, lam: complex, M: int = 30, *, perturb: float = 0.0):
    """D_{eta} H_lam = lam H_lam where H_lam is HeunC with eta replaced by eta - lam."""
    lam = complex(lam)
    q = p.with_eta(p.eta - lam)
    h = taylor_coeffs(q, M)
    hm = taylor_magnitudes(q, M)
    op = build_operator(p)
    lhs = apply(op, h)
    rhs = h.scale(lam * (1 + perturb))
    scale = _abs_apply(op, hm) + hm.scale(abs(lam))
    return _compare("eigen", p, 0, lhs, rhs, scale, tolerance("eigen"), {"lambda": lam})


def verify_darboux_relation(
    alpha, beta, gamma, eta, N: int, M: Optional[int] = None, *, perturb: float = 0.0
) -> VerificationReport:
    """d^{N+1} HeunC_N = P_N * associate HeunC, coefficient by coefficient.

    When ``P_N`` vanishes (a polynomial point) both sides must vanish on
    their own; ``extras["vanish_residual"]`` records the larger of the two
    sides relative to the magnitude bound.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if M is None:
        M = N + 20
    if M < N + 20:
        raise ValueError(f"need M >= {N + 20}")
    p = HeunParams(alpha, beta, gamma, delta_for_condition(alpha, beta, gamma, N), eta)
    h = taylor_coeffs(p, M)
    hm = taylor_magnitudes(p, M)
    pn = math.factorial(N + 1) * h.coeffs[N + 1]
    assoc = associate_params(alpha, beta, gamma, eta, N)
    v = M - N - 1
    lhs = derivative_n(h, N + 1)
    rhs = taylor_coeffs(assoc, v).scale(pn * (1 + perturb))
    scale = derivative_n(hm, N + 1) + taylor_magnitudes(assoc, v).scale(abs(pn))
    rep = _compare("darboux", p, N, lhs, rhs, scale, tolerance("darboux"))
    s = np.abs(scale.trusted)
    vanish = float(
        max(np.max(np.abs(lhs.trusted) / s), np.max(np.abs(rhs.trusted) / s))
    )
    extras = {"P_N": pn, "associate": params_to_dict(assoc), "vanish_residual": vanish}
    return VerificationReport(
        rep.identity_name, p, N, rep.residual, rep.tolerance, rep.passed, rep.details, extras
    )


def selfadjoint_apply(p: HeunParams, s: TruncatedSeries, *, perturb: float = 0.0) -> TruncatedSeries:
    """Operator in divergence form.

    (z(z-1) s')' + (alpha z(z-1) + beta(z-1) + gamma z) s'
    + alpha(delta/alpha + (beta+gamma)/2 + 1) z s - mu s
    """
    a, b, g = p.alpha, p.beta, p.gamma
    mu = to_mu_nu(p).mu
    ds = differentiate(s)
    flux = differentiate(mul_poly(ds, [0, -1, 1]))
    drift = mul_poly(ds, [-b, -a + b + g, a])
    potential = (p.delta + a * (b + g) / 2 + a) * (1 + perturb)
    v = s.valid_degree - 2
    out = (
        flux.trusted[: v + 1]
        + drift.trusted[: v + 1]
        + mul_poly(s, [-mu, potential]).trusted[: v + 1]
    )
    return TruncatedSeries(out, v)


def verify_selfadjoint_form(p: HeunParams, M: int = 20, *, perturb: float = 0.0):
    """Divergence form and the three-coefficient form of the operator agree."""
    if M < 6:
        raise ValueError("need M >= 6")
    h = taylor_coeffs(p, M)
    op = build_operator(p)
    lhs = apply(op, h)
    rhs = selfadjoint_apply(p, h, perturb=perturb)
    scale = _abs_apply(op, taylor_magnitudes(p, M))
    return _compare("selfadjoint", p, 0, lhs, rhs, scale, tolerance("selfadjoint"))


def swap_params(p: HeunParams) -> HeunParams:
    """(alpha, gamma, beta, delta, eta') with eta' chosen so that mu' = nu."""
    a, b, g = p.alpha, p.beta, p.gamma
    nu = to_mu_nu(p).nu
    eta = 0.5 * (a - g - b + a * g - g * b) - nu
    return HeunParams(a, g, b, p.delta, eta)


def verify_symmetry_swap(p: HeunParams, *, perturb: float = 0.0) -> VerificationReport:
    """Swapping beta and gamma exchanges mu and nu (parameter level only)."""
    mn = to_mu_nu(p)
    q = swap_params(p)
    if perturb:
        q = q.with_eta(q.eta * (1 + perturb))
    mq = to_mu_nu(q)
    back = to_mu_nu(swap_params(q))
    scale = max(1.0, *(abs(x) for x in p.as_tuple())) ** 2
    errs = {
        "mu_swapped_minus_nu": abs(mq.mu - mn.nu) / scale,
        "nu_swapped_minus_mu": abs(mq.nu - mn.mu) / scale,
        "double_swap_mu": abs(back.mu - mn.mu) / scale,
        "double_swap_nu": abs(back.nu - mn.nu) / scale,
    }
    residual = float(max(errs.values()))
    tol = tolerance("swap")
    details = tuple({"check": k, "relative": float(v)} for k, v in errs.items())
    return VerificationReport(
        "swap", p, 0, residual, tol, residual < tol, details,
        {"mu": mn.mu, "nu": mn.nu, "mu_swapped": mq.mu, "nu_swapped": mq.nu},
    )


def verify_determinant_equivalence(alpha, beta, gamma, N: int, mus) -> VerificationReport:
    """v_{N+1}(mu) / Delta_{N+1}(mu) is one constant across sample ``mu``."""
    ratios = recurrence_determinant_ratio(alpha, beta, gamma, N, mus)
    ref = ratios[0]
    spread = float(np.max(np.abs(ratios - ref)) / abs(ref))
    dp = delta_determinant(alpha, beta, gamma, N)
    monic = dp.degree == N + 1 and dp.coeffs[-1] == 1
    tol = tolerance("determinant")
    p = polynomial_params(alpha, beta, gamma, N, 0)
    return VerificationReport(
        "determinant", p, N, spread, tol, bool(spread < tol and monic), (),
        {"ratio": complex(ref), "monic": bool(monic)},
    )


def verify_polynomial_tails(alpha, beta, gamma, N: int, extra: int = 3) -> VerificationReport:
    """|v_{N+1}|..|v_{N+extra}| relative to max |v_n| at every root of Delta_{N+1}."""
    roots = find_mu_roots(delta_determinant(alpha, beta, gamma, N))
    worst = 0.0
    details = []
    for k, mu in enumerate(roots, start=1):
        v = taylor_coeffs(polynomial_params(alpha, beta, gamma, N, mu), N + extra).coeffs
        r = float(np.max(np.abs(v[N + 1:])) / np.max(np.abs(v)))
        details.append({"k": k, "mu": encode(mu), "relative": r})
        worst = max(worst, r)
    tol = tolerance("poly-tail")
    p = polynomial_params(alpha, beta, gamma, N, 0)
    return VerificationReport("poly-tail", p, N, worst, tol, worst < tol, tuple(details))
