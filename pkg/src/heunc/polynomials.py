"""Confluent Heun polynomials.

Under ``delta = delta_N`` the coefficient ``v_{N+1}`` is, up to a nonzero
factor, the tridiagonal determinant ``Delta_{N+1}(mu)``; its N+1 roots give
the accessory values ``eta_k`` for which HeunC truncates to a degree-N
polynomial.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .errors import AlphaZero, DeltaConditionViolated, NoConvergence, VerificationFailed
from .params import (
    HeunParams,
    _check_beta,
    check_delta_condition,
    delta_for_condition,
    mu_of,
)
from .series import taylor_coeffs

TAIL_TOL = 1e-9
MULTIPLE_ROOT_TOL = 1e-7


@dataclass(frozen=True)
class MuPolynomial:
    """Delta_{N+1}(mu), ascending coefficients; monic of degree N+1."""

    coeffs: np.ndarray
    N: int

    def __call__(self, mu: complex) -> complex:
        out = 0j
        for c in self.coeffs[::-1]:
            out = out * mu + c
        return out

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1


@dataclass(frozen=True)
class PolySolution:
    N: int
    k: int
    mu_k: complex
    eta_k: complex
    coeffs: np.ndarray
    tail_residual: float = 0.0
    multiplicity: int = 1

    def __call__(self, z: complex) -> complex:
        out = 0j
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out


@dataclass(frozen=True)
class PnConstant:
    value: complex


def q_n(n: int, beta, gamma) -> complex:
    return (n - 1) * (n + beta + gamma)


def delta_determinant(alpha, beta, gamma, N: int) -> MuPolynomial:
    """Expand the (N+1)x(N+1) tridiagonal determinant as a polynomial in mu.

    Row r has diagonal ``mu - q_r + (r-1)alpha``, superdiagonal ``r(r+beta)``
    and subdiagonal ``(N-r+2)alpha``; leading minors obey
    ``D_r = d_r D_{r-1} - l_r u_{r-1} D_{r-2}``.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    alpha, beta, gamma = complex(alpha), complex(beta), complex(gamma)
    prev = np.zeros(1, dtype=complex)
    cur = np.ones(1, dtype=complex)
    for r in range(1, N + 2):
        d_r = np.array([-q_n(r, beta, gamma) + (r - 1) * alpha, 1], dtype=complex)
        nxt = np.convolve(d_r, cur)
        if r >= 2:
            l_r = (N - r + 2) * alpha
            u_prev = (r - 1) * (r - 1 + beta)
            nxt[: prev.size] -= l_r * u_prev * prev
        prev, cur = cur, nxt
    return MuPolynomial(cur, N)


def _horner_with_derivative(coeffs: np.ndarray, x: complex):
    p = 0j
    dp = 0j
    for c in coeffs[::-1]:
        dp = dp * x + p
        p = p * x + c
    return p, dp


def _residual_scale(coeffs: np.ndarray, x: complex) -> float:
    ax = abs(x)
    return float(sum(abs(c) * ax**i for i, c in enumerate(coeffs)))


def _root_ok(coeffs: np.ndarray, x: complex, tol: float) -> bool:
    # small backward error, or a Newton correction below tol (covers roots at 0,
    # where p(x) and its modulus scale are both just |a_1 x|)
    p, d = _horner_with_derivative(coeffs, x)
    if abs(p) <= tol * _residual_scale(coeffs, x):
        return True
    return d != 0 and abs(p / d) <= tol * (1 + abs(x))


def _sort_roots(roots, rel: float = 1e-9) -> List[complex]:
    # lexicographic by (Re, Im); Re values equal up to rounding count as ties
    roots = sorted(roots, key=lambda r: r.real)
    groups: List[List[complex]] = []
    for r in roots:
        if groups and abs(r.real - groups[-1][0].real) <= rel * (1 + abs(r.real)):
            groups[-1].append(r)
        else:
            groups.append([r])
    return [r for g in groups for r in sorted(g, key=lambda r: r.imag)]


def find_mu_roots(dp, tol: float = 1e-12, max_iter: int = 2000) -> List[complex]:
    """All roots of a polynomial by Durand-Kerner iteration plus Newton polish.

    Parameters
    ----------
    dp : MuPolynomial or sequence
        Ascending coefficients; need not be monic.
    tol : float
        Acceptance threshold for ``|P(root)|`` relative to the rounding scale
        ``sum |a_i| |root|^i``.
    max_iter : int
        Cap on simultaneous-iteration sweeps.

    Returns
    -------
    list of complex
        Roots sorted by real part, then imaginary part.
    """
    coeffs = np.asarray(dp.coeffs if isinstance(dp, MuPolynomial) else dp, dtype=complex)
    coeffs = np.trim_zeros(coeffs, "b")
    n = coeffs.size - 1
    if n < 1:
        return []
    monic = coeffs / coeffs[-1]
    if n == 1:
        return [-monic[0]]

    # Fujiwara bound keeps the starting circle near the root cloud
    radius = 2 * max(abs(monic[n - j]) ** (1.0 / j) for j in range(1, n + 1))
    radius = max(radius, 1e-3)
    theta0 = 0.4 * math.sqrt(2)
    z = np.array([radius * cmath.exp(1j * (2 * math.pi * k / n + theta0)) for k in range(n)])

    converged = False
    for _ in range(max_iter):
        moved = 0.0
        for i in range(n):
            num, _ = _horner_with_derivative(monic, z[i])
            den = np.prod(z[i] - np.delete(z, i))
            if den == 0:
                step = 1e-8 * (1 + abs(z[i]))
            else:
                step = num / den
            z[i] -= step
            moved = max(moved, abs(step) / max(1.0, abs(z[i])))
        if moved < 1e-13:
            converged = True
            break
        if all(_root_ok(monic, x, tol) for x in z):
            converged = True
            break
    if not converged:
        raise NoConvergence(f"Durand-Kerner did not settle in {max_iter} sweeps")

    polished = []
    for x in z:
        for _ in range(3):
            p, d = _horner_with_derivative(monic, x)
            if d == 0:
                break
            cand = x - p / d
            if abs(_horner_with_derivative(monic, cand)[0]) <= abs(p):
                x = cand
            else:
                break
        polished.append(complex(x))

    bad = [x for x in polished if not _root_ok(monic, x, max(tol, 1e-9))]
    if bad:
        raise NoConvergence(f"roots {bad} failed the residual test")
    return _sort_roots(polished)


def root_multiplicities(roots, tol: float = MULTIPLE_ROOT_TOL) -> List[int]:
    """For each root, how many roots (itself included) lie within ``tol``."""
    return [sum(1 for s in roots if abs(r - s) < tol * (1 + abs(r))) for r in roots]


def mu_to_eta(alpha, beta, gamma, mu) -> complex:
    return mu_of(complex(alpha), complex(beta), complex(gamma), 0j) - complex(mu)


def polynomial_params(alpha, beta, gamma, N: int, mu) -> HeunParams:
    """Parameters of HeunC_N with accessory value fixed through ``mu``."""
    delta = delta_for_condition(alpha, beta, gamma, N)
    return HeunParams(alpha, beta, gamma, delta, mu_to_eta(alpha, beta, gamma, mu))


def polynomial_spectrum(alpha, beta, gamma, N: int, tail_tol: float = TAIL_TOL) -> List[PolySolution]:
    """Every PHeunC_{N,k}, k = 1..N+1, in root order."""
    alpha, beta, gamma = complex(alpha), complex(beta), complex(gamma)
    if alpha == 0:
        raise AlphaZero("the delta_N condition divides by alpha")
    _check_beta(beta)
    roots = find_mu_roots(delta_determinant(alpha, beta, gamma, N))
    mult = root_multiplicities(roots)
    out = []
    for k, mu in enumerate(roots, start=1):
        p = polynomial_params(alpha, beta, gamma, N, mu)
        v = taylor_coeffs(p, N + 2).coeffs
        scale = float(np.max(np.abs(v[: N + 1])))
        tail = max(abs(v[N + 1]), abs(v[N + 2])) / scale
        if tail >= tail_tol:
            raise VerificationFailed(
                f"PHeunC_{{{N},{k}}}: tail coefficients do not vanish (relative {tail:.3e})"
            )
        out.append(PolySolution(N, k, mu, p.eta, np.array(v[: N + 1]), tail, mult[k - 1]))
    return out


def construct_polynomial(alpha, beta, gamma, N: int, k: int) -> PolySolution:
    if not 1 <= k <= N + 1:
        raise ValueError(f"k must lie in 1..{N + 1}")
    return polynomial_spectrum(alpha, beta, gamma, N)[k - 1]


def pn_constant(p: HeunParams, N: int) -> PnConstant:
    """(N+1)! v_{N+1} for parameters obeying the delta_N condition."""
    if check_delta_condition(p) != N:
        raise DeltaConditionViolated(f"{p} does not satisfy the delta_{N} condition")
    v = taylor_coeffs(p, N + 1).coeffs
    return PnConstant(math.factorial(N + 1) * v[N + 1])


def associate_params(alpha, beta, gamma, eta, N: int) -> HeunParams:
    a, b, g, e = (complex(x) for x in (alpha, beta, gamma, eta))
    return HeunParams(
        a,
        b + N + 1,
        g + N + 1,
        -a * (b + g) / 2,
        e + (N + 1) * (N + 1 - a + b + g) / 2,
    )


def recurrence_determinant_ratio(alpha, beta, gamma, N: int, mus) -> np.ndarray:
    """v_{N+1}/Delta_{N+1} at each sample ``mu`` (delta fixed to delta_N)."""
    dp = delta_determinant(alpha, beta, gamma, N)
    out = []
    for mu in mus:
        p = polynomial_params(alpha, beta, gamma, N, mu)
        out.append(taylor_coeffs(p, N + 1).coeffs[N + 1] / dp(mu))
    return np.array(out)
