"""Parameter algebra for the confluent Heun equation.

The equation is written as

    H'' + (alpha + (beta+1)/z + (gamma+1)/(z-1)) H' + (mu/z + nu/(z-1)) H = 0

with the Maple-style parameters ``(alpha, beta, gamma, delta, eta)`` related
to ``(mu, nu)`` by

    mu = (alpha - beta - gamma + alpha*beta - beta*gamma)/2 - eta
    nu = (alpha + beta + gamma + alpha*gamma + beta*gamma)/2 + delta + eta

All scalars are stored as Python ``complex``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .errors import InvalidBeta

NEG_INT_TOL = 1e-12


def is_negative_integer(x: complex, tol: float = NEG_INT_TOL) -> bool:
    """True when ``x`` lies within ``tol`` of -1, -2, ... on the real axis."""
    x = complex(x)
    if abs(x.imag) >= tol or x.real > -1 + tol:
        return False
    return abs(x.real - round(x.real)) < tol


def _check_beta(beta: complex) -> None:
    if is_negative_integer(beta):
        raise InvalidBeta(f"beta={beta} is a negative integer; A_n = 1 + beta/n vanishes")


@dataclass(frozen=True)
class HeunParams:
    """The five confluent Heun parameters."""

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex
    eta: complex

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta", "eta"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        _check_beta(self.beta)

    def as_tuple(self) -> tuple:
        return (self.alpha, self.beta, self.gamma, self.delta, self.eta)

    def with_eta(self, eta: complex) -> "HeunParams":
        return replace(self, eta=complex(eta))

    @property
    def mu(self) -> complex:
        return to_mu_nu(self).mu

    @property
    def nu(self) -> complex:
        return to_mu_nu(self).nu


@dataclass(frozen=True)
class MuNu:
    mu: complex
    nu: complex

    def __post_init__(self):
        object.__setattr__(self, "mu", complex(self.mu))
        object.__setattr__(self, "nu", complex(self.nu))


@dataclass(frozen=True)
class ShiftIndex:
    """Derivative order used by :func:`shift_params`."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"shift index must be a nonnegative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class EigenShift:
    """Eigenvalue ``lam`` of the Heun operator; any complex value is allowed."""

    lam: complex

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))


def mu_of(alpha, beta, gamma, eta) -> complex:
    return 0.5 * (alpha - beta - gamma + alpha * beta - beta * gamma) - eta


def to_mu_nu(p: HeunParams) -> MuNu:
    a, b, g, d, e = p.as_tuple()
    mu = mu_of(a, b, g, e)
    nu = 0.5 * (a + b + g + a * g + b * g) + d + e
    return MuNu(mu, nu)


def from_mu_nu(alpha, beta, gamma, mn: MuNu) -> HeunParams:
    """Inverse of :func:`to_mu_nu` for fixed ``(alpha, beta, gamma)``."""
    alpha, beta, gamma = complex(alpha), complex(beta), complex(gamma)
    _check_beta(beta)
    delta = mn.nu + mn.mu - alpha * ((beta + gamma) / 2 + 1)
    eta = 0.5 * (alpha - beta - gamma + alpha * beta - beta * gamma) - mn.mu
    return HeunParams(alpha, beta, gamma, delta, eta)


def shift_params(p: HeunParams, s) -> HeunParams:
    """Index augmentation attached to the n-th derivative.

    Returns ``(alpha, beta+n, gamma+n, delta+n*alpha, eta + n(n-alpha+beta+gamma)/2)``.
    ``delta`` is shifted in product form so that ``alpha = 0`` needs no
    special case.
    """
    n = s.n if isinstance(s, ShiftIndex) else ShiftIndex(s).n
    a, b, g, d, e = p.as_tuple()
    return HeunParams(
        a,
        b + n,
        g + n,
        d + n * a,
        e + 0.5 * n * (n - a + b + g),
    )


def delta_for_condition(alpha, beta, gamma, N: int) -> complex:
    """delta_N = -alpha((beta+gamma)/2 + N + 1)."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return -complex(alpha) * ((complex(beta) + complex(gamma)) / 2 + N + 1)


def check_delta_condition(p: HeunParams, tol: float = 1e-9) -> Optional[int]:
    """Return ``N >= 0`` if ``p`` satisfies the delta_N condition, else ``None``."""
    if p.alpha == 0:
        return None
    x = -p.delta / p.alpha - (p.beta + p.gamma) / 2 - 1
    N = round(x.real)
    if N < 0:
        return None
    if abs(p.delta / p.alpha + (p.beta + p.gamma) / 2 + N + 1) < tol:
        return N
    return None


def delta_factor(p: HeunParams, n: int) -> complex:
    """n*alpha*(delta/alpha + (beta+gamma)/2 + n), written without dividing by alpha."""
    return n * (p.delta + p.alpha * (p.beta + p.gamma) / 2 + n * p.alpha)


def pochhammer(x: complex, n: int) -> complex:
    """Rising factorial x(x+1)...(x+n-1)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = complex(1.0)
    for j in range(n):
        out *= x + j
    return out
