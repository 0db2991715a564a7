"""Taylor coefficients of HeunC about z=0 and truncated-series arithmetic.

The coefficients ``v_n`` satisfy

    A_n v_n = B_n v_{n-1} + C_n v_{n-2},   v_{-1} = 0, v_0 = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import DegreeTooLow, InvalidBeta, NoConvergence, OutOfDisk
from .params import HeunParams

R_MAX = 0.95
DEFAULT_TOL = 1e-12
DEFAULT_MAX_TERMS = 10000


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients ``c_0..c_M`` about z=0, trusted up to ``valid_degree``.

    Coefficients above ``valid_degree`` may be present (e.g. after a Cauchy
    product) but are contaminated by truncation and must not be compared.
    """

    coeffs: np.ndarray
    valid_degree: int

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if self.valid_degree > c.size - 1:
            raise ValueError(
                f"valid_degree {self.valid_degree} exceeds stored degree {c.size - 1}"
            )

    @classmethod
    def polynomial(cls, coeffs: Sequence[complex], valid_degree: int | None = None):
        """Exact polynomial, zero-padded so that ``valid_degree`` terms are trusted."""
        c = np.asarray(coeffs, dtype=complex)
        if valid_degree is None:
            valid_degree = c.size - 1
        if c.size < valid_degree + 1:
            c = np.concatenate([c, np.zeros(valid_degree + 1 - c.size, dtype=complex)])
        return cls(c, valid_degree)

    @property
    def trusted(self) -> np.ndarray:
        return self.coeffs[: self.valid_degree + 1]

    def truncated(self) -> "TruncatedSeries":
        """Drop the untrusted tail."""
        return TruncatedSeries(self.trusted, self.valid_degree)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        v = min(self.valid_degree, other.valid_degree)
        return TruncatedSeries(self.trusted[: v + 1] + other.trusted[: v + 1], v)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(-self.coeffs, self.valid_degree)

    def scale(self, k: complex) -> "TruncatedSeries":
        return TruncatedSeries(complex(k) * self.coeffs, self.valid_degree)

    __rmul__ = scale

    def __call__(self, z: complex) -> complex:
        """Evaluate the trusted part at ``z`` (Horner)."""
        out = 0j
        for c in self.trusted[::-1]:
            out = out * z + c
        return out


@dataclass(frozen=True)
class RecurrenceCoeffs:
    a_n: complex
    b_n: complex
    c_n: complex


def recurrence_coeffs(p: HeunParams, n: int) -> RecurrenceCoeffs:
    if n < 1:
        raise ValueError("recurrence index starts at n=1")
    a, b, g, d, e = p.as_tuple()
    a_n = 1 + b / n
    b_n = 1 + (-a + b + g - 1) / n + (e - (-a + b + g) / 2 - a * b / 2 + b * g / 2) / n**2
    # product form of (alpha/n^2)(delta/alpha + (beta+gamma)/2 + n - 1)
    c_n = (d + a * (b + g) / 2 + a * (n - 1)) / n**2
    return RecurrenceCoeffs(a_n, b_n, c_n)


def iter_coeffs(p: HeunParams) -> Iterator[complex]:
    """Yield v_0, v_1, ... indefinitely."""
    prev, cur = 0j, 1 + 0j
    yield cur
    n = 1
    while True:
        r = recurrence_coeffs(p, n)
        if r.a_n == 0:
            raise InvalidBeta(f"A_{n} vanishes for beta={p.beta}")
        prev, cur = cur, (r.b_n * cur + r.c_n * prev) / r.a_n
        yield cur
        n += 1


def taylor_coeffs(p: HeunParams, M: int) -> TruncatedSeries:
    if M < 0:
        raise ValueError("M must be nonnegative")
    it = iter_coeffs(p)
    c = np.fromiter((next(it) for _ in range(M + 1)), dtype=complex, count=M + 1)
    return TruncatedSeries(c, M)


def taylor_magnitudes(p: HeunParams, M: int) -> TruncatedSeries:
    """Rounding scale of the computed coefficients: ``|v_n| + e_n``.

    ``e_n`` is a running error bound in units of the unit roundoff.  Each
    step injects the moduli of the terms summed to form ``v_n`` (including
    the terms inside ``B_n`` and ``C_n``, which can cancel), and the bound
    is carried forward with ``|A_n|, |B_n|, |C_n|``, i.e. at the growth rate
    of the recurrence itself.  At a polynomial point the computed tail is
    pure rounding noise of this size.
    """
    a, b, g, d, e = p.as_tuple()
    b1 = abs(-a + b + g - 1)
    b2 = abs(e) + abs(-a + b + g) / 2 + abs(a * b) / 2 + abs(b * g) / 2
    c0 = abs(d) + abs(a * (b + g)) / 2
    v = taylor_coeffs(p, M).coeffs
    out = np.empty(M + 1)
    out[0] = 1.0
    err_prev, err = 0.0, 0.0
    for n in range(1, M + 1):
        r = recurrence_coeffs(p, n)
        inject = (1 + b1 / n + b2 / n**2) * abs(v[n - 1])
        if n >= 2:
            inject += (c0 + abs(a) * (n - 1)) / n**2 * abs(v[n - 2])
        inject /= abs(r.a_n)
        err_prev, err = err, (abs(r.b_n) * err + abs(r.c_n) * err_prev) / abs(r.a_n) + inject
        out[n] = abs(v[n]) + err
    return TruncatedSeries(out, M)


def magnitude(s: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(np.abs(s.coeffs), s.valid_degree)


def _check_disk(z: complex, r_max: float) -> None:
    if abs(z) > r_max:
        raise OutOfDisk(f"|z|={abs(z):.6g} exceeds r_max={r_max}")


def _sum_series(terms: Iterator[complex], tol: float, max_terms: int) -> complex:
    # stop after the pair test |t_n| + |t_{n-1}| < tol(1+|S|) passes twice in a row
    total = 0j
    last = None
    passes = 0
    for count, t in enumerate(terms):
        if count >= max_terms:
            break
        total += t
        if last is not None and abs(t) + abs(last) < tol * (1 + abs(total)):
            passes += 1
            if passes == 2:
                return total, count + 1
        else:
            passes = 0
        last = t
    raise NoConvergence(f"series did not converge within max_terms={max_terms}")


def eval(
    p: HeunParams,
    z: complex,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    r_max: float = R_MAX,
    full_output: bool = False,
):
    """HeunC(alpha, beta, gamma, delta, eta, z) by direct summation for |z| <= r_max."""
    return eval_derivative(
        p, z, 0, tol=tol, max_terms=max_terms, r_max=r_max, full_output=full_output
    )


def eval_derivative(
    p: HeunParams,
    z: complex,
    n: int,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    r_max: float = R_MAX,
    full_output: bool = False,
):
    """n-th derivative of HeunC at ``z`` by term-wise differentiation.

    With ``full_output`` the number of series terms summed is returned too,
    as ``(value, terms)``.

    Raises
    ------
    OutOfDisk
        if ``|z| > r_max``.
    NoConvergence
        if the tail test is not met within ``max_terms`` terms.
    """
    if n < 0:
        raise ValueError("derivative order must be nonnegative")
    z = complex(z)
    _check_disk(z, r_max)

    def terms():
        # k!/(k-n)! updated multiplicatively; z**(k-n) likewise
        weight = 1.0
        for j in range(1, n + 1):
            weight *= j
        zp = 1 + 0j
        for k, c in enumerate(iter_coeffs(p)):
            if k < n:
                continue
            if k > n:
                weight *= k / (k - n)
                zp *= z
            yield c * weight * zp

    value, used = _sum_series(terms(), tol, max_terms)
    return (value, used) if full_output else value


def differentiate(s: TruncatedSeries) -> TruncatedSeries:
    """Term-wise derivative; valid_degree drops by one.

    A series with a single coefficient differentiates to the zero series
    ``[0]`` with valid_degree 0.
    """
    c = s.coeffs
    if c.size == 1:
        return TruncatedSeries(np.zeros(1, dtype=complex), 0)
    out = c[1:] * np.arange(1, c.size)
    return TruncatedSeries(out, max(s.valid_degree - 1, 0))


def derivative_n(s: TruncatedSeries, n: int) -> TruncatedSeries:
    for _ in range(n):
        if s.valid_degree < 1:
            raise DegreeTooLow(f"cannot differentiate a series with valid_degree {s.valid_degree}")
        s = differentiate(s)
    return s


def mul_poly(s: TruncatedSeries, q: Sequence[complex]) -> TruncatedSeries:
    """Cauchy product with the polynomial ``q`` (ascending coefficients)."""
    q = np.asarray(q, dtype=complex)
    return TruncatedSeries(np.convolve(s.coeffs, q), s.valid_degree)
