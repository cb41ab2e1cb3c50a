"""Legendre, Gegenbauer, Jacobi and Hermite functions of real degree.

Real-degree values go through hypergeometric series.  Integer-degree
sequences (the samples f_n of the expansions) use three-term recurrences,
which stay accurate for thousands of terms.  The Mehler-Dirichlet and
Gegenbauer integral representations are kept as independent quadrature
oracles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import IntegrandSpec, integrate_de
from .specfun import DomainError, gauss_2f1, kummer_1f1, rgamma

__all__ = [
    "JacobiParams",
    "jacobi_hat",
    "gegenbauer_hat",
    "legendre_p",
    "legendre_md",
    "gegenbauer_md",
    "hermite",
    "hermite_limit_oracle",
    "jacobi_poly_recurrence",
    "jacobi_hat_sequence",
    "hermite_scaled_sequence",
    "jacobi_derivative_at_one",
]


@dataclass(frozen=True)
class JacobiParams:
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (self.alpha > -1 and self.beta > -1):
            raise ValueError(f"Jacobi parameters need alpha, beta > -1; got {self}")

    @property
    def gamma(self) -> float:
        return 0.5 * (self.alpha + self.beta + 1.0)

    def swapped(self) -> "JacobiParams":
        return JacobiParams(self.beta, self.alpha)

    @classmethod
    def gegenbauer(cls, gamma: float) -> "JacobiParams":
        return cls(gamma - 0.5, gamma - 0.5)


def _check_x(x: float) -> float:
    x = float(x)
    if not -1.0 < x <= 1.0:
        raise DomainError(f"evaluation point must lie in (-1, 1], got {x!r}")
    return x


def jacobi_hat(nu: float, p: JacobiParams, x: float) -> float:
    """Unnormalized Jacobi function, 2F1(nu+a+b+1, -nu; a+1; (1-x)/2).

    Equals 1 at x = 1 for every nu.  Non-negative integer degrees use the
    three-term recurrence.
    """
    x = _check_x(x)
    if x == 1.0:
        return 1.0
    if nu >= 0 and float(nu).is_integer():
        # polynomial case: the recurrence avoids cancellation in the terminating series
        return jacobi_poly_recurrence(int(nu), p, x)
    z = 0.5 * (1.0 - x)
    return gauss_2f1(nu + p.alpha + p.beta + 1.0, -nu, p.alpha + 1.0, z)


def gegenbauer_hat(nu: float, gamma: float, x: float) -> float:
    if not gamma > -0.5:
        raise ValueError(f"Gegenbauer parameter must exceed -1/2, got {gamma!r}")
    return jacobi_hat(nu, JacobiParams.gegenbauer(gamma), x)


def legendre_p(nu: float, x: float) -> float:
    return jacobi_hat(nu, JacobiParams(0.0, 0.0), x)


def _md_quadrature(integrand, theta: float, tol: float) -> float:
    spec = IntegrandSpec(0.0, theta, singular_ends="lower", abs_tol=tol)
    return integrate_de(integrand, spec).value


def legendre_md(nu: float, theta: float, tol: float = 1e-11) -> float:
    """P_nu(cos theta) from the Mehler-Dirichlet integral, 0 < theta < pi.

    Integrates in u = theta - psi so the square-root singularity sits at
    u = 0, with cos(psi) - cos(theta) = 2 sin(theta - u/2) sin(u/2).
    """
    theta = float(theta)
    if not 0.0 < theta < math.pi:
        raise DomainError(f"theta must lie in (0, pi), got {theta!r}")

    def integrand(u):
        gap = 2.0 * np.sin(theta - 0.5 * u) * np.sin(0.5 * u)
        return np.cos((nu + 0.5) * (theta - u)) / np.sqrt(gap)

    return math.sqrt(2.0) / math.pi * _md_quadrature(integrand, theta, tol)


def gegenbauer_md(nu: float, gamma: float, theta: float, tol: float = 1e-11) -> float:
    """Gegenbauer function from its integral representation (gamma > 0).

    C_nu(cos t) = 2**g / (B(1/2, g) sin(t)**(2g-1))
                  * int_0^t cos((nu+g) psi) (cos psi - cos t)**(g-1) dpsi
    """
    theta = float(theta)
    if not gamma > 0:
        raise DomainError(f"integral representation needs gamma > 0, got {gamma!r}")
    if not 0.0 < theta < math.pi:
        raise DomainError(f"theta must lie in (0, pi), got {theta!r}")

    def integrand(u):
        gap = 2.0 * np.sin(theta - 0.5 * u) * np.sin(0.5 * u)
        return np.cos((nu + gamma) * (theta - u)) * gap ** (gamma - 1.0)

    log_beta = math.lgamma(0.5) + math.lgamma(gamma) - math.lgamma(gamma + 0.5)
    log_pref = gamma * math.log(2.0) - log_beta - (2.0 * gamma - 1.0) * math.log(math.sin(theta))
    return math.exp(log_pref) * _md_quadrature(integrand, theta, tol)


def hermite(nu: float, x: float) -> float:
    """Hermite function H_nu(x) for real nu through two 1F1 series."""
    nu, x = float(nu), float(x)
    x2 = x * x
    even = kummer_1f1(-0.5 * nu, 0.5, x2) * rgamma(0.5 * (1.0 - nu))
    odd = 2.0 * x * kummer_1f1(0.5 * (1.0 - nu), 1.5, x2) * rgamma(-0.5 * nu)
    return 2.0**nu * math.sqrt(math.pi) * (even - odd)


def hermite_limit_oracle(nu: float, x: float, gamma_large: float) -> float:
    """2**nu gamma**(nu/2) C_nu^gamma(x/sqrt(gamma)), tending to H_nu(x) as gamma grows."""
    if gamma_large < 1e3:
        raise ValueError("gamma_large must be at least 1e3")
    g = float(gamma_large)
    return 2.0**nu * g ** (0.5 * nu) * gegenbauer_hat(nu, g, x / math.sqrt(g))


def jacobi_hat_sequence(n_max: int, p: JacobiParams, x) -> np.ndarray:
    """P_hat_n^(a,b)(x) for n = 0..n_max; shape (n_max+1,) + shape(x).

    Runs the classical recurrence on P_n^(a,b) and divides by the binomial
    normalization Gamma(n+a+1)/(Gamma(a+1) Gamma(n+1)).
    """
    x = np.asarray(x, dtype=float)
    a, b = p.alpha, p.beta
    ab = a + b
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max == 0:
        return out
    p_prev = np.ones_like(x)
    p_cur = (a + 1.0) + 0.5 * (ab + 2.0) * (x - 1.0)
    norm = a + 1.0  # binomial(n + a, n) at n = 1
    out[1] = p_cur / norm
    for n in range(2, n_max + 1):
        s = 2.0 * n + ab
        c1 = 2.0 * n * (n + ab) * (s - 2.0)
        c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b)
        c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s
        p_prev, p_cur = p_cur, (c2 * p_cur - c3 * p_prev) / c1
        norm *= (n + a) / n
        out[n] = p_cur / norm
    out[:, x == 1.0] = 1.0  # exact boundary value
    return out


def jacobi_poly_recurrence(n: int, p: JacobiParams, x: float) -> float:
    if n < 0:
        raise ValueError("degree must be non-negative")
    return float(jacobi_hat_sequence(n, p, x)[n])


def hermite_scaled_sequence(n_max: int, x) -> np.ndarray:
    """h_n = H_n(x) / sqrt(2**n n!) for n = 0..n_max (no overflow)."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max == 0:
        return out
    out[1] = math.sqrt(2.0) * x
    for n in range(1, n_max):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * x * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def jacobi_derivative_at_one(nu: float, p: JacobiParams) -> float:
    """d/dy P_hat_nu^(a,b)(y) at y = 1, equal to nu (nu + 2 gamma) / (2 (1 + a)).

    Note the denominator uses the first parameter of ``p``: for the swapped
    factor P_hat^(b,a) pass ``p.swapped()``.
    """
    return nu * (nu + 2.0 * p.gamma) / (2.0 * (1.0 + p.alpha))

