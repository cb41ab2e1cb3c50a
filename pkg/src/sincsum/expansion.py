"""Sampling-theorem summation in the degree variable.

A product family f_nu (Legendre, Gegenbauer, Jacobi or Hermite factors)
is rebuilt from its integer samples f_n,

    f_nu = sum_{n >= 0} c_{nu,n}^(gamma) f_n,
    c_{nu,n}^(gamma) = sin(pi (nu-n))/pi * (1/(nu-n) - 1/(nu+n+2 gamma)),

or, for 2 gamma = 1, 2, ..., by the bilateral sinc series.  Partial sums
are accelerated with Wynn's epsilon algorithm.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import gammaln

from .functions import (
    JacobiParams,
    hermite,
    hermite_scaled_sequence,
    jacobi_hat,
    jacobi_hat_sequence,
)
from .specfun import PoleError, gamma_ratio, rgamma, sinpi

__all__ = [
    "FamilyKind",
    "FamilySpec",
    "InvalidSpecError",
    "AccelerationBreakdown",
    "OutsideDomainWarning",
    "TruncationConfig",
    "SeriesEstimate",
    "coeff_c",
    "normalization",
    "family_samples",
    "family_value",
    "wynn_epsilon",
    "accelerate",
    "sampling_sum",
    "bilateral_sinc_sum",
    "in_domain",
    "spec_in_domain",
    "residual",
]


class InvalidSpecError(ValueError):
    pass


class AccelerationBreakdown(ArithmeticError):
    """Wynn's table hit a zero difference before producing any estimate."""

    def __init__(self, message: str, raw_value: float):
        super().__init__(message)
        self.raw_value = raw_value


class OutsideDomainWarning(UserWarning):
    pass


class FamilyKind(str, Enum):
    LEGENDRE = "legendre"
    GEGENBAUER = "gegenbauer"
    JACOBI_PAIR = "jacobi_pair"
    JACOBI_PRODUCT = "jacobi_product"
    HERMITE_PAIR = "hermite_pair"
    HERMITE_SINGLE = "hermite_single"


_HERMITE = (FamilyKind.HERMITE_PAIR, FamilyKind.HERMITE_SINGLE)


def _points_from(thetas, xs) -> tuple[float, ...]:
    if (thetas is None) == (xs is None):
        raise InvalidSpecError("give exactly one of thetas or xs")
    if xs is None:
        xs = [math.cos(t) for t in thetas]
    pts = tuple(float(x) for x in xs)
    if not pts:
        raise InvalidSpecError("a family needs at least one evaluation point")
    for x in pts:
        if not -1.0 < x <= 1.0:
            raise InvalidSpecError(f"evaluation point {x!r} outside (-1, 1]")
    return pts


@dataclass(frozen=True)
class FamilySpec:
    """A product f_nu of N functions of one family at fixed points.

    ``points`` holds x_i = cos(theta_i) for the Jacobi-type kinds and the
    real arguments for Hermite kinds.  Build instances with the class
    constructors, which enforce the admissible parameter patterns.
    """

    kind: FamilyKind
    gamma: float
    params: tuple[JacobiParams, ...]
    points: tuple[float, ...]
    epsilon: int = 0
    valid_by_paper: bool = field(default=True, compare=False)

    @classmethod
    def legendre(cls, thetas=None, *, xs=None) -> "FamilySpec":
        pts = _points_from(thetas, xs)
        return cls(FamilyKind.LEGENDRE, 0.5, (JacobiParams(0.0, 0.0),) * len(pts), pts)

    @classmethod
    def gegenbauer(cls, gamma: float, thetas=None, *, xs=None) -> "FamilySpec":
        pts = _points_from(thetas, xs)
        p = JacobiParams.gegenbauer(gamma)
        return cls(FamilyKind.GEGENBAUER, p.gamma, (p,) * len(pts), pts)

    @classmethod
    def jacobi(cls, params: Sequence, thetas=None, *, xs=None) -> "FamilySpec":
        """Product of Jacobi factors, one (alpha, beta) per point.

        Two factors with swapped parameters form a JacobiPair.  Any other
        multi-factor product with some alpha != beta is still built but
        flagged ``valid_by_paper=False``.
        """
        pts = _points_from(thetas, xs)
        ps = tuple(p if isinstance(p, JacobiParams) else JacobiParams(*p) for p in params)
        if len(ps) != len(pts):
            raise InvalidSpecError("need one (alpha, beta) per evaluation point")
        gammas = {round(p.gamma, 12) for p in ps}
        if len(gammas) != 1:
            raise InvalidSpecError("all factors must share alpha + beta")
        gamma = ps[0].gamma
        if len(ps) == 2 and ps[0] == ps[1].swapped():
            return cls(FamilyKind.JACOBI_PAIR, gamma, ps, pts)
        valid = len(ps) == 1 or all(p.alpha == p.beta for p in ps)
        return cls(FamilyKind.JACOBI_PRODUCT, gamma, ps, pts, valid_by_paper=valid)

    @classmethod
    def hermite(cls, xs: Sequence[float], k: int | None = None, epsilon: int = 0) -> "FamilySpec":
        """Hermite products H_{k nu + eps}; only k N = 2 is admissible."""
        pts = tuple(float(x) for x in xs)
        n = len(pts)
        if k is None:
            k = 2 if n == 1 else 1
        if k * n != 2:
            raise InvalidSpecError(
                f"Hermite products need k*N/2 = 1; got k={k}, N={n}"
            )
        if n == 1:
            if epsilon not in (0, 1):
                raise InvalidSpecError("epsilon must be 0 or 1")
            return cls(FamilyKind.HERMITE_SINGLE, math.nan, (), pts, epsilon)
        if epsilon != 0:
            raise InvalidSpecError("epsilon only applies to the single Hermite case")
        return cls(FamilyKind.HERMITE_PAIR, math.nan, (), pts)

    @property
    def n_factors(self) -> int:
        return len(self.points)

    @property
    def is_hermite(self) -> bool:
        return self.kind in _HERMITE

    @property
    def thetas(self) -> tuple[float, ...]:
        if self.is_hermite:
            raise InvalidSpecError("Hermite specs have no angles")
        return tuple(math.acos(x) for x in self.points)

    def with_point(self, i: int, x: float) -> "FamilySpec":
        pts = list(self.points)
        pts[i] = float(x)
        return FamilySpec(self.kind, self.gamma, self.params, tuple(pts),
                          self.epsilon, self.valid_by_paper)


@dataclass(frozen=True)
class TruncationConfig:
    n_max: int = 4000
    acceleration: str = "wynn_epsilon"
    tail_tol: float = 1e-8
    window: int = 40

    def __post_init__(self) -> None:
        if self.n_max < 8:
            raise ValueError("n_max must be at least 8")
        if not self.tail_tol > 0:
            raise ValueError("tail_tol must be positive")
        if self.acceleration not in ("none", "cesaro", "wynn_epsilon"):
            raise ValueError(f"unknown acceleration {self.acceleration!r}")
        if self.window < 3:
            raise ValueError("window must be at least 3")


class SeriesEstimate(NamedTuple):
    value: float
    est_tail: float


def coeff_c(nu: float, n: int, gamma: float) -> float:
    """c_{nu,n}^(gamma); equals 1 at nu = n and 0 at other integers nu."""
    d = nu - n
    s = sinpi(d)
    second = nu + n + 2.0 * gamma
    if second == 0.0:
        if s != 0.0:
            raise PoleError(f"c_(nu={nu}, n={n}) has a pole at nu + n + 2 gamma = 0")
        return 1.0 if d == 0.0 else 0.0
    first = 1.0 if d == 0.0 else s / (math.pi * d)
    return first - s / (math.pi * second)


def _coeff_array(nu: float, n: np.ndarray, gamma: float | None) -> np.ndarray:
    """c_{nu,n}^(gamma) for an array of n; gamma=None gives sinc(nu - n)."""
    n = np.asarray(n)
    nu = float(nu)
    if nu.is_integer():
        return (n == nu).astype(float)
    s = sinpi(nu) * np.where(n % 2 == 0, 1.0, -1.0)
    out = s / (math.pi * (nu - n))
    if gamma is not None:
        second = nu + n + 2.0 * gamma
        if np.any(second == 0.0):
            raise PoleError(f"nu={nu} meets a pole of c at nu + n + 2 gamma = 0")
        out = out - s / (math.pi * second)
    return out


def normalization(nu: float, gamma: float) -> float:
    """N_nu^(gamma) = Gamma(nu + 2 gamma) / Gamma(nu + 1)."""
    return gamma_ratio(nu + 2.0 * gamma, nu + 1.0)


def _normalization_array(n_max: int, gamma: float) -> np.ndarray:
    n = np.arange(n_max + 1, dtype=float)
    out = np.empty(n_max + 1)
    pos = n + 2.0 * gamma > 0
    out[pos] = np.exp(gammaln(n[pos] + 2.0 * gamma) - gammaln(n[pos] + 1.0))
    for k in np.nonzero(~pos)[0]:
        out[k] = gamma_ratio(k + 2.0 * gamma, k + 1.0)
    return out


def _hat_products(spec: FamilySpec, n_max: int) -> np.ndarray:
    prod = np.ones(n_max + 1)
    for p, x in zip(spec.params, spec.points):
        prod *= jacobi_hat_sequence(n_max, p, x)
    return prod


def family_samples(spec: FamilySpec, n_max: int) -> np.ndarray:
    """Integer-degree samples f_0, ..., f_{n_max} by recurrence."""
    if spec.kind is FamilyKind.HERMITE_SINGLE:
        eps = spec.epsilon
        m = 2 * n_max + eps
        h = hermite_scaled_sequence(m, spec.points[0])[eps::2]
        n = np.arange(n_max + 1, dtype=float)
        deg = 2.0 * n + eps
        log_scale = 0.5 * (deg * math.log(2.0) + gammaln(deg + 1.0)) \
            - n * math.log(4.0) - gammaln(n + 1.0)
        return h * np.exp(log_scale)
    if spec.kind is FamilyKind.HERMITE_PAIR:
        x, y = spec.points
        return hermite_scaled_sequence(n_max, x) * hermite_scaled_sequence(n_max, y)
    return _normalization_array(n_max, spec.gamma) * _hat_products(spec, n_max)


def family_value(spec: FamilySpec, nu: float) -> float:
    """f_nu at real degree, including the family's normalization prefactor."""
    nu = float(nu)
    if nu >= 0 and nu.is_integer():
        return float(family_samples(spec, int(nu))[-1])
    if spec.kind is FamilyKind.HERMITE_SINGLE:
        pref = 2.0 ** (-2.0 * nu) * rgamma(nu + 1.0)
        if pref == 0.0:
            return 0.0
        return pref * hermite(2.0 * nu + spec.epsilon, spec.points[0])
    if spec.kind is FamilyKind.HERMITE_PAIR:
        pref = 2.0 ** (-nu) * rgamma(nu + 1.0)
        if pref == 0.0:
            return 0.0
        x, y = spec.points
        return pref * hermite(nu, x) * hermite(nu, y)
    norm = normalization(nu, spec.gamma)
    if norm == 0.0:
        return 0.0
    value = norm
    for p, x in zip(spec.params, spec.points):
        value *= jacobi_hat(nu, p, x)
    return value


def wynn_epsilon(seq: Sequence[float]) -> SeriesEstimate:
    """Wynn's epsilon algorithm on a sequence of partial sums.

    Every even column of the table is a candidate; the one whose last two
    entries agree best is returned, with that disagreement as the tail
    estimate.  The table stops growing at the first zero difference.
    """
    s = np.asarray(seq, dtype=float)
    if len(s) < 3:
        raise ValueError("need at least three partial sums")
    best = SeriesEstimate(float(s[-1]), float(abs(s[-1] - s[-2])))
    if best.est_tail == 0.0:
        return best
    # repeated sums (stagnation at rounding level) would divide by zero
    s = s[np.r_[True, np.diff(s) != 0.0]]
    if len(s) < 3:
        return best
    prev = np.zeros(len(s) + 1)
    cur = s.copy()
    k = 0
    formed_even = False
    scale = max(float(np.max(np.abs(s))), 1e-300)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        while len(cur) > 1:
            d = np.diff(cur)
            if k % 2 == 0 and np.any(np.abs(d) <= 1e-300 * scale):
                break
            if k % 2 == 1 and np.any(d == 0.0):
                break
            nxt = prev[1:len(cur)] + 1.0 / d
            if not np.all(np.isfinite(nxt)):
                break
            prev, cur = cur, nxt
            k += 1
            if k % 2 == 0 and len(cur) >= 2:
                formed_even = True
                err = float(abs(cur[-1] - cur[-2]))
                if err <= best.est_tail:
                    best = SeriesEstimate(float(cur[-1]), err)
    if not formed_even and k < 2:
        raise AccelerationBreakdown(
            "epsilon table broke down before its first even column", float(s[-1])
        )
    return best


def _cesaro_tail_mean(s: np.ndarray) -> SeriesEstimate:
    half = s[len(s) // 2:]
    quarter = s[3 * len(s) // 4:]
    v = float(np.mean(half))
    return SeriesEstimate(v, float(abs(v - np.mean(quarter))))


def accelerate(partial_sums: np.ndarray, method: str, window: int = 40) -> SeriesEstimate:
    s = np.asarray(partial_sums, dtype=float)
    if method == "none":
        return SeriesEstimate(float(s[-1]), float(abs(s[-1] - s[-2])))
    if method == "cesaro":
        return _cesaro_tail_mean(s)
    if method == "wynn_epsilon":
        try:
            return wynn_epsilon(s[-window:])
        except AccelerationBreakdown as exc:
            warnings.warn(
                f"{exc}; raw value {exc.raw_value!r}, falling back to Cesaro mean",
                RuntimeWarning, stacklevel=3,
            )
            return _cesaro_tail_mean(s)
    raise ValueError(f"unknown acceleration {method!r}")


def in_domain(thetas: Sequence[float]) -> bool:
    """True iff sum |theta_i| < pi (the open domain D_N)."""
    return math.fsum(abs(float(t)) for t in thetas) < math.pi


def spec_in_domain(spec: FamilySpec) -> bool:
    if spec.kind is FamilyKind.HERMITE_SINGLE:
        return spec.points[0] > 0
    if spec.kind is FamilyKind.HERMITE_PAIR:
        return spec.points[0] + spec.points[1] > 0
    return in_domain(spec.thetas)


def _warn_outside(spec: FamilySpec) -> None:
    if not spec_in_domain(spec):
        warnings.warn(f"{spec.kind.value} points lie outside the expansion domain",
                      OutsideDomainWarning, stacklevel=3)


def _finish(partial: np.ndarray, t: TruncationConfig) -> SeriesEstimate:
    est = accelerate(partial, t.acceleration, t.window)
    if est.est_tail > t.tail_tol * max(1.0, abs(est.value)):
        warnings.warn(f"tail estimate {est.est_tail:.3g} exceeds tail_tol {t.tail_tol:g}",
                      RuntimeWarning, stacklevel=3)
    return est


def sampling_sum(spec: FamilySpec, nu: float,
                 t: TruncationConfig = TruncationConfig()) -> SeriesEstimate:
    """Accelerated partial sum of sum_n c_{nu,n} f_n up to t.n_max.

    Hermite kinds use sinc(nu - n) as coefficient.  Points outside the
    domain only trigger a warning.
    """
    _warn_outside(spec)
    n = np.arange(t.n_max + 1)
    coeff = _coeff_array(nu, n, None if spec.is_hermite else spec.gamma)
    partial = np.cumsum(coeff * family_samples(spec, t.n_max))
    return _finish(partial, t)


def bilateral_sinc_sum(spec: FamilySpec, nu: float,
                       t: TruncationConfig = TruncationConfig()) -> SeriesEstimate:
    """Symmetric partial sums of sum_{m=-K}^{K} sinc(nu - m) f_m.

    Requires 2 gamma in {1, 2, ...}.  Samples at negative m use
    N_m = Gamma(m+2g)/Gamma(m+1) (zero for -2g < m < 0, the double-pole
    limit below) and P_hat_m = P_hat_{-m-2g}, the a <-> b symmetry of 2F1.
    """
    if spec.is_hermite:
        raise InvalidSpecError("bilateral form is defined for Jacobi-type families")
    two_g = 2.0 * spec.gamma
    if not (two_g > 0 and abs(two_g - round(two_g)) < 1e-12):
        raise InvalidSpecError(f"bilateral sum needs 2*gamma in {{1,2,...}}, got {two_g!r}")
    two_g = int(round(two_g))
    _warn_outside(spec)
    k_max = t.n_max
    pos = family_samples(spec, k_max)
    hats = _hat_products(spec, k_max)
    neg = np.zeros(k_max + 1)  # neg[j] = f_{-j}, j >= 1
    for j in range(max(1, two_g), k_max + 1):
        m = -j
        neg[j] = gamma_ratio(m + two_g, m + 1.0) * hats[j - two_g]
    kk = np.arange(k_max + 1)
    w_pos = _coeff_array(nu, kk, None)
    w_neg = _coeff_array(nu, -kk, None)
    terms = w_pos * pos
    terms[1:] += w_neg[1:] * neg[1:]
    return _finish(np.cumsum(terms), t)


def residual(spec: FamilySpec, nu: float, t: TruncationConfig = TruncationConfig()) -> float:
    """|f_nu - accelerated sampling sum|."""
    return abs(family_value(spec, nu) - sampling_sum(spec, nu, t).value)




