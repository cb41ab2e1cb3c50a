"""The alternating series G = sum_n (-1)^n (2n + 2 gamma) f_n.

Closed forms for Legendre products with N = 1..4 factors, the eta
invariants and (A, B, C) quartic coefficients that classify the N = 4
case, an Abel-regularized numerical oracle with extrapolation to t -> 1,
and smoothed pairings of the delta-function cases against test functions.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .expansion import FamilySpec, family_samples
from .functions import JacobiParams, jacobi_hat_sequence
from .quadrature import IntegrandSpec, integrate_adaptive, integrate_de
from .specfun import hyp2f1_half

__all__ = [
    "BOUNDARY_TOL",
    "U_PLUS",
    "U_MINUS",
    "GValue",
    "Table1Row",
    "AbelEstimate",
    "ExtrapolationWarning",
    "is_hermitian_unitary",
    "eta3",
    "eta3_product_form",
    "eta4",
    "abc_coefficients",
    "quartic_neg_eta",
    "table1_classify",
    "TABLE1",
    "g_closed",
    "g4_from_etas",
    "g_abel_oracle",
    "g_abel_extrapolate",
    "generating_gt",
    "delta_pairing",
    "addition_identity_check",
]

BOUNDARY_TOL = 1e-9
DEFAULT_T_GRID = (0.95, 0.97, 0.98, 0.99, 0.995)

_h = Fraction(-1, 2)
U_PLUS = tuple(tuple(_h * v for v in row) for row in (
    (1, 1, 1, -1), (1, 1, -1, 1), (1, -1, 1, 1), (-1, 1, 1, 1)))
U_MINUS = tuple(tuple(_h * v for v in row) for row in (
    (1, -1, -1, 1), (-1, 1, -1, 1), (-1, -1, 1, 1), (1, 1, 1, 1)))
_UP = np.array(U_PLUS, dtype=float)
_UM = np.array(U_MINUS, dtype=float)


def is_hermitian_unitary(u) -> bool:
    """Exact check of U = U^T and U U = I over the rationals."""
    n = len(u)
    sym = all(u[i][j] == u[j][i] for i in range(n) for j in range(n))
    sq = all(
        sum((u[i][k] * u[k][j] for k in range(n)), Fraction(0)) == (1 if i == j else 0)
        for i in range(n) for j in range(n)
    )
    return sym and sq


@dataclass(frozen=True)
class GValue:
    """Value of G: zero, a finite number, a delta descriptor or a boundary marker.

    For a delta, G = weight * delta(x - support_x) in the variable
    x = cos(theta_1).
    """

    kind: str
    value: float = 0.0
    support_x: float = math.nan
    weight: float = math.nan

    @classmethod
    def zero(cls) -> "GValue":
        return cls("zero")

    @classmethod
    def finite(cls, value: float) -> "GValue":
        return cls("finite", float(value))

    @classmethod
    def delta(cls, support_x: float, weight: float) -> "GValue":
        return cls("delta", support_x=float(support_x), weight=float(weight))

    @classmethod
    def boundary(cls) -> "GValue":
        return cls("boundary", math.nan)

    def as_float(self) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "finite":
            return self.value
        raise ValueError(f"G of kind {self.kind!r} has no pointwise value")


def eta3(t1, t2, t3):
    """cos^2 t1 + cos^2 t2 + cos^2 t3 + 2 cos t1 cos t2 cos t3 - 1 (array friendly)."""
    c1, c2, c3 = np.cos(t1), np.cos(t2), np.cos(t3)
    return c1 * c1 + c2 * c2 + c3 * c3 + 2.0 * c1 * c2 * c3 - 1.0


def eta3_product_form(t1, t2, t3):
    """4 cos((t1+t2+t3)/2) cos((-t1+t2+t3)/2) cos((t1-t2+t3)/2) cos((t1+t2-t3)/2)."""
    return 4.0 * (np.cos(0.5 * (t1 + t2 + t3)) * np.cos(0.5 * (-t1 + t2 + t3))
                  * np.cos(0.5 * (t1 - t2 + t3)) * np.cos(0.5 * (t1 + t2 - t3)))


def eta4(thetas) -> tuple:
    """(eta_plus, eta_minus) = 4 prod cos(theta U_pm).

    ``thetas`` may be a length-4 vector or an (..., 4) array.
    """
    th = np.asarray(thetas, dtype=float)
    ep = 4.0 * np.prod(np.cos(th @ _UP), axis=-1)
    em = 4.0 * np.prod(np.cos(th @ _UM), axis=-1)
    if th.ndim == 1:
        return float(ep), float(em)
    return ep, em


def abc_coefficients(thetas) -> tuple:
    """Coefficients of A t^4 + B t^2 + C = (1 + t^2)^2 (-eta) with t = tan(omega/2).

    A = -eta3(t1 + t2, t3, t4) (omega = pi), C = -eta3(t1 - t2, t3, t4)
    (omega = 0), B = A + C + 4 sin^2 t1 sin^2 t2.
    """
    th = np.asarray(thetas, dtype=float)
    t1, t2, t3, t4 = (th[..., i] for i in range(4))
    a = -eta3(t1 + t2, t3, t4)
    c = -eta3(t1 - t2, t3, t4)
    b = a + c + 4.0 * np.sin(t1) ** 2 * np.sin(t2) ** 2
    if th.ndim == 1:
        return float(a), float(b), float(c)
    return a, b, c


def quartic_neg_eta(thetas, omega):
    """-eta(omega) = 1 - c3^2 - c4^2 - 2 c3 c4 cos W - cos^2 W,
    cos W = cos t1 cos t2 + sin t1 sin t2 cos omega."""
    t1, t2, t3, t4 = (float(t) for t in thetas)
    c3, c4 = math.cos(t3), math.cos(t4)
    cw = math.cos(t1) * math.cos(t2) + math.sin(t1) * math.sin(t2) * np.cos(omega)
    return 1.0 - c3 * c3 - c4 * c4 - 2.0 * c3 * c4 * cw - cw * cw


def _sign(v: float) -> int:
    if abs(v) <= BOUNDARY_TOL:
        return 0
    return 1 if v > 0 else -1


# (sgn A, sgn B, sgn C) -> (eta sign pair as listed, integration domain, G tag)
TABLE1 = {
    (-1, -1, -1): ((1, 1), "empty", "0"),
    (-1, -1, 1): ((-1, 1), "[0, b]", "S3"),
    (-1, 1, -1): ((-1, -1), "[a, b]", "S1"),
    (-1, 1, 1): ((-1, 1), "[0, b]", "S3"),
    (1, 1, -1): ((1, -1), "[b, inf)", "S2"),
    (1, 1, 1): ((-1, -1), "[0, inf)", "S1"),
    (1, -1, -1): ((1, -1), "[b, inf)", "S2"),
}
FORBIDDEN_ABC = (1, -1, 1)


@dataclass(frozen=True)
class Table1Row:
    abc_signs: tuple[int, int, int]
    eta_signs: tuple[int, int]
    domain: str
    tag: str

    @property
    def boundary(self) -> bool:
        return self.tag == "boundary"

    @property
    def consistent(self) -> bool:
        """Eta signs agree with the row's listed pair, read as an unordered pair.

        Flipping the sign of theta_3 or theta_4 swaps eta_plus and eta_minus
        while leaving A, B, C unchanged, so the listed order cannot be
        significant.
        """
        if self.boundary:
            return True
        listed = TABLE1[self.abc_signs][0]
        return sorted(listed) == sorted(self.eta_signs)


def table1_classify(thetas: Sequence[float]) -> Table1Row:
    a, b, c = abc_coefficients(thetas)
    ep, em = eta4(thetas)
    abc = (_sign(a), _sign(b), _sign(c))
    etas = (_sign(ep), _sign(em))
    if 0 in abc or 0 in etas:
        return Table1Row(abc, etas, "", "boundary")
    if abc == FORBIDDEN_ABC:
        raise AssertionError(f"sign pattern (+,-,+) occurred at thetas={list(thetas)}")
    _, domain, tag = TABLE1[abc]
    return Table1Row(abc, etas, domain, tag)


def g4_from_etas(eta_plus: float, eta_minus: float) -> float:
    """G for four Legendre factors as a function of the two eta invariants."""
    ep, em = float(eta_plus), float(eta_minus)
    if ep > 0 and em > 0:
        return 0.0
    if ep < 0 and em < 0:
        return 2.0 / math.pi / math.sqrt(-ep) * hyp2f1_half((ep - em) / ep)
    if ep > 0:
        return 2.0 / math.pi / math.sqrt(ep) * hyp2f1_half(em / ep)
    return 2.0 / math.pi / math.sqrt(em) * hyp2f1_half(ep / em)


def g_closed(gamma: float, thetas: Sequence[float], **abel_kwargs) -> GValue:
    """Closed form of G for N = 1..4 Legendre factors (gamma = 1/2).

    Other gamma values are routed to ``g_abel_extrapolate``.
    """
    th = [float(t) for t in thetas]
    n = len(th)
    if n not in (1, 2, 3, 4):
        raise ValueError("closed forms exist for N = 1..4")
    if gamma != 0.5:
        est = g_abel_extrapolate(gamma, th, **abel_kwargs)
        return GValue.finite(est.estimate)
    if n == 1:
        return GValue.delta(-1.0, 2.0)
    if n == 2:
        return GValue.delta(-math.cos(th[1]), 2.0)
    if n == 3:
        e = float(eta3(*th))
        if abs(e) <= BOUNDARY_TOL:
            return GValue.boundary()
        if e > 0:
            return GValue.zero()
        return GValue.finite(2.0 / math.pi / math.sqrt(-e))
    ep, em = eta4(th)
    if abs(ep) <= BOUNDARY_TOL or abs(em) <= BOUNDARY_TOL:
        return GValue.boundary()
    if ep > 0 and em > 0:
        return GValue.zero()
    return GValue.finite(g4_from_etas(ep, em))


def _angle_samples(gamma: float, angles, n_max: int) -> tuple[np.ndarray, float]:
    if isinstance(angles, FamilySpec):
        if angles.is_hermite:
            raise ValueError("the G series is defined for Jacobi-type families")
        return family_samples(angles, n_max), angles.gamma
    xs = np.cos(np.asarray(angles, dtype=float))
    spec = FamilySpec.gegenbauer(gamma, xs=xs) if len(xs) else None
    return family_samples(spec, n_max), float(gamma)


def _auto_nmax(t: float) -> int:
    return int(math.ceil(45.0 / (1.0 - t))) + 50


def g_abel_oracle(gamma: float, angles, t: float, n_max: int | None = None) -> float:
    """sum_{n <= n_max} (-1)^n (2n + 2 gamma) t^n f_n for 0 < t < 1.

    ``angles`` is a sequence of theta_i (Gegenbauer factors with the given
    gamma) or a FamilySpec, whose own samples and gamma are then used.
    """
    if not 0.0 < t < 1.0:
        raise ValueError("Abel parameter t must lie in (0, 1)")
    n_max = _auto_nmax(t) if n_max is None else int(n_max)
    f, g = _angle_samples(gamma, angles, n_max)
    n = np.arange(n_max + 1, dtype=float)
    w = np.where(n % 2 == 0, 1.0, -1.0) * (2.0 * n + 2.0 * g) * np.exp(n * math.log(t))
    return float(np.sum(w * f))


class AbelEstimate(NamedTuple):
    estimate: float
    spread: float


class ExtrapolationWarning(RuntimeWarning):
    pass


def g_abel_extrapolate(gamma: float, angles, t_grid: Sequence[float] = DEFAULT_T_GRID,
                       n_max: int | None = None, tol: float = 1e-3) -> AbelEstimate:
    """Extrapolate Abel means to t = 1 with a polynomial in (1 - t).

    The fit uses every grid point (degree len-1); ``spread`` is the change
    against the fit of one degree lower.
    """
    tg = np.asarray(t_grid, dtype=float)
    if len(tg) < 3 or np.any(np.diff(tg) <= 0) or tg[0] <= 0 or tg[-1] >= 1:
        raise ValueError("t_grid must be strictly increasing in (0, 1) with >= 3 points")
    vals = np.array([g_abel_oracle(gamma, angles, t, n_max) for t in tg])
    h = 1.0 - tg
    full = np.polynomial.polynomial.polyfit(h, vals, len(tg) - 1)[0]
    lower = np.polynomial.polynomial.polyfit(h, vals, len(tg) - 2)[0]
    spread = float(abs(full - lower))
    if spread > 10.0 * tol:
        warnings.warn(f"Abel extrapolation spread {spread:.3g} is large",
                      ExtrapolationWarning, stacklevel=2)
    return AbelEstimate(float(full), spread)


def generating_gt(t: float, x):
    """g_t(x) = sum (2n+1) t^n P_n(x) = (1 - t^2) / (1 - 2 t x + t^2)^(3/2)."""
    x = np.asarray(x, dtype=float)
    return (1.0 - t * t) / (1.0 - 2.0 * t * x + t * t) ** 1.5


def delta_pairing(phi: Callable, t: float, y: float | None = None) -> float:
    """Smoothed pairing of G against a test function phi on [-1, 1].

    With ``y=None`` (one factor) this is int g_t(x) phi(x) dx, which tends
    to 2 phi(-1) as t -> -1.  With ``y`` given (two factors) the kernel is
    sum (2n+1) t^n P_n(x) P_n(y), tending to 2 delta(x + y), so the pairing
    tends to 2 phi(-y).
    """
    if not -1.0 < t < 1.0:
        raise ValueError("t must lie in (-1, 1)")
    if y is None:
        width = 1.0 + t if t < 0 else 1.0 - t
        pts = [p for p in (-1.0 + 10 * width, -1.0 + 100 * width) if -1.0 < p < 1.0]
        if t > 0:
            pts = [-p for p in pts]
        spec = IntegrandSpec(-1.0, 1.0, abs_tol=1e-13, rel_tol=1e-12)
        return integrate_adaptive(lambda x: float(generating_gt(t, x) * phi(x)), spec,
                                  points=pts or None).value
    # two factors: expand phi in Legendre polynomials, int P_n phi = phi_n
    nodes, weights = np.polynomial.legendre.leggauss(400)
    vals = np.asarray([phi(x) for x in nodes], dtype=float)
    n_max = 380
    p_nodes = jacobi_hat_sequence(n_max, JacobiParams(0.0, 0.0), nodes)
    coeffs = p_nodes @ (weights * vals)
    p_y = jacobi_hat_sequence(n_max, JacobiParams(0.0, 0.0), float(y))
    n = np.arange(n_max + 1, dtype=float)
    return float(np.sum((2.0 * n + 1.0) * t ** n * p_y * coeffs))


def addition_identity_check(n: int, gamma: float, alpha: float, beta: float) -> float:
    """|C_n(cos a) C_n(cos b) - (1/B(1/2,g)) int_0^pi sin^(2g-1) w C_n(cos W) dw|.

    cos W = cos a cos b + sin a sin b cos w; gamma = 1/2 is the Legendre case.
    """
    if not gamma > 0:
        raise ValueError("addition theorem needs gamma > 0")
    p = JacobiParams.gegenbauer(gamma)
    lhs = jacobi_hat_sequence(n, p, np.array([math.cos(alpha), math.cos(beta)]))[n]
    lhs = float(lhs[0] * lhs[1])
    ca, cb = math.cos(alpha), math.cos(beta)
    sa, sb = math.sin(alpha), math.sin(beta)

    def integrand(w):
        cw = np.clip(ca * cb + sa * sb * np.cos(w), -1.0, 1.0)
        return np.sin(w) ** (2.0 * gamma - 1.0) * jacobi_hat_sequence(n, p, cw)[n]

    def folded(w):
        # w and pi - w together, so the only singular end is w = 0
        cos_w = np.cos(w)
        s = np.sin(w) ** (2.0 * gamma - 1.0)
        up = np.clip(ca * cb + sa * sb * cos_w, -1.0, 1.0)
        dn = np.clip(ca * cb - sa * sb * cos_w, -1.0, 1.0)
        return s * (jacobi_hat_sequence(n, p, up)[n] + jacobi_hat_sequence(n, p, dn)[n])

    log_beta = math.lgamma(0.5) + math.lgamma(gamma) - math.lgamma(gamma + 0.5)
    if gamma < 0.5:
        spec = IntegrandSpec(0.0, 0.5 * math.pi, "lower", abs_tol=1e-13)
        integral = integrate_de(folded, spec).value
    else:
        spec = IntegrandSpec(0.0, math.pi, "none", abs_tol=1e-13)
        integral = integrate_adaptive(lambda w: float(integrand(np.array([w]))[0]), spec).value
    return abs(lhs - math.exp(-log_beta) * integral)
