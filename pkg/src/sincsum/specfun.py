"""Scalar special functions: log-gamma, gamma ratios, sinc, 2F1, 1F1 and K(m).

Everything here works on real binary64 scalars and is free of global state.
"""
from __future__ import annotations

import math

__all__ = [
    "SpecialFunctionError",
    "PoleError",
    "DomainError",
    "ConvergenceError",
    "Z_SWITCH",
    "N_SERIES",
    "M_MAX",
    "is_nonpositive_integer",
    "ln_gamma",
    "rgamma",
    "gamma_ratio",
    "sinpi",
    "sinc",
    "gauss_2f1",
    "hyp2f1_half",
    "elliptic_k",
    "kummer_1f1",
]

Z_SWITCH = 0.5
N_SERIES = 20000
M_MAX = 1.0 - 1e-15
_EPS = 2.0 ** -53


class SpecialFunctionError(ArithmeticError):
    """Base class for evaluation failures in this module."""


class PoleError(SpecialFunctionError):
    pass


class DomainError(SpecialFunctionError, ValueError):
    pass


class ConvergenceError(SpecialFunctionError):
    pass


def is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def ln_gamma(x: float) -> tuple[float, int]:
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))``.

    Raises PoleError at x = 0, -1, -2, ...
    """
    x = float(x)
    if is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x!r}")
    if x > 0:
        return math.lgamma(x), 1
    sign = -1 if math.floor(x) % 2 else 1
    return math.lgamma(x), sign


def rgamma(x: float) -> float:
    """1/Gamma(x), which is entire: exactly 0 at the poles of Gamma."""
    if is_nonpositive_integer(x):
        return 0.0
    lg, s = ln_gamma(x)
    return s * math.exp(-lg)


def gamma_ratio(a: float, b: float) -> float:
    """Gamma(a)/Gamma(b) evaluated in log space.

    If b alone is a pole the ratio is 0.  If both are poles the ratio is
    taken as the limit Gamma(a+e)/Gamma(b+e), e -> 0, which equals
    (-1)**(a-b) * Gamma(1-b)/Gamma(1-a).
    """
    a_pole = is_nonpositive_integer(a)
    b_pole = is_nonpositive_integer(b)
    if a_pole and b_pole:
        lb, sb = ln_gamma(1.0 - b)
        la, sa = ln_gamma(1.0 - a)
        parity = -1 if int(a - b) % 2 else 1
        return parity * sb * sa * math.exp(lb - la)
    if b_pole:
        return 0.0
    if a_pole:
        raise PoleError(f"Gamma({a!r})/Gamma({b!r}) is undefined: numerator pole")
    if 1e-300 < a < 170.0 and 1e-300 < b < 170.0:
        return math.gamma(a) / math.gamma(b)
    la, sa = ln_gamma(a)
    lb, sb = ln_gamma(b)
    if la - lb > 709.78:
        return sa * sb * math.inf
    return sa * sb * math.exp(la - lb)


def sinpi(z: float) -> float:
    """sin(pi*z) with exact zeros at the integers and exact +-1 at half-integers."""
    z = float(z)
    if z.is_integer():
        return 0.0
    r = math.fmod(z, 2.0)  # r in (-2, 2), same sign as z
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    # r in [-1, 1]; fold to [-1/2, 1/2] using sin(pi r) = sin(pi (1 - r))
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    if abs(r) == 0.5:
        return math.copysign(1.0, r)
    return math.sin(math.pi * r)


def sinc(z: float) -> float:
    """Normalized sinc, sin(pi z)/(pi z), with sinc(0) = 1."""
    z = abs(float(z))
    if z < 1e-4:
        y = (math.pi * z) ** 2
        return 1.0 - y / 6.0 * (1.0 - y / 20.0)
    return sinpi(z) / (math.pi * z)


def _series_2f1(a: float, b: float, c: float, z: float) -> float:
    term = 1.0
    total = 1.0
    comp = 0.0
    for n in range(N_SERIES):
        num = (a + n) * (b + n)
        if num == 0.0:
            return total + comp
        den = (c + n) * (n + 1)
        if den == 0.0:
            raise PoleError(f"2F1 parameter c={c!r} hits a pole before termination")
        ratio = num / den * z
        term *= ratio
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        r = abs(ratio)
        if n > 2 and r < 1.0:
            # tail bounded by |term| r/(1-r) once the ratio settles below 1
            if abs(term) * r / (1.0 - r) <= _EPS * abs(total):
                return total
    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; {z}) not converged within {N_SERIES} terms"
    )


def gauss_2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z < 1.

    Direct series on [0, Z_SWITCH], Euler transformation on (Z_SWITCH, 1),
    Pfaff transformation z -> z/(z-1) for z < 0.
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    if not z < 1.0:
        raise DomainError(f"2F1 requires z < 1, got {z!r}")
    if z == 0.0:
        return 1.0
    terminating = is_nonpositive_integer(a) or is_nonpositive_integer(b)
    if is_nonpositive_integer(c) and not terminating:
        raise PoleError(f"2F1 denominator parameter c={c!r} is a pole")
    if z < 0.0:
        w = z / (z - 1.0)
        # keep a terminating parameter in place so the transformed series terminates too
        if is_nonpositive_integer(b) and not is_nonpositive_integer(a):
            a, b = b, a
        return (1.0 - z) ** (-a) * gauss_2f1(a, c - b, c, w)
    if z <= Z_SWITCH or terminating:
        return _series_2f1(a, b, c, z)
    return (1.0 - z) ** (c - a - b) * _series_2f1(c - a, c - b, c, z)


def elliptic_k(m: float) -> float:
    """Complete elliptic integral of the first kind K(m), m = k**2.

    AGM iteration for 0 <= m < 1; negative m uses the imaginary-modulus
    transformation K(m) = K(m/(m-1)) / sqrt(1-m).
    """
    m = float(m)
    if m >= 1.0 or m > M_MAX:
        raise DomainError(f"K(m) diverges at m = 1; got m={m!r}")
    if m < 0.0:
        return elliptic_k(m / (m - 1.0)) / math.sqrt(1.0 - m)
    a, g = 1.0, math.sqrt(1.0 - m)
    for _ in range(64):
        if abs(a - g) <= 4 * _EPS * a:
            break
        a, g = 0.5 * (a + g), math.sqrt(a * g)
    return math.pi / (2.0 * a)


def hyp2f1_half(z: float) -> float:
    """2F1(1/2, 1/2; 1; z) for any z < 1, through K(z)."""
    return 2.0 / math.pi * elliptic_k(z)


def kummer_1f1(a: float, b: float, z: float) -> float:
    """Confluent hypergeometric 1F1(a; b; z) by direct series.

    Terms are accumulated with math.fsum.  Accurate to ~1e-10 relative for
    |z| <= 25 unless the result itself suffers heavy cancellation.
    """
    a, b, z = float(a), float(b), float(z)
    if is_nonpositive_integer(b):
        raise PoleError(f"1F1 parameter b={b!r} is a pole")
    terms = [1.0]
    term = 1.0
    running = 1.0
    for n in range(N_SERIES):
        if a + n == 0.0:
            return math.fsum(terms)
        ratio = (a + n) / ((b + n) * (n + 1)) * z
        term *= ratio
        terms.append(term)
        running += term
        r = abs(ratio)
        if n + 1 > abs(z) and r < 1.0 and abs(term) * r / (1.0 - r) <= _EPS * abs(running):
            return math.fsum(terms)
    raise ConvergenceError(f"1F1({a}; {b}; {z}) not converged within {N_SERIES} terms")
