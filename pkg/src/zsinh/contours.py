"""Conformal maps used to deform the unit circle before quadrature.

Two families are provided: the sinh map ``sigma + i*b*sinh(i*omega + y)``,
whose image is a curve crossing the real axis near the unit circle with
straight asymptotes, and the slower log map ``sigma + i*y*log(A + y^2)``,
a vertical line with a logarithmically stretched parametrization.  Both
turn a circle integral into an integral over the real line whose integrand
is analytic in a strip, which is what makes the plain equal-step rule
converge geometrically.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import asin, cos, isfinite, log, pi, sin, sqrt

import numpy as np

from .errors import DomainError

# Default shrink factor applied to a maximal admissible strip half-width.
K_D = 0.9


@dataclass(frozen=True)
class SinhContour:
    """Parameters of the map y -> sigma + i*b*sinh(i*omega + y).

    ``d_half`` is the half-width of the strip around the real axis whose
    image is known to stay inside the analyticity region of the integrand.
    """

    sigma: float
    b: float
    omega: float
    d_half: float = 0.0

    def __post_init__(self) -> None:
        if not (self.b > 0.0 and isfinite(self.b)):
            raise DomainError(f"sinh contour scale b must be positive, got {self.b}")
        if abs(self.omega) >= pi / 2:
            raise DomainError(f"sinh contour angle must satisfy |omega| < pi/2, got {self.omega}")
        if not (0.0 <= self.d_half < pi / 2 - abs(self.omega)):
            raise DomainError(
                f"strip half-width must satisfy 0 <= d_half < pi/2 - |omega|, got {self.d_half}"
            )

    def keeps_origin_distance(self) -> bool:
        """True when the strip's distance to 0 is realized on the real axis."""
        w = self.omega + self.d_half
        return w <= 0.0 or self.b > self.sigma * sin(w)


@dataclass(frozen=True)
class LogContour:
    """Parameters of the map y -> sigma + i*y*log(A + y^2)."""

    sigma: float
    A: float

    def __post_init__(self) -> None:
        if not (self.A > 1.0):
            raise DomainError(f"log contour offset must satisfy A > 1, got {self.A}")

    def strip_half_width(self, r_plus: float) -> float:
        """Smallest half-width d solving sigma + d*log(A - d^2) = r_plus.

        d*log(A - d^2) rises to a peak before collapsing as d approaches
        sqrt(A-1); only the rising branch describes a valid strip, so the
        search is capped at the maximizer.
        """
        if r_plus <= self.sigma:
            raise DomainError("r_plus must exceed the contour center sigma")

        def slope(d: float) -> float:
            q = self.A - d * d
            return log(q) - 2.0 * d * d / q

        lo, hi = 0.0, sqrt(self.A - 1.0) * (1.0 - 1e-12)
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if slope(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        d_peak = 0.5 * (lo + hi)
        if self.sigma + d_peak * log(self.A - d_peak * d_peak) < r_plus:
            return d_peak
        lo, hi = 0.0, d_peak
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.sigma + mid * log(self.A - mid * mid) < r_plus:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


@dataclass(frozen=True)
class StripImage:
    """Real-axis crossings of the two strip boundary curves."""

    r_minus: float
    r_plus: float
    origin_distance: float

    def __post_init__(self) -> None:
        if not (0.0 < self.r_minus <= self.r_plus):
            raise DomainError("strip image requires 0 < r_minus <= r_plus")


def sinh_map(c: SinhContour, y):
    """Point of the contour at parameter y (scalar or array)."""
    return c.sigma + 1j * c.b * np.sinh(1j * c.omega + np.asarray(y, dtype=float))


def sinh_map_derivative(c: SinhContour, y):
    """dz/dy of the sinh map: i*b*cosh(i*omega + y)."""
    return 1j * c.b * np.cosh(1j * c.omega + np.asarray(y, dtype=float))


def log_map(c: LogContour, y):
    y = np.asarray(y, dtype=float)
    return c.sigma + 1j * y * np.log(c.A + y * y)


def log_map_derivative(c: LogContour, y):
    """Real weight factor log(A + y^2) + 2y^2/(A + y^2)."""
    y = np.asarray(y, dtype=float)
    q = c.A + y * y
    return np.log(q) + 2.0 * y * y / q


def fit_sinh_to_interval(
    r_minus: float, r_plus: float, omega: float, d_half: float
) -> tuple[float, float]:
    """(sigma, b) so that the strip boundaries cross the real axis at r-, r+.

    The boundary line at +d_half crosses at r_minus and the one at -d_half
    at r_plus.
    """
    if not (0.0 < r_minus < r_plus):
        raise DomainError(f"need 0 < r_minus < r_plus, got ({r_minus}, {r_plus})")
    if d_half <= 0.0:
        raise DomainError("d_half must be positive for interval fitting")
    den = 2.0 * cos(omega) * sin(d_half)
    if den == 0.0 or not isfinite(den):
        raise DomainError("degenerate fit: cos(omega)*sin(d_half) vanishes")
    b = (r_plus - r_minus) / den
    sigma = (r_plus * sin(omega + d_half) - r_minus * sin(omega - d_half)) / den
    return sigma, b


def fitted_sigma_offset(
    r_minus: float, r_plus: float, omega: float, d_half: float, center: float
) -> float:
    """sigma - center for the interval fit, computed without cancellation.

    Needed when r-, r+ hug ``center`` (typically 1): the direct difference
    sigma - center would lose most significant digits.
    """
    den = 2.0 * cos(omega) * sin(d_half)
    return ((r_plus - center) * sin(omega + d_half) - (r_minus - center) * sin(omega - d_half)) / den


def fit_sinh_contour(r_minus: float, r_plus: float, omega: float, d_half: float) -> SinhContour:
    sigma, b = fit_sinh_to_interval(r_minus, r_plus, omega, d_half)
    return SinhContour(sigma=sigma, b=b, omega=omega, d_half=d_half)


def admissible_rpm(r_minus: float, r_plus: float, omega: float, d_half: float) -> bool:
    """Whether the fitted strip keeps its distance to 0 on the real axis.

    Only meaningful for omega + d_half >= 0; below that the fitted strip
    always does, and True is returned.
    """
    w = omega + d_half
    if w < 0.0:
        return True
    return r_minus * (1.0 - sin(w) * sin(omega - d_half)) < r_plus * (1.0 - sin(w) ** 2)


def small_angle_params(delta: float) -> tuple[float, float]:
    """(omega, d_half) for contours pinched into a width-delta annulus gap.

    Used when only upward-tilted contours are allowed (transforms growing in
    the right half-plane) and the crossing interval (r-, r+) must sit close
    to 1; delta = r_plus - r_minus.
    """
    if not (delta > 0.0):
        raise DomainError(f"delta must be positive, got {delta}")
    omega = sqrt(9.0 / 48.0) * sqrt(delta)
    return omega, 2.0 * omega / 3.0


def origin_distance(c: SinhContour, at_strip_edge: bool = False) -> float:
    """Distance from the contour (or its strip edge) to the origin."""
    w = c.omega + c.d_half if at_strip_edge else c.omega
    return c.sigma - c.b * sin(w)


def strip_image(c: SinhContour) -> StripImage:
    """Real-axis crossings of the strip boundaries and the strip's origin distance."""
    r_minus = c.sigma - c.b * sin(c.omega + c.d_half)
    r_plus = c.sigma - c.b * sin(c.omega - c.d_half)
    dist = min(
        line_min_modulus(c.sigma, c.b, c.omega + v) for v in (-c.d_half, 0.0, c.d_half)
    )
    return StripImage(r_minus=r_minus, r_plus=r_plus, origin_distance=dist)


def line_min_modulus(sigma: float, b: float, omega_line: float) -> float:
    """min over y of |sigma + i*b*sinh(i*omega_line + y)|.

    The minimum sits on the real axis unless sigma*sin(omega_line) > b, in
    which case the curve bends around the origin and dips to
    cos(omega_line)*sqrt(sigma^2 - b^2).
    """
    s = sin(omega_line)
    if sigma * s <= b:
        return sigma - b * s
    if sigma <= b:
        return 0.0
    return cos(omega_line) * sqrt(sigma * sigma - b * b)


def max_strip_half_width(r_minus: float, r_plus: float) -> float:
    """Largest d with an admissible vertical-center fit (omega = 0).

    For omega = 0 the fitted strip keeps its origin distance exactly when
    sin(d)^2 < (r_plus - r_minus)/(r_plus + r_minus).
    """
    q = (r_plus - r_minus) / (r_plus + r_minus)
    if q <= 0.0:
        raise DomainError("need r_minus < r_plus")
    if q >= 1.0:
        return pi / 2
    return asin(sqrt(q))


def arc_length_in_unit_disc(c: SinhContour) -> float:
    """Arc length of the contour portion inside the unit disc (64-point rule)."""

    def modulus(y: float) -> float:
        return abs(complex(sinh_map(c, y)))

    if modulus(0.0) >= 1.0:
        return 0.0
    lo, hi = 0.0, 1.0
    while modulus(hi) < 1.0:
        hi *= 2.0
        if hi > 200.0:
            return 0.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if modulus(mid) < 1.0:
            lo = mid
        else:
            hi = mid
    y_exit = 0.5 * (lo + hi)
    nodes, weights = np.polynomial.legendre.leggauss(64)
    y = y_exit * nodes  # symmetric interval [-y_exit, y_exit]
    speed = np.abs(sinh_map_derivative(c, y))
    return float(np.sum(weights * speed) * y_exit)
