"""Inverse Z-transform engines.

Five routes to the coefficient u_n = (1/2 pi i) oint u~(z) z^(-n-1) dz:

* ``trap``  - plain N-point rule on a circle |z| = r;
* ``sinh1`` - one-sided sinh-deformed contour (transform decays in a cone
  around the negative half-axis, or grows so that only upward-tilted
  contours work);
* ``sinh2`` - the same after the substitution z = w^2, which widens the
  usable cone and roughly halves the exponent budget;
* ``sinh3`` - symmetric route pairing u~(z) with u~(-z), for transforms
  analytic around the imaginary axis (two-sided distributions);
* ``log``   - logarithmically reparametrized vertical line, for transforms
  with exponential factors that rule every sinh cone out.

Selection helpers derive the step from an approximate strip norm and the
truncation length from the growth bound, so a tolerance is all a caller
has to supply.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import ceil, cos, exp, log, pi, sin
from typing import Optional, Sequence

import numpy as np

from .contours import (
    K_D,
    LogContour,
    SinhContour,
    arc_length_in_unit_disc,
    fit_sinh_contour,
    admissible_rpm,
    log_map,
    log_map_derivative,
    sinh_map,
    small_angle_params,
    strip_image,
)
from .errors import DomainError, NumericalError
from .functions import AnalyticFunction, Kind
from .summation import clog1p, sum_complex

_EPS_MACH = float(np.finfo(float).eps)
DEFAULT_M = 2.0 * log(1.0 / _EPS_MACH) / 3.0
_MAX_EXPONENT = 700.0

METHODS = ("trap", "sinh1", "sinh2", "sinh3", "log")
_AUTO_ORDER = ("sinh2", "sinh1", "sinh3", "log", "trap")


@dataclass(frozen=True)
class QuadratureGrid:
    """Equal-step grid in the transformed variable, with cached map values.

    ``nodes`` holds chi(j*zeta) for j = 0..N_half when ``folded`` (the
    negative side is recovered through conjugate symmetry), else for
    j = -N_half..N_half.  ``weights`` carries the map derivative factor.
    """

    zeta: float
    N_half: int
    Lambda: float
    nodes: np.ndarray
    weights: np.ndarray
    folded: bool
    ln_hardy: float
    d_half: float

    def __post_init__(self) -> None:
        expected = self.N_half + 1 if self.folded else 2 * self.N_half + 1
        if len(self.nodes) != expected:
            raise DomainError("grid node count does not match N_half/folding")
        if abs(self.Lambda - self.N_half * self.zeta) > 1e-12 * max(1.0, self.Lambda):
            raise DomainError("grid Lambda must equal N_half * zeta")

    @property
    def nodes_used(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class InversionReport:
    value: complex
    nodes_used: int
    est_discretization_error: float
    est_truncation_error: float
    method: str

    def __post_init__(self) -> None:
        if self.est_discretization_error < 0 or self.est_truncation_error < 0:
            raise DomainError("error estimates must be nonnegative")

    @property
    def real(self) -> float:
        return float(np.real(self.value))


# ---------------------------------------------------------------------------
# plain circle rule
# ---------------------------------------------------------------------------


def trapezoid_invert(u: AnalyticFunction, n: int, r: float, N: int) -> complex:
    """N-point circle rule for u_n at radius r; exact for monomials z^k
    whenever N > |k - n|."""
    desc = u.descriptor
    if not (desc.a_minus < r < desc.a_plus):
        raise DomainError(
            f"radius {r} outside the annulus of analyticity ({desc.a_minus}, {desc.a_plus})"
        )
    if N < 1:
        raise DomainError("N must be at least 1")
    if n * log(1.0 / r) > _MAX_EXPONENT:
        raise DomainError(f"r^-n overflows for r={r}, n={n}")
    k = np.arange(N)
    theta = 2.0 * pi * k / N
    z = r * np.exp(1j * theta)
    # phases of z^-n reduced mod N in exact integer arithmetic, so the
    # rotation never sees an argument beyond 2 pi
    phase = (2.0 * pi / N) * ((n * k) % N)
    vals = u.evaluator(z) * np.exp(-1j * phase) * r ** (-float(n))
    return sum_complex(vals) / N


def trapezoid_error_bound(hardy_norm: float, rho: float, N: int) -> float:
    """rho^-N / (1 - rho^-N) times the annulus norm."""
    if not rho > 1.0:
        raise DomainError("rho must exceed 1")
    q = rho ** (-float(N))
    return hardy_norm * q / (1.0 - q)


def trapezoid_node_estimate(eps: float, n: int, M: float) -> int:
    """(n/M)(E + 2M) with E = ln(1/eps), rounded up."""
    if not (0.0 < eps < 1.0):
        raise DomainError("eps must lie in (0, 1)")
    if n < 1 or M <= 0.0:
        raise DomainError("need n >= 1 and M > 0")
    E = log(1.0 / eps)
    return ceil((n / M) * (E + 2.0 * M))


# ---------------------------------------------------------------------------
# step / truncation rules shared by the accelerated engines
# ---------------------------------------------------------------------------


def step_from_hardy(d_half: float, H_appr: float, eps: float) -> float:
    """Step 2 pi d / ln(H/eps) keeping the discretization error near eps."""
    if d_half <= 0.0 or H_appr <= 0.0 or eps <= 0.0:
        raise DomainError("step_from_hardy needs positive arguments")
    if H_appr <= eps:
        raise DomainError("H_appr/eps must exceed 1")
    return 2.0 * pi * d_half / log(H_appr / eps)


def _step_from_ln_hardy(d_half: float, ln_hardy: float, eps: float) -> float:
    denom = ln_hardy + log(1.0 / eps)
    if denom <= 0.0:
        raise DomainError("degenerate step: norm estimate below tolerance")
    return 2.0 * pi * d_half / denom


def truncation_lambda(
    n: int,
    m_u: float,
    C_u: float,
    b: float,
    eps: float,
    reduce: float = 1.0,
    contour: Optional[SinhContour] = None,
) -> float:
    """Grid half-length: decay budget over (n - m) plus the in-disc allowance."""
    if n <= m_u:
        raise DomainError(f"need n > m_u, got n={n}, m_u={m_u}")
    if b <= 0.0 or C_u <= 0.0 or not (0.0 < reduce <= 1.0):
        raise DomainError("truncation_lambda needs b, C_u > 0 and reduce in (0, 1]")
    lam0 = arc_length_in_unit_disc(contour) if contour is not None else 0.0
    lam = log(C_u / eps) / (n - m_u) - log(b / 2.0) + lam0
    return lam * reduce


def _ln_hardy_default(n_step: int, r_minus: float) -> float:
    # ln(r_minus^-n + 10)
    return float(np.logaddexp(-n_step * log(r_minus), log(10.0)))


def _require_kind(u: AnalyticFunction, wanted: Kind, method: str, condition: str) -> None:
    if u.descriptor.kind is not wanted:
        others = ", ".join(applicable_methods(u))
        raise DomainError(
            f"model '{u.label or u.descriptor.kind.value}' does not satisfy "
            f"condition {condition} required by {method}; applicable methods: {others}"
        )


def applicable_methods(u: AnalyticFunction) -> tuple[str, ...]:
    kind = u.descriptor.kind
    out = []
    if kind is Kind.SINH1:
        out += ["sinh2", "sinh1"]
    if kind is Kind.SINH3:
        out.append("sinh3")
    if kind in (Kind.SINH1, Kind.SINH3, Kind.LOG):
        out.append("log")
    out.append("trap")
    return tuple(out)


def _build_sinh_grid(
    contour: SinhContour, zeta: float, N: int, folded: bool, ln_hardy: float
) -> QuadratureGrid:
    j = np.arange(0, N + 1) if folded else np.arange(-N, N + 1)
    y = zeta * j
    nodes = sinh_map(contour, y)
    weights = contour.b * np.cosh(1j * contour.omega + y)
    return QuadratureGrid(
        zeta=zeta,
        N_half=N,
        Lambda=N * zeta,
        nodes=nodes,
        weights=weights,
        folded=folded,
        ln_hardy=ln_hardy,
        d_half=contour.d_half,
    )


# ---------------------------------------------------------------------------
# parameter selection
# ---------------------------------------------------------------------------


def sinh1_select_params(
    u: AnalyticFunction,
    n: int,
    eps: float,
    M: Optional[float] = None,
    M1: Optional[float] = None,
    r_minus: Optional[float] = None,
    r_plus: Optional[float] = None,
    reduce: Optional[float] = None,
    n_step: Optional[int] = None,
    N_override: Optional[int] = None,
) -> tuple[SinhContour, QuadratureGrid]:
    desc = u.descriptor
    _require_kind(u, Kind.SINH1, "sinh1", "Z-SINH1")
    if n <= desc.growth_m:
        raise DomainError(f"need n > m_u = {desc.growth_m}")
    M = DEFAULT_M if M is None else M
    M1 = 0.9 * M if M1 is None else M1
    n_step = n if n_step is None else n_step
    reduce = 1.0 if reduce is None else reduce

    # Default crossing interval: hug the circle from inside.  The width is
    # min(2/n, the M amplification budget); wider intervals would let
    # z^-n amplify rounding noise past the tolerance.
    if r_plus is None:
        r_plus = 1.0 if desc.a_plus > 1.0 else desc.a_plus * exp(-(M - M1) / n)
    rp = r_plus
    rm = max(rp * exp(-2.0 * M1 / n), rp - 2.0 / n) if r_minus is None else r_minus
    if desc.positive_omega_only:
        omega, d_half = small_angle_params(rp - rm)
        if not admissible_rpm(rm, rp, omega, d_half):
            raise DomainError("fitted contour loses its distance to the origin (r bounds)")
    else:
        alpha = desc.cone_angle
        if alpha <= pi / 2:
            raise DomainError(
                "condition Z-SINH1 holds only with a cone wider than pi/2 here; "
                f"applicable methods: {', '.join(applicable_methods(u))}"
            )
        omega = pi / 4 - alpha / 2
        d_half = K_D * (alpha / 2 - pi / 4)
    if not (desc.a_minus < rm < rp <= desc.a_plus):
        raise DomainError(f"crossing interval ({rm}, {rp}) leaves the annulus")

    contour = fit_sinh_contour(rm, rp, omega, d_half)
    ln_hardy = _ln_hardy_default(n_step, rm)
    zeta = _step_from_ln_hardy(d_half, ln_hardy, eps)
    lam = truncation_lambda(n, desc.growth_m, desc.growth_C, contour.b, eps, reduce, contour)
    N = max(4, ceil(lam / zeta)) if N_override is None else N_override
    folded = u.conjugate_symmetric
    return contour, _build_sinh_grid(contour, zeta, N, folded, ln_hardy)


def sinh2_select_params(
    u: AnalyticFunction,
    n: int,
    eps: float,
    p: float = 1.0,
    M: Optional[float] = None,
    M1: Optional[float] = None,
    r_minus: Optional[float] = None,
    r_plus: Optional[float] = None,
    reduce: Optional[float] = None,
    n_step: Optional[int] = None,
    N_override: Optional[int] = None,
) -> tuple[SinhContour, QuadratureGrid]:
    """Contour/grid in the w-plane for the z = w^(2p) substitution."""
    desc = u.descriptor
    _require_kind(u, Kind.SINH1, "sinh2", "Z-SINH2")
    if p < 1.0:
        raise DomainError("power must satisfy p >= 1")
    if n <= 2.0 * desc.growth_m:
        raise DomainError(f"need n > m_v = {2.0 * desc.growth_m}")
    M = DEFAULT_M if M is None else M
    M1 = 0.9 * M if M1 is None else M1
    n_step = n if n_step is None else n_step
    reduce = 1.0 if reduce is None else reduce
    # Exponential right-half-plane growth still allows Re(w^2) <= 0, an
    # effective cone of 3*pi/4; otherwise the z-plane cone carries over.
    alpha2 = 0.75 * pi if desc.positive_omega_only else desc.cone_angle
    omega = pi / 4 - alpha2 / 2
    d_half = K_D * (alpha2 / 2 - pi / 4)
    if r_plus is None:
        root = desc.a_plus ** (1.0 / (2.0 * p))
        r_plus = 1.0 if root > 1.0 else root * exp(-(M - M1) / (2.0 * p * n))
    rp = r_plus
    if r_minus is None:
        rm = max(rp * exp(-M1 / (p * n)), rp - 2.0 / (p * n))
    else:
        rm = r_minus
    if not (desc.a_minus ** (1.0 / (2.0 * p)) <= rm < rp <= desc.a_plus ** (1.0 / (2.0 * p))):
        raise DomainError(f"w-plane interval ({rm}, {rp}) leaves the annulus")
    contour = fit_sinh_contour(rm, rp, omega, d_half)
    ln_hardy = _ln_hardy_default(ceil(2.0 * p * n_step), rm)
    zeta = _step_from_ln_hardy(d_half, ln_hardy, eps)
    lam = truncation_lambda(
        ceil(2.0 * p * n), 2.0 * desc.growth_m, desc.growth_C, contour.b, eps, reduce, contour
    )
    N = max(4, ceil(lam / zeta)) if N_override is None else N_override
    return contour, _build_sinh_grid(contour, zeta, N, u.conjugate_symmetric, ln_hardy)


def _sinh3_edge_ln_norm(
    u: AnalyticFunction, n: int, contour: SinhContour, lam_probe: float
) -> float:
    """log of the largest integrand modulus along the strip edges.

    Wide symmetric strips bend toward the origin where |chi|^-(n+1) blows
    up, so the crossing-based norm alone would let the step be far too
    coarse; probing the edges keeps the estimate honest.
    """
    y = np.linspace(0.0, lam_probe, 160)
    worst = -np.inf
    for v in (contour.d_half, -contour.d_half):
        z = contour.sigma + 1j * contour.b * np.sinh(1j * (contour.omega + v) + y)
        w = np.abs(contour.b * np.cosh(1j * (contour.omega + v) + y)) / (2.0 * pi)
        bracket = np.abs(u.evaluator(z)) + np.abs(u.evaluator(-z))
        ln_terms = np.log(w) + np.log(bracket + 1e-300) - (n + 1.0) * np.log(np.abs(z))
        worst = max(worst, float(np.max(ln_terms)))
    return worst


def sinh3_select_params(
    u: AnalyticFunction,
    n: int,
    eps: float,
    M: Optional[float] = None,
    M1: Optional[float] = None,
    r_minus: Optional[float] = None,
    r_plus: Optional[float] = None,
    reduce: Optional[float] = None,
    n_step: Optional[int] = None,
    N_override: Optional[int] = None,
    scan: int = 24,
) -> tuple[SinhContour, QuadratureGrid]:
    """Vertical-center contour with the strip width tuned by an edge probe.

    The candidate half-widths run up to K_D * gamma; for each the step is
    derived from the probed edge norm and the cheapest grid wins.
    """
    desc = u.descriptor
    _require_kind(u, Kind.SINH3, "sinh3", "Z-SINH3")
    if n <= desc.growth_m:
        raise DomainError(f"need n > m_u = {desc.growth_m}")
    M = DEFAULT_M if M is None else M
    M1 = 0.9 * M if M1 is None else M1
    n_step = n if n_step is None else n_step
    reduce = 1.0 if reduce is None else reduce
    if r_plus is None:
        r_plus = 1.0 if desc.a_plus > 1.0 else desc.a_plus * exp(-(M - M1) / n)
    rp = r_plus
    rm = max(rp * exp(-2.0 * M1 / n), rp - 2.0 / n) if r_minus is None else r_minus
    if not (desc.a_minus < rm < rp <= desc.a_plus):
        raise DomainError(f"crossing interval ({rm}, {rp}) leaves the annulus")
    ln_hardy_base = _ln_hardy_default(n_step, rm)
    best = None
    for k in range(1, scan + 1):
        d_half = K_D * desc.cone_angle * k / scan
        if d_half >= pi / 2:
            break
        contour = fit_sinh_contour(rm, rp, 0.0, d_half)
        lam = truncation_lambda(n, desc.growth_m, desc.growth_C, contour.b, eps, reduce, contour)
        ln_edge = _sinh3_edge_ln_norm(u, n, contour, lam + 2.0)
        ln_hardy = float(np.logaddexp(ln_hardy_base, ln_edge + log(4.0)))
        zeta = _step_from_ln_hardy(d_half, ln_hardy, eps)
        N = max(4, ceil(lam / zeta))
        if best is None or N <= best[0]:
            best = (N, contour, zeta, ln_hardy)
    N, contour, zeta, ln_hardy = best
    if N_override is not None:
        N = N_override
    return contour, _build_sinh_grid(contour, zeta, N, u.conjugate_symmetric, ln_hardy)


def log_select_params(
    u: AnalyticFunction,
    n: int,
    eps: float,
    r_minus: Optional[float] = None,
    r_plus: Optional[float] = None,
    n_step: Optional[int] = None,
    N_override: Optional[int] = None,
) -> tuple[LogContour, QuadratureGrid]:
    desc = u.descriptor
    if desc.kind not in (Kind.LOG, Kind.SINH3, Kind.SINH1):
        raise DomainError(
            "condition Z-LOG requires analyticity beyond a bare annulus; "
            f"applicable methods: {', '.join(applicable_methods(u))}"
        )
    if n <= desc.growth_m:
        raise DomainError(f"need n > m_u = {desc.growth_m}")
    n_step = n if n_step is None else n_step
    width = desc.a_plus - 1.0
    if width <= 0.0:
        raise DomainError("log contour needs a_plus > 1")
    rp = 1.0 + 0.9 * width if r_plus is None else r_plus
    rm = max(1.0 - 4.0 * width, 0.5) if r_minus is None else r_minus
    if not (desc.a_minus < rm < rp < desc.a_plus):
        raise DomainError(f"crossing interval ({rm}, {rp}) leaves the annulus")
    contour = LogContour(sigma=0.5 * (rm + rp), A=1.0 + (rp - rm) ** 0.25)
    d_half = contour.strip_half_width(rp)
    ln_hardy = _ln_hardy_default(n_step, rm)
    zeta = _step_from_ln_hardy(d_half, ln_hardy, eps)
    # growth along the strip is polynomial of degree m + m' * (2 d)
    m_eff = desc.growth_m + desc.growth_m_prime * 2.0 * d_half
    Y = 0.2
    while Y < 80.0:
        zmod = abs(complex(log_map(contour, Y)))
        if zmod > 1.0:
            w = float(log_map_derivative(contour, Y))
            ln_term = (
                log(zeta * w / pi)
                + log(desc.growth_C)
                + m_eff * log(1.0 + zmod)
                - (n + 1.0) * log(zmod)
            )
            if ln_term <= log(eps * 0.05):
                break
        Y += 0.05
    N = max(4, ceil(Y / zeta)) if N_override is None else N_override
    j = np.arange(0, N + 1) if u.conjugate_symmetric else np.arange(-N, N + 1)
    y = zeta * j
    grid = QuadratureGrid(
        zeta=zeta,
        N_half=N,
        Lambda=N * zeta,
        nodes=log_map(contour, y),
        weights=log_map_derivative(contour, y).astype(complex),
        folded=u.conjugate_symmetric,
        ln_hardy=ln_hardy,
        d_half=d_half,
    )
    return contour, grid


# ---------------------------------------------------------------------------
# engines
# ---------------------------------------------------------------------------


def _guard_exponent(exponents: np.ndarray) -> None:
    if float(np.max(np.abs(exponents.real))) > _MAX_EXPONENT:
        raise NumericalError("z^-(n+1) would overflow on this contour")


def _fold_sum(terms: np.ndarray, grid: QuadratureGrid) -> complex:
    if grid.folded:
        coeff = np.ones(len(terms))
        coeff[1:] = 2.0
        return complex(grid.zeta * np.real(sum_complex(coeff * terms)))
    return grid.zeta * sum_complex(terms)


def _estimates(grid: QuadratureGrid, terms: np.ndarray, eps_floor: float = 0.0) -> tuple[float, float]:
    q_exp = -2.0 * pi * grid.d_half / grid.zeta
    est_disc = exp(min(grid.ln_hardy + q_exp, _MAX_EXPONENT)) / max(1.0 - exp(q_exp), 0.5)
    t_last = abs(terms[-1]) * grid.zeta
    t_prev = abs(terms[-2]) * grid.zeta if len(terms) > 1 else 0.0
    ratio = min(t_last / t_prev, 0.9) if t_prev > 0.0 else 0.5
    est_trunc = t_last * (1.0 + ratio / max(1.0 - ratio, 0.1))
    return max(est_disc, eps_floor), max(est_trunc, eps_floor)


def _domain_check_sinh(u: AnalyticFunction, contour: SinhContour) -> None:
    img = strip_image(contour)
    desc = u.descriptor
    if not (desc.a_minus <= img.r_minus and img.r_plus <= desc.a_plus * (1.0 + 1e-12)):
        raise DomainError("contour strip leaves the annulus of analyticity")


def sinh1_invert(
    u: AnalyticFunction, n: int, c: SinhContour, g: QuadratureGrid
) -> InversionReport:
    if n <= u.descriptor.growth_m:
        raise DomainError(f"need n > m_u = {u.descriptor.growth_m}")
    _domain_check_sinh(u, c)
    ln_z = np.log(g.nodes)
    expo = -(n + 1.0) * ln_z
    _guard_exponent(expo)
    terms = (g.weights / (2.0 * pi)) * u.evaluator(g.nodes) * np.exp(expo)
    value = _fold_sum(terms, g)
    disc, trunc = _estimates(g, terms)
    return InversionReport(value, g.nodes_used, disc, trunc, "sinh1")


def sinh2_invert(
    u: AnalyticFunction, n: int, p: float, c: SinhContour, g: QuadratureGrid
) -> InversionReport:
    if p < 1.0:
        raise DomainError("power must satisfy p >= 1")
    if n <= 2.0 * u.descriptor.growth_m:
        raise DomainError(f"need n > m_v = {2.0 * u.descriptor.growth_m}")
    ln_w = np.log(g.nodes)
    expo = -(2.0 * p * n + 1.0) * ln_w
    _guard_exponent(expo)
    z = np.exp(2.0 * p * ln_w)
    terms = (p * g.weights / pi) * u.evaluator(z) * np.exp(expo)
    value = _fold_sum(terms, g)
    disc, trunc = _estimates(g, terms)
    return InversionReport(value, g.nodes_used, disc, trunc, "sinh2")


def sinh3_invert(
    u: AnalyticFunction,
    n: int,
    c: SinhContour,
    g: QuadratureGrid,
    p: float = 1.0,
    phi: float = 0.0,
) -> InversionReport:
    if p < 1.0:
        raise DomainError("power must satisfy p >= 1")
    if n <= u.descriptor.growth_m:
        raise DomainError(f"need n > m_u = {u.descriptor.growth_m}")
    if phi != 0.0 and g.folded:
        raise DomainError("rotated integrand is not conjugate-symmetric; use an unfolded grid")
    ln_w = np.log(g.nodes)
    expo = -(p * n + 1.0) * ln_w
    _guard_exponent(expo)
    z = np.exp(p * ln_w) if p != 1.0 else g.nodes
    rot = complex(cos(phi), sin(phi))
    parity = 1.0 if n % 2 == 0 else -1.0
    bracket = u.evaluator(z * rot) + parity * u.evaluator(-z * rot)
    terms = (p * g.weights / (2.0 * pi)) * bracket * np.exp(expo)
    value = _fold_sum(terms, g)
    if phi != 0.0:
        value *= complex(cos(n * phi), -sin(n * phi))
    disc, trunc = _estimates(g, terms)
    return InversionReport(value, g.nodes_used, disc, trunc, "sinh3")


def log_invert(
    u: AnalyticFunction, n: int, c: LogContour, g: QuadratureGrid
) -> InversionReport:
    if n <= u.descriptor.growth_m:
        raise DomainError(f"need n > m_u = {u.descriptor.growth_m}")
    ln_z = np.log(g.nodes)
    expo = -(n + 1.0) * ln_z
    _guard_exponent(expo)
    parity = 1.0 if n % 2 == 0 else -1.0
    bracket = u.evaluator(g.nodes) + parity * u.evaluator(-g.nodes)
    terms = (g.weights / (2.0 * pi)) * bracket * np.exp(expo)
    value = _fold_sum(terms, g)
    disc, trunc = _estimates(g, terms)
    return InversionReport(value, g.nodes_used, disc, trunc, "log")


# ---------------------------------------------------------------------------
# dispatch and batches
# ---------------------------------------------------------------------------


def auto_method(u: AnalyticFunction) -> str:
    return applicable_methods(u)[0]


def invert(
    u: AnalyticFunction,
    n: int,
    method: str = "auto",
    eps: float = 1e-15,
    **overrides,
) -> InversionReport:
    """Compute u_n with the requested (or best applicable) engine."""
    if method == "auto":
        method = auto_method(u)
    if method not in METHODS:
        raise DomainError(f"unknown method '{method}'")
    condition_names = {"sinh1": "Z-SINH1", "sinh2": "Z-SINH2", "sinh3": "Z-SINH3", "log": "Z-LOG"}
    if method != "trap" and method not in applicable_methods(u):
        raise DomainError(
            f"method {method} is not applicable: condition {condition_names[method]} "
            f"fails for this model; applicable methods: {', '.join(applicable_methods(u))}"
        )
    if method == "trap":
        r = overrides.get("trap_r")
        if r is None:
            M_trap = overrides.get("trap_M", 3.5)
            r = min(exp(-M_trap / n), 0.5 * (1.0 + u.descriptor.a_plus))
        N = overrides.get("trap_N") or trapezoid_node_estimate(eps, n, overrides.get("trap_M", 3.5))
        value = trapezoid_invert(u, n, r, N)
        return InversionReport(value, N, eps, 0.0, "trap")
    sel_keys = ("M", "M1", "r_minus", "r_plus", "reduce", "n_step", "N_override")
    sel = {k: overrides[k] for k in sel_keys if k in overrides}
    if method == "sinh1":
        c, g = sinh1_select_params(u, n, eps, **sel)
        return sinh1_invert(u, n, c, g)
    if method == "sinh2":
        p = overrides.get("p", 1.0)
        c, g = sinh2_select_params(u, n, eps, p=p, **sel)
        return sinh2_invert(u, n, p, c, g)
    if method == "sinh3":
        p = overrides.get("p", 1.0)
        phi = overrides.get("phi", 0.0)
        c, g = sinh3_select_params(u, n, eps, **sel)
        return sinh3_invert(u, n, c, g, p=p, phi=phi)
    sel.pop("M", None)
    sel.pop("M1", None)
    sel.pop("reduce", None)
    c, g = log_select_params(u, n, eps, **sel)
    return log_invert(u, n, c, g)


def _worker_count() -> int:
    env = os.environ.get("ZSINH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def moment_batch(
    u: AnalyticFunction,
    ns: Sequence[int],
    method: str = "auto",
    eps: float = 1e-15,
    **overrides,
) -> list[InversionReport]:
    """Moments for several n sharing one grid.

    The step is derived from the largest n, the truncation from the
    smallest; node values of the transform are evaluated once.  Results are
    ordered like ``ns`` and identical to one-at-a-time calls on that grid.
    """
    ns = list(ns)
    if not ns:
        return []
    if method == "auto":
        method = auto_method(u)
    if any(n <= u.descriptor.growth_m for n in ns):
        raise DomainError("every n must exceed the growth exponent m_u")
    n_lo, n_hi = min(ns), max(ns)
    if method == "trap":
        return [invert(u, n, "trap", eps, **overrides) for n in ns]
    sel_keys = ("M", "M1", "r_minus", "r_plus", "reduce", "N_override")
    sel = {k: overrides[k] for k in sel_keys if k in overrides}
    if method == "sinh1":
        c, g = sinh1_select_params(u, n_lo, eps, n_step=n_hi, **sel)
        run = lambda n: sinh1_invert(u, n, c, g)
    elif method == "sinh2":
        p = overrides.get("p", 1.0)
        c, g = sinh2_select_params(u, n_lo, eps, p=p, n_step=n_hi, **sel)
        run = lambda n: sinh2_invert(u, n, p, c, g)
    elif method == "sinh3":
        c, g = sinh3_select_params(u, n_lo, eps, n_step=n_hi, **sel)
        run = lambda n: sinh3_invert(u, n, c, g)
    elif method == "log":
        for key in ("M", "M1", "reduce"):
            sel.pop(key, None)
        c, g = log_select_params(u, n_lo, eps, n_step=n_hi, **sel)
        run = lambda n: log_invert(u, n, c, g)
    else:
        raise DomainError(f"unknown method '{method}'")
    workers = _worker_count()
    if workers == 1 or len(ns) < 8:
        return [run(n) for n in ns]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, ns))
