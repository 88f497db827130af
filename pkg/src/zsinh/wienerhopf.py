"""Wiener-Hopf factorization of positive functions on the unit circle and
causal impulse responses computed from it.

The spectral density is first flattened: its explicit singular factors at
+-a, +-1/a and the constant are divided out, leaving a function A that tends
to 1 at 0 and infinity.  log A is then split into inner and outer parts by a
Cauchy integral evaluated on sinh-deformed contours, which concentrates the
nodes where A varies.  The causal factor feeds a symmetric-contour inversion
that yields the impulse response for a whole range of lags from one pair of
grids.

For densities with an annulus only 1e-4 .. 1e-5 wide, everything happens a
few ulps from the unit circle; the rational-family code path therefore works
throughout with shifted quantities z - 1 and log1p-style evaluations, never
forming the catastrophic differences directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, cos, exp, log, log1p, pi, sin
from typing import Callable, Optional

import numpy as np

from .contours import K_D, SinhContour, fitted_sigma_offset, fit_sinh_to_interval
from .errors import DomainError, NumericalError
from .functions import PSDSpec, assert_principal_branch
from .invz import QuadratureGrid
from .summation import clog1p

# Extra accuracy factor for the inner (factor) grid: absolute error of
# log A_- becomes relative error of h, so the factor is computed two digits
# tighter than the target.
_INNER_EXTRA = 100.0
_DEFAULT_CU = 10.0


@dataclass(frozen=True)
class Factorization:
    """Cached factorization state shared by a batch of impulse-response lags."""

    psd: PSDSpec
    d: float
    c_plus: float
    c_minus: float
    contour: SinhContour
    inner_grid: QuadratureGrid
    outer_grid: QuadratureGrid
    # shifted node values chi - 1 for inner and outer grids
    inner_shift: np.ndarray
    outer_shift: np.ndarray
    # log A at +chi1 and -chi1
    ln_A_inner_plus: np.ndarray
    ln_A_inner_minus: np.ndarray
    # log A_- at +chi and -chi (outer nodes)
    ln_Am_outer_plus: np.ndarray
    ln_Am_outer_minus: np.ndarray

    def __post_init__(self) -> None:
        m = self.psd.m_plus + self.psd.m_minus
        want = self.psd.c_inf * self.psd.a ** (-m)
        if abs(self.c_plus * self.c_minus - want) > 1e-13 * abs(want):
            raise NumericalError("factorization constants violate c+ c- = c_inf a^-m")


# ---------------------------------------------------------------------------
# pointwise building blocks
# ---------------------------------------------------------------------------


def regularized_A(psd: PSDSpec, z) -> np.ndarray:
    """PSD with its singular factors and constant divided out; tends to 1."""
    z = np.asarray(z, dtype=complex)
    a, mp_, mm = psd.a, psd.m_plus, psd.m_minus
    for base, name in (
        (a - z, "a - z"),
        (a - 1.0 / z, "a - 1/z"),
        (a + z, "a + z"),
        (a + 1.0 / z, "a + 1/z"),
    ):
        assert_principal_branch(base, name)
    reg = (
        np.power(a - z, -mp_)
        * np.power(a - 1.0 / z, -mp_)
        * np.power(a + z, -mm)
        * np.power(a + 1.0 / z, -mm)
    )
    return a ** (mp_ + mm) / psd.c_inf * reg * psd.evaluator(z)


def _monitor_winding(ln_values: np.ndarray) -> None:
    jumps = np.abs(np.diff(np.imag(ln_values)))
    if jumps.size and float(np.max(jumps)) > pi:
        raise NumericalError(
            "log of the regularized density winds along the contour; "
            "the density is not factorable as given"
        )


def _shifted_linear_factors(aa: float, em: np.ndarray, s: float):
    """(aa-z, aa-1/z, aa+z, aa+1/z) for z = s*(1+em), free of cancellation."""
    one = 1.0 + em
    amz = (aa - s) - s * em
    aminv = ((aa - s) + aa * em) / one
    apz = (aa + s) + s * em
    apinv = ((aa + s) + aa * em) / one
    return amz, aminv, apz, apinv


class _RationalCore:
    """Shifted-variable evaluation of log A, log PSD and log H- for the
    rational density family."""

    def __init__(self, psd: PSDSpec):
        self.a = psd.a
        self.ap, self.am = psd.rational
        self.mp = psd.m_plus
        self.mm = psd.m_minus
        self.dap = self.ap - self.a
        self.dam = self.am - self.a
        self.ln_const = self.mp * (log1p(self.a - 1.0) - log1p(self.ap - 1.0)) + self.mm * (
            log1p(self.a - 1.0) - log1p(self.am - 1.0)
        )
        self.ln_c_inf = self.mp * log1p(self.ap - 1.0) + self.mm * log1p(self.am - 1.0)

    def ln_A(self, em: np.ndarray, s: float) -> np.ndarray:
        amz, aminv, apz, apinv = _shifted_linear_factors(self.a, em, s)
        out = self.ln_const + self.mp * (clog1p(self.dap / amz) + clog1p(self.dap / aminv))
        return out + self.mm * (clog1p(self.dam / apz) + clog1p(self.dam / apinv))

    def ln_psd(self, em: np.ndarray, s: float) -> np.ndarray:
        pz, pinv, _, _ = _shifted_linear_factors(self.ap, em, s)
        _, _, qz, qinv = _shifted_linear_factors(self.am, em, s)
        return self.mp * (np.log(pz.astype(complex)) + np.log(pinv.astype(complex))) + self.mm * (
            np.log(qz.astype(complex)) + np.log(qinv.astype(complex))
        )

    def ln_H_minus_explicit_part(self, em: np.ndarray, s: float) -> np.ndarray:
        """log of (a-1/z)^m+ (a+1/z)^m- for z = s(1+em)."""
        _, aminv, _, apinv = _shifted_linear_factors(self.a, em, s)
        return self.mp * np.log(aminv.astype(complex)) + self.mm * np.log(apinv.astype(complex))


def _whf_contour(psd: PSDSpec, r_plus: Optional[float] = None) -> tuple[SinhContour, float]:
    """Factorization contour: omega = -gamma/2, crossing interval [1, r_plus].

    Returns the contour and the exact offset sigma - 1.
    """
    omega = -psd.gamma / 2.0
    d_half = K_D * psd.gamma / 2.0
    rp = 1.0 + 0.5 * (psd.a - 1.0) if r_plus is None else r_plus
    if not (1.0 < rp < psd.a):
        raise DomainError(f"factorization contour needs r_plus in (1, a), got {rp}")
    sigma, b = fit_sinh_to_interval(1.0, rp, omega, d_half)
    offset = fitted_sigma_offset(1.0, rp, omega, d_half, 1.0)
    contour = SinhContour(sigma=1.0 + offset, b=b, omega=omega, d_half=d_half)
    return contour, offset


def _node_shift(contour: SinhContour, offset: float, y: np.ndarray) -> np.ndarray:
    """chi(y) - 1 without cancellation: offset + i b sinh(i omega + y)."""
    return offset + 1j * contour.b * np.sinh(1j * contour.omega + y)


def _ln_A_at(psd: PSDSpec, core: Optional[_RationalCore], em: np.ndarray, s: float) -> np.ndarray:
    if core is not None:
        vals = core.ln_A(em, s)
    else:
        vals = np.log(regularized_A(psd, s * (1.0 + em)))
    _monitor_winding(vals)
    return vals


def compute_d(psd: PSDSpec, method: str = "auto", N_circle: int = 100_000) -> float:
    """Mean of -log A over the unit circle, by circle rule or sinh contour.

    ``auto`` uses the sinh route for narrow annuli (a - 1 < 0.01) where the
    circle rule would need a wasteful number of nodes to resolve log A.
    """
    if method not in ("auto", "circle_trapezoid", "sinh"):
        raise DomainError(f"unknown d method '{method}'")
    if method == "auto":
        method = "sinh" if psd.a - 1.0 < 0.01 else "circle_trapezoid"
    core = _RationalCore(psd) if psd.rational is not None else None
    if method == "circle_trapezoid":
        theta = np.arange(N_circle) * (2.0 * pi / N_circle)
        # e^(i theta) - 1 without cancellation
        em = -2.0 * np.sin(0.5 * theta) ** 2 + 1j * np.sin(theta)
        vals = _ln_A_at(psd, core, em, 1.0)
        d = -complex(np.sum(vals)) / N_circle
    else:
        contour, offset = _whf_contour(psd)
        eps1 = 1e-16
        zeta, N1 = _inner_step_count(psd, core, contour, offset, eps1)
        y = zeta * np.arange(-N1, N1 + 1)
        em = _node_shift(contour, offset, y)
        chi = 1.0 + em
        der = contour.b * np.cosh(1j * contour.omega + y)
        vals = _ln_A_at(psd, core, em, 1.0) + _ln_A_at(psd, core, em, -1.0)
        d = -zeta / (2.0 * pi) * complex(np.sum(der * vals / chi))
    if abs(d.imag) > 1e-10 * max(1.0, abs(d.real)):
        raise NumericalError(f"d came out non-real ({d}); density lacks 1/z symmetry")
    return float(d.real)


def _inner_step_count(
    psd: PSDSpec,
    core: Optional[_RationalCore],
    contour: SinhContour,
    offset: float,
    eps1: float,
    N_override: Optional[int] = None,
    zeta_override: Optional[float] = None,
) -> tuple[float, int]:
    """Inner (factor) grid step and half-count.

    The strip norm is driven by the kernel peak where the contour nearly
    touches the inverted one, scaled by the largest log A nearby; truncation
    follows the 1 + delta' decay of the integrand far out.
    """
    crossing_shift = offset - contour.b * sin(contour.omega)  # crossing - 1 > 0
    gap = crossing_shift * (2.0 + crossing_shift)  # crossing^2 - 1
    ln_A_big = float(
        np.max(np.abs(_ln_A_at(psd, core, np.array([crossing_shift + 0.0j]), -1.0)))
    )
    H1 = 10.0 + ln_A_big / gap
    zeta = 2.0 * pi * contour.d_half / log(H1 / eps1) if zeta_override is None else zeta_override
    # far-field scale of log A, sampled at |z| = 2 on the real and imaginary rays
    ca = max(
        float(np.max(np.abs(_ln_A_at(psd, core, np.array([1.0 + 0.0j]), 1.0)))) * 2.0,
        1e-18,
    ) * 4.0
    delta_prime = 0.9 * psd.delta
    lam1 = log(ca / eps1) / (1.0 + delta_prime) - log(contour.b / 2.0)
    N1 = max(8, ceil(lam1 / zeta)) if N_override is None else N_override
    return zeta, N1


def factorize(
    psd: PSDSpec,
    n_lo: int,
    n_hi: int,
    eps: float = 1e-15,
    r_plus: Optional[float] = None,
    N: Optional[int] = None,
    N1: Optional[int] = None,
    zeta: Optional[float] = None,
    C_u: float = _DEFAULT_CU,
) -> Factorization:
    """Build contour, grids, the constant d and all cached factor values."""
    m = psd.m_plus + psd.m_minus
    if not (n_lo > m):
        raise DomainError(f"need n_lo > m_plus + m_minus = {m}")
    if n_lo > n_hi:
        raise DomainError("need n_lo <= n_hi")
    core = _RationalCore(psd) if psd.rational is not None else None
    contour, offset = _whf_contour(psd, r_plus)
    eps1 = eps / _INNER_EXTRA
    zeta1, N1_ = _inner_step_count(psd, core, contour, offset, eps1, N1, zeta)
    zeta_ = zeta1
    lam = log(C_u / eps) / (n_lo - m) - log(contour.b / 2.0)
    N_ = max(8, ceil(lam / zeta_)) if N is None else N

    y1 = zeta1 * np.arange(-N1_, N1_ + 1)
    em1 = _node_shift(contour, offset, y1)
    chi1 = 1.0 + em1
    der1 = contour.b * np.cosh(1j * contour.omega + y1)
    ln_A_p1 = _ln_A_at(psd, core, em1, 1.0)
    ln_A_m1 = _ln_A_at(psd, core, em1, -1.0)
    d_val = -zeta1 / (2.0 * pi) * complex(np.sum(der1 * (ln_A_p1 + ln_A_m1) / chi1))
    if abs(d_val.imag) > 1e-10 * max(1.0, abs(d_val.real)):
        raise NumericalError(f"d came out non-real ({d_val})")
    d = float(d_val.real)

    y = zeta_ * np.arange(-N_, N_ + 1)
    em = _node_shift(contour, offset, y)
    inner_grid = QuadratureGrid(
        zeta=zeta1, N_half=N1_, Lambda=N1_ * zeta1, nodes=chi1, weights=der1,
        folded=False, ln_hardy=0.0, d_half=contour.d_half,
    )
    outer_grid = QuadratureGrid(
        zeta=zeta_, N_half=N_, Lambda=N_ * zeta_, nodes=1.0 + em,
        weights=contour.b * np.cosh(1j * contour.omega + y),
        folded=False, ln_hardy=0.0, d_half=contour.d_half,
    )
    # Validity geometry: evaluation points must stay outside the inverted
    # contour loops, whose outer radius is 1/min|chi1|.
    if float(np.min(np.abs(outer_grid.nodes))) * float(np.min(np.abs(chi1))) <= 1.0:
        raise NumericalError("outer nodes fall inside the inverted factor contour")

    lnAm_p, lnAm_m = _ln_A_minus_matrix(inner_grid, em1, ln_A_p1, ln_A_m1, em)
    mhalf = 0.5 * m
    ln_cinf = core.ln_c_inf if core is not None else log(psd.c_inf)
    c_plus = exp(0.5 * ln_cinf - mhalf * log1p(psd.a - 1.0) + 0.5 * d)
    c_minus = exp(0.5 * ln_cinf - mhalf * log1p(psd.a - 1.0) - 0.5 * d)
    return Factorization(
        psd=psd, d=d, c_plus=c_plus, c_minus=c_minus, contour=contour,
        inner_grid=inner_grid, outer_grid=outer_grid,
        inner_shift=em1, outer_shift=em,
        ln_A_inner_plus=ln_A_p1, ln_A_inner_minus=ln_A_m1,
        ln_Am_outer_plus=lnAm_p, ln_Am_outer_minus=lnAm_m,
    )


def _ln_A_minus_matrix(
    inner_grid: QuadratureGrid,
    em1: np.ndarray,
    ln_A_p1: np.ndarray,
    ln_A_m1: np.ndarray,
    em: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """log A_- at +(1+em) and -(1+em) via the doubled-contour kernel sum.

    chi1*chi -/+ 1 is assembled from the shifted nodes so that the kernel
    denominators keep full relative accuracy however close the contours
    squeeze to the circle.
    """
    chi1 = 1.0 + em1
    P = np.outer(em1, em) + em1[:, None] + em[None, :]  # chi1*chi - 1
    w_p = (inner_grid.weights / chi1) * ln_A_p1
    w_m = (inner_grid.weights / chi1) * ln_A_m1
    scale = inner_grid.zeta / (2.0 * pi)
    lnAm_plus = scale * (w_p @ (1.0 / P) - w_m @ (1.0 / (P + 2.0)))
    lnAm_minus = scale * (w_p @ (1.0 / (-P - 2.0)) - w_m @ (1.0 / (-P)))
    return lnAm_plus, lnAm_minus


def ln_A_minus(
    psd: PSDSpec,
    z,
    inner_grid: Optional[QuadratureGrid] = None,
    inner_contour: Optional[SinhContour] = None,
    eps: float = 1e-15,
) -> np.ndarray:
    """log of the outer factor at arbitrary admissible points z.

    Builds a default inner grid when none is supplied.  z must lie outside
    the inverted contour loops (|z| * min|chi1| > 1) and off the contour.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    core = _RationalCore(psd) if psd.rational is not None else None
    if inner_grid is None or inner_contour is None:
        contour, offset = _whf_contour(psd)
        zeta1, N1_ = _inner_step_count(psd, core, contour, offset, eps / _INNER_EXTRA)
        y1 = zeta1 * np.arange(-N1_, N1_ + 1)
        em1 = _node_shift(contour, offset, y1)
        inner_grid = QuadratureGrid(
            zeta=zeta1, N_half=N1_, Lambda=N1_ * zeta1, nodes=1.0 + em1,
            weights=contour.b * np.cosh(1j * contour.omega + y1),
            folded=False, ln_hardy=0.0, d_half=contour.d_half,
        )
    else:
        em1 = inner_grid.nodes - 1.0
    chi1 = inner_grid.nodes
    if float(np.min(np.abs(z))) * float(np.min(np.abs(chi1))) <= 1.0:
        raise DomainError("evaluation point lies inside the inverted factor contour")
    ln_A_p1 = _ln_A_at(psd, core, em1, 1.0)
    ln_A_m1 = _ln_A_at(psd, core, em1, -1.0)
    w_p = (inner_grid.weights / chi1) * ln_A_p1
    w_m = (inner_grid.weights / chi1) * ln_A_m1
    S0 = np.outer(chi1, z)
    scale = inner_grid.zeta / (2.0 * pi)
    out = scale * (w_p @ (1.0 / (S0 - 1.0)) - w_m @ (1.0 / (S0 + 1.0)))
    return out


def H_factors(psd: PSDSpec, f: Factorization, z) -> tuple[np.ndarray, np.ndarray]:
    """(H_plus, H_minus) at points z.

    H_minus comes from its contour integral; H_plus through the inner-annulus
    identity A_plus = A / A_minus.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    a, mp_, mm = psd.a, psd.m_plus, psd.m_minus
    lnAm = ln_A_minus(psd, z, f.inner_grid, f.contour)
    A_minus = np.exp(lnAm)
    H_minus = (
        f.c_minus * np.power(a - 1.0 / z, mp_) * np.power(a + 1.0 / z, mm) * A_minus
    )
    A_plus = regularized_A(psd, z) / A_minus
    H_plus = f.c_plus * np.power(a - z, mp_) * np.power(a + z, mm) * A_plus
    return H_plus, H_minus


def impulse_response(
    psd: PSDSpec,
    n_lo: int,
    n_hi: int,
    eps: float = 1e-15,
    factorization: Optional[Factorization] = None,
    **grid_overrides,
) -> np.ndarray:
    """h[n] for n in [n_lo, n_hi], all lags sharing one factorization.

    The density must produce a real response; a residual imaginary part
    above 1e-12 of the peak aborts instead of being silently discarded.
    """
    f = factorization or factorize(psd, n_lo, n_hi, eps, **grid_overrides)
    core = _RationalCore(psd) if psd.rational is not None else None
    em = f.outer_shift
    chi = f.outer_grid.nodes
    der = f.outer_grid.weights
    a, mp_, mm = psd.a, psd.m_plus, psd.m_minus
    m = mp_ + mm
    d = f.d
    if core is not None:
        ln_cm = 0.5 * core.ln_c_inf - 0.5 * m * log1p(a - 1.0) - 0.5 * d
        ln_u_p = core.ln_psd(em, 1.0) - (
            ln_cm + core.ln_H_minus_explicit_part(em, 1.0) + f.ln_Am_outer_plus
        )
        ln_u_m = core.ln_psd(em, -1.0) - (
            ln_cm + core.ln_H_minus_explicit_part(em, -1.0) + f.ln_Am_outer_minus
        )
        u_p = np.exp(ln_u_p)
        u_m = np.exp(ln_u_m)
    else:
        pref = exp(0.5 * d) * psd.c_inf ** (-0.5) * a ** (0.5 * m)
        u_p = (
            pref * psd.evaluator(chi) / np.exp(f.ln_Am_outer_plus)
            * np.power(a - 1.0 / chi, -mp_) * np.power(a + 1.0 / chi, -mm)
        )
        u_m = (
            pref * psd.evaluator(-chi) / np.exp(f.ln_Am_outer_minus)
            * np.power(a + 1.0 / chi, -mp_) * np.power(a - 1.0 / chi, -mm)
        )
    ns = np.arange(n_lo, n_hi + 1)
    ln_chi = clog1p(em)
    if float(np.max(np.abs(ln_chi.real))) * (n_hi + 1.0) > 700.0:
        raise NumericalError("z^-(n+1) would overflow on the factorization contour")
    powers = np.exp(-np.outer(ln_chi, ns + 1.0))
    parity = np.where(ns % 2 == 0, 1.0, -1.0)
    # (-chi)^(-n-1) = (-1)^(n+1) chi^(-n-1) folds the two brackets into one matrix
    h = f.outer_grid.zeta / (2.0 * pi) * (
        ((der * u_p) @ powers) + parity * ((der * u_m) @ powers)
    )
    peak = float(np.max(np.abs(h.real))) or 1.0
    if float(np.max(np.abs(h.imag))) > 1e-12 * peak:
        raise NumericalError("impulse response has a non-negligible imaginary part")
    return np.ascontiguousarray(h.real)


def reference_impulse_response(
    H_explicit: Callable[[np.ndarray], np.ndarray],
    n_lo: int,
    n_hi: int,
    r: float = 1.0,
    N: int = 800_001,
) -> np.ndarray:
    """Plain circle-rule reference h[n] = (1/N) sum H(r e^(i theta)) r^n e^(i n theta).

    Pairwise summation keeps the rounding growth tame at the reference node
    counts (~10^6); used only as a test oracle.
    """
    if n_lo > n_hi:
        raise DomainError("need n_lo <= n_hi")
    if max(abs(n_lo), abs(n_hi)) * abs(log(r)) > 700.0:
        raise DomainError("r^n overflows at these lags")
    theta = np.arange(N) * (2.0 * pi / N)
    vals = H_explicit(r * np.exp(1j * theta))
    rot_step = np.exp(1j * theta)
    rot = np.exp(1j * n_lo * theta)
    out = np.empty(n_hi - n_lo + 1)
    for i, n in enumerate(range(n_lo, n_hi + 1)):
        out[i] = float(np.real(np.sum(vals * rot))) * r ** float(n) / N
        rot = rot * rot_step
    return out
