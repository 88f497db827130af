"""Concrete transform functions with machine-checkable analyticity metadata.

Each model is an evaluable map z -> complex together with a descriptor that
records where the function is analytic and how it grows; the inversion
engines consult that descriptor to pick a valid contour deformation instead
of trusting the caller.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from math import gamma as _gamma
from math import atan2, pi, sin
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

Evaluator = Callable[[np.ndarray], np.ndarray]


class Kind(enum.Enum):
    """Which contour family the analyticity region supports."""

    SINH1 = "sinh1"
    SINH2 = "sinh2"
    SINH3 = "sinh3"
    LOG = "log"
    ANNULUS_ONLY = "annulus_only"


@dataclass(frozen=True)
class AnalyticityDescriptor:
    a_minus: float
    a_plus: float
    kind: Kind
    cone_angle: float = 0.0
    growth_m: float = 0.0
    growth_C: float = 1.0
    # True when exponential growth in the right half-plane restricts the
    # deformation to upward-tilted contours (positive omega only).
    positive_omega_only: bool = False
    # log-domain growth exponent multiplier (only meaningful for Kind.LOG)
    growth_m_prime: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.a_minus < self.a_plus):
            raise DomainError("descriptor requires 0 <= a_minus < a_plus")
        # cone_angle == pi is the limiting case "decays along every leftward ray"
        if self.kind in (Kind.SINH1, Kind.SINH2) and not (0.0 < self.cone_angle <= pi):
            raise DomainError("cone angle for one-sided kinds must lie in (0, pi]")
        if self.kind is Kind.SINH3 and not (0.0 < self.cone_angle <= pi / 2):
            raise DomainError("cone angle for symmetric kind must lie in (0, pi/2]")


@dataclass(frozen=True)
class AnalyticFunction:
    """Evaluable transform plus its analyticity descriptor."""

    evaluator: Evaluator
    descriptor: AnalyticityDescriptor
    conjugate_symmetric: bool = True
    label: str = ""

    def __call__(self, z):
        return self.evaluator(np.asarray(z))


@dataclass(frozen=True)
class PSDSpec:
    """Power spectral density with the metadata its factorization needs."""

    evaluator: Evaluator
    a: float
    gamma: float
    m_plus: float
    m_minus: float
    c_inf: float
    delta: float = 1.0
    # (a_plus, a_minus) of the rational family, when the PSD is one; lets the
    # factorization evaluate near-unit-circle differences without cancellation.
    rational: Optional[tuple[float, float]] = None
    label: str = ""

    def __post_init__(self) -> None:
        if not (self.a > 1.0):
            raise DomainError("PSD annulus radius must satisfy a > 1")
        if not (0.0 < self.gamma <= pi / 2):
            raise DomainError("PSD cone angle must lie in (0, pi/2]")
        if not (0.0 < self.delta <= 1.0):
            raise DomainError("PSD decay exponent must lie in (0, 1]")
        if not (self.c_inf > 0.0):
            raise DomainError("c_inf must be positive")

    def __call__(self, z):
        return self.evaluator(np.asarray(z))


def gamma_negative(nu: float) -> float:
    """Gamma(-nu) for non-integer nu > 0, via the reflection formula."""
    if nu <= 0.0 or nu == int(nu):
        raise DomainError(f"gamma_negative needs non-integer nu > 0, got {nu}")
    return pi / (np.sin(pi * (-nu)) * _gamma(1.0 + nu))


def assert_principal_branch(base: np.ndarray, what: str = "power base") -> None:
    """Reject bases on the cut (-inf, 0] of the principal fractional power."""
    base = np.asarray(base)
    bad = (base.real <= 0.0) & (base.imag == 0.0)
    if np.any(bad):
        raise DomainError(f"{what} touches the branch cut (-inf, 0]")


def _calibrated_growth_C(evaluator: Evaluator, a_plus: float) -> float:
    """Bound constant: 1.5 x max |f| over three probe circles in the domain."""
    angles = np.linspace(0.0, 2.0 * pi, 64, endpoint=False)
    best = 1.0
    for r in (0.9, 1.0, 1.0 + 0.5 * (a_plus - 1.0)):
        if r >= a_plus:
            continue
        vals = np.abs(evaluator(r * np.exp(1j * angles)))
        best = max(best, float(np.max(vals)))
    return 1.5 * best


def kobol_mgf(c: float, nu: float, lam: float, mu: float = 0.0) -> AnalyticFunction:
    """Moment generating function exp(mu*z + c*Gamma(-nu)*((lam-z)^nu - lam^nu)).

    One-sided tempered-stable family; analytic off the cut [lam, inf).
    """
    if not (c > 0.0):
        raise DomainError("c must be positive")
    if not (0.0 < nu < 2.0) or nu == 1.0:
        raise DomainError("nu must lie in (0,2) excluding 1")
    if not (lam > 1.0):
        raise DomainError("lam must exceed 1")
    g = c * gamma_negative(nu)
    lam_nu = lam**nu

    def evaluator(z):
        z = np.asarray(z)
        base = lam - z
        assert_principal_branch(base, "lam - z")
        return np.exp(mu * z + g * (np.power(base, nu) - lam_nu))

    if nu < 1.0:
        if mu == 0.0:
            kind, cone, pos = Kind.SINH1, pi, False
        elif mu > 0.0:
            kind, cone, pos = Kind.SINH1, pi / 2, True
        else:
            kind, cone, pos = Kind.LOG, pi / 2, False
    else:
        cone = (pi / 2) * min(1.0 - 1.0 / nu, 3.0 / nu - 1.0)
        kind, pos = (Kind.SINH3, False) if mu == 0.0 else (Kind.LOG, False)
    desc = AnalyticityDescriptor(
        a_minus=0.0,
        a_plus=lam,
        kind=kind,
        cone_angle=cone,
        growth_m=0.0,
        growth_C=_calibrated_growth_C(evaluator, lam),
        positive_omega_only=pos,
        growth_m_prime=abs(mu),
    )
    return AnalyticFunction(evaluator, desc, conjugate_symmetric=True, label="kobol")


def nts_mgf(delta: float, nu: float, lam: float, mu: float = 0.0, skew: float = 0.0) -> AnalyticFunction:
    """Symmetric normal tempered stable mgf exp(mu*z + delta*(lam^nu - (lam^2-z^2)^(nu/2))).

    Cuts on both real rays +-[lam, inf).  Only the symmetric family is
    implemented; a nonzero ``skew`` is rejected.
    """
    if skew != 0.0:
        raise NotImplementedError("non-symmetric NTS is not supported")
    if not (delta > 0.0):
        raise DomainError("delta must be positive")
    if not (0.0 < nu < 2.0):
        raise DomainError("nu must lie in (0,2)")
    if not (lam > 1.0):
        raise DomainError("lam must exceed 1")
    lam_nu = lam**nu
    lam2 = lam * lam

    def evaluator(z):
        z = np.asarray(z)
        base = lam2 - z * z
        assert_principal_branch(base, "lam^2 - z^2")
        return np.exp(mu * z + delta * (lam_nu - np.power(base, 0.5 * nu)))

    cone = (pi / 2) * min(1.0 / nu, 1.0)
    if mu == 0.0 or nu > 1.0:
        kind = Kind.SINH3
    else:
        kind = Kind.LOG
    desc = AnalyticityDescriptor(
        a_minus=0.0,
        a_plus=lam,
        kind=kind,
        cone_angle=cone,
        growth_m=0.0,
        growth_C=_calibrated_growth_C(evaluator, lam),
        growth_m_prime=abs(mu),
    )
    return AnalyticFunction(evaluator, desc, conjugate_symmetric=True, label="nts")


def atom_mixture(w: float, mu: float, base: AnalyticFunction) -> AnalyticFunction:
    """w*exp(mu*z) + (1-w)*base(z): a point mass mixed into a distribution.

    The exponential factor grows in one half-plane, so only upward-tilted
    contours remain admissible; if the base does not support one-sided
    deformations at all the mixture is downgraded to the log family.
    """
    if not (0.0 <= w <= 1.0):
        raise DomainError("mixture weight must lie in [0, 1]")

    def evaluator(z):
        z = np.asarray(z)
        return w * np.exp(mu * z) + (1.0 - w) * base.evaluator(z)

    if base.descriptor.kind is Kind.SINH1 and mu >= 0.0:
        kind, cone, pos = Kind.SINH1, pi / 2, mu > 0.0
    else:
        kind, cone, pos = Kind.LOG, pi / 2, False
    desc = AnalyticityDescriptor(
        a_minus=base.descriptor.a_minus,
        a_plus=base.descriptor.a_plus,
        kind=kind,
        cone_angle=cone,
        growth_m=base.descriptor.growth_m,
        growth_C=_calibrated_growth_C(evaluator, base.descriptor.a_plus),
        positive_omega_only=pos,
        growth_m_prime=max(abs(mu), base.descriptor.growth_m_prime),
    )
    return AnalyticFunction(evaluator, desc, base.conjugate_symmetric, label="mixture")


def rational_psd(
    a_plus: float, a_minus: float, m_plus: float, m_minus: float
) -> tuple[PSDSpec, Callable[[np.ndarray], np.ndarray]]:
    """PSD (a+-z)^m+ (a+-1/z)^m+ (a-+z)^m- (a-+1/z)^m- and its causal transfer function.

    Returns the spec together with the explicit H(z) = (a+-1/z)^m+ (a-+1/z)^m-
    satisfying PSD(z) = H(z) H(1/z); H serves as an independent reference for
    the factorization.
    """
    if not (a_plus > 1.0 and a_minus > 1.0):
        raise DomainError("rational PSD requires a_plus > 1 and a_minus > 1")

    def evaluator(z):
        z = np.asarray(z, dtype=complex)
        return (
            np.power(a_plus - z, m_plus)
            * np.power(a_plus - 1.0 / z, m_plus)
            * np.power(a_minus + z, m_minus)
            * np.power(a_minus + 1.0 / z, m_minus)
        )

    def transfer(z):
        z = np.asarray(z, dtype=complex)
        return np.power(a_plus - 1.0 / z, m_plus) * np.power(a_minus + 1.0 / z, m_minus)

    spec = PSDSpec(
        evaluator=evaluator,
        a=min(a_plus, a_minus),
        gamma=pi / 2,
        m_plus=m_plus,
        m_minus=m_minus,
        c_inf=a_plus**m_plus * a_minus**m_minus,
        delta=1.0,
        rational=(a_plus, a_minus),
        label="rational_psd",
    )
    return spec, transfer


def select_rotation(poles: list[complex]) -> float:
    """Rotation angle phi placing the axis pair {e^(i phi), e^(-i phi)} as far
    as possible from the pole directions and their antipodes.

    Ties are broken toward the smallest |phi|.  No poles: phi = 0.
    """
    if not poles:
        return 0.0
    dirs = set()
    for p in poles:
        p = complex(p)
        if abs(abs(p) - 1.0) < 1e-12:
            raise DomainError("pole on the unit circle")
        th = atan2(p.imag, p.real)
        for cand in (th, -th, th + pi, -th + pi):
            dirs.add((cand + 2.0 * pi) % (2.0 * pi))
    ds = sorted(dirs)
    candidates = []
    for i, lo in enumerate(ds):
        hi = ds[(i + 1) % len(ds)] + (2.0 * pi if i + 1 == len(ds) else 0.0)
        mid = 0.5 * (lo + hi)
        phi = (mid + pi) % (2.0 * pi) - pi
        gap = 0.5 * (hi - lo)
        candidates.append((gap, phi))
    best_gap = max(g for g, _ in candidates)
    winners = [phi for g, phi in candidates if g >= best_gap - 1e-12]
    winners.sort(key=lambda phi: (abs(phi), phi < 0.0))
    return winners[0]
