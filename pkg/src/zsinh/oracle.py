"""Brute-force references the accelerated engines are judged against.

``trapezoid_oracle`` runs the plain circle rule at doubling node counts
(in extended precision where the platform provides it) until the value
stops moving.  ``binomial_series_h`` expands rational transfer functions
into their impulse response by an exact Cauchy product.  The two are
independent of every deformed-contour code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, log
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, NumericalError
from .functions import AnalyticFunction

_LONGDOUBLE_OK = np.finfo(np.longdouble).eps < 1e-17


@dataclass(frozen=True)
class OracleResult:
    value: float
    N_used: int
    stability_gap: float
    converged: bool = True


def trapezoid_oracle(
    u: AnalyticFunction,
    n: int,
    r: Optional[float] = None,
    eps: float = 1e-16,
) -> OracleResult:
    """Doubling-N circle rule; stops when successive values agree within eps.

    The radius defaults to exp(-2/n) clipped into the annulus so that the
    amplification r^-n stays below e^2 and rounding noise below ~1e-16.
    """
    desc = u.descriptor
    if r is None:
        r = min(exp(-2.0 / max(n, 1)), 0.5 * (1.0 + desc.a_plus))
    if not (desc.a_minus < r < desc.a_plus):
        raise DomainError(f"oracle radius {r} outside annulus ({desc.a_minus}, {desc.a_plus})")
    if n * log(1.0 / r) > 700.0:
        raise DomainError("r^-n overflows; pick a larger radius")
    dtype = np.longdouble if _LONGDOUBLE_OK else np.float64
    N = 1 << 10
    prev = _oracle_value(u, n, r, N, dtype)
    while N <= (1 << 22):
        N *= 2
        cur = _oracle_value(u, n, r, N, dtype)
        gap = abs(cur - prev)
        if gap < eps * max(1.0, abs(cur)):
            return OracleResult(value=cur, N_used=N, stability_gap=gap)
        prev = cur
    raise NumericalError(
        f"trapezoid oracle did not stabilize below {eps} by N=2^22 (last gap {gap:.3e})"
    )


def _oracle_value(u: AnalyticFunction, n: int, r: float, N: int, dtype) -> float:
    # pi at working precision; np.pi is double-rounded and would bias phases
    pi_w = np.arctan(np.asarray(1.0, dtype=dtype)) * 4.0
    theta = np.arange(N, dtype=dtype) * (2.0 * pi_w / N)
    z = np.asarray(r, dtype=dtype) * np.exp(1j * theta)
    try:
        vals = u.evaluator(z)
    except TypeError:
        vals = u.evaluator(z.astype(complex))
    # z^-n phases reduced mod N exactly, keeping every argument below 2 pi
    phase = (2.0 * pi_w / N) * np.asarray((n * np.arange(N, dtype=np.int64)) % N, dtype=dtype)
    rot = np.exp(-1j * phase)
    scale = np.asarray(r, dtype=dtype) ** (-float(n))
    return float(np.real(np.sum(vals * rot)) * scale / N)


def binomial_series_h(
    a_plus: float, a_minus: float, m_plus: float, m_minus: float, n_max: int
) -> np.ndarray:
    """h[0..n_max] of (a+ - 1/z)^m+ (a- + 1/z)^m- by exact series convolution.

    In w = 1/z the factors are (a+ - w)^m+ and (a- + w)^m-; their Taylor
    coefficients follow the generalized-binomial recurrence and coefficient
    n of the product is the finite sum over splits j + (n-j).
    """
    if not (a_plus > 1.0 and a_minus > 1.0):
        raise DomainError("series oracle needs a_plus > 1 and a_minus > 1")
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    dtype = np.longdouble if _LONGDOUBLE_OK else np.float64
    cp = np.zeros(n_max + 1, dtype=dtype)
    cm = np.zeros(n_max + 1, dtype=dtype)
    cp[0] = np.asarray(a_plus, dtype=dtype) ** m_plus
    cm[0] = np.asarray(a_minus, dtype=dtype) ** m_minus
    for j in range(n_max):
        cp[j + 1] = cp[j] * (m_plus - j) / (j + 1.0) * (-1.0 / a_plus)
        cm[j + 1] = cm[j] * (m_minus - j) / (j + 1.0) * (1.0 / a_minus)
    h = np.convolve(cp, cm)[: n_max + 1]
    return h.astype(float)


def circle_coefficient(f: Callable[[np.ndarray], np.ndarray], k: int, N: int = 1 << 17) -> float:
    """Laurent coefficient of z^-k of f on the unit circle (plain rule)."""
    theta = np.arange(N) * (2.0 * np.pi / N)
    z = np.exp(1j * theta)
    vals = f(z) * np.exp(1j * k * theta)
    return float(np.real(np.sum(vals)) / N)
