"""Shared fixtures and frozen reference values.

TRUE_* constants were computed independently with 40-digit arithmetic
(plain circle rule in mpmath, node counts doubled until 1e-30 stability)
and are the ground truth the engines and oracles are tested against.
PAPER_* are the 15-digit published values; they sit within ~1.2e-15 of the
true ones, so assertions against them use a 5e-15 budget.
"""

import numpy as np
import pytest

import zsinh as zs

# ground truth (40-digit quadrature, frozen)
TRUE_EX33_100 = 5.3240079977166586465e-05
TRUE_EX33_500 = 8.872342965228370305e-08
TRUE_EX35_100 = 5.6040831784210627571e-05
TRUE_MIX_100 = 3.7268055984016610525e-05
TRUE_NU15_100 = 3.0085924149493605503e-07
TRUE_NTS_100 = 6.1674161967888460464e-05

# published 15-digit values
PAPER_EX33_100 = 5.32400799771669e-05
PAPER_EX33_500 = 8.87234294030321e-08
PAPER_EX35_100 = 5.60408317840114e-05
PAPER_MIX_100 = 3.72680559839856e-05
PAPER_NU15_100 = 3.00859241487316e-07
PAPER_NTS_100 = 6.16741619667409e-05

PAPER_TOL = 5e-15


@pytest.fixture(scope="session")
def kobol05():
    return zs.kobol_mgf(0.1, 0.5, 1.01)


@pytest.fixture(scope="session")
def kobol05_drift():
    return zs.kobol_mgf(0.1, 0.5, 1.01, 0.05)


@pytest.fixture(scope="session")
def kobol15():
    return zs.kobol_mgf(0.1, 1.5, 1.01)


@pytest.fixture(scope="session")
def mixture(kobol05):
    return zs.atom_mixture(0.3, 2.0, kobol05)


@pytest.fixture(scope="session")
def nts_drift():
    return zs.nts_mgf(0.1, 0.5, 1.01, 0.05)


@pytest.fixture(scope="session")
def nts_sym():
    return zs.nts_mgf(0.1, 0.8, 1.05)


@pytest.fixture(scope="session")
def psd53():
    psd, transfer = zs.rational_psd(1.0001, 1.00015, 3.0, -1.0)
    return psd, transfer


@pytest.fixture(scope="session")
def psd54():
    psd, transfer = zs.rational_psd(1.0001, 1.00015, -1.0, -1.0)
    return psd, transfer


@pytest.fixture(scope="session")
def psd55():
    psd, transfer = zs.rational_psd(1.00001, 1.000015, -1.0, -1.0)
    return psd, transfer


@pytest.fixture(scope="session")
def toy_psd():
    """Synthetic density exp(g(z) + g(-z)) with closed-form factorization.

    g(z) = z/((z-3)(1-3z)) satisfies g(1/z) = g(z); the outer log-factor is
    (1/8)(1/(3z-1) - 1/(3z+1)) and the mean of log A over the circle is 1/4.
    """

    def g(z):
        return z / ((z - 3.0) * (1.0 - 3.0 * z))

    def evaluator(z):
        z = np.asarray(z, dtype=complex)
        return np.exp(g(z) + g(-z))

    psd = zs.PSDSpec(
        evaluator=evaluator, a=2.0, gamma=np.pi / 2, m_plus=0.0, m_minus=0.0,
        c_inf=1.0, delta=1.0, label="toy",
    )

    def ln_A_minus_exact(z):
        z = np.asarray(z, dtype=complex)
        return 0.125 * (1.0 / (3.0 * z - 1.0) - 1.0 / (3.0 * z + 1.0))

    return psd, ln_A_minus_exact, -0.25
