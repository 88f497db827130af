"""Model library tests: values, symmetry, descriptors, growth bounds."""

from math import pi

import numpy as np
import pytest

import zsinh as zs
from zsinh.errors import DomainError
from zsinh.functions import Kind

RNG = np.random.default_rng(7)


class TestKobol:
    def test_mgf_at_zero_is_one(self, kobol05, kobol05_drift, kobol15):
        for u in (kobol05, kobol05_drift, kobol15):
            assert abs(complex(u(0.0)) - 1.0) < 1e-15

    def test_descriptor_kinds(self, kobol05, kobol05_drift, kobol15):
        assert kobol05.descriptor.kind is Kind.SINH1
        assert not kobol05.descriptor.positive_omega_only
        assert kobol05_drift.descriptor.kind is Kind.SINH1
        assert kobol05_drift.descriptor.positive_omega_only
        assert kobol15.descriptor.kind is Kind.SINH3

    def test_nu_15_cone_angle(self, kobol15):
        want = (pi / 2) * min(1 - 1 / 1.5, 3 / 1.5 - 1)
        assert kobol15.descriptor.cone_angle == pytest.approx(want, rel=1e-15)
        assert kobol15.descriptor.cone_angle == pytest.approx(pi / 6, rel=1e-12)

    def test_conjugate_symmetry_on_reals(self, kobol05, kobol05_drift, kobol15):
        xs = RNG.uniform(-0.9, 0.99, size=100)
        for u in (kobol05, kobol05_drift, kobol15):
            vals = u(xs.astype(complex))
            assert np.max(np.abs(vals.imag)) <= 1e-14 * np.max(1.0 + np.abs(vals))

    def test_branch_cut_rejected(self, kobol05):
        with pytest.raises(DomainError):
            kobol05(np.array([1.02 + 0.0j]))

    def test_parameter_validation(self):
        with pytest.raises(DomainError):
            zs.kobol_mgf(0.1, 1.0, 1.01)     # Gamma pole
        with pytest.raises(DomainError):
            zs.kobol_mgf(0.1, 0.5, 0.99)     # lam <= 1

    def test_growth_bound_on_probe_contours(self, kobol05, kobol15):
        for u in (kobol05, kobol15):
            desc = u.descriptor
            angles = RNG.uniform(0, 2 * pi, size=200)
            for r in (0.9, 1.0, 1.0 + 0.5 * (desc.a_plus - 1.0)):
                z = r * np.exp(1j * angles)
                bound = desc.growth_C * (1.0 + np.abs(z)) ** desc.growth_m
                assert np.all(np.abs(u(z)) <= bound)


class TestNTS:
    def test_mgf_at_zero(self, nts_drift, nts_sym):
        assert abs(complex(nts_drift(0.0)) - 1.0) < 1e-15
        assert abs(complex(nts_sym(0.0)) - 1.0) < 1e-15

    def test_even_without_drift(self, nts_sym):
        zp = RNG.uniform(-0.5, 0.5, 20) + 1j * RNG.uniform(-0.5, 0.5, 20)
        assert np.max(np.abs(nts_sym(zp) - nts_sym(-zp))) < 1e-15

    def test_kinds(self, nts_drift, nts_sym):
        assert nts_sym.descriptor.kind is Kind.SINH3
        assert nts_sym.descriptor.cone_angle == pytest.approx((pi / 2) * min(1 / 0.8, 1.0))
        assert nts_drift.descriptor.kind is Kind.LOG
        assert nts_drift.descriptor.growth_m_prime == pytest.approx(0.05)

    def test_non_symmetric_stub(self):
        with pytest.raises(NotImplementedError):
            zs.nts_mgf(0.1, 0.5, 1.05, 0.0, skew=0.2)


class TestMixture:
    def test_w_zero_identical_to_base(self, kobol05):
        mix = zs.atom_mixture(0.0, 2.0, kobol05)
        z = RNG.uniform(-0.8, 0.9, 50).astype(complex)
        assert np.max(np.abs(mix(z) - kobol05(z))) < 1e-16

    def test_pure_atom_at_zero_drift(self, kobol05):
        mix = zs.atom_mixture(1.0, 0.0, kobol05)
        z = RNG.uniform(-0.9, 0.9, 30).astype(complex)
        assert np.max(np.abs(mix(z) - 1.0)) < 1e-16

    def test_descriptor_downgrade(self, kobol05, kobol15):
        mix = zs.atom_mixture(0.3, 2.0, kobol05)
        assert mix.descriptor.kind is Kind.SINH1
        assert mix.descriptor.positive_omega_only
        # a base without one-sided cones downgrades to the log family
        mix2 = zs.atom_mixture(0.3, 2.0, kobol15)
        assert mix2.descriptor.kind is Kind.LOG

    def test_weight_validation(self, kobol05):
        with pytest.raises(DomainError):
            zs.atom_mixture(1.5, 2.0, kobol05)


class TestRationalPSD:
    def test_positive_at_one(self):
        ap, am, mp_, mm = 1.3, 1.7, 2.0, -1.0
        psd, _ = zs.rational_psd(ap, am, mp_, mm)
        val = complex(psd(np.array([1.0 + 0j]))[0])
        want = (ap - 1.0) ** (2 * mp_) * (am + 1.0) ** (2 * mm)
        assert val.real == pytest.approx(want, rel=1e-13)
        assert val.real > 0

    def test_example_53_configuration(self, psd53):
        psd, _ = psd53
        assert psd.a == pytest.approx(1.0001)
        assert psd.gamma == pytest.approx(pi / 2)
        assert psd.delta == 1.0
        assert psd.c_inf == pytest.approx(1.0001**3 * 1.00015**-1, rel=1e-15)

    def test_inversion_symmetry(self, psd53):
        psd, _ = psd53
        z = np.exp(1j * RNG.uniform(0.3, 2 * pi - 0.3, 50))
        assert np.max(np.abs(psd(1.0 / z) - psd(z)) / np.abs(psd(z))) < 1e-12

    def test_psd_equals_transfer_product(self, psd53):
        psd, transfer = psd53
        z = np.exp(1j * RNG.uniform(0.05, 2 * pi - 0.05, 100))
        lhs = psd(z)
        rhs = transfer(z) * transfer(1.0 / z)
        assert np.max(np.abs(lhs - rhs) / np.abs(lhs)) < 1e-13

    def test_validation(self):
        with pytest.raises(DomainError):
            zs.rational_psd(0.9, 1.2, 1.0, 1.0)


class TestSelectRotation:
    def grid_oracle(self, poles, n_grid=10_000):
        # symmetric placement: the pair {phi, -phi} and the +-z doubling of
        # the poles; maximize the minimal circular distance
        dirs = []
        for p in poles:
            th = np.angle(complex(p))
            dirs += [th, -th, th + pi, -th + pi]
        dirs = np.mod(dirs, 2 * pi)
        phis = np.linspace(-pi, pi, n_grid, endpoint=False)
        diffs = np.abs(phis[:, None] - dirs[None, :])
        circ = np.minimum(np.mod(diffs, 2 * pi), 2 * pi - np.mod(diffs, 2 * pi))
        score = circ.min(axis=1)
        best = score.max()
        cands = phis[score >= best - 1e-3]
        return cands[np.argmin(np.abs(cands))], best

    def test_single_real_pole(self):
        phi = zs.select_rotation([2.0 + 0j])
        assert phi == pytest.approx(pi / 2, abs=1e-12)

    def test_imaginary_pair(self):
        assert zs.select_rotation([2j, -2j]) == pytest.approx(0.0, abs=1e-12)

    def test_empty(self):
        assert zs.select_rotation([]) == 0.0

    @pytest.mark.parametrize("poles", [
        [1.5 + 0.5j], [2.0 + 0j, 1.0 + 2.0j], [3j, 2.0 - 1.0j, -2.5 + 0.2j],
    ])
    def test_against_grid_search(self, poles):
        phi = zs.select_rotation(poles)
        phi_grid, best = self.grid_oracle(poles)
        dirs = []
        for p in poles:
            th = np.angle(complex(p))
            dirs += [th, -th, th + pi, -th + pi]
        dirs = np.mod(dirs, 2 * pi)

        def score(x):
            d = np.abs(np.mod(x - dirs, 2 * pi))
            return np.min(np.minimum(d, 2 * pi - d))

        assert score(phi) >= best - 2e-3
        assert abs(abs(phi) - abs(phi_grid)) < 2e-3

    def test_pole_on_circle_rejected(self):
        with pytest.raises(DomainError):
            zs.select_rotation([np.exp(0.3j)])
