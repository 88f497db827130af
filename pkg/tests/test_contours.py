"""Conformal map unit tests: values, derivatives, fits, admissibility."""

from math import asin, cos, pi, sin, sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import zsinh as zs
from zsinh.contours import (
    LogContour,
    SinhContour,
    fit_sinh_contour,
    fitted_sigma_offset,
    line_min_modulus,
    max_strip_half_width,
)
from zsinh.errors import DomainError

RNG = np.random.default_rng(20260810)


def taylor_sinh(w: complex, terms: int = 20) -> complex:
    """Series oracle for sinh, independent of the library implementation."""
    out = 0.0 + 0.0j
    term = w
    k = 1
    for _ in range(terms):
        out += term
        term = term * w * w / ((k + 1) * (k + 2))
        k += 2
    return out


class TestSinhMap:
    def test_center_point(self):
        c = SinhContour(sigma=0.0, b=1.0, omega=0.0)
        assert zs.sinh_map(c, 0.0) == 0.0 + 0.0j

    def test_example_crossing_inside_unit_interval(self):
        c = SinhContour(sigma=0.978291504, b=0.021775623, omega=-0.7854)
        z = complex(zs.sinh_map(c, 0.0))
        assert z.imag == 0.0
        assert 0.98 < z.real < 1.0
        assert abs(z.real - 0.99368) < 5e-5

    def test_against_series_oracle(self):
        c = SinhContour(sigma=1.0, b=2.0, omega=pi / 6)
        got = complex(zs.sinh_map(c, 1.0))
        want = 1.0 + 2.0j * taylor_sinh(1j * pi / 6 + 1.0)
        assert abs(got - want) < 1e-14 * abs(want)

    def test_real_imag_split(self):
        c = SinhContour(sigma=0.7, b=0.3, omega=0.2)
        y = 1.3
        z = complex(zs.sinh_map(c, y))
        assert z.real == pytest.approx(0.7 - 0.3 * sin(0.2) * np.cosh(y), rel=1e-15)
        assert z.imag == pytest.approx(0.3 * cos(0.2) * np.sinh(y), rel=1e-15)

    def test_omega_reflection(self):
        # flipping omega reflects the curve through Re = sigma: for all y,
        # map(omega, y) = 2 sigma - map(-omega, -y)
        ys = RNG.uniform(-4, 4, size=100)
        c = SinhContour(sigma=0.9, b=0.4, omega=0.3)
        c_neg = SinhContour(sigma=0.9, b=0.4, omega=-0.3)
        got = zs.sinh_map(c, ys)
        want = 2 * c.sigma - zs.sinh_map(c_neg, -ys)
        assert np.max(np.abs(got - want)) < 1e-14

    def test_symmetric_grid_conjugate(self):
        # for any omega, map(-y) = conj(map(y)); this is what folding uses
        c = SinhContour(sigma=1.005, b=0.245, omega=0.0612)
        ys = RNG.uniform(0, 5, size=50)
        assert np.max(np.abs(zs.sinh_map(c, -ys) - np.conj(zs.sinh_map(c, ys)))) < 1e-14


class TestDerivatives:
    def test_trivial(self):
        c = SinhContour(sigma=0.0, b=1.0, omega=0.0)
        assert complex(zs.sinh_map_derivative(c, 0.0)) == 1j

    def test_example_35_weight(self):
        c = SinhContour(sigma=1.005, b=0.245, omega=0.0612)
        got = complex(zs.sinh_map_derivative(c, 0.0))
        assert got == pytest.approx(1j * 0.245 * cos(0.0612), rel=1e-12)

    @pytest.mark.parametrize("omega", [-0.7, -0.2, 0.0, 0.3, 1.1])
    def test_finite_difference(self, omega):
        c = SinhContour(sigma=0.9, b=0.35, omega=omega)
        h = 1e-6
        ys = RNG.uniform(-5, 5, size=100)
        fd = (zs.sinh_map(c, ys + h) - zs.sinh_map(c, ys - h)) / (2 * h)
        an = zs.sinh_map_derivative(c, ys)
        assert np.max(np.abs(fd - an) / np.abs(an)) < 1e-8

    def test_log_map_values(self):
        c = LogContour(sigma=1.0, A=2.0)
        assert complex(zs.log_map(c, 0.0)) == 1.0 + 0.0j
        assert float(zs.log_map_derivative(c, 0.0)) == pytest.approx(np.log(2.0), rel=1e-15)

    def test_log_map_finite_difference(self):
        c = LogContour(sigma=0.99, A=1.3761)
        h = 1e-6
        y = 1.3
        fd = (complex(zs.log_map(c, y + h)) - complex(zs.log_map(c, y - h))).imag / (2 * h)
        assert abs(fd - float(zs.log_map_derivative(c, y))) < 1e-9 * abs(fd)


class TestFit:
    def test_example_33_parameters(self):
        omega = pi / 4 - pi / 2         # alpha = pi
        d = 0.9 * (pi / 2 - pi / 4)
        sigma, b = zs.fit_sinh_to_interval(0.98, 1.0, omega, d)
        assert sigma == pytest.approx(0.978291504, abs=5e-6)
        assert b == pytest.approx(0.021775623, abs=5e-8)

    def test_example_35_parameters(self):
        omega, d = zs.small_angle_params(0.02)
        sigma, b = zs.fit_sinh_to_interval(0.98, 1.0, omega, d)
        assert sigma == pytest.approx(1.005, abs=5e-4)
        assert b == pytest.approx(0.245, abs=1e-3)

    def test_symmetric_fit(self):
        # omega = 0 gives the midpoint and b = (r+ - r-) / (2 sin d)
        r, eps_w = 0.9, 0.003
        sigma, b = zs.fit_sinh_to_interval(r, r + 2 * eps_w, 0.0, pi / 4)
        assert sigma == pytest.approx(r + eps_w, rel=1e-14)
        assert b == pytest.approx(2 * eps_w / (2 * sin(pi / 4)), rel=1e-14)

    @given(
        r_minus=st.floats(0.3, 0.995),
        width=st.floats(1e-6, 0.3),
        omega=st.floats(-0.7, 0.7),
        d=st.floats(0.01, 0.7),
    )
    @settings(max_examples=80, deadline=None)
    def test_fit_recovers_crossings(self, r_minus, width, omega, d):
        r_plus = r_minus + width
        if abs(omega) + d >= pi / 2 - 0.01:
            return
        sigma, b = zs.fit_sinh_to_interval(r_minus, r_plus, omega, d)
        assert sigma - b * sin(omega + d) == pytest.approx(r_minus, rel=1e-14, abs=1e-14)
        assert sigma - b * sin(omega - d) == pytest.approx(r_plus, rel=1e-14, abs=1e-14)

    def test_strip_image_roundtrip(self):
        c = fit_sinh_contour(0.98, 1.0, -0.7853981633974483, 0.7068583470577035)
        img = zs.strip_image(c)
        assert img.r_minus == pytest.approx(0.98, rel=1e-14)
        assert img.r_plus == pytest.approx(1.0, rel=1e-14)

    def test_fitted_sigma_offset_matches(self):
        rm, rp, om, d = 1.0, 1.00005, -pi / 4, 0.9 * pi / 4
        sigma, b = zs.fit_sinh_to_interval(rm, rp, om, d)
        off = fitted_sigma_offset(rm, rp, om, d, 1.0)
        # the direct difference carries ~1e-16 cancellation noise; the
        # shifted form must satisfy the crossing equations exactly
        assert sigma - 1.0 == pytest.approx(off, abs=5e-16)
        assert off - b * sin(om + d) == pytest.approx(rm - 1.0, abs=1e-20)
        assert off - b * sin(om - d) == pytest.approx(rp - 1.0, rel=1e-14)

    def test_rejects_bad_interval(self):
        with pytest.raises(DomainError):
            zs.fit_sinh_to_interval(1.0, 0.98, 0.0, 0.3)
        with pytest.raises(DomainError):
            zs.fit_sinh_to_interval(0.98, 1.0, 0.0, 0.0)


class TestAdmissibility:
    def test_zero_angle_always_true(self):
        assert zs.admissible_rpm(0.5, 0.9, -0.2, 0.2)

    def test_example_35_is_admissible(self):
        assert zs.admissible_rpm(0.98, 1.0, 0.0612, 0.0408)

    def test_direct_arithmetic_case(self):
        rm, rp, om, d = 0.999, 1.0, 0.3, 0.2
        lhs = rm * (1.0 - sin(om + d) * sin(om - d))
        rhs = rp * (1.0 - sin(om + d) ** 2)
        assert zs.admissible_rpm(rm, rp, om, d) == (lhs < rhs)
        assert not zs.admissible_rpm(rm, rp, om, d)

    @given(
        r_minus=st.floats(0.5, 0.999),
        width=st.floats(1e-5, 0.2),
        omega=st.floats(0.0, 0.6),
        d=st.floats(0.005, 0.6),
    )
    @settings(max_examples=80, deadline=None)
    def test_equivalent_to_distance_condition(self, r_minus, width, omega, d):
        # the inequality on (r-, r+) is the same as b > sigma sin(omega + d)
        r_plus = r_minus + width
        if omega + d >= pi / 2 - 0.02:
            return
        sigma, b = zs.fit_sinh_to_interval(r_minus, r_plus, omega, d)
        want = b > sigma * sin(omega + d)
        assert zs.admissible_rpm(r_minus, r_plus, omega, d) == want


class TestSmallAngle:
    def test_example_35(self):
        omega, d = zs.small_angle_params(0.02)
        assert omega == pytest.approx(0.0612, abs=5e-5)
        assert d == pytest.approx(0.0408, abs=5e-5)

    def test_monotone_to_zero(self):
        prev = zs.small_angle_params(0.04)
        for delta in (0.02, 0.01, 0.005, 0.0025):
            cur = zs.small_angle_params(delta)
            assert 0 < cur[0] < prev[0]
            assert 0 < cur[1] < prev[1]
            prev = cur

    def test_pinch_identity(self):
        # (omega+d)^2 - r_-(omega-d)^2 ~ delta/2, the safety margin the
        # prescription is built around
        delta = 0.04
        omega, d = zs.small_angle_params(delta)
        r_minus = 1.0 - delta
        lhs = (omega + d) ** 2 - r_minus * (omega - d) ** 2
        assert lhs == pytest.approx(delta / 2.0, rel=2e-2)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            zs.small_angle_params(0.0)


class TestOriginDistance:
    def test_degenerate_vertical_line(self):
        c = SinhContour(sigma=1.0, b=1e-12, omega=0.4)
        assert zs.origin_distance(c) == pytest.approx(1.0, abs=1e-11)

    def test_example_33_center(self):
        c = fit_sinh_contour(0.98, 1.0, pi / 4 - pi / 2, 0.9 * pi / 4)
        dist = zs.origin_distance(c)
        assert 0.98 < dist < 1.0
        assert dist == pytest.approx(0.99368, abs=5e-4)

    def test_example_35_edge_distance(self):
        omega, d = zs.small_angle_params(0.02)
        c = fit_sinh_contour(0.98, 1.0, omega, d)
        edge = zs.origin_distance(c, at_strip_edge=True)
        assert edge == pytest.approx(c.sigma - c.b * sin(omega + d), rel=1e-14)
        assert 0.98 <= edge < 1.0

    def test_line_min_modulus_dive(self):
        # when sigma sin(w) > b the minimum leaves the real axis
        sigma, b, w = 0.99, 0.01, 1.2
        assert sigma * sin(w) > b
        got = line_min_modulus(sigma, b, w)
        assert got == pytest.approx(cos(w) * sqrt(sigma**2 - b**2), rel=1e-14)
        # brute force over the line
        ys = np.linspace(-8, 8, 400001)
        brute = np.min(np.abs(sigma + 1j * b * np.sinh(1j * w + ys)))
        assert got == pytest.approx(float(brute), rel=1e-6)

    def test_max_strip_half_width(self):
        rm, rp = 0.98, 1.0
        d = max_strip_half_width(rm, rp)
        assert d == pytest.approx(asin(sqrt(0.02 / 1.98)), rel=1e-14)


class TestLogContourFit:
    def test_parameter_rule(self):
        rm, rp = 0.98, 1.0
        c = LogContour(sigma=0.5 * (rm + rp), A=1.0 + (rp - rm) ** 0.25)
        assert c.sigma == pytest.approx(0.99, rel=1e-15)
        assert c.A == pytest.approx(1.3761, abs=1e-4)

    def test_strip_half_width_solves_equation(self):
        c = LogContour(sigma=0.99, A=1.3761)
        d = c.strip_half_width(1.0)
        assert c.sigma + d * np.log(c.A - d * d) == pytest.approx(1.0, abs=1e-12)

    def test_invalid_A(self):
        with pytest.raises(DomainError):
            LogContour(sigma=1.0, A=0.9)


def test_arc_length_inside_disc_matches_brute_force():
    c = fit_sinh_contour(0.98, 1.0, -pi / 4, 0.9 * pi / 4)
    got = zs.arc_length_in_unit_disc(c)
    ys = np.linspace(-3, 3, 2_000_001)
    z = zs.sinh_map(c, ys)
    speed = np.abs(zs.sinh_map_derivative(c, ys))
    inside = np.abs(z) < 1.0
    brute = float(np.sum(speed[inside]) * (ys[1] - ys[0]))
    assert got == pytest.approx(brute, rel=1e-4)


def test_contour_validation():
    with pytest.raises(DomainError):
        SinhContour(sigma=1.0, b=-0.1, omega=0.0)
    with pytest.raises(DomainError):
        SinhContour(sigma=1.0, b=0.1, omega=1.6)
    with pytest.raises(DomainError):
        SinhContour(sigma=1.0, b=0.1, omega=0.5, d_half=1.2)
