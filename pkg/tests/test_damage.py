import math

import numpy as np
import pytest
import scipy.integrate
import scipy.special
from hypothesis import given, settings
from hypothesis import strategies as st

from mopsearch import DamageBox, DamageParams, constraints, damage_cdf, damage_pdf, theta

PARAMS = DamageParams(severity=0.04, center=0.5, extent=0.1)


class TestPdf:
    def test_peak_value(self):
        assert damage_pdf(0.5, PARAMS) == pytest.approx(
            0.04 / (0.1 * math.sqrt(2 * math.pi)), rel=1e-14)

    @given(st.floats(-3.0, 3.0))
    def test_symmetry_about_center(self, a):
        assert damage_pdf(0.5 + a, PARAMS) == pytest.approx(
            damage_pdf(0.5 - a, PARAMS), rel=1e-12)

    def test_zero_severity(self):
        zero = DamageParams(severity=0.0, center=0.5, extent=0.1)
        assert damage_pdf(0.2, zero) == 0.0

    def test_sigma_zero_rejected(self):
        with pytest.raises(ValueError):
            damage_pdf(0.5, DamageParams(severity=0.1, center=0.5, extent=0.0))


class TestCdf:
    def test_half_weight_at_center(self):
        assert damage_cdf(0.5, PARAMS) == pytest.approx(0.02, rel=1e-14)

    def test_full_weight_far_right(self):
        assert damage_cdf(1e6, PARAMS) == pytest.approx(0.04, rel=1e-14)

    def test_one_sigma_value_against_normal_table(self):
        # independent reference: scipy's normal distribution function
        assert damage_cdf(0.6, PARAMS) == pytest.approx(0.0336538, abs=1e-7)
        assert damage_cdf(0.6, PARAMS) == pytest.approx(
            0.04 * float(scipy.special.ndtr(1.0)), rel=1e-13)

    def test_sigma_zero_is_step_with_half_at_center(self):
        step = DamageParams(severity=0.3, center=0.4, extent=0.0)
        assert damage_cdf(0.39999, step) == 0.0
        assert damage_cdf(0.4, step) == pytest.approx(0.15)
        assert damage_cdf(0.40001, step) == pytest.approx(0.3)

    @given(st.floats(-1.0, 2.0), st.floats(-1.0, 2.0))
    def test_monotone_and_bounded(self, a, b):
        lo, hi = sorted((a, b))
        fa, fb = damage_cdf(lo, PARAMS), damage_cdf(hi, PARAMS)
        assert 0.0 <= fa <= fb <= PARAMS.severity


class TestTheta:
    NODES = np.linspace(0.0, 1.0, 21)

    def test_zero_severity_gives_ones(self):
        zero = DamageParams(severity=0.0, center=0.5, extent=0.2)
        assert np.array_equal(theta(self.NODES, zero), np.ones(20))

    def test_single_element_captures_total_weight(self):
        narrow = DamageParams(severity=0.25, center=0.5, extent=1e-4)
        th = theta([0.0, 1.0], narrow)
        assert th[0] == pytest.approx(1.0 - 0.25, rel=1e-12)

    @given(st.floats(0.0, 0.3), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    @settings(max_examples=200)
    def test_weighted_sum_identity(self, d, mu, sigma):
        # telescoping: sum_e l_e (1 - theta_e) / L = F(s_n) - F(s_0)
        params = DamageParams(severity=d, center=mu, extent=sigma)
        th = theta(self.NODES, params)
        lengths = np.diff(self.NODES)
        total = self.NODES[-1] - self.NODES[0]
        lhs = float(np.sum(lengths * (1.0 - th)) / total)
        rhs = damage_cdf(self.NODES[-1], params) - damage_cdf(self.NODES[0], params)
        assert lhs == pytest.approx(rhs, abs=1e-12)
        assert rhs <= d + 1e-15
        assert np.all(th <= 1.0 + 1e-15)

    def test_elements_without_weight_stay_one(self):
        narrow = DamageParams(severity=0.2, center=0.525, extent=0.001)
        th = theta(self.NODES, narrow)
        assert th[0] == 1.0
        assert th[-1] == 1.0
        assert th[10] < 1.0

    def test_matches_adaptive_quadrature(self):
        params = DamageParams(severity=0.18, center=0.43, extent=0.07)
        for a, b in zip(self.NODES, self.NODES[1:]):
            weight, _ = scipy.integrate.quad(lambda s: damage_pdf(s, params), a, b)
            diff = damage_cdf(b, params) - damage_cdf(a, params)
            assert diff == pytest.approx(weight, abs=1e-10)

    def test_continuity_in_center(self):
        base = DamageParams(severity=0.2, center=0.5, extent=0.05)
        shifted = DamageParams(severity=0.2, center=0.5 + 1e-9, extent=0.05)
        assert np.max(np.abs(theta(self.NODES, base) - theta(self.NODES, shifted))) < 1e-6

    def test_continuity_in_extent_above_zero(self):
        base = DamageParams(severity=0.2, center=0.5, extent=0.05)
        widened = DamageParams(severity=0.2, center=0.5, extent=0.05 + 1e-9)
        assert np.max(np.abs(theta(self.NODES, base) - theta(self.NODES, widened))) < 1e-6

    def test_sigma_zero_heaviside_limit(self):
        params = DamageParams(severity=0.1, center=0.525, extent=0.0)
        th = theta(self.NODES, params)
        expected = np.ones(20)
        expected[10] = 1.0 - 1.0 * 0.1 / 0.05  # element [0.5, 0.55] absorbs everything
        assert np.allclose(th, expected, rtol=1e-12)


class TestConstraints:
    def test_healthy_is_feasible(self):
        check = constraints(np.ones(5), 0.15)
        assert check.margin == pytest.approx(0.85)
        assert check.feasible

    def test_boundary_counts_as_feasible(self):
        check = constraints([1.0, 0.15, 0.8], 0.15)
        assert check.margin == 0.0
        assert check.feasible

    def test_violation(self):
        check = constraints([1.0, 0.1, 0.8], 0.15)
        assert check.margin == pytest.approx(-0.05)
        assert not check.feasible


class TestBoxes:
    def test_damage_box_invariants(self):
        with pytest.raises(ValueError):
            DamageBox(max_severity=0.0, length=1.0, theta_min=0.1)
        with pytest.raises(ValueError):
            DamageBox(max_severity=1.5, length=1.0, theta_min=0.1)
        with pytest.raises(ValueError):
            DamageBox(max_severity=0.5, length=1.0, theta_min=1.0)

    def test_bounds_layout(self):
        box = DamageBox(max_severity=0.3, length=1.205, theta_min=0.15)
        assert box.bounds() == ((0.0, 0.3), (0.0, 1.205), (0.0, 1.205))
        assert box.contains(DamageParams(severity=0.04, center=0.375, extent=0.03))
        assert not box.contains(DamageParams(severity=0.31, center=0.375, extent=0.03))

    def test_params_validation(self):
        with pytest.raises(ValueError):
            DamageParams(severity=-0.1, center=0.5, extent=0.1)
        with pytest.raises(ValueError):
            DamageParams(severity=0.1, center=0.5, extent=-0.1)
