import math

import numpy as np
import pytest

from satsecrecy import (
    AntennaPattern,
    Geometry,
    LinkBudget,
    SrfParams,
    arc_offset_angle,
    calibrate_to_mean_snr,
    free_space_loss,
    itu_pattern_gain_dbi,
    mean_snr,
    moment,
)

from oracles import TABLE_SRF

PATTERN = AntennaPattern()


class TestPattern:
    def test_sidelobe_law(self):
        assert itu_pattern_gain_dbi(PATTERN, 10.0) == pytest.approx(7.0)

    def test_floor(self):
        assert itu_pattern_gain_dbi(PATTERN, 100.0) == -10.0
        assert itu_pattern_gain_dbi(PATTERN, 48.0) == -10.0
        assert itu_pattern_gain_dbi(PATTERN, 180.0) == -10.0

    def test_threshold(self):
        assert itu_pattern_gain_dbi(PATTERN, 1.0) == pytest.approx(32.0)

    def test_main_beam_clamp(self):
        assert itu_pattern_gain_dbi(PATTERN, 0.0) == 32.0
        custom = AntennaPattern(phi_min_deg=1.0, boresight_gain_dbi=40.0)
        assert itu_pattern_gain_dbi(custom, 0.5) == 40.0

    def test_monotone_nonincreasing(self):
        grid = np.linspace(PATTERN.phi_min_deg, 180.0, 400)
        gains = [itu_pattern_gain_dbi(PATTERN, float(p)) for p in grid]
        assert all(g1 >= g2 for g1, g2 in zip(gains, gains[1:]))

    def test_near_continuity_at_floor(self):
        left = 32.0 - 25.0 * math.log10(48.0)
        assert -10.1 < left < -10.0
        assert abs(left - (-10.0)) < 0.04

    @pytest.mark.parametrize("phi", [-1.0, 181.0])
    def test_domain(self, phi):
        with pytest.raises(ValueError):
            itu_pattern_gain_dbi(PATTERN, phi)

    def test_phi_min_invariant(self):
        with pytest.raises(ValueError):
            AntennaPattern(phi_min_deg=48.0)


class TestFreeSpaceLoss:
    def test_identity_point(self):
        assert free_space_loss(4 * math.pi, 1.0) == pytest.approx(1.0)

    def test_s_band_reference(self):
        # frozen: 0.15 m carrier over 2000 km
        assert free_space_loss(0.15, 2_000_000.0) == pytest.approx(
            5.9683103659460750913e-09, rel=1e-12)

    def test_inverse_distance_scaling(self):
        one = free_space_loss(0.15, 1_000_000.0)
        two = free_space_loss(0.15, 2_000_000.0)
        assert two == pytest.approx(one / 2, rel=1e-14)

    def test_squared_switch(self):
        lin = free_space_loss(0.15, 2_000_000.0)
        assert free_space_loss(0.15, 2_000_000.0, squared=True) == \
            pytest.approx(lin * lin, rel=1e-14)

    def test_domain(self):
        with pytest.raises(ValueError):
            free_space_loss(0.0, 1.0)
        with pytest.raises(ValueError):
            free_space_loss(1.0, -1.0)


class TestArcOffset:
    def test_zero(self):
        assert arc_offset_angle(0.0, 2_000_000.0) == 0.0

    def test_half_circle(self):
        d_e = 2_000_000.0
        assert arc_offset_angle(d_e * math.pi, d_e) == pytest.approx(180.0)

    def test_reference_geometry(self):
        assert arc_offset_angle(45_000.0, 2_000_000.0) == pytest.approx(
            1.2891550390443522, rel=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            arc_offset_angle(-1.0, 10.0)
        with pytest.raises(ValueError):
            arc_offset_angle(1.0, 0.0)


class TestMeanSnr:
    def test_identity_chain(self):
        srf = SrfParams(b=0.5, m=1.0, omega=0.0)  # moment(.,2) == 1
        link = LinkBudget(p_a=3.162, rx_gain=1.0, wavelength_m=4 * math.pi,
                          distance_m=1.0)
        assert mean_snr(link, 1.0, srf) == pytest.approx(3.162, rel=1e-12)

    def test_linear_in_each_factor(self):
        link = LinkBudget(p_a=2.0, rx_gain=3.0, wavelength_m=0.15,
                          distance_m=2e6)
        base = mean_snr(link, 1.5, TABLE_SRF)
        doubled_pa = LinkBudget(p_a=4.0, rx_gain=3.0, wavelength_m=0.15,
                                distance_m=2e6)
        assert mean_snr(doubled_pa, 1.5, TABLE_SRF) == pytest.approx(
            2 * base, rel=1e-12)
        assert mean_snr(link, 3.0, TABLE_SRF) == pytest.approx(
            2 * base, rel=1e-12)

    def test_budget_invariants(self):
        with pytest.raises(ValueError):
            LinkBudget(p_a=0.0, rx_gain=1.0, wavelength_m=1.0, distance_m=1.0)
        with pytest.raises(ValueError):
            Geometry(phi_deg=200.0, d_e_m=1.0)


class TestCalibration:
    def test_unit(self):
        srf = SrfParams(b=0.5, m=1.0, omega=0.0)
        assert calibrate_to_mean_snr(0.0, srf) == pytest.approx(1.0, rel=1e-12)

    def test_bob_target(self):
        s = calibrate_to_mean_snr(5.0, TABLE_SRF)
        assert s == pytest.approx(10 ** 0.5 / moment(TABLE_SRF, 2.0), rel=1e-12)

    def test_eve_target(self):
        s = calibrate_to_mean_snr(-3.0, TABLE_SRF)
        assert s == pytest.approx(10 ** -0.3 / moment(TABLE_SRF, 2.0), rel=1e-12)

    @pytest.mark.parametrize("target", [-12.0, -3.0, 0.0, 5.0, 14.0])
    def test_round_trip(self, target):
        scale = calibrate_to_mean_snr(target, TABLE_SRF)
        achieved = scale * moment(TABLE_SRF, 2.0)
        assert achieved == pytest.approx(10 ** (target / 10.0), rel=1e-12)
