import numpy as np
import pytest

from spdclab import crystal
from spdclab.crystal import (
    COLLINEAR,
    NONCOLLINEAR,
    CrystalCut,
    NonlinearTensor,
    cut_for_arm_opening,
    d_eff_typeII,
    noncollinear_arms,
    phase_match_collinear,
    solve_waves,
    spdc_rings,
    spectral_fwhm,
)

SEVEN_PI_30 = 7 * np.pi / 30


@pytest.fixture(scope="module")
def bibo_curve(bibo):
    return phase_match_collinear(bibo)


@pytest.fixture(scope="module")
def bbo_cut_3deg(bbo):
    return cut_for_arm_opening(bbo, external_half_angle_deg=3.0, length_mm=2.0)


class TestCollinearCurve:
    def test_all_samples_phase_matched(self, bibo_curve):
        assert len(bibo_curve) > 50
        for s in bibo_curve:
            assert abs(s.delta_k_residual) < crystal.DELTA_K_TOL

    def test_energy_conservation_validated(self, bibo_curve):
        s = bibo_curve[0]
        inv = 1 / s.pump_wavelength_nm
        assert abs(inv - 1 / s.signal_wavelength_nm - 1 / s.idler_wavelength_nm) < 1e-9

    def test_bibo_max_d_eff(self, bibo_curve):
        best = max(s.d_eff_pm_v for s in bibo_curve)
        assert abs(best - 1.94) / 1.94 < 0.10

    def test_bbo_max_d_eff(self, bbo):
        curve = phase_match_collinear(bbo, branch="lower")
        best = max(s.d_eff_pm_v for s in curve)
        assert abs(best - 1.15) / 1.15 < 0.10

    def test_bbo_theta_independent_of_phi(self, bbo):
        curve = phase_match_collinear(bbo, branch="lower")
        thetas = [s.theta for s in curve]
        assert max(thetas) - min(thetas) < 1e-9

    def test_minimal_walkoff_region(self, bibo):
        """Near the curve terminus both walk-offs shrink to ~0.011 rad while
        d_eff stays near 1.1 pm/V."""
        fine = phase_match_collinear(
            bibo, phi_grid=np.radians(np.arange(20.0, 23.01, 0.1)))
        sample = min(fine, key=lambda s: np.hypot(s.walkoff_fast, s.walkoff_slow))
        quad = np.hypot(sample.walkoff_fast, sample.walkoff_slow)
        assert abs(quad - 0.011) / 0.011 < 0.15
        assert abs(sample.d_eff_pm_v - 1.1) / 1.1 < 0.15

    def test_gap_reported_as_missing_samples(self, bibo):
        # no collinear type-II solution at low azimuth: skipped, not an error
        samples = phase_match_collinear(bibo, phi_grid=np.radians([5.0, 10.0]))
        assert samples == []


class TestDEffConventions:
    def test_bbo_contraction_matches_closed_form(self, bbo):
        """Oracle: pure-d22 type-II closed form |d22 cos^2(theta) cos(3 phi)|."""
        pure = NonlinearTensor.from_elements(
            "3m", {"d22": 2.2, "d21": -2.2, "d16": -2.2}, "oracle fixture")
        crys = crystal.CrystalData(sellmeier=bbo.sellmeier, tensor=pure)
        for theta in (0.55, 0.7533, 0.9):
            for phi in (0.0, 0.4, np.pi / 3, 1.2):
                cut = CrystalCut(theta, phi, 1.0)
                got = d_eff_typeII(crys, cut, COLLINEAR)
                want = abs(2.2 * np.cos(theta) ** 2 * np.cos(3 * phi))
                assert abs(got - want) < 1e-9

    def test_sign_flip_of_all_fields_leaves_d_eff_invariant(self, bibo):
        rng = np.random.default_rng(12)
        for _ in range(10):
            ep, es, ei = rng.normal(size=(3, 3))
            a = abs(bibo.tensor.contract(ep, es, ei))
            b = abs(bibo.tensor.contract(-ep, -es, -ei))
            assert abs(a - b) < 1e-12

    def test_geometry_argument_validation(self, bibo):
        with pytest.raises(ValueError):
            d_eff_typeII(bibo, bibo.reference_cut, "diagonal")


class TestNoncollinearArms:
    def test_two_arms_found(self, bibo_arms):
        assert bibo_arms.opening_i > 0 and bibo_arms.opening_j > 0
        # degenerate arms sit a few degrees from the pump axis
        assert 0.03 < bibo_arms.opening_i < 0.09

    def test_arm_pair_nonlinearities(self, bibo_arms):
        lo, hi = sorted((bibo_arms.d_eff_fs, bibo_arms.d_eff_sf))
        assert abs(lo - 1.84) / 1.84 < 0.10
        assert abs(hi - 2.02) / 2.02 < 0.10

    def test_pair_state_angle_near_published(self, bibo_arms):
        lo, hi = sorted((bibo_arms.d_eff_fs, bibo_arms.d_eff_sf))
        angle = crystal.pair_state_angle(lo, hi)
        assert abs(angle - SEVEN_PI_30) / SEVEN_PI_30 < 0.015

    def test_fast_polarization_deflection(self, bibo_arms):
        # published geometry: ~15 degrees between the fast eigenpolarization
        # and the axis joining the intersections
        defl = np.degrees(bibo_arms.fast_deflection_rad)
        assert abs(defl - 15.0) < 3.0

    def test_noncollinear_d_eff_api(self, bibo, bibo_arms):
        pair = d_eff_typeII(bibo, bibo.reference_cut, NONCOLLINEAR)
        assert sorted(pair) == sorted((bibo_arms.d_eff_fs, bibo_arms.d_eff_sf))

    def test_over_matched_cut_has_no_arms(self, bibo):
        # beyond the collinear curve the pump carries too much momentum and
        # no degenerate rings exist at all
        curve = phase_match_collinear(bibo, phi_grid=np.radians([55.0]))
        cut = CrystalCut(curve[0].theta + 0.02, curve[0].phi, 0.6)
        with pytest.raises(ValueError):
            noncollinear_arms(bibo, cut)


class TestCutForArmOpening:
    def test_bbo_three_degree_cut(self, bbo, bbo_cut_3deg):
        arms = noncollinear_arms(bbo, bbo_cut_3deg)
        om = 0.5 * (arms.opening_i + arms.opening_j)
        n = solve_waves(bbo.sellmeier, arms.dir_i, 780.0).n_fast
        ext = np.degrees(np.arcsin(n * np.sin(om)))
        assert abs(ext - 3.0) < 0.05
        assert abs(bbo_cut_3deg.theta - bbo.reference_cut.theta) < 2e-3


class TestRings:
    def test_rings_intersect_in_two_regions(self, bibo_arms):
        # the arms object is itself the intersection finder; two distinct arms
        sep = np.degrees(np.arccos(np.clip(
            np.dot(bibo_arms.dir_i, bibo_arms.dir_j), -1, 1)))
        assert sep > 1.0

    def test_bibo_cloud_wider_than_bbo_at_matched_opening(self, bbo, bibo):
        ext = noncollinear_arms(bibo, bibo.reference_cut).external_opening_deg
        n = solve_waves(bibo.sellmeier, bibo.reference_cut.direction(), 780.0).n_fast
        ext_deg = np.degrees(np.arcsin(n * np.sin(np.radians(ext))))
        bbo_cut = cut_for_arm_opening(bbo, external_half_angle_deg=ext_deg,
                                      length_mm=2.0)
        kw = dict(n_psi=16, n_signal=3, n_pump=3)
        cloud_bibo = spdc_rings(bibo, bibo.reference_cut, **kw)
        cloud_bbo = spdc_rings(bbo, bbo_cut, **kw)
        for branch in (crystal.FAST, crystal.SLOW):
            assert (cloud_bibo.radial_spread(branch)
                    > cloud_bbo.radial_spread(branch))

    def test_zero_filter_width_collapses_rings(self, bibo):
        kw = dict(n_psi=12, n_pump=1, pump_fwhm_nm=0.0)
        wide = spdc_rings(bibo, bibo.reference_cut, filter_fwhm_nm=3.0,
                          n_signal=3, **kw)
        narrow = spdc_rings(bibo, bibo.reference_cut, filter_fwhm_nm=0.0,
                            n_signal=1, **kw)
        assert narrow.radial_spread() < wide.radial_spread()

    def test_empty_acceptance_warns(self, bibo):
        # beyond the collinear curve nothing phase matches: empty cloud
        curve = phase_match_collinear(bibo, phi_grid=np.radians([55.0]))
        cut = CrystalCut(curve[0].theta + 0.05, curve[0].phi, 0.6)
        with pytest.warns(UserWarning, match="empty acceptance"):
            cloud = spdc_rings(bibo, cut, n_psi=8, n_signal=1, n_pump=1,
                               pump_fwhm_nm=0.0, filter_fwhm_nm=0.0)
        assert cloud.kx.size == 0

    def test_csv_export(self, bibo):
        cloud = spdc_rings(bibo, bibo.reference_cut, n_psi=8, n_signal=1, n_pump=1)
        text = cloud.to_csv()
        header, *rows = text.strip().split("\n")
        assert header == "kx,ky,wavelength_nm,weight,branch"
        assert len(rows) == cloud.kx.size
        assert cloud.kx.size >= 16  # both branches, all azimuths


class TestSpectralFwhm:
    def test_bibo_signal_arm(self, bibo):
        width = spectral_fwhm(bibo, bibo.reference_cut, arm="signal")
        assert abs(width - 7.0) / 7.0 < 0.30

    def test_bibo_idler_arm(self, bibo):
        width = spectral_fwhm(bibo, bibo.reference_cut, arm="idler")
        assert 14.0 * 0.7 < width < 17.5 * 1.3

    def test_phase_matching_width_halves_when_length_doubles(self, bibo):
        cut1 = bibo.reference_cut
        cut2 = CrystalCut(cut1.theta, cut1.phi, 2 * cut1.length_mm)
        w1 = spectral_fwhm(bibo, cut1, arm="signal", pump_fwhm_nm=0.0)
        w2 = spectral_fwhm(bibo, cut2, arm="signal", pump_fwhm_nm=0.0)
        assert abs(w2 - 0.5 * w1) / (0.5 * w1) < 0.05

    def test_bbo_idler_arm(self, bbo, bbo_cut_3deg):
        width = spectral_fwhm(bbo, bbo_cut_3deg, arm="idler")
        assert abs(width - 15.5) / 15.5 < 0.30

    @pytest.mark.xfail(
        strict=True,
        reason="published 7.5 nm for the 2 mm BBO fast photon includes "
               "non-phase-matching broadening; the sinc x pump model gives "
               "~4.8 nm at this cut (the same measurement's L-scaling, "
               "7.5 -> 9.6 nm at half length, is also incompatible with a "
               "pure sinc width)",
    )
    def test_bbo_signal_arm_published_value(self, bbo, bbo_cut_3deg):
        width = spectral_fwhm(bbo, bbo_cut_3deg, arm="signal")
        assert abs(width - 7.5) / 7.5 < 0.30

    def test_arm_validation(self, bibo):
        with pytest.raises(ValueError):
            spectral_fwhm(bibo, bibo.reference_cut, arm="pump")
