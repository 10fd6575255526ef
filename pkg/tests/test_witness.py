import math

import numpy as np
import pytest

from spdclab import qstate, witness
from spdclab.errors import InsufficientDataError, SchemaError
from spdclab.witness import (
    CountDataset,
    SettingCounts,
    entanglement_verdict,
    estimate_fidelity,
    m_setting,
    population_stats,
    propagate_poisson,
)

# frozen expected values for the shipped reconstruction (exact rationals:
# population 111/288, coherence sum_k |E_k|/20 over the shipped splits)
RECON_F = 0.6055817961311696
RECON_SIGMA = 0.02876300923222882


def _dataset(n, z_agg, m_aggs, hours=None):
    settings = [SettingCounts("Z", aggregated=z_agg, hours=hours)]
    for k, (p, m) in enumerate(m_aggs):
        settings.append(SettingCounts(m_setting(k),
                                      aggregated={"n_plus": p, "n_minus": m}))
    return CountDataset(n=n, settings=tuple(settings))


def ideal_dataset(n=10, per_setting=1000):
    half = per_setting // 2
    m_aggs = [(per_setting, 0) if k % 2 == 0 else (0, per_setting)
              for k in range(n)]
    return _dataset(n, {"n_all_h": half, "n_all_v": per_setting - half,
                        "n_rest": 0}, m_aggs)


def uniform_dataset(n=10, per_outcome=1):
    labels = qstate.basis_labels(n)
    settings = [SettingCounts("Z", histogram={lab: per_outcome for lab in labels})]
    for k in range(n):
        settings.append(SettingCounts(
            m_setting(k), histogram={lab: per_outcome for lab in labels}))
    return CountDataset(n=n, settings=tuple(settings))


class TestEstimateFidelity:
    def test_ideal_dataset_gives_unity(self):
        est = estimate_fidelity(ideal_dataset())
        assert abs(est.value - 1.0) < 1e-12
        assert abs(est.population_term - 0.5) < 1e-12
        assert abs(est.coherence_term - 0.5) < 1e-12

    def test_shipped_reconstruction(self, reconstruction_dataset):
        est = estimate_fidelity(reconstruction_dataset)
        assert abs(est.value - RECON_F) < 1e-12
        assert abs(est.value - 0.606) < 0.001
        assert abs(est.value - (est.population_term + est.coherence_term)) < 1e-12

    def test_uniform_noise(self):
        est = estimate_fidelity(uniform_dataset())
        assert abs(est.value - 1.0 / 1024.0) < 1e-12
        assert abs(est.coherence_term) < 1e-12

    def test_zero_setting_raises_with_name(self):
        data = _dataset(2, {"n_all_h": 5, "n_all_v": 5, "n_rest": 0},
                        [(5, 5), (0, 0)])
        with pytest.raises(InsufficientDataError, match="M1"):
            estimate_fidelity(data)

    def test_invariant_under_count_scaling(self):
        base = _dataset(3, {"n_all_h": 7, "n_all_v": 5, "n_rest": 3},
                        [(9, 4), (2, 11), (6, 6)])
        scaled = _dataset(3, {"n_all_h": 21, "n_all_v": 15, "n_rest": 9},
                          [(27, 12), (6, 33), (18, 18)])
        assert abs(estimate_fidelity(base).value
                   - estimate_fidelity(scaled).value) < 1e-12

    def test_term_bounds_on_random_datasets(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(2, 7))
            z = {"n_all_h": int(rng.integers(0, 50)),
                 "n_all_v": int(rng.integers(0, 50)),
                 "n_rest": int(rng.integers(0, 50))}
            if sum(z.values()) == 0:
                z["n_rest"] = 1
            m_aggs = []
            for _ in range(n):
                a, b = int(rng.integers(0, 50)), int(rng.integers(0, 50))
                if a + b == 0:
                    a = 1
                m_aggs.append((a, b))
            est = estimate_fidelity(_dataset(n, z, m_aggs))
            assert -0.5 - 1e-12 <= est.coherence_term <= 0.5 + 1e-12
            assert -1e-12 <= est.population_term <= 0.5 + 1e-12


class TestPoissonPropagation:
    def test_shipped_reconstruction_sigma(self, reconstruction_dataset):
        sigma = propagate_poisson(reconstruction_dataset)
        assert abs(sigma - RECON_SIGMA) < 1e-12
        assert 0.025 <= sigma <= 0.033
        assert abs(sigma - 0.029) / 0.029 < 0.15

    def test_empty_complement_contributes_zero(self):
        data = _dataset(1, {"n_all_h": 50, "n_all_v": 50, "n_rest": 0}, [(25, 25)])
        sigma = propagate_poisson(data)
        # population term variance vanishes; only the coherence term is left
        expected = math.sqrt(0.25 * 4 * 25 * 25 / 50**3)
        assert abs(sigma - expected) < 1e-12

    def test_inverse_sqrt_scaling(self):
        base = _dataset(2, {"n_all_h": 8, "n_all_v": 6, "n_rest": 4},
                        [(9, 3), (4, 10)])
        c = 9
        scaled = _dataset(2, {"n_all_h": 8 * c, "n_all_v": 6 * c, "n_rest": 4 * c},
                          [(9 * c, 3 * c), (4 * c, 10 * c)])
        assert abs(propagate_poisson(scaled)
                   - propagate_poisson(base) / math.sqrt(c)) < 1e-12

    def test_against_parametric_bootstrap(self, reconstruction_dataset):
        """Delta method vs 1e5-resample parametric bootstrap, 10% relative."""
        rng = np.random.default_rng(2024)
        runs = 100_000
        data = reconstruction_dataset
        alphas = witness.alpha_coefficients(data.n)
        f = np.zeros(runs)
        z = data.z().aggregates()
        n_h = rng.poisson(z["n_all_h"], runs).astype(float)
        n_v = rng.poisson(z["n_all_v"], runs).astype(float)
        n_r = rng.poisson(z["n_rest"], runs).astype(float)
        f += 0.5 * (n_h + n_v) / np.maximum(n_h + n_v + n_r, 1)
        for k in range(data.n):
            agg = data.m(k).aggregates()
            p = rng.poisson(agg["n_plus"], runs).astype(float)
            m = rng.poisson(agg["n_minus"], runs).astype(float)
            f += alphas[k] * (p - m) / np.maximum(p + m, 1)
        boot = f.std()
        delta = propagate_poisson(data)
        assert abs(delta - boot) / boot < 0.10


class TestVerdict:
    def test_reference_numbers(self):
        v = entanglement_verdict(witness.FidelityEstimate(0.606, 0.029, 0.0, 0.0))
        assert abs(v.sigmas_above - (0.606 - 0.5) / 0.029) < 1e-12
        assert round(v.sigmas_above, 2) == 3.66
        assert v.genuine

    def test_threshold_boundary(self):
        v = entanglement_verdict(witness.FidelityEstimate(0.5, 0.01, 0.0, 0.0))
        assert v.sigmas_above == 0.0 and not v.genuine

    def test_below_threshold(self):
        v = entanglement_verdict(witness.FidelityEstimate(0.3, 0.1, 0.0, 0.0))
        assert abs(v.sigmas_above + 2.0) < 1e-12 and not v.genuine

    def test_requires_positive_sigma(self):
        with pytest.raises(ValueError):
            entanglement_verdict(witness.FidelityEstimate(0.7, 0.0, 0.0, 0.0))


class TestPopulationStats:
    def test_reference_snr(self):
        stats = population_stats(SettingCounts(
            "Z", aggregated={"n_all_h": 61, "n_all_v": 50, "n_rest": 33}))
        assert abs(stats.signal_to_noise - 111 / 33) < 1e-12
        assert round(stats.signal_to_noise, 2) == 3.36

    def test_pure_population_is_infinite_snr(self):
        stats = population_stats(SettingCounts(
            "Z", aggregated={"n_all_h": 40, "n_all_v": 0, "n_rest": 0}))
        assert stats.population_fraction == 1.0
        assert math.isinf(stats.signal_to_noise)

    def test_uniform_histogram_fraction(self):
        labels = qstate.basis_labels(10)
        stats = population_stats(SettingCounts("Z", histogram={l: 1 for l in labels}))
        assert abs(stats.population_fraction - 2 / 1024) < 1e-12

    def test_rejects_m_setting(self):
        with pytest.raises(ValueError):
            population_stats(SettingCounts("M0", aggregated={"n_plus": 1, "n_minus": 1}))


class TestSchema:
    def test_histogram_aggregate_mismatch(self):
        with pytest.raises(SchemaError, match="disagree"):
            SettingCounts("Z", histogram={"HH": 3, "VV": 2},
                          aggregated={"n_all_h": 3, "n_all_v": 1, "n_rest": 0})

    def test_histogram_parity_aggregation(self):
        s = SettingCounts("M0", histogram={"HH": 4, "HV": 1, "VH": 2, "VV": 3})
        assert s.aggregates() == {"n_plus": 7, "n_minus": 3}

    def test_negative_counts_rejected(self):
        with pytest.raises(SchemaError):
            SettingCounts("Z", aggregated={"n_all_h": -1, "n_all_v": 0, "n_rest": 0})

    def test_missing_setting_rejected(self):
        with pytest.raises(SchemaError):
            CountDataset(n=2, settings=(
                SettingCounts("Z", aggregated={"n_all_h": 1, "n_all_v": 1, "n_rest": 0}),
                SettingCounts("M0", aggregated={"n_plus": 1, "n_minus": 0}),
            ))

    def test_duplicate_setting_rejected(self):
        s = SettingCounts("M0", aggregated={"n_plus": 1, "n_minus": 0})
        with pytest.raises(SchemaError):
            CountDataset(n=1, settings=(s, s))


class TestConvergenceToExpectation:
    def test_matches_witness_expectation_at_1e6_counts(self):
        """Sampling exact outcome probabilities reproduces <W> within 3 sigma."""
        state, _ = qstate.fuse_and_postselect(None, qstate.reference_network())
        n = state.n_modes
        target = qstate.expectation(state, qstate.witness_decomposition(n))
        rng = np.random.default_rng(99)
        counts_per_setting = 1_000_000
        labels = qstate.basis_labels(n)
        settings = []
        z_probs = qstate.outcome_distribution(state, [np.eye(2, dtype=complex)] * n)
        z_counts = rng.multinomial(counts_per_setting, z_probs)
        nz = np.flatnonzero(z_counts)
        settings.append(SettingCounts(
            "Z", histogram={labels[i]: int(z_counts[i]) for i in nz}))
        for k in range(n):
            ports = [qstate.mk_eigenbasis(k, n)] * n
            probs = qstate.outcome_distribution(state, ports)
            counts = rng.multinomial(counts_per_setting, probs)
            nzk = np.flatnonzero(counts)
            settings.append(SettingCounts(
                m_setting(k), histogram={labels[i]: int(counts[i]) for i in nzk}))
        data = CountDataset(n=n, settings=tuple(settings))
        est = estimate_fidelity(data)
        assert abs(est.value - target) < 3.0 * est.sigma
