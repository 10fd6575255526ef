"""GHZ fidelity estimation from coincidence counts.

The estimator combines population counts in the H/V basis with parity
correlations measured in the n+1 local settings M_0..M_{n-1}:

    F = sum_k alpha_k (N_k+ - N_k-) / N_k + (N_z0 + N_z1) / (2 N_z),

with alpha_k = (-1)^k / (2n).  A fidelity above 1/2 certifies genuine
multipartite entanglement.  Uncertainties treat every recorded count as an
independent Poisson variable and propagate to first order (delta method).

Outcome strings use 'H'/'V' characters ordered by path label.  For an M_k
setting the letters denote the analyzer ports: 'H' is the +1 port, 'V' the
-1 port, and the event sign is the product of the per-photon eigenvalues,
i.e. +1 for an even number of 'V' outcomes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InsufficientDataError, SchemaError

Z_SETTING = "Z"


def m_setting(k: int) -> str:
    return f"M{k}"


def setting_index(name: str) -> Optional[int]:
    """M-setting index, or None for the Z setting."""
    if name == Z_SETTING:
        return None
    if name.startswith("M") and name[1:].isdigit():
        return int(name[1:])
    raise SchemaError(f"unknown setting name {name!r}")


def outcome_sign(outcome: str) -> int:
    return -1 if outcome.count("V") % 2 else 1


@dataclass(frozen=True)
class SettingCounts:
    """Tallies for one measurement setting.

    Either a full histogram over outcome strings, aggregated totals, or
    both (in which case they must agree).  Aggregated form uses
    ``{"n_plus": .., "n_minus": ..}`` for M settings and
    ``{"n_all_h": .., "n_all_v": .., "n_rest": ..}`` for Z.
    """

    setting: str
    histogram: Optional[dict] = None
    aggregated: Optional[dict] = None
    hours: Optional[float] = None

    def __post_init__(self):
        k = setting_index(self.setting)
        if self.histogram is None and self.aggregated is None:
            raise SchemaError(f"setting {self.setting}: no counts given")
        if self.histogram is not None:
            for outcome, c in self.histogram.items():
                if set(outcome) - set("HV"):
                    raise SchemaError(f"bad outcome string {outcome!r}")
                if not (isinstance(c, (int, np.integer)) and c >= 0):
                    raise SchemaError(f"counts must be non-negative integers, got {c!r}")
        if self.aggregated is not None:
            want = {"n_plus", "n_minus"} if k is not None else {"n_all_h", "n_all_v", "n_rest"}
            if set(self.aggregated) != want:
                raise SchemaError(
                    f"setting {self.setting}: aggregated keys must be {sorted(want)}"
                )
            for key, c in self.aggregated.items():
                if not (isinstance(c, (int, np.integer)) and c >= 0):
                    raise SchemaError(f"counts must be non-negative integers, got {c!r}")
        if self.histogram is not None and self.aggregated is not None:
            if self._aggregate_from_histogram() != dict(self.aggregated):
                raise SchemaError(
                    f"setting {self.setting}: histogram and aggregated counts disagree"
                )

    def _aggregate_from_histogram(self) -> dict:
        k = setting_index(self.setting)
        if k is None:
            n_h = n_v = n_rest = 0
            for outcome, c in self.histogram.items():
                if set(outcome) == {"H"}:
                    n_h += c
                elif set(outcome) == {"V"}:
                    n_v += c
                else:
                    n_rest += c
            return {"n_all_h": int(n_h), "n_all_v": int(n_v), "n_rest": int(n_rest)}
        n_plus = sum(c for o, c in self.histogram.items() if outcome_sign(o) > 0)
        n_minus = sum(c for o, c in self.histogram.items() if outcome_sign(o) < 0)
        return {"n_plus": int(n_plus), "n_minus": int(n_minus)}

    def aggregates(self) -> dict:
        if self.aggregated is not None:
            return dict(self.aggregated)
        return self._aggregate_from_histogram()

    def total(self) -> int:
        return sum(self.aggregates().values())


@dataclass(frozen=True)
class CountDataset:
    """One SettingCounts per required setting: Z plus M_0..M_{n-1}."""

    n: int
    settings: tuple

    def __post_init__(self):
        object.__setattr__(self, "settings", tuple(self.settings))
        names = [s.setting for s in self.settings]
        expected = [Z_SETTING] + [m_setting(k) for k in range(self.n)]
        if sorted(names) != sorted(expected):
            raise SchemaError(
                f"dataset must contain settings {expected} exactly once, got {names}"
            )

    def setting(self, name: str) -> SettingCounts:
        for s in self.settings:
            if s.setting == name:
                return s
        raise KeyError(name)

    def z(self) -> SettingCounts:
        return self.setting(Z_SETTING)

    def m(self, k: int) -> SettingCounts:
        return self.setting(m_setting(k))

    def correlations(self) -> np.ndarray:
        """E_k = (N_k+ - N_k-) / N_k for k = 0..n-1."""
        out = np.empty(self.n)
        for k in range(self.n):
            agg = self.m(k).aggregates()
            total = agg["n_plus"] + agg["n_minus"]
            if total < 1:
                raise InsufficientDataError(
                    f"setting {m_setting(k)} has zero total count"
                )
            out[k] = (agg["n_plus"] - agg["n_minus"]) / total
        return out


@dataclass(frozen=True)
class FidelityEstimate:
    value: float
    sigma: float
    population_term: float
    coherence_term: float


@dataclass(frozen=True)
class Verdict:
    fidelity: float
    sigma: float
    threshold: float
    sigmas_above: float
    genuine: bool


@dataclass(frozen=True)
class PopulationStats:
    population_fraction: float
    signal_to_noise: float  # math.inf when n_rest == 0


def alpha_coefficients(n: int) -> np.ndarray:
    return np.array([(-1.0) ** k / (2.0 * n) for k in range(n)])


def estimate_fidelity(data: CountDataset) -> FidelityEstimate:
    """Count-based fidelity with delta-method Poisson uncertainty."""
    z = data.z().aggregates()
    n_z = sum(z.values())
    if n_z < 1:
        raise InsufficientDataError("setting Z has zero total count")
    population = 0.5 * (z["n_all_h"] + z["n_all_v"]) / n_z
    coherence = float(np.dot(alpha_coefficients(data.n), data.correlations()))
    sigma = propagate_poisson(data)
    return FidelityEstimate(
        value=population + coherence,
        sigma=sigma,
        population_term=population,
        coherence_term=coherence,
    )


def propagate_poisson(data: CountDataset) -> float:
    """First-order standard deviation, independent Poisson counts per category.

    For each M_k term, var[(N+-N-)/N] = 4 N+ N- / N^3; for the Z term,
    var[(N0+N1)/N] = N_rest (N0+N1) / N^3.  Empty categories contribute
    zero variance.
    """
    var = 0.0
    alphas = alpha_coefficients(data.n)
    for k in range(data.n):
        agg = data.m(k).aggregates()
        n_p, n_m = agg["n_plus"], agg["n_minus"]
        total = n_p + n_m
        if total < 1:
            raise InsufficientDataError(f"setting {m_setting(k)} has zero total count")
        var += alphas[k] ** 2 * 4.0 * n_p * n_m / total**3
    z = data.z().aggregates()
    n_sig = z["n_all_h"] + z["n_all_v"]
    n_z = n_sig + z["n_rest"]
    if n_z < 1:
        raise InsufficientDataError("setting Z has zero total count")
    var += 0.25 * z["n_rest"] * n_sig / n_z**3
    return math.sqrt(var)


def entanglement_verdict(est: FidelityEstimate, threshold: float = 0.5) -> Verdict:
    """Distance above the bi-separability threshold in units of sigma."""
    if est.sigma <= 0:
        raise ValueError("verdict requires sigma > 0")
    sigmas = (est.value - threshold) / est.sigma
    return Verdict(
        fidelity=est.value,
        sigma=est.sigma,
        threshold=threshold,
        sigmas_above=sigmas,
        genuine=bool(est.value > threshold),
    )


def population_stats(z: SettingCounts) -> PopulationStats:
    if setting_index(z.setting) is not None:
        raise ValueError("population_stats expects the Z setting")
    agg = z.aggregates()
    n_sig = agg["n_all_h"] + agg["n_all_v"]
    n_z = n_sig + agg["n_rest"]
    if n_z < 1:
        raise InsufficientDataError("setting Z has zero total count")
    snr = math.inf if agg["n_rest"] == 0 else n_sig / agg["n_rest"]
    return PopulationStats(population_fraction=n_sig / n_z, signal_to_noise=snr)


def coherence_visibilities(data: CountDataset) -> np.ndarray:
    """|E_k| per M setting; their mean is the coherence visibility."""
    return np.abs(data.correlations())
