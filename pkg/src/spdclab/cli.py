"""Command-line front end.

Subcommands: ``analyze`` (fidelity / verdict / p-value report from a count
file), ``simulate`` (Monte Carlo run writing a count file of the same
schema), ``crystal`` (phase-matching summaries, curves, rings, rate
ratios), and ``pvalue`` (bound from a trial-ledger file).

Exit codes are a contract: 0 success, 2 schema violation, 3 insufficient
data, 4 numerical failure.  Reports embed a SHA-256 digest of their input
file, so re-running on identical inputs reproduces the report up to the
timestamp field.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, crystal, hyptest, simulator, witness
from .errors import (
    InsufficientDataError,
    NumericalConsistencyError,
    SchemaError,
)

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_INSUFFICIENT = 3
EXIT_NUMERIC = 4

PROVENANCE_KINDS = ("experimental", "simulated", "reconstructed")


# ---------------------------------------------------------------------------
# Count-file schema
# ---------------------------------------------------------------------------

def dataset_from_dict(raw: dict) -> witness.CountDataset:
    if not isinstance(raw, dict):
        raise SchemaError("count file must contain a JSON object")
    kind = raw.get("kind", "count_dataset")
    if kind != "count_dataset":
        raise SchemaError(f"not a count_dataset record: kind={kind!r}")
    for key in ("n", "settings"):
        if key not in raw:
            raise SchemaError(f"count file missing required key {key!r}")
    prov = raw.get("provenance", "experimental")
    if prov not in PROVENANCE_KINDS:
        raise SchemaError(f"provenance must be one of {PROVENANCE_KINDS}, got {prov!r}")
    settings = []
    for i, rec in enumerate(raw["settings"]):
        try:
            settings.append(witness.SettingCounts(
                setting=rec["setting"],
                histogram=rec.get("histogram"),
                aggregated=rec.get("aggregated"),
                hours=rec.get("hours"),
            ))
        except KeyError as exc:
            raise SchemaError(f"settings[{i}]: missing key {exc}") from exc
        except SchemaError as exc:
            raise SchemaError(f"settings[{i}]: {exc}") from exc
    return witness.CountDataset(n=int(raw["n"]), settings=tuple(settings))


def dataset_to_dict(data: witness.CountDataset, provenance: str,
                    notes: str = "", extra: dict | None = None) -> dict:
    out = {
        "schema_version": 1,
        "kind": "count_dataset",
        "n": data.n,
        "provenance": provenance,
        "notes": notes,
        "settings": [],
    }
    for s in data.settings:
        rec = {"setting": s.setting}
        if s.histogram is not None:
            rec["histogram"] = {k: int(v) for k, v in sorted(s.histogram.items())}
        if s.aggregated is not None:
            rec["aggregated"] = {k: int(v) for k, v in sorted(s.aggregated.items())}
        if s.hours is not None:
            rec["hours"] = s.hours
        out["settings"].append(rec)
    if extra:
        out.update(extra)
    return out


def ledger_from_dict(raw: dict) -> hyptest.TrialLedger:
    if not isinstance(raw, dict):
        raise SchemaError("ledger file must contain a JSON object")
    if raw.get("kind", "trial_ledger") != "trial_ledger":
        raise SchemaError(f"not a trial_ledger record: kind={raw.get('kind')!r}")
    try:
        return hyptest.TrialLedger(
            n=int(raw["n"]),
            n_z=int(raw["n_z"]),
            n_k=tuple(int(c) for c in raw["n_k"]),
            f_exp=float(raw["f_exp"]),
            f_0=float(raw.get("f_0", 0.5)),
        )
    except KeyError as exc:
        raise SchemaError(f"ledger missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"malformed ledger: {exc}") from exc


def _read_json(path: str) -> tuple:
    p = Path(path)
    try:
        blob = p.read_bytes()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(blob.decode("utf-8")), hashlib.sha256(blob).hexdigest()
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc


def _dump_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _write_text(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def build_report(data: witness.CountDataset, digest: str, f_0: float = 0.5) -> dict:
    est = witness.estimate_fidelity(data)
    verdict = witness.entanglement_verdict(est, threshold=f_0)
    ledger = hyptest.TrialLedger(
        n=data.n,
        n_z=data.z().total(),
        n_k=tuple(data.m(k).total() for k in range(data.n)),
        f_exp=est.value,
        f_0=f_0,
    )
    bound = hyptest.p_value_bound(ledger)
    pop = witness.population_stats(data.z())
    corr = data.correlations()
    return {
        "tool": "spdclab",
        "tool_version": __version__,
        "inputs_digest": f"sha256:{digest}",
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "fidelity": {
            "value": est.value,
            "sigma": est.sigma,
            "population_term": est.population_term,
            "coherence_term": est.coherence_term,
        },
        "verdict": {
            "threshold": verdict.threshold,
            "sigmas_above_threshold": verdict.sigmas_above,
            "genuine_multipartite": verdict.genuine,
        },
        "pvalue": {
            "x_arg": bound.x_arg,
            "bound": bound.bound,
            "branch": bound.branch,
            "informative": bound.informative,
        },
        "diagnostics": {
            "population_fraction": pop.population_fraction,
            "signal_to_noise": (None if pop.signal_to_noise == float("inf")
                                else pop.signal_to_noise),
            "correlations": {witness.m_setting(k): float(corr[k])
                             for k in range(data.n)},
            "mean_coherence_visibility": float(np.mean(np.abs(corr))),
            "normalized_trial_spread": hyptest.s_total(ledger),
        },
    }


def _plot_data_files(data: witness.CountDataset, directory: Path) -> None:
    """CSV plot data: H/V-basis populations and per-setting correlations."""
    directory.mkdir(parents=True, exist_ok=True)
    z = data.z()
    lines = ["outcome,count"]
    if z.histogram is not None:
        for outcome in sorted(z.histogram):
            lines.append(f"{outcome},{z.histogram[outcome]}")
    else:
        agg = z.aggregates()
        lines += [f"all_H,{agg['n_all_h']}", f"all_V,{agg['n_all_v']}",
                  f"rest,{agg['n_rest']}"]
    (directory / "z_populations.csv").write_text("\n".join(lines) + "\n",
                                                 encoding="utf-8")
    rows = ["k,expectation,sigma"]
    for k in range(data.n):
        agg = data.m(k).aggregates()
        n_p, n_m = agg["n_plus"], agg["n_minus"]
        total = n_p + n_m
        e_k = (n_p - n_m) / total
        sig = float(np.sqrt(4.0 * n_p * n_m / total**3))
        rows.append(f"{k},{e_k:.6f},{sig:.6f}")
    (directory / "mk_expectations.csv").write_text("\n".join(rows) + "\n",
                                                   encoding="utf-8")


def cmd_analyze(args) -> int:
    raw, digest = _read_json(args.counts)
    data = dataset_from_dict(raw)
    report = build_report(data, digest, f_0=args.f0)
    _dump_json(report, args.out)
    if args.plot_data:
        _plot_data_files(data, Path(args.plot_data))
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    raw, digest = _read_json(args.config)
    config = simulator.config_from_dict(raw)
    if args.seed is not None:
        config = simulator.ExperimentConfig(
            sources=config.sources, network=config.network,
            interference=config.interference, rep_rate_hz=config.rep_rate_hz,
            detector=config.detector, seed=args.seed,
            provenance=config.provenance,
        )
    settings = (args.settings.split(",") if args.settings
                else [witness.Z_SETTING] + [witness.m_setting(k)
                                            for k in range(config.n_modes())])
    result = simulator.run_monte_carlo(config, args.pulses, settings)
    counts_payload = dataset_to_dict(
        result.counts, provenance="simulated",
        notes="Monte Carlo output",
        extra={"config_digest": f"sha256:{digest}", "seed": config.seed,
               "pulses_per_setting": result.pulses_per_setting},
    )
    _dump_json(counts_payload, args.out)
    if args.report:
        _dump_json({
            "tool": "spdclab",
            "tool_version": __version__,
            "config_digest": f"sha256:{digest}",
            "rates": result.rates,
            "diagnostics": result.diagnostics,
        }, args.report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# crystal
# ---------------------------------------------------------------------------

def _cut_from_args(crys, args) -> crystal.CrystalCut:
    if args.cut is not None:
        return crystal.CrystalCut(args.cut[0], args.cut[1], args.length_mm)
    ref = crys.reference_cut
    if ref is None:
        raise SchemaError("species has no reference cut; pass --cut THETA PHI")
    if args.length_mm != ref.length_mm:
        return crystal.CrystalCut(ref.theta, ref.phi, args.length_mm)
    return ref


def cmd_crystal_summary(args) -> int:
    crys = crystal.load_crystal(args.species)
    cut = _cut_from_args(crys, args)
    pump = args.pump_nm
    sol_pump = crystal.solve_waves(crys.sellmeier, cut.direction(), pump)
    sol_down = crystal.solve_waves(crys.sellmeier, cut.direction(), 2 * pump)
    payload = {
        "species": crys.sellmeier.species,
        "cut": {"theta_rad": cut.theta, "phi_rad": cut.phi,
                "length_mm": cut.length_mm},
        "pump_nm": pump,
        "indices": {
            "pump_fast": sol_pump.n_fast,
            "down_fast": sol_down.n_fast,
            "down_slow": sol_down.n_slow,
        },
        "walkoff_rad": {
            "pump_fast": sol_pump.walkoff_fast,
            "pump_slow": sol_pump.walkoff_slow,
            "down_fast": sol_down.walkoff_fast,
            "down_slow": sol_down.walkoff_slow,
            "pump_quadrature": float(np.hypot(sol_pump.walkoff_fast,
                                              sol_pump.walkoff_slow)),
        },
        "d_eff_collinear_pm_v": crystal.d_eff_typeII(
            crys, cut, crystal.COLLINEAR, pump_nm=pump),
    }
    try:
        arms = crystal.noncollinear_arms(crys, cut, pump_nm=pump)
        payload["noncollinear"] = {
            "d_eff_fs_pm_v": arms.d_eff_fs,
            "d_eff_sf_pm_v": arms.d_eff_sf,
            "pair_state_angle_rad": crystal.pair_state_angle(
                arms.d_eff_fs, arms.d_eff_sf),
            "opening_internal_rad": [arms.opening_i, arms.opening_j],
            "fast_deflection_deg": float(np.degrees(arms.fast_deflection_rad)),
        }
    except ValueError as exc:
        payload["noncollinear"] = {"unavailable": str(exc)}
    _dump_json(payload, args.out)
    return EXIT_OK


def cmd_crystal_curve(args) -> int:
    crys = crystal.load_crystal(args.species)
    samples = crystal.phase_match_collinear(
        crys, pump_nm=args.pump_nm,
        phi_grid=np.radians(np.arange(args.phi_start, args.phi_stop + 1e-9,
                                      args.phi_step)),
        branch=args.branch,
    )
    if args.format == "json":
        _dump_json({
            "species": crys.sellmeier.species,
            "branch": args.branch,
            "samples": [
                {"phi_rad": s.phi, "theta_rad": s.theta,
                 "d_eff_pm_v": s.d_eff_pm_v,
                 "walkoff_fast_rad": s.walkoff_fast,
                 "walkoff_slow_rad": s.walkoff_slow,
                 "delta_k_rad_per_um": s.delta_k_residual}
                for s in samples
            ],
        }, args.out)
        return EXIT_OK
    lines = ["phi_rad,theta_rad,d_eff_pm_v,walkoff_fast_rad,walkoff_slow_rad,"
             "delta_k_rad_per_um"]
    for s in samples:
        lines.append(f"{s.phi:.6f},{s.theta:.9f},{s.d_eff_pm_v:.5f},"
                     f"{s.walkoff_fast:.6f},{s.walkoff_slow:.6f},"
                     f"{s.delta_k_residual:.3e}")
    _write_text("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_crystal_rings(args) -> int:
    crys = crystal.load_crystal(args.species)
    cut = _cut_from_args(crys, args)
    cloud = crystal.spdc_rings(
        crys, cut, pump_nm=args.pump_nm, pump_fwhm_nm=args.pump_fwhm,
        filter_fwhm_nm=args.filter_fwhm,
    )
    if args.format == "json":
        _dump_json({
            "species": crys.sellmeier.species,
            "points": [
                {"kx": float(cloud.kx[i]), "ky": float(cloud.ky[i]),
                 "wavelength_nm": float(cloud.wavelength_nm[i]),
                 "weight": float(cloud.weight[i]),
                 "branch": str(cloud.branch[i])}
                for i in range(cloud.kx.size)
            ],
        }, args.out)
        return EXIT_OK
    _write_text(cloud.to_csv(), args.out)
    return EXIT_OK


def cmd_crystal_rate_ratio(args) -> int:
    if args.inputs:
        raw, _ = _read_json(args.inputs)
        table = {}
        for key, rec in raw.get("configurations", {}).items():
            table[key] = crystal.RateInputs(
                label=key, d_eff_pm_v=rec["d_eff_pm_v"],
                length_mm=rec["length_mm"], n_pump=rec["n_pump"],
                n_signal=rec["n_signal"], n_idler=rec["n_idler"],
                delta_walkoff=rec.get("delta_walkoff", 0.0),
                omega=rec.get("omega", 1.0),
            )
    else:
        table = crystal.load_rate_inputs()
    try:
        a, b = table[args.a], table[args.b]
    except KeyError as exc:
        raise SchemaError(
            f"unknown configuration {exc}; available: {sorted(table)}"
        ) from exc
    _dump_json({
        "numerator": args.a,
        "denominator": args.b,
        "rate_ratio": crystal.relative_pair_rate(a, b),
        "omega_ratio": a.omega / b.omega,
    }, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# pvalue
# ---------------------------------------------------------------------------

def cmd_pvalue(args) -> int:
    raw, digest = _read_json(args.ledger)
    ledger = ledger_from_dict(raw)
    bound = hyptest.p_value_bound(ledger)
    _dump_json({
        "inputs_digest": f"sha256:{digest}",
        "n_total_trials": ledger.n_total,
        "f_exp": ledger.f_exp,
        "f_0": ledger.f_0,
        "normalized_trial_spread": hyptest.s_total(ledger),
        "x_arg": bound.x_arg,
        "bound": bound.bound,
        "branch": bound.branch,
        "informative": bound.informative,
        **({"note": bound.note} if bound.note else {}),
    }, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spdclab",
        description="Multi-pair SPDC entanglement toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="fidelity, verdict and p-value from a count file")
    p.add_argument("counts")
    p.add_argument("--out")
    p.add_argument("--plot-data", help="directory for plot-data CSV files")
    p.add_argument("--f0", type=float, default=0.5,
                   help="bi-separability threshold (default 0.5)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="Monte Carlo run producing a count file")
    p.add_argument("config")
    p.add_argument("--pulses", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--settings", help="comma list, e.g. Z,M0,M5 (default: all)")
    p.add_argument("--out")
    p.add_argument("--report", help="write a rates/diagnostics report here")
    p.set_defaults(func=cmd_simulate)

    pc = sub.add_parser("crystal", help="phase-matching calculations")
    csub = pc.add_subparsers(dest="crystal_command", required=True)

    def add_cut_args(q):
        q.add_argument("--species", required=True, choices=["bbo", "bibo"])
        q.add_argument("--cut", type=float, nargs=2, metavar=("THETA", "PHI"),
                       help="cut angles in rad (default: shipped reference cut)")
        q.add_argument("--length-mm", type=float, default=None)
        q.add_argument("--pump-nm", type=float, default=390.0)

    q = csub.add_parser("summary", help="indices, walk-offs and d_eff at a cut")
    add_cut_args(q)
    q.add_argument("--out")
    q.set_defaults(func=cmd_crystal_summary)

    q = csub.add_parser("curve", help="collinear type-II phase-matching curve")
    q.add_argument("--species", required=True, choices=["bbo", "bibo"])
    q.add_argument("--pump-nm", type=float, default=390.0)
    q.add_argument("--branch", choices=["upper", "lower"], default="upper")
    q.add_argument("--phi-start", type=float, default=0.0)
    q.add_argument("--phi-stop", type=float, default=90.0)
    q.add_argument("--phi-step", type=float, default=1.0)
    q.add_argument("--format", choices=["csv", "json"], default="csv")
    q.add_argument("--out")
    q.set_defaults(func=cmd_crystal_curve)

    q = csub.add_parser("rings", help="emission-ring point cloud")
    add_cut_args(q)
    q.add_argument("--pump-fwhm", type=float, default=2.1)
    q.add_argument("--filter-fwhm", type=float, default=3.0)
    q.add_argument("--format", choices=["csv", "json"], default="csv")
    q.add_argument("--out")
    q.set_defaults(func=cmd_crystal_rings)

    q = csub.add_parser("rate-ratio", help="relative pair-generation rate")
    q.add_argument("--inputs", help="JSON file of rate inputs (default: shipped)")
    q.add_argument("--a", default="bibo_0p6mm")
    q.add_argument("--b", default="bbo_2mm")
    q.add_argument("--out")
    q.set_defaults(func=cmd_crystal_rate_ratio)

    p = sub.add_parser("pvalue", help="p-value bound from a trial ledger")
    p.add_argument("ledger")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pvalue)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "length_mm", None) is None and hasattr(args, "length_mm"):
            crys = crystal.load_crystal(args.species)
            args.length_mm = (crys.reference_cut.length_mm
                              if crys.reference_cut else 1.0)
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except InsufficientDataError as exc:
        print(f"insufficient data: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (NumericalConsistencyError, FloatingPointError,
            ZeroDivisionError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
