"""Command-line front end: seeded experiments and machine-readable reports.

Subcommands
-----------
simulate      run one protocol session, write a summary plus a pair-record log
attack-table  analytic eavesdropping figures for every strategy/channel/model
wigner        inequality value, interception thresholds, eta sweep, optional MC
so4           paired-arm Monte Carlo for the random-rotation attack ratio
scenario      named, self-checking reproductions of the headline figures

Exit codes: 0 success, 1 runtime error (diagnostic on stderr), 2 usage error.
A failed scenario check is reported in the JSON and on stdout, not via the
exit code.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from pathlib import Path

import numpy as np

from .eavesdrop import EavesdropConfig
from .info import (
    ANALYTICS_CSV_COLUMNS,
    ErrorCorrectionParams,
    analytics_table,
    equal_info_ratio_rows,
    huttner_ekert_bound,
    strategy_analytics,
    write_analytics_csv,
)
from .protocol import SessionConfig, run_session, session_summary, sift
from .reports import (
    RunManifest,
    ScenarioSpec,
    dumps_json,
    validate_report,
    write_csv,
    write_json,
)
from .wigner import (
    DEFAULT_PATH_EFFICIENCY,
    WignerSettings,
    estimate_wigner,
    interception_slope,
    intercepted_wigner,
    lhv_survey,
    max_undetected_fraction,
    undetected_sweep,
    wigner_session,
    wigner_value,
)

SCENARIO_NAMES = ("fixed-basis", "breidbart", "wigner-threshold", "so4-ratio", "huttner-bound")
SWEEP_COLUMNS = ("eta", "W", "stderr", "detected")
BOOTSTRAP_DRAWS = 1000


def _resolve_seed(value: int | None) -> int:
    """--seed wins; QKD2E_SEED is the fallback; 0 otherwise."""
    if value is not None:
        return value
    env = os.environ.get("QKD2E_SEED", "").strip()
    return int(env) if env else 0


def _angles_arg(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated degrees: chi,psi,omega")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad angle in {text!r}") from exc


def _choice_arg(text: str) -> tuple[int, int]:
    parts = text.split(",")
    try:
        pair = tuple(int(p) for p in parts)
    except ValueError:
        pair = ()
    if len(pair) != 2 or any(p not in (0, 1) for p in pair):
        raise argparse.ArgumentTypeError("expected two comma-separated bits, e.g. 0,1")
    return pair


def _emit_json(obj: dict, schema: str, out: str | None) -> None:
    validate_report(obj, schema)
    if out:
        write_json(out, obj)
        print(f"wrote {out}")
    else:
        print(dumps_json(obj))


def _check(label: str, value: float, expected: float, tolerance: float) -> dict:
    return {
        "label": label,
        "value": float(value),
        "expected": float(expected),
        "tolerance": float(tolerance),
        "pass": bool(abs(value - expected) <= tolerance),
    }


def _binom_tol(p: float, n: int) -> float:
    """Four binomial sigmas; the scenario pair counts keep the false-alarm
    rate of each such check below 1e-4."""
    if n <= 0:
        raise ValueError("no sifted rounds to test against")
    return 4.0 * math.sqrt(p * (1.0 - p) / n)


# ---------------------------------------------------------------------------
# simulate

def _eve_from_args(args) -> EavesdropConfig:
    return EavesdropConfig(
        strategy=args.eve,
        eta=args.eta,
        fixed_choice=args.fixed_choice,
        random_fixed_choice=args.random_fixed_choice,
        rotation_dim=args.rotation_dim,
    )


def cmd_simulate(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.protocol == "ekert-wigner":
        return _simulate_wigner(args, seed)

    config = SessionConfig(
        protocol=args.protocol,
        channel=args.channel,
        n_pairs=args.pairs,
        eve=_eve_from_args(args),
        seed=seed,
    )
    log = run_session(config)
    summary = session_summary(log).to_dict()
    validate_report(summary, "session_summary")

    if args.format == "csv":
        row = dict(summary)
        per_dof = row.pop("qber_per_dof")
        for dof, q in per_dof.items():
            row[f"qber_{dof}"] = q
        columns = [c for c in (
            "protocol", "channel", "strategy", "n_pairs", "n_sifted",
            "retention", "qber_pol", "qber_phase", "qber_key", "eve_fraction",
        ) if c in row]
        if args.out:
            write_csv(args.out, columns, [row])
            print(f"wrote {args.out}")
        else:
            print(_csv_text(columns, [row]), end="")
    elif args.out:
        write_json(args.out, summary)
        print(f"wrote {args.out}")
    else:
        print(dumps_json(summary))

    if args.out:
        log_path = Path(args.out).with_suffix(".jsonl")
        log.to_jsonl(log_path)
        print(f"wrote {log_path}")
        qbers = " ".join(f"{d}={q:.4f}" for d, q in summary["qber_per_dof"].items())
        print(
            f"sifted {summary['n_sifted']}/{summary['n_pairs']} "
            f"qber[{qbers}] key={summary['qber_key']:.4f}"
        )
    return 0


def _simulate_wigner(args, seed: int) -> int:
    """ekert-wigner sessions produce inequality statistics, not pair records."""
    settings = WignerSettings.from_degrees(*args.angles)
    if args.eve not in ("none", "fixed-basis"):
        raise ValueError(
            "ekert-wigner interception measures the key basis; use --eve none "
            "or fixed-basis"
        )
    eta = 0.0 if args.eve == "none" else args.eta
    config = SessionConfig(
        protocol="ekert-wigner",
        channel=args.channel,
        n_pairs=args.pairs,
        eve=EavesdropConfig(strategy=args.eve, eta=args.eta),
        seed=seed,
    )
    runs = wigner_session(config, settings, efficiency=args.efficiency)
    report = _wigner_report(settings, eta, args.rel_uncertainty, runs)
    _emit_wigner(report, args.format, args.out)
    return 0


# ---------------------------------------------------------------------------
# attack-table

def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _attack_csv_text(rows) -> str:
    return _csv_text(ANALYTICS_CSV_COLUMNS, [r.to_csv_row() for r in rows])


def _ratio_entries() -> list[dict]:
    entries = []
    for row in equal_info_ratio_rows():
        ref = row["reference"]
        deviation = (row["value"] - ref) / ref if ref else None
        entries.append({**row, "deviation": deviation})
    return entries


def cmd_attack_table(args) -> int:
    rows = analytics_table()
    if args.model:
        rows = [r for r in rows if r.model == args.model]
    ratios = _ratio_entries()

    if args.format == "csv":
        if args.out:
            write_analytics_csv(args.out, rows)
            print(f"wrote {args.out}")
            dest = sys.stdout
        else:
            print(_attack_csv_text(rows), end="")
            dest = sys.stderr  # keep piped CSV clean
        for entry in ratios:
            ref = "n/a" if entry["reference"] is None else f"{entry['reference']:.4f}"
            print(f"ratio {entry['label']}: {entry['value']:.4f} (reference {ref})", file=dest)
    else:
        from .reports import annotate_analytics

        report = {"rows": [annotate_analytics(r) for r in rows], "ratios": ratios}
        _emit_json(report, "attack_table", args.out)

    if args.plot:
        path = Path(args.out).with_suffix(".png") if args.out else Path("attack_table.png")
        from .plots import attack_table_figure

        attack_table_figure([r.to_dict() for r in rows], path)
        print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# wigner

def _wigner_report(
    settings: WignerSettings,
    eta: float,
    rel_uncertainty: float,
    runs: dict | None = None,
    sweep_max: float = 0.15,
    sweep_steps: int = 31,
) -> dict:
    report = {
        "angles_deg": [
            math.degrees(settings.chi),
            math.degrees(settings.psi),
            math.degrees(settings.omega),
        ],
        "rel_uncertainty": rel_uncertainty,
        "W_quantum": wigner_value(settings),
        "W_intercepted": intercepted_wigner(settings, eta),
        "slope": interception_slope(settings),
        "max_undetected_eta": {
            "single": max_undetected_fraction(rel_uncertainty, 1, settings),
            "double": max_undetected_fraction(rel_uncertainty, 2, settings),
        },
        "sweep": undetected_sweep(
            settings, np.linspace(0.0, sweep_max, sweep_steps), rel_uncertainty, 1
        ),
    }
    if runs is not None:
        mc = {}
        for dof, data in runs.items():
            w_hat, stderr = estimate_wigner(data)
            d = data.to_dict()
            mc[dof] = {
                "W_hat": w_hat,
                "stderr": stderr,
                "counts": d["counts"],
                "key_length": d["key_length"],
                "key_qber": d["key_qber"],
                "n_pairs": d["n_pairs"],
                "efficiency": d["efficiency"],
                "eta": d["eta"],
            }
        report["monte_carlo"] = mc
    return report


def _emit_wigner(report: dict, fmt: str, out: str | None) -> None:
    if fmt == "csv":
        validate_report(report, "wigner_report")
        if out:
            write_csv(out, SWEEP_COLUMNS, report["sweep"])
            print(f"wrote {out}")
        else:
            print(_csv_text(SWEEP_COLUMNS, report["sweep"]), end="")
        th = report["max_undetected_eta"]
        print(
            f"max undetected eta: single {th['single']:.4f}, double {th['double']:.4f}",
            file=sys.stdout if out else sys.stderr,
        )
    else:
        _emit_json(report, "wigner_report", out)


def cmd_wigner(args) -> int:
    seed = _resolve_seed(args.seed)
    settings = WignerSettings.from_degrees(*args.angles)
    runs = None
    if args.pairs > 0:
        strategy = "none" if args.eta == 0.0 else "fixed-basis"
        config = SessionConfig(
            protocol="ekert-wigner",
            channel=args.channel,
            n_pairs=args.pairs,
            eve=EavesdropConfig(strategy=strategy, eta=args.eta),
            seed=seed,
        )
        runs = wigner_session(config, settings, efficiency=args.efficiency)
    report = _wigner_report(settings, args.eta, args.rel_uncertainty, runs)
    _emit_wigner(report, args.format, args.out)

    if args.plot:
        path = Path(args.out).with_suffix(".png") if args.out else Path("wigner.png")
        from .plots import wigner_sweep_figure

        wigner_sweep_figure(
            report["sweep"], report["max_undetected_eta"], report["W_quantum"], path
        )
        print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# so4

def _arm_error_counts(channel: str, pairs: int, eta: float, seed: int,
                      rotation_dim: int | None = None) -> tuple[int, int]:
    config = SessionConfig(
        protocol="bb84x2",
        channel=channel,
        n_pairs=pairs,
        eve=EavesdropConfig(strategy="so4", eta=eta, rotation_dim=rotation_dim),
        seed=seed,
    )
    log = run_session(config)
    summary = session_summary(log)
    errors = round(summary.qber_key * summary.n_sifted)
    return errors, summary.n_sifted


def so4_report(pairs: int, seed: int, eta: float, baseline: bool = True) -> dict:
    """Paired-arm comparison: same seed drives both channels, so the arms see
    identical basis choices and interception draws."""
    k_s, n_s = _arm_error_counts("single-pol", pairs, eta, seed)
    k_d, n_d = _arm_error_counts("double", pairs, eta, seed)

    rng = np.random.Generator(np.random.Philox(key=seed).jumped(7))
    p_s = rng.beta(k_s + 0.5, n_s - k_s + 0.5, size=BOOTSTRAP_DRAWS)
    p_d = rng.beta(k_d + 0.5, n_d - k_d + 0.5, size=BOOTSTRAP_DRAWS)
    draws = p_d / p_s
    if k_s > 0:
        ratio = (k_d / n_d) / (k_s / n_s)
    else:
        ratio = float(np.median(draws))
    lo, hi = np.quantile(draws, [0.025, 0.975])

    report = {
        "n_pairs": pairs,
        "seed": seed,
        "eta": eta,
        "e_single": k_s / n_s if n_s else 0.0,
        "e_double": k_d / n_d if n_d else 0.0,
        "ratio": ratio,
        "ratio_ci": [float(lo), float(hi)],
    }
    if baseline:
        k_p, n_p = _arm_error_counts("single-pol", pairs, eta, seed, rotation_dim=2)
        k_f, n_f = _arm_error_counts("single-phase", pairs, eta, seed, rotation_dim=2)
        report["qubit_rotation_baseline"] = {
            "e_single_pol": k_p / n_p if n_p else 0.0,
            "e_single_phase": k_f / n_f if n_f else 0.0,
            "note": "rotation applied to the keyed qubit alone rather than the "
                    "photon's full basis; single channels only",
        }
    return report


def cmd_so4(args) -> int:
    seed = _resolve_seed(args.seed)
    report = so4_report(args.pairs, seed, args.eta, baseline=not args.no_baseline)
    _emit_json(report, "so4_report", args.out)
    lo, hi = report["ratio_ci"]
    print(
        f"e_single={report['e_single']:.4f} e_double={report['e_double']:.4f} "
        f"ratio={report['ratio']:.4f} ci=[{lo:.4f}, {hi:.4f}]"
    )
    if args.plot:
        path = Path(args.out).with_suffix(".png") if args.out else Path("so4.png")
        from .plots import so4_ratio_figure

        so4_ratio_figure(report, path)
        print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# scenario

def _scenario_fixed_basis(seed: int, pairs: int | None) -> dict:
    n = pairs or 100_000
    table = strategy_analytics("fixed-basis", "double", "cascade")
    config = SessionConfig(
        protocol="bb84x2", channel="double", n_pairs=n,
        eve=EavesdropConfig(strategy="fixed-basis", eta=1.0), seed=seed,
    )
    log = run_session(config)
    summary = session_summary(log)
    keys = sift(log)
    checks = [
        _check("analytic q1", table.eve_bit_error, 0.25, 0.0),
        _check("analytic p2 (cascade double)", table.eve_correct_prob, 5 / 8, 0.0),
        _check("analytic q_AB (cascade double)", table.induced_qber, 15 / 32, 0.0),
        _check("mc pol qber", keys["pol"].qber, 0.25, _binom_tol(0.25, keys["pol"].length)),
        _check("mc phase qber", keys["phase"].qber, 0.25, _binom_tol(0.25, keys["phase"].length)),
        _check("mc xor qber", summary.qber_key, 0.375, _binom_tol(0.375, summary.n_sifted)),
    ]
    return {"name": "fixed-basis", "seed": seed, "checks": checks,
            "summary": summary.to_dict()}


def _scenario_breidbart(seed: int, pairs: int | None) -> dict:
    n = pairs or 100_000
    q1 = strategy_analytics("breidbart", "single", "physical").eve_bit_error
    single = strategy_analytics("breidbart", "single", "physical").induced_qber
    double = strategy_analytics("breidbart", "double", "physical").induced_qber
    config = SessionConfig(
        protocol="bb84x2", channel="double", n_pairs=n,
        eve=EavesdropConfig(strategy="breidbart", eta=1.0), seed=seed,
    )
    log = run_session(config)
    summary = session_summary(log)
    keys = sift(log)
    checks = [
        _check("analytic q1", q1, (2.0 - math.sqrt(2.0)) / 4.0, 0.0),
        _check("analytic single qber (physical)", single, 0.25, 0.0),
        _check("analytic double xor qber (physical)", double, 0.375, 0.0),
        _check("mc pol qber", keys["pol"].qber, 0.25, _binom_tol(0.25, keys["pol"].length)),
        _check("mc phase qber", keys["phase"].qber, 0.25, _binom_tol(0.25, keys["phase"].length)),
        _check("mc xor qber", summary.qber_key, 0.375, _binom_tol(0.375, summary.n_sifted)),
    ]
    return {"name": "breidbart", "seed": seed, "checks": checks,
            "summary": summary.to_dict()}


def _scenario_wigner_threshold(seed: int, pairs: int | None) -> dict:
    n = pairs or 1_000_000
    settings = WignerSettings()
    survey = lhv_survey(settings)
    config = SessionConfig(
        protocol="ekert-wigner", channel="single-pol", n_pairs=n,
        eve=EavesdropConfig(strategy="none"), seed=seed,
    )
    runs = wigner_session(config, settings, efficiency=1.0)
    w_hat, stderr = estimate_wigner(runs["pol"])
    checks = [
        _check("analytic W(0,30,60)", wigner_value(settings), -0.125, 1e-9),
        _check("interception slope", interception_slope(settings), 3 / 16, 1e-9),
        _check("max undetected eta (single)",
               max_undetected_fraction(0.1, 1, settings), 0.067, 0.003),
        _check("max undetected eta (double)",
               max_undetected_fraction(0.1, 2, settings), 0.047, 0.003),
        _check("lhv admissible minimum W", survey.min_admissible_w, 0.0, 0.0),
        _check("mc W (pol, efficiency 1)", w_hat, -0.125, 4.0 * stderr),
    ]
    return {"name": "wigner-threshold", "seed": seed, "checks": checks,
            "lhv_cases": survey.n_cases, "lhv_admissible": len(survey.admissible)}


def _scenario_so4_ratio(seed: int, pairs: int | None) -> dict:
    n = pairs or 200_000
    report = so4_report(n, seed, 1.0, baseline=True)
    n_s = round(n / 2)  # single arm sifts on one DOF
    n_d = round(n / 4)
    checks = [
        _check("mc ratio double/single", report["ratio"], 1.25, 0.10),
        _check("mc single-arm qber", report["e_single"], 1 / 3, _binom_tol(1 / 3, n_s)),
        _check("mc double-arm xor qber", report["e_double"], 5 / 12, _binom_tol(5 / 12, n_d)),
    ]
    return {"name": "so4-ratio", "seed": seed, "checks": checks, "so4": report}


def _scenario_huttner_bound(seed: int, pairs: int | None) -> dict:
    unit = ErrorCorrectionParams(eta=1.0, alpha=1.0)
    scaled = ErrorCorrectionParams(eta=0.5, alpha=0.5)
    checks = [
        _check("single-channel secure-bit bound", huttner_ekert_bound(unit, "single"),
               0.299, 0.0),
        _check("double-channel secure-bit bound", huttner_ekert_bound(unit, "double"),
               0.118, 0.0),
        _check("bound scales with eta*alpha", huttner_ekert_bound(scaled, "single"),
               0.299 * 0.25, 0.0),
    ]
    return {"name": "huttner-bound", "seed": seed, "checks": checks}


_SCENARIO_FUNCS = {
    "fixed-basis": _scenario_fixed_basis,
    "breidbart": _scenario_breidbart,
    "wigner-threshold": _scenario_wigner_threshold,
    "so4-ratio": _scenario_so4_ratio,
    "huttner-bound": _scenario_huttner_bound,
}


def cmd_scenario(args) -> int:
    seed = _resolve_seed(args.seed)
    names = SCENARIO_NAMES if args.name == "all" else (args.name,)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    specs = []
    all_pass = True
    for name in names:
        report = _SCENARIO_FUNCS[name](seed, args.pairs)
        validate_report(report, "scenario_report")
        path = out_dir / f"{name}.json"
        write_json(path, report)
        specs.append(ScenarioSpec(
            name=name,
            config={"seed": seed, "pairs": args.pairs},
            output_path=str(path),
            format="json",
        ))
        for check in report["checks"]:
            verdict = "PASS" if check["pass"] else "FAIL"
            all_pass &= check["pass"]
            print(
                f"{verdict} {name}: {check['label']} = {check['value']:.6g} "
                f"(expected {check['expected']:.6g} +/- {check['tolerance']:.3g})"
            )
        print(f"wrote {path}")

    if args.manifest:
        manifest = RunManifest.collect(seed, specs)
        obj = manifest.to_dict()
        validate_report(obj, "run_manifest")
        write_json(args.manifest, obj)
        print(f"wrote {args.manifest}")
    if not all_pass:
        print("some checks failed; see the report files", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_common(parser, pairs_default: int) -> None:
    parser.add_argument("--pairs", type=int, default=pairs_default,
                        help=f"number of emitted pairs (default {pairs_default})")
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed; falls back to QKD2E_SEED, then 0")
    parser.add_argument("--out", default=None, help="output file (stdout if omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkd2e",
        description="Doubly entangled photon-pair QKD simulator and analysis reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one protocol session")
    p.add_argument("--protocol", choices=("bb84x2", "ekert-wigner"), default="bb84x2")
    p.add_argument("--channel", choices=("single-pol", "single-phase", "double"),
                   default="double")
    _add_common(p, pairs_default=100_000)
    p.add_argument("--eve", choices=("none", "fixed-basis", "breidbart", "so4"),
                   default="none")
    p.add_argument("--eta", type=float, default=1.0,
                   help="interception probability per pair (default 1.0)")
    p.add_argument("--fixed-choice", type=_choice_arg, default=(0, 0),
                   metavar="POL,PHASE", help="basis labels for --eve fixed-basis")
    p.add_argument("--random-fixed-choice", action="store_true",
                   help="redraw the fixed-basis choice on every intercepted pair")
    p.add_argument("--rotation-dim", type=int, choices=(2, 4), default=None,
                   help="rotate the keyed qubit (2) or the whole photon (4, default)")
    p.add_argument("--angles", type=_angles_arg, default=(0.0, 30.0, 60.0),
                   metavar="CHI,PSI,OMEGA", help="ekert-wigner settings in degrees")
    p.add_argument("--rel-uncertainty", type=float, default=0.1)
    p.add_argument("--efficiency", type=float, default=DEFAULT_PATH_EFFICIENCY,
                   help="per-path detection efficiency for ekert-wigner sessions")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("attack-table", help="analytic eavesdropping figures")
    p.add_argument("--model", choices=("cascade", "physical"), default=None,
                   help="restrict rows to one error-accounting model")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--plot", action="store_true", help="also render a PNG figure")
    p.set_defaults(func=cmd_attack_table)

    p = sub.add_parser("wigner", help="inequality thresholds and sweep")
    p.add_argument("--angles", type=_angles_arg, default=(0.0, 30.0, 60.0),
                   metavar="CHI,PSI,OMEGA", help="settings in degrees (default 0,30,60)")
    p.add_argument("--rel-uncertainty", type=float, default=0.1,
                   help="relative uncertainty on W the monitor can resolve")
    p.add_argument("--eta", type=float, default=0.0,
                   help="interception fraction for W_intercepted and the MC run")
    p.add_argument("--channel", choices=("single-pol", "single-phase", "double"),
                   default="double")
    _add_common(p, pairs_default=0)
    p.add_argument("--efficiency", type=float, default=DEFAULT_PATH_EFFICIENCY)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("so4", help="random-rotation attack, paired arms")
    _add_common(p, pairs_default=200_000)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--no-baseline", action="store_true",
                   help="skip the single-qubit rotation baseline arms")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_so4)

    p = sub.add_parser("scenario", help="named self-checking reproductions")
    p.add_argument("name", choices=SCENARIO_NAMES + ("all",))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--pairs", type=int, default=None,
                   help="override the scenario's default pair count")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--manifest", default=None,
                   help="also write a run manifest to this path")
    p.set_defaults(func=cmd_scenario)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # argparse handles usage errors with exit 2
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
