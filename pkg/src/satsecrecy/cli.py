"""Experiment runner CLI.

``secrecy run <config> <experiment> --out <dir>`` executes a named sweep
(fig2..fig5 presets or a sweep declared in the config), writing
``<experiment>.csv``, ``<experiment>.png`` and a ``manifest.json`` with the
fully resolved configuration and artifact checksums.  ``secrecy validate``
reports config diagnostics; ``secrecy point`` evaluates one scenario and
prints a JSON report.  Exit codes: 0 success, 2 configuration error,
3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .specfun import SeriesConvergenceError, q_fn
from .secrecy_fbl import (SnrPair, avg_secrecy_lower_bound,
                          avg_secrecy_taylor_approx, fbl_secrecy_rate,
                          leakage_for_rate, secrecy_capacity)
from .montecarlo import estimate_secrecy_and_capacity, sweep
from .scenario import (ConfigError, ScenarioConfig, apply_overrides,
                       default_config, from_dict, load_raw, preset_sweep,
                       validate_raw)

RATE_COLUMNS = ("mc_mean", "mc_stderr", "lower_bound", "taylor_approx",
                "asymptotic_capacity")
# fig CSVs name the asymptote column plainly
_CSV_RENAME = {"asymptotic_capacity": "capacity"}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


def _write_csv(path: Path, rows: list[dict]) -> None:
    if "delta" in rows[0]:
        columns = ["phi_deg", "d_eb_km", "delta"]
    else:
        axis = next(k for k in rows[0] if k not in RATE_COLUMNS)
        columns = [axis] + list(RATE_COLUMNS)
    header = [_CSV_RENAME.get(c, c) for c in columns]
    lines = [",".join(header)]
    lines += [",".join(_fmt(row[c]) for c in columns) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _load(config_path: str, overrides: list[str] | None = None,
          seed: int | None = None, samples: int | None = None) -> ScenarioConfig:
    raw = load_raw(config_path)
    items = list(overrides or [])
    if seed is not None:
        items.append(f"mc.master_seed={seed}")
    if samples is not None:
        items.append(f"mc.samples={samples}")
    return from_dict(apply_overrides(raw, items))


def _cmd_run(args) -> int:
    cfg = _load(args.config, args.set, args.seed, args.samples)
    spec = preset_sweep(args.experiment, cfg)
    rows = sweep(spec, cfg)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{args.experiment}.csv"
    _write_csv(csv_path, rows)
    artifacts = {csv_path.name: _sha256(csv_path)}
    if not args.no_figure:
        from .figures import render_sweep_figure
        png_path = out_dir / f"{args.experiment}.png"
        render_sweep_figure(rows, spec.axis, str(png_path),
                            title=args.experiment)
        artifacts[png_path.name] = _sha256(png_path)
    manifest = {
        "version": __version__,
        "experiment": args.experiment,
        "master_seed": cfg.mc.master_seed,
        "config": cfg.to_dict(),
        "artifacts": artifacts,
    }
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n",
                             encoding="utf-8")
    print(f"wrote {csv_path} ({len(rows)} rows) and {manifest_path}")
    return 0


def _cmd_validate(args) -> int:
    raw = load_raw(args.config)
    diags = validate_raw(raw)
    if not diags:
        print("configuration is valid")
        return 0
    for path, msg in diags:
        print(f"{path}: {msg}")
    return 2


def _point_report(cfg: ScenarioConfig, with_mc: bool) -> dict:
    scale_b, scale_e = cfg.scales()
    snrs = SnrPair(10.0 ** (cfg.link.mean_snr_b_db / 10.0),
                   10.0 ** (cfg.link.mean_snr_e_db / 10.0))
    report = {
        "mean_snr_b_db": cfg.link.mean_snr_b_db,
        "mean_snr_e_db": cfg.link.mean_snr_e_db,
        "secrecy_capacity": secrecy_capacity(snrs),
        "fbl_secrecy_rate": fbl_secrecy_rate(snrs, cfg.fbl),
        "lower_bound": avg_secrecy_lower_bound(
            cfg.srf_b, cfg.srf_e, scale_b, scale_e, cfg.fbl),
        "taylor_approx": avg_secrecy_taylor_approx(
            cfg.srf_b, cfg.srf_e, scale_b, scale_e, cfg.fbl),
    }
    if cfg.link.d_eb_km > 0.0:
        phi = cfg.geometry_angle_deg()
        eve_snr = cfg.eve_scale_at_angle(phi) * _mean_power(cfg)
        leak = leakage_for_rate(SnrPair(snrs.snr_b, eve_snr), cfg.fbl.n,
                                cfg.fbl.eps_b, cfg.fbl.k_bits / cfg.fbl.n)
        report["phi_deg"] = phi
        report["delta"] = leak.delta
        report["delta_saturated"] = leak.saturated
    if with_mc:
        rs, cs = estimate_secrecy_and_capacity(
            cfg.srf_b, cfg.srf_e, scale_b, scale_e, cfg.fbl, cfg.mc)
        report["mc_mean"] = rs.mean
        report["mc_stderr"] = rs.std_error
        report["mc_capacity"] = cs.mean
        report["mc_samples"] = rs.samples_used
    return report


def _mean_power(cfg: ScenarioConfig) -> float:
    from .srf_channel import moment
    return moment(cfg.srf_e, 2.0)


def _cmd_point(args) -> int:
    cfg = _load(args.config, args.set)
    print(json.dumps(_point_report(cfg, args.mc)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secrecy",
        description="Short-packet satellite secrecy-rate experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a named experiment sweep")
    run.add_argument("config", help="scenario TOML path, or 'default'")
    run.add_argument("experiment",
                     help="fig2 | fig3 | fig4 | fig5 | a sweep name from the config")
    run.add_argument("--out", default="out", help="output directory")
    run.add_argument("--seed", type=int, default=None,
                     help="override mc.master_seed")
    run.add_argument("--samples", type=int, default=None,
                     help="override mc.samples")
    run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                     help="override any config key (repeatable)")
    run.add_argument("--no-figure", action="store_true",
                     help="skip PNG rendering")

    val = sub.add_parser("validate", help="validate a scenario file")
    val.add_argument("config")

    point = sub.add_parser("point", help="single-scenario report on stdout")
    point.add_argument("config")
    point.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    point.add_argument("--mc", action="store_true",
                       help="include Monte Carlo estimates")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_point(args)
    except ConfigError as exc:
        for path, msg in exc.diagnostics:
            print(f"{path}: {msg}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"cannot read configuration: {exc}", file=sys.stderr)
        return 2
    except SeriesConvergenceError as exc:
        print(f"numerical non-convergence in {exc.operation}: {exc}",
              file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
