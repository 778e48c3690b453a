"""Command-line tool: run | calibrate | exponents | compare.

Output directory resolution order: --out flag, then [run] output_dir from the
config file, then the BLOWUP_OUTPUT_DIR environment variable, then ./out.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .config import ExperimentConfig, load_config
from .driver import calibrate_tol, matching_digits, run_adaptive, run_fixed
from .exponents import build_report
from .models import Partition
from .renorm import CoefficientSolve  # noqa: F401  (re-export for API users)
from .serialize import (
    MalformedEventLog,
    calibration_dict,
    outcome_dict,
    read_events_csv,
    report_dict,
    write_events_csv,
    write_field_snapshot,
    write_json,
    write_plot_data,
)
from .spectral import ConfigurationError, SpectralField, embed, max_abs_physical, moments

ENV_OUTPUT_DIR = "BLOWUP_OUTPUT_DIR"


def _resolve_out(flag: str | None, cfg: ExperimentConfig | None) -> str:
    out = flag or (cfg.output_dir if cfg else None) \
        or os.environ.get(ENV_OUTPUT_DIR) or "out"
    os.makedirs(out, exist_ok=True)
    return out


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    out_dir = _resolve_out(args.out, cfg)
    outcome = run_adaptive(cfg.run)
    write_events_csv(os.path.join(out_dir, "events.csv"), outcome.events)
    write_json(os.path.join(out_dir, "outcome.json"), outcome_dict(outcome))
    write_field_snapshot(os.path.join(out_dir, "final_field.dat"), outcome.field)
    print(f"run: {outcome.termination} at t={outcome.final_time:.6g} "
          f"({len(outcome.events)} events, {outcome.wall_clock:.2f}s) -> {out_dir}")
    return 0


def cmd_calibrate(args) -> int:
    cfg = load_config(args.config)
    out_dir = _resolve_out(args.out, cfg)
    schedule = tuple(float(s) for s in args.schedule.split(","))
    result = calibrate_tol(cfg.run, target_digits=args.digits,
                           tol_schedule=schedule)
    write_json(os.path.join(out_dir, "calibration.json"), calibration_dict(result))
    for row in result.rows:
        print(f"  tol={row.tol:g}: digits={row.digits}")
    if result.selected is None:
        print(f"calibrate: no tolerance reached {args.digits} digits", file=sys.stderr)
        return 1
    print(f"calibrate: selected tol={result.selected:g} -> {out_dir}")
    return 0


def cmd_exponents(args) -> int:
    out_dir = _resolve_out(args.out, None)
    events = read_events_csv(args.events_csv)
    window = None
    if args.tc_window:
        lo, hi = (float(v) for v in args.tc_window.split(","))
        window = (lo, hi)
    report, tc = build_report(events, window=window)
    write_json(os.path.join(out_dir, "exponents.json"), report_dict(report, tc))
    write_plot_data(out_dir, events, report.Tc_hat)
    print(f"exponents: Tc={report.Tc_hat:.8g} (r={tc.r:.9f}) "
          f"gamma_direct={report.gamma_direct:.6g}", end="")
    if report.gamma_scaling is not None:
        print(f" gamma_scaling={report.gamma_scaling:.6g} "
              f"(beta1={report.beta1:.4g}, beta2={report.beta2:.4g}, "
              f"delta={report.delta:.4g})", end="")
    print(f" -> {out_dir}")
    return 0


def cmd_compare(args) -> int:
    cfg = load_config(args.config)
    out_dir = _resolve_out(args.out, cfg)
    adaptive = run_adaptive(cfg.run)
    fixed = run_fixed(cfg.run, t_end=adaptive.final_time, terminate_on_trigger=False)

    n = cfg.run.n_final
    ca = embed(adaptive.field.coeffs, n)
    cf = embed(fixed.field.coeffs, n)
    diff = max_abs_physical(SpectralField(ca - cf))
    F = Partition(n).F
    e_a = moments(SpectralField(ca), F)
    e_f = moments(SpectralField(cf), F)
    digits = matching_digits(e_a, e_f)
    speedup = fixed.wall_clock / adaptive.wall_clock

    payload = {
        "final_time": adaptive.final_time,
        "adaptive": {"wall_clock": adaptive.wall_clock,
                     "termination": adaptive.termination,
                     "events": len(adaptive.events),
                     "E1": e_a[0], "E2": e_a[1]},
        "fixed": {"wall_clock": fixed.wall_clock,
                  "termination": fixed.termination,
                  "E1": e_f[0], "E2": e_f[1]},
        "speedup": speedup,
        "field_maxnorm_diff": diff,
        "moment_digits": digits,
    }
    write_json(os.path.join(out_dir, "compare.json"), payload)
    print(f"compare: speedup={speedup:.1f}x field_diff={diff:.3e} "
          f"digits={digits} -> {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="blowup",
        description="Adaptive spectral refinement toward PDE singularities "
                    "and blow-up exponent estimation.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute one refinement experiment")
    run.add_argument("--config", required=True)
    run.add_argument("--out", default=None)
    run.set_defaults(func=cmd_run)

    cal = sub.add_parser("calibrate", help="select the trigger tolerance")
    cal.add_argument("--config", required=True)
    cal.add_argument("--out", default=None)
    cal.add_argument("--digits", type=int, default=5)
    cal.add_argument("--schedule", default="1e-6,1e-10,1e-16")
    cal.set_defaults(func=cmd_calibrate)

    exp = sub.add_parser("exponents", help="fit blow-up exponents from an event log")
    exp.add_argument("events_csv")
    exp.add_argument("--out", default=None)
    exp.add_argument("--tc-window", default=None)
    exp.set_defaults(func=cmd_exponents)

    cmp_ = sub.add_parser("compare", help="adaptive versus fixed-resolution twin runs")
    cmp_.add_argument("--config", required=True)
    cmp_.add_argument("--out", default=None)
    cmp_.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except MalformedEventLog as exc:
        print(f"event log error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
