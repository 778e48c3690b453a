"""File formats: the event log CSV, report JSON, and plot-ready data files.

CSV and .dat files carry numbers printed with 17 significant digits so a
double survives the round trip bit-exactly; JSON uses Python's shortest
round-trip float representation, which is equally lossless.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .driver import CalibrationResult, RefinementEvent, RunOutcome
from .exponents import ExponentReport, ScalingFit, TcEstimate
from .spectral import SpectralField, wavenumbers

EVENTS_HEADER = "n,T_n,N_n,l_n,xi_n,alpha1,alpha2,detB,detA,E1,E2"


class MalformedEventLog(ValueError):
    """Event CSV that cannot be parsed; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def fmt(x: float) -> str:
    return f"{x:.17g}"


def write_events_csv(path: str, events: list[RefinementEvent]) -> None:
    with open(path, "w") as fh:
        fh.write(EVENTS_HEADER + "\n")
        for ev in events:
            row = [str(ev.n), fmt(ev.T_n), str(ev.N_n), fmt(ev.l_n), fmt(ev.xi_n),
                   fmt(ev.a1[0]), fmt(ev.a1[1]), fmt(ev.detB), fmt(ev.detA),
                   fmt(ev.E1), fmt(ev.E2)]
            fh.write(",".join(row) + "\n")


def read_events_csv(path: str) -> list[RefinementEvent]:
    events = []
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != EVENTS_HEADER:
        raise MalformedEventLog(1, f"expected header {EVENTS_HEADER!r}")
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 11:
            raise MalformedEventLog(i, f"expected 11 columns, got {len(parts)}")
        try:
            events.append(RefinementEvent(
                n=int(parts[0]), T_n=float(parts[1]), N_n=int(parts[2]),
                l_n=float(parts[3]), xi_n=float(parts[4]),
                a1=(float(parts[5]), float(parts[6])),
                detB=float(parts[7]), detA=float(parts[8]),
                E1=float(parts[9]), E2=float(parts[10])))
        except ValueError as exc:
            raise MalformedEventLog(i, str(exc)) from exc
    return events


def write_field_snapshot(path: str, field: SpectralField) -> None:
    """One `k Re Im` line per mode, in ascending wavenumber order."""
    k = wavenumbers(field.n)
    order = np.argsort(k)
    with open(path, "w") as fh:
        fh.write(f"# t = {fmt(field.time)}\n")
        for i in order:
            c = field.coeffs[i]
            fh.write(f"{k[i]} {fmt(c.real)} {fmt(c.imag)}\n")


def read_field_snapshot(path: str) -> SpectralField:
    ks, vals = [], []
    t = 0.0
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                t = float(line.split("=")[1])
                continue
            k_s, re_s, im_s = line.split()
            ks.append(int(k_s))
            vals.append(float(re_s) + 1j * float(im_s))
    n = len(ks)
    coeffs = np.zeros(n, dtype=np.complex128)
    for k, v in zip(ks, vals):
        coeffs[k % n] = v
    return SpectralField(coeffs, time=t)


def outcome_dict(out: RunOutcome) -> dict:
    return {
        "final_time": out.final_time,
        "termination": out.termination,
        "wall_clock": out.wall_clock,
        "T_B_first": out.T_B_first,
        "T_A_first": out.T_A_first,
    }


def fit_dict(fit: ScalingFit) -> dict:
    return {"slope": fit.slope, "intercept": fit.intercept, "r": fit.r,
            "n_points": fit.n_points, "stderr": fit.stderr,
            "degenerate": fit.degenerate}


def report_dict(report: ExponentReport, tc: TcEstimate) -> dict:
    return {
        "Tc_hat": report.Tc_hat,
        "Tc_search": {"r": tc.r, "boundary_warning": tc.boundary_warning},
        "gamma_direct": report.gamma_direct,
        "beta1": report.beta1,
        "beta2": report.beta2,
        "delta": report.delta,
        "gamma_scaling": report.gamma_scaling,
        "fixed_point_stable": report.fixed_point_stable,
        "n_excluded": report.n_excluded,
        "fits": {name: fit_dict(f) for name, f in report.fits.items()},
    }


def calibration_dict(result: CalibrationResult) -> dict:
    return {
        "selected_tol": result.selected,
        "target_digits": result.target_digits,
        "table": [
            {"tol": row.tol, "digits": row.digits,
             "E_adaptive": row.E_adaptive, "E_fixed": row.E_fixed}
            for row in result.rows
        ],
    }


def write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def write_plot_data(out_dir: str, events: list[RefinementEvent], Tc: float) -> list[str]:
    """Two-column raw-value .dat files mirroring the run's scaling plots."""
    written = []

    def dump(name, pairs):
        path = os.path.join(out_dir, name)
        with open(path, "w") as fh:
            for x, y in pairs:
                fh.write(f"{fmt(x)} {fmt(y)}\n")
        written.append(path)

    dump("maxq_vs_invdist.dat",
         [(1.0 / (Tc - ev.T_n), ev.xi_n) for ev in events if Tc > ev.T_n])
    dump("alpha_vs_scale.dat", [(ev.l_n, ev.a1[1]) for ev in events])
    dump("alpha_vs_time.dat",
         [(Tc - ev.T_n, ev.a1[1]) for ev in events if Tc > ev.T_n])
    return written
