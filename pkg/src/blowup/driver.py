"""The adaptive refinement loop, tolerance calibration and event bookkeeping.

A run integrates the full system, evaluating the sensitivity matrices at a
fixed step cadence. Whenever |det B| reaches the tolerance the state is
recorded as a refinement event (with the on-the-fly coefficient solve) and
zero-padded to the next rung of the resolution ladder; at the final rung the
trigger instead terminates the run with resolution_exhausted.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass, field, replace

import numpy as np

from .integrators import IntegratorConfig, OverflowSignal, choose_dt, step
from .models import ModelSpec, Partition
from .renorm import snapshot, solve_coefficients
from .spectral import (
    SpectralField,
    TWO_PI,
    ConfigurationError,
    is_fft_size,
    max_abs_physical,
    moments,
    refine_pad,
    spectral_derivative,
)

DETB_FLOOR = 1e-18   # below this, det B counts as roundoff zero
DETA_FLOOR = 1e-16   # onset threshold for the full-system monitor


@dataclass
class RunConfig:
    model: ModelSpec
    initial_condition: str          # "sin" | "gaussian_nls"
    n_start: int
    n_final: int
    tol: float
    amplitude: float = 1.0
    refine_factor: int = 2
    ladder: tuple[int, ...] | None = None
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    t_end: float = 2.0
    track_blowup: bool = False

    def __post_init__(self):
        if self.tol <= 0.0:
            raise ConfigurationError(f"tol must be positive, got {self.tol}")
        if self.t_end <= 0.0:
            raise ConfigurationError(f"t_end must be positive, got {self.t_end}")
        for n in self.resolutions():
            if not is_fft_size(n) or n % 4:
                raise ConfigurationError(
                    f"resolution {n} must be 2^a*3^b and divisible by 4")

    def resolutions(self) -> tuple[int, ...]:
        """The full resolution ladder from n_start to n_final."""
        if self.ladder is not None:
            lad = tuple(int(n) for n in self.ladder)
            if lad[0] != self.n_start or lad[-1] != self.n_final:
                raise ConfigurationError(
                    f"ladder must run from n_start {self.n_start} to n_final {self.n_final}")
            if any(b <= a for a, b in zip(lad, lad[1:])):
                raise ConfigurationError("ladder must be strictly increasing")
            return lad
        if self.refine_factor < 2:
            raise ConfigurationError(
                f"refine_factor must be >= 2, got {self.refine_factor}")
        lad = [self.n_start]
        while lad[-1] < self.n_final:
            lad.append(lad[-1] * self.refine_factor)
        if lad[-1] != self.n_final:
            raise ConfigurationError(
                f"n_final {self.n_final} is not n_start * refine_factor^s")
        return tuple(lad)


@dataclass(frozen=True)
class RefinementEvent:
    n: int
    T_n: float
    N_n: int
    l_n: float
    xi_n: float
    a1: tuple[float, float]
    detB: float
    detA: float
    E1: float
    E2: float


@dataclass
class RunOutcome:
    events: list[RefinementEvent]
    final_time: float
    termination: str                # "resolution_exhausted" | "t_end_reached" | "overflow"
    wall_clock: float
    T_B_first: float | None
    T_A_first: float | None
    field: SpectralField
    xi_series: list[tuple[float, float]] | None = None


def initial_field(config: RunConfig) -> SpectralField:
    n = config.n_start
    if config.initial_condition == "sin":
        c = np.zeros(n, dtype=np.complex128)
        c[1] = -0.5j * config.amplitude
        c[-1] = 0.5j * config.amplitude
        return SpectralField(c, time=0.0)
    if config.initial_condition == "gaussian_nls":
        x = TWO_PI * np.arange(n) / n
        vals = 1j * config.amplitude * np.exp(-((x - np.pi) ** 2))
        return SpectralField(np.fft.fft(vals) / n, time=0.0)
    raise ConfigurationError(
        f"unknown initial_condition {config.initial_condition!r}")


def blowup_quantity(u: SpectralField, model: ModelSpec) -> float:
    """Max |du/dx| for Burgers, max |u| for NLS, on a 4x oversampled grid."""
    if model.name == "burgers":
        return max_abs_physical(spectral_derivative(u))
    return max_abs_physical(u)


def run_adaptive(config: RunConfig) -> RunOutcome:
    """Run the refinement algorithm over the configured resolution ladder."""
    return _run(config, config.resolutions())


def run_fixed(config: RunConfig, t_end: float | None = None,
              terminate_on_trigger: bool = True) -> RunOutcome:
    """Reference run pinned at n_final for the whole simulation."""
    return _run(config, (config.n_final,), t_end=t_end,
                terminate_on_trigger=terminate_on_trigger)


def _run(config: RunConfig, ladder: tuple[int, ...], t_end: float | None = None,
         terminate_on_trigger: bool = True) -> RunOutcome:
    t_stop = config.t_end if t_end is None else t_end
    model = config.model
    icfg = config.integrator

    u = initial_field(replace(config, n_start=ladder[0]))
    rung = 0
    P = Partition(ladder[rung])

    events: list[RefinementEvent] = []
    xi_series: list[tuple[float, float]] = [] if config.track_blowup else None
    T_B_first = T_A_first = None
    termination = "t_end_reached"
    prev_triggered = False
    step_count = 0

    t0 = _time.perf_counter()

    def monitor() -> bool:
        """Evaluate the matrices; return True when the run must stop."""
        nonlocal T_B_first, T_A_first, u, P, rung, termination, prev_triggered
        snap = snapshot(u, model, P)
        if T_B_first is None and abs(snap.detB) > DETB_FLOOR:
            T_B_first = u.time
        if T_A_first is None and abs(snap.detA) > DETA_FLOOR:
            T_A_first = u.time
        if xi_series is not None:
            xi_series.append((u.time, blowup_quantity(u, model)))
        triggered = abs(snap.detB) >= config.tol
        if triggered and not (prev_triggered and not terminate_on_trigger):
            sol = solve_coefficients(snap.B, snap.e)
            E1, E2 = moments(u, P.F)
            events.append(RefinementEvent(
                n=len(events) + 1, T_n=u.time, N_n=P.n_full,
                l_n=2.0 * TWO_PI / P.n_full,
                xi_n=blowup_quantity(u, model),
                a1=(float(sol.a[0]), float(sol.a[1])),
                detB=snap.detB, detA=snap.detA, E1=E1, E2=E2))
            if rung + 1 < len(ladder):
                rung += 1
                u = refine_pad(u, ladder[rung])
                P = Partition(ladder[rung])
            elif terminate_on_trigger:
                termination = "resolution_exhausted"
                return True
        prev_triggered = triggered
        return False

    stop = monitor()
    while not stop and u.time < t_stop - 1e-13:
        dt = min(choose_dt(u, model, P, icfg), t_stop - u.time)
        if dt <= 0.0:
            break
        try:
            u = step(u, model, P, dt, icfg.scheme)
        except OverflowSignal:
            termination = "overflow"
            break
        step_count += 1
        if step_count % icfg.check_every == 0:
            stop = monitor()

    return RunOutcome(events=events, final_time=u.time, termination=termination,
                      wall_clock=_time.perf_counter() - t0,
                      T_B_first=T_B_first, T_A_first=T_A_first,
                      field=u, xi_series=xi_series)


# ---------------------------------------------------------------------------
# tolerance calibration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CalibrationRow:
    tol: float
    digits: int | None
    E_adaptive: tuple[float, float] | None
    E_fixed: tuple[float, float] | None


@dataclass
class CalibrationResult:
    selected: float | None
    rows: list[CalibrationRow]
    target_digits: int


def matching_digits(e_a: tuple[float, float], e_f: tuple[float, float]) -> int:
    rel = max(abs(a - b) / abs(b) for a, b in zip(e_a, e_f))
    if rel == 0.0:
        return 17
    return math.floor(-math.log10(rel))


def calibrate_tol(config: RunConfig, target_digits: int = 5,
                  tol_schedule: tuple[float, ...] = (1e-6, 1e-10, 1e-16)) -> CalibrationResult:
    """Walk a decreasing tolerance schedule until twin runs agree.

    For each tolerance, the adaptive run and the fixed full-resolution run
    are both taken to their first trigger at n_final and the recorded moments
    compared digit-wise.
    """
    if not tol_schedule:
        raise ConfigurationError("tol_schedule must be nonempty")
    if any(b >= a for a, b in zip(tol_schedule, tol_schedule[1:])):
        raise ConfigurationError("tol_schedule must be strictly decreasing")

    rows: list[CalibrationRow] = []
    selected = None
    for tol in tol_schedule:
        cfg = replace(config, tol=tol)
        s1 = run_adaptive(cfg)
        s2 = run_fixed(cfg)
        if (s1.termination != "resolution_exhausted"
                or s2.termination != "resolution_exhausted"):
            rows.append(CalibrationRow(tol, None, None, None))
            continue
        e_a = (s1.events[-1].E1, s1.events[-1].E2)
        e_f = (s2.events[-1].E1, s2.events[-1].E2)
        digits = matching_digits(e_a, e_f)
        rows.append(CalibrationRow(tol, digits, e_a, e_f))
        if digits >= target_digits:
            selected = tol
            break
    return CalibrationResult(selected=selected, rows=rows,
                             target_digits=target_digits)
