"""Blow-up rate estimation from the refinement-event log.

Three routes to the rate gamma of xi ~ |Tc - T|^(-gamma):

* direct: fit log xi against log 1/(Tc - T) over the refinement instants;
* flow: reverse the event sequence into a coarse-graining flow and classify
  the zero-scale fixed point through the beta function beta1 * alpha;
* scaling: fit beta2 (xi against scale), beta1 (coefficient against scale)
  and delta (coefficient against time distance), then combine them as
  gamma = delta * beta2 / beta1.

Tc itself is found by maximizing the straight-line quality (r^2) of the
direct plot over candidate singularity times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .driver import RefinementEvent


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    r: float
    n_points: int
    stderr: float = 0.0
    degenerate: bool = False


@dataclass(frozen=True)
class TcEstimate:
    value: float
    r: float
    boundary_warning: bool


@dataclass(frozen=True)
class ExponentReport:
    """Blow-up rate estimates; the scaling-law fields are None when fewer
    than three events carry a positive memory-term coefficient."""
    Tc_hat: float
    gamma_direct: float
    beta1: float | None
    beta2: float | None
    delta: float | None
    gamma_scaling: float | None
    fixed_point_stable: bool | None
    fits: dict[str, ScalingFit]
    n_excluded: int = 0


def fit_loglog(xs, ys) -> ScalingFit:
    """Least-squares line through (log x, log y) with Pearson correlation."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 3:
        raise ValueError("need two equal-length 1-D sequences of >= 3 points")
    if np.any(xs <= 0.0) or np.any(ys <= 0.0):
        raise ValueError("log-log fit requires strictly positive values")
    lx, ly = np.log(xs), np.log(ys)
    sxx = float(np.sum((lx - lx.mean()) ** 2))
    if sxx == 0.0:
        raise ValueError("x values are all equal; slope undefined")
    if np.all(ly == ly[0]):
        return ScalingFit(slope=0.0, intercept=float(ly[0]), r=0.0,
                          n_points=xs.size, stderr=0.0, degenerate=True)
    slope, intercept = np.polyfit(lx, ly, 1)
    r = float(np.corrcoef(lx, ly)[0, 1])
    resid = ly - (slope * lx + intercept)
    stderr = math.sqrt(float(np.sum(resid ** 2)) / (xs.size - 2) / sxx)
    return ScalingFit(slope=float(slope), intercept=float(intercept), r=r,
                      n_points=xs.size, stderr=stderr)


def _rsq(Tc: float, T: np.ndarray, xi: np.ndarray) -> float:
    lx = np.log(Tc - T)
    ly = np.log(xi)
    r = np.corrcoef(lx, ly)[0, 1]
    return float(r * r) if np.isfinite(r) else -1.0


def estimate_Tc(events: list[RefinementEvent],
                window: tuple[float, float] | None = None,
                grid_points: int = 400,
                refine_tol: float = 1e-8) -> TcEstimate:
    """Singularity time maximizing the straightness of the direct plot.

    Scans a log-spaced grid of offsets beyond the last event time, then
    sharpens the best bracket by golden-section search down to refine_tol
    in absolute Tc.
    """
    if len(events) < 4:
        raise ValueError("need at least 4 events to locate Tc")
    T = np.array([ev.T_n for ev in events])
    xi = np.array([ev.xi_n for ev in events])
    if np.any(xi <= 0.0):
        raise ValueError("blow-up quantity must be positive")
    t_last = float(T.max())
    if window is None:
        window = (t_last + 1e-12, t_last + 0.5)
    lo, hi = window
    if lo <= t_last:
        raise ValueError(f"window low end {lo} must exceed last event time {t_last}")

    offsets = np.exp(np.linspace(math.log(lo - t_last), math.log(hi - t_last),
                                 grid_points))
    grid = t_last + offsets
    scores = np.array([_rsq(tc, T, xi) for tc in grid])
    best = int(np.argmax(scores))
    boundary = best in (0, grid_points - 1)

    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, grid_points - 1)]
    tc = _golden_max(lambda x: _rsq(x, T, xi), a, b, refine_tol)
    return TcEstimate(value=tc, r=math.sqrt(max(_rsq(tc, T, xi), 0.0)),
                      boundary_warning=boundary)


def _golden_max(f, a: float, b: float, tol: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def direct_gamma(events: list[RefinementEvent], Tc: float) -> ScalingFit:
    """Slope of log xi against log 1/(Tc - T): the blow-up rate itself."""
    T = np.array([ev.T_n for ev in events])
    xi = np.array([ev.xi_n for ev in events])
    if np.any(T >= Tc):
        raise ValueError("Tc must exceed every event time")
    return fit_loglog(1.0 / (Tc - T), xi)


def renorm_flow(events: list[RefinementEvent]) -> list[RefinementEvent]:
    """Reverse into coarse-graining order (scale grows away from Tc)."""
    if len(events) < 3:
        raise ValueError("need at least 3 events")
    return [replace(ev, n=i + 1) for i, ev in enumerate(reversed(events))]


def scaling_gamma(events: list[RefinementEvent], Tc: float) -> ExponentReport:
    """Combine the three scaling laws into the blow-up rate estimate.

    Events whose solved memory-term coefficient is not positive are excluded
    from the coefficient fits (they sit at numerical zero before transfer
    starts); the count is reported.
    """
    usable = [ev for ev in events if ev.xi_n > 0.0]
    fit_direct = direct_gamma(usable, Tc)

    alpha_events = [ev for ev in usable if ev.a1[1] > 0.0]
    n_excluded = len(usable) - len(alpha_events)
    if len(alpha_events) < 3:
        raise ValueError(
            f"only {len(alpha_events)} events with positive coefficient; need >= 3")

    l = np.array([ev.l_n for ev in alpha_events])
    alpha = np.array([ev.a1[1] for ev in alpha_events])
    dist = Tc - np.array([ev.T_n for ev in alpha_events])

    fit_b2 = fit_loglog([ev.l_n for ev in usable], [ev.xi_n for ev in usable])
    fit_b1 = fit_loglog(l, alpha)
    fit_delta = fit_loglog(dist, alpha)

    beta2 = -fit_b2.slope
    beta1 = fit_b1.slope
    delta = fit_delta.slope
    gamma = delta * beta2 / beta1

    return ExponentReport(
        Tc_hat=Tc, gamma_direct=fit_direct.slope,
        beta1=beta1, beta2=beta2, delta=delta, gamma_scaling=gamma,
        fixed_point_stable=(beta1 <= 0.0),
        fits={"direct": fit_direct, "beta1": fit_b1,
              "beta2": fit_b2, "delta": fit_delta},
        n_excluded=n_excluded)


def beta_function(events: list[RefinementEvent]) -> tuple[float, str]:
    """beta1 of beta(alpha) = beta1 * alpha and the fixed-point classification.

    The zero-coefficient (zero-scale) fixed point is unstable for beta1 > 0,
    stable for beta1 < 0, and marginal when beta1 is within three standard
    errors of zero.
    """
    alpha_events = [ev for ev in events if ev.a1[1] > 0.0]
    if len(alpha_events) < 3:
        raise ValueError("need >= 3 events with positive coefficient")
    fit = fit_loglog([ev.l_n for ev in alpha_events],
                     [ev.a1[1] for ev in alpha_events])
    beta1 = fit.slope
    if abs(beta1) < 3.0 * fit.stderr or fit.degenerate:
        return beta1, "marginal"
    return beta1, "unstable" if beta1 > 0.0 else "stable"


def select_asymptotic_tail(events: list[RefinementEvent],
                           window: tuple[float, float] | None = None,
                           min_points: int = 4,
                           straightness: float = 0.999999,
                           ) -> tuple[list[RefinementEvent], TcEstimate]:
    """Largest trailing window of events whose direct plot is straight.

    The power law holds asymptotically: early refinement events can sit in a
    transient where the blow-up quantity has not settled onto it. Walking the
    window back from the full log, the first (largest) tail whose optimal
    correlation reaches the straightness target is kept; if none reaches it,
    the tail with the best correlation wins. For logs that are straight
    throughout (exact power laws, pre-shock Burgers) this keeps every event.
    """
    if len(events) < min_points:
        raise ValueError(f"need at least {min_points} events")
    best = None
    for m in range(len(events), min_points - 1, -1):
        tail = events[-m:]
        tc = estimate_Tc(tail, window=window)
        if tc.r >= straightness:
            return tail, tc
        if best is None or tc.r > best[1].r:
            best = (tail, tc)
    return best


def build_report(events: list[RefinementEvent],
                 window: tuple[float, float] | None = None,
                 min_points: int = 4,
                 straightness: float = 0.999999,
                 ) -> tuple[ExponentReport, TcEstimate]:
    """Select the asymptotic window, estimate Tc, and assemble the report.

    Runs whose events lack enough positive memory-term coefficients (the
    coefficient tracks a signed flux and can oscillate, as for NLS) get a
    direct-only report with the scaling fields left unset.
    """
    tail, tc = select_asymptotic_tail(events, window=window,
                                      min_points=min_points,
                                      straightness=straightness)
    try:
        return scaling_gamma(tail, tc.value), tc
    except ValueError:
        usable = [ev for ev in tail if ev.xi_n > 0.0]
        fit = direct_gamma(usable, tc.value)
        report = ExponentReport(
            Tc_hat=tc.value, gamma_direct=fit.slope,
            beta1=None, beta2=None, delta=None, gamma_scaling=None,
            fixed_point_stable=None, fits={"direct": fit},
            n_excluded=len(usable) - sum(ev.a1[1] > 0.0 for ev in usable))
        return report, tc
