"""Time advancement of the full system between refinement checks.

Classical RK4 for Burgers; integrating-factor RK4 for NLS, where the
dispersion diagonal is propagated by its exact exponential so the k^2
stiffness never restricts the step. With a zero linear part the two schemes
coincide, so one implementation serves both.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import ModelSpec, Partition
from .spectral import SpectralField, TWO_PI, hermitian_part, max_abs_physical


class OverflowSignal(RuntimeError):
    """Field left the representable range; the driver treats this as blow-up."""


@dataclass
class IntegratorConfig:
    scheme: str = "rk4"
    cfl_safety: float = 0.25
    dt_max: float = 0.05
    check_every: int = 1

    def __post_init__(self):
        if not 0.0 < self.cfl_safety <= 1.0:
            raise ValueError(f"cfl_safety must be in (0, 1], got {self.cfl_safety}")
        if self.dt_max <= 0.0:
            raise ValueError(f"dt_max must be positive, got {self.dt_max}")
        if self.check_every < 1:
            raise ValueError(f"check_every must be >= 1, got {self.check_every}")


def default_scheme(model: ModelSpec) -> str:
    return "rk4" if model.name == "burgers" else "ifrk4"


def choose_dt(u: SpectralField, model: ModelSpec, P: Partition,
              config: IntegratorConfig) -> float:
    """CFL-style step size; deterministic function of the state."""
    umax = max_abs_physical(u, oversample=1)
    if umax == 0.0:
        return config.dt_max
    if model.name == "burgers":
        dt = config.cfl_safety * (TWO_PI / u.n) / umax
    else:
        dt = config.cfl_safety / (umax ** (2 * model.sigma) + 1.0)
    return min(dt, config.dt_max)


def step(u: SpectralField, model: ModelSpec, P: Partition, dt: float,
         scheme: str = "rk4") -> SpectralField:
    """Advance u by dt. Raises OverflowSignal on non-finite output."""
    if dt < 0.0:
        raise ValueError("dt must be >= 0")
    if dt == 0.0:
        return u.copy()
    if scheme == "rk4":
        c = _rk4(u.coeffs, u.time, dt, model)
    elif scheme == "ifrk4":
        c = _ifrk4(u.coeffs, u.time, dt, model)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    if model.real_field:
        c = hermitian_part(c)
        c[u.n // 2] = 0.0
    if not np.all(np.isfinite(c)):
        raise OverflowSignal(f"non-finite coefficients at t={u.time + dt}")
    return SpectralField(c, time=u.time + dt)


def _rk4(c, t, dt, model):
    lam = model.linear_multiplier(c.size)
    stiff = bool(np.any(lam))

    def f(y, s):
        out = model.nonlinear_full(y, s)
        return lam * y + out if stiff else out

    k1 = f(c, t)
    k2 = f(c + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = f(c + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = f(c + dt * k3, t + dt)
    return c + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _ifrk4(c, t, dt, model):
    # Cox-Matthews integrating-factor RK4: v = exp(-L t) u removes the
    # diagonal linear part exactly; stages are plain RK4 on v.
    lam = model.linear_multiplier(c.size)
    e1 = np.exp(0.5 * dt * lam)
    e2 = e1 * e1
    n = model.nonlinear_full

    k1 = n(c, t)
    k2 = n(e1 * (c + 0.5 * dt * k1), t + 0.5 * dt)
    k3 = n(e1 * c + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = n(e2 * c + dt * e1 * k3, t + dt)
    return e2 * c + (dt / 6.0) * (e2 * k1 + 2.0 * e1 * (k2 + k3) + k4)
