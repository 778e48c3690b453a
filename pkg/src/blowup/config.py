"""Experiment configuration files (INI sections, strictly validated).

Every key is checked against the schema; unknown sections or keys and
out-of-range values are rejected with a diagnostic naming the offender.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass

from .driver import RunConfig
from .integrators import IntegratorConfig
from .models import burgers_model, nls_model
from .spectral import ConfigurationError

_SCHEMA = {
    "model": {"name", "sigma", "amplitude"},
    "resolution": {"n_start", "n_final", "refine_factor", "ladder"},
    "criterion": {"tol"},
    "integrator": {"scheme", "cfl_safety", "dt_max", "check_every"},
    "run": {"t_end", "output_dir", "seed"},
}

_IC_FOR_MODEL = {"burgers": "sin", "nls": "gaussian_nls"}


@dataclass
class ExperimentConfig:
    run: RunConfig
    output_dir: str | None
    seed: int


def _get(cp, section, key, conv, default=None, required=False):
    if not cp.has_option(section, key):
        if required:
            raise ConfigurationError(f"[{section}] {key}: required key missing")
        return default
    raw = cp.get(section, key)
    try:
        return conv(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"[{section}] {key}: {exc}") from exc


def load_config(path: str) -> ExperimentConfig:
    if not os.path.isfile(path):
        raise ConfigurationError(f"config file not found: {path}")
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise ConfigurationError(f"cannot parse {path}: {exc}") from exc

    for section in cp.sections():
        if section not in _SCHEMA:
            raise ConfigurationError(f"unknown section [{section}]")
        for key in cp.options(section):
            if key not in _SCHEMA[section]:
                raise ConfigurationError(f"[{section}] {key}: unknown key")

    name = _get(cp, "model", "name", str, required=True)
    if name not in _IC_FOR_MODEL:
        raise ConfigurationError(f"[model] name: must be burgers or nls, got {name!r}")
    amplitude = _get(cp, "model", "amplitude", float, default=1.0)
    if name == "nls":
        sigma = _get(cp, "model", "sigma", float, default=3.0)
        try:
            model = nls_model(sigma)
        except ConfigurationError as exc:
            raise ConfigurationError(f"[model] sigma: {exc}") from exc
        default_scheme = "ifrk4"
    else:
        if cp.has_option("model", "sigma"):
            raise ConfigurationError("[model] sigma: only meaningful for nls")
        model = burgers_model()
        default_scheme = "rk4"

    n_start = _get(cp, "resolution", "n_start", int, required=True)
    n_final = _get(cp, "resolution", "n_final", int, required=True)
    refine_factor = _get(cp, "resolution", "refine_factor", int, default=2)
    ladder = None
    if cp.has_option("resolution", "ladder"):
        if cp.has_option("resolution", "refine_factor"):
            raise ConfigurationError(
                "[resolution] ladder: give either ladder or refine_factor, not both")
        ladder = _get(cp, "resolution", "ladder",
                      lambda s: tuple(int(v) for v in s.split(",")))

    tol = _get(cp, "criterion", "tol", float, required=True)
    if tol <= 0.0:
        raise ConfigurationError(f"[criterion] tol: must be positive, got {tol}")

    scheme = _get(cp, "integrator", "scheme", str, default=default_scheme)
    if scheme not in ("rk4", "ifrk4"):
        raise ConfigurationError(
            f"[integrator] scheme: must be rk4 or ifrk4, got {scheme!r}")
    try:
        integrator = IntegratorConfig(
            scheme=scheme,
            cfl_safety=_get(cp, "integrator", "cfl_safety", float, default=0.25),
            dt_max=_get(cp, "integrator", "dt_max", float, default=0.05),
            check_every=_get(cp, "integrator", "check_every", int, default=1))
    except ValueError as exc:
        raise ConfigurationError(f"[integrator] {exc}") from exc

    t_end = _get(cp, "run", "t_end", float, required=True)
    if t_end <= 0.0:
        raise ConfigurationError(f"[run] t_end: must be positive, got {t_end}")
    output_dir = _get(cp, "run", "output_dir", str, default=None)
    seed = _get(cp, "run", "seed", int, default=0)

    try:
        run = RunConfig(model=model, initial_condition=_IC_FOR_MODEL[name],
                        amplitude=amplitude, n_start=n_start, n_final=n_final,
                        refine_factor=refine_factor, ladder=ladder, tol=tol,
                        integrator=integrator, t_end=t_end)
    except ConfigurationError as exc:
        raise ConfigurationError(f"[resolution] {exc}") from exc
    return ExperimentConfig(run=run, output_dir=output_dir, seed=seed)
