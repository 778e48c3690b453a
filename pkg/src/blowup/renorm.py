"""Sensitivity matrices of resolved-moment rates and the coefficient solve.

The monitored moments over the resolved set F are E1 = sum |u_k|^2 and
E2 = sum |u_k|^4. Matrix B holds the derivatives of their rates with respect
to the reduced-model coefficients (terms evaluated from the resolved modes of
the full state only); matrix A holds the derivatives with respect to the
full-system coefficients, with the augmentation octave I supplying the
full-level memory term. det B going nonzero flags the onset of energy
transfer out of F and is the refinement trigger; det A flags underresolution
of the full system itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import ModelSpec, Partition
from .spectral import SpectralField, restrict


@dataclass(frozen=True)
class CoefficientSolve:
    a: np.ndarray
    status: str  # "ok" | "ill_conditioned" | "pre_transfer"


@dataclass(frozen=True)
class RenormSnapshot:
    time: float
    A: np.ndarray
    B: np.ndarray
    detA: float
    detB: float
    e: np.ndarray
    M: np.ndarray | None = None
    a1: np.ndarray | None = None
    solve_status: str | None = None


def _det2(m: np.ndarray) -> float:
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def _rate_matrix(R1: np.ndarray, R2: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Rows: moment rates (E1, E2); columns: terms. All arrays share a carrier.

    d|u_k|^2/dt contributes 2 Re(R conj(u)); d|u_k|^4/dt contributes
    2 |u_k|^2 times that.
    """
    out = np.empty((2, 2))
    w = np.abs(c) ** 2
    for j, R in enumerate((R1, R2)):
        g = 2.0 * np.real(R * np.conj(c))
        out[0, j] = float(np.sum(g))
        out[1, j] = float(np.sum(2.0 * w * g))
    return out


def compute_B(u: SpectralField, t: float, model: ModelSpec, P: Partition) -> np.ndarray:
    """Reduced-level sensitivities, from the resolved modes of the full state."""
    c = restrict(u.coeffs, P.n_half)
    R1, R2 = model.term_pair(c, t, P.n_half)
    return _rate_matrix(R1, R2, c)


def compute_A(u: SpectralField, t: float, model: ModelSpec, P: Partition) -> np.ndarray:
    """Full-level sensitivities; moments stay restricted to F."""
    c = u.coeffs
    R1, R2 = model.term_pair(c, t, P.n_half)
    return _rate_matrix(R1, R2, restrict(c, P.n_half))


def solve_coefficients(B: np.ndarray, e: np.ndarray,
                       cond_max: float = 1e12) -> CoefficientSolve:
    """Reduced-model coefficients whose moment rates reproduce e.

    Solves the matching system B a = e (row i: contribution of each term to
    the rate of E_i). Singular B means no transfer has started yet and the
    Galerkin-only convention a = (1, 0) is returned; badly conditioned B
    falls back to the minimum-norm least-squares solution.
    """
    e = np.asarray(e, dtype=float)
    if _det2(B) == 0.0:
        return CoefficientSolve(np.array([1.0, 0.0]), "pre_transfer")
    if np.linalg.cond(B) <= cond_max:
        return CoefficientSolve(np.linalg.solve(B, e), "ok")
    a, *_ = np.linalg.lstsq(B, e, rcond=None)
    return CoefficientSolve(a, "ill_conditioned")


def compute_M(A: np.ndarray, B: np.ndarray,
              cond_max: float = 1e12) -> np.ndarray | None:
    """M with A = M B, or None when B is numerically singular."""
    if _det2(B) == 0.0 or np.linalg.cond(B) > cond_max:
        return None
    return np.linalg.solve(B.T, A.T).T


def snapshot(u: SpectralField, model: ModelSpec, P: Partition,
             solve: bool = False, with_M: bool = False) -> RenormSnapshot:
    """Matrices, determinants and rate vector at the field's current time."""
    t = u.time
    A = compute_A(u, t, model, P)
    B = compute_B(u, t, model, P)
    e = A @ np.asarray(model.a0, dtype=float)
    a1 = status = None
    if solve:
        sol = solve_coefficients(B, e)
        a1, status = sol.a, sol.status
    M = compute_M(A, B) if with_M else None
    return RenormSnapshot(time=t, A=A, B=B, detA=_det2(A), detB=_det2(B),
                          e=e, M=M, a1=a1, solve_status=status)
