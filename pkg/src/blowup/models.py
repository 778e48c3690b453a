"""PDE models as weighted term lists: inviscid Burgers and focusing NLS.

Each model carries two terms. Term 1 is the Galerkin right-hand side on a
given mode range. Term 2 is the memory (time-proportional) closure term that
drains energy from the resolved range into the next octave of modes; it has
the same functional form at every resolution level, differing only in the
ranges involved. The full system is evolved with coefficients a0 = (1, 0);
the reduced description uses a1 = (1, 1) nominally, with the effective a1
recovered on the fly from moment-rate matching (see renorm).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .spectral import (
    ConfigurationError,
    ModeRange,
    SpectralField,
    convolve,
    from_physical,
    next_fft_size,
    physical,
    resize,
    restrict,
    wavenumbers,
)


@lru_cache(maxsize=None)
def octave_mask(n_resolved: int, n_array: int, real_field: bool = False) -> np.ndarray:
    """Mask of the unresolved octave beyond the resolved range of n_resolved modes.

    For complex fields this is [-n_resolved, n_resolved-1] minus
    [-n_resolved/2, n_resolved/2-1]. Real fields drop the unpaired Nyquist
    mode -n_resolved/2 from the resolved set, so it joins the octave and the
    set stays closed under negation; the memory term then maps
    conjugate-symmetric data to conjugate-symmetric data.
    """
    outer = ModeRange.symmetric(2 * n_resolved).mask(n_array)
    if real_field:
        inner = ModeRange(-(n_resolved // 2 - 1), n_resolved // 2 - 1).mask(n_array)
    else:
        inner = ModeRange.symmetric(n_resolved).mask(n_array)
    m = outer & ~inner
    m.flags.writeable = False
    return m


@dataclass(frozen=True)
class Partition:
    """Resolved/unresolved mode split at one resolution of the full system.

    The full system carries the symmetric range of n_full modes (F union G);
    the reduced description keeps the half-size range F. The augmentation set
    I is the octave beyond the full range, present only inside the
    sensitivity matrices, never in time stepping.
    """

    n_full: int

    def __post_init__(self):
        if self.n_full % 4 or self.n_full < 8:
            raise ValueError(f"partition needs n_full divisible by 4, got {self.n_full}")

    @property
    def n_half(self) -> int:
        return self.n_full // 2

    @property
    def F(self) -> ModeRange:
        return ModeRange.symmetric(self.n_half)

    @property
    def FG(self) -> ModeRange:
        return ModeRange.symmetric(self.n_full)

    @property
    def G(self) -> tuple[ModeRange, ModeRange]:
        return (ModeRange(-self.n_full // 2, -self.n_half // 2 - 1),
                ModeRange(self.n_half // 2, self.n_full // 2 - 1))

    @property
    def I(self) -> tuple[ModeRange, ModeRange]:
        return (ModeRange(-self.n_full, -self.n_full // 2 - 1),
                ModeRange(self.n_full // 2, self.n_full - 1))

    def G_mask(self, n_array: int) -> np.ndarray:
        return octave_mask(self.n_half, n_array)

    def I_mask(self, n_array: int) -> np.ndarray:
        return octave_mask(self.n_full, n_array)


@dataclass(frozen=True)
class ModelSpec:
    """A PDE model given by its term evaluators and coefficient vectors."""

    name: str
    a0: tuple[float, float] = (1.0, 0.0)
    a1: tuple[float, float] = (1.0, 1.0)
    sigma: int = 0
    real_field: bool = True

    @property
    def m(self) -> int:
        return 2

    # -- term 1: Galerkin RHS ------------------------------------------------

    def galerkin_arr(self, c: np.ndarray, n_out: int | None = None) -> np.ndarray:
        n_out = n_out or c.size
        if self.name == "burgers":
            k = wavenumbers(n_out)
            return -0.5j * k * convolve(c, c, n_out)
        k = wavenumbers(n_out)
        disp = -1j * k * k * resize(c, n_out)
        return disp + 1j * _nls_power_arr(c, self.sigma, n_out)

    # -- term 2: memory term -------------------------------------------------

    def tmodel_arr(self, c: np.ndarray, t: float, n_out: int | None = None) -> np.ndarray:
        """Memory term for a field resolved on c's own range.

        The unresolved set is the octave beyond that range. Burgers uses the
        explicit nested-convolution form; NLS goes through the generic
        derivative construction (tmodel_term).
        """
        n_out = n_out or c.size
        if self.name == "burgers":
            return _burgers_tmodel_arr(c, t, n_out, self.real_field)
        return tmodel_term(self, c, t, n_out)

    def term_pair(self, c: np.ndarray, t: float, n_out: int) -> tuple[np.ndarray, np.ndarray]:
        """(Galerkin term, memory term) on n_out, sharing transforms.

        Numerically equivalent to (galerkin_arr, tmodel_arr) but evaluates the
        underlying products once on a common padded grid; used by the
        per-step sensitivity monitors.
        """
        n = c.size
        if self.name == "burgers":
            L = 2 * n
            U = physical(c, L)
            S = from_physical(U * U, 2 * n)
            R1 = -0.5j * wavenumbers(n_out) * restrict(S, n_out)
            inner = -0.5j * wavenumbers(2 * n) * S
            inner[~octave_mask(n, 2 * n, self.real_field)] = 0.0
            W = physical(inner, L)
            R2 = -1j * t * wavenumbers(n_out) * from_physical(U * W, n_out)
            return R1, R2
        s = self.sigma
        L = next_fft_size((2 * s + 3) * n // 2)
        U = physical(c, L)
        a2 = (U * np.conj(U)).real
        nl = np.fft.fft(a2 ** s * U) / L
        k_out = wavenumbers(n_out)
        R1 = -1j * k_out * k_out * resize(c, n_out) + 1j * restrict(nl, n_out)
        w = 1j * restrict(nl, 2 * n)
        w[~octave_mask(n, 2 * n, self.real_field)] = 0.0
        W = physical(w, L)
        d = 1j * ((s + 1) * a2 ** s * W + s * a2 ** (s - 1) * U * U * np.conj(W))
        R2 = t * from_physical(d, n_out)
        return R1, R2

    # -- generic-construction ingredients -------------------------------------

    def flux_to_octave(self, c: np.ndarray) -> np.ndarray:
        """Octave projection of the Galerkin RHS of c, on the doubled range.

        The dispersion part of NLS maps resolved support to resolved support,
        so only the nonlinearity survives the projection.
        """
        n = c.size
        if self.name == "burgers":
            L = 2 * n
            U = physical(c, L)
            g = -0.5j * wavenumbers(2 * n) * from_physical(U * U, 2 * n)
        else:
            g = 1j * _nls_power_arr(c, self.sigma, 2 * n)
        g[~octave_mask(n, 2 * n, self.real_field)] = 0.0
        return g

    def deriv_apply(self, c: np.ndarray, w: np.ndarray, n_out: int | None = None) -> np.ndarray:
        """Derivative of the nonlinearity at c, applied in direction w."""
        n_out = n_out or c.size
        if self.name == "burgers":
            L = next_fft_size(max(c.size, w.size, (c.size + w.size + n_out) // 2))
            U = physical(c, L)
            W = physical(w, L)
            return -1j * wavenumbers(n_out) * from_physical(U * W, n_out)
        s = self.sigma
        L = next_fft_size(max(c.size, w.size, (2 * s * c.size + w.size + n_out) // 2))
        U = physical(c, L)
        W = physical(w, L)
        a2 = (U * np.conj(U)).real
        d = 1j * ((s + 1) * a2 ** s * W + s * a2 ** (s - 1) * U * U * np.conj(W))
        return from_physical(d, n_out)

    # -- time-stepping split ---------------------------------------------------

    def linear_multiplier(self, n: int) -> np.ndarray:
        """Diagonal stiff part of the full-system RHS (dispersion for NLS)."""
        if self.name == "burgers":
            return np.zeros(n, dtype=np.complex128)
        k = wavenumbers(n)
        return self.a0[0] * (-1j) * k * k

    def nonlinear_full(self, c: np.ndarray, t: float) -> np.ndarray:
        """Full-system RHS minus the linear_multiplier part."""
        if self.name == "burgers":
            out = self.a0[0] * self.galerkin_arr(c)
        else:
            out = self.a0[0] * 1j * _nls_power_arr(c, self.sigma, c.size)
        if self.a0[1]:
            out = out + self.a0[1] * self.tmodel_arr(c, t)
        return out


def burgers_model() -> ModelSpec:
    return ModelSpec(name="burgers", real_field=True)


def nls_model(sigma: float) -> ModelSpec:
    if sigma != int(sigma) or int(sigma) < 1:
        raise ConfigurationError(
            f"sigma must be a positive integer for exact dealiasing, got {sigma}")
    return ModelSpec(name="nls", sigma=int(sigma), real_field=False)


# ---------------------------------------------------------------------------
# term implementations
# ---------------------------------------------------------------------------

def _nls_power_arr(c: np.ndarray, sigma: int, n_out: int) -> np.ndarray:
    """Exact truncated coefficients of |u|^(2*sigma) u for band-limited u."""
    L = next_fft_size(max(c.size, ((2 * sigma + 1) * c.size + n_out) // 2))
    U = physical(c, L)
    a2 = (U * np.conj(U)).real
    return from_physical(a2 ** sigma * U, n_out)


def _burgers_tmodel_arr(c: np.ndarray, t: float, n_out: int,
                        real_field: bool = True) -> np.ndarray:
    """Nested-convolution memory term for Burgers, both sums folded by symmetry.

    inner_q = -(iq/2) sum_{r+s=q, r,s resolved} c_r c_s restricted to the
    octave beyond the resolved range; the term is -ik t sum_{p+q=k} c_p inner_q.
    """
    n = c.size
    inner = -0.5j * wavenumbers(2 * n) * convolve(c, c, 2 * n)
    inner[~octave_mask(n, 2 * n, real_field)] = 0.0
    return -1j * t * wavenumbers(n_out) * convolve(c, inner, n_out)


def tmodel_term(model: ModelSpec, c: np.ndarray, t: float,
                n_out: int | None = None) -> np.ndarray:
    """Generic memory term: t * Pi_resolved[ N'(c)[ Pi_octave[N(c)] ] ]."""
    n_out = n_out or c.size
    w = model.flux_to_octave(c)
    return t * model.deriv_apply(c, w, n_out)


# ---------------------------------------------------------------------------
# field-level operations
# ---------------------------------------------------------------------------

def _masked(u: SpectralField, rng: ModeRange) -> np.ndarray:
    return np.where(rng.mask(u.n), u.coeffs, 0.0)


def burgers_galerkin(u: SpectralField, rng: ModeRange) -> SpectralField:
    """Quadratic advection RHS with p, q and k all restricted to rng."""
    cu = _masked(u, rng)
    n_enc = next_fft_size(2 * max(-rng.lo, rng.hi + 1))
    w = convolve(cu, cu, n_enc)
    w[~rng.mask(n_enc)] = 0.0
    return SpectralField(-0.5j * wavenumbers(n_enc) * w, time=u.time)


def nls_galerkin(u: SpectralField, sigma: float, rng: ModeRange) -> SpectralField:
    """Dispersion plus focusing nonlinearity, exactly dealiased, on rng."""
    model = nls_model(sigma)
    cu = _masked(u, rng)
    n_enc = next_fft_size(2 * max(-rng.lo, rng.hi + 1))
    out = model.galerkin_arr(cu, n_enc)
    out[~rng.mask(n_enc)] = 0.0
    return SpectralField(out, time=u.time)


def _level_field(u: SpectralField, P: Partition, level: str) -> tuple[np.ndarray, int]:
    if level == "reduced":
        return restrict(u.coeffs, P.n_half), P.n_half
    if level == "full":
        if u.n != P.n_full:
            raise ValueError(f"full-level field has {u.n} modes, partition expects {P.n_full}")
        return np.array(u.coeffs, copy=True), P.n_full
    raise ValueError(f"level must be 'reduced' or 'full', got {level!r}")


def burgers_tmodel(u: SpectralField, t: float, P: Partition, level: str) -> SpectralField:
    """Cubic memory term at the requested level of the partition."""
    c, n_res = _level_field(u, P, level)
    return SpectralField(_burgers_tmodel_arr(c, t, n_res), time=u.time)


def nls_tmodel(u: SpectralField, t: float, sigma: float, P: Partition,
               level: str) -> SpectralField:
    """Memory term for NLS via the derivative construction."""
    model = nls_model(sigma)
    c, n_res = _level_field(u, P, level)
    return SpectralField(tmodel_term(model, c, t, n_res), time=u.time)


def full_rhs(u: SpectralField, model: ModelSpec, P: Partition, t: float) -> SpectralField:
    """Weighted full-system RHS sum(a0_i * term_i) on the full range."""
    out = np.zeros(P.n_full, dtype=np.complex128)
    if model.a0[0]:
        out += model.a0[0] * model.galerkin_arr(u.coeffs)
    if model.a0[1]:
        out += model.a0[1] * model.tmodel_arr(u.coeffs, t)
    return SpectralField(out, time=u.time)


def reduced_rhs(u: SpectralField, model: ModelSpec, P: Partition, t: float) -> SpectralField:
    """Weighted reduced-model RHS sum(a1_i * term_i) on the resolved range."""
    c = restrict(u.coeffs, P.n_half)
    out = np.zeros(P.n_half, dtype=np.complex128)
    if model.a1[0]:
        out += model.a1[0] * model.galerkin_arr(c)
    if model.a1[1]:
        out += model.a1[1] * model.tmodel_arr(c, t)
    return SpectralField(out, time=u.time)
