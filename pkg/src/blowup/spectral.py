"""Fourier fields on the 2*pi-periodic line and exact truncated convolutions.

Coefficient arrays follow the standard FFT ordering: an array of even length n
holds the modes k = 0, 1, ..., n/2 - 1, -n/2, ..., -1, i.e. the symmetric
truncation range [-n/2, n/2 - 1]. All nonlinear products are evaluated
alias-free by zero-padding to a grid large enough that no wrap-around reaches
the requested output range, so every convolution below is the exact truncated
sum, not a pseudospectral approximation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * np.pi


class ConfigurationError(ValueError):
    """Raised for grid sizes or parameters the spectral backend cannot honor."""


def is_fft_size(n: int) -> bool:
    """True if n = 2**a * 3**b with a, b >= 0."""
    if n < 1:
        return False
    while n % 2 == 0:
        n //= 2
    while n % 3 == 0:
        n //= 3
    return n == 1


@lru_cache(maxsize=None)
def next_fft_size(m: int) -> int:
    """Smallest integer of the form 2**a * 3**b that is >= m."""
    if m < 1:
        return 1
    best = None
    p3 = 1
    while p3 < 3 * m:
        p2 = 1
        while p2 * p3 < m:
            p2 *= 2
        cand = p2 * p3
        if best is None or cand < best:
            best = cand
        p3 *= 3
    return best


@lru_cache(maxsize=None)
def wavenumbers(n: int) -> np.ndarray:
    """Integer wavenumbers in FFT order for an array of length n (read-only)."""
    k = np.fft.fftfreq(n, d=1.0 / n).astype(np.int64)
    k.flags.writeable = False
    return k


@lru_cache(maxsize=None)
def _range_mask(lo: int, hi: int, n: int) -> np.ndarray:
    k = wavenumbers(n)
    m = (k >= lo) & (k <= hi)
    m.flags.writeable = False
    return m


@dataclass(frozen=True)
class ModeRange:
    """Inclusive contiguous range of integer wavenumbers [lo, hi]."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty mode range [{self.lo}, {self.hi}]")

    @classmethod
    def symmetric(cls, n: int) -> "ModeRange":
        """The range [-n/2, n/2 - 1] carried by a length-n coefficient array."""
        if n < 2 or n % 2:
            raise ValueError(f"symmetric range needs even n >= 2, got {n}")
        return cls(-(n // 2), n // 2 - 1)

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def contains(self, k: int) -> bool:
        return self.lo <= k <= self.hi

    def mask(self, n: int) -> np.ndarray:
        """Boolean membership mask over a length-n FFT-ordered array (read-only)."""
        return _range_mask(self.lo, self.hi, n)


@dataclass
class SpectralField:
    """Fourier coefficients of a periodic field together with its time stamp.

    coeffs is complex128 in FFT order over the symmetric range
    [-n/2, n/2 - 1]; the physical domain is [0, 2*pi]. Real-valued fields
    satisfy u[-k] = conj(u[k]) with the unpaired mode at k = -n/2 kept zero.
    """

    coeffs: np.ndarray
    time: float = 0.0
    domain_length: float = TWO_PI

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if self.coeffs.ndim != 1 or self.coeffs.size % 2:
            raise ValueError("coeffs must be a 1-D array of even length")

    @property
    def n(self) -> int:
        return self.coeffs.size

    @property
    def modes(self) -> ModeRange:
        return ModeRange.symmetric(self.n)

    def copy(self) -> "SpectralField":
        return replace(self, coeffs=self.coeffs.copy())


# ---------------------------------------------------------------------------
# array-level helpers
# ---------------------------------------------------------------------------

def embed(c: np.ndarray, n_new: int) -> np.ndarray:
    """Zero-pad a coefficient array to a larger symmetric range."""
    n = c.size
    if n_new < n:
        raise ValueError(f"embed target {n_new} smaller than source {n}")
    if n_new == n:
        return c.copy()
    out = np.zeros(n_new, dtype=np.complex128)
    half = n // 2
    out[:half] = c[:half]
    out[n_new - half:] = c[half:]
    return out


def restrict(c: np.ndarray, n_new: int) -> np.ndarray:
    """Drop all modes outside the symmetric range of size n_new."""
    n = c.size
    if n_new > n:
        raise ValueError(f"restrict target {n_new} larger than source {n}")
    if n_new == n:
        return c.copy()
    half = n_new // 2
    out = np.empty(n_new, dtype=np.complex128)
    out[:half] = c[:half]
    out[half:] = c[n - half:]
    return out


def physical(c: np.ndarray, grid_n: int) -> np.ndarray:
    """Samples of sum_k c_k exp(i k x_j) on the uniform grid of grid_n points."""
    if grid_n == c.size:
        return np.fft.ifft(c) * grid_n
    return np.fft.ifft(embed(c, grid_n)) * grid_n


def from_physical(samples: np.ndarray, n: int) -> np.ndarray:
    """Coefficients on [-n/2, n/2 - 1] of a band-limited sampled function."""
    return restrict(np.fft.fft(samples) / samples.size, n)


def resize(c: np.ndarray, n_new: int) -> np.ndarray:
    """Embed or restrict to the symmetric range of size n_new."""
    return embed(c, n_new) if n_new >= c.size else restrict(c, n_new)


def hermitian_part(c: np.ndarray) -> np.ndarray:
    """Project onto conjugate-symmetric (real physical field) coefficients."""
    n = c.size
    idx = (-np.arange(n)) % n
    return 0.5 * (c + np.conj(c[idx]))


def convolve(a: np.ndarray, b: np.ndarray, n_out: int) -> np.ndarray:
    """Exact linear convolution (a*b)_k = sum_{p+q=k} a_p b_q on [-n_out/2, n_out/2 - 1].

    The padded grid satisfies L >= (len(a) + len(b) + n_out) / 2, which keeps
    every product p + q that could alias onto the output range off the grid's
    wrap-around. Inputs are treated as supported on their own symmetric ranges;
    mask them beforehand to restrict the summation index sets.
    """
    L = next_fft_size(max(a.size, b.size, (a.size + b.size + n_out) // 2))
    fa = np.fft.ifft(embed(a, L))
    fb = fa if b is a else np.fft.ifft(embed(b, L))
    w = np.fft.fft(fa * fb) * L
    return restrict(w, n_out)


# ---------------------------------------------------------------------------
# field-level operations
# ---------------------------------------------------------------------------

def truncated_convolution(u: SpectralField, v: SpectralField, P: ModeRange,
                          Q: ModeRange, out: ModeRange) -> SpectralField:
    """w_k = sum over p + q = k, p in P, q in Q of u_p v_q for each k in out.

    Coefficients of `out` that no pair (p, q) can produce are exactly zero.
    The result is carried on the smallest symmetric range enclosing `out`.
    """
    cu = np.where(P.mask(u.n), u.coeffs, 0.0)
    cv = np.where(Q.mask(v.n), v.coeffs, 0.0)
    n_enc = next_fft_size(2 * max(-out.lo, out.hi + 1))
    w = convolve(cu, cv, n_enc)
    w[~out.mask(n_enc)] = 0.0
    return SpectralField(w, time=u.time)


def spectral_derivative(u: SpectralField) -> SpectralField:
    """d/dx in Fourier space: multiply each coefficient by i*k."""
    k = wavenumbers(u.n)
    return SpectralField(1j * k * u.coeffs, time=u.time)


def moments(u: SpectralField, F: ModeRange) -> tuple[float, float]:
    """(sum of |u_k|^2, sum of |u_k|^4) over the modes in F."""
    m = F.mask(u.n)
    a2 = np.abs(u.coeffs[m]) ** 2
    return float(np.sum(a2)), float(np.sum(a2 * a2))


def refine_pad(u: SpectralField, n_new: int) -> SpectralField:
    """Spectral interpolation to a finer grid: old modes copied, new modes zero."""
    if n_new <= u.n:
        raise ValueError(f"refine_pad target {n_new} must exceed current {u.n}")
    if not is_fft_size(n_new):
        raise ConfigurationError(f"grid size {n_new} is not of the form 2^a*3^b")
    return SpectralField(embed(u.coeffs, n_new), time=u.time)


def max_abs_physical(u: SpectralField, oversample: int = 4) -> float:
    """Maximum pointwise modulus on a grid of oversample * n points."""
    if oversample < 1:
        raise ValueError("oversample must be >= 1")
    grid_n = next_fft_size(oversample * u.n)
    return float(np.max(np.abs(physical(u.coeffs, grid_n))))
