"""
Periodic grid, discrete Fourier transforms and spectral differentiation.

Fields on the grid are represented in phase space by M complex coefficients

    v(x) ~ sum_{l=-M/2}^{M/2-1} c_l exp(i mu_l (x - a)),   mu_l = 2 pi l / (b - a)

Coefficients are stored in the FFT library's natural order
``[0, 1, ..., M/2-1, -M/2, ..., -1]``; :class:`ModeTable` maps a logical mode
``l`` to its storage slot and back.  The unpaired Nyquist mode ``l = -M/2`` is
kept with ``mu = -pi M / (b - a)`` unless ``zero_nyquist`` is requested, in
which case it is dropped from odd-order derivatives only.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft

from .errors import ParameterError, ShapeError

__all__ = [
    "GridSpec",
    "ModeTable",
    "dealias",
    "forward_dft",
    "hermitian_defect",
    "inverse_dft",
    "spectral_dx",
    "spectral_dxx",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid ``x_j = a + j h`` on ``[a, b)`` with ``M`` points."""

    a: float
    b: float
    M: int

    def __post_init__(self):
        if not float(self.b) > float(self.a):
            raise ParameterError(f"need b > a, got a={self.a!r}, b={self.b!r}")
        if int(self.M) != self.M or self.M < 4 or self.M % 2:
            raise ParameterError(f"M must be an even integer >= 4, got {self.M!r}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "M", int(self.M))

    @classmethod
    def from_spacing(cls, a, b, h):
        """Build a grid from a mesh size; ``(b - a) / h`` must be an integer."""
        ratio = (float(b) - float(a)) / float(h)
        M = int(round(ratio))
        if abs(ratio - M) > 1e-9 * max(1.0, abs(ratio)):
            raise ParameterError(f"(b - a) / h = {ratio!r} is not an integer")
        return cls(a, b, M)

    @property
    def length(self):
        return self.b - self.a

    @property
    def h(self):
        return (self.b - self.a) / self.M

    @cached_property
    def x(self):
        """The M distinct grid points (the periodic image ``x_M = b`` excluded)."""
        x = self.a + np.arange(self.M) * self.h
        x.setflags(write=False)
        return x

    @property
    def x_closed(self):
        """All M + 1 points ``x_0 ... x_M`` including the periodic endpoint."""
        return self.a + np.arange(self.M + 1) * self.h

    def modes(self, zero_nyquist=False):
        return ModeTable(self, zero_nyquist=zero_nyquist)


class ModeTable:
    """
    Wave numbers and phase frequencies for a grid, in storage order.

    Attributes
    ----------
    l : ndarray of int
        Logical mode index of each storage slot.
    mu : ndarray
        ``2 pi l / (b - a)``.
    mu_odd : ndarray
        Wave numbers used in odd-order derivatives; equal to ``mu`` unless the
        Nyquist mode is zeroed.
    lam : ndarray
        ``sqrt(mu**2 + 1)``.
    """

    def __init__(self, grid, zero_nyquist=False):
        M = grid.M
        self.grid = grid
        self.M = M
        self.zero_nyquist = bool(zero_nyquist)
        self.l = np.fft.fftfreq(M, d=1.0 / M).astype(int)
        self.mu = 2.0 * np.pi * self.l / grid.length
        self.lam = np.sqrt(self.mu**2 + 1.0)
        self.nyquist_slot = M // 2
        self.mu_odd = self.mu.copy()
        if self.zero_nyquist:
            self.mu_odd[self.nyquist_slot] = 0.0
        for arr in (self.l, self.mu, self.lam, self.mu_odd):
            arr.setflags(write=False)

    def index(self, l):
        """Storage slot of logical mode ``l`` (``-M/2 <= l < M/2``)."""
        if not -self.M // 2 <= l < self.M // 2:
            raise IndexError(f"mode {l} outside [-{self.M // 2}, {self.M // 2})")
        return l % self.M

    def to_mode_order(self, coeffs):
        """Reorder storage-order coefficients to ``l = -M/2, ..., M/2-1``."""
        return np.fft.fftshift(coeffs, axes=-1)

    def from_mode_order(self, coeffs):
        return np.fft.ifftshift(coeffs, axes=-1)


def _check_length(values, M):
    values = np.asarray(values)
    if values.ndim == 0 or values.shape[-1] != M:
        raise ShapeError(f"expected trailing dimension {M}, got shape {values.shape}")
    return values


def forward_dft(values, grid):
    """
    Fourier coefficients ``c_l = (1/M) sum_j v_j exp(-i mu_l (x_j - a))``.

    Accepts a single field of length M or a stack of fields with trailing
    dimension M.  Output is complex, in storage order.
    """
    values = _check_length(values, grid.M)
    return scipy.fft.fft(values, axis=-1, norm="forward")


def inverse_dft(coeffs, grid):
    """Physical values ``v_j = sum_l c_l exp(2 pi i j l / M)`` (complex)."""
    coeffs = _check_length(coeffs, grid.M)
    return scipy.fft.ifft(coeffs, axis=-1, norm="forward")


def spectral_dx(coeffs, modes):
    """Coefficients of the first x-derivative: ``i mu_l c_l``."""
    coeffs = _check_length(coeffs, modes.M)
    return 1j * modes.mu_odd * coeffs


def spectral_dxx(coeffs, modes):
    """Coefficients of the second x-derivative: ``-mu_l**2 c_l``."""
    coeffs = _check_length(coeffs, modes.M)
    return -(modes.mu**2) * coeffs


def dealias(coeffs, modes):
    """Zero every mode with ``|l| > M/3`` (2/3 rule); returns a copy."""
    coeffs = np.array(_check_length(coeffs, modes.M), dtype=complex)
    coeffs[..., np.abs(modes.l) > modes.M // 3] = 0.0
    return coeffs


def hermitian_defect(coeffs, include_nyquist=True):
    """
    Largest violation of ``c_{-l} = conj(c_l)``.

    The DC mode and (optionally) the self-paired Nyquist mode must be real.
    A field whose physical values are real has defect zero to round-off.
    """
    coeffs = np.asarray(coeffs)
    M = coeffs.shape[-1]
    mirrored = np.conj(np.roll(coeffs[..., ::-1], 1, axis=-1))
    diff = np.abs(coeffs - mirrored)
    if not include_nyquist:
        diff[..., M // 2] = 0.0
    return float(diff.max()) if diff.size else 0.0
