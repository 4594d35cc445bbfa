"""Grid specification and cached wavenumber/dealiasing machinery.

Fields live on the horizontal unit torus (Fourier modes k = 2*pi*(n1, n2))
times the channel z in (0, 1) (vertical basis {1, sqrt(2) cos(m pi z)}).
The collocation grid is uniform in x, y and the midpoint grid
z_j = (j + 1/2)/nz in z, matched to the even-extension cosine transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

_LOG_OVERFLOW = np.log(1e300)


@dataclass(frozen=True)
class GridSpec:
    """Resolution and dealiasing rule for the spectral discretization.

    nh: horizontal modes per axis (FFT indices -nh/2+1 .. nh/2-1 usable).
    nz: vertical cosine modes m = 0 .. nz-1.
    dealias_fraction: sharp-cutoff fraction, default 2/3.
    """

    nh: int
    nz: int
    dealias_fraction: Fraction = Fraction(2, 3)

    def __post_init__(self):
        if self.nh % 2 != 0 or self.nh < 4:
            raise ValueError(f"nh must be even and >= 4, got {self.nh}")
        if self.nz < 2:
            raise ValueError(f"nz must be >= 2, got {self.nz}")
        frac = float(self.dealias_fraction)
        if not 0.0 < frac <= 1.0:
            raise ValueError(f"dealias_fraction must lie in (0, 1], got {frac}")
        if frac * self.nh < 2:
            raise ValueError("dealias_fraction * nh must be >= 2")

    @property
    def hcut(self) -> int:
        """Largest retained |n1|, |n2| after dealiasing."""
        return _cuts(self)[0]

    @property
    def zcut(self) -> int:
        """Largest retained vertical mode m after dealiasing."""
        return _cuts(self)[1]

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.nh, self.nh, self.nz)


@lru_cache(maxsize=None)
def _cuts(grid: GridSpec) -> tuple[int, int]:
    frac = float(grid.dealias_fraction)
    ch = int(np.floor(frac * grid.nh / 2 + 1e-12))
    # quadratic products stay alias-free on the same grid only for 3*ch < nh
    if 3 * ch >= grid.nh:
        ch -= 1
    cz = int(np.floor(frac * grid.nz + 1e-12))
    if 3 * cz >= 2 * grid.nz:
        cz -= 1
    cz = min(cz, grid.nz - 1)
    return max(ch, 1), max(cz, 1)


@lru_cache(maxsize=None)
def mode_numbers(grid: GridSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Integer mode indices (n1, n2, m) in storage order."""
    n = np.rint(np.fft.fftfreq(grid.nh) * grid.nh).astype(int)
    m = np.arange(grid.nz)
    return n, n, m


@lru_cache(maxsize=None)
def kx(grid: GridSpec) -> np.ndarray:
    n1, _, _ = mode_numbers(grid)
    return (2.0 * np.pi * n1)[:, None, None]


@lru_cache(maxsize=None)
def ky(grid: GridSpec) -> np.ndarray:
    _, n2, _ = mode_numbers(grid)
    return (2.0 * np.pi * n2)[None, :, None]


@lru_cache(maxsize=None)
def kabs(grid: GridSpec) -> np.ndarray:
    return np.sqrt(kx(grid) ** 2 + ky(grid) ** 2)


@lru_cache(maxsize=None)
def ksq(grid: GridSpec) -> np.ndarray:
    return kx(grid) ** 2 + ky(grid) ** 2


@lru_cache(maxsize=None)
def mpi(grid: GridSpec) -> np.ndarray:
    """Vertical wavenumbers m*pi, shape (1, 1, nz)."""
    _, _, m = mode_numbers(grid)
    return (np.pi * m)[None, None, :]


@lru_cache(maxsize=None)
def dealias_mask(grid: GridSpec) -> np.ndarray:
    n1, n2, m = mode_numbers(grid)
    ch, cz = _cuts(grid)
    keep_h = (np.abs(n1)[:, None] <= ch) & (np.abs(n2)[None, :] <= ch)
    keep_z = m <= cz
    return keep_h[:, :, None] & keep_z[None, None, :]


def a_exp_multiplier(grid: GridSpec, r: float, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal multiplier |k|^r e^{tau |k|}, shape (nh, nh, 1).

    Zero-wavenumber convention: 0 for r > 0, 1 for r = 0 (A^0 = identity).
    Returns the multiplier together with an overflow mask; callers decide
    whether offending modes carry data.
    """
    k = kabs(grid)
    with np.errstate(divide="ignore", invalid="ignore"):
        logmult = np.where(k > 0.0, r * np.log(np.where(k > 0.0, k, 1.0)) + tau * k, 0.0)
    overflow = logmult > _LOG_OVERFLOW
    mult = np.where(overflow, 0.0, np.exp(np.where(overflow, 0.0, logmult)))
    if r > 0:
        mult = np.where(k == 0.0, 0.0, mult)
    return mult, overflow
