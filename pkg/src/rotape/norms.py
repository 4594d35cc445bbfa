"""Analytic-Sobolev norm family and empirical radius-of-analyticity fits.

The (r, s, tau) norm is the literal displayed sum

    ||V||_{r,s,tau} = sum_{m'<=s} sqrt( ||A^r e^{tau A} dz^m' V||^2 + ||dz^m' V||^2 ),

evaluated coefficient-wise (Parseval).  The four-parameter variant adds the
vertical weight e^{2 eta |k3|}, |k3| = m pi, on the even-extended field:

    ||V||^2_{r,s,tau,eta} = sum (1 + (|k|^{2r} + (m pi)^{2s}) e^{2 tau |k|} e^{2 eta m pi}) |a|^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, kabs, mpi
from .spectral import SpectralField, SpectralRangeError

_LOG_OVERFLOW = np.log(1e300)


@dataclass(frozen=True)
class NormSpec:
    """Selects a norm: horizontal order r, vertical order s, radii tau and eta."""

    r: float
    s: int = 0
    tau: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        if self.r < 0 or self.s < 0 or self.tau < 0 or self.eta < 0:
            raise ValueError("norm parameters must be nonnegative")
        if self.s > 2:
            raise ValueError("s <= 2 is the highest vertical order used here")


def _weight_a_exp(grid: GridSpec, r: float, tau: float) -> np.ndarray:
    """|k|^{2r} e^{2 tau |k|} with the A^0 = identity convention, overflow-guarded."""
    k = kabs(grid)
    with np.errstate(divide="ignore"):
        logw = np.where(k > 0.0, 2.0 * r * np.log(np.where(k > 0.0, k, 1.0)) + 2.0 * tau * k, 0.0)
    if (logw > 2.0 * _LOG_OVERFLOW).any():
        raise SpectralRangeError(f"norm weight overflows at r={r}, tau={tau}")
    w = np.exp(logw)
    if r > 0:
        w = np.where(k == 0.0, 0.0, w)
    return w


def seminorm_a_sq(v: SpectralField, r: float, tau: float, s_order: int = 0) -> float:
    """||A^r e^{tau A} dz^{s_order} V||^2 via coefficient sums."""
    w = _weight_a_exp(v.grid, r, tau)
    vert = mpi(v.grid) ** (2 * s_order) if s_order > 0 else 1.0
    return float(np.sum((np.abs(v.coeffs) ** 2) * w * vert))


def dz_l2_sq(v: SpectralField, s_order: int = 0) -> float:
    """||dz^{s_order} V||^2."""
    vert = mpi(v.grid) ** (2 * s_order) if s_order > 0 else 1.0
    return float(np.sum((np.abs(v.coeffs) ** 2) * vert))


def norm_rst(v: SpectralField, spec: NormSpec) -> float:
    """The (r, s, tau) analytic-Sobolev norm (eta must be 0)."""
    if spec.eta != 0.0:
        raise ValueError("norm_rst is the eta=0 norm; use norm_rst_eta")
    total = 0.0
    for m in range(spec.s + 1):
        total += np.sqrt(seminorm_a_sq(v, spec.r, spec.tau, m) + dz_l2_sq(v, m))
    return float(total)


def norm_rst_eta(v: SpectralField, spec: NormSpec) -> float:
    """The four-parameter norm with vertical analyticity weight e^{eta A_z}."""
    g = v.grid
    k = kabs(g)
    m = mpi(g)
    with np.errstate(divide="ignore"):
        logh = np.where(k > 0.0, 2.0 * spec.r * np.log(np.where(k > 0.0, k, 1.0)), 0.0)
    horiz = np.exp(logh)
    if spec.r > 0:
        horiz = np.where(k == 0.0, 0.0, horiz)
    vert = m ** (2 * spec.s) if spec.s > 0 else np.ones_like(m)
    expo = 2.0 * spec.tau * k + 2.0 * spec.eta * m
    if (expo > 2.0 * _LOG_OVERFLOW).any():
        raise SpectralRangeError(f"norm weight overflows at tau={spec.tau}, eta={spec.eta}")
    weight = 1.0 + (horiz + vert) * np.exp(expo)
    return float(np.sqrt(np.sum((np.abs(v.coeffs) ** 2) * weight)))


class InsufficientDecayData(ValueError):
    """Fewer than 4 spectral shells above the fit floor."""


def _shell_stats(v: SpectralField, axis: str, method: str) -> tuple[np.ndarray, np.ndarray]:
    """Per-shell (wavenumber, amplitude); shells indexed by floor|n| (horizontal)
    or the vertical line m.  The zero shell carries no decay information and is
    dropped."""
    g = v.grid
    a2 = (np.abs(v.coeffs) ** 2).sum(axis=0)  # (nh, nh, nz)
    if axis == "horizontal":
        k = kabs(g)[..., 0]
        shell = np.floor(k / (2.0 * np.pi)).astype(int)
        nshell = shell.max() + 1
        ks, amps = [], []
        for j in range(1, nshell):
            sel = shell == j
            if not sel.any():
                continue
            ks.append(k[sel].mean())
            if method == "shell_max":
                amps.append(np.sqrt(a2[sel].max()))
            else:
                amps.append(np.sqrt(a2[sel].mean()))
        return np.asarray(ks), np.asarray(amps)
    if axis == "vertical":
        m_line = np.arange(1, g.nz)
        ks = np.pi * m_line
        if method == "shell_max":
            amps = np.sqrt(a2[:, :, 1:].max(axis=(0, 1)))
        else:
            amps = np.sqrt(a2[:, :, 1:].mean(axis=(0, 1)))
        return ks, amps
    raise ValueError(f"axis must be 'horizontal' or 'vertical', got {axis!r}")


def fit_radius(
    v: SpectralField,
    axis: str = "horizontal",
    floor: float = 1e-14,
    method: str = "shell_l2",
) -> float:
    """Least-squares decay rate of ln(shell amplitude) vs shell wavenumber.

    Returns -slope clipped at 0: the empirical radius-of-analyticity proxy.
    Raises InsufficientDecayData when fewer than 4 shells exceed `floor`.
    """
    if method not in ("shell_l2", "shell_max"):
        raise ValueError(f"unknown fit method {method!r}")
    ks, amps = _shell_stats(v, axis, method)
    # shell amplitudes must exceed the amplitude floor AND the max over a2==0
    keep = amps > floor
    if keep.sum() < 4:
        raise InsufficientDecayData(
            f"insufficient decay data: {int(keep.sum())} usable {axis} shells above floor {floor:g}"
        )
    x = ks[keep]
    y = np.log(amps[keep])
    slope = np.polyfit(x, y, 1)[0]
    return float(max(-slope, 0.0))
