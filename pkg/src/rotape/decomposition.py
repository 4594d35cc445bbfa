"""Projection algebra: barotropic/baroclinic split, horizontal Leray, P+/P-.

P0 keeps the vertical mean (m = 0 modes), the baroclinic part is its
complement, and P+/P- = (1/2)(I +- i J) restricted to the baroclinic part
diagonalize the rotation operator R f = (baroclinic f)^perp with
eigenvalues -+ i.  P+/P- outputs are intrinsically complex: they drop the
conjugate-symmetry (reality) invariant, which is restored by P+ + P-.
"""

from __future__ import annotations

import numpy as np

from .grid import ksq, kx, ky
from .spectral import SpectralField


def p0(v: SpectralField) -> SpectralField:
    """Projection onto the barotropic (m = 0) modes; idempotent."""
    out = np.zeros_like(v.coeffs)
    if v.basis == "cos":
        out[..., 0] = v.coeffs[..., 0]
    # sine-basis fields have no m = 0 content: projection is zero
    return SpectralField(v.grid, out, v.basis)


def baroclinic(v: SpectralField) -> SpectralField:
    """V - P0 V."""
    out = v.coeffs.copy()
    if v.basis == "cos":
        out[..., 0] = 0.0
    return SpectralField(v.grid, out, v.basis)


def perp(v: SpectralField) -> SpectralField:
    """(a, b) -> (-b, a)."""
    if v.components != 2:
        raise ValueError("perp expects a 2-vector field")
    out = np.concatenate([-v.coeffs[1:2], v.coeffs[0:1]], axis=0)
    return SpectralField(v.grid, out, v.basis)


def leray_h(vbar: SpectralField) -> SpectralField:
    """Horizontal Leray projection of an m=0-only 2-vector: remove the gradient part.

    Per mode k != 0: Vhat - k (k . Vhat)/|k|^2; the k = 0 mode is unchanged.
    """
    if vbar.components != 2:
        raise ValueError("leray_h expects a 2-vector field")
    tail = np.abs(vbar.coeffs[..., 1:]).max() if vbar.grid.nz > 1 else 0.0
    scale = max(np.abs(vbar.coeffs).max(), 1e-300)
    if tail > 1e-13 * scale:
        raise ValueError("leray_h expects a barotropic (m=0 only) field")
    g = vbar.grid
    k2 = ksq(g)
    inv = np.where(k2 > 0.0, 1.0 / np.where(k2 > 0.0, k2, 1.0), 0.0)
    kdotv = kx(g) * vbar.coeffs[0:1] + ky(g) * vbar.coeffs[1:2]
    out = vbar.coeffs.copy()
    out[0:1] -= kx(g) * kdotv * inv
    out[1:2] -= ky(g) * kdotv * inv
    return SpectralField(g, out, vbar.basis)


def p_plus(v: SpectralField) -> SpectralField:
    """P+ V = (1/2)(Vt + i Vt^perp), Vt the baroclinic part."""
    vt = baroclinic(v)
    return SpectralField(v.grid, 0.5 * (vt.coeffs + 1j * perp(vt).coeffs), v.basis)


def p_minus(v: SpectralField) -> SpectralField:
    """P- V = (1/2)(Vt - i Vt^perp)."""
    vt = baroclinic(v)
    return SpectralField(v.grid, 0.5 * (vt.coeffs - 1j * perp(vt).coeffs), v.basis)


def rotation_r(v: SpectralField) -> SpectralField:
    """R V = (baroclinic V)^perp; satisfies R P+- = -+ i P+-."""
    return perp(baroclinic(v))


def pe_leray(v: SpectralField) -> SpectralField:
    """The PE pressure projection: baroclinic part + Leray of the barotropic part."""
    vb = p0(v)
    vb2 = leray_h(vb)
    return baroclinic(v) + vb2
