"""The fast-rotation limit system: 2D Euler for the barotropic mode coupled
one-way to a linear transport + stretching + vertical-diffusion equation for
the baroclinic mode.

The Euler half is evolved in vorticity-streamfunction form so horizontal
incompressibility is structural; velocity is reconstructed on demand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, dealias_mask, kx, ky, ksq, mpi
from .spectral import COS, values_from_coeffs, coeffs_from_values
from .pe_solver import _if_rk4, _plain_rk4, _guard


@dataclass
class LimitState:
    """Scalar barotropic vorticity (nh, nh) and baroclinic 2-vector (2, nh, nh, nz)."""

    t: float
    omega_bar: np.ndarray
    vtilde: np.ndarray

    def copy(self) -> "LimitState":
        return LimitState(self.t, self.omega_bar.copy(), self.vtilde.copy())


def vorticity_from_velocity(vbar: np.ndarray, grid: GridSpec) -> np.ndarray:
    """omega = dx V2 - dy V1 on the compact (2, nh, nh) layout."""
    return 1j * kx(grid)[..., 0] * vbar[1] - 1j * ky(grid)[..., 0] * vbar[0]


def velocity_from_vorticity(omega: np.ndarray, grid: GridSpec) -> np.ndarray:
    """V = grad^perp psi with Delta psi = omega (zero-mean inversion)."""
    k2 = ksq(grid)[..., 0]
    inv = np.where(k2 > 0.0, -1.0 / np.where(k2 > 0.0, k2, 1.0), 0.0)
    psi = omega * inv
    return np.stack([-1j * ky(grid)[..., 0] * psi, 1j * kx(grid)[..., 0] * psi])


def euler2d_rhs(omega: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Vorticity tendency -Vbar . grad omega, dealiased; mean mode pinned to 0."""
    if abs(omega[0, 0]) > 1e-12 * max(np.abs(omega).max(), 1e-300):
        raise ValueError("euler2d_rhs expects zero-mean vorticity")
    vbar = velocity_from_vorticity(omega, grid)
    nh = grid.nh
    vb = np.fft.ifft2(vbar, axes=(-2, -1)) * nh**2
    wx = np.fft.ifft2(1j * kx(grid)[..., 0] * omega, axes=(-2, -1)) * nh**2
    wy = np.fft.ifft2(1j * ky(grid)[..., 0] * omega, axes=(-2, -1)) * nh**2
    adv = vb[0] * wx + vb[1] * wy
    out = -np.fft.fft2(adv, axes=(-2, -1)) / nh**2
    out *= dealias_mask(grid)[:, :, 0]
    out[0, 0] = 0.0
    _guard("euler2d_advection", out)
    return out


def transport_rhs(
    vtilde: np.ndarray,
    omega: np.ndarray,
    grid: GridSpec,
    nu: float,
    include_viscous: bool = True,
) -> np.ndarray:
    """-Vbar . grad Vt - (1/2) Vt^perp (perp-div Vbar) + nu dzz Vt.

    perp-div Vbar = -dy V1 + dx V2 is exactly the vorticity omega.
    """
    nh = grid.nh
    vbar = velocity_from_vorticity(omega, grid)
    vb = np.fft.ifft2(vbar, axes=(-2, -1)) * nh**2
    wphys = np.fft.ifft2(omega, axes=(-2, -1)) * nh**2
    px = values_from_coeffs(1j * kx(grid) * vtilde, grid, COS)
    py = values_from_coeffs(1j * ky(grid) * vtilde, grid, COS)
    p = values_from_coeffs(vtilde, grid, COS)
    perp = np.concatenate([-p[1:2], p[0:1]], axis=0)
    n = -(vb[0][None, :, :, None] * px + vb[1][None, :, :, None] * py)
    n -= 0.5 * perp * wphys[None, :, :, None]
    out = coeffs_from_values(n, grid, COS)
    out *= dealias_mask(grid)[None, ...]
    out[..., 0] = 0.0
    _guard("limit_transport", out)
    if include_viscous:
        out = out - nu * mpi(grid) ** 2 * vtilde
    return out


def limit_to_vpm(vtilde: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """V+- = (1/2)(Vt +- i Vt^perp); V+ + V- recovers Vt."""
    perp = np.concatenate([-vtilde[1:2], vtilde[0:1]], axis=0)
    return 0.5 * (vtilde + 1j * perp), 0.5 * (vtilde - 1j * perp)


def step_limit(state: LimitState, grid: GridSpec, nu: float, dt: float, scheme: str = "rk4_if") -> LimitState:
    if scheme == "rk4_if":
        def nl(a, t):
            return (
                euler2d_rhs(a[0], grid),
                transport_rhs(a[1], a[0], grid, nu, include_viscous=False),
            )

        eh = np.exp(-nu * mpi(grid) ** 2 * 0.5 * dt)
        ef = np.exp(-nu * mpi(grid) ** 2 * dt)
        new = _if_rk4((state.omega_bar, state.vtilde), state.t, dt, nl, (1.0, eh), (1.0, ef))
    else:
        def rhs(a, t):
            return (
                euler2d_rhs(a[0], grid),
                transport_rhs(a[1], a[0], grid, nu, include_viscous=True),
            )

        new = _plain_rk4((state.omega_bar, state.vtilde), state.t, dt, rhs)
    return LimitState(state.t + dt, *new)


@dataclass
class LimitDiagnostics:
    """Per-step observables, including the norms the growth bounds govern:
    the barotropic (r+1, 0, 0) and baroclinic (r, s, 0) Sobolev norms."""

    t: float
    energy_bar: float
    enstrophy: float
    vtilde_l2: float
    vbar_sobolev: float
    vtilde_sobolev: float


def integrate_limit(
    state0: LimitState,
    grid: GridSpec,
    nu: float,
    dt: float,
    t_end: float,
    scheme: str = "rk4_if",
    observer=None,
    store_every: int = 0,
    r: float = 2.0,
    s: int = 1,
) -> tuple[LimitState, list[LimitDiagnostics], list[LimitState]]:
    """RK4 with exact vertical-diffusion factor; returns optional stored states."""
    state = state0.copy()
    n_steps = int(round(t_end / dt))
    stored = [state.copy()] if store_every else []
    diags = [_limit_diag(state, grid, r, s)]
    if observer:
        observer(diags[-1])
    for i in range(n_steps):
        state = step_limit(state, grid, nu, dt, scheme)
        diags.append(_limit_diag(state, grid, r, s))
        if observer:
            observer(diags[-1])
        if store_every and (i + 1) % store_every == 0:
            stored.append(state.copy())
    return state, diags, stored


def _limit_diag(state: LimitState, grid: GridSpec, r: float, s: int) -> LimitDiagnostics:
    from .norms import NormSpec, norm_rst
    from .pe_solver import barotropic_field
    from .spectral import COS, SpectralField

    vbar = velocity_from_vorticity(state.omega_bar, grid)
    return LimitDiagnostics(
        t=state.t,
        energy_bar=0.5 * float(np.sum(np.abs(vbar) ** 2)),
        enstrophy=0.5 * float(np.sum(np.abs(state.omega_bar) ** 2)),
        vtilde_l2=float(np.sqrt(np.sum(np.abs(state.vtilde) ** 2))),
        vbar_sobolev=norm_rst(barotropic_field(vbar, grid), NormSpec(r=r + 1, s=0, tau=0.0)),
        vtilde_sobolev=norm_rst(SpectralField(grid, state.vtilde, COS), NormSpec(r=r, s=s, tau=0.0)),
    )


def fit_growth_rate(diags: list[LimitDiagnostics]) -> float:
    """Empirical exponential growth rate of the baroclinic Sobolev norm.

    The double/triple exponential constants of the theory are not explicit;
    this fitted rate is logged so envelope exceedances can be flagged, never
    failed on.
    """
    t = np.array([d.t for d in diags])
    n = np.array([max(d.vtilde_sobolev, 1e-300) for d in diags])
    if len(t) < 2:
        return 0.0
    return float(np.polyfit(t, np.log(n), 1)[0])
