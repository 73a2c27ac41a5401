"""Right-hand-side assembly for the coupled velocity / director system.

The system evolves an incompressible velocity u and a director field d
relaxing to a constant unit vector w0:

    u_t + u.grad u + grad pi = nu Lap u - div(grad d (x) grad d)
    d_t + u.grad d           = Lap d - f(d),         div u = 0

with the Ginzburg-Landau penalty F(d) = (|d|^2-1)^2 / (4 eta^2) and its
gradient f(d) = (|d|^2-1) d / eta^2. The pressure is eliminated by Leray
projection in spectral space. The stiff diffusive terms (nu Lap u, Lap d)
are NOT part of the tendencies returned here; the time stepper applies
them exactly through an integrating factor.

The director is stored as the deviation delta = d - w0 (spectrally), so
late-time norms keep full relative precision as d -> w0. Since w0 is
constant, grad d = grad delta exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, StructuralError
from .spectral import (
    Grid,
    RealField,
    SpectralField,
    _fftn,
    _ifftn,
    leray_project,
    solenoidal_residual,
)

__all__ = [
    "PhysicsParams",
    "State",
    "Tendency",
    "penalty_force",
    "penalty_energy",
    "ericksen_stress_divergence",
    "momentum_rhs",
    "director_rhs",
    "compute_tendency",
    "zero_tendency",
    "energy_decay_rate",
    "rest_state",
    "director_real",
]


@dataclass(frozen=True)
class PhysicsParams:
    """Physical constants: penalty length scale eta and viscosity nu."""

    eta: float = 1.0
    nu: float = 1.0

    def __post_init__(self) -> None:
        if self.eta <= 0 or self.nu <= 0:
            raise ParameterError(f"eta and nu must be positive, got eta={self.eta}, nu={self.nu}")


@dataclass
class State:
    """Complete evolving unknown: (u_hat, delta_hat, w0, t).

    u_hat is solenoidal with zero mean mode; d_dev_hat holds the Fourier
    coefficients of d - w0.
    """

    u_hat: SpectralField
    d_dev_hat: SpectralField
    w0: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        self.w0 = np.asarray(self.w0, dtype=np.float64)
        if self.w0.shape != (3,):
            raise StructuralError(f"w0 must be a 3-vector, got shape {self.w0.shape}")
        if self.u_hat.ncomp != 3 or self.d_dev_hat.ncomp != 3:
            raise StructuralError("velocity and director fields must have 3 components")
        if self.u_hat.grid is not self.d_dev_hat.grid and (
            self.u_hat.grid.n != self.d_dev_hat.grid.n
            or self.u_hat.grid.length != self.d_dev_hat.grid.length
        ):
            raise StructuralError("velocity and director live on different grids")

    @property
    def grid(self) -> Grid:
        return self.u_hat.grid

    def copy(self) -> "State":
        return State(self.u_hat.copy(), self.d_dev_hat.copy(), self.w0.copy(), self.time)

    def validate(self, tol: float = 1e-12) -> None:
        """Check solenoidality and zero-mean invariants of the velocity."""
        res = solenoidal_residual(self.u_hat)
        if res > tol:
            raise StructuralError(f"velocity is not solenoidal: residual {res:.3e} > {tol:g}")
        mean = np.max(np.abs(self.u_hat.coeffs[:, 0, 0, 0]))
        scale = max(float(np.max(np.abs(self.u_hat.coeffs))), 1e-300)
        if mean > tol * scale:
            raise StructuralError(f"velocity mean mode is not pinned to zero: {mean:.3e}")


@dataclass
class Tendency:
    """Nonlinear tendencies (diffusion excluded) for velocity and director."""

    du_hat: SpectralField
    dd_hat: SpectralField


def rest_state(grid: Grid, w0=(0.0, 0.0, 1.0)) -> State:
    """The steady rest state u = 0, d = w0."""
    return State(SpectralField.zeros(grid, 3), SpectralField.zeros(grid, 3), np.asarray(w0, float))


def director_real(state: State) -> RealField:
    """Full director d = w0 + delta as a real field."""
    dev = _ifftn(state.d_dev_hat.coeffs).real
    return RealField(state.grid, dev + state.w0[:, None, None, None])


def penalty_force(d: RealField, eta: float) -> RealField:
    """Pointwise Ginzburg-Landau force f(d) = (|d|^2 - 1) d / eta^2."""
    if d.ncomp != 3:
        raise StructuralError(f"director must have 3 components, got {d.ncomp}")
    if eta <= 0:
        raise ParameterError(f"eta must be positive, got {eta}")
    mag_sq = np.sum(d.values**2, axis=0)
    return RealField(d.grid, (mag_sq - 1.0) / eta**2 * d.values)


def penalty_energy(d: RealField, eta: float) -> float:
    """Box quadrature of F(d) = (|d|^2 - 1)^2 / (4 eta^2)."""
    if eta <= 0:
        raise ParameterError(f"eta must be positive, got {eta}")
    mag_sq = np.sum(d.values**2, axis=0)
    w = d.grid.volume / d.grid.n**3
    return float(w * np.sum((mag_sq - 1.0) ** 2) / (4.0 * eta**2))


def _grad_real(F: SpectralField) -> np.ndarray:
    """Real-space gradient tensor g[j, c] = d_j f_c, shape (3, ncomp, N, N, N)."""
    g = F.grid
    ks = (g.kx, g.ky, g.kz)
    out = np.empty((3,) + F.coeffs.shape, dtype=np.float64)
    for j in range(3):
        out[j] = _ifftn(1j * ks[j] * F.coeffs).real
    return out


def ericksen_stress_divergence(d_hat: SpectralField) -> SpectralField:
    """Divergence of the elastic stress grad d (x) grad d, in spectral space.

    Returns the 3-vector with components sum_j d_j (grad_i d . grad_j d),
    computed pseudo-spectrally with dealiased products. The input may be
    the deviation d - w0; the constant part contributes nothing.
    """
    g = d_hat.grid
    grad = _grad_real(d_hat)  # (3, 3, N, N, N): [j, c] = d_j d_c
    ks = (g.kx, g.ky, g.kz)
    mask = g.dealias_mask
    out = np.zeros((3, g.n, g.n, g.n), dtype=np.complex128)
    # T_ij = sum_c (d_i d_c)(d_j d_c); use symmetry to transform 6 entries
    for i in range(3):
        for j in range(i, 3):
            t_hat = _fftn(np.sum(grad[i] * grad[j], axis=0)) * mask
            out[i] += 1j * ks[j] * t_hat
            if i != j:
                out[j] += 1j * ks[i] * t_hat
    return SpectralField(g, out)


def _advection_hat(vel_real: np.ndarray, grad: np.ndarray, grid: Grid) -> np.ndarray:
    """Spectral coefficients of (u . grad) f from real-space u and grad f."""
    ncomp = grad.shape[1]
    adv = np.empty((ncomp, grid.n, grid.n, grid.n), dtype=np.float64)
    for c in range(ncomp):
        adv[c] = vel_real[0] * grad[0, c] + vel_real[1] * grad[1, c] + vel_real[2] * grad[2, c]
    return _fftn(adv) * grid.dealias_mask


def _assemble(state: State, params: PhysicsParams) -> tuple[np.ndarray, np.ndarray]:
    """Shared tendency assembly; returns (du_hat, dd_hat) coefficient arrays."""
    g = state.grid
    mask = g.dealias_mask
    u_real = _ifftn(state.u_hat.coeffs).real
    grad_u = _grad_real(state.u_hat)
    grad_d = _grad_real(state.d_dev_hat)

    # momentum: -P[ F(u.grad u) + div(grad d (x) grad d) ]
    adv_u_hat = _advection_hat(u_real, grad_u, g)
    ks = (g.kx, g.ky, g.kz)
    stress = np.zeros_like(adv_u_hat)
    for i in range(3):
        for j in range(i, 3):
            t_hat = _fftn(np.sum(grad_d[i] * grad_d[j], axis=0)) * mask
            stress[i] += 1j * ks[j] * t_hat
            if i != j:
                stress[j] += 1j * ks[i] * t_hat
    du = leray_project(SpectralField(g, -(adv_u_hat + stress))).coeffs

    # director: -F(u.grad d) - F(f(d))
    adv_d_hat = _advection_hat(u_real, grad_d, g)
    dev_real = _ifftn(state.d_dev_hat.coeffs).real
    d_full = dev_real + state.w0[:, None, None, None]
    mag_sq = np.sum(d_full**2, axis=0)
    f_hat = _fftn((mag_sq - 1.0) / params.eta**2 * d_full) * mask
    dd = -(adv_d_hat + f_hat)
    return du, dd


def compute_tendency(state: State, params: PhysicsParams) -> Tendency:
    """Full nonlinear tendency of the system (diffusion handled elsewhere)."""
    du, dd = _assemble(state, params)
    g = state.grid
    return Tendency(SpectralField(g, du), SpectralField(g, dd))


def zero_tendency(state: State, params: PhysicsParams) -> Tendency:
    """All-zero tendency; with it the stepper integrates the pure heat flow."""
    g = state.grid
    return Tendency(SpectralField.zeros(g, 3), SpectralField.zeros(g, 3))


def momentum_rhs(state: State, params: PhysicsParams) -> SpectralField:
    """Projected nonlinear momentum tendency P[-F(u.grad u) - div(grad d (x) grad d)].

    The nu Lap u term is excluded (integrating factor). Output is
    solenoidal and dealiased.
    """
    du, _ = _assemble(state, params)
    return SpectralField(state.grid, du)


def director_rhs(state: State, params: PhysicsParams) -> SpectralField:
    """Nonlinear director tendency -F(u.grad d) - F(f(d)), dealiased.

    The Lap d term is excluded (integrating factor).
    """
    _, dd = _assemble(state, params)
    return SpectralField(state.grid, dd)


def energy_decay_rate(state: State, params: PhysicsParams) -> float:
    """Analytic time derivative of E = 1/2||u||^2 + 1/2||grad d||^2 + int F(d).

    Evaluated through inner products of the state with the full tendencies
    (diffusion included). Nonpositive to quadrature accuracy for valid
    states; the mild aliasing of the cubic penalty term bounds the error.
    """
    g = state.grid
    du, dd = _assemble(state, params)
    u = state.u_hat.coeffs
    dev = state.d_dev_hat.coeffs
    udot = -params.nu * g.k_sq * u + du
    ddot = -g.k_sq * dev + dd
    v = g.volume
    rate = v * float(np.sum((np.conj(u) * udot).real))
    rate += v * float(np.sum(g.k_sq * (np.conj(dev) * ddot).real))
    d_full = _ifftn(dev).real + state.w0[:, None, None, None]
    mag_sq = np.sum(d_full**2, axis=0)
    f_real = (mag_sq - 1.0) / params.eta**2 * d_full
    ddot_real = _ifftn(ddot).real
    rate += v / g.n**3 * float(np.sum(f_real * ddot_real))
    return rate
