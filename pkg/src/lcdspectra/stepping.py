"""Time integration with exact treatment of the stiff diffusive terms.

Per Fourier mode the system splits into a linear part (lambda_u = -nu|k|^2
for the velocity, lambda_d = -|k|^2 for the director deviation) and the
nonlinear tendency N. The linear part is applied exactly through the
integrating factor exp(lambda dt); the default scheme is Heun's method in
the exponentially transformed variable (IF-RK2):

    predictor   y* = E (y + dt N(y)),          E = exp(lambda dt)
    corrector   y+ = E y + dt/2 (E N(y) + N(y*))

With the nonlinear terms disabled every mode therefore decays exactly as
exp(lambda t) regardless of step subdivision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .dynamics import PhysicsParams, State, Tendency, compute_tendency
from .errors import BlowUpError, ParameterError
from .spectral import SpectralField, _ifftn, leray_project

__all__ = ["StepperConfig", "Hook", "adaptive_dt", "step", "integrate"]

_SCHEMES = ("if-rk2", "if-euler")
_SPEED_FLOOR = 1e-6

TendencyFn = Callable[[State, PhysicsParams], Tendency]


@dataclass(frozen=True)
class StepperConfig:
    """Step-size and scheme policy for a run."""

    dt_init: float = 0.1
    cfl_number: float = 0.4
    dt_max: float = 0.5
    t_end: float = 1.0
    scheme: str = "if-rk2"

    def __post_init__(self) -> None:
        if min(self.dt_init, self.cfl_number, self.dt_max) <= 0 or self.t_end < 0:
            raise ParameterError("stepper parameters must be positive (t_end >= 0)")
        if self.cfl_number > 1.0:
            raise ParameterError(f"cfl_number must be <= 1, got {self.cfl_number}")
        if self.scheme not in _SCHEMES:
            raise ParameterError(f"scheme must be one of {_SCHEMES}, got {self.scheme!r}")


@dataclass
class Hook:
    """Callback fired at the start time and at every multiple of ``interval``."""

    interval: float
    fn: Callable[[State], None]
    _next_index: int = field(default=0, init=False, repr=False)
    _last_fired: float = field(default=float("-inf"), init=False, repr=False)


def max_speed(state: State) -> float:
    """Pointwise maximum velocity magnitude on the grid."""
    u = _ifftn(state.u_hat.coeffs).real
    return float(np.max(np.sqrt(np.sum(u**2, axis=0))))


def adaptive_dt(state: State, config: StepperConfig) -> float:
    """Advective CFL step: min(dt_max, cfl dx / max(|u|_inf, floor)).

    The diffusive terms impose no constraint (integrating factor), so the
    velocity maximum is the only stability input; the floor guards the
    quiescent limit.
    """
    speed = max(max_speed(state), _SPEED_FLOOR)
    return float(min(config.dt_max, config.cfl_number * state.grid.dx / speed))


_factor_cache: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}


def _factors(state: State, params: PhysicsParams, dt: float) -> tuple[np.ndarray, np.ndarray]:
    key = (state.grid, params.nu, dt)
    hit = _factor_cache.get(key)
    if hit is not None:
        return hit
    k_sq = state.grid.k_sq
    e_d = np.exp(-dt * k_sq)
    e_u = e_d**params.nu if params.nu != 1.0 else e_d
    if len(_factor_cache) > 16:
        _factor_cache.clear()
    _factor_cache[key] = (e_u, e_d)
    return e_u, e_d


def step(
    state: State,
    params: PhysicsParams,
    dt: float,
    tendency_fn: TendencyFn = compute_tendency,
    scheme: str = "if-rk2",
) -> State:
    """Advance the state by one step of the integrating-factor scheme.

    The velocity is re-projected onto divergence-free fields and its mean
    mode pinned to zero after the update.

    Raises
    ------
    BlowUpError
        If any coefficient becomes non-finite.
    """
    if dt <= 0:
        raise ParameterError(f"dt must be positive, got {dt}")
    if scheme not in _SCHEMES:
        raise ParameterError(f"scheme must be one of {_SCHEMES}, got {scheme!r}")
    g = state.grid
    e_u, e_d = _factors(state, params, dt)
    u0 = state.u_hat.coeffs
    d0 = state.d_dev_hat.coeffs
    tend0 = tendency_fn(state, params)
    nu0 = tend0.du_hat.coeffs
    nd0 = tend0.dd_hat.coeffs

    u_star = e_u * (u0 + dt * nu0)
    d_star = e_d * (d0 + dt * nd0)
    if scheme == "if-euler":
        u_new, d_new = u_star, d_star
    else:
        star = State(
            SpectralField(g, u_star), SpectralField(g, d_star), state.w0, state.time + dt
        )
        tend1 = tendency_fn(star, params)
        u_new = e_u * u0 + 0.5 * dt * (e_u * nu0 + tend1.du_hat.coeffs)
        d_new = e_d * d0 + 0.5 * dt * (e_d * nd0 + tend1.dd_hat.coeffs)

    u_field = leray_project(SpectralField(g, u_new))
    u_field.coeffs[:, 0, 0, 0] = 0.0
    new = State(u_field, SpectralField(g, d_new), state.w0, state.time + dt)

    if not (np.isfinite(np.sum(u_field.coeffs)) and np.isfinite(np.sum(d_new))):
        n_bad_u = int(np.count_nonzero(~np.isfinite(u_field.coeffs)))
        n_bad_d = int(np.count_nonzero(~np.isfinite(d_new)))
        raise BlowUpError(
            f"non-finite coefficients after step to t={state.time + dt:.6g} "
            f"(velocity: {n_bad_u}, director: {n_bad_d} bad entries); "
            f"dt={dt:.3e}, scheme={scheme}",
            time=state.time,
        )
    return new


def integrate(
    state: State,
    params: PhysicsParams,
    config: StepperConfig,
    hooks: Sequence[Hook] = (),
    tendency_fn: TendencyFn = compute_tendency,
) -> State:
    """Advance to t_end with adaptive steps, firing hooks on their cadence.

    Hooks fire at the start time, at every multiple of their interval, and
    at t_end. Steps always land exactly on hook times, so diagnostic
    cadences are respected and a run split at a hook boundary reproduces
    the unsplit schedule. Deterministic for identical inputs.
    """
    hooks = list(hooks)
    for h in hooks:
        if h.interval <= 0:
            raise ParameterError(f"hook interval must be positive, got {h.interval}")
        h._next_index = int(np.floor(state.time / h.interval + 1e-9)) + 1
        h.fn(state)
        h._last_fired = state.time
    eps_end = 1e-12 * max(1.0, config.t_end)
    if config.t_end <= state.time + eps_end:
        return state

    # dt_init caps only the very first step of a fresh run, so a resumed
    # run reproduces the unsplit step sequence exactly
    dt_cap = config.dt_init if state.time == 0.0 else config.dt_max
    while state.time < config.t_end - eps_end:
        dt = min(adaptive_dt(state, config), dt_cap)
        dt_cap = config.dt_max
        t_next = config.t_end
        for h in hooks:
            t_next = min(t_next, h._next_index * h.interval)
        dt = min(dt, t_next - state.time)
        state = step(state, params, dt, tendency_fn=tendency_fn, scheme=config.scheme)
        snap = 1e-9 * max(1.0, abs(t_next))
        if abs(state.time - t_next) < snap:
            state.time = t_next
        for h in hooks:
            if state.time >= h._next_index * h.interval - snap:
                h._next_index += 1
                h.fn(state)
                h._last_fired = state.time
    for h in hooks:
        if state.time - h._last_fired > 1e-9 * max(1.0, state.time):
            h.fn(state)
            h._last_fired = state.time
    return state
