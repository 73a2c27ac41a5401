"""Tendency assembly: penalty, elastic stress, advection, energy balance."""

import numpy as np
import pytest

from conftest import fd_partial, random_band_limited
from lcdspectra.dynamics import (
    PhysicsParams,
    State,
    compute_tendency,
    director_rhs,
    energy_decay_rate,
    ericksen_stress_divergence,
    momentum_rhs,
    penalty_energy,
    penalty_force,
    rest_state,
    zero_tendency,
)
from lcdspectra.errors import ParameterError
from lcdspectra.spectral import (
    Grid,
    RealField,
    SpectralField,
    forward_transform,
    inverse_transform,
    l2_norm_spectral,
    leray_project,
    solenoidal_residual,
)

W0 = np.array([0.0, 0.0, 1.0])


def constant_director(grid, vec):
    vals = np.zeros((3, grid.n, grid.n, grid.n))
    for c in range(3):
        vals[c] = vec[c]
    return RealField(grid, vals)


def small_state(grid, seed, u_scale=0.1, d_scale=0.1):
    u = leray_project(random_band_limited(grid, 3, seed, scale=u_scale))
    u.coeffs[:, 0, 0, 0] = 0.0
    dev = random_band_limited(grid, 3, seed + 1, scale=d_scale)
    return State(u, dev, W0.copy(), 0.0)


class TestPenalty:
    def test_unit_director_is_force_free(self, grid16):
        f = penalty_force(constant_director(grid16, (0, 0, 1)), eta=2.0)
        assert np.all(f.values == 0.0)

    def test_stretched_director(self, grid16):
        f = penalty_force(constant_director(grid16, (0, 0, 2)), eta=1.0)
        assert np.allclose(f.values[2], 6.0)
        assert np.all(f.values[:2] == 0.0)

    def test_diagonal_director_with_eta(self, grid16):
        f = penalty_force(constant_director(grid16, (1, 1, 1)), eta=2.0)
        assert np.allclose(f.values, 0.5)

    def test_energy_zero_on_unit_sphere(self, grid32):
        x, _, _ = grid32.mesh()
        vals = np.stack(
            [
                np.broadcast_to(np.sin(x), (32, 32, 32)),
                np.zeros((32, 32, 32)),
                np.broadcast_to(np.cos(x), (32, 32, 32)),
            ]
        )
        assert penalty_energy(RealField(grid32, vals), eta=1.0) == pytest.approx(0.0, abs=1e-26)

    def test_energy_of_zero_director(self, grid16):
        v = grid16.volume
        assert penalty_energy(RealField.zeros(grid16, 3), eta=1.0) == pytest.approx(v / 4)

    def test_energy_of_sqrt2_director(self, grid16):
        v = grid16.volume
        e = penalty_energy(constant_director(grid16, (0, 0, np.sqrt(2.0))), eta=1.0)
        assert e == pytest.approx(v / 4, rel=1e-12)

    def test_eta_must_be_positive(self, grid16):
        with pytest.raises(ParameterError):
            penalty_force(RealField.zeros(grid16, 3), eta=0.0)
        with pytest.raises(ParameterError):
            PhysicsParams(eta=-1.0)


class TestEricksenStress:
    def test_constant_director_gives_zero(self, grid16):
        out = ericksen_stress_divergence(SpectralField.zeros(grid16, 3))
        assert np.max(np.abs(out.coeffs)) == 0.0

    def test_single_mode_analytic(self):
        # d = w0 + (eps sin x, 0, 0): divergence is (-eps^2 sin 2x, 0, 0)
        grid = Grid(2 * np.pi, 32)
        x, _, _ = grid.mesh()
        eps = 0.3
        dev = np.zeros((3, 32, 32, 32))
        dev[0] = eps * np.sin(x)
        out = ericksen_stress_divergence(forward_transform(RealField(grid, dev)))
        got = inverse_transform(out)
        expected = -(eps**2) * np.broadcast_to(np.sin(2 * x), (32, 32, 32))
        assert np.allclose(got.values[0], expected, atol=1e-12)
        assert np.max(np.abs(got.values[1:])) < 1e-14

    def test_against_finite_difference_oracle(self):
        # independent oracle: gradients and divergence by 4th-order FD
        grid = Grid(2 * np.pi, 64)
        rng = np.random.default_rng(42)
        dev_hat = SpectralField.zeros(grid, 3)
        keep = grid.k_mag <= 3.0 * grid.k_fundamental
        noise = rng.standard_normal((3, 64, 64, 64))
        from lcdspectra.spectral import _fftn

        dev_hat.coeffs = _fftn(noise) * keep * 0.2
        dev_hat.coeffs *= grid.dealias_mask
        dev = inverse_transform(dev_hat)

        dx = grid.dx
        grad = np.empty((3, 3, 64, 64, 64))
        for j in range(3):
            for c in range(3):
                grad[j, c] = fd_partial(dev.values[c], j, dx)
        div_fd = np.zeros((3, 64, 64, 64))
        for i in range(3):
            for j in range(3):
                t_ij = np.sum(grad[i] * grad[j], axis=0)
                div_fd[i] += fd_partial(t_ij, j, dx)

        got = inverse_transform(ericksen_stress_divergence(dev_hat)).values
        scale = np.max(np.abs(div_fd))
        assert np.max(np.abs(got - div_fd)) <= 5e-3 * scale

    def test_bilinearity_under_doubling(self, grid16):
        dev = random_band_limited(grid16, 3, seed=9, scale=0.05)
        one = ericksen_stress_divergence(dev)
        dev2 = SpectralField(grid16, 2.0 * dev.coeffs)
        four = ericksen_stress_divergence(dev2)
        assert np.allclose(four.coeffs, 4.0 * one.coeffs, rtol=1e-12, atol=1e-18)


class TestMomentumRhs:
    def test_rest_state_is_steady(self, grid16):
        params = PhysicsParams()
        state = rest_state(grid16)
        tend = compute_tendency(state, params)
        assert np.max(np.abs(tend.du_hat.coeffs)) == 0.0
        assert np.max(np.abs(tend.dd_hat.coeffs)) == 0.0

    def test_taylor_green_advection_is_pure_gradient(self):
        # u.grad u of the Taylor-Green cell is a gradient, so the
        # projected tendency vanishes identically
        grid = Grid(2 * np.pi, 32)
        x, y, _ = grid.mesh()
        a = 0.7
        u_vals = np.stack(
            [
                np.broadcast_to(a * np.sin(x) * np.cos(y), (32, 32, 32)).copy(),
                np.broadcast_to(-a * np.cos(x) * np.sin(y), (32, 32, 32)).copy(),
                np.zeros((32, 32, 32)),
            ]
        )
        u_hat = forward_transform(RealField(grid, u_vals))
        assert solenoidal_residual(u_hat) < 1e-14
        state = State(u_hat, SpectralField.zeros(grid, 3), W0.copy(), 0.0)
        out = momentum_rhs(state, PhysicsParams())
        assert np.max(np.abs(out.coeffs)) < 1e-14 * a**2

    def test_advection_vs_fd_oracle(self):
        # random multi-mode solenoidal field: projected advection is
        # genuinely nonzero and must match the finite-difference oracle
        grid = Grid(2 * np.pi, 64)
        rng = np.random.default_rng(7)
        from lcdspectra.spectral import _fftn

        keep = grid.k_mag <= 3.0 * grid.k_fundamental
        raw = SpectralField(grid, _fftn(rng.standard_normal((3, 64, 64, 64))) * keep * 0.3)
        raw.coeffs *= grid.dealias_mask
        u_hat = leray_project(raw)
        u_hat.coeffs[:, 0, 0, 0] = 0.0
        u_vals = inverse_transform(u_hat).values
        state = State(u_hat, SpectralField.zeros(grid, 3), W0.copy(), 0.0)
        out = inverse_transform(momentum_rhs(state, PhysicsParams())).values

        dx = grid.dx
        adv = np.zeros_like(u_vals)
        for c in range(3):
            for j in range(3):
                adv[c] += u_vals[j] * fd_partial(u_vals[c], j, dx)
        # oracle: project -F(adv) with the (separately tested) projector
        oracle_hat = leray_project(forward_transform(RealField(grid, -adv)))
        oracle = inverse_transform(oracle_hat).values
        scale = np.max(np.abs(oracle))
        assert scale > 0.0
        assert np.max(np.abs(out - oracle)) <= 5e-3 * scale

    def test_output_is_solenoidal(self, grid16):
        state = small_state(grid16, seed=21, u_scale=0.5, d_scale=0.3)
        out = momentum_rhs(state, PhysicsParams())
        assert solenoidal_residual(out) <= 1e-13

    def test_advection_scales_quadratically(self, grid16):
        # with d = w0 the momentum tendency is pure advection
        state1 = small_state(grid16, seed=33, u_scale=0.2, d_scale=0.0)
        state2 = State(
            SpectralField(grid16, 2.0 * state1.u_hat.coeffs),
            SpectralField.zeros(grid16, 3),
            W0.copy(),
            0.0,
        )
        out1 = momentum_rhs(state1, PhysicsParams())
        out2 = momentum_rhs(state2, PhysicsParams())
        assert np.allclose(out2.coeffs, 4.0 * out1.coeffs, rtol=1e-12, atol=1e-18)


class TestDirectorRhs:
    def test_rest_state_zero(self, grid16):
        out = director_rhs(rest_state(grid16), PhysicsParams())
        assert np.max(np.abs(out.coeffs)) == 0.0

    def test_constant_director_force(self, grid16):
        # d = (0, 0, c) constant: tendency is -(c^2 - 1) c at the mean mode
        c = 1.7
        dev = SpectralField.zeros(grid16, 3)
        dev.coeffs[2, 0, 0, 0] = c - 1.0
        state = State(SpectralField.zeros(grid16, 3), dev, W0.copy(), 0.0)
        out = director_rhs(state, PhysicsParams(eta=1.0))
        assert out.coeffs[2, 0, 0, 0] == pytest.approx(-(c**2 - 1.0) * c, rel=1e-12)
        rest_modes = out.coeffs.copy()
        rest_modes[2, 0, 0, 0] = 0.0
        assert np.max(np.abs(rest_modes)) < 1e-14

    def test_advection_vs_fd_oracle(self):
        grid = Grid(2 * np.pi, 64)
        x, y, _ = grid.mesh()
        u_vals = np.stack(
            [
                np.broadcast_to(0.5 * np.sin(x) * np.cos(y), (64, 64, 64)).copy(),
                np.broadcast_to(-0.5 * np.cos(x) * np.sin(y), (64, 64, 64)).copy(),
                np.zeros((64, 64, 64)),
            ]
        )
        u_hat = forward_transform(RealField(grid, u_vals))
        dev_vals = np.zeros((3, 64, 64, 64))
        dev_vals[1] = 0.2 * np.broadcast_to(np.sin(2 * y), (64, 64, 64))
        dev_hat = forward_transform(RealField(grid, dev_vals))
        state = State(u_hat, dev_hat, W0.copy(), 0.0)
        out = inverse_transform(director_rhs(state, PhysicsParams())).values

        dx = grid.dx
        adv = np.zeros_like(dev_vals)
        for c in range(3):
            for j in range(3):
                adv[c] += u_vals[j] * fd_partial(dev_vals[c], j, dx)
        d_full = dev_vals + W0[:, None, None, None]
        f_pen = (np.sum(d_full**2, axis=0) - 1.0) * d_full
        oracle = -(adv + f_pen)
        scale = np.max(np.abs(oracle))
        assert np.max(np.abs(out - oracle)) <= 5e-3 * scale


class TestEnergyBalance:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_energy_decay_rate_nonpositive(self, seed):
        grid = Grid(2 * np.pi, 24)
        state = small_state(grid, seed=seed, u_scale=0.05, d_scale=0.05)
        rate = energy_decay_rate(state, PhysicsParams(eta=1.0, nu=1.0))
        assert rate <= 1e-8

    def test_rate_strictly_negative_for_active_state(self, grid16):
        state = small_state(grid16, seed=8, u_scale=0.2, d_scale=0.2)
        assert energy_decay_rate(state, PhysicsParams()) < 0.0

    def test_zero_tendency_helper(self, grid16):
        state = small_state(grid16, seed=4)
        tend = zero_tendency(state, PhysicsParams())
        assert np.max(np.abs(tend.du_hat.coeffs)) == 0.0
        assert l2_norm_spectral(tend.dd_hat) == 0.0
