import numpy as np
import pytest

from lcdspectra.spectral import Grid, RealField, SpectralField, forward_transform


@pytest.fixture(scope="session")
def grid16():
    return Grid(2.0 * np.pi, 16)


@pytest.fixture(scope="session")
def grid32():
    return Grid(2.0 * np.pi, 32)


def random_band_limited(grid: Grid, ncomp: int, seed: int, scale: float = 1.0) -> SpectralField:
    """Random dealiased spectral field with Hermitian symmetry by construction."""
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((ncomp,) + (grid.n,) * 3)
    F = forward_transform(RealField(grid, noise))
    F.coeffs *= scale
    return F


def fd_partial(values: np.ndarray, axis: int, dx: float) -> np.ndarray:
    """4th-order centered periodic finite difference along one grid axis."""
    f1 = np.roll(values, -1, axis=axis) - np.roll(values, 1, axis=axis)
    f2 = np.roll(values, -2, axis=axis) - np.roll(values, 2, axis=axis)
    return (8.0 * f1 - f2) / (12.0 * dx)
