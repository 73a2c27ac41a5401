"""Periodic-box spectral infrastructure.

Grids, Fourier transforms, derivatives, Leray projection and norm
evaluation for 3-D periodic boxes. All fields live on a cubic box of
side ``L`` sampled at ``N`` points per axis; spectral coefficients are
kept dealiased by the 2/3 rule (modes with any |m_j| > N/3 are zeroed,
which also removes the sign-ambiguous Nyquist modes).

Transform normalization: the forward transform carries the 1/N^3 factor,
so ``coeff(m) = (1/N^3) * sum_x f(x) exp(-i k.x)`` and coefficients
approximate Fourier-series coefficients independently of resolution.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as _fft

from .errors import ParameterError, StructuralError, SymmetryError

__all__ = [
    "Grid",
    "SpectralField",
    "RealField",
    "forward_transform",
    "inverse_transform",
    "spectral_derivative",
    "leray_project",
    "l2_norm_spectral",
    "lp_norm",
    "apply_dealias",
    "deriv_norm_sq",
    "sobolev_norm_sq",
    "hermitian_residual",
    "solenoidal_residual",
    "vector_magnitude",
    "fft_workers",
]

_IMAG_TOL = 1e-13


def fft_workers() -> int:
    """Number of FFT worker threads, bounded by LCD_SPECTRA_THREADS."""
    env = os.environ.get("LCD_SPECTRA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ParameterError(f"LCD_SPECTRA_THREADS must be an integer, got {env!r}")
    return max(1, os.cpu_count() or 1)


@dataclass(frozen=True)
class Grid:
    """Cubic periodic box with precomputed wavenumber tables.

    Parameters
    ----------
    length : float
        Box side L (same in all three axes).
    n : int
        Points per axis; must be even and >= 8.

    Derived attributes (set at construction): integer mode table
    ``modes``; physical wavenumbers ``k1`` with k_j = (2 pi / L) m_j;
    broadcastable axis views ``kx, ky, kz``; ``k_sq = |k|^2``;
    ``dealias_mask`` true on retained modes.
    """

    length: float
    n: int
    modes: np.ndarray = field(init=False, repr=False, compare=False)
    k1: np.ndarray = field(init=False, repr=False, compare=False)
    kx: np.ndarray = field(init=False, repr=False, compare=False)
    ky: np.ndarray = field(init=False, repr=False, compare=False)
    kz: np.ndarray = field(init=False, repr=False, compare=False)
    k_sq: np.ndarray = field(init=False, repr=False, compare=False)
    k_mag: np.ndarray = field(init=False, repr=False, compare=False)
    dealias_mask: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n % 2 != 0 or self.n < 8:
            raise ParameterError(f"grid resolution must be even and >= 8, got {self.n}")
        if self.length <= 0:
            raise ParameterError(f"box length must be positive, got {self.length}")
        n = self.n
        modes = np.fft.fftfreq(n, d=1.0 / n).astype(np.int64)
        k1 = modes * (2.0 * np.pi / self.length)
        kx = k1[:, None, None]
        ky = k1[None, :, None]
        kz = k1[None, None, :]
        k_sq = kx**2 + ky**2 + kz**2
        m_cut = n // 3
        keep1 = np.abs(modes) <= m_cut
        mask = keep1[:, None, None] & keep1[None, :, None] & keep1[None, None, :]
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "k1", k1)
        object.__setattr__(self, "kx", kx)
        object.__setattr__(self, "ky", ky)
        object.__setattr__(self, "kz", kz)
        object.__setattr__(self, "k_sq", k_sq)
        object.__setattr__(self, "k_mag", np.sqrt(k_sq))
        object.__setattr__(self, "dealias_mask", mask)

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def volume(self) -> float:
        return self.length**3

    @property
    def k_fundamental(self) -> float:
        """Spacing of the wavenumber lattice, 2 pi / L."""
        return 2.0 * np.pi / self.length

    @property
    def k_dealias_max(self) -> float:
        """Largest retained per-axis wavenumber magnitude."""
        return (self.n // 3) * self.k_fundamental

    def x1d(self) -> np.ndarray:
        return np.arange(self.n) * self.dx

    def mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Broadcastable coordinate views (x, y, z)."""
        x = self.x1d()
        return x[:, None, None], x[None, :, None], x[None, None, :]

    def shape(self, ncomp: int) -> tuple[int, int, int, int]:
        return (ncomp, self.n, self.n, self.n)


@dataclass
class SpectralField:
    """Fourier coefficients of a real vector (or scalar) field.

    ``coeffs`` has shape (ncomp, N, N, N), complex, in standard FFT mode
    ordering; Hermitian symmetry coeff(-m) = conj(coeff(m)) makes the
    real-space field real to round-off. Coefficients are zero outside
    the dealias mask.
    """

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs)
        if c.ndim == 3:
            c = c[None, ...]
        if c.ndim != 4 or c.shape[1:] != (self.grid.n,) * 3:
            raise StructuralError(
                f"coefficient array shape {c.shape} does not match grid N={self.grid.n}"
            )
        self.coeffs = np.ascontiguousarray(c, dtype=np.complex128)

    @property
    def ncomp(self) -> int:
        return self.coeffs.shape[0]

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs.copy())

    @classmethod
    def zeros(cls, grid: Grid, ncomp: int = 3) -> "SpectralField":
        return cls(grid, np.zeros(grid.shape(ncomp), dtype=np.complex128))


@dataclass
class RealField:
    """Point values of a real field on the grid, shape (ncomp, N, N, N)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values)
        if v.ndim == 3:
            v = v[None, ...]
        if v.ndim != 4 or v.shape[1:] != (self.grid.n,) * 3:
            raise StructuralError(
                f"value array shape {v.shape} does not match grid N={self.grid.n}"
            )
        self.values = np.ascontiguousarray(v, dtype=np.float64)

    @property
    def ncomp(self) -> int:
        return self.values.shape[0]

    @classmethod
    def zeros(cls, grid: Grid, ncomp: int = 3) -> "RealField":
        return cls(grid, np.zeros(grid.shape(ncomp), dtype=np.float64))


def _fftn(a: np.ndarray) -> np.ndarray:
    return _fft.fftn(a, axes=(-3, -2, -1), norm="forward", workers=fft_workers())


def _ifftn(a: np.ndarray) -> np.ndarray:
    return _fft.ifftn(a, axes=(-3, -2, -1), norm="forward", workers=fft_workers())


def apply_dealias(F: SpectralField) -> SpectralField:
    """Zero every coefficient outside the grid's dealias mask (in place)."""
    F.coeffs *= F.grid.dealias_mask
    return F


def forward_transform(f: RealField) -> SpectralField:
    """Real field -> dealiased spectral coefficients (1/N^3 normalization)."""
    out = SpectralField(f.grid, _fftn(f.values))
    return apply_dealias(out)


def inverse_transform(F: SpectralField) -> RealField:
    """Spectral coefficients -> real point values.

    The imaginary residue of the complex inverse transform must not
    exceed 1e-13 of the field magnitude; it is checked and discarded.

    Raises
    ------
    SymmetryError
        If Hermitian symmetry is broken beyond tolerance.
    """
    z = _ifftn(F.coeffs)
    re = z.real
    im_max = float(np.max(np.abs(z.imag))) if z.size else 0.0
    re_max = float(np.max(np.abs(re))) if z.size else 0.0
    if im_max > _IMAG_TOL * max(re_max, im_max):
        raise SymmetryError(
            f"imaginary residue {im_max:.3e} exceeds {_IMAG_TOL:g} of field magnitude {re_max:.3e}"
        )
    return RealField(F.grid, re.copy())


def spectral_derivative(F: SpectralField, multi_index: tuple[int, int, int]) -> SpectralField:
    """Partial derivative d^a1_x d^a2_y d^a3_z as a Fourier multiplier.

    Multiplies coeff(m) by prod_j (i k_j)^{a_j}. Nyquist modes are zeroed
    when the total order is odd (their derivative sign is ambiguous);
    dealiased fields have no Nyquist content anyway.
    """
    a1, a2, a3 = multi_index
    if a1 < 0 or a2 < 0 or a3 < 0:
        raise ParameterError(f"derivative orders must be nonnegative, got {multi_index}")
    g = F.grid
    mult = np.ones((), dtype=np.complex128)
    for a, k in ((a1, g.kx), (a2, g.ky), (a3, g.kz)):
        if a:
            mult = mult * (1j * k) ** a
    out = F.coeffs * mult
    if (a1 + a2 + a3) % 2 == 1:
        ny = g.n // 2
        idx = np.where(g.modes == -ny)[0]
        for i in idx:
            out[:, i, :, :] = 0.0
            out[:, :, i, :] = 0.0
            out[:, :, :, i] = 0.0
    return SpectralField(g, out)


def leray_project(F: SpectralField) -> SpectralField:
    """Project a 3-component spectral field onto divergence-free fields.

    Per mode m != 0: coeff <- coeff - k (k . coeff) / |k|^2. The mean
    mode is untouched. Output satisfies k . coeff = 0 to round-off.
    """
    if F.ncomp != 3:
        raise StructuralError(f"Leray projection needs a 3-component field, got {F.ncomp}")
    g = F.grid
    c = F.coeffs
    k_sq = g.k_sq.copy()
    k_sq[0, 0, 0] = 1.0  # mode 0 has k = 0, so the correction below is zero there
    s = (g.kx * c[0] + g.ky * c[1] + g.kz * c[2]) / k_sq
    out = np.empty_like(c)
    out[0] = c[0] - g.kx * s
    out[1] = c[1] - g.ky * s
    out[2] = c[2] - g.kz * s
    return SpectralField(g, out)


def divergence(F: SpectralField) -> SpectralField:
    """Spectral divergence i k . coeff of a 3-component field (scalar output)."""
    if F.ncomp != 3:
        raise StructuralError(f"divergence needs a 3-component field, got {F.ncomp}")
    g = F.grid
    c = F.coeffs
    d = 1j * (g.kx * c[0] + g.ky * c[1] + g.kz * c[2])
    return SpectralField(g, d[None, ...])


def l2_norm_spectral(F: SpectralField) -> float:
    """L2 norm via Plancherel: sqrt(L^3 sum_m |coeff(m)|^2)."""
    return float(np.sqrt(F.grid.volume * np.sum(np.abs(F.coeffs) ** 2)))


def vector_magnitude(f: RealField) -> np.ndarray:
    """Pointwise Euclidean magnitude over components, shape (N, N, N)."""
    return np.sqrt(np.sum(f.values**2, axis=0))


def lp_norm(f: RealField, p: float) -> float:
    """Grid-quadrature L^p norm, (L^3/N^3 sum |f|^p)^(1/p); p = inf gives the max.

    Vector fields use the pointwise Euclidean magnitude.
    """
    if p != np.inf and p < 1:
        raise ParameterError(f"p must be >= 1 or inf, got {p}")
    mag = vector_magnitude(f)
    if p == np.inf:
        return float(np.max(mag))
    w = f.grid.volume / f.grid.n**3
    if p == 2:
        return float(np.sqrt(w * np.sum(mag**2)))
    return float((w * np.sum(mag**p)) ** (1.0 / p))


def deriv_norm_sq(F: SpectralField, order: int) -> float:
    """Squared L2 norm of the full derivative tensor of the given order.

    The tensor norm sums |d_{i1..ik} f|^2 over all index tuples, which by
    the multinomial identity equals the Fourier multiplier |k|^(2 order):
    ||D^k f||^2 = L^3 sum_m |k(m)|^(2k) |coeff(m)|^2.
    """
    if order < 0:
        raise ParameterError(f"derivative order must be nonnegative, got {order}")
    g = F.grid
    w = np.abs(F.coeffs) ** 2
    if order:
        w = w * g.k_sq**order
    return float(g.volume * np.sum(w))


def sobolev_norm_sq(F: SpectralField, m: int) -> float:
    """Squared H^m norm: sum of derivative-tensor norms of orders 0..m."""
    return float(sum(deriv_norm_sq(F, j) for j in range(m + 1)))


def hermitian_residual(F: SpectralField) -> float:
    """Max |coeff(-m) - conj(coeff(m))| over all retained mode pairs."""
    c = F.coeffs
    rev = c[:, ::-1, ::-1, ::-1]
    rev = np.roll(rev, shift=(1, 1, 1), axis=(1, 2, 3))
    return float(np.max(np.abs(c - np.conj(rev))))


def solenoidal_residual(F: SpectralField) -> float:
    """Scale-invariant divergence residual of a 3-component spectral field.

    max_m |k(m) . coeff(m)| normalized by k_max ||coeffs||_F; zero for the
    zero field. Leray-projected fields score at round-off level.
    """
    if F.ncomp != 3:
        raise StructuralError(f"solenoidal residual needs a 3-component field, got {F.ncomp}")
    g = F.grid
    c = F.coeffs
    num = float(np.max(np.abs(g.kx * c[0] + g.ky * c[1] + g.kz * c[2])))
    k_max = np.sqrt(3.0) * g.k_dealias_max
    scale = float(np.sqrt(np.sum(np.abs(c) ** 2)))
    if scale == 0.0:
        return 0.0
    return num / (k_max * scale)
