"""Power-law fits, the linear heat oracle, and comparison with predicted rates.

Fits are least squares lines in (log(1+t), log value); a series behaving
like C (1+t)^(-alpha) yields slope -alpha. Positive alpha means decay.

The heat oracle integrates the exact linear flow of a radial spectrum,
    ||u(t)||_{L2}^2 = 4 pi int_0^inf |u0_hat(rho)|^2 exp(-2 rho^2 t) rho^2 drho,
whose large-time law for spectra with a nonzero limit at rho -> 0 is the
(1+t)^(-3/2) benchmark the nonlinear rates are measured against.

Predicted exponents (value ~ (1+t)^(-alpha)):

    series                     alpha       convention
    ----------------------------------------------------------
    ||u||_{L2}^2               3/2         squared norm
    ||d - w0||_{L2}^2          3/2         squared norm
    ||grad d||_{L2}^2          5/2         squared norm
    ||D^m u||_{L2}^2           m + 3/2     squared norm
    ||D^m (d - w0)||_{L2}^2    m + 3/2     squared norm
    ||D^m u||_{Linf}           (m+3)/2     plain norm
    ||D^m (d - w0)||_{Linf}    (m+3)/2     plain norm
    ||d - w0||_{Lp}            3/2 (1-1/p) plain norm

For derivative series the prediction governs the top-order derivative
norm; a full Sobolev sum is dominated by its slowest, lowest-order term,
so it is not asserted for the sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import erf

from .errors import DataError, FitError, MappingError, ParameterError

__all__ = [
    "NormSeries",
    "FitResult",
    "ExpectationTable",
    "default_expectations",
    "fit_power_law",
    "FlatProfile",
    "GaussianProfile",
    "heat_oracle_l2",
    "flat_heat_value_sq",
    "compare_to_theory",
]

_MIN_FIT_POINTS = 8


@dataclass
class NormSeries:
    """One positive time series of a measured norm."""

    name: str
    t: np.ndarray
    values: np.ndarray
    run_id: str = ""

    def __post_init__(self) -> None:
        self.t = np.asarray(self.t, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.t.shape != self.values.shape or self.t.ndim != 1:
            raise DataError(f"series {self.name!r}: t and values must be 1-D and aligned")
        if self.t.size >= 2 and not np.all(np.diff(self.t) > 0):
            raise DataError(f"series {self.name!r}: times must be strictly increasing")
        if np.any(self.values <= 0):
            raise DataError(f"series {self.name!r}: values must be positive")


@dataclass(frozen=True)
class FitResult:
    """Power-law fit value ~ amplitude (1+t)^(-alpha) over a window."""

    series: str
    alpha: float
    amplitude: float
    window: tuple[float, float]
    residual_rms: float
    n_points: int


def fit_power_law(series: NormSeries, window: tuple[float, float]) -> FitResult:
    """Least-squares fit of log(value) against log(1 + t) inside the window."""
    t_lo, t_hi = window
    if not t_lo < t_hi:
        raise ParameterError(f"fit window must satisfy t_lo < t_hi, got {window}")
    sel = (series.t >= t_lo) & (series.t <= t_hi)
    n = int(np.count_nonzero(sel))
    if n < _MIN_FIT_POINTS:
        raise FitError(
            f"series {series.name!r}: {n} samples in window [{t_lo:g}, {t_hi:g}], "
            f"need >= {_MIN_FIT_POINTS}"
        )
    x = np.log1p(series.t[sel])
    y = np.log(series.values[sel])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return FitResult(
        series=series.name,
        alpha=float(-slope),
        amplitude=float(np.exp(intercept)),
        window=(float(t_lo), float(t_hi)),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        n_points=n,
    )


@dataclass(frozen=True)
class FlatProfile:
    """|u0_hat|(rho) = amplitude on [0, k_max], zero beyond."""

    amplitude: float
    k_max: float

    def __call__(self, rho: float) -> float:
        return self.amplitude if rho <= self.k_max else 0.0


@dataclass(frozen=True)
class GaussianProfile:
    """|u0_hat|(rho) = amplitude exp(-rho^2 / (2 width^2))."""

    amplitude: float
    width: float

    @property
    def k_max(self) -> float:
        # support is numerically exhausted far before 30 widths
        return 30.0 * self.width

    def __call__(self, rho: float) -> float:
        return self.amplitude * math.exp(-(rho**2) / (2.0 * self.width**2))


def heat_oracle_l2(
    spectrum_profile: Callable[[float], float], t: float, k_max: float | None = None
) -> float:
    """L2 norm of the heat flow of a radial spectrum at time t.

    ``spectrum_profile`` maps |xi| to |u0_hat(|xi|)| and must be bounded
    near zero; ``k_max`` bounds the quadrature (taken from the profile's
    ``k_max`` attribute when absent).
    """
    if t < 0:
        raise ParameterError(f"t must be nonnegative, got {t}")
    if k_max is None:
        k_max = getattr(spectrum_profile, "k_max", None)
        if k_max is None:
            raise ParameterError("profile has no k_max attribute; pass k_max explicitly")
    try:
        probe = [spectrum_profile(rho) for rho in (0.0, 1e-12, 1e-9, 1e-6)]
        bounded = all(np.isfinite(probe))
    except (ZeroDivisionError, OverflowError, FloatingPointError):
        bounded = False
    if not bounded:
        raise ParameterError("spectrum profile is unbounded near zero")

    def integrand(rho: float) -> float:
        a = spectrum_profile(rho)
        return a * a * math.exp(-2.0 * rho * rho * t) * rho * rho

    # split at the thermal radius so quad resolves the concentrating peak
    pts = sorted({min(k_max, 1.0 / math.sqrt(2.0 * t + 1.0)), k_max / 2.0})
    val_sq, _ = quad(integrand, 0.0, k_max, epsabs=0.0, epsrel=1e-12, limit=400, points=pts)
    return math.sqrt(4.0 * math.pi * val_sq)


def flat_heat_value_sq(amplitude: float, k_max: float, t: float) -> float:
    """Closed form of the squared oracle value for a flat profile.

    4 pi c^2 int_0^K exp(-2 t rho^2) rho^2 drho, via the error function;
    the t = 0 limit is the ball volume c^2 (4/3) pi K^3.
    """
    if t == 0.0:
        return 4.0 * math.pi * amplitude**2 * k_max**3 / 3.0
    a = 2.0 * t
    integral = -k_max * math.exp(-a * k_max**2) / (2.0 * a) + math.sqrt(
        math.pi / a
    ) * erf(math.sqrt(a) * k_max) / (4.0 * a)
    return 4.0 * math.pi * amplitude**2 * integral


@dataclass(frozen=True)
class ExpectationTable:
    """Mapping from series name to its predicted decay exponent."""

    entries: Mapping[str, float]
    conventions: Mapping[str, str]

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def __getitem__(self, name: str) -> float:
        return self.entries[name]


def default_expectations(m_max: int = 3, p_list: Sequence[float] = (2.0, 4.0, 7.0)) -> ExpectationTable:
    """Predicted exponents for every series the diagnostics emit."""
    sq = "squared-norm exponent"
    plain = "plain-norm exponent"
    entries: dict[str, float] = {
        "l2_u_sq": 1.5,
        "l2_dev_d_sq": 1.5,
        "l2_grad_d_sq": 2.5,
        "linf_u": 1.5,
        "linf_dev_d": 1.5,
        "linf_grad_d": 2.0,
        "linf_d2_d": 2.5,
    }
    conventions = {name: sq if name.endswith("_sq") else plain for name in entries}
    for m in range(1, m_max + 1):
        entries[f"l2_dmu_sq_{m}"] = m + 1.5
        entries[f"l2_dmd_sq_{m}"] = m + 1.5
        conventions[f"l2_dmu_sq_{m}"] = sq
        conventions[f"l2_dmd_sq_{m}"] = sq
    for p in p_list:
        if p == np.inf:
            continue
        tag = str(int(p)) if float(p).is_integer() else str(p).replace(".", "_")
        entries[f"lp_dev_d_p{tag}"] = 1.5 * (1.0 - 1.0 / p)
        conventions[f"lp_dev_d_p{tag}"] = plain
    return ExpectationTable(entries=entries, conventions=conventions)


def compare_to_theory(
    fits: Sequence[FitResult], table: ExpectationTable, tol: float
) -> dict:
    """Per-series verdict |alpha_measured - alpha_predicted| <= tol.

    Returns a machine-readable report; raises on an empty fit list or an
    unknown series name (never a silent pass).
    """
    if not fits:
        raise DataError("no fits to compare against the expectation table")
    if tol <= 0:
        raise ParameterError(f"tolerance must be positive, got {tol}")
    rows = []
    all_pass = True
    for f in fits:
        if f.series not in table:
            raise MappingError(f"series {f.series!r} has no entry in the expectation table")
        predicted = table[f.series]
        deviation = f.alpha - predicted
        ok = abs(deviation) <= tol
        all_pass = all_pass and ok
        rows.append(
            {
                "series": f.series,
                "alpha": f.alpha,
                "predicted": predicted,
                "deviation": deviation,
                "tolerance": tol,
                "window": list(f.window),
                "residual_rms": f.residual_rms,
                "n_points": f.n_points,
                "convention": table.conventions.get(f.series, ""),
                "verdict": "pass" if ok else "fail",
            }
        )
    return {"series": rows, "overall_pass": all_pass}
