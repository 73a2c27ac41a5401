"""Run configuration: flat, sectioned key-value text files.

Grammar (INI dialect, parsed by configparser):

    [grid]
    L = 64pi            # floats accept a "pi" suffix meaning that multiple of pi
    N = 64

    [physics]
    eta = 1.0
    nu = 1.0

    [init]
    seed = 2025
    u_amplitude = 0.06
    u_shell = 0.0, 0.6
    u_profile = flat    # flat | gaussian
    d_perturb_amplitude = 0.05
    d_perturb_band = 0.0, 0.6
    w0 = 0, 0, 1
    normalize_d = true
    smallness_budget = 0.01

    [stepper]
    dt_init = 0.25
    cfl_number = 0.4
    dt_max = 0.25
    t_end = 80
    scheme = if-rk2     # if-rk2 | if-euler

    [diagnostics]
    sample_interval = 0.5
    m_max = 3
    p_list = 2, 4, 7
    split_k_const = 4.0

    [fit]
    t_lo = 5.0
    t_hi = 80.0         # defaults to min(t_end, 0.1 (L / 2pi)^2)
    tol_l2 = 0.5
    tol_linf = 0.3
    series = l2_u_sq, l2_dev_d_sq, ...   # optional override of the fit set

    [output]
    directory = runs/desk
    checkpoint_interval = 20.0           # 0 disables checkpoints

Unknown sections or keys are rejected with an error naming them. Every
key has a default, so sections may be omitted entirely. Relative output
directories are resolved against the config file location.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .diagnostics import DiagnosticsConfig
from .dynamics import PhysicsParams
from .errors import ConfigError, LcdSpectraError
from .initdata import InitConfig
from .stepping import StepperConfig

__all__ = ["GridConfig", "FitConfig", "OutputConfig", "RunConfig", "parse_config", "parse_config_text"]

DEFAULT_FIT_SERIES = (
    "l2_u_sq",
    "l2_dev_d_sq",
    "l2_grad_d_sq",
    "l2_dmu_sq_1",
    "l2_dmu_sq_2",
    "l2_dmd_sq_1",
    "l2_dmd_sq_2",
    "linf_u",
    "linf_dev_d",
)


@dataclass(frozen=True)
class GridConfig:
    length: float = 64.0 * math.pi
    n: int = 64


@dataclass(frozen=True)
class FitConfig:
    t_lo: float = 5.0
    t_hi: float | None = None
    tol_l2: float = 0.5
    tol_linf: float = 0.3
    series: tuple[str, ...] = DEFAULT_FIT_SERIES


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "runs/out"
    checkpoint_interval: float = 0.0


@dataclass(frozen=True)
class RunConfig:
    grid: GridConfig = field(default_factory=GridConfig)
    physics: PhysicsParams = field(default_factory=PhysicsParams)
    init: InitConfig = field(default_factory=InitConfig)
    stepper: StepperConfig = field(default_factory=StepperConfig)
    diagnostics: DiagnosticsConfig = field(default_factory=DiagnosticsConfig)
    fit: FitConfig = field(default_factory=FitConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    @property
    def fit_window(self) -> tuple[float, float]:
        """Configured window, with t_hi defaulting below the box gap time.

        The periodic box mimics free space only while t stays well below
        (L / 2 pi)^2, so the automatic upper edge is min(t_end, 0.1 of it).
        """
        t_hi = self.fit.t_hi
        if t_hi is None:
            gap_time = (self.grid.length / (2.0 * math.pi)) ** 2
            t_hi = min(self.stepper.t_end, 0.1 * gap_time)
        return (self.fit.t_lo, t_hi)


def _parse_float(text: str, where: str) -> float:
    s = text.strip().lower()
    try:
        if s.endswith("pi"):
            head = s[:-2].strip()
            return (float(head) if head else 1.0) * math.pi
        if s in ("inf", "infinity"):
            return float("inf")
        return float(s)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {text!r} as a number")


def _parse_int(text: str, where: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {text!r} as an integer")


def _parse_bool(text: str, where: str) -> bool:
    s = text.strip().lower()
    if s in ("true", "yes", "on", "1"):
        return True
    if s in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{where}: cannot parse {text!r} as a boolean")


def _parse_floats(text: str, where: str) -> tuple[float, ...]:
    parts = [p for p in text.replace(",", " ").split() if p]
    return tuple(_parse_float(p, where) for p in parts)


def _parse_names(text: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in text.split(",") if p.strip())


_KNOWN = {
    "grid": {"l", "n"},
    "physics": {"eta", "nu"},
    "init": {
        "seed",
        "u_amplitude",
        "u_shell",
        "u_profile",
        "d_perturb_amplitude",
        "d_perturb_band",
        "w0",
        "normalize_d",
        "smallness_budget",
        "phases",
    },
    "stepper": {"dt_init", "cfl_number", "dt_max", "t_end", "scheme"},
    "diagnostics": {"sample_interval", "m_max", "p_list", "split_k_const"},
    "fit": {"t_lo", "t_hi", "tol_l2", "tol_linf", "series"},
    "output": {"directory", "checkpoint_interval"},
}


def parse_config_text(text: str, base_dir: Path | None = None) -> RunConfig:
    """Parse configuration text; see module docstring for the grammar."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    for section in cp.sections():
        if section not in _KNOWN:
            raise ConfigError(f"unknown section [{section}]")
        for key in cp[section]:
            if key.lower() not in _KNOWN[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")

    def get(section: str, key: str) -> str | None:
        if cp.has_section(section) and cp.has_option(section, key):
            return cp.get(section, key)
        return None

    def num(section: str, key: str, default: float) -> float:
        raw = get(section, key)
        return default if raw is None else _parse_float(raw, f"{section}.{key}")

    def integer(section: str, key: str, default: int) -> int:
        raw = get(section, key)
        return default if raw is None else _parse_int(raw, f"{section}.{key}")

    def text_value(section: str, key: str, default: str) -> str:
        raw = get(section, key)
        return default if raw is None else raw.strip()

    try:
        grid = GridConfig(length=num("grid", "l", GridConfig.length), n=integer("grid", "n", GridConfig.n))
        physics = PhysicsParams(eta=num("physics", "eta", 1.0), nu=num("physics", "nu", 1.0))

        d = InitConfig()
        shell_raw = get("init", "u_shell")
        band_raw = get("init", "d_perturb_band")
        w0_raw = get("init", "w0")
        norm_raw = get("init", "normalize_d")
        init = InitConfig(
            seed=integer("init", "seed", d.seed),
            u_amplitude=num("init", "u_amplitude", d.u_amplitude),
            u_shell=(
                tuple(_parse_floats(shell_raw, "init.u_shell")) if shell_raw else d.u_shell
            ),
            u_profile=text_value("init", "u_profile", d.u_profile),
            d_perturb_amplitude=num("init", "d_perturb_amplitude", d.d_perturb_amplitude),
            d_perturb_band=(
                tuple(_parse_floats(band_raw, "init.d_perturb_band")) if band_raw else d.d_perturb_band
            ),
            w0=tuple(_parse_floats(w0_raw, "init.w0")) if w0_raw else d.w0,
            normalize_d=_parse_bool(norm_raw, "init.normalize_d") if norm_raw else d.normalize_d,
            eta=num("physics", "eta", 1.0),
            smallness_budget=num("init", "smallness_budget", d.smallness_budget),
            phases=text_value("init", "phases", d.phases).lower(),
        )

        s = StepperConfig()
        stepper = StepperConfig(
            dt_init=num("stepper", "dt_init", s.dt_init),
            cfl_number=num("stepper", "cfl_number", s.cfl_number),
            dt_max=num("stepper", "dt_max", s.dt_max),
            t_end=num("stepper", "t_end", s.t_end),
            scheme=text_value("stepper", "scheme", s.scheme).lower(),
        )

        dg = DiagnosticsConfig()
        p_raw = get("diagnostics", "p_list")
        diags = DiagnosticsConfig(
            sample_interval=num("diagnostics", "sample_interval", dg.sample_interval),
            m_max=integer("diagnostics", "m_max", dg.m_max),
            p_list=tuple(_parse_floats(p_raw, "diagnostics.p_list")) if p_raw else dg.p_list,
            split_k_const=num("diagnostics", "split_k_const", dg.split_k_const),
        )

        f = FitConfig()
        t_hi_raw = get("fit", "t_hi")
        series_raw = get("fit", "series")
        fit = FitConfig(
            t_lo=num("fit", "t_lo", f.t_lo),
            t_hi=_parse_float(t_hi_raw, "fit.t_hi") if t_hi_raw else None,
            tol_l2=num("fit", "tol_l2", f.tol_l2),
            tol_linf=num("fit", "tol_linf", f.tol_linf),
            series=_parse_names(series_raw) if series_raw else f.series,
        )

        o = OutputConfig()
        directory = text_value("output", "directory", o.directory)
        if base_dir is not None and not Path(directory).is_absolute():
            directory = str((base_dir / directory).resolve())
        output = OutputConfig(
            directory=directory,
            checkpoint_interval=num("output", "checkpoint_interval", o.checkpoint_interval),
        )
    except ConfigError:
        raise
    except LcdSpectraError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc

    if len(init.u_shell) != 2:
        raise ConfigError("init.u_shell must have exactly two entries: k_lo, k_hi")
    if len(init.d_perturb_band) != 2:
        raise ConfigError("init.d_perturb_band must have exactly two entries: k_lo, k_hi")
    if output.checkpoint_interval < 0:
        raise ConfigError("output.checkpoint_interval must be >= 0")
    if fit.tol_l2 <= 0 or fit.tol_linf <= 0:
        raise ConfigError("fit.tol_l2 and fit.tol_linf must be positive")
    return RunConfig(
        grid=grid, physics=physics, init=init, stepper=stepper,
        diagnostics=diags, fit=fit, output=output,
    )


def parse_config(path: str | Path) -> RunConfig:
    """Read and parse a configuration file."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from exc
    return parse_config_text(text, base_dir=p.resolve().parent)
