"""Run orchestration: configs to time series, checkpoints, fits, verdicts.

A run writes into its output directory:

    series.csv    one DiagnosticsRecord per sample row (documented columns)
    summary.json  power-law fits, theory verdicts, smallness report
    checkpoint_t*.bin  on the configured cadence

Reruns of the same config are byte-identical. Exit codes: 0 pass,
2 theory-comparison fail, 1 error.
"""

from __future__ import annotations

import configparser
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .checkpoint import load_checkpoint, save_checkpoint
from .config import RunConfig, parse_config
from .decay import (
    ExpectationTable,
    NormSeries,
    compare_to_theory,
    default_expectations,
    fit_power_law,
)
from .diagnostics import DiagnosticsConfig, collect, record_columns
from .dynamics import State
from .errors import BlowUpError, CheckpointError, ConfigError, LcdSpectraError
from .initdata import make_director, make_velocity, smallness_report
from .spectral import Grid
from .stepping import Hook, integrate

__all__ = [
    "RunOutcome",
    "build_initial_state",
    "run_config",
    "resume_config",
    "write_series",
    "read_series",
    "refit_series",
    "run_sweep",
]

_DERIVATIVE_NOTE = (
    "Predicted exponents for derivative series govern the top-order derivative norm; "
    "a full Sobolev sum is dominated by its slowest, lowest-order term and is not asserted."
)


@dataclass
class RunOutcome:
    exit_code: int
    summary: dict | None = None
    series_path: Path | None = None
    summary_path: Path | None = None
    message: str = ""


def build_initial_state(cfg: RunConfig) -> tuple[State, float]:
    """Construct the seeded initial state and its smallness report."""
    grid = Grid(cfg.grid.length, cfg.grid.n)
    u0 = make_velocity(cfg.init, grid)
    dev0 = make_director(cfg.init, grid)
    smallness = smallness_report(u0, dev0, cfg.init.eta, grid)
    return State(u0, dev0, cfg.init.w0_array, 0.0), smallness


def write_series(path: Path, records: list, diag_cfg: DiagnosticsConfig) -> None:
    """Write samples as CSV with the stable documented column order."""
    cols = record_columns(diag_cfg.m_max, diag_cfg.p_list)
    lines = [",".join(cols)]
    for rec in records:
        row = rec.as_row()
        if len(row) != len(cols):
            raise LcdSpectraError(
                f"diagnostics row has {len(row)} values for {len(cols)} columns"
            )
        lines.append(",".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n")


def read_series(path: Path | str) -> dict[str, np.ndarray]:
    """Read a series.csv back into named columns."""
    text = Path(path).read_text().strip().splitlines()
    if not text:
        raise ConfigError(f"series file {path} is empty")
    cols = text[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in text[1:]])
    if data.size == 0:
        return {c: np.empty(0) for c in cols}
    return {c: data[:, i] for i, c in enumerate(cols)}


def _expectations_for_columns(cols) -> ExpectationTable:
    p_list = []
    for c in cols:
        if c.startswith("lp_dev_d_p") and not c.endswith("pinf"):
            tag = c[len("lp_dev_d_p"):]
            p_list.append(float(tag.replace("_", ".")))
    return default_expectations(m_max=4, p_list=tuple(p_list) or (2.0, 4.0, 7.0))


def _fit_and_judge(
    columns: dict[str, np.ndarray],
    series_names,
    window: tuple[float, float],
    tol_l2: float,
    tol_linf: float,
    extra: dict | None = None,
) -> dict:
    table = _expectations_for_columns(columns.keys())
    t = columns["t"]
    fits_l2, fits_linf, degenerate = [], [], []
    for name in series_names:
        if name not in columns:
            raise ConfigError(f"fit series {name!r} is not a diagnostics column")
        v = columns[name]
        sel = (t >= window[0]) & (t <= window[1])
        if np.count_nonzero(sel) < 8:
            degenerate.append({"series": name, "reason": "fewer than 8 samples in window"})
            continue
        if np.any(v[sel] <= 0):
            degenerate.append({"series": name, "reason": "nonpositive values in window"})
            continue
        pos = v > 0
        fit = fit_power_law(NormSeries(name, t[pos], v[pos]), window)
        (fits_linf if name.startswith("linf") else fits_l2).append(fit)

    rows = []
    overall = True
    for fits, tol in ((fits_l2, tol_l2), (fits_linf, tol_linf)):
        if fits:
            report = compare_to_theory(fits, table, tol)
            rows.extend(report["series"])
            overall = overall and report["overall_pass"]
    summary = {
        "window": [window[0], window[1]],
        "tol_l2": tol_l2,
        "tol_linf": tol_linf,
        "fits": rows,
        "degenerate": degenerate,
        "overall_pass": overall,
        "note": _DERIVATIVE_NOTE,
    }
    if extra:
        summary.update(extra)
    return summary


def _checkpoint_name(t: float) -> str:
    return f"checkpoint_t{t:014.6f}.bin"


def _execute(cfg: RunConfig, state: State, smallness: float | None) -> RunOutcome:
    outdir = Path(cfg.output.directory)
    outdir.mkdir(parents=True, exist_ok=True)
    series_path = outdir / "series.csv"
    summary_path = outdir / "summary.json"

    records: list = []
    hooks = [
        Hook(cfg.diagnostics.sample_interval, lambda s: records.append(
            collect(s, cfg.physics, cfg.diagnostics)
        ))
    ]
    checkpoints: list[Path] = []
    if cfg.output.checkpoint_interval > 0:

        def save_ck(s: State) -> None:
            path = outdir / _checkpoint_name(s.time)
            save_checkpoint(path, s, cfg.physics)
            checkpoints.append(path)

        hooks.append(Hook(cfg.output.checkpoint_interval, save_ck))

    try:
        integrate(state, cfg.physics, cfg.stepper, hooks)
    except BlowUpError as exc:
        write_series(series_path, records, cfg.diagnostics)
        last = str(checkpoints[-1]) if checkpoints else None
        exc.checkpoint_path = last
        msg = f"blow-up: {exc}; last checkpoint: {last or 'none written'}"
        summary = {"error": msg, "overall_pass": False}
        summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        return RunOutcome(1, summary, series_path, summary_path, msg)

    write_series(series_path, records, cfg.diagnostics)
    columns = read_series(series_path)
    extra: dict = {}
    if smallness is not None:
        extra = {
            "smallness": smallness,
            "smallness_budget": cfg.init.smallness_budget,
            "smallness_ok": smallness <= cfg.init.smallness_budget,
        }
    summary = _fit_and_judge(
        columns, cfg.fit.series, cfg.fit_window, cfg.fit.tol_l2, cfg.fit.tol_linf, extra
    )
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return RunOutcome(
        0 if summary["overall_pass"] else 2,
        summary,
        series_path,
        summary_path,
        "pass" if summary["overall_pass"] else "theory comparison failed",
    )


def run_config(cfg: RunConfig) -> RunOutcome:
    """Execute one run from scratch."""
    state, smallness = build_initial_state(cfg)
    return _execute(cfg, state, smallness)


def resume_config(checkpoint_path: str | Path, cfg: RunConfig) -> RunOutcome:
    """Continue a run from a checkpoint; config grid/physics must match it."""
    state, params_ck, header = load_checkpoint(checkpoint_path)
    if header.n != cfg.grid.n or abs(header.length - cfg.grid.length) > 1e-12 * cfg.grid.length:
        raise CheckpointError(
            f"checkpoint grid (N={header.n}, L={header.length:g}) does not match "
            f"config (N={cfg.grid.n}, L={cfg.grid.length:g})"
        )
    if abs(params_ck.eta - cfg.physics.eta) > 1e-12 or abs(params_ck.nu - cfg.physics.nu) > 1e-12:
        raise CheckpointError(
            f"checkpoint physics (eta={params_ck.eta:g}, nu={params_ck.nu:g}) does not match "
            f"config (eta={cfg.physics.eta:g}, nu={cfg.physics.nu:g})"
        )
    return _execute(cfg, state, None)


def refit_series(
    series_path: str | Path,
    window: tuple[float, float],
    tol_l2: float = 0.5,
    tol_linf: float = 0.3,
    series_names=None,
    out_path: str | Path | None = None,
) -> RunOutcome:
    """Re-fit an existing series.csv over a new window."""
    columns = read_series(series_path)
    if series_names is None:
        from .config import DEFAULT_FIT_SERIES

        series_names = [n for n in DEFAULT_FIT_SERIES if n in columns]
    summary = _fit_and_judge(columns, series_names, window, tol_l2, tol_linf)
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    written = None
    if out_path is not None:
        written = Path(out_path)
        written.write_text(text)
    return RunOutcome(
        0 if summary["overall_pass"] else 2,
        summary,
        Path(series_path),
        written,
        "pass" if summary["overall_pass"] else "theory comparison failed",
    )


def _sweep_entry(args: tuple[str, str]) -> tuple[str, int, bool, str]:
    tag, cfg_path = args
    try:
        outcome = run_config(parse_config(cfg_path))
        overall = bool(outcome.summary.get("overall_pass", False)) if outcome.summary else False
        return tag, outcome.exit_code, overall, str(outcome.summary_path or "")
    except LcdSpectraError as exc:
        return tag, 1, False, f"error: {exc}"


def run_sweep(sweep_path: str | Path, workers: int | None = None) -> tuple[int, dict]:
    """Run the cartesian product of parameter overrides over a base config.

    Sweep file grammar:

        [sweep]
        base = desk.cfg          # base run config, relative to this file
        output = runs/sweep      # parent directory for per-combo outputs
        workers = 1              # optional parallel workers (processes)

        [vary]
        physics.eta = 0.5, 1.0
        init.u_amplitude = 0.03, 0.06

    Individual run failures are recorded and the sweep continues; the exit
    code is 1 if any run errored, else 2 if any failed its verdict, else 0.
    """
    sweep_path = Path(sweep_path)
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(sweep_path.read_text())
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read sweep config {sweep_path}: {exc}") from exc
    if not cp.has_section("sweep") or not cp.has_option("sweep", "base"):
        raise ConfigError("sweep config needs [sweep] base = <run config path>")
    base_dir = sweep_path.resolve().parent
    base_path = Path(cp.get("sweep", "base"))
    if not base_path.is_absolute():
        base_path = base_dir / base_path
    out_parent = Path(cp.get("sweep", "output", fallback="sweep_out"))
    if not out_parent.is_absolute():
        out_parent = base_dir / out_parent
    if workers is None:
        workers = cp.getint("sweep", "workers", fallback=1)

    vary: dict[str, list[str]] = {}
    if cp.has_section("vary"):
        for key, raw in cp.items("vary"):
            if "." not in key:
                raise ConfigError(f"[vary] keys must look like section.key, got {key!r}")
            vals = [v.strip() for v in raw.split(",") if v.strip()]
            if not vals:
                raise ConfigError(f"[vary] {key} has no values")
            vary[key] = vals

    base_text = base_path.read_text()
    keys = sorted(vary)
    combos = list(itertools.product(*(vary[k] for k in keys))) if keys else [()]
    jobs: list[tuple[str, str]] = []
    params_by_tag: dict[str, dict] = {}
    for combo in combos:
        tag = "-".join(f"{k.split('.', 1)[1]}={v}" for k, v in zip(keys, combo)) or "base"
        tag = tag.replace("/", "_").replace(" ", "")
        combo_dir = out_parent / tag
        combo_dir.mkdir(parents=True, exist_ok=True)
        cpc = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        cpc.read_string(base_text)
        for k, v in zip(keys, combo):
            section, option = k.split(".", 1)
            if not cpc.has_section(section):
                cpc.add_section(section)
            cpc.set(section, option, v)
        if not cpc.has_section("output"):
            cpc.add_section("output")
        cpc.set("output", "directory", str(combo_dir))
        cfg_path = combo_dir / "config.cfg"
        with open(cfg_path, "w") as fh:
            cpc.write(fh)
        parse_config(cfg_path)  # fail fast on bad combos before launching
        jobs.append((tag, str(cfg_path)))
        params_by_tag[tag] = dict(zip(keys, combo))

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_entry, jobs))
    else:
        results = [_sweep_entry(j) for j in jobs]

    report: dict = {"base": str(base_path), "runs": {}}
    any_error = any_fail = False
    for tag, code, overall, detail in results:
        report["runs"][tag] = {
            "params": params_by_tag[tag],
            "exit_code": code,
            "overall_pass": overall,
            "detail": detail,
        }
        any_error = any_error or code == 1
        any_fail = any_fail or code == 2
    out_parent.mkdir(parents=True, exist_ok=True)
    (out_parent / "sweep_report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n"
    )
    return (1 if any_error else 2 if any_fail else 0), report
