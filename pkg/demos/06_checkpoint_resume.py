"""Checkpoint / resume: a split run reproduces the unsplit one exactly.

Runs a short simulation twice: once straight through, once as two halves
joined by a binary checkpoint, then diffs the diagnostic series.
"""

import tempfile
from pathlib import Path

import numpy as np

from lcdspectra.config import parse_config_text
from lcdspectra.harness import read_series, resume_config, run_config

CONFIG = """
[grid]
L = 4pi
N = 16

[init]
seed = 13
u_amplitude = 0.1
u_shell = 0.0, 2.0
d_perturb_amplitude = 0.05
d_perturb_band = 0.0, 2.0

[stepper]
dt_init = 0.05
dt_max = 0.05
t_end = {t_end}

[diagnostics]
sample_interval = 0.1

[output]
directory = {outdir}
checkpoint_interval = {ck}
"""

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    full = run_config(parse_config_text(CONFIG.format(t_end=1.0, outdir=tmp / "full", ck=0.5)))
    part1 = run_config(parse_config_text(CONFIG.format(t_end=0.5, outdir=tmp / "part1", ck=0.5)))
    ck = tmp / "part1" / "checkpoint_t0000000.500000.bin"
    print(f"checkpoint written: {ck.name} ({ck.stat().st_size} bytes)")
    part2 = resume_config(ck, parse_config_text(CONFIG.format(t_end=1.0, outdir=tmp / "part2", ck=0.0)))

    full_cols = read_series(full.series_path)
    part_cols = read_series(part2.series_path)
    sel = full_cols["t"] >= 0.5 - 1e-12
    worst = 0.0
    for name, col in full_cols.items():
        denom = np.maximum(np.abs(col[sel]), 1e-300)
        worst = max(worst, float(np.max(np.abs(col[sel] - part_cols[name]) / denom)))
    print(f"samples compared: {int(np.count_nonzero(sel))} per column, {len(full_cols)} columns")
    print(f"largest relative difference split vs unsplit: {worst:.3e}")
