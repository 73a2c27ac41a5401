"""Gagliardo-Nirenberg interpolation ratios measured on random fields.

For admissible (k, m, r, p, q) the ratio
    ||D^k w||_r / (||D^m w||_p^a ||w||_q^(1-a))
is bounded by a constant independent of w. Sampling it over random
band-limited fields gives an empirical floor for that constant; the test
suite pins these maxima as regression baselines.
"""

import numpy as np

from lcdspectra.diagnostics import gn_exponent, gn_ratio
from lcdspectra.errors import ParameterError
from lcdspectra.spectral import Grid, RealField, forward_transform

grid = Grid(2 * np.pi, 16)
rng = np.random.default_rng(0)

tuples = [
    (0, 2, np.inf, 2.0, 2.0),
    (1, 2, 2.0, 2.0, 2.0),
    (0, 1, 6.0, 2.0, 2.0),
    (1, 3, np.inf, 2.0, 2.0),
]

print(f"{'(k, m, r, p, q)':<28} {'a':>7} {'max ratio':>10} {'mean':>8}")
for k, m, r, p, q in tuples:
    a = gn_exponent(k, m, r, p, q)
    vals = []
    for i in range(60):
        w = forward_transform(RealField(grid, rng.standard_normal((1, 16, 16, 16))))
        vals.append(gn_ratio(w, k, m, r, p, q))
    label = f"({k}, {m}, {'inf' if r == np.inf else r:g}, {p:g}, {q:g})" if r != np.inf else f"({k}, {m}, inf, {p:g}, {q:g})"
    print(f"{label:<28} {a:>7.4f} {max(vals):>10.5f} {np.mean(vals):>8.5f}")

print("\ninadmissible tuples are rejected; the supremum case needs two derivatives in 3-D:")
try:
    gn_exponent(0, 1, np.inf, 2.0, 2.0)
except ParameterError as exc:
    print(f"  (0, 1, inf, 2, 2) -> {exc}")
