# %% [markdown]
# Bound states of the double-barrier well
# =======================================
# Exact levels come from bisection on the matching condition.  Two closed
# forms approximate them: one for low levels, one for levels near the rim.

# %%
import math

import numpy as np

from stepoptions import (MarketParams, WellGeometry, build_spectrum, eval_wavefunction,
                         exact_mode, n_max, partition)
from stepoptions.spectrum import low_error_formula, measured_errors

mp = MarketParams(r=0.05, sigma=0.3)

# %% how many levels each depth holds, and which formula each level gets
for v0 in (55.0, 26.0, 13.0):
    g = WellGeometry.from_market(mp, math.log(90.0), math.log(130.0), v0)
    print(f"v0={v0:4g} beta={g.beta:6.2f} n_max={n_max(g)} {partition(g)}")

# %% measured errors of the two formulas against the exact roots
g = WellGeometry.from_market(mp, math.log(90.0), math.log(130.0), 55.0)
print(" n   exact k1   low err   high err  low formula")
for n in range(1, n_max(g) + 1):
    low, high = measured_errors(g, n)
    print(f"{n:2d} {exact_mode(g, n).k1:10.5f} {low:9.2e} {high:9.2e} {low_error_formula(g, n):9.2e}")

# %% wavefunctions leak past the walls at rate k2
grid = np.linspace(g.a - 0.1, g.b + 0.1, 9)
for m in build_spectrum(g, "exact"):
    print(m.n, m.parity.value, np.round(eval_wavefunction(m, g, grid), 3))
