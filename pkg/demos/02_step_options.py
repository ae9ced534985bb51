# %% [markdown]
# Step options
# ============
# A proportional step call loses value at rate v0 for every year the spot
# spends beyond the barrier.  As v0 grows the price falls from the vanilla
# value towards the hard-barrier value.

# %%
import math

from stepoptions import (MarketParams, StepOptionSpec, bs_call_closed, daily_knockout_factor,
                         pdbs_price, pso_price, sdb_price, uosb_price)

mp = MarketParams(r=0.05, sigma=0.3)
lower, upper = math.log(90.0), math.log(130.0)
x = math.log(110.0)

# %% a rate of 55 per year keeps about 80% of the value per trading day outside
for v0 in (13.0, 26.0, 55.0):
    print(f"v0={v0:4.0f}  daily factor={daily_knockout_factor(v0):.4f}")

# %% single barrier: components split by where the terminal price lands
print("vanilla", bs_call_closed(mp, 110.0, 100.0, 1.0))
for v0 in (13.0, 26.0, 55.0, 1e3):
    res = pso_price(mp, StepOptionSpec("pso", 100.0, 1.0, upper=upper, v0=v0), x)
    print(f"pso v0={v0:6g}: {res.price:.5f}  {res.components}")
print("up-and-out", uosb_price(mp, x, StepOptionSpec("uosb", 100.0, 1.0, upper=upper)))

# %% double barrier: a finite square well, priced from its bound states
for v0 in (13.0, 26.0, 55.0):
    spec = StepOptionSpec("pdbs", 100.0, 1.0, upper=upper, lower=lower, v0=v0)
    mixed = pdbs_price(mp, spec, x)
    exact = pdbs_price(mp, spec, x, spectrum="exact")
    print(f"pdbs v0={v0:4g}: mixed={mixed.price:.5f} exact={exact.price:.5f} "
          f"levels={mixed.diagnostics['n_max']}")
print("double KO", sdb_price(mp, x, StepOptionSpec("sdb", 100.0, 1.0, upper=upper, lower=lower)))
