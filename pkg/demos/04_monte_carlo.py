# %% [markdown]
# Monte Carlo cross-check
# =======================
# Simulate daily log-price steps, accumulate time spent outside the live
# region and discount the payoff by exp(-v0 * time outside).

# %%
import math

from stepoptions import (MarketParams, PathConfig, StepOptionSpec, bs_call_closed,
                         mc_convergence_report, mc_price, pdbs_price, pso_price)

mp = MarketParams(r=0.05, sigma=0.3)
x = math.log(110.0)
pc = PathConfig(n_paths=100_000, seed=11)

# %%
vanilla = StepOptionSpec("vanilla", 100.0, 1.0)
est = mc_price(mp, vanilla, x, pc)
print(f"vanilla mc={est.mean:.4f} +- {est.std_error:.4f}  exact={bs_call_closed(mp, 110, 100, 1):.4f}")

# %% caption geometry of the figures
pso = StepOptionSpec("pso", 100.0, 1.0, upper=4.867, v0=55.0)
pdbs = StepOptionSpec("pdbs", 100.0, 1.0, upper=4.867, lower=4.5, v0=55.0)
for spec, fn in ((pso, pso_price), (pdbs, pdbs_price)):
    est = mc_price(mp, spec, x, pc)
    print(f"{spec.kind.value:5s} mc={est.mean:.4f} +- {est.std_error:.4f}  analytic={fn(mp, spec, x).price:.4f}")

# %% standard error shrinks like 1/sqrt(n)
for n, mean, se in mc_convergence_report(mp, vanilla, x, pc, [10_000, 40_000, 160_000]):
    print(f"{n:7d} {mean:.4f} {se:.4f}")
