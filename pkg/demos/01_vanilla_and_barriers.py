# %% [markdown]
# Vanilla and hard-barrier calls
# ==============================
# Black-Scholes in closed form and as a kernel integral, then the up-and-out
# and double knock-out calls used as limits for the step options.

# %%
import math

from stepoptions import (MarketParams, StepOptionSpec, bs_call_closed, bs_call_kernel,
                         sdb_price, uosb_price)

mp = MarketParams(r=0.05, sigma=0.3)
print("closed form :", bs_call_closed(mp, 110.0, 100.0, 1.0))
print("kernel form :", bs_call_kernel(mp, 110.0, 100.0, 1.0))

# %% barriers at 90 and 130, given as log-prices
lower, upper = math.log(90.0), math.log(130.0)
x = math.log(110.0)
up_out = StepOptionSpec("uosb", 100.0, 1.0, upper=upper)
double = StepOptionSpec("sdb", 100.0, 1.0, upper=upper, lower=lower)
print("up-and-out  :", uosb_price(mp, x, up_out))
print("double KO   :", sdb_price(mp, x, double))

# %% knocking out can only remove value
for s in (95.0, 110.0, 125.0):
    x = math.log(s)
    print(f"S={s:5.1f}  vanilla={bs_call_closed(mp, s, 100.0, 1.0):8.4f}  "
          f"up-out={uosb_price(mp, x, up_out):7.4f}  double={sdb_price(mp, x, double):7.4f}")
