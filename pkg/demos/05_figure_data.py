# %% [markdown]
# Figure data
# ===========
# The CLI presets produce plot-ready CSV.  Here the same sweeps run in
# process and the files land in $STEPOPTIONS_OUTPUT_DIR (or the cwd).

# %%
import os
from pathlib import Path

from stepoptions import cli

out = Path(os.environ.get(cli.OUTPUT_DIR_ENV, "."))
for name in ("fig1", "fig2", "fig3", "fig4"):
    text = cli.cmd_sweep(cli.preset_config(name))
    path = out / f"{name}.csv"
    path.write_text(text, encoding="utf-8")
    print(f"{path}: {text.count(chr(10)) - 1} rows")

# %% the same thing from a shell:
#   stepoptions sweep --preset fig1 --out fig1.csv
#   stepoptions table2
#   stepoptions validate --quick
