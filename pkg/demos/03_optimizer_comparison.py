"""Rank every optimizer variant by how quickly E_k drops.

All runs share the dataset and the initial parameters (same seed), so
the traces differ only in the update rule. "iters to E<=5" is the
first iteration whose E_k reaches 5, a proxy for when further training
stops paying off.
"""

import sys
from pathlib import Path

import numpy as np

from gdei import OptimizerConfig, RunConfig, compare, generate_data
from gdei.report import comparison_to_json, plot_efficiency_overlay

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent / "output"
out.mkdir(parents=True, exist_ok=True)

data = generate_data(n=1000, m=3, seed=42)  # two irrelevant features

setups = {
    "gd": OptimizerConfig("gd", alpha=0.05),
    "momentum": OptimizerConfig("momentum", alpha=0.05, beta=0.9),
    "nag": OptimizerConfig("nag", alpha=0.05, beta=0.9),
    "adagrad": OptimizerConfig("adagrad", alpha=0.5),
    "rmsprop": OptimizerConfig("rmsprop", alpha=0.01),
    "adam": OptimizerConfig("adam", alpha=0.1),
    "adamax": OptimizerConfig("adamax", alpha=0.1),
    "amsgrad": OptimizerConfig("amsgrad", alpha=0.1),
    "nadam": OptimizerConfig("nadam", alpha=0.1),
    "sgdr": OptimizerConfig("sgdr", alpha=0.1, restart_period=200, restart_mult=2),
}
report = compare(
    data,
    [RunConfig(cfg, n_iterations=3000, seed=1) for cfg in setups.values()],
    list(setups),
)

print(f"{'optimizer':<10} {'final loss':>12} {'final E_k':>10} {'iters to E<=5':>14}")
for label in report.labels():
    entry = report[label]
    e = entry.trace.efficiencies
    hit = np.flatnonzero(e <= 5.0)
    first = int(hit[0]) + 2 if hit.size else None
    print(f"{label:<10} {entry.summary.final_loss:12.6f} {entry.summary.final_efficiency:10.4f} "
          f"{first if first else '-':>14}")

# %% E_k is relative to each run's own first loss, so compare runs that share
# a dataset, a seed and a loss; the plot overlays all of them.
(out / "comparison.json").write_text(comparison_to_json(report))
(out / "comparison_efficiency.svg").write_text(
    plot_efficiency_overlay({lbl: report[lbl].trace for lbl in report.labels()})
)
print(f"wrote comparison.json and comparison_efficiency.svg to {out}")
