"""Train plain gradient descent and watch E_k fall.

Reproduces the two standard pictures: the loss collapsing in the first
hundred steps and then flattening, and the efficiency curve drifting
down as each extra iteration buys less. SVGs go to ``demos/output``
unless a directory is given on the command line.
"""

import sys
from pathlib import Path

from gdei import OptimizerConfig, RunConfig, generate_data, train
from gdei.report import plot_efficiency_curve, plot_loss_curve, trace_to_csv

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent / "output"
out.mkdir(parents=True, exist_ok=True)

# %% y = 4 + 3*x1 + N(0, 1) with x uniform on [0, 2)
data = generate_data(n=1000, m=1, seed=42)

# %% Full-batch GD, fixed learning rate
trace = train(data, RunConfig(OptimizerConfig("gd", alpha=0.05), n_iterations=10_000, seed=42))
print(f"L_initial = {trace.loss_initial:.4f}   final loss = {trace.final_loss:.6f}")
print(f"theta = {trace.final_model.theta}")

# %% E_k at a few checkpoints. It drops fast, then barely moves: the last
# few thousand iterations change almost nothing.
for k in (2, 5, 10, 20, 50, 100, 1000, 10_000):
    r = trace.records[k - 1]
    print(f"k={k:>6}  loss={r.loss:10.6f}  P_k={r.efficiency.p_k:.5f}  E_k={r.efficiency.e_k:8.4f}")

# %% Loss at two zoom levels, plus the efficiency curve
(out / "gd_loss.svg").write_text(plot_loss_curve(trace, [100, 10_000]))
(out / "gd_loss_log.svg").write_text(plot_loss_curve(trace, [100, 10_000], log_y=True))
(out / "gd_efficiency.svg").write_text(plot_efficiency_curve(trace))
(out / "gd_trace.csv").write_text(trace_to_csv(trace))
print(f"wrote plots and trace to {out}")
