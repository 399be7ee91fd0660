"""Stop training once E_k stays low, and see what that costs.

The rule fires when the last ``patience`` scores are all at or below
``threshold``. Here it is compared with simply running the full budget.
"""

from gdei import OptimizerConfig, RunConfig, StoppingConfig, generate_data, split, train

data = generate_data(n=2000, m=2, seed=7)
train_set, val_set = split(data, 0.2, seed=0)
opt = OptimizerConfig("gd", alpha=0.05)

full = train(train_set, RunConfig(opt, n_iterations=10_000, seed=3), validation=val_set)
print(f"full budget : {len(full.records):>6} iterations, train {full.final_loss:.5f}, "
      f"validation {full.validation_loss:.5f}")

for threshold, patience in [(10, 10), (5, 10), (3.5, 25), (3, 25)]:
    cfg = RunConfig(opt, n_iterations=10_000, seed=3, stopping=StoppingConfig(threshold, patience))
    tr = train(train_set, cfg, validation=val_set)
    saved = 1 - len(tr.records) / len(full.records)
    print(f"E<={threshold:<4} x{patience:<3}: stopped at {tr.stopped_at or '-':>6}, "
          f"train {tr.final_loss:.5f}, validation {tr.validation_loss:.5f}, {saved:.1%} of iterations saved")

# %% E_k cannot fall below about 100 * L_noise / L_initial, because the noise
# floor keeps P_k short of 1. A threshold below that floor never fires.
floor = 100 * full.final_loss / full.loss_initial
print(f"lowest attainable E_k here is about {floor:.2f}")
