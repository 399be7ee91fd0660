"""The efficiency index on hand-picked losses.

E_k = 100 - min(100, max(1, 100 * P_k / (1 + ln(1 + D_k^2))))

P_k is the share of the first loss that is gone by iteration k, D_k the
size of the last loss change. Low scores mean "little left to gain, and
the run is calm"; the clamps keep every score in [0, 99].
"""

from gdei import EfficiencyInputs, efficiency_from_losses, efficiency_score

# %% A stalled run scores 99: nothing has been removed yet.
print("stalled      ", efficiency_from_losses(EfficiencyInputs(10.0, 10.0, 10.0)))

# %% A run that has hit zero loss and stopped moving scores 0.
print("converged    ", efficiency_from_losses(EfficiencyInputs(10.0, 0.0, 0.0)))

# %% Half the loss removed, but the last step moved the loss by 1:
# the log term in the denominator damps the credit for progress.
print("half, jumpy  ", efficiency_from_losses(EfficiencyInputs(10.0, 6.0, 5.0)))
print("half, smooth ", efficiency_from_losses(EfficiencyInputs(10.0, 5.01, 5.0)))

# %% If the loss rises above where it started, P_k < 0 and the lower
# clamp pins the score at 99.
print("worse        ", efficiency_from_losses(EfficiencyInputs(10.0, 11.0, 12.0)))

# %% Sweep P_k at a few instability levels.
print("\n P_k   " + "".join(f"D={d:<8g}" for d in (0, 0.5, 2, 10)))
for p in (0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0):
    row = "".join(f"{efficiency_score(p, d):<10.3f}" for d in (0, 0.5, 2, 10))
    print(f" {p:<5} {row}")
