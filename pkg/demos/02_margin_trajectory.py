"""Watch AdaBoost's l1-margin climb towards the exact maximum.

With learning rate 1/6 the exponential loss never increases, and after
enough rounds the margin exceeds half of the LP optimum.

    python demos/02_margin_trajectory.py
"""

import numpy as np

from onebitboost import BoostConfig, FeatureDistribution, GenSpec, generate_instance, run_adaboost, solve_max_margin

inst = generate_instance(GenSpec(100, 1000, 5, 0, FeatureDistribution.gaussian(), 11))
gamma = solve_max_margin(inst).margin

model, traj = run_adaboost(inst, BoostConfig(learning_rate=1 / 6, max_iterations=12_000, record_every=1))
scale = model.feature_scale
# the trajectory is measured on features divided by `scale`, so compare to gamma / scale
margins = traj.column("margin") * scale
loss = traj.column("loss")

print(f"gamma = {gamma:.5f}")
print(f"{'t':>6} {'margin':>9} {'ratio':>6} {'loss':>10}")
for t in (1, 10, 100, 500, 1000, 2000, 4000, 8000, 12000):
    print(f"{t:>6} {margins[t - 1]:>9.5f} {margins[t - 1] / gamma:>6.3f} {loss[t - 1]:>10.3e}")

print("loss non-increasing:", bool(np.all(np.diff(loss) <= 1e-12)))
crossing = np.flatnonzero(margins >= gamma / 2)
print("first t with margin >= gamma/2:", int(crossing[0]) + 1 if crossing.size else "never")
