"""Generate one noisy instance and compare the two estimators on it.

    python demos/01_fit_one_instance.py
"""

import numpy as np

from onebitboost import (
    BoostConfig,
    FeatureDistribution,
    GenSpec,
    generate_instance,
    iterations_rule,
    l1_margin,
    l2_direction_error,
    margin_of_best,
    prediction_error_gaussian,
    run_adaboost,
    solve_max_margin,
)

spec = GenSpec(n=200, p=2000, s=5, n_corrupt=10, distribution=FeatureDistribution.gaussian(), master_seed=7)
inst = generate_instance(spec)
print(f"n={inst.n} p={inst.p}, {inst.corruptions.size} flipped labels, "
      f"support of beta*: {np.flatnonzero(inst.ground_truth).tolist()}")

# Exact max-l1-margin: minimum l1-norm interpolator via the simplex method
sol = solve_max_margin(inst)
print(f"LP: status={sol.status} gamma={sol.margin:.5f} duality gap={sol.duality_gap:.1e} "
      f"({sol.iterations} pivots, {np.count_nonzero(np.abs(sol.beta_hat) > 1e-12)} nonzeros)")

# AdaBoost with the iteration count used in the simulations
T = iterations_rule(inst.n, spec.s, spec.n_corrupt, inst.p, 0.2)
model, traj = run_adaboost(inst, BoostConfig(learning_rate=0.2, max_iterations=T, record_every=500))
print(f"AdaBoost: T={T}, margin={l1_margin(inst, model.coefficients):.5f}, "
      f"ratio to gamma={margin_of_best(inst, model, sol):.3f}")

for name, beta in [("LP", sol.beta_hat), ("AdaBoost", model.coefficients)]:
    print(f"{name:>9}: prediction error {prediction_error_gaussian(beta, inst.ground_truth):.4f}, "
          f"l2 direction error {l2_direction_error(beta, inst.ground_truth):.4f}")
