"""AdaBoost and max-l1-margin estimators for robust one-bit compressed sensing.

Modules
-------
core       domain types (Instance, Model, Trajectory), sgn, l1-margin, exp-loss
rng        seed derivation and Philox streams
datagen    synthetic instances: feature laws, sparse ground truth, corruptions
boost      AdaBoost over the canonical basis with the quadratic stepsize
simplex    dense revised simplex (two-phase primal and dual)
lpmargin   exact max-l1-margin with dual certificates
metrics    prediction / direction errors and small-ball diagnostics
oracle     brute-force references for tests
harness    experiment plans, replication runs, CSV tables
plotting   deterministic SVG panels
io         MBCS1 / CSV instance files, model JSON, trajectory CSV
"""

from .boost import BoostConfig, iterations_rule, rescale_features, run_adaboost
from .core import Instance, Model, Trajectory, exp_loss, l1_margin, sgn
from .datagen import FeatureDistribution, GenSpec, generate_instance, student_dof
from .lpmargin import LpSolution, dual_value, margin_of_best, solve_max_margin
from .metrics import (
    empirical_small_ball,
    l2_direction_error,
    prediction_error_gaussian,
    prediction_error_mc,
)

__version__ = "0.1.0"
