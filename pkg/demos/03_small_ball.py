"""Small-ball probabilities P(|<X, v>| <= eps) for each feature law.

Continuous laws put mass of order eps near zero; Rademacher features
along (e1 + e2)/sqrt(2) hit exactly zero half the time.

    python demos/03_small_ball.py
"""

import math

import numpy as np

from onebitboost import FeatureDistribution, rng, student_dof
from onebitboost.datagen import draw_features
from onebitboost.metrics import empirical_small_ball

eps = np.array([0.01, 0.05, 0.1, 0.2])
laws = [
    FeatureDistribution.gaussian(),
    FeatureDistribution.student_t(student_dof(1000)),
    FeatureDistribution.uniform(),
    FeatureDistribution.laplace(),
    FeatureDistribution.rademacher(),
]
v = np.array([1.0, 1.0]) / math.sqrt(2)

print(f"{'law':>14} " + " ".join(f"eps={e:<5}" for e in eps))
for law in laws:
    X = draw_features(law, (200_000, 2), rng.stream(3))
    frac = empirical_small_ball(X, v, eps)
    print(f"{str(law):>14} " + " ".join(f"{f:9.4f}" for f in frac))

print(f"{'N(0,1) exact':>14} " + " ".join(f"{math.erf(e / math.sqrt(2)):9.4f}" for e in eps))
