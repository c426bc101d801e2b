"""Evaluation quantities for a fitted direction against the ground truth."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import rng
from .core import DomainError, sgn
from .datagen import FeatureDistribution, distribution_of, draw_features

logger = logging.getLogger(__name__)

DEFAULT_MC_SAMPLES = 100_000
_MC_BATCH_ENTRIES = 4_000_000


@dataclass(frozen=True)
class MetricsRecord:
    estimator_tag: str
    prediction_error: float
    prediction_error_method: str  # "closed_form_gaussian" or "monte_carlo(<m>)"
    l2_direction_error: float
    margin: float
    margin_ratio: Optional[float]
    loss: float
    wall_time_ms: int = 0

    def __post_init__(self):
        if not 0.0 <= self.prediction_error <= 1.0:
            raise ValueError("prediction_error must lie in [0, 1]")
        if not 0.0 <= self.l2_direction_error <= 2.0:
            raise ValueError("l2_direction_error must lie in [0, 2]")


def _direction(model):
    beta = np.asarray(getattr(model, "coefficients", model), dtype=np.float64)
    norm = np.linalg.norm(beta)
    if norm == 0.0:
        raise DomainError("model coefficients are all zero")
    return beta / norm


def prediction_error_gaussian(model, ground_truth):
    """arccos(<beta/|beta|, beta*>) / pi, exact for standard Gaussian features."""
    cos = float(np.clip(_direction(model) @ np.asarray(ground_truth, dtype=np.float64), -1.0, 1.0))
    return math.acos(cos) / math.pi


def prediction_error_mc(model, ground_truth, distribution, m, gen, standardize_laplace=False):
    """Monte Carlo estimate of P(sgn<X, beta> != sgn<X, beta*>).

    Returns ``(estimate, std_error)``.  Only coordinates in the union of
    the two supports are drawn (the others cannot change either sign).
    A zero projection on one side only counts as a mismatch.
    """
    if m < 1:
        raise ValueError("need at least one Monte Carlo sample")
    beta = _direction(model)
    truth = np.asarray(ground_truth, dtype=np.float64)
    if isinstance(distribution, str):
        distribution = FeatureDistribution(distribution)
    support = np.flatnonzero((beta != 0) | (truth != 0))
    b, t = beta[support], truth[support]
    batch = max(1, _MC_BATCH_ENTRIES // max(1, support.size))
    mismatches = ties = 0
    done = 0
    while done < m:
        k = min(batch, m - done)
        X = draw_features(distribution, (k, support.size), gen, standardize_laplace)
        s1, s2 = sgn(X @ b), sgn(X @ t)
        mismatches += int(np.count_nonzero(s1 != s2))
        ties += int(np.count_nonzero((s1 == 0) | (s2 == 0)))
        done += k
    if ties:
        logger.info("prediction_error_mc: %d zero projections among %d draws", ties, m)
    est = mismatches / m
    return est, math.sqrt(est * (1.0 - est) / m)


def l2_direction_error(model, ground_truth):
    """|| beta/||beta||_2 - beta* ||_2."""
    diff = _direction(model) - np.asarray(ground_truth, dtype=np.float64)
    return float(min(np.linalg.norm(diff), 2.0))


def empirical_small_ball(features, direction, eps_grid):
    """Fraction of rows with |<X_i, direction>| <= eps, for each eps."""
    proj = np.abs(np.asarray(features, dtype=np.float64) @ np.asarray(direction, dtype=np.float64))
    proj.sort()
    eps = np.asarray(eps_grid, dtype=np.float64)
    return np.searchsorted(proj, eps, side="right") / proj.size


def prediction_error(instance, model, m=DEFAULT_MC_SAMPLES, gen=None):
    """Closed form for Gaussian instances, Monte Carlo otherwise.

    Returns ``(value, method)``.
    """
    if instance.ground_truth is None:
        raise DomainError("instance has no ground truth")
    if instance.distribution == "gaussian":
        return prediction_error_gaussian(model, instance.ground_truth), "closed_form_gaussian"
    dist, standardize = distribution_of(instance)
    if gen is None:
        gen = rng.substream(instance.seed, rng.EVALUATION)
    est, _ = prediction_error_mc(model, instance.ground_truth, dist, m, gen, standardize)
    return est, f"monte_carlo({m})"
