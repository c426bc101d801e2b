"""AdaBoost over the canonical basis with the quadratic adaptive stepsize.

Each iteration reweights the samples by their exponential loss, picks the
coordinate with the largest absolute weighted label-feature correlation,
and moves that coordinate by ``learning_rate * alpha`` where ``alpha`` is
the *signed* correlation.  Features are first divided by their largest
absolute entry.

Implementation notes:

* weights are computed as a softmax of the negated scores
  ``m_i = -y_i <X_i, beta>`` (max subtracted before exponentiating);
* scores are updated in O(n) per step from the single touched column and
  recomputed from scratch every ``REFRESH_EVERY`` iterations;
* argmax ties go to the lowest column index (``np.argmax`` semantics);
* a zero stepsize is recorded and iteration continues, there is no early
  stopping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DegenerateInputError,
    InvalidSpecError,
    IterationRecord,
    Model,
    NumericalFailure,
    Trajectory,
    linf_norm,
)

REFRESH_EVERY = 512


@dataclass(frozen=True)
class BoostConfig:
    learning_rate: float = 0.2
    max_iterations: int = 1000
    record_every: int = 1
    weight_floor: float = 0.0

    def __post_init__(self):
        if not 0 < self.learning_rate < 1:
            raise InvalidSpecError("learning_rate must lie in (0, 1)")
        if self.max_iterations < 0:
            raise InvalidSpecError("max_iterations must be nonnegative")
        if self.record_every < 1:
            raise InvalidSpecError("record_every must be positive")
        if self.weight_floor < 0:
            raise InvalidSpecError("weight_floor must be nonnegative")

    @property
    def has_margin_guarantee(self):
        return self.learning_rate <= 1 / 6


class BoostState:
    """Mutable per-run state: coefficients, iteration counter, cached scores."""

    def __init__(self, features, labels, scale):
        self.features = features
        self.features_t = np.ascontiguousarray(features.T)
        self.labels = labels
        self.scale = scale
        self.coefficients = np.zeros(features.shape[1])
        self.iteration = 0
        self.scores = np.zeros(features.shape[0])  # m_i = -y_i <X_i, beta>
        self.l1_norm = 0.0

    def refresh(self):
        self.scores = -self.labels * (self.features @ self.coefficients)
        self.l1_norm = float(np.abs(self.coefficients).sum())

    def loss(self):
        return float(np.mean(np.exp(np.minimum(self.scores, 700.0))))

    def margin(self):
        if self.l1_norm == 0.0:
            return float("nan")
        return float(-np.max(self.scores) / self.l1_norm)


def rescale_features(features):
    """Divide by the max absolute entry; returns ``(rescaled, scale)``."""
    X = np.asarray(features, dtype=np.float64)
    scale = linf_norm(X)
    if scale == 0.0:
        raise DegenerateInputError("feature matrix is identically zero")
    return X / scale, scale


def sample_weights(scores, weight_floor=0.0):
    z = scores - np.max(scores)
    w = np.exp(z)
    total = w.sum()
    if weight_floor > 0:
        w = np.maximum(w / total, weight_floor)
        total = w.sum()
    return w / total, total


def boost_step(state, learning_rate, weight_floor=0.0):
    """Advance ``state`` by one iteration in place and return its record."""
    t = state.iteration + 1
    w, total = sample_weights(state.scores, weight_floor)
    if not math.isfinite(total) or not np.all(np.isfinite(w)):
        raise NumericalFailure(f"non-finite weight normalizer at iteration {t}", iteration=t)
    corr = state.features_t @ (w * state.labels)
    j = int(np.argmax(np.abs(corr)))
    alpha = float(corr[j])
    step = learning_rate * alpha
    if step != 0.0:
        old = state.coefficients[j]
        state.coefficients[j] = old + step
        state.l1_norm += abs(old + step) - abs(old)
        state.scores -= step * state.labels * state.features_t[j]
    state.iteration = t
    if t % REFRESH_EVERY == 0:
        state.refresh()
    sign = 1 if alpha > 0 else (-1 if alpha < 0 else 0)
    return IterationRecord(t=t, coordinate=j, sign=sign, alpha=alpha,
                           loss=state.loss(), margin=state.margin())


def run_adaboost(instance, config, trajectory=True):
    """Run ``config.max_iterations`` boosting steps on ``instance``.

    Returns ``(Model, Trajectory)``.  Coefficients are those produced on
    the rescaled features; the scale is stored in ``Model.feature_scale``.
    The trajectory margin and loss are measured on the rescaled features.
    """
    X, scale = rescale_features(instance.features)
    state = BoostState(X, np.asarray(instance.labels, dtype=np.float64), scale)
    traj = Trajectory()
    T = config.max_iterations
    for t in range(1, T + 1):
        rec = boost_step(state, config.learning_rate, config.weight_floor)
        if trajectory and (t % config.record_every == 0 or t == T):
            traj.records.append(rec)
    model = Model(
        coefficients=state.coefficients,
        estimator_tag="adaboost",
        iterations=T,
        learning_rate=config.learning_rate,
        feature_scale=scale,
        degenerate=not np.any(state.coefficients),
    )
    return model, traj


def iterations_rule(n, s, n_corrupt, p, learning_rate):
    """ceil((n sqrt(s + |O|))^(2/3) ln(p) / eps^2), the simulation iteration count."""
    if min(n, s, p) <= 0 or n_corrupt < 0:
        raise InvalidSpecError("n, s, p must be positive and n_corrupt nonnegative")
    if not 0 < learning_rate <= 1:
        raise InvalidSpecError("learning_rate must lie in (0, 1]")
    return math.ceil((n * math.sqrt(s + n_corrupt)) ** (2 / 3) * math.log(p) / learning_rate**2)
