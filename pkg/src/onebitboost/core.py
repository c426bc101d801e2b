"""Shared domain types and the margin / loss formulas.

Features are stored row-major by sample (``features[i]`` is the feature
vector of sample ``i``).  All arrays held by the types below are made
read-only on construction so instances can be shared between workers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)

#: exponents passed to ``exp`` are clamped to this value in :func:`exp_loss`
EXP_CLAMP = 700.0

ESTIMATOR_TAGS = ("adaboost", "lp", "external")


class DomainError(ValueError):
    """An operation was called outside the domain where it is defined."""


class InvalidSpecError(ValueError):
    """A generation spec or configuration violates its invariants."""


class DegenerateInputError(ValueError):
    """Input data is degenerate (e.g. an all-zero feature matrix)."""


class NumericalFailure(ArithmeticError):
    """A numerical routine produced a non-finite intermediate."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


def _frozen(a, dtype=np.float64):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


def sgn(x):
    """Three-valued sign: 1 if x > 0, -1 if x < 0, 0 if x == 0.

    Works elementwise on arrays (returning ints), and on scalars.
    """
    if np.ndim(x) == 0:
        x = float(x)
        return 1 if x > 0 else (-1 if x < 0 else 0)
    x = np.asarray(x)
    return (x > 0).astype(np.int64) - (x < 0).astype(np.int64)


@dataclass(frozen=True, eq=False)
class Instance:
    """One synthetic one-bit compressed sensing problem.

    ``distribution`` / ``dof`` are optional metadata naming the law the
    features were drawn from; metrics use them to pick the closed-form
    prediction error for Gaussian features.
    """

    features: np.ndarray
    labels: np.ndarray
    ground_truth: Optional[np.ndarray] = None
    corruptions: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    seed: int = 0
    distribution: Optional[str] = None
    dof: Optional[int] = None

    def __post_init__(self):
        X = _frozen(self.features)
        if X.ndim != 2:
            raise ValueError("features must be a 2-d array (n samples x p dims)")
        n, p = X.shape
        y = np.asarray(self.labels, dtype=np.float64)
        if y.shape != (n,):
            raise ValueError(f"labels must have shape ({n},), got {y.shape}")
        if not np.all((y == 1.0) | (y == -1.0)):
            raise ValueError("every label must be exactly -1 or +1")
        corr = np.asarray(self.corruptions, dtype=np.int64).reshape(-1)
        if corr.size:
            if np.any(np.diff(corr) <= 0):
                raise ValueError("corruption indices must be strictly increasing")
            if corr[0] < 0 or corr[-1] >= n:
                raise ValueError("corruption indices must lie in [0, n)")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", _frozen(y))
        object.__setattr__(self, "corruptions", _frozen(corr, np.int64))
        object.__setattr__(self, "seed", int(self.seed))
        if self.ground_truth is not None:
            gt = _frozen(self.ground_truth)
            if gt.shape != (p,):
                raise ValueError(f"ground_truth must have shape ({p},)")
            if abs(np.linalg.norm(gt) - 1.0) > 1e-12:
                raise ValueError("ground_truth must have unit l2 norm")
            object.__setattr__(self, "ground_truth", gt)
            self._check_model_labels()

    def _check_model_labels(self):
        proj = self.features @ self.ground_truth
        expected = np.where(proj < 0, -1.0, 1.0)  # exact zero -> +1
        expected[self.corruptions] *= -1.0
        # projections within rounding of zero can flip between matmul kernels
        scale = np.abs(self.features).sum(axis=1) * np.abs(self.ground_truth).max()
        decided = np.abs(proj) > 1e-12 * scale
        bad = decided & (expected != self.labels)
        if np.any(bad):
            raise ValueError(
                f"labels disagree with the sign model at {int(bad.sum())} samples"
            )

    @property
    def n(self):
        return self.features.shape[0]

    @property
    def p(self):
        return self.features.shape[1]


@dataclass(frozen=True, eq=False)
class Model:
    """A fitted coefficient vector plus provenance.

    ``feature_scale`` is the factor the features were divided by before
    fitting (AdaBoost rescales by the max absolute entry); margins and
    prediction errors do not depend on it.  ``degenerate`` marks an
    all-zero coefficient vector, for which the margin is undefined.
    """

    coefficients: np.ndarray
    estimator_tag: str
    iterations: int = 0
    learning_rate: float = 1.0
    feature_scale: float = 1.0
    degenerate: bool = False

    def __post_init__(self):
        beta = _frozen(self.coefficients)
        if beta.ndim != 1:
            raise ValueError("coefficients must be a vector")
        if self.estimator_tag not in ESTIMATOR_TAGS:
            raise ValueError(f"unknown estimator tag {self.estimator_tag!r}")
        if self.iterations < 0:
            raise ValueError("iterations must be nonnegative")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        zero = not np.any(beta)
        if zero and self.estimator_tag != "external" and not self.degenerate:
            raise ValueError("all-zero coefficients must be flagged degenerate")
        object.__setattr__(self, "coefficients", beta)
        object.__setattr__(self, "degenerate", bool(self.degenerate or zero))


@dataclass(frozen=True)
class IterationRecord:
    t: int
    coordinate: int
    sign: int
    alpha: float
    loss: float
    margin: float


@dataclass
class Trajectory:
    """Per-iteration AdaBoost records (possibly thinned)."""

    records: list = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records])


def _check_coefficients(X, beta):
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (X.shape[1],):
        raise ValueError(f"coefficients must have length {X.shape[1]}, got {beta.shape}")
    return beta


def margins_of(X, y, beta):
    """Unnormalized margins y_i <X_i, beta>."""
    return y * (X @ beta)


def l1_margin_arrays(X, y, beta):
    beta = _check_coefficients(X, beta)
    norm1 = np.abs(beta).sum()
    if norm1 == 0.0:
        raise DomainError("undefined margin: coefficients are all zero")
    return float(np.min(margins_of(X, y, beta)) / norm1)


def l1_margin(instance, coefficients):
    """min_i y_i <X_i, beta> / ||beta||_1.  Negative if beta misclassifies."""
    return l1_margin_arrays(instance.features, instance.labels, coefficients)


def exp_loss_arrays(X, y, beta, return_saturation=False):
    beta = _check_coefficients(X, beta)
    z = -margins_of(X, y, beta)
    saturated = bool(np.any(z > EXP_CLAMP))
    if saturated:
        logger.warning("exp_loss: %d exponents clamped at %g", int((z > EXP_CLAMP).sum()), EXP_CLAMP)
        z = np.minimum(z, EXP_CLAMP)
    value = float(np.mean(np.exp(z)))
    if return_saturation:
        return value, saturated
    return value


def exp_loss(instance, coefficients, return_saturation=False):
    """Mean exponential loss (1/n) sum_i exp(-y_i <X_i, beta>).

    Exponents above ``EXP_CLAMP`` are clamped; pass
    ``return_saturation=True`` to also get a flag telling whether that
    happened.
    """
    return exp_loss_arrays(instance.features, instance.labels, coefficients, return_saturation)


def linf_norm(a):
    """Max absolute entry (used for both vectors and matrices)."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0
