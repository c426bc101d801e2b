"""Synthetic one-bit compressed sensing instances.

Labels follow the sign model with adversarially flipped samples:
``y_i = sgn<X_i, beta*>`` outside the corruption set and
``-sgn<X_i, beta*>`` inside it.

Feature laws (all centred and symmetric):

=============  =====================================  ==================
name           parameterization                       population var
=============  =====================================  ==================
gaussian       N(0, 1)                                1
student-t      sqrt((d-2)/d) * t_d,  d >= 3           1
uniform        U[-sqrt(3), sqrt(3)]                   1
laplace        location 0, scale 1                    2
laplace (std)  location 0, scale 1/sqrt(2)            1
rademacher     +-1 with probability 1/2               1
=============  =====================================  ==================

The unit-scale Laplace default matches the simulation protocol; the
standardized variant matches the unit-variance theory.  Margins and
prediction errors are unaffected by a global rescaling of the features,
so the two only differ in the reported margin magnitude (by sqrt 2).

Each instance uses three independent streams derived from the master
seed (see :mod:`onebitboost.rng`): features, ground truth and
corruptions.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .core import Instance, InvalidSpecError

logger = logging.getLogger(__name__)

DISTRIBUTIONS = ("gaussian", "student-t", "uniform", "laplace", "rademacher")


@dataclass(frozen=True)
class FeatureDistribution:
    kind: str
    dof: int | None = None

    def __post_init__(self):
        if self.kind not in DISTRIBUTIONS:
            raise InvalidSpecError(f"unknown distribution {self.kind!r}; choose from {DISTRIBUTIONS}")
        if self.kind == "student-t":
            if self.dof is None or int(self.dof) != self.dof or self.dof < 3:
                raise InvalidSpecError("student-t needs an integer dof >= 3")
        elif self.dof is not None:
            raise InvalidSpecError(f"dof only applies to student-t, not {self.kind}")

    @classmethod
    def gaussian(cls):
        return cls("gaussian")

    @classmethod
    def student_t(cls, dof):
        return cls("student-t", dof)

    @classmethod
    def uniform(cls):
        return cls("uniform")

    @classmethod
    def laplace(cls):
        return cls("laplace")

    @classmethod
    def rademacher(cls):
        return cls("rademacher")

    def __str__(self):
        return f"student-t({self.dof})" if self.kind == "student-t" else self.kind


@dataclass(frozen=True)
class GenSpec:
    n: int
    p: int
    s: int
    n_corrupt: int
    distribution: FeatureDistribution
    master_seed: int
    standardize_laplace: bool = False

    def __post_init__(self):
        if self.n < 1 or self.p < 1 or self.s < 1:
            raise InvalidSpecError("n, p and s must be positive")
        if self.s > self.p:
            raise InvalidSpecError(f"sparsity s={self.s} exceeds dimension p={self.p}")
        if not 0 <= self.n_corrupt <= self.n:
            raise InvalidSpecError(f"n_corrupt={self.n_corrupt} must lie in [0, n={self.n}]")
        if not 0 <= self.master_seed < 2**64:
            raise InvalidSpecError("master_seed must be a 64-bit unsigned integer")


def student_dof(p):
    """Degrees of freedom used for student-t features: max(3, round(ln p))."""
    if p < 2:
        raise InvalidSpecError("student_dof needs p >= 2")
    return max(3, int(round(math.log(p))))


def draw_features(distribution, size, gen, standardize_laplace=False):
    """Draw i.i.d. entries of the named law with the given shape."""
    kind = distribution.kind
    if kind == "gaussian":
        return gen.standard_normal(size)
    if kind == "student-t":
        d = distribution.dof
        return math.sqrt((d - 2) / d) * gen.standard_t(d, size)
    if kind == "uniform":
        r = math.sqrt(3.0)
        return gen.uniform(-r, r, size)
    if kind == "laplace":
        scale = 1 / math.sqrt(2.0) if standardize_laplace else 1.0
        return gen.laplace(0.0, scale, size)
    if kind == "rademacher":
        return 2.0 * gen.integers(0, 2, size).astype(np.float64) - 1.0
    raise InvalidSpecError(kind)  # unreachable: validated by FeatureDistribution


def sample_features(spec, gen=None):
    if gen is None:
        gen = rng.substream(spec.master_seed, rng.FEATURES)
    return draw_features(spec.distribution, (spec.n, spec.p), gen, spec.standardize_laplace)


def sample_sparse_rademacher(p, s, gen):
    """Unit vector with ``s`` entries equal to +-1/sqrt(s) on a uniform support."""
    if not 1 <= s <= p:
        raise InvalidSpecError(f"need 1 <= s <= p, got s={s}, p={p}")
    support = gen.choice(p, size=s, replace=False)
    signs = 2.0 * gen.integers(0, 2, s) - 1.0
    beta = np.zeros(p)
    beta[support] = signs / math.sqrt(s)
    return beta


def sample_corruptions(n, k, gen):
    """Sorted uniform k-subset of range(n).

    Taken as the first k entries of a uniform permutation, so for a fixed
    stream the sets are nested in k.
    """
    if not 0 <= k <= n:
        raise InvalidSpecError(f"need 0 <= k <= n, got k={k}, n={n}")
    return np.sort(gen.permutation(n)[:k]).astype(np.int64)


def generate_labels(features, ground_truth, corruptions):
    """Labels under the sign model; returns ``(labels, n_ties)``.

    An exactly zero projection gets label +1 (-1 when corrupted).
    """
    proj = np.asarray(features) @ np.asarray(ground_truth)
    ties = int(np.count_nonzero(proj == 0.0))
    labels = np.where(proj < 0, -1.0, 1.0)
    labels[np.asarray(corruptions, dtype=np.int64)] *= -1.0
    if ties:
        logger.info("generate_labels: %d zero projections labelled by convention", ties)
    return labels, ties


def generate_instance(spec):
    features = sample_features(spec)
    beta_star = sample_sparse_rademacher(spec.p, spec.s, rng.substream(spec.master_seed, rng.GROUND_TRUTH))
    corruptions = sample_corruptions(spec.n, spec.n_corrupt, rng.substream(spec.master_seed, rng.CORRUPTIONS))
    labels, _ = generate_labels(features, beta_star, corruptions)
    dist = spec.distribution
    tag = "laplace-std" if dist.kind == "laplace" and spec.standardize_laplace else dist.kind
    return Instance(
        features=features,
        labels=labels,
        ground_truth=beta_star,
        corruptions=corruptions,
        seed=spec.master_seed,
        distribution=tag,
        dof=dist.dof,
    )


def distribution_of(instance):
    """Recover ``(FeatureDistribution, standardize_laplace)`` from instance metadata."""
    tag = instance.distribution
    if tag is None:
        raise InvalidSpecError("instance carries no feature-distribution metadata")
    if tag == "laplace-std":
        return FeatureDistribution.laplace(), True
    if tag == "student-t":
        return FeatureDistribution.student_t(instance.dof), False
    return FeatureDistribution(tag), False
