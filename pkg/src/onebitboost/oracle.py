"""Brute-force references for tests: grid max-margin in 2-d, sign checks."""

from __future__ import annotations

import numpy as np

from .core import sgn


def cross_polytope_grid(grid_count):
    """``grid_count`` points on the boundary of the 2-d unit l1 ball.

    theta runs uniformly over [0, 4); edge k = floor(theta) joins
    consecutive vertices of (1,0), (0,1), (-1,0), (0,-1).
    """
    theta = 4.0 * np.arange(grid_count) / grid_count
    edge = np.floor(theta).astype(int)
    frac = theta - edge
    vertices = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
    start = vertices[edge]
    end = vertices[(edge + 1) % 4]
    return (1.0 - frac)[:, None] * start + frac[:, None] * end


def brute_force_margin(instance, grid_count=100_000):
    """max over grid directions on the l1 sphere of min_i y_i <X_i, beta>.

    A lower bound on the max l1-margin gamma, within O(1/grid_count) of it.
    """
    X = np.asarray(instance.features, dtype=np.float64)
    if X.shape[1] != 2:
        raise NotImplementedError("brute_force_margin only supports p = 2")
    if grid_count < 1000:
        raise ValueError("grid_count must be at least 1000")
    Z = np.asarray(instance.labels)[:, None] * X
    betas = cross_polytope_grid(grid_count)
    return float(np.max(np.min(betas @ Z.T, axis=1)))


def exhaustive_sign_check(instance, model):
    """True iff sgn<X_i, beta> == y_i for every sample."""
    beta = np.asarray(getattr(model, "coefficients", model), dtype=np.float64)
    signs = sgn(np.asarray(instance.features) @ beta)
    return bool(np.all(signs == np.asarray(instance.labels)))
