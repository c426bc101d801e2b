"""Exact max-l1-margin via the minimum-l1 interpolator.

The primal problem

    minimize ||beta||_1   subject to   y_i <X_i, beta> >= 1  for all i

is written in standard form with ``beta = beta_plus - beta_minus`` and one
surplus variable per sample::

    minimize 1.(beta_plus + beta_minus)
    s.t.     Z beta_plus - Z beta_minus - s = 1,    (Z_i = y_i X_i)
             beta_plus, beta_minus, s >= 0

The all-surplus basis is dual feasible (every cost is >= 0), so the
default ``method="dual"`` runs the dual simplex from it with no phase
one.  ``method="primal"`` runs the two-phase primal method instead; the
two are independent routes to the same optimum.  The max
l1-margin is ``gamma = 1 / ||beta_hat||_1``.  The simplex multipliers
``lam`` of the equality rows are feasible for the dual

    maximize sum(lam)   s.t.  ||Z^T lam||_inf <= 1,  lam >= 0,

so ``w = lam / sum(lam)`` lies on the simplex and certifies
``||sum_i w_i y_i X_i||_inf = gamma``; the reported ``duality_gap`` is the
absolute difference between the two sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import simplex
from .core import DomainError, l1_margin

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
DEGENERATE = "numerically_degenerate"

SIMPLEX_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class LpSolution:
    beta_hat: np.ndarray
    margin: float
    dual_weights: np.ndarray
    status: str
    duality_gap: float
    iterations: int = 0
    #: (lower, upper) bounds on gamma when the solver stopped early
    margin_bounds: Optional[tuple] = None

    @property
    def optimal(self):
        return self.status == OPTIMAL


def _simplex_weights(lam):
    lam = np.maximum(np.asarray(lam, dtype=np.float64), 0.0)
    total = lam.sum()
    if total <= 0:
        return np.full(lam.size, 1.0 / lam.size)
    return lam / total


def dual_value_arrays(X, y, weights):
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (X.shape[0],):
        raise ValueError(f"weights must have length {X.shape[0]}")
    if np.any(w < -SIMPLEX_TOL) or abs(w.sum() - 1.0) > SIMPLEX_TOL:
        raise DomainError("weights must lie on the probability simplex")
    return float(np.max(np.abs((w * y) @ X)))


def dual_value(instance, weights):
    """||sum_i w_i y_i X_i||_inf; an upper bound on gamma for every simplex w."""
    return dual_value_arrays(instance.features, instance.labels, weights)


def solve_max_margin(instance, method="dual", max_iter=None, bland_after=5000):
    X = np.asarray(instance.features, dtype=np.float64)
    y = np.asarray(instance.labels, dtype=np.float64)
    n, p = X.shape
    if n < 1 or p < 1:
        raise ValueError("need at least one sample and one dimension")
    Z = y[:, None] * X
    A = np.hstack([Z, -Z, -np.eye(n)])
    c = np.concatenate([np.ones(2 * p), np.zeros(n)])
    opts = dict(max_iter=max_iter, feas_tol=SIMPLEX_TOL, opt_tol=1e-9, bland_after=bland_after)
    if method == "dual":
        def row_product(rho):
            rz = rho @ Z
            return np.concatenate([rz, -rz, -rho])

        res = simplex.dual_simplex(c, A, np.ones(n), basis=np.arange(2 * p, 2 * p + n),
                                   row_product=row_product, **opts)
    elif method == "primal":
        res = simplex.solve_standard_form(c, A, np.ones(n), **opts)
    else:
        raise ValueError(f"unknown method {method!r}")
    beta = res.x[:p] - res.x[p:2 * p]
    w = _simplex_weights(res.duals)
    dual = float(np.max(np.abs(w @ Z)))

    if res.status == simplex.INFEASIBLE:
        return LpSolution(beta_hat=np.zeros(p), margin=0.0, dual_weights=w,
                          status=INFEASIBLE, duality_gap=0.0, iterations=res.iterations)

    norm1 = float(np.abs(beta).sum())
    if res.status != simplex.OPTIMAL or norm1 == 0.0:
        lower = None
        if norm1 > 0 and np.all(Z @ beta >= 1 - SIMPLEX_TOL):
            lower = 1.0 / norm1
        gamma = lower if lower is not None else float("nan")
        return LpSolution(beta_hat=beta, margin=gamma, dual_weights=w, status=DEGENERATE,
                          duality_gap=abs(dual - gamma) if lower is not None else float("inf"),
                          iterations=res.iterations, margin_bounds=(lower, dual))

    gamma = 1.0 / norm1
    return LpSolution(beta_hat=beta, margin=gamma, dual_weights=w, status=OPTIMAL,
                      duality_gap=abs(dual - gamma), iterations=res.iterations)


def margin_of_best(instance, model, solution=None):
    """Ratio of the model's l1-margin to the max l1-margin gamma."""
    if solution is None:
        solution = solve_max_margin(instance)
    if not solution.optimal:
        raise DomainError(f"LP status is {solution.status}, gamma unavailable")
    if solution.margin <= 0:
        raise DomainError("max l1-margin is not positive")
    coef = getattr(model, "coefficients", model)
    return l1_margin(instance, coef) / solution.margin
