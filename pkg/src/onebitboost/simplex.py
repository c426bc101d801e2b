"""Dense revised simplex for ``min c.x  s.t.  A x = b, x >= 0``.

Two drivers share the basis bookkeeping:

* :func:`solve_standard_form` -- the textbook two-phase primal method;
* :func:`dual_simplex` -- the dual method started from a caller-supplied
  dual-feasible basis, pricing rows by dual steepest edge.  No phase one
  is needed when such a basis is known (e.g. surplus columns with c >= 0).

Both switch permanently to Bland's smallest-index rule after
``bland_after`` degenerate pivots.

Primal method details:

The basis inverse is kept explicitly, updated by elementary row
operations after each pivot and recomputed from scratch every
``reinvert_every`` pivots and before optimality is declared.

Phase one starts from an all-artificial basis (``b`` is made nonnegative
by flipping rows).  Artificial variables that leave the basis never
re-enter.  Pricing uses devex reference weights (an approximation of steepest
edge, far fewer pivots than Dantzig's rule on these problems); after
``bland_after`` degenerate pivots the solver switches for good to
Bland's smallest-index rule, which cannot cycle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"


@dataclass
class SimplexResult:
    status: str
    x: np.ndarray
    duals: np.ndarray
    objective: float
    basis: np.ndarray
    iterations: int
    degenerate_pivots: int
    phase_one_objective: float
    used_bland: bool = False


class _Tableau:
    """Basis bookkeeping shared by both methods.

    Columns ``0..ncols-1`` are structural, column ``ncols + i`` is the
    artificial unit vector ``e_i`` (primal phase one only).
    """

    def __init__(self, A, b, reinvert_every, basis=None):
        self.A = A
        self.AT = np.ascontiguousarray(A.T)
        self.b = b
        self.m, self.ncols = A.shape
        self.reinvert_every = reinvert_every
        self.since_reinvert = 0
        if basis is None:
            self.basis = np.arange(self.ncols, self.ncols + self.m)
            self.Binv = np.eye(self.m)
            self.xB = b.copy()
        else:
            self.basis = np.array(basis, dtype=np.int64)
            self.reinvert()

    def column(self, j):
        if j < self.ncols:
            return self.AT[j]
        e = np.zeros(self.m)
        e[j - self.ncols] = 1.0
        return e

    def basis_matrix(self):
        return np.column_stack([self.column(j) for j in self.basis])

    def reinvert(self):
        B = self.basis_matrix()
        self.Binv = np.linalg.inv(B)
        self.xB = np.linalg.solve(B, self.b)
        self.since_reinvert = 0

    def pivot(self, r, q, u):
        piv = u[r]
        row = self.Binv[r] / piv
        self.Binv -= np.outer(u, row)
        self.Binv[r] = row
        theta = self.xB[r] / piv
        self.xB -= theta * u
        self.xB[r] = theta
        self.basis[r] = q
        self.since_reinvert += 1
        if self.since_reinvert >= self.reinvert_every:
            self.reinvert()
            return True
        return False


def _ratio_test(xB, u, basis, piv_tol, bland):
    cand = np.flatnonzero(u > piv_tol)
    if cand.size == 0:
        return -1, 0.0
    ratios = np.maximum(xB[cand], 0.0) / u[cand]
    best = ratios.min()
    ties = cand[ratios <= best + 1e-12 * max(1.0, best)]
    if ties.size == 1:
        return int(ties[0]), best
    if bland:
        return int(ties[np.argmin(basis[ties])]), best
    return int(ties[np.argmax(u[ties])]), best


def _run_phase(tab, cost, state, opt_tol, piv_tol, max_iter):
    """Iterate until optimal / unbounded / iteration cap.

    ``cost`` covers structural then artificial columns.  Reduced costs are
    updated from the pivot row between reinversions; devex reference
    weights scale the pricing until the solver falls back to Bland.
    """
    n = tab.ncols
    devex = np.ones(n)

    def fresh():
        y = cost[tab.basis] @ tab.Binv
        d = cost[:n] - tab.AT @ y
        d[tab.basis[tab.basis < n]] = 0.0
        return y, d

    y, d = fresh()
    clean = True
    while True:
        basic = np.zeros(n, dtype=bool)
        basic[tab.basis[tab.basis < n]] = True
        eligible = (d < -opt_tol) & ~basic
        if not eligible.any():
            if clean:
                return OPTIMAL, y
            tab.reinvert()
            y, d = fresh()
            clean = True
            continue
        if state["bland"]:
            q = int(np.flatnonzero(eligible)[0])
        else:
            score = np.where(eligible, d * d / devex, -1.0)
            q = int(np.argmax(score))
        if state["iterations"] >= max_iter:
            return ITERATION_LIMIT, y
        u = tab.Binv @ tab.column(q)
        r, theta = _ratio_test(tab.xB, u, tab.basis, piv_tol, state["bland"])
        if r < 0:
            return UNBOUNDED, y
        if theta <= 1e-12:
            state["degenerate"] += 1
            if not state["bland"] and state["degenerate"] >= state["bland_after"]:
                state["bland"] = True
        piv = u[r]
        alpha_r = tab.Binv[r] @ tab.A
        leaving = tab.basis[r]
        ratio = alpha_r / piv
        d -= d[q] * ratio
        d[q] = 0.0
        wq = devex[q]
        np.maximum(devex, ratio * ratio * wq, out=devex)
        if leaving < n:
            devex[leaving] = max(wq / (piv * piv), 1.0)
        reinverted = tab.pivot(r, q, u)
        state["iterations"] += 1
        if reinverted:
            y, d = fresh()
            clean = True
        else:
            y = None
            clean = False


def _drive_out_artificials(tab, piv_tol):
    """Pivot zero-level artificials out of the basis where possible."""
    for r in range(tab.m):
        if tab.basis[r] < tab.ncols:
            continue
        row = tab.Binv[r] @ tab.A
        row[tab.basis[tab.basis < tab.ncols]] = 0.0
        j = int(np.argmax(np.abs(row)))
        if abs(row[j]) > piv_tol:
            u = tab.Binv @ tab.column(j)
            tab.pivot(r, j, u)
    tab.reinvert()


def solve_standard_form(c, A, b, max_iter=None, feas_tol=1e-8, opt_tol=1e-9,
                        piv_tol=1e-9, bland_after=5000, reinvert_every=64):
    """Solve ``min c.x s.t. A x = b, x >= 0`` by the two-phase method."""
    A = np.array(A, dtype=np.float64)
    b = np.array(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    m, ncols = A.shape
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0
    if max_iter is None:
        max_iter = 50 * (m + ncols)
    tab = _Tableau(A, b, reinvert_every)
    state = {"iterations": 0, "degenerate": 0, "bland": bland_after <= 0, "bland_after": bland_after}
    phase1_cost = np.concatenate([np.zeros(ncols), np.ones(m)])
    status, y = _run_phase(tab, phase1_cost, state, opt_tol, piv_tol, max_iter)
    art = tab.basis >= ncols
    phase1_obj = float(np.sum(np.maximum(tab.xB[art], 0.0)))

    def result(status, y, x_struct):
        duals = np.full(m, np.nan) if y is None else y.copy()
        duals[flip] *= -1.0
        return SimplexResult(status=status, x=x_struct, duals=duals,
                             objective=float(c @ x_struct), basis=tab.basis.copy(),
                             iterations=state["iterations"], degenerate_pivots=state["degenerate"],
                             phase_one_objective=phase1_obj, used_bland=state["bland"])

    if status == ITERATION_LIMIT:
        return result(ITERATION_LIMIT, y, _primal(tab))
    if phase1_obj > feas_tol * max(1.0, float(b.max(initial=0.0))):
        return result(INFEASIBLE, y, _primal(tab))

    _drive_out_artificials(tab, piv_tol)
    phase2_cost = np.concatenate([c, np.zeros(m)])
    status, y = _run_phase(tab, phase2_cost, state, opt_tol, piv_tol, max_iter)
    return result(status, y, _primal(tab))


def _primal(tab):
    x = np.zeros(tab.ncols)
    structural = tab.basis < tab.ncols
    x[tab.basis[structural]] = np.maximum(tab.xB[structural], 0.0)
    return x


def dual_simplex(c, A, b, basis, max_iter=None, feas_tol=1e-8, opt_tol=1e-9,
                 piv_tol=1e-9, bland_after=5000, reinvert_every=64, row_product=None):
    """Dual simplex from a dual-feasible starting ``basis``.

    ``row_product(rho)``, if given, must return ``rho @ A``; callers with
    structured ``A`` use it to skip redundant work in the pivot row.

    Status ``infeasible`` means a primal-infeasible row admits no entering
    column, i.e. the dual is unbounded.  If reinversion at the end exposes
    dual infeasibility from rounding, primal simplex iterations finish the
    job from the (primal feasible) final basis.
    """
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    m, ncols = A.shape
    if max_iter is None:
        max_iter = 50 * (m + ncols)
    tab = _Tableau(A, b, reinvert_every, basis=basis)
    cost = np.concatenate([c, np.zeros(m)])
    state = {"iterations": 0, "degenerate": 0, "bland": bland_after <= 0, "bland_after": bland_after}

    def fresh():
        y = c[tab.basis] @ tab.Binv
        d = c - tab.AT @ y
        d[tab.basis] = 0.0
        return y, d

    def result(status, y):
        x = np.zeros(ncols)
        x[tab.basis] = np.maximum(tab.xB, 0.0)
        return SimplexResult(status=status, x=x, duals=y, objective=float(c @ x),
                             basis=tab.basis.copy(), iterations=state["iterations"],
                             degenerate_pivots=state["degenerate"], phase_one_objective=0.0,
                             used_bland=state["bland"])

    y, d = fresh()
    if np.any(d < -opt_tol):
        raise ValueError("starting basis is not dual feasible")
    weights = np.einsum("ij,ij->i", tab.Binv, tab.Binv)
    clean = True
    while True:
        infeasible = tab.xB < -feas_tol
        if not infeasible.any():
            if not clean:
                tab.reinvert()
                y, d = fresh()
                weights = np.einsum("ij,ij->i", tab.Binv, tab.Binv)
                clean = True
                continue
            if np.any(d < -opt_tol):
                status, y = _run_phase(tab, cost, state, opt_tol, piv_tol, max_iter)
                return result(status, y)
            return result(OPTIMAL, y)
        if state["iterations"] >= max_iter:
            return result(ITERATION_LIMIT, y if y is not None else fresh()[0])
        if state["bland"]:
            rows = np.flatnonzero(infeasible)
            r = int(rows[np.argmin(tab.basis[rows])])
        else:
            r = int(np.argmax(np.where(infeasible, tab.xB ** 2 / weights, -1.0)))
        rho = tab.Binv[r].copy()
        alpha = row_product(rho) if row_product is not None else rho @ tab.A
        alpha[tab.basis] = 0.0
        alpha[tab.basis[r]] = 1.0  # leaving column picks up -d_q / alpha_rq
        cand = np.flatnonzero(alpha < -piv_tol)
        if cand.size == 0:
            return result(INFEASIBLE, y if y is not None else fresh()[0])
        ratios = np.maximum(d[cand], 0.0) / -alpha[cand]
        best = ratios.min()
        ties = cand[ratios <= best + 1e-12 * max(1.0, best)]
        if state["bland"]:
            q = int(ties.min())
        else:
            q = int(ties[np.argmax(-alpha[ties])])
        if best <= 1e-12:
            state["degenerate"] += 1
            if not state["bland"] and state["degenerate"] >= state["bland_after"]:
                state["bland"] = True
        u = tab.Binv @ tab.AT[q]
        piv = u[r]
        d -= (d[q] / alpha[q]) * alpha
        d[q] = 0.0
        tau = tab.Binv @ rho
        ratio = u / piv
        wr = weights[r]
        weights += ratio * (ratio * wr - 2.0 * tau)
        weights[r] = wr / (piv * piv)
        np.maximum(weights, 1e-12, out=weights)
        reinverted = tab.pivot(r, q, u)
        state["iterations"] += 1
        if reinverted:
            y, d = fresh()
            weights = np.einsum("ij,ij->i", tab.Binv, tab.Binv)
            clean = True
        else:
            y = None
            clean = False
