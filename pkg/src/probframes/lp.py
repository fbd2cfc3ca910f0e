"""Two-phase primal simplex on a dense tableau.

Solves ``min c^t x  s.t.  A x = b, x >= 0``. The entering column is always
the smallest index with negative reduced cost (Bland). The leaving row comes
from a two-pass ratio test that prefers large pivots among near-ties, which
keeps tiny pivots from wrecking the tableau; once the pivot count passes half
the budget the solver falls back to Bland's smallest-index leaving rule, so
degenerate transportation polytopes still cannot make it cycle. Problems here
are small (a few thousand variables at most), so the tableau is kept dense
and every pivot is a rank-one numpy update.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NumericalBreakdown

PIVOT_TOL = 1e-11
PIVOT_REL_TOL = 1e-9
RATIO_SLACK = 1e-9
REDUCED_COST_TOL = 1e-11
DRIVE_OUT_TOL = 1e-9


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpProblem:
    objective: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray

    def __init__(self, objective, a_eq, b_eq):
        c = np.array(objective, dtype=float).reshape(-1)
        a = np.array(a_eq, dtype=float)
        b = np.array(b_eq, dtype=float).reshape(-1)
        if a.ndim != 2:
            a = a.reshape(len(b), -1)
        if a.shape != (b.shape[0], c.shape[0]):
            raise ValueError(
                f"constraint matrix {a.shape} inconsistent with {b.shape[0]} rows, {c.shape[0]} vars"
            )
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
            raise ValueError("LP coefficients must be finite")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "a_eq", a)
        object.__setattr__(self, "b_eq", b)

    @property
    def num_vars(self) -> int:
        return self.objective.shape[0]

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.b_eq)))) if self.b_eq.size else 1.0


@dataclass(frozen=True)
class LpSolution:
    status: Status
    point: np.ndarray | None
    objective_value: float
    max_constraint_violation: float
    phase1_residual: float
    basis: tuple[int, ...] = ()
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Tableau:
    """Rows ``0..m-1`` are constraints ``[A | b]``; row ``m`` holds reduced
    costs and ``-objective`` in the last column."""

    def __init__(self, table: np.ndarray, basis: list[int], max_iter: int):
        self.t = table
        self.basis = basis
        self.iterations = 0
        self.max_iter = max_iter

    @property
    def m(self) -> int:
        return self.t.shape[0] - 1

    def pivot(self, r: int, j: int) -> None:
        t = self.t
        t[r] /= t[r, j]
        col = t[:, j].copy()
        col[r] = 0.0
        t -= np.outer(col, t[r])
        t[:, j] = 0.0
        t[r, j] = 1.0
        self.basis[r] = j

    def _harris_row(self, rows: np.ndarray, col: np.ndarray, rhs: np.ndarray) -> int:
        """Largest pivot among rows whose ratio is within the relaxed minimum."""
        bound = float(np.min((rhs + RATIO_SLACK) / col))
        ok = rhs / col <= bound
        cand, mags = rows[ok], col[ok]
        top = mags.max()
        best = cand[mags >= top * (1.0 - 1e-12)]
        return int(min(best, key=lambda k: self.basis[k]))

    def run(self, ncols: int, cost_tol: float) -> Status:
        """Bland-rule iterations over columns ``0..ncols-1``."""
        t = self.t
        m = self.m
        while True:
            d = t[m, :ncols]
            candidates = np.flatnonzero(d < -cost_tol)
            if candidates.size == 0:
                return Status.OPTIMAL
            j = int(candidates[0])
            col = t[:m, j]
            rows = np.flatnonzero(col > max(PIVOT_TOL, PIVOT_REL_TOL * float(np.max(np.abs(col)))))
            if rows.size == 0:
                return Status.UNBOUNDED
            rhs = np.maximum(t[rows, -1], 0.0)
            if self.iterations < self.max_iter // 2:
                r = self._harris_row(rows, col[rows], rhs)
            else:
                ratios = rhs / col[rows]
                best = ratios.min()
                ties = rows[ratios <= best + 1e-12 * max(1.0, best)]
                r = int(min(ties, key=lambda k: self.basis[k]))
            self.pivot(r, j)
            # the relaxed ratio test may leave values a hair below zero
            np.maximum(t[:m, -1], 0.0, out=t[:m, -1], where=t[:m, -1] > -RATIO_SLACK)
            self.iterations += 1
            if self.iterations > self.max_iter:
                raise NumericalBreakdown(
                    f"simplex exceeded {self.max_iter} pivots; likely numerical cycling"
                )


def solve(problem: LpProblem, *, feasibility_tol: float = 1e-9, max_iter: int | None = None) -> LpSolution:
    """Two-phase simplex.

    Parameters
    ----------
    problem : LpProblem
        Equality-form LP with nonnegative variables.
    feasibility_tol : float
        Phase one declares the problem infeasible when the sum of artificial
        variables stays above ``feasibility_tol * max(1, |b|_max)``.
    max_iter : int, optional
        Pivot budget shared by both phases; exceeding it raises
        ``NumericalBreakdown``.

    Returns
    -------
    LpSolution
        ``point`` is a basic feasible solution when the status is optimal.
    """
    c = problem.objective
    a = problem.a_eq.copy()
    b = problem.b_eq.copy()
    m, n = a.shape
    scale = problem.scale
    if max_iter is None:
        max_iter = 50 * (m + n) + 1000

    if m == 0:
        if np.any(c < -REDUCED_COST_TOL):
            return LpSolution(Status.UNBOUNDED, None, -np.inf, 0.0, 0.0)
        return LpSolution(Status.OPTIMAL, np.zeros(n), 0.0, 0.0, 0.0)

    flip = b < 0
    a[flip] *= -1.0
    b[flip] *= -1.0

    # phase one: artificial identity block, minimize their sum
    table = np.zeros((m + 1, n + m + 1))
    table[:m, :n] = a
    table[:m, n : n + m] = np.eye(m)
    table[:m, -1] = b
    table[m, :n] = -a.sum(axis=0)
    table[m, -1] = -b.sum()
    tab = _Tableau(table, list(range(n, n + m)), max_iter)
    tab.run(n, REDUCED_COST_TOL)
    phase1 = max(0.0, -float(tab.t[m, -1]))
    if phase1 > feasibility_tol * scale:
        return LpSolution(Status.INFEASIBLE, None, np.nan, np.nan, phase1, iterations=tab.iterations)

    # drive remaining (zero-valued) artificials out; rows that cannot pivot are redundant
    keep = []
    for r in range(m):
        if tab.basis[r] < n:
            keep.append(r)
            continue
        row = tab.t[r, :n]
        cand = np.flatnonzero(np.abs(row) > DRIVE_OUT_TOL)
        if cand.size:
            j = int(cand[np.argmax(np.abs(row[cand]))])
            tab.pivot(r, j)
            keep.append(r)

    # phase two on the original columns
    t2 = np.zeros((len(keep) + 1, n + 1))
    t2[:-1, :n] = tab.t[keep, :n]
    t2[:-1, -1] = tab.t[keep, -1]
    basis = [tab.basis[r] for r in keep]
    cb = c[basis]
    t2[-1, :n] = c - cb @ t2[:-1, :n]
    t2[-1, -1] = -cb @ t2[:-1, -1]
    tab2 = _Tableau(t2, basis, max_iter - tab.iterations)
    cost_tol = REDUCED_COST_TOL * max(1.0, float(np.max(np.abs(c))) if c.size else 1.0)
    status = tab2.run(n, cost_tol)
    iterations = tab.iterations + tab2.iterations
    if status is Status.UNBOUNDED:
        return LpSolution(Status.UNBOUNDED, None, -np.inf, np.nan, phase1, iterations=iterations)

    x = np.zeros(n)
    x[tab2.basis] = tab2.t[:-1, -1]
    x = _polish(problem, x, tab2.basis, keep)
    violation = float(np.max(np.abs(problem.a_eq @ x - problem.b_eq)))
    if violation > 1e-9 * scale:
        raise NumericalBreakdown(f"optimal vertex violates constraints by {violation:.3e}")
    return LpSolution(
        Status.OPTIMAL,
        x,
        float(c @ x),
        violation,
        phase1,
        basis=tuple(int(k) for k in tab2.basis),
        iterations=iterations,
    )


def _polish(problem: LpProblem, x: np.ndarray, basis: list[int], rows: list[int]) -> np.ndarray:
    """Re-solve ``B x_B = b`` against the original data to strip pivot roundoff."""
    bmat = problem.a_eq[np.ix_(rows, basis)]
    try:
        xb = np.linalg.solve(bmat, problem.b_eq[rows])
    except np.linalg.LinAlgError:
        return np.clip(x, 0.0, None)
    if np.any(xb < -1e-9) or not np.all(np.isfinite(xb)):
        return np.clip(x, 0.0, None)
    out = np.zeros_like(x)
    out[basis] = np.clip(xb, 0.0, None)
    before = np.max(np.abs(problem.a_eq @ np.clip(x, 0.0, None) - problem.b_eq))
    after = np.max(np.abs(problem.a_eq @ out - problem.b_eq))
    return out if after <= before else np.clip(x, 0.0, None)
