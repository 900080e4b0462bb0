"""Dense two-phase primal simplex for ``min c.x  s.t.  A x >= b, x >= 0``.

The solver returns primal values together with one nonnegative dual
multiplier per constraint row, so callers can read off optimality
certificates (and Farkas rays for infeasible programs).
"""

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from .config import FEAS_TOL, GAP_TOL, PIVOT_TOL
from .errors import DimensionMismatch, NotOptimal, NumericalBreakdown

logger = logging.getLogger(__name__)


class Status(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """minimize ``c @ x`` subject to ``A @ x >= b`` and ``x >= 0``."""

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        A = np.asarray(self.A, dtype=float)
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if A.size == 0:
            A = A.reshape(len(b), len(c))
        if A.ndim != 2 or A.shape != (len(b), len(c)):
            raise DimensionMismatch(
                f"A has shape {A.shape}, expected ({len(b)}, {len(c)})")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(A))
                and np.all(np.isfinite(b))):
            raise ValueError("linear program data must be finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def shape(self):
        return self.A.shape


@dataclass(frozen=True)
class LpSolution:
    status: Status
    x: np.ndarray
    objective: float
    y: np.ndarray
    # Farkas ray y >= 0 with y.A <= 0, y.b > 0 when infeasible;
    # primal direction d >= 0 with A d >= 0, c.d < 0 when unbounded.
    ray: np.ndarray = None
    iterations: int = 0
    basis: tuple = field(default=(), repr=False)
    _b: np.ndarray = field(default=None, repr=False)

    @property
    def optimal(self):
        return self.status is Status.OPTIMAL

    @property
    def dual_objective(self):
        """``b.y``; equals the objective at an optimum."""
        return float(self._b @ self.y)


class _Tableau:
    """Dense simplex tableau over the equality form ``D [A, -I] z = D b``.

    ``D`` flips rows with ``b_i <= 0`` so every right-hand side is
    nonnegative; those rows start with their slack basic, the others
    with an artificial variable.
    """

    def __init__(self, lp, pivot_tol, verbose):
        m, n = lp.shape
        self.m, self.n = m, n
        self.pivot_tol = pivot_tol
        self.verbose = verbose
        self.sign = np.where(lp.b > 0, 1.0, -1.0)
        art_rows = np.flatnonzero(self.sign > 0)
        self.n_art = len(art_rows)
        width = n + m + self.n_art
        T = np.zeros((m, width + 1))
        T[:, :n] = self.sign[:, None] * lp.A
        T[:, n:n + m] = -np.diag(self.sign)
        T[:, -1] = self.sign * lp.b
        basis = np.empty(m, dtype=int)
        # column holding B^{-1} e_i for each row (initial identity column)
        self.identity_col = np.empty(m, dtype=int)
        for i in range(m):
            if self.sign[i] < 0:
                basis[i] = n + i
                self.identity_col[i] = n + i
        for k, i in enumerate(art_rows):
            col = n + m + k
            T[i, col] = 1.0
            basis[i] = col
            self.identity_col[i] = col
        self.T = T
        self.basis = basis
        self.width = width
        self.art_start = n + m
        self.iterations = 0

    def is_artificial(self, j):
        return j >= self.art_start

    def reduced_costs(self, cost):
        cb = cost[self.basis]
        return cost - cb @ self.T[:, :-1]

    def objective(self, cost):
        return float(cost[self.basis] @ self.T[:, -1])

    def pivot(self, r, j):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, j] = 0.0
        T[r, j] = 1.0
        self.basis[r] = j
        self.iterations += 1

    def run(self, cost, allowed, opt_tol, max_iter):
        """Iterate to optimality; returns ``None`` or the unbounded column."""
        m = self.m
        bland = False
        stall = 0
        stall_limit = 3 * (m + self.n)
        best = self.objective(cost)
        for _ in range(max_iter):
            r = self.reduced_costs(cost)
            r[~allowed] = 0.0
            r[self.basis] = 0.0
            candidates = np.flatnonzero(r < -opt_tol)
            if len(candidates) == 0:
                return None
            if bland:
                j = int(candidates[0])
            else:
                j = int(candidates[np.argmin(r[candidates])])
            col = self.T[:, j]
            rows = np.flatnonzero(col > self.pivot_tol)
            if len(rows) == 0:
                return j
            ratios = self.T[rows, -1] / col[rows]
            ratios = np.maximum(ratios, 0.0)
            rmin = ratios.min()
            ties = rows[ratios <= rmin + 1e-12 * max(1.0, abs(rmin))]
            if bland:
                r_out = int(ties[np.argmin(self.basis[ties])])
            else:
                r_out = int(ties[np.argmax(np.abs(col[ties]))])
            if self.verbose:
                logger.debug("pivot %d: enter %d leave %d (row %d), obj %.12g",
                             self.iterations, j, self.basis[r_out], r_out,
                             self.objective(cost))
            self.pivot(r_out, j)
            obj = self.objective(cost)
            if obj < best - 1e-12 * max(1.0, abs(best)):
                best = obj
                stall = 0
            else:
                stall += 1
                if stall >= stall_limit and not bland:
                    logger.debug("no progress for %d pivots; switching to Bland",
                                  stall)
                    bland = True
        raise NumericalBreakdown(
            f"simplex did not terminate within {max_iter} pivots")

    def drive_out_artificials(self):
        for i in range(self.m):
            if not self.is_artificial(self.basis[i]):
                continue
            row = np.abs(self.T[i, :self.art_start])
            j = int(np.argmax(row)) if len(row) else -1
            if j >= 0 and row[j] > self.pivot_tol:
                self.pivot(i, j)
            # otherwise the row is redundant; its artificial stays at zero

    def primal(self):
        z = np.zeros(self.width)
        z[self.basis] = self.T[:, -1]
        return z


def solve_lp(lp, pivot_tol=PIVOT_TOL, feas_tol=FEAS_TOL, verbose=False,
             max_iter=None):
    """Solve ``lp`` with a two-phase dense simplex.

    Pricing is Dantzig's rule; after ``3 (rows + cols)`` pivots without
    objective progress the solver switches to Bland's rule for the rest
    of the phase. Dual multipliers are read from the reduced costs of
    the initial identity columns.
    """
    m, n = lp.shape
    if max_iter is None:
        max_iter = 50 * (m + n) + 1000
    tab = _Tableau(lp, pivot_tol, verbose)
    scale = max(1.0, float(np.max(np.abs(lp.b), initial=0.0)))
    opt_tol = 1e-11 * max(1.0, float(np.max(np.abs(lp.c), initial=0.0)))

    # phase 1
    cost1 = np.zeros(tab.width)
    cost1[tab.art_start:] = 1.0
    allowed = np.ones(tab.width, dtype=bool)
    if tab.n_art:
        tab.run(cost1, allowed, 1e-11, max_iter)
        infeas = tab.objective(cost1)
        if infeas > feas_tol * scale:
            r1 = tab.reduced_costs(cost1)
            w = cost1[tab.identity_col] - r1[tab.identity_col]
            ray = tab.sign * w
            x = tab.primal()[:n]
            return LpSolution(Status.INFEASIBLE, x, float(lp.c @ x),
                              np.zeros(m), ray=ray,
                              iterations=tab.iterations,
                              basis=tuple(tab.basis), _b=lp.b)
        tab.drive_out_artificials()

    # phase 2
    cost2 = np.zeros(tab.width)
    cost2[:n] = lp.c
    allowed[tab.art_start:] = False
    unbounded_col = tab.run(cost2, allowed, opt_tol, max_iter)
    z = tab.primal()
    x = z[:n].copy()
    if unbounded_col is not None:
        d = np.zeros(tab.width)
        d[unbounded_col] = 1.0
        d[tab.basis] = -tab.T[:, unbounded_col]
        return LpSolution(Status.UNBOUNDED, x, -np.inf, np.zeros(m),
                          ray=d[:n], iterations=tab.iterations,
                          basis=tuple(tab.basis), _b=lp.b)
    r2 = tab.reduced_costs(cost2)
    w = cost2[tab.identity_col] - r2[tab.identity_col]
    y = tab.sign * w
    return LpSolution(Status.OPTIMAL, x, float(lp.c @ x), y,
                      iterations=tab.iterations, basis=tuple(tab.basis),
                      _b=lp.b)


def duality_gap(sol, lp):
    """``|c.x - b.y|`` for an optimal solution."""
    if not sol.optimal:
        raise NotOptimal(f"solution status is {sol.status.value}")
    return abs(float(lp.c @ sol.x) - float(lp.b @ sol.y))


def check_solution(sol, lp, tol=FEAS_TOL, gap_tol=GAP_TOL):
    """Return a list of violated optimality conditions (empty when valid)."""
    problems = []
    if not sol.optimal:
        return [f"status {sol.status.value}"]
    scale = max(1.0, float(np.max(np.abs(lp.A), initial=0.0)))
    if np.any(lp.A @ sol.x < lp.b - tol * scale * max(1.0, np.abs(sol.x).sum())):
        problems.append("primal infeasible")
    if np.any(sol.x < -tol):
        problems.append("x negative")
    if np.any(sol.y < -tol):
        problems.append("y negative")
    if np.any(sol.y @ lp.A > lp.c + tol * scale * max(1.0, np.abs(sol.y).sum())):
        problems.append("dual infeasible")
    if duality_gap(sol, lp) > gap_tol:
        problems.append("duality gap")
    return problems
