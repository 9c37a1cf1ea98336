"""Dense primal simplex for ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0``.

The slack basis is feasible from the start, so no phase one is needed.
Pricing is Dantzig's (most negative reduced cost) until the pivot count
passes ``10 * (rows + cols)``; after that Bland's rule takes over, which
cannot cycle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LinearProgram", "LPSolution", "solve"]

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7
OPT_TOL = 1e-9


@dataclass(frozen=True)
class LinearProgram:
    objective: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).ravel()
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).ravel()
        if A.shape != (b.size, c.size):
            raise ValueError(f"A has shape {A.shape}, expected {(b.size, c.size)}")
        if np.any(b < 0):
            raise ValueError("b must be nonnegative (origin-feasible programs only)")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)


@dataclass
class LPSolution:
    x: np.ndarray
    objective_value: float
    status: str  # "optimal", "unbounded" or "iteration-limit"
    duals: np.ndarray
    pivots: int

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _pivot(t, r, j):
    t[r] /= t[r, j]
    col = t[:, j].copy()
    col[r] = 0.0
    t -= np.outer(col, t[r])


def solve(lp: LinearProgram, max_pivots: int | None = None) -> LPSolution:
    m, n = lp.A.shape
    if max_pivots is None:
        max_pivots = 50 * (m + n) + 100
    bland_after = 10 * (m + n)
    # rows 0..m-1: [A | I | b]; row m: reduced costs [-c | 0 | objective]
    t = np.zeros((m + 1, n + m + 1))
    t[:m, :n] = lp.A
    t[:m, n : n + m] = np.eye(m)
    t[:m, -1] = lp.b
    t[m, :n] = -lp.objective
    basis = np.arange(n, n + m)

    status = "iteration-limit"
    pivots = 0
    while pivots < max_pivots:
        rc = t[m, :-1]
        if pivots < bland_after:
            j = int(np.argmin(rc))
            if rc[j] >= -OPT_TOL:
                status = "optimal"
                break
        else:
            neg = np.flatnonzero(rc < -OPT_TOL)
            if neg.size == 0:
                status = "optimal"
                break
            j = int(neg[0])
        col = t[:m, j]
        rows = np.flatnonzero(col > PIVOT_TOL)
        if rows.size == 0:
            status = "unbounded"
            break
        ratios = t[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        if pivots < bland_after:
            r = int(ties[np.argmax(col[ties])])
        else:
            r = int(ties[np.argmin(basis[ties])])
        _pivot(t, r, j)
        basis[r] = j
        pivots += 1
    else:
        rc = t[m, :-1]
        if rc.min() >= -OPT_TOL:
            status = "optimal"

    x_full = np.zeros(n + m)
    x_full[basis] = t[:m, -1]
    x = np.maximum(x_full[:n], 0.0)
    duals = t[m, n : n + m].copy()
    value = float(lp.objective @ x)
    if status == "optimal":
        slack = lp.A @ x - lp.b
        if slack.max(initial=0.0) > FEAS_TOL * max(1.0, np.abs(lp.b).max(initial=0.0)):
            raise ArithmeticError(f"simplex drifted: constraint violation {slack.max():.3e}")
    return LPSolution(x, value, status, duals, pivots)
