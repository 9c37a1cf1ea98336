"""Limit of the kernel method: minimizing ``|f_s * beta_delta|_2^2``.

For any ``f`` the kernel pairing ``int (f*f + f o f) K`` equals
``2 |f_s * beta_delta|_2^2`` where ``f_s`` is the symmetrization of ``f`` and
``beta_delta(x) = beta(x/delta)/delta``.  Its infimum over nonnegative
symmetric unit-integral ``f_s`` caps what any choice of G can give.  Here
``f_s`` and ``beta_delta`` are both step functions on a common grid of width
``h = 1/(2m)``; ``beta_delta`` is taken by exact cell averages of its
antiderivative ``arcsin(2x/delta)/pi``.  The resulting convex quadratic is
minimized over the scaled simplex by accelerated projected gradient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from .lowerbound import KERNEL_L2_CONSTANT

__all__ = [
    "QPResult",
    "beta_cell_averages",
    "quadratic_form",
    "project_simplex",
    "minimize_quadratic",
    "quadratic_min_bound",
    "bound_from_pairing",
]


class ConvergenceError(RuntimeError):
    pass


@dataclass
class QPResult:
    delta: float
    m: int
    coeffs: np.ndarray  # optimal f_s heights, unit integral
    q_value: float  # 2 |f_s * beta_delta|_2^2 at coeffs
    q_lower: float  # q_value minus the Frank-Wolfe gap: a lower bound on the minimum
    gap: float
    iterations: int
    bound: float


def beta_cell_averages(delta: float, h: float):
    """Cell averages of ``beta_delta`` on a grid of width ``h`` symmetric about 0.

    Returns ``(left, averages)`` with ``left`` the left edge of the first cell.
    """
    half = 0.5 * delta
    j = math.ceil(half / h - 0.5)
    left = -(j + 0.5) * h
    edges = left + h * np.arange(2 * j + 2)
    prim = np.arcsin(np.clip(edges / half, -1.0, 1.0)) / math.pi
    return left, np.diff(prim) / h


def quadratic_form(delta: float, m: int) -> np.ndarray:
    """Matrix ``P`` with ``a @ P @ a = 2 |f * beta_delta|_2^2`` for heights ``a``."""
    h = 1.0 / (2 * m)
    _, c = beta_cell_averages(delta, h)
    rows = m + c.size - 1
    col = np.zeros(rows)
    col[: c.size] = c
    row = np.zeros(m)
    row[0] = c[0]
    conv = toeplitz(col, row)  # node values of f * beta are h * conv @ a
    # |g|^2 for nodes y with zero endpoints: (h/3) y^T (2I + (S + S^T)/2) y
    tri = 2.0 * np.eye(rows) + 0.5 * (np.eye(rows, k=1) + np.eye(rows, k=-1))
    gram = conv.T @ tri @ conv
    return 2.0 * h**3 / 3.0 * gram


def project_simplex(v: np.ndarray, total: float) -> np.ndarray:
    """Euclidean projection onto ``{x >= 0, sum x = total}``."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - total
    k = np.arange(1, v.size + 1)
    rho = np.flatnonzero(u - css / k > 0)[-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(v - theta, 0.0)


def minimize_quadratic(p: np.ndarray, total: float, rtol=1e-10, max_iter=200_000):
    """Minimize ``x @ p @ x`` over ``{x >= 0, sum x = total}``.

    FISTA with gradient-based restarts.  Stops once the Frank-Wolfe gap,
    an upper bound on the suboptimality, falls below ``rtol`` times the
    objective.  Returns ``(x, value, gap, iterations)``.
    """
    n = p.shape[0]
    lip = 2.0 * np.linalg.eigvalsh(p)[-1]
    step = 1.0 / lip
    x = np.full(n, total / n)
    y = x.copy()
    t = 1.0
    value = x @ p @ x
    for it in range(1, max_iter + 1):
        grad = 2.0 * p @ y
        x_new = project_simplex(y - step * grad, total)
        if (y - x_new) @ (x_new - x) > 0:  # momentum points uphill: restart
            t = 1.0
            y = x
            continue
        t_new = 0.5 * (1 + math.sqrt(1 + 4 * t * t))
        y = x_new + (t - 1) / t_new * (x_new - x)
        x, t = x_new, t_new
        if it % 50 == 0:
            g = 2.0 * p @ x
            value = x @ p @ x
            gap = g @ x - total * g.min()
            if gap <= rtol * value:
                return x, value, gap, it
    g = 2.0 * p @ x
    value = x @ p @ x
    gap = g @ x - total * g.min()
    raise ConvergenceError(
        f"projected gradient did not converge in {max_iter} iterations (gap {gap:.3e})"
    )


def bound_from_pairing(pairing_min: float, delta: float, k2sq: float | None = None) -> float:
    """Smallest s >= 1 with ``s + 1 + sqrt(s-1) sqrt(k2sq - 1) >= pairing_min``."""
    if k2sq is None:
        k2sq = KERNEL_L2_CONSTANT / delta
    b = math.sqrt(k2sq - 1.0)
    c = 2.0 - pairing_min
    if c >= 0:
        return 1.0
    t = (-b + math.sqrt(b * b - 4.0 * c)) / 2.0
    return 1.0 + t * t


def quadratic_min_bound(delta: float, m: int = 400, rtol: float = 1e-10,
                        max_iter: int = 200_000) -> QPResult:
    """Best lower bound the kernel method can reach at this ``delta``."""
    if m < 50:
        raise ValueError("m must be at least 50")
    if not 0 < delta <= 0.25:
        raise ValueError("delta must lie in (0, 1/4]")
    p = quadratic_form(delta, m)
    h = 1.0 / (2 * m)
    x, value, gap, iters = minimize_quadratic(p, 1.0 / h, rtol, max_iter)
    x = 0.5 * (x + x[::-1])
    value = x @ p @ x
    lower = value - gap
    return QPResult(delta, m, x, value, lower, gap, iters, bound_from_pairing(lower, delta))
