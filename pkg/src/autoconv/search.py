"""Local search for step functions with a small autoconvolution sup.

All step functions here are kept in polynomial normalization,
``sum a = sqrt(2n)``, so ``sup(f*f)`` of the unit-integral rescaling is simply
``max_k b_k`` with ``b = a * a``.

One iteration: solve the LP

    maximize sum g   s.t.   (a * g)_k <= max(a * a)   for every k,  g >= 0,

rescale its solution ``g`` back to ``sum g = sqrt(2n)``, then move to the best
point ``h = (1-t) f + t g`` on the segment.  Repeating this reaches a
fixpoint where the LP cannot beat ``sum a``.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import toeplitz

from ._optimize import golden_min
from .lp import LinearProgram, solve
from .stepfn import StepFunction, normalize

__all__ = [
    "SearchTrace",
    "lp_improve",
    "mix_line_search",
    "iterate",
    "restart_harness",
    "polish",
    "signed_search",
    "random_start",
]

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 500
LINE_GRID = 1001


@dataclass
class SearchTrace:
    iterations: list = field(default_factory=list)  # (sup, sum of LP optimum, t)
    best: StepFunction | None = None
    converged: bool = False
    start: StepFunction | None = None

    @property
    def sups(self) -> np.ndarray:
        return np.array([it[0] for it in self.iterations])

    @property
    def final_sup(self) -> float:
        return _sup(self.best.coeffs)

    def to_lines(self) -> str:
        """One line per iteration: index, sup, LP optimum, mixing weight."""
        rows = ["# iteration sup lp_sum t"]
        for i, (s, sb, t) in enumerate(self.iterations):
            rows.append(f"{i} {s!r} {sb!r} {t!r}")
        return "\n".join(rows) + "\n"


def _sup(a: np.ndarray) -> float:
    s = float(a.sum())
    return 2 * a.size * float(np.convolve(a, a).max()) / (s * s)


def _poly(f) -> StepFunction:
    if not isinstance(f, StepFunction):
        f = StepFunction(f)
    return normalize(f, "polynomial")


def conv_matrix(a: np.ndarray) -> np.ndarray:
    """``(2n-1) x n`` matrix with ``conv_matrix(a) @ g == np.convolve(a, g)``."""
    n = a.size
    col = np.concatenate([a, np.zeros(n - 1)])
    row = np.zeros(n)
    row[0] = a[0]
    return toeplitz(col, row)


def lp_improve(f: StepFunction):
    """One LP step.  Returns ``(g, lp_sum)``.

    ``g`` is the LP optimum rescaled to ``sum g = sqrt(2n)``; ``lp_sum`` is the
    LP optimum's own sum, at least ``sqrt(2n)`` because ``g = f`` is feasible.
    """
    f = _poly(f)
    if f.signed and np.any(f.coeffs < 0):
        raise ValueError("the LP step needs a nonnegative step function")
    a = f.coeffs
    n = a.size
    bound = float(np.convolve(a, a).max())
    lp = LinearProgram(np.ones(n), conv_matrix(a), np.full(2 * n - 1, bound))
    sol = solve(lp)
    if not sol.optimal:
        raise ArithmeticError(f"LP step failed with status {sol.status!r}")
    lp_sum = float(sol.x.sum())
    g = StepFunction(math.sqrt(2 * n) * sol.x / lp_sum)
    return g, lp_sum


def _phi_parts(a, g):
    aa = np.convolve(a, a)
    ag = np.convolve(a, g)
    gg = np.convolve(g, g)
    # (1-t)^2 aa + 2t(1-t) ag + t^2 gg = aa + 2t (ag - aa) + t^2 (aa - 2ag + gg)
    return aa, 2.0 * (ag - aa), aa - 2.0 * ag + gg


def mix_line_search(f: StepFunction, g: StepFunction, grid: int = LINE_GRID, tol: float = 1e-10):
    """Best ``t`` in [0, 1] for ``h = (1-t) f + t g``; returns ``(t, h)``.

    ``phi(t) = max_k`` of quadratics in ``t``.  Those quadratics need not be
    convex, so ``t`` is located by a grid scan and refined by golden-section
    search on the two cells around the best node.  Ties favour smaller ``t``.
    """
    if f.n != g.n:
        raise ValueError("step functions must have the same number of cells")
    a, b = f.coeffs, g.coeffs
    c0, c1, c2 = _phi_parts(a, b)
    scale = 2 * a.size / (a.sum() ** 2)

    def phi(t):
        return scale * float(np.max(c0 + t * (c1 + t * c2)))

    ts = np.linspace(0.0, 1.0, grid)
    vals = scale * np.max(c0[None, :] + ts[:, None] * (c1[None, :] + ts[:, None] * c2[None, :]), axis=1)
    i = int(np.argmin(vals))
    t_best, v_best = float(ts[i]), float(vals[i])
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, grid - 1)]
    t_ref, v_ref = golden_min(phi, lo, hi, tol=tol)
    if v_ref < v_best:
        t_best = float(t_ref)
    h = StepFunction((1.0 - t_best) * a + t_best * b, signed=f.signed or g.signed)
    return t_best, h


def iterate(f0: StepFunction, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SearchTrace:
    """Alternate LP steps and line searches until neither helps by ``tol``."""
    f = _poly(f0)
    s = _sup(f.coeffs)
    target = math.sqrt(2 * f.n)
    trace = SearchTrace(start=f)
    for it in range(max_iter):
        g, lp_sum = lp_improve(f)
        if lp_sum - target < tol:
            trace.iterations.append((s, lp_sum, 0.0))
            trace.converged = True
            break
        t, h = mix_line_search(f, g)
        h = _poly(h)
        s_new = _sup(h.coeffs)
        if s_new > s:  # line search guarantees phi(t) <= phi(0) up to rounding
            s_new, h, t = s, f, 0.0
        trace.iterations.append((s_new, lp_sum, t))
        improvement = s - s_new
        f, s = h, s_new
        log.debug("iteration %d: sup %.9f lp_sum %.9f t %.3g", it, s, lp_sum, t)
        if improvement < tol:
            trace.converged = True
            break
    trace.best = f
    return trace


def random_start(n: int, rng: np.random.Generator, signed: bool = False) -> StepFunction:
    """Uniform(0, 1) cell heights in polynomial normalization."""
    return normalize(StepFunction(rng.uniform(0.0, 1.0, n), signed=signed), "polynomial")


def _run_restart(args):
    n, child, tol, max_iter, signed = args
    rng = np.random.default_rng(child)
    start = random_start(n, rng, signed)
    if signed:
        return signed_search(start)
    return iterate(start, tol, max_iter)


def restart_harness(
    n: int,
    restarts: int,
    seed: int,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    workers: int | None = None,
    signed: bool = False,
) -> SearchTrace:
    """Best trace over ``restarts`` random starts; deterministic given ``seed``.

    Every restart draws from its own child of ``SeedSequence(seed)``, so the
    result does not depend on ``workers``.  Ties go to the earliest restart.
    """
    if restarts < 1:
        raise ValueError("restarts must be positive")
    children = np.random.SeedSequence(seed).spawn(restarts)
    jobs = [(n, c, tol, max_iter, signed) for c in children]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(_run_restart, jobs))
    else:
        traces = [_run_restart(j) for j in jobs]
    best = min(range(len(traces)), key=lambda i: (traces[i].final_sup, i))
    return traces[best]


def polish(
    f: StepFunction, step: float = 1e-3, min_step: float = 1e-9, max_sweeps: int = 10_000
) -> StepFunction:
    """Cyclic coordinate descent on the normalized sup with a shrinking step.

    Each coordinate is tried at ``+step`` and ``-step``; a move is kept only
    if it lowers the sup.  The step halves after a sweep without progress.
    Nonnegativity is kept unless ``f.signed``.
    """
    f = _poly(f)
    a = f.coeffs.copy()
    n = a.size
    b = np.convolve(a, a)
    total = a.sum()
    best = 2 * n * b.max() / (total * total)
    sweeps = 0
    while step >= min_step and sweeps < max_sweeps:
        sweeps += 1
        moved = False
        for j in range(n):
            for d in (step, -step):
                if not f.signed and a[j] + d < 0:
                    d = -a[j]
                    if d == 0:
                        continue
                new_total = total + d
                if new_total <= 0:
                    continue
                nb = b.copy()
                nb[j : j + n] += 2 * d * a
                nb[2 * j] += d * d
                val = 2 * n * nb.max() / (new_total * new_total)
                if val < best:
                    a[j] += d
                    b, total, best = nb, new_total, val
                    moved = True
                    break
        if not moved:
            step *= 0.5
    return normalize(StepFunction(a, signed=f.signed), "polynomial")


def signed_search(f0: StepFunction, step: float = 0.05, min_step: float = 1e-9) -> SearchTrace:
    """Search that allows negative heights: coordinate descent only.

    The LP step needs ``g >= 0`` and so has no signed analogue.
    """
    f = _poly(StepFunction(f0.coeffs, signed=True))
    s0 = _sup(f.coeffs)
    g = polish(f, step=step, min_step=min_step)
    trace = SearchTrace(start=f)
    trace.iterations.append((s0, float("nan"), 0.0))
    trace.iterations.append((_sup(g.coeffs), float("nan"), 0.0))
    trace.best = g
    trace.converged = True
    return trace
