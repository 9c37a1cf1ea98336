"""Closed-form functions built from power-law pieces, and their autoconvolutions.

A piece is ``x -> c |d - 2x|^(-e)`` on an open interval ``(lo, hi)`` where
``d - 2x`` keeps one sign.  Two piece sets are built in:

* ``f0``: ``1/sqrt(2x + 1/2)`` on (-1/4, 1/4), whose autoconvolution is
  identically ``pi/2`` on [-1/2, 0];
* ``schinzel-counterexample``: ``1.392887 / (0.00195 - 2x)^(1/3)`` on
  (-1/4, 0) and ``0.338537 / (0.500166 - 2x)^0.65`` on (0, 1/4), with
  ``sup(f*f)`` about 1.528.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ._optimize import golden_max
from .stepfn import StepFunction

__all__ = [
    "PowerLawPiece",
    "QuadratureError",
    "BUILTIN",
    "builtin",
    "eval_pieces",
    "piece_integral",
    "total_integral",
    "autoconv_at",
    "sup_autoconv",
    "rasterize",
]

DEFAULT_TOL = 1e-8
DEFAULT_GRID = 2000


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed; ``estimate`` holds the best value found."""

    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class PowerLawPiece:
    lo: float
    hi: float
    c: float
    d: float
    e: float

    def __post_init__(self):
        if not -0.25 <= self.lo < self.hi <= 0.25:
            raise ValueError(f"need -1/4 <= lo < hi <= 1/4, got ({self.lo}, {self.hi})")
        if self.e >= 1:
            raise ValueError("exponent must be < 1 for an integrable singularity")
        s = (self.d - 2 * self.lo) * (self.d - 2 * self.hi)
        if s < 0:
            raise ValueError("d - 2x changes sign inside the piece")

    @property
    def singular_point(self) -> float:
        return 0.5 * self.d

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x > self.lo) & (x < self.hi)
        out = np.zeros(x.shape)
        out[inside] = self.c * np.abs(self.d - 2 * x[inside]) ** (-self.e)
        return out if out.ndim else float(out)


BUILTIN = {
    "f0": (PowerLawPiece(-0.25, 0.25, 1.0, -0.5, 0.5),),
    "schinzel-counterexample": (
        PowerLawPiece(-0.25, 0.0, 1.392887, 0.00195, 1.0 / 3.0),
        PowerLawPiece(0.0, 0.25, 0.338537, 0.500166, 0.65),
    ),
}


def builtin(name: str):
    try:
        return BUILTIN[name]
    except KeyError:
        raise KeyError(f"unknown piece set {name!r}; choose from {sorted(BUILTIN)}") from None


def eval_pieces(pieces, x):
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    for p in pieces:
        out = out + p(x)
    return out if out.ndim else float(out)


def _antiderivative(p: PowerLawPiece, x):
    w = p.d - 2.0 * np.asarray(x, dtype=float)
    k = p.c / (2.0 * (1.0 - p.e))
    return -k * np.sign(w) * np.abs(w) ** (1.0 - p.e)


def piece_integral(p: PowerLawPiece, lo=None, hi=None) -> float:
    """Exact integral of a piece over ``(lo, hi)`` clipped to its interval."""
    if p.e == 1:
        raise ValueError("exponent 1 is not integrable")
    lo = p.lo if lo is None else max(lo, p.lo)
    hi = p.hi if hi is None else min(hi, p.hi)
    if lo >= hi:
        return 0.0
    return float(_antiderivative(p, hi) - _antiderivative(p, lo))


def total_integral(pieces) -> float:
    return math.fsum(piece_integral(p) for p in pieces)


def _quad(fn, tol):
    """``(value, converged)`` for ``int_0^1 fn``."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            return integrate.quad(fn, 0.0, 1.0, epsabs=tol, epsrel=0.0, limit=200)[0], True
        except integrate.IntegrationWarning:
            pass
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return integrate.quad(fn, 0.0, 1.0, epsabs=tol, epsrel=0.0, limit=200)[0], False


def _segment_integral(p, q, x, a, b, tol, power=4):
    """``int_a^b p(t) q(x - t) dt`` for one piece pair, graded at both ends.

    With ``t - a = (b - a)/2 * s^power`` an endpoint singularity
    ``(t - a)^(-e)`` becomes ``s^(power(1-e) - 1)``, bounded for every
    ``e <= 3/4`` at ``power = 4``.  Distances to the singular points are
    formed from the endpoint and the offset separately, which avoids
    cancellation right next to a singularity.  Returns ``(value, converged)``.
    """
    half = 0.5 * (b - a)
    wp_a, wq_a = p.d - 2.0 * a, q.d - 2.0 * (x - a)
    wp_b, wq_b = p.d - 2.0 * b, q.d - 2.0 * (x - b)
    cp, ep, cq, eq = p.c, p.e, q.c, q.e

    def left(s):
        off = half * s**power
        return (cp * abs(wp_a - 2.0 * off) ** -ep * cq * abs(wq_a + 2.0 * off) ** -eq
                * half * power * s ** (power - 1))

    def right(s):
        off = half * s**power
        return (cp * abs(wp_b + 2.0 * off) ** -ep * cq * abs(wq_b - 2.0 * off) ** -eq
                * half * power * s ** (power - 1))

    v1, ok1 = _quad(left, tol / 2)
    v2, ok2 = _quad(right, tol / 2)
    return v1 + v2, ok1 and ok2


def _piece_at(pieces, t):
    for p in pieces:
        if p.lo < t < p.hi:
            return p
    return None


def autoconv_at(pieces, x: float, tol: float = DEFAULT_TOL) -> float:
    """``(f*f)(x) = int f(t) f(x - t) dt`` to absolute accuracy ``tol``.

    The t-axis is split at every piece boundary of ``f(t)`` and of
    ``f(x - t)``, so each segment sees a single pair of power laws; each
    segment is integrated with graded endpoints.
    """
    if x <= -0.5 or x >= 0.5:
        return 0.0
    lo, hi = max(-0.25, x - 0.25), min(0.25, x + 0.25)
    if lo >= hi:
        return 0.0
    cuts = {lo, hi}
    for p in pieces:
        for b in (p.lo, p.hi, x - p.lo, x - p.hi):
            if lo < b < hi:
                cuts.add(b)
    cuts = sorted(cuts)
    tol_seg = tol / (len(cuts) - 1)
    total = 0.0
    failed = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (a + b)
        p, q = _piece_at(pieces, mid), _piece_at(pieces, x - mid)
        if p is None or q is None:
            continue
        val, ok = _segment_integral(p, q, x, a, b, tol_seg)
        total += val
        if not ok:
            failed.append(f"[{a}, {b}]")
    if failed:
        raise QuadratureError(
            f"quadrature did not converge at x = {x} on {', '.join(failed)}", total
        )
    return total


def sup_autoconv(pieces, grid: int = DEFAULT_GRID, tol: float = DEFAULT_TOL):
    """``(sup, argmax)`` of ``f*f``: grid scan on (-1/2, 1/2), then golden-section refinement.

    The refinement runs on the two grid cells around the best node; on a
    flat top (as for ``f0``) the argmax is just one point of the plateau.
    """
    if grid < 3:
        raise ValueError("grid must have at least 3 points")
    xs = np.linspace(-0.5, 0.5, grid + 2)[1:-1]
    vals = np.array([autoconv_at(pieces, x, tol) for x in xs])
    i = int(np.argmax(vals))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, grid - 1)]
    x_best, v_best = golden_max(lambda x: autoconv_at(pieces, x, tol), a, b, tol=1e-9)
    if v_best < vals[i]:
        return float(vals[i]), float(xs[i])
    return float(v_best), float(x_best)


def rasterize(pieces, n: int) -> StepFunction:
    """Step function on ``n`` cells whose heights are the exact cell averages."""
    edges = -0.25 + np.arange(n + 1) / (2.0 * n)
    heights = np.zeros(n)
    for p in pieces:
        prim = _antiderivative(p, np.clip(edges, p.lo, p.hi))
        heights += np.diff(prim) * (2.0 * n)
    return StepFunction(heights)
