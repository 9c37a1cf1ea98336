"""Step functions on [-1/4, 1/4] and their autoconvolutions.

A step function with ``n`` cells of width ``h = 1/(2n)`` is stored by its raw
cell heights ``a_j``; the cells are the half-open intervals
``[-1/4 + j h, -1/4 + (j+1) h)``.  Equivalently ``a`` is the coefficient
vector of the polynomial ``P(x) = a_0 + a_1 x + ... + a_{n-1} x^{n-1}``, and
the node values of ``f*f`` are ``h * b_k`` where ``b`` are the coefficients of
``P^2``.

Nothing is normalized implicitly.  Quantities that should not depend on the
scale of ``f`` (the normalized sup, the c-constant) are computed from raw
coefficients and are invariant under ``a -> lambda a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

__all__ = [
    "StepFunction",
    "PiecewiseLinear",
    "autoconvolve",
    "autocorrelate",
    "sup_norm",
    "l2sq",
    "l1",
    "c_constant",
    "autoconv_sup",
    "fourier_hat",
    "fourier_tilde",
    "symmetrize",
    "normalize",
    "is_unit_integral",
]

UNIT_INTEGRAL_TOL = 1e-9
_XI_ZERO = 1e-12


@dataclass(frozen=True)
class StepFunction:
    """Nonnegative (or, with ``signed=True``, real) step function on [-1/4, 1/4]."""

    coeffs: np.ndarray
    signed: bool = False

    def __post_init__(self):
        a = np.array(self.coeffs, dtype=float).ravel()
        if a.size == 0:
            raise ValueError("a step function needs at least one cell")
        if not np.all(np.isfinite(a)):
            raise ValueError("coefficients must be finite")
        if not self.signed and np.any(a < 0):
            raise ValueError("negative coefficient in an unsigned step function")
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)

    @property
    def n(self) -> int:
        return self.coeffs.size

    @property
    def h(self) -> float:
        return 1.0 / (2 * self.n)

    @property
    def edges(self) -> np.ndarray:
        return -0.25 + self.h * np.arange(self.n + 1)

    def integral(self) -> float:
        return self.h * float(np.sum(self.coeffs))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.floor((x + 0.25) / self.h).astype(int)
        inside = (idx >= 0) & (idx < self.n)
        out = np.zeros(x.shape)
        out[inside] = self.coeffs[idx[inside]]
        return out

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear function vanishing outside its support.

    ``values[k]`` is the value at ``left + (k+1) h``; the function is zero at
    ``left`` and at ``left + (len(values)+1) h`` and linear in between nodes.
    """

    h: float
    left: float
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def right(self) -> float:
        return self.left + (self.values.size + 1) * self.h

    @property
    def nodes(self) -> np.ndarray:
        return self.left + self.h * np.arange(1, self.values.size + 1)

    def full_nodes(self):
        """Node positions and values including the two zero endpoints."""
        x = self.left + self.h * np.arange(self.values.size + 2)
        y = np.concatenate(([0.0], self.values, [0.0]))
        return x, y

    def __call__(self, x):
        xs, ys = self.full_nodes()
        return np.interp(x, xs, ys, left=0.0, right=0.0)


def _as_step(f) -> StepFunction:
    return f if isinstance(f, StepFunction) else StepFunction(f, signed=True)


def autoconvolve(f: StepFunction) -> PiecewiseLinear:
    """Node representation of ``f*f``, supported on [-1/2, 1/2]."""
    f = _as_step(f)
    b = np.convolve(f.coeffs, f.coeffs)
    return PiecewiseLinear(f.h, -0.5, f.h * b)


def autocorrelate(f: StepFunction) -> PiecewiseLinear:
    """Node representation of ``(f o f)(x) = int f(t) f(x+t) dt``.

    Lags run from ``-(n-1)`` to ``n-1``; the node for lag ``k`` sits at ``x = k h``.
    """
    f = _as_step(f)
    c = np.correlate(f.coeffs, f.coeffs, mode="full")
    return PiecewiseLinear(f.h, -f.n * f.h, f.h * c)


def sup_norm(g: PiecewiseLinear) -> float:
    """``max(0, max_k g(x_k))``: the supremum of ``g`` over the real line."""
    if g.values.size == 0:
        return 0.0
    return max(0.0, float(np.max(g.values)))


def l2sq(g: PiecewiseLinear) -> float:
    """Exact ``int g^2`` of a piecewise-linear function."""
    _, y = g.full_nodes()
    y0, y1 = y[:-1], y[1:]
    return g.h / 3.0 * float(np.sum(y0 * y0 + y0 * y1 + y1 * y1))


def l1(g: PiecewiseLinear) -> float:
    """Exact ``int |g|``; segments that change sign are split at their root."""
    _, y = g.full_nodes()
    y0, y1 = y[:-1], y[1:]
    same = y0 * y1 >= 0
    total = 0.5 * g.h * np.sum(np.abs(y0[same] + y1[same]))
    p, q = np.abs(y0[~same]), np.abs(y1[~same])
    # |y0| on a fraction p/(p+q) of the cell, |y1| on the rest
    total += 0.5 * g.h * np.sum((p * p + q * q) / (p + q))
    return float(total)


def c_constant(f: StepFunction) -> float:
    """``|f*f|_2^2 / (|f*f|_inf |f*f|_1)``, invariant under rescaling ``f``."""
    g = autoconvolve(f)
    s, m = sup_norm(g), l1(g)
    if s == 0.0 or m == 0.0:
        raise ValueError("c-constant is undefined for the zero function")
    return l2sq(g) / (s * m)


def autoconv_sup(f) -> float:
    """``sup(f*f) / (int f)^2``, i.e. ``2n max_k b_k / (sum a)^2``.

    This is the sup of the autoconvolution of ``f`` rescaled to unit
    integral, the quantity quoted for every example step function.
    """
    a = np.asarray(f.coeffs if isinstance(f, StepFunction) else f, dtype=float)
    total = float(np.sum(a))
    if total == 0.0:
        raise ValueError("coefficients sum to zero")
    b = np.convolve(a, a)
    return 2 * a.size * max(0.0, float(b.max())) / (total * total)


def fourier_hat(f: StepFunction, xi):
    """``int f(x) exp(-2 pi i x xi) dx`` in closed form; ``xi`` may be an array."""
    f = _as_step(f)
    xi = np.asarray(xi, dtype=float)
    scalar = xi.ndim == 0
    xi = np.atleast_1d(xi)
    out = np.empty(xi.shape, dtype=complex)
    small = np.abs(xi) < _XI_ZERO
    out[small] = f.integral()
    w = xi[~small]
    if w.size:
        x = f.edges
        e = np.exp(-2j * np.pi * np.outer(w, x))
        cells = (e[:, 1:] - e[:, :-1]) / (-2j * np.pi * w[:, None])
        out[~small] = cells @ f.coeffs
    return out[0] if scalar else out


def fourier_tilde(f: StepFunction, j, u: float):
    """Period-``u`` coefficient ``(1/u) int f(x) exp(-2 pi i x j / u) dx``."""
    if u <= 0:
        raise ValueError("period must be positive")
    return fourier_hat(f, np.asarray(j, dtype=float) / u) / u


def symmetrize(f: StepFunction) -> StepFunction:
    """``(f(x) + f(-x)) / 2``."""
    f = _as_step(f)
    return StepFunction(0.5 * (f.coeffs + f.coeffs[::-1]), signed=f.signed)


def normalize(
    f: StepFunction, convention: Literal["unit-integral", "polynomial"] = "unit-integral"
) -> StepFunction:
    """Rescale to integral 1 (``unit-integral``) or to ``sum a = sqrt(2n)`` (``polynomial``)."""
    f = _as_step(f)
    total = float(np.sum(f.coeffs))
    if total == 0.0:
        raise ValueError("cannot normalize coefficients that sum to zero")
    if convention == "unit-integral":
        target = 2.0 * f.n
    elif convention == "polynomial":
        target = math.sqrt(2.0 * f.n)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return StepFunction(f.coeffs * (target / total), signed=f.signed)


def is_unit_integral(f: StepFunction, tol: float = UNIT_INTEGRAL_TOL) -> bool:
    return abs(f.integral() - 1.0) <= tol
