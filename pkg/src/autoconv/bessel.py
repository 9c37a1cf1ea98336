"""Bessel function of the first kind, order zero.

Three regimes, each accurate to about 1e-14 absolute:

* ``|x| <= 8``: the power series ``sum (-1)^k (x/2)^(2k) / (k!)^2``;
* ``8 < |x| < 20``: Miller's backward recurrence normalized by
  ``J0 + 2 sum J_2k = 1``;
* ``|x| >= 20``: Hankel's asymptotic expansion, truncated at its smallest term.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["bessel_j0", "j0_series"]

SERIES_MAX = 8.0
ASYMPTOTIC_MIN = 20.0


def j0_series(x: float, terms: int = 60) -> float:
    q = -0.25 * x * x
    term = 1.0
    total = 1.0
    for k in range(1, terms):
        term *= q / (k * k)
        total += term
        if abs(term) < 1e-17 * max(1.0, abs(total)):
            break
    return total


def _j0_miller(x: float) -> float:
    start = 2 * (int(x + 12.0 * x ** (1 / 3) + 30) // 2)
    j_next, j_cur = 0.0, 1e-300
    norm = 0.0
    for k in range(start, 0, -1):
        j_prev = 2.0 * k / x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if abs(j_cur) > 1e250:
            j_next *= 1e-250
            j_cur *= 1e-250
            norm *= 1e-250
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_cur
    j0 = j_cur
    norm += j0
    return j0 / norm


def _j0_hankel(x: float) -> float:
    # P ~ sum (-1)^k a_{2k} / x^{2k}, Q ~ -sum (-1)^k a_{2k+1} / x^{2k+1}
    # with a_m = prod_{i=1..m} (2i-1)^2 / (m! 8^m)
    p = q = 0.0
    a = 1.0
    last = math.inf
    m = 0
    while True:
        t = a / x**m
        if abs(t) >= last or abs(t) < 1e-18:
            break
        last = abs(t)
        sign = -1.0 if (m // 2) % 2 else 1.0
        if m % 2 == 0:
            p += sign * t
        else:
            q -= sign * t
        m += 1
        a *= (2 * m - 1) ** 2 / (8.0 * m)
    chi = x - 0.25 * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def _j0_scalar(x: float) -> float:
    x = abs(float(x))
    if x <= SERIES_MAX:
        return j0_series(x)
    if x < ASYMPTOTIC_MIN:
        return _j0_miller(x)
    return _j0_hankel(x)


def _j0_hankel_array(x: np.ndarray) -> np.ndarray:
    # 40 terms: at x >= 20 the terms still decrease through m = 40
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    a = 1.0
    xm = np.ones_like(x)
    for m in range(40):
        sign = -1.0 if (m // 2) % 2 else 1.0
        if m % 2 == 0:
            p += sign * a / xm
        else:
            q -= sign * a / xm
        a *= (2 * m + 1) ** 2 / (8.0 * (m + 1))
        xm = xm * x
    chi = x - 0.25 * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def bessel_j0(x):
    """``J0(x)`` for a scalar or array argument."""
    if np.ndim(x) == 0:
        return _j0_scalar(x)
    arr = np.abs(np.asarray(x, dtype=float))
    out = np.empty(arr.shape)
    far = arr >= ASYMPTOTIC_MIN
    out[far] = _j0_hankel_array(arr[far])
    out[~far] = [_j0_scalar(v) for v in arr[~far]]
    return out
