"""Fourier-analytic lower bound for the sup of an autoconvolution.

Fix ``0 < delta <= 1/4`` and the period ``u = 1/2 + delta``.  The kernel is
``K(x) = (1/delta) (beta o beta)(x/delta)`` with the arcsine density
``beta(x) = (2/pi) / sqrt(1 - 4x^2)`` on (-1/2, 1/2).  Its Fourier data are
Bessel functions: ``K^(xi) = J0(pi delta xi)^2`` and the period-``u``
coefficients are ``K~(j) = J0(pi delta j / u)^2 / u``.

A cosine polynomial ``G(x) = sum_j a_j cos(2 pi j x / u)`` that stays
positive on [-1/4, 1/4] yields the gain parameter

    gain = (4/u) (min G)^2 / sum_j (a_j^2 / J0(pi delta j / u)^2),

and any nonnegative unit-integral ``f`` with ``s = |f*f|_inf`` satisfies

    s + 1 + sqrt(s - 1) sqrt(|K|_2^2 - 1) >= 2/u + gain.

Tracking ``z1 = |f^(1)|`` sharpens the left side to
``s + 1 + 2 z1^2 k1 + sqrt(s - 1 - 2 z1^4) sqrt(|K|_2^2 - 1 - 2 k1^2)`` with
``k1 = J0(pi delta)^2``, while ``z1^2 <= (M/pi) sin(pi/M)`` whenever
``s <= M``.  :func:`certify` runs the whole chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from ._optimize import bisect_root, golden_min
from .bessel import bessel_j0
from .stepfn import PiecewiseLinear

__all__ = [
    "KERNEL_L2_CONSTANT",
    "CertificateParams",
    "BoundReport",
    "CertificateError",
    "bessel_j0",
    "kernel_tilde",
    "kernel_hat",
    "kernel_density",
    "kernel_l2sq_numeric",
    "kernel_l2sq_quadrature",
    "kernel_pairing",
    "hat_weights",
    "eval_g",
    "min_g",
    "gain",
    "basic_bound",
    "lemma_h_bound",
    "z1_threshold",
    "modified_bound_l",
    "forbidden_set",
    "certify",
    "reference_params",
]

# |K|_2^2 < KERNEL_L2_CONSTANT / delta for the arcsine kernel
KERNEL_L2_CONSTANT = 0.5747
BESSEL_DIVISOR_MIN = 1e-9
REPORT_SCHEMA_VERSION = 1


class CertificateError(ValueError):
    """The inputs cannot produce a valid certificate."""


@dataclass(frozen=True)
class CertificateParams:
    delta: float
    g_coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0))
    k2sq_bound: float | None = None
    k1: float | None = None

    def __post_init__(self):
        if not 0 < self.delta <= 0.25:
            raise ValueError(f"delta must lie in (0, 1/4], got {self.delta}")
        g = np.array(self.g_coeffs, dtype=float).ravel()
        g.setflags(write=False)
        object.__setattr__(self, "g_coeffs", g)
        if self.k2sq_bound is None:
            object.__setattr__(self, "k2sq_bound", KERNEL_L2_CONSTANT / self.delta)
        if self.k1 is None:
            object.__setattr__(self, "k1", bessel_j0(math.pi * self.delta) ** 2)

    @property
    def u(self) -> float:
        return 0.5 + self.delta

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(1, self.g_coeffs.size + 1)


def reference_params() -> CertificateParams:
    """delta = 0.138 with the bundled 119-term cosine polynomial."""
    from .coeffio import load_coefficients

    return CertificateParams(0.138, load_coefficients("g_delta0138_n119.txt"))


@dataclass
class BoundReport:
    min_g: float
    argmin_g: float
    gain: float
    basic_bound: float
    z1_threshold: float
    l_at_threshold: float
    forbidden_interval: tuple | None
    certified_bound: float
    audit: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "min_g": self.min_g,
            "argmin_g": self.argmin_g,
            "gain": self.gain,
            "basic_bound": self.basic_bound,
            "z1_threshold": self.z1_threshold,
            "l_at_threshold": self.l_at_threshold,
            "forbidden_interval": (
                None if self.forbidden_interval is None else list(self.forbidden_interval)
            ),
            "certified_bound": self.certified_bound,
            "audit": [
                {"quantity": q, "value": v, "formula": tag} for q, v, tag in self.audit
            ],
            "diagnostics": list(self.diagnostics),
        }


# --- kernel ----------------------------------------------------------------


def kernel_tilde(params: CertificateParams, j):
    """Period-u Fourier coefficient ``J0(pi delta j / u)^2 / u`` of the kernel."""
    d, u = params.delta, params.u
    return bessel_j0(math.pi * d * np.asarray(j, dtype=float) / u) ** 2 / u


def kernel_hat(delta: float, xi):
    """Fourier transform ``J0(pi delta xi)^2`` of the kernel."""
    return bessel_j0(math.pi * delta * np.asarray(xi, dtype=float)) ** 2


def kernel_density(x, delta: float):
    """``K(x)`` in closed form.

    The autocorrelation of the arcsine density is a complete elliptic
    integral, ``(beta o beta)(y) = (2/pi^2) K(m = 1 - y^2)`` for |y| < 1, with
    a logarithmic singularity at y = 0.
    """
    y = np.asarray(x, dtype=float) / delta
    out = np.zeros(y.shape)
    inside = np.abs(y) < 1
    out[inside] = 2.0 / (math.pi**2 * delta) * special.ellipkm1(y[inside] ** 2)
    return out if out.ndim else float(out)


def kernel_l2sq_numeric(params: CertificateParams, tail_terms: int = 100_000):
    """``|K|_2^2`` by Parseval on period u, truncated at ``|j| <= tail_terms``.

    Returns ``(value, tail_bound)``; the true norm lies in
    ``[value, value + tail_bound]``.  The tail uses ``J0(x)^2 <= 2/(pi x)``.
    """
    if tail_terms < 1000:
        raise ValueError("tail_terms must be at least 1000")
    d, u = params.delta, params.u
    j = np.arange(1, tail_terms + 1)
    terms = bessel_j0(math.pi * d * j / u) ** 4
    value = (1.0 + 2.0 * math.fsum(terms)) / u
    tail = 8.0 * u / (math.pi**4 * d * d * tail_terms)
    return value, tail


def kernel_l2sq_quadrature(delta: float) -> float:
    """``int K^2`` by direct quadrature of the closed-form kernel."""
    val, _ = integrate.quad(
        lambda x: kernel_density(x, delta) ** 2, 0.0, delta, limit=400, epsabs=1e-13
    )
    return 2.0 * val


def hat_weights(h: float, left: float, size: int, delta: float) -> np.ndarray:
    """``w[k] = int hat_k(x) K(x) dx`` for the hat functions of a node grid.

    ``hat_k`` is the piecewise-linear function that is 1 at ``left + (k+1) h``
    and 0 at the neighbouring nodes, so ``int g K = values @ w`` for every
    piecewise-linear ``g`` on that grid.
    """
    w = np.zeros(size)
    for k in range(size):
        c = left + (k + 1) * h
        a, b = c - h, c + h
        lo, hi = max(a, -delta), min(b, delta)
        if lo >= hi:
            continue
        hat = lambda x, a=a, c=c, b=b: (x - a) / (c - a) if x <= c else (b - x) / (b - c)
        pts = [p for p in (c, 0.0) if lo < p < hi]
        w[k], _ = integrate.quad(
            lambda x: hat(x) * kernel_density(x, delta),
            lo, hi, points=pts or None, limit=200, epsabs=1e-13, epsrel=1e-12,
        )
    return w


def kernel_pairing(g: PiecewiseLinear, delta: float, weights: np.ndarray | None = None) -> float:
    """``int g(x) K(x) dx`` for a piecewise-linear ``g``.

    ``weights`` from :func:`hat_weights` on the same grid may be passed to
    skip the quadrature.
    """
    if weights is None:
        weights = hat_weights(g.h, g.left, g.values.size, delta)
    return float(g.values @ weights)


# --- G and the gain ----------------------------------------------------------


def eval_g(params: CertificateParams, x):
    x = np.asarray(x, dtype=float)
    phase = 2 * math.pi * np.multiply.outer(x, params.frequencies) / params.u
    return np.cos(phase) @ params.g_coeffs


def min_g(params: CertificateParams, points_per_term: int = 20):
    """``(min, argmin)`` of G over [0, 1/4] (G is even).

    Dense grid scan, then golden-section refinement inside every grid cell
    pair that brackets a local minimum.
    """
    if params.g_coeffs.size == 0:
        raise ValueError("G has no coefficients")
    m = max(200, points_per_term * params.g_coeffs.size)
    x = np.linspace(0.0, 0.25, m + 1)
    y = eval_g(params, x)
    candidates = [(float(y[0]), 0.0), (float(y[-1]), 0.25)]
    f = lambda t: float(eval_g(params, t))
    local = np.flatnonzero((y[1:-1] <= y[:-2]) & (y[1:-1] <= y[2:])) + 1
    for i in local:
        xm, ym = golden_min(f, x[i - 1], x[i + 1], tol=1e-10)
        candidates.append((ym, xm))
    best = min(candidates)
    return float(best[0]), float(best[1])


def gain(params: CertificateParams, g_min: float | None = None) -> float:
    """Gain parameter of the cosine polynomial G; scale invariant in G."""
    a = params.g_coeffs
    if a.size == 0:
        return 0.0
    if g_min is None:
        g_min, _ = min_g(params)
    jv = bessel_j0(math.pi * params.delta * params.frequencies / params.u)
    bad = (np.abs(jv) <= BESSEL_DIVISOR_MIN) & (a != 0)
    if np.any(bad):
        raise CertificateError(
            f"kernel coefficient vanishes at frequencies {params.frequencies[bad].tolist()}"
        )
    used = a != 0
    denom = math.fsum(a[used] ** 2 / jv[used] ** 2)
    return 4.0 / params.u * g_min**2 / denom


# --- the inequalities ------------------------------------------------------


def _positive_root(b: float, c: float) -> float:
    """Smallest t >= 0 with ``t^2 + b t + c >= 0`` for ``b >= 0``."""
    if c >= 0:
        return 0.0
    disc = b * b - 4.0 * c
    if disc < 0:
        raise CertificateError("quadratic has no real root")
    return max(0.0, (-b + math.sqrt(disc)) / 2.0)


def basic_bound(params: CertificateParams, gain_value: float) -> float:
    """Smallest s >= 1 with ``s + 1 + sqrt(s-1) sqrt(k2sq - 1) >= 2/u + gain``."""
    if gain_value < 0:
        raise ValueError("gain must be nonnegative")
    if params.k2sq_bound <= 1:
        raise CertificateError("kernel L2 bound must exceed 1")
    b = math.sqrt(params.k2sq_bound - 1.0)
    r = 2.0 / params.u + gain_value - 1.0
    if r <= 1.0:
        return 1.0
    t = _positive_root(b, 1.0 - r)
    return 1.0 + t * t


def lemma_h_bound(m: float) -> float:
    """Largest ``|h^(1)|`` for a density on [-1/2, 1/2] bounded by ``m``."""
    if m < 1:
        raise ValueError("a unit-integral density on a unit interval has sup >= 1")
    return m / math.pi * math.sin(math.pi / m)


def z1_threshold(s0: float) -> float:
    """Upper bound on ``|f^(1)|`` when ``|f*f|_inf <= s0``."""
    return math.sqrt(lemma_h_bound(s0))


def modified_bound_l(params: CertificateParams, gain_value: float, z1: float) -> float:
    """Lower bound on ``|f*f|_inf`` given ``|f^(1)| = z1``.

    Smallest ``s >= 1 + 2 z1^4`` with
    ``s + 1 + 2 z1^2 k1 + sqrt(s - 1 - 2 z1^4) sqrt(k2sq - 1 - 2 k1^2) >= 2/u + gain``.
    """
    k1 = params.k1
    rest = params.k2sq_bound - 1.0 - 2.0 * k1 * k1
    if rest <= 0:
        raise CertificateError("k2sq_bound - 1 - 2 k1^2 must be positive")
    z2 = z1 * z1
    c = 2.0 + 2.0 * z2 * z2 + 2.0 * z2 * k1 - 2.0 / params.u - gain_value
    t = _positive_root(math.sqrt(rest), c)
    return 1.0 + 2.0 * z2 * z2 + t * t


def forbidden_set(
    params: CertificateParams, gain_value: float, s0: float, grid: int = 2000
):
    """The set ``{z in [0, 1] : l(z) < s0}`` as ``(lo, hi)``, or ``None`` if empty.

    Endpoints are located by bisection on ``l(z) - s0`` to 1e-7.  ``l`` is
    decreasing then increasing, so the set is a single interval.
    """
    if s0 < 1:
        raise ValueError("s0 must be at least 1")
    g = lambda z: modified_bound_l(params, gain_value, z) - s0
    z = np.linspace(0.0, 1.0, grid + 1)
    below = np.array([g(v) < 0 for v in z])
    if not below.any():
        return None
    idx = np.flatnonzero(below)
    i, k = idx[0], idx[-1]
    lo = 0.0 if i == 0 else bisect_root(g, z[i - 1], z[i], tol=1e-7)
    hi = 1.0 if k == grid else bisect_root(g, z[k], z[k + 1], tol=1e-7)
    return (float(lo), float(hi))


def _min_l(params, gain_value, zmax, grid=200):
    zs = np.linspace(0.0, zmax, grid + 1)
    vals = [modified_bound_l(params, gain_value, z) for z in zs]
    return min(vals)


def certify(params: CertificateParams, s0_tol: float = 1e-5) -> BoundReport:
    """Run the full lower-bound argument and keep an audit trail.

    The certified bound is the largest ``s0`` (found by bisection) such
    that ``l(z) >= s0`` for every admissible ``z <= z1_threshold(s0)``,
    never less than the basic bound.
    """
    audit = []
    diagnostics = []
    audit.append(("delta", params.delta, "parameter"))
    audit.append(("u", params.u, "u = 1/2 + delta"))
    audit.append(("k2sq_bound", params.k2sq_bound, "|K|_2^2 < 0.5747/delta"))
    audit.append(("k1", params.k1, "k1 = J0(pi delta)^2"))

    if params.g_coeffs.size:
        g_min, g_arg = min_g(params)
        audit.append(("min_g", g_min, "min of G on [0, 1/4]"))
        if g_min <= 0:
            diagnostics.append("G is not positive on [-1/4, 1/4]; gain set to 0")
            a = 0.0
        else:
            a = gain(params, g_min)
    else:
        g_min, g_arg = float("nan"), float("nan")
        diagnostics.append("no G coefficients; gain set to 0")
        a = 0.0
    audit.append(("gain", a, "(4/u) (min G)^2 / sum a_j^2 / J0(pi delta j/u)^2"))

    basic = basic_bound(params, a)
    audit.append(("basic_bound", basic, "s + 1 + sqrt(s-1) sqrt(k2sq-1) >= 2/u + gain"))

    def closes(s0):
        return _min_l(params, a, z1_threshold(s0)) >= s0

    try:
        closes(1.0)
    except CertificateError as exc:
        diagnostics.append(f"modified inequality unavailable: {exc}")
        return BoundReport(
            g_min, g_arg, a, basic, float("nan"), float("nan"), None, basic, audit, diagnostics
        )

    lo, hi = 1.0, 2.0
    while closes(hi):
        lo, hi = hi, 2.0 * hi
    while hi - lo > s0_tol:
        mid = 0.5 * (lo + hi)
        if closes(mid):
            lo = mid
        else:
            hi = mid
    s_mod = lo
    zt = z1_threshold(s_mod)
    l_t = _min_l(params, a, zt)
    audit.append(("z1_threshold", zt, "sqrt((s0/pi) sin(pi/s0))"))
    audit.append(("l_at_threshold", l_t, "min of l(z) over [0, z1_threshold]"))
    audit.append(("s0_modified", s_mod, "largest s0 with l >= s0 below the threshold"))

    certified = max(basic, s_mod)
    if basic > s_mod:
        diagnostics.append("modified chain weaker than the basic bound")
    forbidden = forbidden_set(params, a, certified)
    if forbidden is not None:
        audit.append(("forbidden_lo", forbidden[0], "{z : l(z) < s0}"))
        audit.append(("forbidden_hi", forbidden[1], "{z : l(z) < s0}"))
    audit.append(("certified_bound", certified, "max(basic_bound, s0_modified)"))
    return BoundReport(
        g_min, g_arg, a, basic, zt, l_t, forbidden, certified, audit, diagnostics
    )
