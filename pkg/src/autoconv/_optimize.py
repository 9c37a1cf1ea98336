"""One-dimensional minimization helpers."""

import math

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_min(f, a, b, tol=1e-10, max_iter=200):
    """Golden-section search for a minimum of a unimodal ``f`` on [a, b].

    Returns ``(x, f(x))``.  The endpoints are compared too, so a monotone
    ``f`` returns its smaller endpoint; ties go to the leftmost point.
    """
    lo, hi = a, b
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = f(d)
    best = min([(fa, i, xa) for i, (xa, fa) in enumerate(
        [(a, f(a)), (c, fc), (d, fd), (b, f(b))])])
    return best[2], best[0]


def golden_max(f, a, b, tol=1e-10, max_iter=200):
    x, fx = golden_min(lambda t: -f(t), a, b, tol, max_iter)
    return x, -fx


def bisect_root(g, lo, hi, tol=1e-12, max_iter=200):
    """Root of ``g`` in [lo, hi] given a sign change; returns the midpoint of the final bracket."""
    glo = g(lo)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)
