"""
Power-law functions and their autoconvolutions
==============================================

f0(x) = 1/sqrt(2x + 1/2) has f0*f0 = pi/2 on the whole left half.  A
two-piece power law does better.  Both integrals are singular at piece
endpoints, handled by graded quadrature.
"""

import math

import numpy as np

from autoconv.analytic import autoconv_at, builtin, rasterize, sup_autoconv, total_integral
from autoconv.stepfn import autoconv_sup, autoconvolve

f0 = builtin("f0")
xs = np.linspace(-0.45, 0.45, 7)
print("f0*f0:", np.round([autoconv_at(f0, x) for x in xs], 8), " pi/2 =", round(math.pi / 2, 8))

ce = builtin("schinzel-counterexample")
print(f"two-piece function: integral {total_integral(ce):.6f}")
s, x = sup_autoconv(ce, grid=1000)
print(f"  sup(f*f) = {s:.6f} at x = {x:.4f}")

# step approximations by exact cell averages
for n in (100, 500, 2000):
    print(f"  n={n:5d}: step sup {autoconv_sup(rasterize(ce, n)):.6f}")

# f0 is unbounded at -1/4: every step approximation has f*f = 2 at its
# first node, so convergence holds pointwise only
for n in (100, 1000):
    g = autoconvolve(rasterize(f0, n))
    print(f"  f0, n={n}: first node {g.values[0]:.4f}, value at -1/4 {g(-0.25):.6f}")
