"""
Step functions with small autoconvolution sup
=============================================

Load the bundled coefficient lists and recompute the quantities they are
known for.  Everything is exact arithmetic on node values of f*f.
"""

import math

import numpy as np

from autoconv.coeffio import load_step
from autoconv.stepfn import autoconv_sup, autoconvolve, c_constant, l1, normalize

# n cells of width 1/(2n) on [-1/4, 1/4]; f*f is piecewise linear with
# node values h * (a*a)_k
for name in ("step_n10.txt", "step_n208.txt"):
    f = load_step(name)
    print(f"{name}: n={f.n}, sum a - sqrt(2n) = {f.coeffs.sum() - math.sqrt(2 * f.n):+.1e}, "
          f"sup(f*f) = {autoconv_sup(f):.6f}")

# both are below pi/2, the value of the power-law function 1/sqrt(2x + 1/2)
print(f"pi/2 = {math.pi / 2:.6f}")

# the c-constant |f*f|_2^2 / (|f*f|_inf |f*f|_1)
f20 = load_step("step_n20_c.txt")
print(f"step_n20_c.txt: c = {c_constant(f20):.6f}  (log 16 / pi = {math.log(16) / math.pi:.6f})")

# a signed function: f*f dips below zero, and its maximum is lower still
fs = load_step("step_n150_signed.txt")
g = autoconvolve(normalize(fs))
print(f"step_n150_signed.txt: max f*f = {g.values.max():.6f}, min f*f = {g.values.min():.4f}, "
      f"|f*f|_1 = {l1(g):.4f}")

# where is the sup attained?  the n=208 function is nearly flat on a long
# stretch of [-1/2, 1/2]
g = autoconvolve(normalize(load_step("step_n208.txt")))
near = np.flatnonzero(g.values > g.values.max() - 1e-3)
print(f"n=208: {near.size} of {g.values.size} nodes within 1e-3 of the sup, "
      f"x from {g.nodes[near[0]]:.3f} to {g.nodes[near[-1]]:.3f}")
