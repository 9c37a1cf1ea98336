"""
A Fourier lower bound for sup(f*f)
==================================

Walk through the certificate for delta = 0.138 with the bundled cosine
polynomial G, then print the audit trail that ``certify`` records.
"""

import math

import numpy as np

from autoconv.lowerbound import (
    basic_bound,
    certify,
    forbidden_set,
    gain,
    kernel_l2sq_numeric,
    kernel_tilde,
    min_g,
    modified_bound_l,
    reference_params,
    z1_threshold,
)

p = reference_params()
print(f"delta = {p.delta}, u = {p.u}, {p.g_coeffs.size} cosine terms")

# the kernel: Fourier coefficients J0(pi delta j/u)^2 / u, all nonnegative
print("K~(0..4) =", np.round(kernel_tilde(p, np.arange(5)), 6))
value, tail = kernel_l2sq_numeric(p)
print(f"|K|_2^2 in [{value:.7f}, {value + tail:.7f}], constant used: {p.k2sq_bound:.7f}")

# G must stay positive on [-1/4, 1/4]; its minimum feeds the gain
m, x = min_g(p)
a = gain(p, m)
print(f"min G = {m:.7f} at x = {x:.5f}; gain = {a:.7f}")

# first bound: s + 1 + sqrt(s-1) sqrt(|K|^2 - 1) >= 2/u + gain
print(f"basic bound = {basic_bound(p, a):.6f}")

# tracking z = |f^(1)| improves it; z is capped by the sup itself
for s0 in (1.27, 1.2748, 1.28):
    z = z1_threshold(s0)
    print(f"  s0={s0}: z <= {z:.6f}, l(z) = {modified_bound_l(p, a, z):.6f}")

print("forbidden z-interval at s0 = 1.2748:", np.round(forbidden_set(p, a, 1.2748), 6))

rep = certify(p)
print(f"\ncertified: sup(f*f) >= {rep.certified_bound:.6f}")
for q, v, tag in rep.audit:
    print(f"  {q:>16} = {v:<22.12g} {tag}")
