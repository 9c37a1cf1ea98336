"""
How far can the kernel method go?
=================================

For each delta the pairing of f*f + f o f with the kernel equals
2 |f_s * beta_delta|^2.  Minimizing that convex quadratic over step
functions shows the best bound any G could give at this delta.
"""

from autoconv.qpbound import quadratic_min_bound

print(" delta    m   min 2|f_s*beta|^2   bound")
for delta in (0.12, 0.13, 0.14, 0.15, 0.16):
    r = quadratic_min_bound(delta, 200)
    print(f" {delta:.2f}  {r.m:4d}   {r.q_value:.8f}        {r.bound:.5f}")

# grid refinement at the best delta
for m in (100, 200, 400):
    r = quadratic_min_bound(0.14, m)
    print(f"delta=0.14, m={m}: bound {r.bound:.6f} ({r.iterations} iterations)")
