"""
Searching for step functions by linear programming
==================================================

One step: maximize sum(g) subject to f*g <= max(f*f), then mix
h = (1-t) f + t g with the best t.  Repeat until the LP cannot beat f.
"""

import math

import numpy as np

from autoconv.search import iterate, lp_improve, restart_harness
from autoconv.stepfn import StepFunction

# a constant start is already a fixpoint: the middle constraint of the LP
# caps sum(g) at sum(f)
_, lp_sum = lp_improve(StepFunction(np.ones(50)))
print(f"constant n=50: LP optimum {lp_sum:.12f} vs sqrt(100) = {math.sqrt(100):.12f}")
print(f"iterate from it: sup {iterate(StepFunction(np.ones(50))).final_sup:.6f}")

# random starts
for n, restarts in ((10, 20), (50, 4)):
    tr = restart_harness(n, restarts, seed=0)
    print(f"n={n}, {restarts} restarts: best sup {tr.final_sup:.6f} "
          f"after {len(tr.iterations)} iterations (pi/2 = {math.pi / 2:.6f})")
    print("  trace:", np.round(tr.sups[:6], 5), "...")
