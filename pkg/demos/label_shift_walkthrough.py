"""Walk through the target construction on a tiny 3:6 toy problem.

Run:  python demos/label_shift_walkthrough.py
"""

import numpy as np

from shiftsvm import assign_random_targets, shift_targets

y = np.array([-1, 1, 1, -1, 1, 1, 1, -1, 1])
base = assign_random_targets(y, seed=1)
print("labels          ", y)
print("random targets  ", base.targets.astype(int))
print(f"n_minus={base.n_minus} n_plus={base.n_plus}, smallest valid m = {base.m:.3f}")

for m in (base.m, 1.0, 1.5, 2.0):
    a = shift_targets(base, m)
    neg = np.sort(a.minority_targets)
    print(f"m={m:<5.3g} delta={a.delta_m:<5.3g} minority targets {neg}  range [{a.targets.min():g}, {a.targets.max():g}]")

# The majority targets never move and each sample keeps its sign.
a = shift_targets(base, 1.0)
assert np.array_equal(np.sign(a.targets), y)
assert np.array_equal(a.targets[y == 1], base.targets[y == 1])
