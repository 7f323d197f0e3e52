"""Compare SMOTE + SVC against regression on shifted targets on one dataset.

Run:  python demos/smote_vs_shift.py [dataset] [reps]
Defaults to ionosphere with 3 repetitions; expects the data files under
$SHIFTSVM_DATA or ./data.
"""

import sys

from shiftsvm import load_registered, read_registry
from shiftsvm.evaluation import compare_results, parse_method, run_experiment

name = sys.argv[1] if len(sys.argv) > 1 else "ionosphere"
reps = int(sys.argv[2]) if len(sys.argv) > 2 else 3

ds = load_registered(name)
k = read_registry()[name].folds
print(ds.name, ds.X.shape, f"{(ds.y == -1).sum()}:{(ds.y == 1).sum()}", f"{k}-fold x {reps}")

methods = ["csvm", "smote", "omega", "omega-tilde", "shift:1.0", "shift:1.2"]
res = run_experiment(ds, methods, reps=reps, k=k, seed=0)
for tag, r in res.items():
    ct = r.confusion
    print(f"{parse_method(tag).label:<14} G-mean {r.gmean_mean:5.1f}+-{r.gmean_std:3.1f}  F1 {r.f1_mean:5.1f}+-{r.f1_std:3.1f}"
          f"  T-={ct.t_minus:6.1f} F+={ct.f_plus:6.1f} F-={ct.f_minus:6.1f} T+={ct.t_plus:6.1f}")

# with only a few repetitions the signed-rank test cannot reach 5 %
print(compare_results(res["shift:1.0"], res["smote"]).report())
