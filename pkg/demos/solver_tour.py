"""Fit the linear SVC and epsilon-SVR on small problems and read the diagnostics.

Run:  python demos/solver_tour.py
"""

import numpy as np

from shiftsvm import SvmParams, default_epsilon, predict_class, predict_raw, train_svc, train_svr
from shiftsvm.svm import primal_objective

# two points, one per class: the maximum-margin answer is w = 1, b = 0
svc = train_svc([[-1.0], [1.0]], [-1, 1], SvmParams(C=1.0, tolerance=1e-8))
print(f"SVC  w={svc.weights[0]:.6f} b={svc.bias:.2e}")

# the same two points as regression targets -2 and 2 with a 0.1 tube
svr = train_svr([[-1.0], [1.0]], [-2.0, 2.0], SvmParams(C=100.0, epsilon=0.1, tolerance=1e-8))
print(f"SVR  w={svr.weights[0]:.6f} b={svr.bias:.2e}")

rng = np.random.default_rng(0)
X = rng.normal(size=(200, 5))
t = X @ np.array([1.0, -2.0, 0.5, 0.0, 3.0]) + rng.normal(scale=0.3, size=200)
eps = default_epsilon(t)
# SMO stops on the pair-violation gap; DCD with its regularised bias can hit
# the epoch cap on the same data, which the diagnostics report
for solver in ("smo", "dcd"):
    m = train_svr(X, t, SvmParams(C=1.0, epsilon=eps, solver=solver))
    d = m.diagnostics
    print(f"{solver}: epochs={d.epochs:.1f} converged={d.converged} violation={d.final_violation:.1e} "
          f"primal={primal_objective(m, X, t, 1.0, eps, regularize_bias=solver == 'dcd'):.3f}")
    print("     w =", np.round(m.weights, 2))

labels = np.where(t > 0, 1, -1)
clf = train_svc(X, labels)
print("training accuracy:", np.mean(predict_class(clf, X) == labels))
print("first raw scores:", np.round(predict_raw(clf, X[:3]), 3))
