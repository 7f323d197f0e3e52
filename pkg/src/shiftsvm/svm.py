"""Linear support vector classifier and regressor trained in the dual.

Two solvers are available:

``"smo"`` (default)
    Sequential minimal optimisation over pairs of dual variables with
    second-order working set selection.  The bias is unregularised and
    recovered from the KKT conditions, so regression is translation
    covariant in its targets.

``"dcd"``
    Single-variable dual coordinate descent with a random permutation of
    the coordinates per epoch.  The bias is handled by augmenting every
    sample with a constant feature 1, which means the bias is regularised
    together with the weights.

Both minimise the usual primal objectives::

    SVC:  1/2 |w|^2 + C * sum(max(0, 1 - y_i f(x_i)))
    SVR:  1/2 |w|^2 + C * sum(max(0, |t_i - f(x_i)| - epsilon))

with ``f(x) = <w, x> + b`` (plus ``1/2 b^2`` for ``"dcd"`` with a bias).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

__all__ = [
    "SvmParams",
    "SolverDiagnostics",
    "LinearModel",
    "train_svc",
    "train_svr",
    "predict_raw",
    "predict_class",
    "default_epsilon",
    "primal_objective",
    "dump_model",
]

_TAU = 1e-12


@dataclass(frozen=True)
class SvmParams:
    C: float = 1.0
    epsilon: float | None = None  # None: default_epsilon(targets)
    fit_bias: bool = True
    tolerance: float = 1e-3
    max_epochs: int = 1000
    shuffle_seed: int = 0
    solver: str = "smo"

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError(f"C must be positive, got {self.C}")
        if self.epsilon is not None and not self.epsilon >= 0:
            raise ValueError(f"epsilon must be non-negative, got {self.epsilon}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_epochs < 1:
            raise ValueError(f"max_epochs must be >= 1, got {self.max_epochs}")
        if self.solver not in ("smo", "dcd"):
            raise ValueError(f"unknown solver {self.solver!r}")


@dataclass(frozen=True)
class SolverDiagnostics:
    epochs: float
    final_violation: float
    dual_objective: float
    converged: bool
    objective_trace: tuple = field(default=(), repr=False)


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray
    bias: float
    kind: str  # "classifier" | "regressor"
    diagnostics: SolverDiagnostics
    dual: np.ndarray = field(repr=False, default=None)

    @property
    def d(self):
        return self.weights.shape[0]


def _check_inputs(X, values, name):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError("X must be a 2-D sample matrix")
    values = np.asarray(values, dtype=float).ravel()
    if values.shape[0] != X.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but {name} has {values.shape[0]} entries")
    if not np.all(np.isfinite(X)):
        raise ValueError("non-finite feature values")
    if not np.all(np.isfinite(values)):
        raise ValueError(f"non-finite {name}")
    return X, values


def train_svc(X, y, params: SvmParams | None = None) -> LinearModel:
    """Train a hinge-loss linear classifier.

    Parameters
    ----------
    X : array of shape (n, d)
    y : array of shape (n,) with values in {-1, +1}
    params : SvmParams, optional

    Returns
    -------
    LinearModel with ``kind == "classifier"``.
    """
    params = params or SvmParams()
    X, y = _check_inputs(X, y, "labels")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be -1 or +1")
    if not (np.any(y < 0) and np.any(y > 0)):
        raise ValueError("train_svc needs at least one sample of each class")
    p = -np.ones_like(y)
    if params.solver == "smo" and params.fit_bias:
        alpha, w, b, diag = _smo(X, y, p, params.C, params.tolerance, params.max_epochs)
    else:
        alpha, w, b, diag = _dcd_svc(X, y, params)
    return LinearModel(w, b, "classifier", diag, alpha)


def train_svr(X, t, params: SvmParams | None = None) -> LinearModel:
    """Train an epsilon-insensitive linear regressor.

    When ``params.epsilon`` is None the tube width is derived from the
    targets with :func:`default_epsilon`.
    """
    params = params or SvmParams()
    X, t = _check_inputs(X, t, "targets")
    if X.shape[0] < 2:
        raise ValueError("train_svr needs at least 2 samples")
    eps = default_epsilon(t) if params.epsilon is None else float(params.epsilon)
    if params.solver == "smo" and params.fit_bias:
        n = X.shape[0]
        # stacked formulation: alpha (upper side) and alpha* (lower side)
        ys = np.concatenate([np.ones(n), -np.ones(n)])
        ps = np.concatenate([eps - t, eps + t])
        src = np.concatenate([np.arange(n), np.arange(n)])
        a, w, b, diag = _smo(X, ys, ps, params.C, params.tolerance, params.max_epochs, src)
        beta = a[:n] - a[n:]
    else:
        beta, w, b, diag = _dcd_svr(X, t, eps, params)
    return LinearModel(w, b, "regressor", diag, beta)


def predict_raw(model: LinearModel, x):
    """Return ``<w, x> + b`` for a single sample or each row of a matrix."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != model.d:
        raise ValueError(f"expected {model.d} features, got {x.shape[-1]}")
    out = x @ model.weights + model.bias
    return float(out) if x.ndim == 1 else out


def predict_class(model: LinearModel, x):
    """Sign-decode :func:`predict_raw`; a score of exactly zero maps to +1."""
    raw = predict_raw(model, x)
    if np.ndim(raw) == 0:
        return -1 if raw < 0 else 1
    return np.where(raw < 0, -1, 1)


def default_epsilon(targets) -> float:
    """Tube width ``IQR(targets) / 13.49``.

    Quartiles use linear interpolation at the 1-based positions
    ``0.25 * (n + 1)`` and ``0.75 * (n + 1)`` of the sorted targets,
    clamped to ``[1, n]``.
    """
    t = np.sort(np.asarray(targets, dtype=float).ravel())
    n = t.shape[0]
    if n == 0:
        raise ValueError("default_epsilon needs at least one target")

    def quartile(q):
        pos = min(max(q * (n + 1), 1.0), float(n)) - 1.0
        lo = int(np.floor(pos))
        hi = min(lo + 1, n - 1)
        return t[lo] + (pos - lo) * (t[hi] - t[lo])

    return float((quartile(0.75) - quartile(0.25)) / 13.49)


def primal_objective(model: LinearModel, X, values, C, epsilon=0.0, regularize_bias=False):
    """Primal objective of ``model`` on ``(X, values)``.

    ``values`` are labels for a classifier and targets for a regressor.
    """
    X = np.asarray(X, dtype=float)
    values = np.asarray(values, dtype=float)
    f = X @ model.weights + model.bias
    reg = 0.5 * model.weights @ model.weights
    if regularize_bias:
        reg += 0.5 * model.bias**2
    if model.kind == "classifier":
        loss = np.maximum(0.0, 1.0 - values * f)
    else:
        loss = np.maximum(0.0, np.abs(values - f) - epsilon)
    return float(reg + C * loss.sum())


def dump_model(model: LinearModel) -> str:
    """Plain-text key/value dump, for debugging only."""
    dg = model.diagnostics
    lines = [
        f"kind = {model.kind}",
        f"d = {model.d}",
        "weights = " + " ".join(repr(float(v)) for v in model.weights),
        f"bias = {model.bias!r}",
        f"epochs = {dg.epochs}",
        f"final_violation = {dg.final_violation!r}",
        f"dual_objective = {dg.dual_objective!r}",
        f"converged = {dg.converged}",
    ]
    return "\n".join(lines) + "\n"


def _smo(X, y, p, C, tol, max_epochs, src=None):
    """Solve ``min 1/2 a'Qa + p'a  s.t.  y'a = 0, 0 <= a <= C``.

    ``Q_kl = y_k y_l <x_src[k], x_src[l]>``; ``src`` maps each dual variable
    to its sample row (identity unless the problem is stacked).  Returns
    ``(alpha, w, b, diagnostics)`` with ``w = sum(y_k alpha_k x_src[k])``.
    """
    n = y.shape[0]
    if src is None:
        src = np.arange(n)
    K = X @ X.T
    alpha = np.zeros(n)
    G = p.copy()
    max_iter = max_epochs * n
    trace = np.zeros(max_epochs + 2)
    it, n_trace, violation = _smo_loop(K, src, y, p, float(C), float(tol), max_iter, alpha, G, trace)
    w = X.T @ np.bincount(src, weights=y * alpha, minlength=X.shape[0])
    b = -_smo_rho(alpha, y, G, C)
    dual = -0.5 * float(alpha @ (G + p))
    trace = list(trace[:n_trace])
    if trace[-1] != dual:
        trace.append(dual)
    diag = SolverDiagnostics(
        epochs=it / n,
        final_violation=float(violation),
        dual_objective=dual,
        converged=bool(violation < tol),
        objective_trace=tuple(float(v) for v in trace),
    )
    return alpha, w, float(b), diag


@numba.njit(cache=True)
def _smo_loop(K, src, y, p, C, tol, max_iter, alpha, G, trace):
    n = y.shape[0]
    trace[0] = 0.0
    n_trace = 1
    it = 0
    violation = np.inf
    while True:
        # maximal violating pair, second-order choice of j
        gmax = -np.inf
        gmin = np.inf
        i = -1
        for t in range(n):
            v = -y[t] * G[t]
            if (y[t] > 0 and alpha[t] < C) or (y[t] < 0 and alpha[t] > 0):
                if v > gmax:
                    gmax = v
                    i = t
            if (y[t] > 0 and alpha[t] > 0) or (y[t] < 0 and alpha[t] < C):
                if v < gmin:
                    gmin = v
        if i < 0 or gmin == np.inf:
            violation = 0.0
            break
        violation = gmax - gmin
        if violation < tol or it >= max_iter:
            break
        si = src[i]
        kii = K[si, si]
        j = -1
        best = np.inf
        for t in range(n):
            if (y[t] > 0 and alpha[t] > 0) or (y[t] < 0 and alpha[t] < C):
                diff = gmax + y[t] * G[t]
                if diff > 0:
                    st = src[t]
                    quad = kii + K[st, st] - 2.0 * K[si, st]
                    if quad <= 0:
                        quad = 1e-12
                    score = -diff * diff / quad
                    if score < best:
                        best = score
                        j = t
        if j < 0:
            break
        sj = src[j]
        q = kii + K[sj, sj] - 2.0 * K[si, sj]
        if q <= 0:
            q = 1e-12
        ai = alpha[i]
        aj = alpha[j]
        if y[i] != y[j]:
            delta = (-G[i] - G[j]) / q
            diff = ai - aj
            ni = ai + delta
            nj = aj + delta
            if diff > 0:
                if nj < 0:
                    nj = 0.0
                    ni = diff
            elif ni < 0:
                ni = 0.0
                nj = -diff
            if diff > 0:
                if ni > C:
                    ni = C
                    nj = C - diff
            elif nj > C:
                nj = C
                ni = C + diff
        else:
            delta = (G[i] - G[j]) / q
            total = ai + aj
            ni = ai - delta
            nj = aj + delta
            if total > C:
                if ni > C:
                    ni = C
                    nj = total - C
            elif nj < 0:
                nj = 0.0
                ni = total
            if total > C:
                if nj > C:
                    nj = C
                    ni = total - C
            elif ni < 0:
                ni = 0.0
                nj = total
        alpha[i] = ni
        alpha[j] = nj
        di = (ni - ai) * y[i]
        dj = (nj - aj) * y[j]
        for t in range(n):
            st = src[t]
            G[t] += y[t] * (di * K[st, si] + dj * K[st, sj])
        it += 1
        if it % n == 0:
            acc = 0.0
            for t in range(n):
                acc += alpha[t] * (G[t] + p[t])
            trace[n_trace] = -0.5 * acc
            n_trace += 1
    return it, n_trace, violation


def _smo_rho(alpha, y, G, C):
    yg = y * G
    at_upper = alpha >= C
    at_lower = alpha <= 0
    free = ~(at_upper | at_lower)
    if free.any():
        return float(np.mean(yg[free]))
    # all bounded: any rho between the bounds is optimal
    ub_mask = (at_upper & (y < 0)) | (at_lower & (y > 0))
    lb_mask = (at_upper & (y > 0)) | (at_lower & (y < 0))
    ub = yg[ub_mask].min() if ub_mask.any() else np.inf
    lb = yg[lb_mask].max() if lb_mask.any() else -np.inf
    if np.isinf(ub):
        return float(lb)
    if np.isinf(lb):
        return float(ub)
    return float((ub + lb) / 2)


def _augment(X, fit_bias):
    if fit_bias:
        return np.hstack([X, np.ones((X.shape[0], 1))])
    return X


def _dcd_svc(X, y, params):
    Xa = _augment(X, params.fit_bias)
    n = Xa.shape[0]
    C = params.C
    rng = np.random.default_rng(params.shuffle_seed)
    qdiag = np.einsum("ij,ij->i", Xa, Xa)
    alpha = np.zeros(n)
    w = np.zeros(Xa.shape[1])
    trace = [0.0]
    violation = np.inf
    epoch = 0
    for epoch in range(1, params.max_epochs + 1):
        violation = 0.0
        for i in rng.permutation(n):
            g = y[i] * (w @ Xa[i]) - 1.0
            if alpha[i] <= 0:
                pg = min(g, 0.0)
            elif alpha[i] >= C:
                pg = max(g, 0.0)
            else:
                pg = g
            violation = max(violation, abs(pg))
            if pg != 0.0 and qdiag[i] > 0:
                new = min(max(alpha[i] - g / qdiag[i], 0.0), C)
                w += (new - alpha[i]) * y[i] * Xa[i]
                alpha[i] = new
        trace.append(float(alpha.sum() - 0.5 * w @ w))
        if violation <= params.tolerance:
            break
    return alpha, *_split_bias(w, params.fit_bias), SolverDiagnostics(
        epochs=epoch,
        final_violation=float(violation),
        dual_objective=trace[-1],
        converged=bool(violation <= params.tolerance),
        objective_trace=tuple(trace),
    )


def _dcd_svr(X, t, eps, params):
    Xa = _augment(X, params.fit_bias)
    n = Xa.shape[0]
    C = params.C
    rng = np.random.default_rng(params.shuffle_seed)
    qdiag = np.einsum("ij,ij->i", Xa, Xa)
    beta = np.zeros(n)
    w = np.zeros(Xa.shape[1])
    trace = [0.0]
    violation = np.inf
    epoch = 0
    for epoch in range(1, params.max_epochs + 1):
        violation = 0.0
        for i in rng.permutation(n):
            g = w @ Xa[i] - t[i]
            gp, gn = g + eps, g - eps
            b_i = beta[i]
            if b_i == 0:
                v = max(gn, -gp, 0.0)
            elif b_i >= C:
                v = max(gp, 0.0)
            elif b_i <= -C:
                v = max(-gn, 0.0)
            elif b_i > 0:
                v = abs(gp)
            else:
                v = abs(gn)
            violation = max(violation, v)
            q = qdiag[i]
            if v == 0.0 or q <= 0:
                continue
            if gp < q * b_i:
                d = -gp / q
            elif gn > q * b_i:
                d = -gn / q
            else:
                d = -b_i
            new = min(max(b_i + d, -C), C)
            w += (new - b_i) * Xa[i]
            beta[i] = new
        trace.append(float(t @ beta - eps * np.abs(beta).sum() - 0.5 * w @ w))
        if violation <= params.tolerance:
            break
    return beta, *_split_bias(w, params.fit_bias), SolverDiagnostics(
        epochs=epoch,
        final_violation=float(violation),
        dual_objective=trace[-1],
        converged=bool(violation <= params.tolerance),
        objective_trace=tuple(trace),
    )


def _split_bias(w, fit_bias):
    if fit_bias:
        return w[:-1].copy(), float(w[-1])
    return w, 0.0

