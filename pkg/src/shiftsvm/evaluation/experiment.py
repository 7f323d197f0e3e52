"""Repeated stratified k-fold cross-validation of the compared methods.

Every random draw comes from a seed derived from
``SeedSequence([base_seed, rep, fold, purpose])``, so fold splits depend only
on ``(base_seed, rep)`` and are shared by all methods run with the same base
seed.  That makes results of different methods paired per repetition.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial

import numpy as np

from ..dataio import Dataset
from ..labelshift import assign_random_targets, plain_binary_targets, shift_targets
from ..smote import SmoteParams, smote_balance
from ..svm import SvmParams, predict_class, train_svc, train_svr
from .metrics import ConfusionTable, confusion_table, metrics
from .wilcoxon import WilcoxonResult, wilcoxon_signed_rank

__all__ = [
    "PURPOSES",
    "derive_seed",
    "stratified_kfold",
    "Method",
    "parse_method",
    "FoldResult",
    "ExperimentResult",
    "run_experiment",
    "aggregate",
    "fold_records",
    "write_fold_log",
    "read_fold_log",
    "compare_results",
    "Comparison",
]

PURPOSES = {"folds": 0, "assignment": 1, "smote": 2, "solver-shuffle": 3}


def derive_seed(base_seed, rep, fold, purpose):
    """Independent random stream for one (repetition, fold, purpose)."""
    return np.random.SeedSequence([int(base_seed), int(rep), int(fold), PURPOSES[purpose]])


def _int_seed(seq):
    return int(seq.generate_state(1)[0])


def stratified_kfold(labels, k, seed=None):
    """Split sample indices into ``k`` disjoint test folds, stratified by class.

    Each class is shuffled and dealt round-robin over the folds, the majority
    class continuing where the minority class stopped, so per-fold class
    counts differ from ``n_class / k`` by less than one and fold sizes differ
    by at most one.
    """
    y = labels.y if isinstance(labels, Dataset) else np.asarray(labels).ravel()
    k = int(k)
    if k < 2:
        raise ValueError("need at least 2 folds")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(y.shape[0], dtype=int)
    offset = 0
    for cls in (-1, 1):
        idx = np.flatnonzero(y == cls)
        if idx.size < k:
            raise ValueError(f"class {cls:+d} has {idx.size} samples, fewer than k={k} folds")
        idx = rng.permutation(idx)
        fold_of[idx] = (offset + np.arange(idx.size)) % k
        offset += idx.size
    return [np.flatnonzero(fold_of == f) for f in range(k)]


@dataclass(frozen=True)
class Method:
    """One of: ``csvm``, ``smote``, ``omega``, ``omega-tilde``, ``shift`` (with ``m``)."""

    kind: str
    m: float | None = None

    KINDS = ("csvm", "smote", "omega", "omega-tilde", "shift")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown method {self.kind!r}; choose from {', '.join(self.KINDS)}")
        if (self.kind == "shift") != (self.m is not None):
            raise ValueError("a multiplier m is required for shift and only for shift")

    @property
    def tag(self):
        if self.kind != "shift":
            return self.kind
        return f"shift:{self.m:.1f}" if round(self.m, 1) == self.m else f"shift:{self.m:g}"

    @property
    def label(self):
        if self.kind == "shift":
            return f"Omega~s({self.m:.1f})"
        return {"csvm": "cSVM", "smote": "SMOTE", "omega": "Omega", "omega-tilde": "Omega~"}[self.kind]

    @property
    def is_regression(self):
        return self.kind in ("omega", "omega-tilde", "shift")

    def check(self, n_minus, n_plus):
        if self.kind == "shift" and self.m * n_plus - n_minus < -1e-9 * n_plus:
            raise ValueError(f"shift:{self.m:g} needs m >= n_minus/n_plus = {n_minus}/{n_plus} "
                             f"= {n_minus / n_plus:.4f}")


def parse_method(text) -> Method:
    if isinstance(text, Method):
        return text
    text = text.strip()
    if text.startswith("shift:"):
        return Method("shift", float(text.split(":", 1)[1]))
    return Method(text)


@dataclass(frozen=True)
class FoldResult:
    dataset: str
    method: str
    rep: int
    fold: int
    confusion: ConfusionTable
    gmean: float
    f1: float
    converged: bool = True


def _fit_predict(method, X_train, y_train, X_test, svm_params, smote_params, base_seed, rep, fold):
    params = svm_params
    if params.solver == "dcd":
        params = replace(params, shuffle_seed=_int_seed(derive_seed(base_seed, rep, fold, "solver-shuffle")))
    if method.kind == "csvm":
        model = train_svc(X_train, y_train, params)
    elif method.kind == "smote":
        minority = X_train[y_train == -1]
        n_plus = int((y_train == 1).sum())
        sp = SmoteParams(smote_params.k, derive_seed(base_seed, rep, fold, "smote"), smote_params.paper_formula)
        synth = smote_balance(minority, n_plus, sp)
        X_bal = np.vstack([X_train, synth])
        y_bal = np.concatenate([y_train, -np.ones(synth.shape[0], dtype=int)])
        model = train_svc(X_bal, y_bal, params)
    else:
        if method.kind == "omega":
            targets = plain_binary_targets(y_train)
        else:
            assignment = assign_random_targets(y_train, derive_seed(base_seed, rep, fold, "assignment"))
            if method.kind == "shift":
                assignment = shift_targets(assignment, method.m)
            targets = assignment.targets
        model = train_svr(X_train, targets, params)
    return predict_class(model, X_test), model.diagnostics.converged


def _run_repetition(rep, ds, methods, k, base_seed, svm_params, smote_params):
    folds = stratified_kfold(ds.y, k, derive_seed(base_seed, rep, 0, "folds"))
    out = []
    n = len(ds)
    for f, test in enumerate(folds):
        train = np.setdiff1d(np.arange(n), test, assume_unique=True)
        X_train, y_train = ds.X[train], ds.y[train]
        for method in methods:
            try:
                pred, converged = _fit_predict(method, X_train, y_train, ds.X[test], svm_params,
                                               smote_params, base_seed, rep, f)
            except Exception as exc:
                raise RuntimeError(f"{ds.name} {method.tag}: repetition {rep}, fold {f} failed: {exc}") from exc
            ct = confusion_table(ds.y[test], pred)
            ms = metrics(ct)
            out.append(FoldResult(ds.name, method.tag, rep, f, ct, ms.gmean, ms.f1, converged))
    return out


@dataclass(frozen=True)
class ExperimentResult:
    """Aggregate of one method on one dataset over ``reps`` x ``folds`` CV.

    Per repetition the fold confusions are summed and the measures computed
    from the sum; means and standard deviations (in percent) are taken over
    the repetitions.  ``confusion`` is the mean over repetitions of the
    summed fold confusions.
    """

    dataset: str
    method: str
    reps: int
    folds: int
    seed: int
    rep_gmean: np.ndarray
    rep_f1: np.ndarray
    confusion: ConfusionTable
    fold_results: tuple = field(repr=False, default=())

    @property
    def gmean_mean(self):
        return 100.0 * float(np.mean(self.rep_gmean))

    @property
    def gmean_std(self):
        return 100.0 * _std(self.rep_gmean)

    @property
    def f1_mean(self):
        return 100.0 * float(np.mean(self.rep_f1))

    @property
    def f1_std(self):
        return 100.0 * _std(self.rep_f1)

    @property
    def non_converged(self):
        return sum(not r.converged for r in self.fold_results)

    def rep_metric(self, name):
        return {"gmean": self.rep_gmean, "f1": self.rep_f1}[name]

    def summary_line(self):
        return (f"{self.dataset:<14} {self.method:<12} G-mean {self.gmean_mean:5.1f} +- {self.gmean_std:3.1f}"
                f"   F1 {self.f1_mean:5.1f} +- {self.f1_std:3.1f}")


def _std(values):
    values = np.asarray(values, dtype=float)
    return float(np.std(values, ddof=1)) if values.shape[0] > 1 else 0.0


def aggregate(fold_results, seed=0) -> ExperimentResult:
    """Reduce the fold records of a single (dataset, method) pair."""
    results = sorted(fold_results, key=lambda r: (r.rep, r.fold))
    if not results:
        raise ValueError("no fold results to aggregate")
    keys = {(r.dataset, r.method) for r in results}
    if len(keys) != 1:
        raise ValueError(f"cannot aggregate mixed datasets/methods: {sorted(keys)}")
    reps = sorted({r.rep for r in results})
    folds = {r.fold for r in results}
    sums = {rep: ConfusionTable(0, 0, 0, 0) for rep in reps}
    for r in results:
        sums[r.rep] = sums[r.rep] + r.confusion
    per_rep = [metrics(sums[rep]) for rep in reps]
    mean_ct = ConfusionTable(0.0, 0.0, 0.0, 0.0)
    for rep in reps:
        mean_ct = mean_ct + sums[rep]
    dataset, method = keys.pop()
    return ExperimentResult(
        dataset=dataset,
        method=method,
        reps=len(reps),
        folds=len(folds),
        seed=seed,
        rep_gmean=np.array([m.gmean for m in per_rep]),
        rep_f1=np.array([m.f1 for m in per_rep]),
        confusion=mean_ct.scaled(1.0 / len(reps)),
        fold_results=tuple(results),
    )


def run_experiment(ds: Dataset, methods, reps=10, k=10, seed=0, svm_params=None,
                   smote_params=None, jobs=1):
    """Cross-validate one or several methods on ``ds``.

    ``methods`` is a method tag, a :class:`Method`, or a list of them.
    All methods see identical fold splits.  Returns an ExperimentResult for
    a single method, else a dict ``{tag: ExperimentResult}``.
    """
    single = isinstance(methods, (str, Method))
    methods = [parse_method(m) for m in ([methods] if single else methods)]
    if not methods:
        raise ValueError("no methods given")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    for m in methods:
        m.check(ds.n_minus, ds.n_plus)
    svm_params = svm_params or SvmParams()
    smote_params = smote_params or SmoteParams()
    work = partial(_run_repetition, ds=ds, methods=methods, k=k, base_seed=seed,
                   svm_params=svm_params, smote_params=smote_params)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(work, range(reps)))
    else:
        chunks = [work(rep) for rep in range(reps)]
    by_method = {m.tag: [] for m in methods}
    for chunk in chunks:
        for r in chunk:
            by_method[r.method].append(r)
    out = {tag: aggregate(rs, seed) for tag, rs in by_method.items()}
    return out[methods[0].tag] if single else out


def fold_records(result: ExperimentResult):
    """One flat dict per fold, in log order."""
    for r in result.fold_results:
        yield {
            "dataset": r.dataset,
            "method": r.method,
            "seed": result.seed,
            "reps": result.reps,
            "folds": result.folds,
            "rep": r.rep,
            "fold": r.fold,
            "t_minus": r.confusion.t_minus,
            "f_plus": r.confusion.f_plus,
            "f_minus": r.confusion.f_minus,
            "t_plus": r.confusion.t_plus,
            "gmean": r.gmean,
            "f1": r.f1,
            "converged": r.converged,
        }


def write_fold_log(path, results):
    """Write JSON lines, one per fold, for one or more ExperimentResults."""
    if isinstance(results, ExperimentResult):
        results = [results]
    with open(path, "w") as fh:
        for res in results:
            for rec in fold_records(res):
                fh.write(json.dumps(rec) + "\n")


def read_fold_log(path):
    """Rebuild ``{(dataset, method): ExperimentResult}`` from a fold log."""
    groups = {}
    seeds = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            rec = json.loads(line)
            key = (rec["dataset"], rec["method"])
            ct = ConfusionTable(rec["t_minus"], rec["f_plus"], rec["f_minus"], rec["t_plus"])
            groups.setdefault(key, []).append(
                FoldResult(rec["dataset"], rec["method"], rec["rep"], rec["fold"], ct,
                           rec["gmean"], rec["f1"], rec.get("converged", True)))
            seeds.setdefault(key, set()).add(rec["seed"])
    out = {}
    for key, rs in groups.items():
        if len(seeds[key]) != 1:
            raise ValueError(f"{path}: {key} mixes base seeds {sorted(seeds[key])}")
        out[key] = aggregate(rs, seeds[key].pop())
    return out


@dataclass(frozen=True)
class Comparison:
    metric: str
    a: ExperimentResult
    b: ExperimentResult
    test: WilcoxonResult
    alpha: float = 0.05

    @property
    def significant(self):
        return not self.test.degenerate and self.test.pvalue < self.alpha

    @property
    def better(self):
        """Method tag with the higher mean, or None on a tie."""
        ma, mb = float(np.mean(self.a.rep_metric(self.metric))), float(np.mean(self.b.rep_metric(self.metric)))
        if math.isclose(ma, mb, rel_tol=0, abs_tol=1e-12):
            return None
        return self.a.method if ma > mb else self.b.method

    def report(self):
        ma = 100 * float(np.mean(self.a.rep_metric(self.metric)))
        mb = 100 * float(np.mean(self.b.rep_metric(self.metric)))
        star_a = "*" if self.significant and self.better == self.a.method else ""
        star_b = "*" if self.significant and self.better == self.b.method else ""
        verdict = "significant" if self.significant else "not significant"
        return (f"{self.a.dataset} {self.metric}: {star_a}{self.a.method} {ma:.1f} vs "
                f"{star_b}{self.b.method} {mb:.1f}  W={self.test.statistic:g} p={self.test.pvalue:.4g} "
                f"({self.test.method}, n={self.test.n}) -> {verdict} at {self.alpha:.0%}")


def compare_results(a: ExperimentResult, b: ExperimentResult, metric="gmean", alpha=0.05) -> Comparison:
    """Paired Wilcoxon test over repetition means of ``metric``.

    Both results must come from the same dataset, repetition count, fold
    count and base seed, so that repetition ``r`` used identical splits.
    """
    for attr in ("dataset", "reps", "folds", "seed"):
        if getattr(a, attr) != getattr(b, attr):
            raise ValueError(f"results are not paired: {attr} differs "
                             f"({getattr(a, attr)!r} vs {getattr(b, attr)!r})")
    test = wilcoxon_signed_rank(a.rep_metric(metric), b.rep_metric(metric))
    return Comparison(metric, a, b, test, alpha)
