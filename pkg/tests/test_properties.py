"""Light randomised checks that run in the default suite.

The 1000-trial invariant suites live in properties.py and run through the
acceptance tests.
"""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from shiftsvm.evaluation import ConfusionTable, metrics, wilcoxon_signed_rank
from shiftsvm.svm import SvmParams, train_svc, train_svr

quick = settings(max_examples=100, deadline=None, derandomize=True, database=None)
counts = st.integers(0, 500)


@quick
@given(counts, counts, counts, counts)
def test_measures_are_bounded(tm, fp, fm, tp):
    m = metrics(ConfusionTable(tm, fp, fm, tp))
    for v in m:
        assert 0.0 <= v <= 1.0
    assert m.gmean <= max(m.spe, m.rec) + 1e-12
    assert m.f1 <= max(m.pre, m.rec) + 1e-12


@quick
@given(st.integers(1, 500), st.integers(1, 500), st.integers(1, 500), st.integers(1, 500))
def test_gmean_ignores_class_scaling(tm, fp, fm, tp):
    # specificity and recall are per-class rates
    a = metrics(ConfusionTable(tm, fp, fm, tp))
    b = metrics(ConfusionTable(3 * tm, 3 * fp, fm, tp))
    assert abs(a.gmean - b.gmean) < 1e-12


@quick
@given(arrays(float, st.integers(1, 20), elements=st.integers(-20, 20).map(float)))
def test_wilcoxon_swap_symmetry(d):
    a = wilcoxon_signed_rank(d, np.zeros_like(d))
    b = wilcoxon_signed_rank(np.zeros_like(d), d)
    assert a.pvalue == b.pvalue
    assert (a.w_plus, a.w_minus) == (b.w_minus, b.w_plus)
    assert 0.0 <= a.pvalue <= 1.0


@quick
@given(arrays(float, st.integers(1, 20), elements=st.integers(-20, 20).map(float)))
def test_wilcoxon_rank_sums_partition(d):
    r = wilcoxon_signed_rank(d, np.zeros_like(d))
    n = int(np.count_nonzero(d))
    assert r.n == n
    assert r.w_plus + r.w_minus == n * (n + 1) / 2


@settings(max_examples=40, deadline=None, derandomize=True, database=None)
@given(st.integers(4, 30), st.integers(1, 4), st.sampled_from([0.1, 1.0, 10.0]), st.integers(0, 2**31))
def test_smo_dual_feasibility(n, d, C, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    y = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    y[:2] = (-1.0, 1.0)
    svc = train_svc(X, y, SvmParams(C=C))
    assert np.all((svc.dual >= 0) & (svc.dual <= C + 1e-12))
    assert abs(svc.dual @ y) <= 1e-8 * max(1.0, C * n)
    svr = train_svr(X, rng.normal(size=n) * 3, SvmParams(C=C))
    assert np.all(np.abs(svr.dual) <= C + 1e-12)
    assert abs(svr.dual.sum()) <= 1e-8 * max(1.0, C * n)
