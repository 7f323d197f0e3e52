import numpy as np
import pytest

from shiftsvm.svm import (
    LinearModel,
    SolverDiagnostics,
    SvmParams,
    default_epsilon,
    dump_model,
    predict_class,
    predict_raw,
    primal_objective,
    train_svc,
    train_svr,
)

from oracles import iqr_over_1349, qp_oracle, svr_line_oracle

TIGHT = 1e-8
SOLVERS = ["smo", "dcd"]


def model(w, b):
    diag = SolverDiagnostics(0, 0.0, 0.0, True)
    return LinearModel(np.asarray(w, float), float(b), "regressor", diag)


def random_problem(rng, max_n=6, max_d=2):
    n = int(rng.integers(2, max_n + 1))
    d = int(rng.integers(1, max_d + 1))
    X = rng.normal(size=(n, d)) * 2
    y = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    y[:2] = (-1.0, 1.0)
    t = rng.normal(size=n) * 3
    C = float(rng.choice([0.1, 1.0, 10.0]))
    eps = float(rng.uniform(0, 1))
    return X, y, t, C, eps


# -- parameters ------------------------------------------------------------------

@pytest.mark.parametrize("kw", [{"C": 0}, {"epsilon": -1}, {"tolerance": 0}, {"max_epochs": 0}, {"solver": "x"}])
def test_params_validation(kw):
    with pytest.raises(ValueError):
        SvmParams(**kw)


# -- analytic cases -----------------------------------------------------------

@pytest.mark.parametrize("solver", SOLVERS)
def test_svc_two_points(solver):
    m = train_svc([[-1.0], [1.0]], [-1, 1], SvmParams(C=1.0, solver=solver, tolerance=TIGHT))
    assert m.weights[0] == pytest.approx(1.0, abs=1e-4)
    assert m.bias == pytest.approx(0.0, abs=1e-4)
    assert np.all((m.dual >= 0) & (m.dual <= 1.0))


def test_svr_two_points():
    m = train_svr([[-1.0], [1.0]], [-2.0, 2.0], SvmParams(C=100.0, epsilon=0.1, tolerance=TIGHT))
    assert m.weights[0] == pytest.approx(1.9, abs=1e-4)
    assert m.bias == pytest.approx(0.0, abs=1e-4)


def test_svr_constant_targets():
    X = np.random.default_rng(0).normal(size=(12, 3))
    m = train_svr(X, np.full(12, 4.2), SvmParams(epsilon=0.5))
    assert np.allclose(m.weights, 0.0, atol=1e-9)
    assert 4.2 - 0.5 <= m.bias <= 4.2 + 0.5


def test_svr_constant_targets_auto_epsilon_is_zero_tube():
    X = np.random.default_rng(1).normal(size=(8, 2))
    m = train_svr(X, np.full(8, -3.0))
    assert np.allclose(m.weights, 0.0, atol=1e-6)
    assert m.bias == pytest.approx(-3.0, abs=1e-6)


def test_svc_separable_has_no_training_errors():
    rng = np.random.default_rng(3)
    X = np.vstack([rng.normal(-3, 0.5, (15, 2)), rng.normal(3, 0.5, (15, 2))])
    y = np.r_[-np.ones(15), np.ones(15)]
    m = train_svc(X, y)
    assert np.array_equal(predict_class(m, X), y)


# -- brute-force oracle -----------------------------------------------------------

def _rel_gap(achieved, optimum):
    return (achieved - optimum) / max(abs(optimum), 1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_svc_matches_oracle(seed):
    X, y, _, C, _ = random_problem(np.random.default_rng(seed))
    opt = qp_oracle("svc", X, y, C)[0]
    m = train_svc(X, y, SvmParams(C=C, tolerance=TIGHT))
    assert _rel_gap(primal_objective(m, X, y, C), opt) < 1e-3


@pytest.mark.parametrize("seed", range(10))
def test_svr_matches_oracle(seed):
    X, _, t, C, eps = random_problem(np.random.default_rng(100 + seed))
    opt = qp_oracle("svr", X, t, C, eps)[0]
    m = train_svr(X, t, SvmParams(C=C, epsilon=eps, tolerance=TIGHT))
    assert _rel_gap(primal_objective(m, X, t, C, eps), opt) < 1e-3


@pytest.mark.parametrize("seed", range(5))
def test_dcd_matches_regularised_bias_oracle(seed):
    X, y, t, C, eps = random_problem(np.random.default_rng(200 + seed))
    p = SvmParams(C=C, epsilon=eps, solver="dcd", tolerance=TIGHT, max_epochs=100000)
    m = train_svc(X, y, p)
    opt = qp_oracle("svc", X, y, C, regularize_bias=True)[0]
    assert _rel_gap(primal_objective(m, X, y, C, regularize_bias=True), opt) < 1e-3
    m = train_svr(X, t, p)
    opt = qp_oracle("svr", X, t, C, eps, regularize_bias=True)[0]
    assert _rel_gap(primal_objective(m, X, t, C, eps, regularize_bias=True), opt) < 1e-3


def test_svr_ten_point_dual_matches_oracle():
    rng = np.random.default_rng(7)
    X = rng.uniform(-2, 2, (10, 1))
    t = 1.5 * X[:, 0] + rng.normal(0, 0.5, 10)
    opt = svr_line_oracle(X, t, 1.0, 0.2)
    m = train_svr(X, t, SvmParams(C=1.0, epsilon=0.2, tolerance=TIGHT))
    # strong duality: dual optimum equals primal optimum
    assert m.diagnostics.dual_objective == pytest.approx(opt, rel=1e-3)


# -- structural properties -------------------------------------------------------

@pytest.mark.parametrize("solver", SOLVERS)
def test_dual_feasible_and_monotone(solver):
    rng = np.random.default_rng(11)
    X = rng.normal(size=(40, 3))
    y = np.where(X[:, 0] + 0.5 * rng.normal(size=40) > 0, 1.0, -1.0)
    for m in (train_svc(X, y, SvmParams(C=0.5, solver=solver)),
              train_svr(X, 3 * y + rng.normal(size=40), SvmParams(C=0.5, solver=solver))):
        assert np.all(np.abs(m.dual) <= 0.5 + 1e-12)
        if m.kind == "classifier":
            assert np.all(m.dual >= 0)
        trace = np.asarray(m.diagnostics.objective_trace)
        assert np.all(np.diff(trace) >= -1e-9 * max(1.0, abs(trace[-1])))
        assert m.diagnostics.converged
        assert m.diagnostics.final_violation <= 1e-3


@pytest.mark.parametrize("solver", SOLVERS)
def test_label_flip_negates_model(solver):
    rng = np.random.default_rng(5)
    X = rng.normal(size=(30, 2))
    y = np.where(X @ [1.0, -2.0] + 0.3 > 0, 1.0, -1.0)
    p = SvmParams(tolerance=1e-6, solver=solver, max_epochs=100000)
    a, b = train_svc(X, y, p), train_svc(X, -y, p)
    assert np.allclose(a.weights, -b.weights, atol=1e-3)
    assert a.bias == pytest.approx(-b.bias, abs=1e-3)


def test_svr_translation_covariance():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(25, 2))
    t = X @ [2.0, 1.0] + rng.normal(size=25)
    p = SvmParams(epsilon=0.3, tolerance=1e-6)
    a, b = train_svr(X, t, p), train_svr(X, t + 17.0, p)
    assert np.allclose(a.weights, b.weights, atol=1e-3)
    assert b.bias - a.bias == pytest.approx(17.0, abs=1e-3)


@pytest.mark.parametrize("solver", SOLVERS)
def test_deterministic(solver):
    rng = np.random.default_rng(9)
    X = rng.normal(size=(20, 2))
    t = rng.normal(size=20)
    p = SvmParams(solver=solver, shuffle_seed=4)
    a, b = train_svr(X, t, p), train_svr(X, t, p)
    assert np.array_equal(a.weights, b.weights) and a.bias == b.bias


def test_non_convergence_is_flagged():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(60, 4)) * 100
    y = np.where(rng.random(60) < 0.5, -1.0, 1.0)
    m = train_svc(X, y, SvmParams(C=100.0, max_epochs=1, tolerance=1e-9))
    assert not m.diagnostics.converged
    assert m.diagnostics.final_violation > 1e-9


# -- errors -----------------------------------------------------------------

def test_svc_needs_both_classes():
    with pytest.raises(ValueError, match="each class"):
        train_svc([[0.0], [1.0]], [1, 1])


def test_svc_rejects_non_finite():
    with pytest.raises(ValueError, match="non-finite"):
        train_svc([[np.inf], [1.0]], [-1, 1])


def test_svr_rejects_non_finite_targets():
    with pytest.raises(ValueError, match="non-finite"):
        train_svr([[0.0], [1.0]], [np.nan, 1.0])


# -- prediction ------------------------------------------------------------------

def test_predict_raw():
    assert predict_raw(model([1.0], 0.0), [2.0]) == 2.0
    assert predict_raw(model([0.0], 5.0), [123.0]) == 5.0
    assert predict_raw(model([1.0, -1.0], 0.5), [2.0, 1.0]) == pytest.approx(1.5)
    assert predict_raw(model([1.0], 1.0), [[1.0], [2.0]]).tolist() == [2.0, 3.0]


def test_predict_dimension_mismatch():
    with pytest.raises(ValueError):
        predict_raw(model([1.0, 2.0], 0.0), [1.0])


@pytest.mark.parametrize("b, expected", [(-3.2, -1), (0.0, 1), (1e-9, 1)])
def test_predict_class_sign_rule(b, expected):
    assert predict_class(model([0.0], b), [1.0]) == expected


# -- default epsilon ------------------------------------------------------------------

def test_default_epsilon_hand_values():
    assert default_epsilon(list(range(-5, 0)) + list(range(1, 11))) == pytest.approx(9 / 13.49, abs=1e-4)
    assert default_epsilon([1, 2, 3, 4]) == pytest.approx(2.5 / 13.49, abs=1e-4)
    assert default_epsilon([3.0] * 7) == 0.0
    assert default_epsilon([5.0]) == 0.0


@pytest.mark.parametrize("seed", range(20))
def test_default_epsilon_matches_reference(seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=int(rng.integers(1, 40))) * 10
    assert default_epsilon(v) == pytest.approx(iqr_over_1349(v), abs=1e-12)


def test_dump_model():
    text = dump_model(model([1.0, 2.0], 0.5))
    assert "kind = regressor" in text and "d = 2" in text and "bias = 0.5" in text
