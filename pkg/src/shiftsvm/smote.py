"""SMOTE oversampling of the minority class up to exact balance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SmoteParams", "knn_minority", "smote_balance"]


@dataclass(frozen=True)
class SmoteParams:
    k: int = 10
    seed: int | None = None
    # x + r * (x - y) as printed in some descriptions, instead of x + r * (y - x)
    paper_formula: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


def _neighbour_table(minority, k):
    d2 = ((minority[:, None, :] - minority[None, :, :]) ** 2).sum(axis=-1)
    np.fill_diagonal(d2, np.inf)
    k = min(k, minority.shape[0] - 1)
    # stable sort: equal distances keep the lower index first
    return np.argsort(d2, axis=1, kind="stable")[:, :k]


def knn_minority(index, minority, k):
    """Indices of the ``k`` nearest minority samples to ``minority[index]``.

    Euclidean distance, the sample itself excluded, ties broken by lower
    index.  ``k`` is clipped to ``len(minority) - 1``.
    """
    minority = np.asarray(minority, dtype=float)
    if minority.shape[0] < 2:
        raise ValueError("need at least 2 minority samples for neighbours")
    if k < 1:
        raise ValueError("k must be >= 1")
    d2 = ((minority - minority[index]) ** 2).sum(axis=1)
    d2[index] = np.inf
    k = min(k, minority.shape[0] - 1)
    return np.argsort(d2, kind="stable")[:k]


def smote_balance(minority, n_majority, params: SmoteParams | None = None, *, r=None):
    """Generate ``n_majority - len(minority)`` synthetic minority samples.

    Each synthetic point starts from a uniformly drawn minority sample ``x``,
    picks one of its ``k`` nearest minority neighbours ``y`` uniformly and
    returns ``x + r * (y - x)`` with an independent ``r ~ U[0, 1]`` per
    coordinate.  ``r`` may be fixed to a scalar for testing.

    Returns an array of shape (deficit, d).
    """
    params = params or SmoteParams()
    minority = np.asarray(minority, dtype=float)
    if minority.ndim != 2:
        raise ValueError("minority must be a 2-D array")
    n_min, d = minority.shape
    deficit = int(n_majority) - n_min
    if deficit < 0:
        raise ValueError(f"majority count {n_majority} is below minority count {n_min}")
    if deficit == 0:
        return np.empty((0, d))
    if n_min < 2:
        raise ValueError("SMOTE needs at least 2 minority samples")
    rng = np.random.default_rng(params.seed)
    table = _neighbour_table(minority, params.k)
    base = rng.integers(0, n_min, size=deficit)
    pick = rng.integers(0, table.shape[1], size=deficit)
    x = minority[base]
    y = minority[table[base, pick]]
    gap = rng.random((deficit, d)) if r is None else np.full((deficit, d), float(r))
    if params.paper_formula:
        return x + gap * (x - y)
    return x + gap * (y - x)
