"""Two-sided Wilcoxon signed-rank test for paired samples."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.stats import norm, rankdata

__all__ = ["WilcoxonResult", "wilcoxon_signed_rank", "EXACT_MAX_N"]

EXACT_MAX_N = 12


class WilcoxonResult(NamedTuple):
    statistic: float  # min(W+, W-)
    pvalue: float
    w_plus: float
    w_minus: float
    n: int  # pairs with a non-zero difference
    method: str  # "exact" | "normal" | "degenerate"

    @property
    def degenerate(self):
        return self.method == "degenerate"


def _exact_pvalue(ranks, w_plus):
    # ranks are multiples of 1/2, so doubled rank sums are integers
    doubled = np.rint(2 * ranks).astype(int)
    counts = np.zeros(doubled.sum() + 1)
    counts[0] = 1.0
    for r in doubled:
        counts[r:] += counts[:-r].copy()
    counts /= counts.sum()
    obs = int(round(2 * w_plus))
    lower = counts[: obs + 1].sum()
    upper = counts[obs:].sum()
    return min(1.0, 2.0 * min(lower, upper))


def _normal_pvalue(ranks, w):
    n = ranks.shape[0]
    mean = n * (n + 1) / 4.0
    _, ties = np.unique(ranks, return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - (ties**3 - ties).sum() / 48.0
    if var <= 0:
        return 1.0
    # w is the smaller of W+ and W-, so w - mean <= 0
    z = min(w - mean + 0.5, 0.0) / math.sqrt(var)
    return min(1.0, 2.0 * norm.cdf(z))


def wilcoxon_signed_rank(a, b, method="auto") -> WilcoxonResult:
    """Test whether the paired differences ``a - b`` are symmetric about 0.

    Zero differences are dropped and tied absolute differences get their
    average rank.  ``method="auto"`` enumerates the null distribution
    exactly for at most 12 non-zero pairs and otherwise uses the normal
    approximation with tie and continuity correction.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise ValueError(f"paired samples differ in length: {a.shape[0]} vs {b.shape[0]}")
    if a.shape[0] == 0:
        raise ValueError("need at least one pair")
    d = a - b
    d = d[d != 0]
    n = d.shape[0]
    if n == 0:
        return WilcoxonResult(0.0, 1.0, 0.0, 0.0, 0, "degenerate")
    ranks = rankdata(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    w = min(w_plus, w_minus)
    if method == "auto":
        method = "exact" if n <= EXACT_MAX_N else "normal"
    if method == "exact":
        p = _exact_pvalue(ranks, w_plus)
    elif method == "normal":
        p = _normal_pvalue(ranks, w)
    else:
        raise ValueError(f"unknown method {method!r}")
    return WilcoxonResult(w, float(p), w_plus, w_minus, n, method)
