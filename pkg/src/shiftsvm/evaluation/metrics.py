"""Confusion tables and the imbalance-aware measures derived from them.

Orientation: rows are true classes, columns predicted classes, minority
(-1) first::

                 pred -1    pred +1
    true -1      t_minus    f_plus
    true +1      f_minus    t_plus
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

__all__ = ["ConfusionTable", "Measures", "confusion_table", "metrics", "round_half_away"]


class ConfusionTable(NamedTuple):
    t_minus: float
    f_plus: float
    f_minus: float
    t_plus: float

    def __add__(self, other):
        return ConfusionTable(*(a + b for a, b in zip(self, other)))

    def scaled(self, factor):
        return ConfusionTable(*(v * factor for v in self))

    def rounded(self):
        return ConfusionTable(*(int(round_half_away(v)) for v in self))


class Measures(NamedTuple):
    spe: float
    pre: float
    rec: float
    gmean: float
    f1: float


def round_half_away(x):
    return math.copysign(math.floor(abs(x) + 0.5), x)


def confusion_table(true_labels, predicted_labels) -> ConfusionTable:
    t = np.asarray(true_labels).ravel()
    p = np.asarray(predicted_labels).ravel()
    if t.shape != p.shape:
        raise ValueError(f"length mismatch: {t.shape[0]} true vs {p.shape[0]} predicted labels")
    for arr in (t, p):
        if not np.all(np.isin(arr, (-1, 1))):
            raise ValueError("labels must be -1 or +1")
    tm = t == -1
    pm = p == -1
    return ConfusionTable(
        int((tm & pm).sum()),
        int((tm & ~pm).sum()),
        int((~tm & pm).sum()),
        int((~tm & ~pm).sum()),
    )


def _ratio(num, den):
    return num / den if den > 0 else 0.0


def metrics(ct: ConfusionTable) -> Measures:
    """Specificity, precision, recall, G-mean and F1 of the minority class.

    A zero denominator yields 0 for that measure (and F1 is 0 when
    precision + recall is 0).
    """
    tm, fp, fm, tp = (float(v) for v in ct)
    spe = _ratio(tp, fm + tp)
    pre = _ratio(tm, tm + fm)
    rec = _ratio(tm, tm + fp)
    gmean = math.sqrt(rec * spe)
    f1 = _ratio(2.0 * pre * rec, pre + rec)
    return Measures(spe, pre, rec, gmean, f1)
