"""Regression targets for a binary task with a one-sided shift of the minority side.

Minority samples (label -1) get a random permutation of ``-n_minus..-1`` and
majority samples (label +1) a random permutation of ``1..n_plus``.  With a
multiplier ``m`` every negative target is moved further down by
``delta_m = m * n_plus - n_minus``; ``m = 1`` makes the target range
symmetric around zero and ``m = n_minus / n_plus`` leaves it unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TargetAssignment",
    "plain_binary_targets",
    "assign_random_targets",
    "shift_targets",
    "shifted_targets",
]


@dataclass(frozen=True)
class TargetAssignment:
    targets: np.ndarray
    m: float
    delta_m: float
    n_minus: int
    n_plus: int

    @property
    def minority_targets(self):
        return self.targets[self.targets < 0]

    @property
    def majority_targets(self):
        return self.targets[self.targets > 0]


def plain_binary_targets(labels):
    """The labels themselves as float regression targets."""
    return np.asarray(labels, dtype=float).ravel()


def _class_counts(labels):
    y = np.asarray(labels).ravel()
    if not np.all(np.isin(y, (-1, 1))):
        raise ValueError("labels must be -1 or +1")
    minus = y == -1
    n_minus = int(minus.sum())
    n_plus = y.shape[0] - n_minus
    if n_minus == 0 or n_plus == 0:
        raise ValueError(f"both classes must be present, got {n_minus}:{n_plus}")
    return y, minus, n_minus, n_plus


def assign_random_targets(labels, seed=None) -> TargetAssignment:
    """Bijectively assign ``{-n_minus..-1} u {1..n_plus}`` to the samples.

    ``seed`` is anything accepted by :func:`numpy.random.default_rng`.
    """
    y, minus, n_minus, n_plus = _class_counts(labels)
    rng = np.random.default_rng(seed)
    targets = np.empty(y.shape[0])
    targets[minus] = -(rng.permutation(n_minus) + 1.0)
    targets[~minus] = rng.permutation(n_plus) + 1.0
    return TargetAssignment(targets, n_minus / n_plus, 0.0, n_minus, n_plus)


def shift_targets(assignment: TargetAssignment, m) -> TargetAssignment:
    """Translate the negative targets by ``-(m * n_plus - n_minus)``.

    The shift is taken relative to the unshifted targets, so repeated calls
    do not accumulate.  ``m`` must be at least ``n_minus / n_plus``.
    """
    n_minus, n_plus = assignment.n_minus, assignment.n_plus
    m = float(m)
    delta = m * n_plus - n_minus
    # exact-ratio m can land a hair below zero in floating point
    if abs(delta) <= 1e-9 * n_plus:
        delta = 0.0
    if delta < 0:
        raise ValueError(f"m={m} is below n_minus/n_plus = {n_minus}/{n_plus} = {n_minus / n_plus:.6g}")
    base = assignment.targets.copy()
    neg = base < 0
    base[neg] += assignment.delta_m
    base[neg] -= delta
    return TargetAssignment(base, m, delta, n_minus, n_plus)


def shifted_targets(labels, m, seed=None):
    """Convenience: random assignment followed by a shift with multiplier ``m``."""
    return shift_targets(assign_random_targets(labels, seed), m).targets
