#!/usr/bin/env python3
"""Demonstrate the evaluation statistics on synthetic model outputs.

Two simulated training runs are compared checkpoint by checkpoint with the
Wilcoxon signed-rank test; graded predictions are scored with quadratic
weighted kappa and balanced accuracy.
"""

import numpy as np

from gradematch import (
    PairedAccuracySeries,
    balanced_accuracy,
    pair_accuracy_runs,
    quadratic_weighted_kappa,
    wilcoxon_signed_rank,
)

rng = np.random.default_rng(404)

# accuracy of two training arms, evaluated every 187 steps
steps = tuple(range(187, 187 * 25 + 1, 187))
base = 0.55 + 0.25 * (1 - np.exp(-np.arange(25) / 8))
arm_a = np.clip(base + 0.015 + rng.normal(0, 0.01, size=25), 0, 1)  # selected-data arm
arm_b = np.clip(base + rng.normal(0, 0.01, size=25), 0, 1)  # random-subsample arm

series = PairedAccuracySeries(steps=steps, acc_a=arm_a, acc_b=arm_b)
outcome = wilcoxon_signed_rank(series.diffs())
print(f"single-run pairing: W={outcome.statistic}, n={outcome.n_effective}, "
      f"p={outcome.p_value:.2e} ({outcome.mode})")
print(f"mean accuracy gain: {series.diffs().mean():+.4f}")

# three runs per arm, matched randomly at every checkpoint
runs_a = [np.clip(base + 0.015 + rng.normal(0, 0.01, 25), 0, 1) for _ in range(3)]
runs_b = [np.clip(base + rng.normal(0, 0.01, 25), 0, 1) for _ in range(3)]
diffs = pair_accuracy_runs(runs_a, runs_b, seed=11)
multi = wilcoxon_signed_rank(diffs, mode="approx")
print(f"multi-run pairing:  W={multi.statistic}, n={multi.n_effective}, "
      f"p={multi.p_value:.2e} ({multi.mode})")

# graded predictions: a noisy grader against true ternary labels
y_true = rng.integers(0, 3, size=300).tolist()
y_pred = [t if rng.random() < 0.7 else int(rng.integers(0, 3)) for t in y_true]
print(f"\nquadratic weighted kappa: {quadratic_weighted_kappa(y_true, y_pred):.4f}")
print(f"balanced accuracy (resample, seed 3): {balanced_accuracy(y_true, y_pred, seed=3):.4f}")
print(f"balanced accuracy (macro cross-check): {balanced_accuracy(y_true, y_pred, mode='macro'):.4f}")
