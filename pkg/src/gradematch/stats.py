"""Evaluation statistics: Wilcoxon signed-rank test, quadratic weighted kappa,
balanced accuracy, and feature-mean difference reports.

The Wilcoxon statistic W is the min-sum convention (the smaller of the
positive-rank and negative-rank sums) with a two-sided p value. For small
samples the p value is exact over all 2^n sign assignments; larger samples
use a normal approximation with tie and continuity corrections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from .exceptions import GradematchError, SchemaError
from .features import FEATURE_NAMES, N_FEATURES, LabeledFeatureSet
from .selection import ReferenceProfile

EXACT_LIMIT = 25  # exact sign-assignment distribution up to this many non-zero diffs


@dataclass(frozen=True)
class PairedAccuracySeries:
    """Two accuracy-over-checkpoints sequences, paired by position."""

    steps: tuple[int, ...]
    acc_a: np.ndarray
    acc_b: np.ndarray

    def __post_init__(self) -> None:
        acc_a = np.asarray(self.acc_a, dtype=np.float64)
        acc_b = np.asarray(self.acc_b, dtype=np.float64)
        if not (len(self.steps) == len(acc_a) == len(acc_b)) or len(self.steps) == 0:
            raise SchemaError("paired series need equal, non-zero lengths")
        for name, acc in (("a", acc_a), ("b", acc_b)):
            if np.any((acc < 0) | (acc > 1)):
                raise SchemaError(f"series {name} has accuracies outside [0, 1]")
        object.__setattr__(self, "acc_a", acc_a)
        object.__setattr__(self, "acc_b", acc_b)

    def diffs(self) -> np.ndarray:
        return self.acc_a - self.acc_b


@dataclass(frozen=True)
class WilcoxonOutcome:
    statistic: float
    n_effective: int
    p_value: float
    mode: str  # "exact" | "normal-approximation"


def _exact_two_sided_p(ranks: np.ndarray, w: float) -> float:
    """P over all 2^n sign assignments, doubled so 2*P(W+ <= w) is exact.

    Ranks may be tied average ranks (multiples of 1/2); doubling makes every
    achievable rank sum an integer, and the subset-sum table below counts
    assignments exactly (counts stay below 2^53).
    """
    doubled = np.rint(2.0 * ranks).astype(np.int64)
    total = int(doubled.sum())
    counts = np.zeros(total + 1, dtype=np.float64)
    counts[0] = 1.0
    for r in doubled:
        # multiply the count polynomial by (1 + x^r); RHS is evaluated into a
        # fresh array first, so each rank is used at most once
        counts[r:] = counts[r:] + counts[: total + 1 - r]
    threshold = int(math.floor(2.0 * w + 1e-9))
    p_low = counts[: threshold + 1].sum() / 2.0 ** len(ranks)
    return min(1.0, 2.0 * p_low)


def _normal_two_sided_p(ranks: np.ndarray, w: float) -> float:
    # Under H0, W+ is a sum of independent rank*Bernoulli terms:
    # mean Sum(r)/2 and variance Sum(r^2)/4 (tied average ranks included,
    # which reproduces the textbook tie correction). Continuity-corrected.
    mu = ranks.sum() / 2.0
    sigma = math.sqrt(float(np.dot(ranks, ranks)) / 4.0)
    if sigma == 0.0:
        raise GradematchError("degenerate rank distribution")
    z = (w - mu + 0.5) / sigma
    phi = 0.5 * math.erfc(-z / math.sqrt(2.0))
    return min(1.0, max(2.0 * phi, math.ulp(0.0)))


def wilcoxon_signed_rank(
    diffs: Iterable[float],
    zero_method: str = "wilcox",
    mode: str = "auto",
) -> WilcoxonOutcome:
    """Two-sided Wilcoxon signed-rank test over paired differences.

    Zero differences are dropped (``zero_method="wilcox"``); with ``"pratt"``
    they participate in the ranking but not in the rank sums. Absolute
    differences are ranked with average ranks for ties, W is
    min(positive-rank sum, negative-rank sum), and the p value is exact by
    enumeration of sign assignments for up to EXACT_LIMIT effective pairs
    (or always with ``mode="exact"``), else normally approximated.
    """
    diffs = np.asarray(list(diffs), dtype=np.float64)
    if diffs.size == 0 or not np.all(np.isfinite(diffs)):
        raise GradematchError("diffs must be a non-empty list of finite numbers")
    if zero_method not in ("wilcox", "pratt"):
        raise GradematchError(f"unknown zero_method {zero_method!r}")
    if mode not in ("auto", "exact", "approx"):
        raise GradematchError(f"unknown mode {mode!r}")

    nonzero = diffs != 0.0
    if not nonzero.any():
        raise GradematchError("all differences are zero")
    if zero_method == "wilcox":
        kept = diffs[nonzero]
        ranks = rankdata(np.abs(kept))
    else:
        all_ranks = rankdata(np.abs(diffs))
        kept = diffs[nonzero]
        ranks = all_ranks[nonzero]

    w_plus = float(ranks[kept > 0].sum())
    w_minus = float(ranks[kept < 0].sum())
    w = min(w_plus, w_minus)
    n_effective = int(kept.size)

    exact = mode == "exact" or (mode == "auto" and n_effective <= EXACT_LIMIT)
    if exact:
        p = _exact_two_sided_p(ranks, w)
        used = "exact"
    else:
        p = _normal_two_sided_p(ranks, w)
        used = "normal-approximation"
    return WilcoxonOutcome(statistic=w, n_effective=n_effective, p_value=p, mode=used)


def pair_accuracy_runs(
    runs_a: Sequence[Sequence[float]],
    runs_b: Sequence[Sequence[float]],
    seed: int = 0,
) -> np.ndarray:
    """Paired differences across multiple training runs per arm.

    At every checkpoint a fresh random one-to-one matching between the runs of
    arm a and arm b is drawn, so each accuracy value is used exactly once.
    Returns the flat array of matched differences (a minus b), ordered by
    checkpoint then match.
    """
    if len(runs_a) == 0 or len(runs_a) != len(runs_b):
        raise GradematchError("need the same non-zero number of runs per arm")
    lengths = {len(run) for run in runs_a} | {len(run) for run in runs_b}
    if len(lengths) != 1:
        raise GradematchError("all runs must share the same number of checkpoints")
    n_steps = lengths.pop()
    if n_steps == 0:
        raise GradematchError("runs are empty")
    a = np.asarray(runs_a, dtype=np.float64)
    b = np.asarray(runs_b, dtype=np.float64)
    rng = np.random.default_rng(seed)
    diffs = []
    for t in range(n_steps):
        matching = rng.permutation(len(runs_a))
        diffs.extend(a[i, t] - b[matching[i], t] for i in range(len(runs_a)))
    return np.asarray(diffs, dtype=np.float64)


def quadratic_weighted_kappa(
    y_true: Sequence[int],
    y_pred: Sequence[int],
    categories: Sequence[int] = (0, 1, 2),
) -> float:
    """Chance-corrected agreement with squared-distance penalties.

    kappa = 1 - Sum(w*O) / Sum(w*E) with w_ij = (i - j)^2 / (K - 1)^2, O the
    observed pair counts and E the outer product of the marginals scaled to
    the same total. Raises on a degenerate denominator (both marginals
    concentrated on one identical category).
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.size == 0:
        raise GradematchError("y_true and y_pred must be equal-length and non-empty")
    categories = list(categories)
    if len(categories) < 2:
        raise GradematchError("need at least two categories")
    index = {label: i for i, label in enumerate(categories)}
    if not all(label in index for label in y_true) or not all(label in index for label in y_pred):
        raise GradematchError("labels outside the declared categories")

    n_cat = len(categories)
    weights = np.array(
        [[(i - j) ** 2 / (n_cat - 1) ** 2 for j in range(n_cat)] for i in range(n_cat)],
        dtype=np.float64,
    )
    observed = np.zeros((n_cat, n_cat), dtype=np.float64)
    for t, p in zip(y_true, y_pred):
        observed[index[t], index[p]] += 1.0
    total = observed.sum()
    expected = np.outer(observed.sum(axis=1), observed.sum(axis=0)) / total
    denom = float((weights * expected).sum())
    if denom == 0.0:
        raise GradematchError("degenerate marginals: expected disagreement is zero")
    return 1.0 - float((weights * observed).sum()) / denom


def balanced_accuracy(
    y_true: Sequence[int],
    y_pred: Sequence[int],
    seed: int = 0,
    mode: str = "resample",
    categories: Sequence[int] | None = None,
) -> float:
    """Accuracy on a class-balanced view of the pairs.

    ``resample`` downsamples every class uniformly without replacement to the
    minority-class count and computes plain accuracy on the kept pairs (seeded,
    reproducible). ``macro`` is the deterministic cross-check: the mean of
    per-class recalls.
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.size == 0:
        raise GradematchError("y_true and y_pred must be equal-length and non-empty")
    if mode not in ("resample", "macro"):
        raise GradematchError(f"unknown mode {mode!r}")
    cats = sorted(set(int(v) for v in y_true)) if categories is None else list(categories)
    class_indices = {}
    for cat in cats:
        idx = np.flatnonzero(y_true == cat)
        if idx.size == 0:
            raise GradematchError(f"category {cat} absent from y_true")
        class_indices[cat] = idx

    if mode == "macro":
        recalls = [float((y_pred[idx] == cat).mean()) for cat, idx in class_indices.items()]
        return float(np.mean(recalls))

    size = min(idx.size for idx in class_indices.values())
    rng = np.random.default_rng(seed)
    hits = 0
    for cat in cats:
        idx = class_indices[cat]
        # sort the input order first so the draw depends only on the per-class
        # multiset of pairs, not on the input arrangement
        pairs = np.sort(y_pred[idx])
        chosen = pairs if pairs.size == size else rng.choice(pairs, size=size, replace=False)
        hits += int((chosen == cat).sum())
    return hits / (size * len(cats))


@dataclass
class FeatureMeanDiffReport:
    """Absolute per-component mean differences, one column per compared set."""

    feature_names: tuple[str, ...]
    columns: list[tuple[str, np.ndarray]]

    def to_markdown(self, precision: int = 6) -> str:
        header = "| feature | " + " | ".join(name for name, _ in self.columns) + " |"
        rule = "|---" * (1 + len(self.columns)) + "|"
        lines = [header, rule]
        for i, feature in enumerate(self.feature_names):
            cells = " | ".join(f"{values[i]:.{precision}f}" for _, values in self.columns)
            lines.append(f"| {feature} | {cells} |")
        return "\n".join(lines) + "\n"


def _overall_mean(ref: LabeledFeatureSet | ReferenceProfile) -> np.ndarray:
    if isinstance(ref, ReferenceProfile):
        return ref.overall_means
    return ref.matrix.mean(axis=0)


def feature_mean_diff_report(
    ref: LabeledFeatureSet | ReferenceProfile,
    others: Sequence[tuple[str, LabeledFeatureSet]],
) -> FeatureMeanDiffReport:
    """|mean_ref - mean_other| per component, in canonical schema order.

    ``others`` is a list of (column name, feature set); multiple sets come out
    as side-by-side columns.
    """
    if not others:
        raise GradematchError("need at least one comparison set")
    ref_mean = _overall_mean(ref)
    if ref_mean.shape != (N_FEATURES,):
        raise SchemaError("reference mean does not match the canonical schema")
    columns = []
    for name, other in others:
        if other.matrix.shape[1] != N_FEATURES:
            raise SchemaError(f"comparison set {name!r} does not match the canonical schema")
        columns.append((name, np.abs(ref_mean - other.matrix.mean(axis=0))))
    return FeatureMeanDiffReport(feature_names=FEATURE_NAMES, columns=columns)
