"""Reference profiles and feature-space subset selection.

A ReferenceProfile summarizes a (possibly confidential) reference feature
set into a shareable form: per-label means, per-component spreads, and k
cluster representatives. Three selection methods score candidates against
it under the L2 metric:

  method 1  distance to the reference mean of the candidate's label,
            top fraction per label;
  method 2  distance to the nearest of k reference representatives,
            top fraction per domain;
  method 3  mean combined-pool rank of the m nearest reference rows,
            top fraction globally (needs the full reference matrix).

Scoring standardizes both sides by the reference overall mean/std by
default; pass ``standardized=False`` for raw L2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from ._util import atomic_write_text, child_seed
from .cluster import kmeans
from .exceptions import GradematchError, SchemaError
from .features import FEATURE_NAMES, N_FEATURES, LabeledFeatureSet, mean_by_label

DEFAULT_FRACTION = 0.05
DEFAULT_REPRESENTATIVES = 8
DEFAULT_RANK_NEIGHBORS = 5
DEFAULT_FEWSHOT_PER_DOMAIN = 2

_PROFILE_FORMAT = "gradematch-profile/1"
_SELECTION_FORMAT = "gradematch-selection/1"


@dataclass
class ReferenceProfile:
    """Shareable summary of a reference feature space.

    All stored vectors live in raw feature space; ``standardized`` records
    whether the representatives were computed on z-scored rows (they are
    stored inverse-transformed either way). ``full_matrix`` is optional and
    only required by method 3.
    """

    overall_means: np.ndarray
    feature_stds: np.ndarray
    label_means: dict[int, np.ndarray]
    representatives: np.ndarray | None
    k: int
    seed: int
    standardized: bool = True
    full_matrix: LabeledFeatureSet | None = None
    schema: tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self) -> None:
        self.overall_means = np.asarray(self.overall_means, dtype=np.float64)
        self.feature_stds = np.asarray(self.feature_stds, dtype=np.float64)
        if self.overall_means.shape != (N_FEATURES,) or self.feature_stds.shape != (N_FEATURES,):
            raise SchemaError("profile means/stds must have one entry per feature")
        if np.any(self.feature_stds < 0):
            raise SchemaError("feature stds must be non-negative")
        if tuple(self.schema) != FEATURE_NAMES:
            raise SchemaError("profile schema does not match the canonical feature order")


@dataclass
class SelectionResult:
    """Chosen candidate ids plus the per-candidate scores that ranked them."""

    method: int
    params: dict
    scores: dict[str, float]
    selected_ids: list[str]
    selected_domains: dict[str, str] = field(default_factory=dict)


def _zscore(matrix: np.ndarray, means: np.ndarray, stds: np.ndarray) -> np.ndarray:
    scale = np.where(stds > 0, stds, 1.0)
    z = (np.atleast_2d(matrix) - means) / scale
    z[:, stds == 0] = 0.0
    return z


def standardize(features: LabeledFeatureSet, profile: ReferenceProfile) -> LabeledFeatureSet:
    """Z-score every component by the reference overall mean/std.

    Components whose reference std is 0 map to 0.
    """
    return LabeledFeatureSet(
        ids=list(features.ids),
        domains=list(features.domains),
        labels=features.labels.copy(),
        matrix=_zscore(features.matrix, profile.overall_means, profile.feature_stds),
        degenerate=list(features.degenerate),
    )


def build_profile(
    ref: LabeledFeatureSet,
    k: int = DEFAULT_REPRESENTATIVES,
    seed: int = 0,
    standardized: bool = True,
    include_full: bool = False,
    restarts: int = 1,
) -> ReferenceProfile:
    """Summarize a reference feature set.

    Representatives are k-means centers (k-means++ init). With
    ``standardized`` (the default) clustering runs on z-scored rows and the
    centers are stored mapped back to raw feature space; scoring re-applies
    the z-transform, recovering the clustered coordinates exactly. ``k=0``
    skips clustering (methods 1 and 3 do not need representatives).
    """
    if len(ref) == 0:
        raise GradematchError("cannot profile an empty feature set")
    if restarts < 1:
        raise GradematchError("restarts must be >= 1")
    overall_means = ref.matrix.mean(axis=0)
    feature_stds = ref.matrix.std(axis=0)  # population convention
    label_means = mean_by_label(ref)

    representatives = None
    if k > 0:
        points = _zscore(ref.matrix, overall_means, feature_stds) if standardized else ref.matrix
        best = None
        for attempt in range(restarts):
            result = kmeans(points, k, seed=child_seed(seed, f"kmeans-restart-{attempt}"))
            if best is None or result.inertia < best.inertia:
                best = result
        centers = best.centers
        if standardized:
            scale = np.where(feature_stds > 0, feature_stds, 1.0)
            centers = centers * scale + overall_means
            centers[:, feature_stds == 0] = overall_means[feature_stds == 0]
        representatives = centers

    return ReferenceProfile(
        overall_means=overall_means,
        feature_stds=feature_stds,
        label_means=label_means,
        representatives=representatives,
        k=k,
        seed=seed,
        standardized=standardized,
        full_matrix=ref if include_full else None,
    )


def _quota(group_size: int, fraction: float) -> int:
    if not 0.0 < fraction <= 1.0:
        raise GradematchError(f"fraction must be in (0, 1], got {fraction}")
    return math.ceil(fraction * group_size)


def _grouped_pick(
    scores: np.ndarray, group_keys: Sequence, fraction: float
) -> list[int]:
    """Per group (first-appearance order): the ceil(fraction * size) lowest
    scores, ties broken by row order."""
    groups: dict = {}
    for row, key in enumerate(group_keys):
        groups.setdefault(key, []).append(row)
    picked: list[int] = []
    for rows in groups.values():
        rows_arr = np.asarray(rows)
        order = np.argsort(scores[rows_arr], kind="stable")  # stable keeps row order on ties
        picked.extend(rows_arr[order[: _quota(len(rows), fraction)]].tolist())
    return picked


def _candidate_vectors(cand: LabeledFeatureSet, profile: ReferenceProfile, standardized: bool):
    if standardized:
        return _zscore(cand.matrix, profile.overall_means, profile.feature_stds)
    return cand.matrix


def _result(
    method: int,
    cand: LabeledFeatureSet,
    scores: np.ndarray,
    picked_rows: list[int],
    params: dict,
) -> SelectionResult:
    return SelectionResult(
        method=method,
        params=params,
        scores={cand.ids[i]: float(scores[i]) for i in range(len(cand))},
        selected_ids=[cand.ids[i] for i in picked_rows],
        selected_domains={cand.ids[i]: cand.domains[i] for i in picked_rows},
    )


def select_by_label_mean(
    profile: ReferenceProfile,
    cand: LabeledFeatureSet,
    fraction: float = DEFAULT_FRACTION,
    standardized: bool = True,
) -> SelectionResult:
    """Method 1: L2 distance to the reference mean of the candidate's label,
    lowest ceil(fraction * n) per label."""
    missing = sorted({int(l) for l in cand.labels} - set(profile.label_means))
    if missing:
        raise GradematchError(f"candidate labels missing from profile: {missing}")
    vectors = _candidate_vectors(cand, profile, standardized)
    labels_order = sorted(profile.label_means)
    mean_matrix = np.vstack([profile.label_means[label] for label in labels_order])
    if standardized:
        mean_matrix = _zscore(mean_matrix, profile.overall_means, profile.feature_stds)
    sq = cdist(vectors, mean_matrix, "sqeuclidean")
    column = {label: j for j, label in enumerate(labels_order)}
    scores = np.sqrt(sq[np.arange(len(cand)), [column[int(l)] for l in cand.labels]])
    picked = _grouped_pick(scores, [int(l) for l in cand.labels], fraction)
    params = {
        "fraction": fraction,
        "k": None,
        "m": None,
        "standardized": standardized,
        "include_self": None,
        "grouping": "label",
        "seed": profile.seed,
    }
    return _result(1, cand, scores, picked, params)


def select_by_representatives(
    profile: ReferenceProfile,
    cand: LabeledFeatureSet,
    fraction: float = DEFAULT_FRACTION,
    standardized: bool = True,
) -> SelectionResult:
    """Method 2: L2 distance to the nearest reference representative,
    lowest ceil(fraction * n) per domain."""
    if profile.representatives is None or len(profile.representatives) == 0:
        raise GradematchError("profile has no representatives (was it built with k=0?)")
    vectors = _candidate_vectors(cand, profile, standardized)
    reps = (
        _zscore(profile.representatives, profile.overall_means, profile.feature_stds)
        if standardized
        else profile.representatives
    )
    scores = np.sqrt(cdist(vectors, reps, "sqeuclidean")).min(axis=1)
    picked = _grouped_pick(scores, cand.domains, fraction)
    params = {
        "fraction": fraction,
        "k": int(profile.k),
        "m": None,
        "standardized": standardized,
        "include_self": None,
        "grouping": "domain",
        "seed": profile.seed,
    }
    return _result(2, cand, scores, picked, params)


def select_by_reference_rank(
    profile: ReferenceProfile,
    cand: LabeledFeatureSet,
    m: int = DEFAULT_RANK_NEIGHBORS,
    fraction: float = DEFAULT_FRACTION,
    standardized: bool = True,
    include_self: bool = False,
) -> SelectionResult:
    """Method 3: pool the reference rows with the other candidates, sort the
    pool by distance to the scored candidate, and average the positions of
    the first m reference rows; lowest ceil(fraction * n) globally.

    Positions are 0-based. Ties sort reference rows before candidate rows,
    then by row order within each side. The scored candidate itself is left
    out of the pool unless ``include_self`` is set.
    """
    ref = profile.full_matrix
    if ref is None:
        raise GradematchError("method 3 needs a profile built with the full reference matrix")
    if not 1 <= m <= len(ref):
        raise GradematchError(f"m={m} must be in [1, reference size={len(ref)}]")
    ref_vectors = _candidate_vectors(ref, profile, standardized)
    cand_vectors = _candidate_vectors(cand, profile, standardized)

    sq_to_ref = cdist(cand_vectors, ref_vectors, "sqeuclidean")
    sq_to_cand = cdist(cand_vectors, cand_vectors, "sqeuclidean")
    n_ref, n_cand = len(ref), len(cand)
    ref_rows = np.arange(n_ref)
    cand_rows = np.arange(n_cand)

    scores = np.empty(n_cand, dtype=np.float64)
    for i in range(n_cand):
        keep = np.ones(n_cand, dtype=bool)
        if not include_self:
            keep[i] = False
        dist = np.concatenate([sq_to_ref[i], sq_to_cand[i][keep]])
        is_cand = np.concatenate([np.zeros(n_ref, dtype=np.int8), np.ones(int(keep.sum()), dtype=np.int8)])
        within = np.concatenate([ref_rows, cand_rows[keep]])
        order = np.lexsort((within, is_cand, dist))
        positions = np.flatnonzero(is_cand[order] == 0)[:m]
        scores[i] = float(positions.sum()) / m
    order = np.argsort(scores, kind="stable")
    picked = order[: _quota(n_cand, fraction)].tolist()
    params = {
        "fraction": fraction,
        "k": None,
        "m": m,
        "standardized": standardized,
        "include_self": include_self,
        "grouping": "global",
        "seed": profile.seed,
    }
    return _result(3, cand, scores, picked, params)


def sample_fewshot(
    selected: SelectionResult,
    per_domain: int = DEFAULT_FEWSHOT_PER_DOMAIN,
    seed: int = 0,
) -> list[str]:
    """Uniformly sample up to ``per_domain`` selected ids per domain, without
    replacement; domains are visited in first-appearance order."""
    if per_domain < 1:
        raise GradematchError("per_domain must be >= 1")
    if not selected.selected_ids:
        raise GradematchError("selection is empty")
    groups: dict[str, list[str]] = {}
    for item_id in selected.selected_ids:
        domain = selected.selected_domains.get(item_id, "")
        groups.setdefault(domain, []).append(item_id)
    rng = np.random.default_rng(seed)
    sampled: list[str] = []
    for ids in groups.values():
        if len(ids) <= per_domain:
            sampled.extend(ids)
        else:
            chosen = sorted(rng.choice(len(ids), size=per_domain, replace=False).tolist())
            sampled.extend(ids[i] for i in chosen)
    return sampled


def _matrix_to_lists(matrix: np.ndarray) -> list[list[float]]:
    return [[float(v) for v in row] for row in matrix]


def save_profile(profile: ReferenceProfile, path: str | Path) -> None:
    """Write a profile as a single JSON document.

    Without a full matrix the file carries only means/stds/representatives,
    the shareable form that reveals nothing about individual rows.
    """
    payload = {
        "format": _PROFILE_FORMAT,
        "schema": list(profile.schema),
        "k": int(profile.k),
        "seed": int(profile.seed),
        "standardized": bool(profile.standardized),
        "overall_means": [float(v) for v in profile.overall_means],
        "feature_stds": [float(v) for v in profile.feature_stds],
        "label_means": {str(label): [float(v) for v in mean] for label, mean in sorted(profile.label_means.items())},
        "representatives": None
        if profile.representatives is None
        else _matrix_to_lists(profile.representatives),
        "full_matrix": None
        if profile.full_matrix is None
        else {
            "ids": list(profile.full_matrix.ids),
            "domains": list(profile.full_matrix.domains),
            "labels": [int(v) for v in profile.full_matrix.labels],
            "matrix": _matrix_to_lists(profile.full_matrix.matrix),
            "degenerate": [sorted(flags) for flags in profile.full_matrix.degenerate],
        },
    }
    atomic_write_text(path, json.dumps(payload, indent=1) + "\n")


def load_profile(path: str | Path) -> ReferenceProfile:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read profile {path}: {exc}") from exc
    if payload.get("format") != _PROFILE_FORMAT:
        raise SchemaError(f"{path}: not a profile file (format={payload.get('format')!r})")
    if tuple(payload.get("schema", ())) != FEATURE_NAMES:
        raise SchemaError(f"{path}: profile schema does not match this package's feature order")
    full = payload.get("full_matrix")
    full_matrix = None
    if full is not None:
        full_matrix = LabeledFeatureSet(
            ids=list(full["ids"]),
            domains=list(full["domains"]),
            labels=np.array(full["labels"], dtype=np.int64),
            matrix=np.array(full["matrix"], dtype=np.float64),
            degenerate=[frozenset(flags) for flags in full["degenerate"]],
        )
    representatives = payload.get("representatives")
    return ReferenceProfile(
        overall_means=np.array(payload["overall_means"], dtype=np.float64),
        feature_stds=np.array(payload["feature_stds"], dtype=np.float64),
        label_means={int(label): np.array(mean, dtype=np.float64) for label, mean in payload["label_means"].items()},
        representatives=None if representatives is None else np.array(representatives, dtype=np.float64),
        k=int(payload["k"]),
        seed=int(payload["seed"]),
        standardized=bool(payload["standardized"]),
        full_matrix=full_matrix,
    )


def save_selection(result: SelectionResult, path: str | Path) -> None:
    payload = {
        "format": _SELECTION_FORMAT,
        "method": int(result.method),
        "params": result.params,
        "scores": {item_id: float(score) for item_id, score in result.scores.items()},
        "selected_ids": list(result.selected_ids),
        "selected_domains": dict(result.selected_domains),
    }
    atomic_write_text(path, json.dumps(payload, indent=1) + "\n")


def load_selection(path: str | Path) -> SelectionResult:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read selection {path}: {exc}") from exc
    if payload.get("format") != _SELECTION_FORMAT:
        raise SchemaError(f"{path}: not a selection file (format={payload.get('format')!r})")
    return SelectionResult(
        method=int(payload["method"]),
        params=dict(payload["params"]),
        scores={str(k): float(v) for k, v in payload["scores"].items()},
        selected_ids=[str(v) for v in payload["selected_ids"]],
        selected_domains={str(k): str(v) for k, v in payload.get("selected_domains", {}).items()},
    )
