"""The canonical 18-component feature vector and labeled feature matrices.

The component order below is the serialization schema; every persisted
feature matrix carries exactly these columns in this order.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import lexical
from ._util import atomic_write_text, parallel_map
from .corpus import Corpus, DataPoint
from .embeddings import EmbeddingTable, cosine
from .exceptions import GradematchError, SchemaError
from .lexical import IdfModel, fit_idf
from .postag import CONTENT_TAGS, PosTagger

FEATURE_NAMES = (
    "bge_ctx_q",
    "bge_ctx_ans",
    "bge_fc_ans",
    "recall2_fc_ans",
    "recall2_nc_ans",
    "answer_len",
    "lexical_density",
    "jaccard1_q_ans",
    "jaccard1_ctx_ans",
    "recall2_q_ans",
    "recall2_ctx_ans",
    "recall2_ctx_ans_minus_q",
    "tfidf_q_ans",
    "tfidf_ctx_ans",
    "precision1_q_ans",
    "recall1_q_ans",
    "recall1_ctx_ans",
    "recall1_ctx_ans_minus_q",
)
FEATURE_INDEX = {name: i for i, name in enumerate(FEATURE_NAMES)}
N_FEATURES = len(FEATURE_NAMES)

# Every component except answer_len lies in [0, 1]; embedding cosines can in
# principle be negative but the exported ranges below are what the range
# suite enforces.
FEATURE_RANGES = {name: (-1.0, 1.0) for name in ("bge_ctx_q", "bge_ctx_ans", "bge_fc_ans")}
FEATURE_RANGES.update(
    {name: (0.0, 1.0) for name in FEATURE_NAMES if name not in FEATURE_RANGES and name != "answer_len"}
)


@dataclass(frozen=True)
class FeatureVector:
    """One datapoint's features plus the names of degenerate components."""

    values: np.ndarray
    degenerate: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (N_FEATURES,):
            raise SchemaError(f"feature vector must have shape ({N_FEATURES},), got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise GradematchError("feature vector has a non-finite component")
        object.__setattr__(self, "values", values)

    def __getitem__(self, name: str) -> float:
        return float(self.values[FEATURE_INDEX[name]])

    def as_dict(self) -> dict[str, float]:
        return {name: float(v) for name, v in zip(FEATURE_NAMES, self.values)}


@dataclass
class LabeledFeatureSet:
    """Feature rows aligned with (id, domain, label), in source corpus order."""

    ids: list[str]
    domains: list[str]
    labels: np.ndarray
    matrix: np.ndarray
    degenerate: list[frozenset[str]]

    def __post_init__(self) -> None:
        self.labels = np.asarray(self.labels, dtype=np.int64)
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        n = len(self.ids)
        if len(set(self.ids)) != n:
            raise SchemaError("feature set ids must be unique")
        if self.matrix.shape != (n, N_FEATURES) or self.labels.shape != (n,):
            raise SchemaError(
                f"inconsistent feature set shapes: {n} ids, matrix {self.matrix.shape}, "
                f"labels {self.labels.shape}"
            )
        if len(self.domains) != n or len(self.degenerate) != n:
            raise SchemaError("domains/degenerate must align with ids")

    def __len__(self) -> int:
        return len(self.ids)

    def row(self, index: int) -> FeatureVector:
        return FeatureVector(self.matrix[index].copy(), self.degenerate[index])

    def subset(self, indices: list[int]) -> "LabeledFeatureSet":
        return LabeledFeatureSet(
            ids=[self.ids[i] for i in indices],
            domains=[self.domains[i] for i in indices],
            labels=self.labels[indices],
            matrix=self.matrix[indices],
            degenerate=[self.degenerate[i] for i in indices],
        )

    def subset_by_ids(self, wanted: list[str]) -> "LabeledFeatureSet":
        position = {item_id: i for i, item_id in enumerate(self.ids)}
        missing = [w for w in wanted if w not in position]
        if missing:
            raise SchemaError(f"ids not in feature set: {missing[:5]}")
        return self.subset([position[w] for w in wanted])


def build_idf_model(corpus: Corpus) -> IdfModel:
    """Fit IDF over the union of all contexts, questions and answers."""
    texts = [dp.context for dp in corpus] + [dp.question for dp in corpus] + [dp.answer for dp in corpus]
    return fit_idf(texts)


def _featurize_one(dp: DataPoint, idf: IdfModel, emb: EmbeddingTable, tagger: PosTagger):
    ctx = lexical.tokenize(dp.context)
    q = lexical.tokenize(dp.question)
    ans = lexical.tokenize(dp.answer)
    fc = lexical.tokenize(dp.rubric_fc)
    nc = lexical.tokenize(dp.rubric_nc)

    values = np.empty(N_FEATURES, dtype=np.float64)
    flags: set[str] = set()

    def put(name: str, value: float, degenerate: bool = False) -> None:
        values[FEATURE_INDEX[name]] = value
        if degenerate:
            flags.add(name)

    ctx_vec = emb.vector(dp.id, "context")
    q_vec = emb.vector(dp.id, "question")
    ans_vec = emb.vector(dp.id, "answer")
    fc_vec = emb.vector(dp.id, "rubric_fc")
    for name, (u, v) in (
        ("bge_ctx_q", (ctx_vec, q_vec)),
        ("bge_ctx_ans", (ctx_vec, ans_vec)),
        ("bge_fc_ans", (fc_vec, ans_vec)),
    ):
        zero_norm = not np.any(u) or not np.any(v)
        put(name, cosine(u, v), zero_norm)

    put("recall2_fc_ans", *lexical.recall_from_tokens(fc, ans, 2, "target_tokens"))
    put("recall2_nc_ans", *lexical.recall_from_tokens(nc, ans, 2, "target_tokens"))
    put("answer_len", float(len(ans)))

    if ans:
        tags = tagger.tags_for(dp.id, ans)
        if len(tags) != len(ans):
            raise GradematchError(f"tagger returned {len(tags)} tags for {len(ans)} tokens")
        put("lexical_density", sum(t in CONTENT_TAGS for t in tags) / len(ans))
    else:
        put("lexical_density", 0.0, True)

    for name, (left, right) in (("jaccard1_q_ans", (q, ans)), ("jaccard1_ctx_ans", (ctx, ans))):
        union = len(set(left) | set(right))
        put(name, len(set(left) & set(right)) / union if union else 0.0, union == 0)

    put("recall2_q_ans", *lexical.recall_from_tokens(q, ans, 2))
    put("recall2_ctx_ans", *lexical.recall_from_tokens(ctx, ans, 2))
    put("recall2_ctx_ans_minus_q", *lexical.minus_question_recall_from_tokens(ctx, q, ans, 2))
    put("tfidf_q_ans", *lexical.tfidf_cosine_from_tokens(q, ans, idf))
    put("tfidf_ctx_ans", *lexical.tfidf_cosine_from_tokens(ctx, ans, idf))
    put("precision1_q_ans", *lexical.precision_from_tokens(q, ans, 1))
    put("recall1_q_ans", *lexical.recall_from_tokens(q, ans, 1))
    put("recall1_ctx_ans", *lexical.recall_from_tokens(ctx, ans, 1))
    put("recall1_ctx_ans_minus_q", *lexical.minus_question_recall_from_tokens(ctx, q, ans, 1))

    if not np.all(np.isfinite(values)):
        raise GradematchError(f"non-finite feature for id {dp.id!r}")
    return values, frozenset(flags)


def featurize(
    corpus: Corpus,
    idf: IdfModel,
    emb: EmbeddingTable,
    tagger: PosTagger,
    threads: int = 1,
) -> LabeledFeatureSet:
    """Compute one FeatureVector row per datapoint, in corpus order.

    Each row depends only on its own datapoint plus the shared IdfModel and
    EmbeddingTable, so the computation is a deterministic parallel map.
    Raises EmbeddingError if any required (id, field) vector is missing.
    """
    if len(corpus) == 0:
        raise GradematchError("cannot featurize an empty corpus")
    rows = parallel_map(lambda dp: _featurize_one(dp, idf, emb, tagger), corpus.datapoints, threads)
    return LabeledFeatureSet(
        ids=[dp.id for dp in corpus],
        domains=[dp.domain for dp in corpus],
        labels=np.array([dp.label for dp in corpus], dtype=np.int64),
        matrix=np.vstack([values for values, _ in rows]),
        degenerate=[flags for _, flags in rows],
    )


def mean_by_label(features: LabeledFeatureSet, labels: list[int] | None = None) -> dict[int, np.ndarray]:
    """Componentwise mean vector per label; raises if a requested label is absent."""
    present = [int(v) for v in np.unique(features.labels)]
    wanted = present if labels is None else list(labels)
    means: dict[int, np.ndarray] = {}
    for label in wanted:
        mask = features.labels == label
        if not mask.any():
            raise GradematchError(f"no rows with label {label}")
        means[label] = features.matrix[mask].mean(axis=0)
    return means


_TSV_HEADER = ("id", "domain", "label", *FEATURE_NAMES, "degenerate")


def write_features_tsv(features: LabeledFeatureSet, path: str | Path) -> None:
    """Persist a feature matrix as a TSV with the canonical header.

    Floats are written with ``repr`` so reading the file back is lossless.
    """
    lines = ["\t".join(_TSV_HEADER)]
    for i, item_id in enumerate(features.ids):
        cells = [item_id, features.domains[i], str(int(features.labels[i]))]
        cells.extend(repr(float(v)) for v in features.matrix[i])
        cells.append(";".join(sorted(features.degenerate[i])))
        lines.append("\t".join(cells))
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_features_tsv(path: str | Path) -> LabeledFeatureSet:
    """Load a feature matrix written by write_features_tsv; validates the schema."""
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines:
        raise SchemaError(f"{path}: empty feature file")
    header = tuple(lines[0].split("\t"))
    if header != _TSV_HEADER:
        raise SchemaError(
            f"{path}: header does not match the canonical schema "
            f"(expected {len(_TSV_HEADER)} columns starting id/domain/label)"
        )
    ids: list[str] = []
    domains: list[str] = []
    labels: list[int] = []
    rows: list[list[float]] = []
    degenerate: list[frozenset[str]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split("\t")
        if len(cells) != len(_TSV_HEADER):
            raise SchemaError(f"{path}:{lineno}: expected {len(_TSV_HEADER)} columns, got {len(cells)}")
        ids.append(cells[0])
        domains.append(cells[1])
        labels.append(int(cells[2]))
        rows.append([float(cell) for cell in cells[3 : 3 + N_FEATURES]])
        flags = cells[3 + N_FEATURES]
        degenerate.append(frozenset(flags.split(";")) if flags else frozenset())
    return LabeledFeatureSet(
        ids=ids,
        domains=domains,
        labels=np.array(labels, dtype=np.int64),
        matrix=np.array(rows, dtype=np.float64),
        degenerate=degenerate,
    )
