"""Shared fixtures: the hand-built 5-datapoint corpus, synthetic embeddings,
and random corpus generators."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for `import oracles`

from gradematch.corpus import Corpus, DataPoint
from gradematch.embeddings import EmbeddingTable

# ---------------------------------------------------------------------------
# hand-built 5-datapoint fixture (covers identity, disjoint, repeated-token,
# empty-tokenization and empty-rubric_pc edge cases)

FIXTURE_RECORDS = [
    {
        "id": "fx1",
        "domain": "biology",
        "context": "Plants use sunlight to make sugar. The leaves absorb light. Roots draw water from the soil.",
        "question": "How do plants make sugar?",
        "rubric_fc": "States that plants use sunlight to make sugar in the leaves.",
        "rubric_pc": "Mentions sunlight or leaves without linking them.",
        "rubric_nc": "No mention of sunlight or sugar production.",
        "answer": "Plants use sunlight to make sugar in the leaves.",
        "label": 2,
    },
    {
        "id": "fx2",
        "domain": "biology",
        "context": "Rivers carve valleys over long spans of time. Water erodes rock slowly.",
        "question": "What shapes valleys?",
        "rubric_fc": "Says rivers or flowing water erode rock to carve valleys.",
        "rubric_pc": "",
        "rubric_nc": "Attributes valley formation to wind alone.",
        "answer": "What shapes valleys?",
        "label": 0,
    },
    {
        "id": "fx3",
        "domain": "history",
        "context": "The treaty was signed in 1648. It ended a long war. Many states gained independence.",
        "question": "When was the treaty signed and what did it end?",
        "rubric_fc": "Gives the year 1648 and says it ended the war.",
        "rubric_pc": "Gives the year or the outcome, not both.",
        "rubric_nc": "Gives neither the year nor the outcome.",
        "answer": "It was signed in 1648 and it ended the long war between many states.",
        "label": 2,
    },
    {
        "id": "fx4",
        "domain": "history",
        "context": "Trade routes moved silk, spice, and ideas. Caravans crossed the desert. Cities grew rich on tolls.",
        "question": "Why did cities along the routes grow rich?",
        "rubric_fc": "Cities collected tolls from passing caravans on the trade routes.",
        "rubric_pc": "Mentions trade without the toll mechanism.",
        "rubric_nc": "Unrelated or circular statements.",
        "answer": "zebra zebra quantum quantum zebra",
        "label": 0,
    },
    {
        "id": "fx5",
        "domain": "physics",
        "context": "Sound travels as waves through air. Denser media carry sound faster. A vacuum carries no sound.",
        "question": "Can sound travel through a vacuum?",
        "rubric_fc": "Says no, because sound needs a medium and a vacuum has none.",
        "rubric_pc": "Says no without the reason.",
        "rubric_nc": "Says yes or gives no answer.",
        "answer": "?!?",
        "label": 1,
    },
]

# coarse tags for each fixture answer's tokens, frozen by hand
FIXTURE_ANSWER_TAGS = {
    "fx1": ["noun", "verb", "noun", "function", "verb", "noun", "function", "function", "noun"],
    "fx2": ["noun", "verb", "noun"],
    "fx3": ["function", "verb", "verb", "function", "number", "function", "function", "verb",
            "function", "adjective", "noun", "function", "adjective", "noun"],
    "fx4": ["noun", "noun", "noun", "noun", "noun"],
    "fx5": [],
}


def _fixture_vectors(dim: int = 6) -> dict[tuple[str, str], list[float]]:
    vectors: dict[tuple[str, str], list[float]] = {}
    for i, record in enumerate(FIXTURE_RECORDS):
        rng = np.random.default_rng(1000 + i)
        for field in ("context", "question", "answer", "rubric_fc"):
            vectors[(record["id"], field)] = [float(v) for v in rng.normal(size=dim)]
    # degenerate rows: zero vector for fx5's rubric_fc, identical pair for fx2
    vectors[("fx5", "rubric_fc")] = [0.0] * dim
    vectors[("fx2", "answer")] = list(vectors[("fx2", "question")])
    return vectors


FIXTURE_VECTORS = _fixture_vectors()


@pytest.fixture()
def fixture_corpus() -> Corpus:
    return Corpus(
        datapoints=[DataPoint.from_record(dict(r)) for r in FIXTURE_RECORDS],
        name="fixture",
    )


@pytest.fixture()
def fixture_embeddings() -> EmbeddingTable:
    entries = {key: np.asarray(vec, dtype=np.float64) for key, vec in FIXTURE_VECTORS.items()}
    return EmbeddingTable(dim=6, entries=entries)


def write_corpus_file(path: Path, records: list[dict]) -> Path:
    path.write_text("\n".join(json.dumps(r, ensure_ascii=False) for r in records) + "\n", encoding="utf-8")
    return path


def write_embeddings_file(path: Path, vectors: dict[tuple[str, str], list[float]], header: str | None = None) -> Path:
    lines = []
    if header is not None:
        lines.append(header)
    for (item_id, field), vec in vectors.items():
        lines.append(json.dumps({"id": item_id, "field": field, "vector": vec}))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# random data helpers

_WORDS = (
    "water light cell river stone market treaty wave energy trade city field "
    "plant root sugar sound metal glass valley desert wind rain cloud seed "
    "price tax road bridge ship grain king law court vote iron coal steam"
).split()


def random_text(rng: np.random.Generator, n_words: int) -> str:
    return " ".join(rng.choice(_WORDS) for _ in range(n_words))


def random_records(rng: np.random.Generator, n: int, domains=("d0", "d1", "d2", "d3")) -> list[dict]:
    records = []
    for i in range(n):
        records.append(
            {
                "id": f"r{i:04d}",
                "domain": str(rng.choice(list(domains))),
                "context": random_text(rng, int(rng.integers(20, 60))),
                "question": random_text(rng, int(rng.integers(4, 12))),
                "rubric_fc": random_text(rng, int(rng.integers(6, 16))),
                "rubric_pc": random_text(rng, int(rng.integers(0, 10))),
                "rubric_nc": random_text(rng, int(rng.integers(6, 16))),
                "answer": random_text(rng, int(rng.integers(1, 30))),
                "label": int(rng.integers(0, 3)),
            }
        )
    return records


def random_corpus(rng: np.random.Generator, n: int, name: str = "random") -> Corpus:
    return Corpus(datapoints=[DataPoint.from_record(r) for r in random_records(rng, n)], name=name)


def random_embeddings_for(corpus: Corpus, rng: np.random.Generator, dim: int = 8) -> EmbeddingTable:
    entries = {}
    for dp in corpus:
        for field in ("context", "question", "answer", "rubric_fc"):
            vec = rng.normal(size=dim)
            entries[(dp.id, field)] = vec
    return EmbeddingTable(dim=dim, entries=entries)
