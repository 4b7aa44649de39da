#!/usr/bin/env python3
"""Regenerate the bundled demo corpora and synthetic embeddings.

Everything is derived from fixed seeds, so rerunning this script reproduces
demos/data/ byte for byte. The embeddings are synthetic stand-ins with the
same interchange format a real encoder sidecar would produce.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

DATA_DIR = Path(__file__).parent / "data"
EMBED_DIM = 16

TOPICS = {
    "ecology": {
        "nouns": "forest river species habitat predator prey nutrient soil canopy seed".split(),
        "verbs": "absorbs cycles migrates competes adapts decomposes spreads regulates".split(),
    },
    "economics": {
        "nouns": "market price tariff demand supply labor capital inflation trade surplus".split(),
        "verbs": "rises falls shifts clears contracts expands stabilizes responds".split(),
    },
    "astronomy": {
        "nouns": "planet orbit telescope comet gravity spectrum galaxy satellite dust star".split(),
        "verbs": "orbits reflects collapses accelerates emits rotates drifts converges".split(),
    },
}

FILLER = "the a this that each its into from under over with and or while because".split()


def sentence(rng: np.random.Generator, nouns, verbs, length: int) -> str:
    words = []
    for _ in range(length):
        roll = rng.random()
        if roll < 0.45:
            words.append(str(rng.choice(nouns)))
        elif roll < 0.7:
            words.append(str(rng.choice(verbs)))
        else:
            words.append(str(rng.choice(FILLER)))
    text = " ".join(words)
    return text[0].upper() + text[1:] + "."


def paragraph(rng, nouns, verbs, n_sentences: int) -> str:
    return " ".join(sentence(rng, nouns, verbs, int(rng.integers(6, 14))) for _ in range(n_sentences))


def make_record(rng: np.random.Generator, index: int, domain: str, prefix: str) -> dict:
    pools = TOPICS[domain]
    nouns, verbs = pools["nouns"], pools["verbs"]
    label = int(rng.integers(0, 3))
    context = paragraph(rng, nouns, verbs, int(rng.integers(3, 6)))
    focus = [str(w) for w in rng.choice(nouns, size=3, replace=False)]
    question = f"How does the {focus[0]} affect the {focus[1]} described above?"
    rubric_fc = f"Explains that the {focus[0]} changes the {focus[1]} and names the {focus[2]}."
    rubric_pc = f"Mentions the {focus[0]} or the {focus[1]} without linking them."
    rubric_nc = f"Does not mention the {focus[0]} or repeats the question."
    if label == 2:
        answer = f"The {focus[0]} changes the {focus[1]} because the {focus[2]} " + sentence(
            rng, nouns, verbs, 6
        ).lower()
    elif label == 1:
        answer = f"The {focus[0]} matters here. " + sentence(rng, nouns, verbs, 5)
    else:
        answer = sentence(rng, [w for w in nouns if w not in focus], verbs, int(rng.integers(4, 9)))
    return {
        "id": f"{prefix}{index:04d}",
        "domain": domain,
        "context": context,
        "question": question,
        "rubric_fc": rubric_fc,
        "rubric_pc": rubric_pc,
        "rubric_nc": rubric_nc,
        "answer": answer,
        "label": label,
    }


def make_corpus(seed: int, n: int, prefix: str) -> list[dict]:
    rng = np.random.default_rng(seed)
    domains = list(TOPICS)
    return [make_record(rng, i, domains[i % len(domains)], prefix) for i in range(n)]


def pseudo_embedding(item_id: str, field: str, text: str) -> list[float]:
    """Deterministic unit vector standing in for a real text encoder."""
    digest = hashlib.sha256(f"{item_id}/{field}/{text}".encode("utf-8")).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
    vec = rng.normal(size=EMBED_DIM)
    vec /= np.linalg.norm(vec)
    return [float(round(v, 8)) for v in vec]


def write_jsonl(path: Path, rows: list[dict], header: str | None = None) -> None:
    lines = ([header] if header else []) + [json.dumps(r, ensure_ascii=False) for r in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def embeddings_for(records: list[dict]) -> list[dict]:
    rows = []
    for record in records:
        for fld in ("context", "question", "answer", "rubric_fc"):
            rows.append(
                {
                    "id": record["id"],
                    "field": fld,
                    "vector": pseudo_embedding(record["id"], fld, record[fld]),
                }
            )
    return rows


def make_plain_texts(seed: int, n_docs: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    docs = []
    for i in range(n_docs):
        domain = list(TOPICS)[i % len(TOPICS)]
        pools = TOPICS[domain]
        docs.append(
            {
                "id": f"doc{i:03d}",
                "text": paragraph(rng, pools["nouns"], pools["verbs"], int(rng.integers(40, 90))),
            }
        )
    return docs


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    header = '# {"model": "demo-hash-v1", "pooling": "none", "normalized": true, "dim": %d}' % EMBED_DIM

    reference = make_corpus(seed=20260101, n=60, prefix="ref")
    candidates = make_corpus(seed=20260202, n=120, prefix="cand")
    write_jsonl(DATA_DIR / "reference_corpus.jsonl", reference)
    write_jsonl(DATA_DIR / "candidate_corpus.jsonl", candidates)
    write_jsonl(DATA_DIR / "reference_embeddings.jsonl", embeddings_for(reference), header=header)
    write_jsonl(DATA_DIR / "candidate_embeddings.jsonl", embeddings_for(candidates), header=header)
    write_jsonl(DATA_DIR / "plain_texts.jsonl", make_plain_texts(seed=20260303, n_docs=8))
    print(f"wrote demo data under {DATA_DIR}")


if __name__ == "__main__":
    main()
