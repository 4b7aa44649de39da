#!/usr/bin/env python3
"""Walk through feature extraction on the bundled demo corpus.

Loads the 60-record reference corpus and its synthetic embeddings, computes
the 18-component feature vector for every record, and peeks at a few rows.
"""

from pathlib import Path

from gradematch import (
    FEATURE_NAMES,
    build_idf_model,
    featurize,
    load_corpus,
    load_embeddings,
    write_features_tsv,
)
from gradematch.postag import LexiconPosTagger

DATA = Path(__file__).parent / "data"

corpus = load_corpus(DATA / "reference_corpus.jsonl")
print(f"loaded {len(corpus)} datapoints from {corpus.name}")
print(f"domains: {sorted(set(dp.domain for dp in corpus))}")

emb = load_embeddings(DATA / "reference_embeddings.jsonl")
print(f"embeddings: {len(emb)} vectors of dimension {emb.dim} (meta: {emb.meta})")

# IDF is fitted on this corpus's contexts, questions and answers
idf = build_idf_model(corpus)
print(f"idf vocabulary: {len(idf.df)} terms over {idf.n_docs} documents")

features = featurize(corpus, idf, emb, LexiconPosTagger())

print("\nfirst record:")
dp = corpus[0]
print(f"  question: {dp.question}")
print(f"  answer:   {dp.answer} (label {dp.label})")
row = features.row(0)
for name in FEATURE_NAMES:
    marker = " (degenerate)" if name in row.degenerate else ""
    print(f"  {name:28s} {row[name]: .4f}{marker}")

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)
out = out_dir / "reference_features.tsv"
write_features_tsv(features, out)
print(f"\nwrote the feature matrix to {out}")
