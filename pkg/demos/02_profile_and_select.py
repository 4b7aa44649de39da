#!/usr/bin/env python3
"""Profile the demo reference set and select matching candidate subsets.

Shows all three selection methods side by side, the per-domain few-shot
sample, and the feature-mean difference report (original vs selected).
"""

from pathlib import Path

from gradematch import (
    build_idf_model,
    build_profile,
    feature_mean_diff_report,
    featurize,
    load_corpus,
    load_embeddings,
    sample_fewshot,
    select_by_label_mean,
    select_by_reference_rank,
    select_by_representatives,
)
from gradematch.postag import LexiconPosTagger

DATA = Path(__file__).parent / "data"


def features_of(stem: str):
    corpus = load_corpus(DATA / f"{stem}_corpus.jsonl")
    emb = load_embeddings(DATA / f"{stem}_embeddings.jsonl")
    return featurize(corpus, build_idf_model(corpus), emb, LexiconPosTagger())


reference = features_of("reference")
candidates = features_of("candidate")
print(f"reference rows: {len(reference)}, candidate rows: {len(candidates)}")

# k=8 representatives, clustering in z-scored space; include the full matrix
# so method 3 can rank against individual reference rows
profile = build_profile(reference, k=8, seed=7, include_full=True)
print(f"profile: k={profile.k}, standardized={profile.standardized}")

by_mean = select_by_label_mean(profile, candidates, fraction=0.10)
by_reps = select_by_representatives(profile, candidates, fraction=0.10)
by_rank = select_by_reference_rank(profile, candidates, m=5, fraction=0.10)

for result in (by_mean, by_reps, by_rank):
    first = result.selected_ids[:4]
    print(f"method {result.method}: {len(result.selected_ids)} selected, first {first}")

overlap_12 = set(by_mean.selected_ids) & set(by_reps.selected_ids)
overlap_13 = set(by_mean.selected_ids) & set(by_rank.selected_ids)
print(f"overlap method1/method2: {len(overlap_12)}, method1/method3: {len(overlap_13)}")

fewshot = sample_fewshot(by_reps, per_domain=2, seed=7)
print(f"\nfew-shot exemplars (2 per domain): {fewshot}")

selected = candidates.subset_by_ids(by_rank.selected_ids)
report = feature_mean_diff_report(profile, [("original", candidates), ("selected", selected)])
print("\nabsolute feature-mean differences vs the reference:")
print(report.to_markdown(precision=4))
