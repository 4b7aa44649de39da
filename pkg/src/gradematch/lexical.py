"""Token-level text similarity: n-gram overlap, Jaccard, TF-IDF cosine.

All metrics share one tokenizer: lowercased maximal runs of Unicode
letters/digits, with word-internal apostrophes kept ("they're" is one token)
and boundary apostrophes treated as quotation marks. "Shared n-grams" always
means the clipped multiset intersection (per-gram counts capped by both
sides), so repeated tokens cannot inflate overlap.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from .exceptions import GradematchError

# Unicode letters/digits (\w without the underscore), apostrophes only inside.
_TOKEN = re.compile(r"[^\W_]+(?:'[^\W_]+)*")

Ngram = tuple[str, ...]
Denominator = Literal["target_ngrams", "target_tokens"]


def tokenize(text: str) -> list[str]:
    """Lowercase and split into word tokens; punctuation is dropped."""
    return _TOKEN.findall(text.lower().replace("’", "'"))


def ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    """Multiset of n-grams over a token sequence."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _shared(source: Counter, target: Counter) -> int:
    # Clipped multiset intersection, summed over target n-grams.
    return sum(min(count, source[gram]) for gram, count in target.items() if gram in source)


def jaccard_unigram(a: str, b: str) -> float:
    """|tokens(a) ∩ tokens(b)| / |tokens(a) ∪ tokens(b)|, 0 if both are empty."""
    set_a, set_b = set(tokenize(a)), set(tokenize(b))
    union = len(set_a | set_b)
    if union == 0:
        return 0.0
    return len(set_a & set_b) / union


def recall_from_tokens(
    source_tokens: Sequence[str],
    target_tokens: Sequence[str],
    n: int,
    denominator: Denominator = "target_ngrams",
) -> tuple[float, bool]:
    """(recall value, denominator-was-zero flag); see ngram_recall."""
    target_counts = ngram_counts(target_tokens, n)
    if denominator == "target_ngrams":
        den = sum(target_counts.values())
    elif denominator == "target_tokens":
        den = len(target_tokens)
    else:
        raise ValueError(f"unknown denominator {denominator!r}")
    if den == 0:
        return 0.0, True
    return _shared(ngram_counts(source_tokens, n), target_counts) / den, False


def ngram_recall(
    source: str, target: str, n: int, denominator: Denominator = "target_ngrams"
) -> float:
    """Shared n-grams between source and target, scaled by a target-side size.

    ``denominator="target_ngrams"`` divides by the number of target n-grams
    (the usual recall, "fraction of target n-grams found in the source");
    ``denominator="target_tokens"`` divides by the target token count instead
    (used by the rubric/answer overlap features). Returns 0 when the
    denominator is 0.
    """
    value, _ = recall_from_tokens(tokenize(source), tokenize(target), n, denominator)
    return value


def precision_from_tokens(
    source_tokens: Sequence[str], target_tokens: Sequence[str], n: int
) -> tuple[float, bool]:
    """(precision value, denominator-was-zero flag); see ngram_precision."""
    source_counts = ngram_counts(source_tokens, n)
    den = sum(source_counts.values())
    if den == 0:
        return 0.0, True
    return _shared(ngram_counts(target_tokens, n), source_counts) / den, False


def ngram_precision(source: str, target: str, n: int) -> float:
    """Fraction of source n-grams that also appear in the target (clipped)."""
    value, _ = precision_from_tokens(tokenize(source), tokenize(target), n)
    return value


def minus_question_recall_from_tokens(
    context_tokens: Sequence[str],
    question_tokens: Sequence[str],
    answer_tokens: Sequence[str],
    n: int,
) -> tuple[float, bool]:
    """(value, S-was-empty flag); see minus_question_recall."""
    answer_set = set(ngram_counts(answer_tokens, n))
    question_set = set(ngram_counts(question_tokens, n))
    remaining = answer_set - question_set
    if not remaining:
        return 0.0, True
    context_set = set(ngram_counts(context_tokens, n))
    return len(remaining & context_set) / len(remaining), False


def minus_question_recall(context: str, question: str, answer: str, n: int) -> float:
    """Context coverage of the answer's n-grams after removing question n-grams.

    Let S be the set of answer n-grams minus the set of question n-grams
    (set semantics, counts ignored). Returns |S ∩ context n-grams| / |S|,
    or 0 when S is empty.
    """
    value, _ = minus_question_recall_from_tokens(
        tokenize(context), tokenize(question), tokenize(answer), n
    )
    return value


def answer_length(answer: str) -> int:
    """Token count of the answer under the shared tokenizer."""
    return len(tokenize(answer))


@dataclass(frozen=True)
class IdfModel:
    """Smoothed inverse document frequencies fitted on a document collection.

    idf(t) = ln((1 + n_docs) / (1 + df(t))) + 1; unseen terms get df = 0.
    """

    df: dict[str, int]
    n_docs: int

    def idf(self, term: str) -> float:
        return math.log((1 + self.n_docs) / (1 + self.df.get(term, 0))) + 1.0


def fit_idf(texts: Iterable[str]) -> IdfModel:
    """Fit document frequencies over tokenized documents."""
    df: Counter = Counter()
    n_docs = 0
    for text in texts:
        n_docs += 1
        df.update(set(tokenize(text)))
    if n_docs == 0:
        raise GradematchError("fit_idf needs at least one document")
    return IdfModel(df=dict(df), n_docs=n_docs)


def tfidf_weights(tokens: Sequence[str], model: IdfModel) -> dict[str, float]:
    """Raw term counts scaled by idf (no normalization)."""
    return {term: count * model.idf(term) for term, count in Counter(tokens).items()}


def tfidf_cosine_from_tokens(
    a_tokens: Sequence[str], b_tokens: Sequence[str], model: IdfModel
) -> tuple[float, bool]:
    """(cosine value, a-vector-or-b-vector-was-zero flag); see tfidf_cosine."""
    wa = tfidf_weights(a_tokens, model)
    wb = tfidf_weights(b_tokens, model)
    norm_a = math.sqrt(sum(w * w for w in wa.values()))
    norm_b = math.sqrt(sum(w * w for w in wb.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0, True
    dot = sum(weight * wb[term] for term, weight in wa.items() if term in wb)
    return dot / (norm_a * norm_b), False


def tfidf_cosine(a: str, b: str, model: IdfModel) -> float:
    """Cosine similarity of TF-IDF vectors (raw counts x idf, length-normalized).

    Returns 0 if either vector is all-zero (empty text).
    """
    value, _ = tfidf_cosine_from_tokens(tokenize(a), tokenize(b), model)
    return value
