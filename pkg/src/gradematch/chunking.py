"""Sentence segmentation and random-target word-count chunking.

Plain texts are split into sentences with a regular-expression splitter, then
consecutive sentences are concatenated until a per-chunk target word count is
reached. Targets are drawn uniformly from [min_words, max_words]; a trailing
partial chunk is kept only if it still reaches min_words.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ._util import child_seed, parallel_map

DEFAULT_MIN_WORDS = 150
DEFAULT_MAX_WORDS = 800

# Tokens that end with a period without ending a sentence. Checked lowercased,
# without the trailing period.
_ABBREVIATIONS = frozenset(
    """
    mr mrs ms dr prof rev fr sr jr st mt no vs etc al inc ltd co corp dept est
    approx fig figs eq eqs sec chap vol pp ed eds trans repr ca cf
    jan feb mar apr jun jul aug sep sept oct nov dec mon tue wed thu fri sat sun
    """.split()
)

# Candidate boundary: terminal punctuation, optional closing quotes/brackets,
# whitespace, then an optional opening quote/bracket and an uppercase or digit.
_BOUNDARY = re.compile(r"([.!?]+)([\"'”’)\]]*)\s+(?=[\"'“‘(\[]*[A-Z0-9])")

_WS = re.compile(r"\s+")


def _is_abbreviation(word: str) -> bool:
    word = word.lstrip("\"'“‘([")
    if not word:
        return False
    if "." in word:  # e.g. / i.e. / U.S. style tokens
        return True
    if len(word) == 1 and word.isalpha() and word.isupper():
        return True  # middle initial, "J. Smith"
    return word.lower() in _ABBREVIATIONS


def segment_sentences(text: str) -> list[str]:
    """Split plain text into sentences.

    Whitespace runs are normalized to single spaces first, so joining the
    returned sentences with single spaces preserves every non-whitespace
    character of the input in order. Boundaries are placed after terminal
    punctuation (. ! ?) followed by whitespace and an uppercase letter or
    digit; a period does not split after common abbreviations, initials, or
    dotted tokens.
    """
    normalized = " ".join(text.split())
    if not normalized:
        return []
    sentences = []
    start = 0
    for match in _BOUNDARY.finditer(normalized):
        punct = match.group(1)
        if punct.endswith("."):
            before = normalized[start : match.start(1)]
            last_word = before.rsplit(" ", 1)[-1] if before else ""
            if _is_abbreviation(last_word):
                continue
        sentences.append(normalized[start : match.end(2)])
        start = match.end()
    tail = normalized[start:]
    if tail:
        sentences.append(tail)
    return sentences


def word_count(text: str) -> int:
    """Whitespace-delimited token count."""
    return len(text.split())


@dataclass(frozen=True)
class ChunkParams:
    min_words: int = DEFAULT_MIN_WORDS
    max_words: int = DEFAULT_MAX_WORDS
    seed: int = 0

    def __post_init__(self) -> None:
        if not (0 < self.min_words <= self.max_words):
            raise ValueError(
                f"need 0 < min_words <= max_words, got {self.min_words}/{self.max_words}"
            )


def draw_targets(params: ChunkParams, n: int) -> list[int]:
    """The first ``n`` chunk targets produced by ``params.seed``.

    Exposed so callers can replay the target sequence for verification.
    """
    rng = np.random.default_rng(params.seed)
    return [int(rng.integers(params.min_words, params.max_words, endpoint=True)) for _ in range(n)]


def chunk(sentences: list[str], params: ChunkParams) -> list[str]:
    """Concatenate consecutive sentences into chunks of at least min_words.

    A fresh target is drawn per chunk, uniformly over [min_words, max_words];
    sentences are appended in order until the cumulative word count reaches the
    target. The final partial chunk is emitted only if it has at least
    min_words words. The emitted chunks are a prefix-contiguous, order
    preserving partition of a prefix of the input sentences.
    """
    rng = np.random.default_rng(params.seed)
    chunks: list[str] = []
    buffer: list[str] = []
    count = 0
    target = int(rng.integers(params.min_words, params.max_words, endpoint=True))
    for sentence in sentences:
        buffer.append(sentence)
        count += word_count(sentence)
        if count >= target:
            chunks.append(" ".join(buffer))
            buffer = []
            count = 0
            target = int(rng.integers(params.min_words, params.max_words, endpoint=True))
    if buffer and count >= params.min_words:
        chunks.append(" ".join(buffer))
    return chunks


def chunk_documents(
    documents: list[tuple[str, str]],
    params: ChunkParams,
    threads: int = 1,
) -> list[tuple[str, int, str]]:
    """Segment and chunk (doc_id, text) pairs into (doc_id, chunk_index, chunk).

    Each document gets its own RNG seeded from (params.seed, doc_id), so the
    output is independent of worker scheduling and of the other documents.
    """

    def one(doc: tuple[str, str]) -> list[tuple[str, int, str]]:
        doc_id, text = doc
        doc_params = ChunkParams(params.min_words, params.max_words, child_seed(params.seed, doc_id))
        pieces = chunk(segment_sentences(text), doc_params)
        return [(doc_id, index, piece) for index, piece in enumerate(pieces)]

    rows: list[tuple[str, int, str]] = []
    for group in parallel_map(one, documents, threads=threads):
        rows.extend(group)
    return rows
