"""Coarse part-of-speech tagging for the lexical-density feature.

The default tagger is intentionally small: a closed-class lexicon marks
function words, suffix heuristics guess verbs/adjectives/adverbs, and
everything else defaults to noun. For exact tags, a precomputed-tags file
(one JSON object per line: {"id", "field": "answer", "tags": [...]}) can
override it per datapoint.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from ._util import read_jsonl
from .exceptions import GradematchError

NOUN = "noun"
VERB = "verb"
ADJECTIVE = "adjective"
ADVERB = "adverb"
FUNCTION = "function"
NUMBER = "number"

CONTENT_TAGS = frozenset({NOUN, VERB, ADJECTIVE, ADVERB})

_FUNCTION_WORDS = frozenset(
    """
    a an the this that these those some any each every either neither no such
    i you he she it we they me him her us them my your his its our their mine
    yours hers ours theirs myself yourself himself herself itself ourselves
    yourselves themselves who whom whose which what whatever whichever whoever
    something anything nothing everything someone anyone everyone somebody
    anybody nobody everybody one ones
    of in to for with on at by from up down about into over after under above
    below between among through during before behind beyond within without
    against along across around near off out onto upon toward towards per via
    and or but nor so yet if because although though while whereas unless since
    than as whether once until when where why how
    be am is are was were been being have has had having do does did doing
    will would shall should may might must can could ought
    not n't never also there here then thus hence however therefore
    """.split()
)

_NUMBER_WORDS = frozenset(
    """
    zero one two three four five six seven eight nine ten eleven twelve
    thirteen fourteen fifteen sixteen seventeen eighteen nineteen twenty
    thirty forty fifty sixty seventy eighty ninety hundred thousand million
    billion first second third
    """.split()
)

# (suffix, tag, minimum token length); checked in order.
_SUFFIX_RULES = (
    ("ly", ADVERB, 5),
    ("ing", VERB, 5),
    ("ed", VERB, 4),
    ("ize", VERB, 5),
    ("ise", VERB, 5),
    ("tion", NOUN, 6),
    ("sion", NOUN, 6),
    ("ment", NOUN, 6),
    ("ness", NOUN, 6),
    ("ity", NOUN, 5),
    ("ance", NOUN, 6),
    ("ence", NOUN, 6),
    ("ship", NOUN, 6),
    ("hood", NOUN, 6),
    ("ism", NOUN, 5),
    ("ous", ADJECTIVE, 5),
    ("ful", ADJECTIVE, 5),
    ("less", ADJECTIVE, 6),
    ("able", ADJECTIVE, 6),
    ("ible", ADJECTIVE, 6),
    ("ive", ADJECTIVE, 5),
    ("ish", ADJECTIVE, 5),
    ("ic", ADJECTIVE, 4),
    ("al", ADJECTIVE, 5),
)


class PosTagger:
    """Assigns exactly one coarse tag per token."""

    implementation_id = "base"

    def tag_tokens(self, tokens: Sequence[str]) -> list[str]:
        raise NotImplementedError

    def tags_for(self, item_id: str, tokens: Sequence[str]) -> list[str]:
        """Tags for one datapoint's tokens; the default ignores the id."""
        return self.tag_tokens(tokens)


class LexiconPosTagger(PosTagger):
    """Shipped lexicon + suffix heuristics; default tag is noun."""

    implementation_id = "lexicon-suffix-v1"

    def tag_tokens(self, tokens: Sequence[str]) -> list[str]:
        return [self._tag(token) for token in tokens]

    @staticmethod
    def _tag(token: str) -> str:
        if token in _FUNCTION_WORDS:
            return FUNCTION
        if token.isdigit() or token in _NUMBER_WORDS:
            return NUMBER
        for suffix, tag, min_len in _SUFFIX_RULES:
            if len(token) >= min_len and token.endswith(suffix):
                return tag
        return NOUN


class PrecomputedPosTagger(PosTagger):
    """Per-datapoint tags from a sidecar file, with an optional fallback tagger.

    Stored tag lists must match the token count exactly; a mismatch means the
    sidecar tokenized differently and is an error, not a silent skew.
    """

    implementation_id = "precomputed"

    def __init__(self, tags_by_id: dict[str, list[str]], fallback: PosTagger | None = None):
        self.tags_by_id = tags_by_id
        self.fallback = fallback

    def tag_tokens(self, tokens: Sequence[str]) -> list[str]:
        if self.fallback is None:
            raise GradematchError("precomputed tagger has no fallback for untagged text")
        return self.fallback.tag_tokens(tokens)

    def tags_for(self, item_id: str, tokens: Sequence[str]) -> list[str]:
        stored = self.tags_by_id.get(item_id)
        if stored is None:
            return self.tag_tokens(tokens)
        if len(stored) != len(tokens):
            raise GradematchError(
                f"precomputed tags for id {item_id!r} have {len(stored)} entries, "
                f"expected {len(tokens)} tokens"
            )
        return list(stored)


def load_tags_file(path: str | Path) -> dict[str, list[str]]:
    """Read a precomputed-tags file; only field == "answer" rows are accepted."""
    tags: dict[str, list[str]] = {}
    for lineno, line in read_jsonl(path):
        where = f"{Path(path).name}:{lineno}"
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise GradematchError(f"{where}: invalid JSON ({exc.msg})") from exc
        if not isinstance(record, dict) or not {"id", "field", "tags"} <= record.keys():
            raise GradematchError(f"{where}: expected fields id/field/tags")
        if record["field"] != "answer":
            raise GradematchError(f"{where}: unsupported field {record['field']!r}")
        if record["id"] in tags:
            raise GradematchError(f"{where}: duplicate tags for id {record['id']!r}")
        if not isinstance(record["tags"], list) or not all(isinstance(t, str) for t in record["tags"]):
            raise GradematchError(f"{where}: tags must be a list of strings")
        tags[record["id"]] = record["tags"]
    return tags


def lexical_density(answer: str, tagger: PosTagger) -> float:
    """Fraction of answer tokens tagged as content words; 0 for an empty answer."""
    from .lexical import tokenize

    tokens = tokenize(answer)
    if not tokens:
        return 0.0
    tags = tagger.tag_tokens(tokens)
    return sum(tag in CONTENT_TAGS for tag in tags) / len(tokens)
