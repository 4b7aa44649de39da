"""Reading, validating and writing corpora of rubric-graded short answers.

The interchange format is line-delimited JSON, one record per line, UTF-8:

    {"id": ..., "domain": ..., "context": ..., "question": ...,
     "rubric_fc": ..., "rubric_pc": ..., "rubric_nc": ..., "answer": ..., "label": 0|1|2}

Unknown extra fields are preserved on write but ignored by all computation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ._util import atomic_write_text, read_jsonl
from .exceptions import CorpusError

VALID_LABELS = (0, 1, 2)

REQUIRED_FIELDS = (
    "id",
    "domain",
    "context",
    "question",
    "rubric_fc",
    "rubric_pc",
    "rubric_nc",
    "answer",
    "label",
)

# rubric_pc may be blank (binary-graded items); the rest must hold text.
NONEMPTY_FIELDS = ("context", "question", "rubric_fc", "rubric_nc", "answer")


@dataclass(frozen=True)
class DataPoint:
    """One graded question/answer record."""

    id: str
    domain: str
    context: str
    question: str
    rubric_fc: str
    rubric_pc: str
    rubric_nc: str
    answer: str
    label: int
    extra: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_record(cls, record: dict, where: str = "record") -> "DataPoint":
        """Validate a parsed JSON record and build a DataPoint.

        Raises CorpusError on a missing field, a non-string text field, a label
        outside {0, 1, 2}, or a blank required text field.
        """
        if not isinstance(record, dict):
            raise CorpusError(f"{where}: record is not a JSON object")
        missing = [name for name in REQUIRED_FIELDS if name not in record]
        if missing:
            raise CorpusError(f"{where}: missing required field(s) {', '.join(missing)}")

        label = record["label"]
        if isinstance(label, bool) or not isinstance(label, int) or label not in VALID_LABELS:
            raise CorpusError(f"{where}: label {label!r} not in {{0, 1, 2}}")

        texts = {}
        for name in REQUIRED_FIELDS:
            if name == "label":
                continue
            value = record[name]
            if not isinstance(value, str):
                raise CorpusError(f"{where}: field {name!r} must be a string")
            texts[name] = value
        for name in NONEMPTY_FIELDS:
            if not texts[name].strip():
                raise CorpusError(f"{where}: field {name!r} is empty")
        if not texts["id"].strip():
            raise CorpusError(f"{where}: field 'id' is empty")
        if any(ch in texts["id"] for ch in "\t\n\r") or any(ch in texts["domain"] for ch in "\t\n\r"):
            raise CorpusError(f"{where}: 'id'/'domain' must not contain tabs or newlines")

        extra = {k: v for k, v in record.items() if k not in REQUIRED_FIELDS}
        return cls(
            id=texts["id"],
            domain=texts["domain"],
            context=texts["context"],
            question=texts["question"],
            rubric_fc=texts["rubric_fc"],
            rubric_pc=texts["rubric_pc"],
            rubric_nc=texts["rubric_nc"],
            answer=texts["answer"],
            label=label,
            extra=extra,
        )

    def to_record(self) -> dict:
        record = {
            "id": self.id,
            "domain": self.domain,
            "context": self.context,
            "question": self.question,
            "rubric_fc": self.rubric_fc,
            "rubric_pc": self.rubric_pc,
            "rubric_nc": self.rubric_nc,
            "answer": self.answer,
            "label": self.label,
        }
        record.update(self.extra)
        return record


@dataclass
class Corpus:
    """An ordered, immutable-by-convention collection of datapoints.

    Iteration order is the file order; downstream tie-breaking relies on it.
    ``skipped`` holds one diagnostic string per record dropped in lenient mode.
    """

    datapoints: list[DataPoint]
    name: str = ""
    skipped: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.datapoints)

    def __iter__(self):
        return iter(self.datapoints)

    def __getitem__(self, index: int) -> DataPoint:
        return self.datapoints[index]

    def ids(self) -> list[str]:
        return [dp.id for dp in self.datapoints]


def load_corpus(path: str | Path, strict: bool = True, name: str | None = None) -> Corpus:
    """Load a line-delimited corpus file.

    In strict mode any invalid record (or duplicate id) aborts with CorpusError.
    In lenient mode invalid records are skipped and recorded in ``Corpus.skipped``.
    """
    path = Path(path)
    if not path.is_file():
        raise CorpusError(f"corpus file not found: {path}")
    datapoints: list[DataPoint] = []
    seen: set[str] = set()
    skipped: list[str] = []
    for lineno, line in read_jsonl(path):
        where = f"{path.name}:{lineno}"
        try:
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{where}: invalid JSON ({exc.msg})") from exc
            dp = DataPoint.from_record(record, where=where)
            if dp.id in seen:
                raise CorpusError(f"{where}: duplicate id {dp.id!r}")
        except CorpusError as exc:
            if strict:
                raise
            skipped.append(str(exc))
            continue
        seen.add(dp.id)
        datapoints.append(dp)
    return Corpus(datapoints=datapoints, name=name if name is not None else path.stem, skipped=skipped)


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus in the interchange format (round-trips with load_corpus)."""
    lines = [json.dumps(dp.to_record(), ensure_ascii=False) for dp in corpus]
    atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))
