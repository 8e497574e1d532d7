"""Reuters-format corpus parsing, text preprocessing, and partition tooling.

The on-disk format is the tagged newswire record layout: a ``PATTERN-ID``
header line, a block of category fields (``TOPICS:`` ... ``END-TOPICS`` and
friends), free text, and a closing ``REUTER`` sentinel line.  Only the
TOPICS field carries classification targets; the other category fields
are parsed and discarded.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence


class Split(Enum):
    TRAINING = "training"
    TEST = "test"


class ParseError(ValueError):
    """Malformed corpus record.

    Carries the byte offset of the offending line and the id of the last
    document that parsed cleanly (None when the failure precedes any).
    """

    def __init__(self, message: str, byte_offset: int, last_good_doc_id: int | None):
        last = str(last_good_doc_id) if last_good_doc_id is not None else "none"
        super().__init__(f"{message} (byte offset {byte_offset}, last good doc {last})")
        self.byte_offset = byte_offset
        self.last_good_doc_id = last_good_doc_id


# A token is a maximal run of alphanumerics and apostrophes; every other
# character (whitespace, control chars, '/', and the rest of punctuation)
# separates.  Underscore is punctuation here, hence the [^\W_] dance.
_TOKEN_RE = re.compile(r"(?:[^\W_]|')+")


def preprocess(text: str) -> list[str]:
    """Normalize text into the token list used everywhere downstream.

    Separator characters split, edge apostrophes are stripped, purely
    numeric tokens are dropped (digits embedded in alphanumerics like
    "g7" survive), and the survivors are lowercased.  No stemming, no
    stopword removal.
    """
    tokens = []
    for raw in _TOKEN_RE.findall(text):
        word = raw.strip("'")
        if not word or word.isdigit():
            continue
        tokens.append(word.lower())
    return tokens


@dataclass(frozen=True)
class Document:
    """One newswire story with its gold category assignments."""

    doc_id: int
    split: Split
    title: str
    body: str
    topics: frozenset[str]

    def __post_init__(self):
        if self.doc_id < 1:
            raise ValueError(f"doc_id must be positive, got {self.doc_id}")
        object.__setattr__(self, "topics", frozenset(self.topics))

    @property
    def text(self) -> str:
        return "\n".join(part for part in (self.title, self.body) if part)

    @cached_property
    def tokens(self) -> list[str]:
        return preprocess(self.text)


@dataclass(frozen=True)
class Collection:
    """Ordered documents plus the declared category set (L names)."""

    documents: tuple[Document, ...]
    categories: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "documents", tuple(self.documents))
        object.__setattr__(self, "categories", tuple(self.categories))
        if len(set(self.categories)) != len(self.categories):
            raise ValueError("duplicate category names")
        seen_ids = set()
        declared = set(self.categories)
        for doc in self.documents:
            if doc.doc_id in seen_ids:
                raise ValueError(f"duplicate doc_id {doc.doc_id}")
            seen_ids.add(doc.doc_id)
            undeclared = doc.topics - declared
            if undeclared:
                raise ValueError(
                    f"doc {doc.doc_id} carries undeclared topics: {sorted(undeclared)}"
                )

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)


@dataclass(frozen=True)
class CollectionStats:
    doc_count: int
    word_occurrences: int
    words_per_doc_avg: float
    docs_with_topics: int
    docs_with_topics_pct: float
    topic_occurrences: int
    topics_per_doc_avg: float


_CATEGORY_FIELDS = ("TOPICS", "PLACES", "PEOPLE", "ORGS", "EXCHANGES", "COMPANIES")
_HEADER_RE = re.compile(r"^\s*PATTERN-ID\s+(\d+)(?:\s+(TRAINING-SET|TEST-SET))?\s*$")
_DATE_RE = re.compile(r"^\s*\d{1,2}-[A-Z]{3}-\d{4}\s+[\d:.]+\s*$")
_FIELD_RE = re.compile(r"^\s*(%s):(.*)$" % "|".join(_CATEGORY_FIELDS))
_SENTINEL = "REUTER"


def parse_collection(
    raw: bytes | str, categories: Sequence[str] | None = None
) -> Collection:
    """Parse a raw tagged-record stream into a Collection.

    The file's own TRAINING-SET/TEST-SET annotation is stored on each
    document but carries no authority; the real partition comes from
    :func:`split_collection`.  When ``categories`` is None the declared
    set is the sorted union of observed topics.
    """
    text = raw.decode("latin-1") if isinstance(raw, (bytes, bytearray)) else raw
    raw_lines = text.split("\n")
    offsets = []
    pos = 0
    for line in raw_lines:
        offsets.append(pos)
        pos += len(line) + 1
    lines = [line.rstrip("\r") for line in raw_lines]
    n_lines = len(lines)

    declared = None
    if categories is not None:
        declared = {c.lower() for c in categories}

    documents: list[Document] = []
    last_good: int | None = None
    i = 0
    while True:
        while i < n_lines and not lines[i].strip():
            i += 1
        if i >= n_lines:
            break

        header = _HEADER_RE.match(lines[i])
        if header is None:
            raise ParseError("expected PATTERN-ID header", offsets[i], last_good)
        record_start = i
        doc_id = int(header.group(1))
        split = Split.TEST if header.group(2) == "TEST-SET" else Split.TRAINING
        i += 1

        if i < n_lines and _DATE_RE.match(lines[i]):
            i += 1

        topics: list[str] = []
        while i < n_lines:
            field = _FIELD_RE.match(lines[i])
            if field is None:
                break
            name = field.group(1)
            field_start = i
            end_marker = f"END-{name}"
            content: list[str] = []
            chunk = field.group(2)
            closed = False
            while True:
                for token in chunk.split():
                    if token == end_marker:
                        closed = True
                        break
                    content.append(token)
                i += 1
                if closed:
                    break
                if i >= n_lines:
                    raise ParseError(
                        f"missing {end_marker}", offsets[field_start], last_good
                    )
                chunk = lines[i]
            if name == "TOPICS":
                topics = [t.lower() for t in content]

        free: list[str] = []
        closed = False
        while i < n_lines:
            if lines[i].strip() == _SENTINEL:
                closed = True
                i += 1
                break
            free.append(lines[i])
            i += 1
        if not closed:
            raise ParseError(
                f"missing {_SENTINEL} sentinel", offsets[record_start], last_good
            )

        while free and not free[0].strip():
            free.pop(0)
        while free and not free[-1].strip():
            free.pop()
        title = free[0].strip() if free else ""
        body = "\n".join(free[1:])

        if declared is not None:
            unknown = set(topics) - declared
            if unknown:
                raise ParseError(
                    f"undeclared topics {sorted(unknown)}",
                    offsets[record_start],
                    last_good,
                )
        if any(d.doc_id == doc_id for d in documents):
            raise ParseError(
                f"duplicate PATTERN-ID {doc_id}", offsets[record_start], last_good
            )

        documents.append(Document(doc_id, split, title, body, frozenset(topics)))
        last_good = doc_id

    if categories is None:
        observed: set[str] = set()
        for doc in documents:
            observed.update(doc.topics)
        category_list = tuple(sorted(observed))
    else:
        category_list = tuple(c.lower() for c in categories)
    return Collection(tuple(documents), category_list)


def serialize_collection(collection: Collection) -> str:
    """Re-emit a collection in the tagged record format it was parsed from."""
    out: list[str] = []
    for doc in collection.documents:
        tag = "TRAINING-SET" if doc.split is Split.TRAINING else "TEST-SET"
        out.append(f" PATTERN-ID {doc.doc_id} {tag}")
        topic_text = " ".join(sorted(doc.topics))
        for name in _CATEGORY_FIELDS:
            inner = topic_text if name == "TOPICS" else ""
            if inner:
                out.append(f"{name}: {inner}  END-{name}")
            else:
                out.append(f"{name}:  END-{name}")
        if doc.title:
            out.append("    " + doc.title)
        if doc.body:
            out.append(doc.body)
        out.append(f" {_SENTINEL}")
    return "\n".join(out) + ("\n" if out else "")


def split_collection(
    collection: Collection, train_count: int
) -> tuple[Collection, Collection]:
    """Positional partition: first ``train_count`` documents train, the rest test.

    Both subcollections keep the full declared category set.
    """
    if not 0 <= train_count <= len(collection.documents):
        raise ValueError(
            f"train_count {train_count} out of range 0..{len(collection.documents)}"
        )
    train = tuple(
        replace(d, split=Split.TRAINING) for d in collection.documents[:train_count]
    )
    test = tuple(
        replace(d, split=Split.TEST) for d in collection.documents[train_count:]
    )
    return (
        Collection(train, collection.categories),
        Collection(test, collection.categories),
    )


def collection_stats(collection: Collection) -> CollectionStats:
    """Per-collection counts; word occurrences are post-preprocessing tokens."""
    n = len(collection.documents)
    words = sum(len(d.tokens) for d in collection.documents)
    with_topics = sum(1 for d in collection.documents if d.topics)
    topic_occ = sum(len(d.topics) for d in collection.documents)
    return CollectionStats(
        doc_count=n,
        word_occurrences=words,
        words_per_doc_avg=words / n if n else 0.0,
        docs_with_topics=with_topics,
        docs_with_topics_pct=100.0 * with_topics / n if n else 0.0,
        topic_occurrences=topic_occ,
        topics_per_doc_avg=topic_occ / n if n else 0.0,
    )


_STATS_ROWS = (
    ("Docs", "Number", lambda s: f"{s.doc_count:,}"),
    ("Words", "Occurrences", lambda s: f"{s.word_occurrences:,}"),
    ("", "Doc. average", lambda s: f"{s.words_per_doc_avg:,.0f}"),
    ("Docs with", "Number", lambda s: f"{s.docs_with_topics:,}"),
    ("1+ Topics", "Percentage", lambda s: f"{s.docs_with_topics_pct:.0f}"),
    ("Topics", "Occurrences", lambda s: f"{s.topic_occurrences:,}"),
    ("", "Doc. average", lambda s: f"{s.topics_per_doc_avg:.2f}"),
)


def render_stats_table(columns: dict[str, CollectionStats]) -> str:
    """Aligned text table, one column per subcollection."""
    names = list(columns)
    group_w = max(len(r[0]) for r in _STATS_ROWS)
    label_w = max(len(r[1]) for r in _STATS_ROWS)
    cells = [[fmt(columns[n]) for n in names] for _, _, fmt in _STATS_ROWS]
    widths = [
        max(len(names[j]), max(row[j] and len(row[j]) or 0 for row in cells))
        for j in range(len(names))
    ]
    lines = [
        " ".join(
            [" " * group_w, " " * label_w]
            + [names[j].rjust(widths[j]) for j in range(len(names))]
        ).rstrip()
    ]
    for (group, label, _), row in zip(_STATS_ROWS, cells):
        lines.append(
            " ".join(
                [group.ljust(group_w), label.ljust(label_w)]
                + [row[j].rjust(widths[j]) for j in range(len(names))]
            ).rstrip()
        )
    return "\n".join(lines) + "\n"


def stats_to_json(columns: dict[str, CollectionStats]) -> str:
    """Machine-readable stats snapshot keyed by subcollection name."""
    payload = {
        name: {
            "doc_count": s.doc_count,
            "word_occurrences": s.word_occurrences,
            "words_per_doc_avg": s.words_per_doc_avg,
            "docs_with_topics": s.docs_with_topics,
            "docs_with_topics_pct": s.docs_with_topics_pct,
            "topic_occurrences": s.topic_occurrences,
            "topics_per_doc_avg": s.topics_per_doc_avg,
        }
        for name, s in columns.items()
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def load_raw(paths: Iterable[str | Path]) -> bytes:
    """Concatenate one or more corpus files; directories expand to their
    files in name order."""
    chunks: list[bytes] = []
    for path in paths:
        p = Path(path)
        files = sorted(f for f in p.iterdir() if f.is_file()) if p.is_dir() else [p]
        for f in files:
            data = f.read_bytes()
            chunks.append(data if data.endswith(b"\n") else data + b"\n")
    return b"".join(chunks)
