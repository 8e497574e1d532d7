"""Category synonym maps: a file-backed stand-in for lexical-database synsets.

The file format is line oriented and hand-editable::

    # comment
    fuel: fuel | combustible | combustible material
    barley:

A bare ``category:`` line means "no expansion" — the category's own name
terms are always injected, so every entry is at least as rich as the
direct name representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

from .corpus import preprocess
from .vsm import Term


class LexiconFormatError(ValueError):
    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def category_name_terms(name: str) -> tuple[Term, ...]:
    """Terms representing a bare category name.

    A hyphenated name is a bundle of synonyms: each '-'-separated piece
    becomes its own term ("iron-steel" -> iron, steel).  A piece keeps
    its internal tokens together, so a spaced name like "balance of
    payments" is a single multiword term.
    """
    terms: list[Term] = []
    for piece in name.split("-"):
        tokens = tuple(preprocess(piece))
        if tokens and tokens not in terms:
            terms.append(tokens)
    return tuple(terms)


@dataclass(frozen=True)
class SynsetMap:
    """Category -> ordered, duplicate-free synonym term lists."""

    entries: Mapping[str, tuple[Term, ...]] = field(default_factory=dict)

    @classmethod
    def empty(cls) -> "SynsetMap":
        return cls({})

    def __contains__(self, category: str) -> bool:
        return category.lower() in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def expand_category(category: str, synsets: SynsetMap) -> tuple[Term, ...]:
    """Full synonym term list for a category.

    Categories absent from the map fall back to their own name terms,
    which makes expansion with an empty map identical to the direct
    representation.
    """
    entry = synsets.entries.get(category.lower())
    if entry is not None:
        return entry
    return category_name_terms(category)


def _split_synonyms(text: str, line_no: int) -> list[str]:
    """Split a synonym field on unescaped '|'; supports \\|, \\# and \\\\."""
    items: list[str] = []
    buf: list[str] = []
    chars = iter(text)
    for ch in chars:
        if ch == "\\":
            nxt = next(chars, None)
            if nxt not in ("|", "#", "\\"):
                shown = "\\" if nxt is None else f"\\{nxt}"
                raise LexiconFormatError(f"unknown escape {shown!r}", line_no)
            buf.append(nxt)
        elif ch == "|":
            items.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    items.append("".join(buf))
    if len(items) == 1 and not items[0].strip():
        return []
    cleaned = []
    for item in items:
        if not item.strip():
            raise LexiconFormatError("empty synonym", line_no)
        cleaned.append(item.strip())
    return cleaned


def _strip_comment(line: str) -> str:
    out: list[str] = []
    chars = iter(line)
    for ch in chars:
        if ch == "\\":
            nxt = next(chars, None)
            out.append(ch)
            if nxt is not None:
                out.append(nxt)
        elif ch == "#":
            break
        else:
            out.append(ch)
    return "".join(out)


def load_lexicon(path: str | Path) -> SynsetMap:
    """Load and validate a synonym map file.

    Synonyms are normalized with the corpus preprocessing rules; the
    category's own name terms are injected when the file omits them.
    """
    entries: dict[str, tuple[Term, ...]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw_line in enumerate(fh, 1):
            line = _strip_comment(raw_line).strip()
            if not line:
                continue
            name, sep, rest = line.partition(":")
            if not sep:
                raise LexiconFormatError("expected 'category: synonyms'", line_no)
            category = name.strip().lower()
            if not category:
                raise LexiconFormatError("empty category name", line_no)
            if category in entries:
                raise LexiconFormatError(f"duplicate category {category!r}", line_no)
            terms: list[Term] = []
            for synonym in _split_synonyms(rest, line_no):
                tokens = tuple(preprocess(synonym))
                if not tokens:
                    raise LexiconFormatError(
                        f"synonym {synonym!r} normalizes to nothing", line_no
                    )
                if tokens not in terms:
                    terms.append(tokens)
            injected = [t for t in category_name_terms(category) if t not in terms]
            entries[category] = tuple(injected) + tuple(terms)
    return SynsetMap(entries)


def bundled_lexicon_path() -> Path:
    """Path of the sample lexicon shipped with the package."""
    return Path(str(resources.files("catvec").joinpath("data/reuters-topics.lex")))
