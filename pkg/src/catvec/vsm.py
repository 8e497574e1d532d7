"""Sparse term-weight vectors, document weighting, and cosine similarity.

Documents and categories share one vocabulary of N terms (a term is a
token sequence, usually length one).  Document weights follow
``tf * log2(M / df)`` and similarity is the cosine of the angle between
the two weight vectors.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

# A term is one or more tokens; multiword terms match as contiguous runs.
Term = tuple[str, ...]


class Vocabulary:
    """Ordered, duplicate-free term list with dense integer ids."""

    __slots__ = ("terms", "_ids", "_lengths")

    def __init__(self, terms: Iterable[Term | Sequence[str]]):
        ids: dict[Term, int] = {}
        ordered: list[Term] = []
        for term in terms:
            t = tuple(term)
            if not t:
                raise ValueError("empty term")
            if t not in ids:
                ids[t] = len(ordered)
                ordered.append(t)
        self.terms: tuple[Term, ...] = tuple(ordered)
        self._ids = ids
        # distinct term lengths, longest first, drives greedy matching
        self._lengths = tuple(sorted({len(t) for t in ordered}, reverse=True))

    def id_of(self, term: Term | Sequence[str]) -> int | None:
        return self._ids.get(tuple(term))

    def term_of(self, term_id: int) -> Term:
        return self.terms[term_id]

    @property
    def term_lengths(self) -> tuple[int, ...]:
        return self._lengths

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    def __contains__(self, term) -> bool:
        return tuple(term) in self._ids

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"Vocabulary({len(self.terms)} terms)"


class SparseVector:
    """Immutable sparse vector: sorted (term id, positive weight) pairs
    plus a cached euclidean norm."""

    __slots__ = ("pairs", "norm")

    def __init__(self, weights: Mapping[int, float] | Iterable[tuple[int, float]] = ()):
        items = weights.items() if isinstance(weights, Mapping) else weights
        pairs: list[tuple[int, float]] = []
        prev = -1
        for term_id, weight in sorted(items):
            if weight < 0 or math.isnan(weight):
                raise ValueError(f"weight for term {term_id} must be non-negative")
            if weight == 0.0:
                continue
            if term_id == prev:
                raise ValueError(f"duplicate term id {term_id}")
            prev = term_id
            pairs.append((term_id, float(weight)))
        object.__setattr__(self, "pairs", tuple(pairs))
        norm = math.sqrt(math.fsum(w * w for _, w in pairs))
        object.__setattr__(self, "norm", norm)

    def __setattr__(self, name, value):
        raise AttributeError("SparseVector is immutable")

    def __reduce__(self):
        return (SparseVector, (self.pairs,))

    def items(self) -> tuple[tuple[int, float], ...]:
        return self.pairs

    def support(self) -> tuple[int, ...]:
        return tuple(term_id for term_id, _ in self.pairs)

    def weight(self, term_id: int) -> float:
        lo, hi = 0, len(self.pairs)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.pairs[mid][0] < term_id:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(self.pairs) and self.pairs[lo][0] == term_id:
            return self.pairs[lo][1]
        return 0.0

    def l1(self) -> float:
        return math.fsum(w for _, w in self.pairs)

    def scaled(self, factor: float) -> "SparseVector":
        if factor < 0:
            raise ValueError("scale factor must be non-negative")
        return SparseVector((t, w * factor) for t, w in self.pairs)

    def dot(self, other: "SparseVector") -> float:
        a, b = self.pairs, other.pairs
        i = j = 0
        total = 0.0
        while i < len(a) and j < len(b):
            ta, tb = a[i][0], b[j][0]
            if ta == tb:
                total += a[i][1] * b[j][1]
                i += 1
                j += 1
            elif ta < tb:
                i += 1
            else:
                j += 1
        return total

    def __len__(self) -> int:
        return len(self.pairs)

    def __bool__(self) -> bool:
        return bool(self.pairs)

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseVector) and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash(self.pairs)

    def __repr__(self) -> str:
        return f"SparseVector({dict(self.pairs)!r})"


def cosine(a: SparseVector, b: SparseVector) -> float:
    """Cosine similarity in [0, 1]; defined as 0 when either vector is empty."""
    if not a.pairs or not b.pairs:
        return 0.0
    num = a.dot(b)
    den = a.norm * b.norm
    if num == 0.0 or den == 0.0:
        # a norm can underflow to 0 for denormal weights; treat as empty
        return 0.0
    # clamp: the norm round-trips through sqrt, so v.v can exceed 1 by an ulp
    return min(1.0, max(0.0, num / den))


@dataclass(frozen=True)
class DfTable:
    """Document frequencies over a fixed vocabulary; M is the doc count."""

    df: Mapping[int, int]
    doc_count: int

    def __post_init__(self):
        for term_id, n in self.df.items():
            if not 1 <= n <= self.doc_count:
                raise ValueError(
                    f"df[{term_id}] = {n} outside 1..{self.doc_count}"
                )


def match_terms(tokens: Sequence[str], vocab: Vocabulary) -> dict[int, int]:
    """Greedy longest-match term frequencies.

    At each position the longest vocabulary term starting there is
    consumed; consumed tokens are not reused by overlapping terms.
    """
    tf: dict[int, int] = {}
    lengths = vocab.term_lengths
    n = len(tokens)
    i = 0
    while i < n:
        step = 1
        for length in lengths:
            if length > n - i:
                continue
            term_id = vocab.id_of(tuple(tokens[i : i + length]))
            if term_id is not None:
                tf[term_id] = tf.get(term_id, 0) + 1
                step = length
                break
        i += step
    return tf


def build_df_table(docs: Iterable[Sequence[str]], vocab: Vocabulary) -> DfTable:
    """Count, per term, the documents containing at least one match."""
    counts: Counter[int] = Counter()
    m = 0
    for tokens in docs:
        m += 1
        counts.update(match_terms(tokens, vocab).keys())
    return DfTable(dict(counts), m)


def document_vector(tf: Mapping[int, int], dft: DfTable) -> SparseVector:
    """Weight a document's term frequencies: w_i = tf_i * log2(M / df_i).

    Terms missing from the df table (unseen at training time) are dropped;
    terms occurring in every document weigh zero and are omitted.
    """
    m = dft.doc_count
    weights: dict[int, float] = {}
    for term_id, count in tf.items():
        df = dft.df.get(term_id)
        if df is None:
            continue
        w = count * math.log2(m / df)
        if w != 0.0:
            weights[term_id] = w
    return SparseVector(weights)


def terms_present(
    terms: Iterable[Term], docs: Sequence[Sequence[str]]
) -> set[Term]:
    """Subset of ``terms`` occurring (as contiguous token runs) in ``docs``."""
    singles: set[Term] = set()
    multi: list[Term] = []
    for term in terms:
        t = tuple(term)
        (multi.append(t) if len(t) > 1 else singles.add(t))
    universe: set[str] = set()
    for tokens in docs:
        universe.update(tokens)
    present = {t for t in singles if t[0] in universe}
    for term in multi:
        first, length = term[0], len(term)
        for tokens in docs:
            found = False
            for i, tok in enumerate(tokens):
                if tok == first and tuple(tokens[i : i + length]) == term:
                    found = True
                    break
            if found:
                present.add(term)
                break
    return present


def vector_record(vector_id, vector: SparseVector, vocab: Vocabulary) -> dict:
    """Debug dump shape: {"id": ..., "terms": {"term": weight, ...}}."""
    return {
        "id": vector_id,
        "terms": {
            " ".join(vocab.term_of(term_id)): weight
            for term_id, weight in vector.pairs
        },
    }
