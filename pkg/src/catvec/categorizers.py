"""Category model builders and document scoring.

Four ways to turn a category set into weight vectors over a shared
vocabulary:

* direct     — a category is represented by its own name terms, weight 1.
* lexicon    — name terms plus the synonym expansion from a SynsetMap.
* training   — term selection by category frequency band, then
               ``tf * log2(L / cf)`` weights from labeled training text.
* integrated — lexicon terms that occur in the training text, merged with
               the training vectors after per-category L1 normalization.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import Collection, Document
from .lexicon import SynsetMap, category_name_terms, expand_category
from .vsm import (
    DfTable,
    SparseVector,
    Term,
    Vocabulary,
    cosine,
    document_vector,
    match_terms,
)

MODEL_FORMAT = "catvec-model/1"
DEFAULT_MAX_TRAINING_TERMS = 286


class Approach(Enum):
    DIRECT = "direct"
    LEXICON = "lexicon"
    TRAINING = "training"
    INTEGRATED = "integrated"


@dataclass(frozen=True)
class CategoryModel:
    """Per-category weight vectors over the model's vocabulary."""

    approach: Approach
    vocab: Vocabulary
    vectors: Mapping[str, SparseVector]
    categories: tuple[str, ...]
    metadata: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        missing = [c for c in self.categories if c not in self.vectors]
        if missing:
            raise ValueError(f"categories without vectors: {missing}")

    @property
    def category_count(self) -> int:
        return len(self.categories)


@dataclass(frozen=True)
class ScoredAssignment:
    doc_id: int
    category: str
    score: float


def build_direct(categories: Sequence[str]) -> CategoryModel:
    """Weight 1 on each of a category's own name terms, 0 elsewhere."""
    if not categories:
        raise ValueError("category list is empty")
    per_category = {c: category_name_terms(c) for c in categories}
    vocab = Vocabulary(t for c in categories for t in per_category[c])
    vectors = {
        c: SparseVector({vocab.id_of(t): 1.0 for t in per_category[c]})
        for c in categories
    }
    return CategoryModel(Approach.DIRECT, vocab, vectors, tuple(categories))


def build_lexicon(categories: Sequence[str], synsets: SynsetMap) -> CategoryModel:
    """Weight 1 on every synonym of the category.

    Categories absent from the map keep their direct name terms, so an
    empty map reproduces the direct model exactly.
    """
    per_category = {c: expand_category(c, synsets) for c in categories}
    vocab = Vocabulary(t for c in categories for t in per_category[c])
    vectors = {
        c: SparseVector({vocab.id_of(t): 1.0 for t in per_category[c]})
        for c in categories
    }
    return CategoryModel(Approach.LEXICON, vocab, vectors, tuple(categories))


def cf_band(category_count: int) -> tuple[int, int]:
    """Inclusive category-frequency band: at least 1%, at most 10% of L."""
    return (-(-category_count // 100), category_count // 10)


def training_weight(tf: int, category_count: int, cf: int) -> float:
    """Category-side analogue of the document weight: tf * log2(L / cf)."""
    return tf * math.log2(category_count / cf)


def select_training_terms(
    train: Collection, max_terms: int = DEFAULT_MAX_TRAINING_TERMS
) -> tuple[Vocabulary, dict[int, int]]:
    """Pick the training vocabulary and its category frequencies.

    Candidates are all tokens of the training documents.  A token's cf is
    the number of categories with at least one labeled document containing
    it; tokens inside the 1%..10% band are ranked by document frequency
    over all training documents (ties: higher df first, then lexicographic)
    and the top ``max_terms`` survive.
    """
    low, high = cf_band(len(train.categories))
    df: Counter[str] = Counter()
    tokens_per_category: dict[str, set[str]] = {c: set() for c in train.categories}
    for doc in train.documents:
        distinct = set(doc.tokens)
        df.update(distinct)
        for cat in doc.topics:
            tokens_per_category[cat].update(distinct)
    cf: Counter[str] = Counter()
    for cat_tokens in tokens_per_category.values():
        cf.update(cat_tokens)
    survivors = [t for t in df if low <= cf[t] <= high]
    survivors.sort(key=lambda t: (-df[t], t))
    selected = survivors[:max_terms]
    vocab = Vocabulary((t,) for t in selected)
    cf_by_id = {vocab.id_of((t,)): cf[t] for t in selected}
    return vocab, cf_by_id


def build_training(
    train: Collection, max_terms: int = DEFAULT_MAX_TRAINING_TERMS
) -> CategoryModel:
    """Category vectors from labeled training text: wc = tf * log2(L / cf).

    tf is the total occurrence count of the term across documents labeled
    with the category; a document with several topics contributes its
    counts to each of them.
    """
    category_count = len(train.categories)
    if category_count < 1:
        raise ValueError("training collection declares no categories")
    vocab, cf = select_training_terms(train, max_terms)
    totals: dict[str, dict[int, int]] = {c: {} for c in train.categories}
    for doc in train.documents:
        if not doc.topics:
            continue
        counts = match_terms(doc.tokens, vocab)
        if not counts:
            continue
        for cat in doc.topics:
            bucket = totals[cat]
            for term_id, n in counts.items():
                bucket[term_id] = bucket.get(term_id, 0) + n
    vectors = {}
    for cat in train.categories:
        vectors[cat] = SparseVector(
            {
                term_id: training_weight(n, category_count, cf[term_id])
                for term_id, n in totals[cat].items()
            }
        )
    metadata = {}
    if len(vocab) < max_terms:
        metadata["training_term_shortfall"] = max_terms - len(vocab)
    return CategoryModel(
        Approach.TRAINING, vocab, vectors, tuple(train.categories), metadata
    )


def build_integrated(
    lex: CategoryModel, trn: CategoryModel, train_vocab: Iterable[Term]
) -> CategoryModel:
    """Merge a lexicon model with a training model.

    Lexicon terms that never occur in the training text (``train_vocab``)
    are dropped.  Per category, each surviving source vector is scaled to
    unit L1 mass — equal influence for both resources — and the scaled
    weights are summed over the union vocabulary.
    """
    if lex.categories != trn.categories:
        raise ValueError("lexicon and training models disagree on categories")
    present = {tuple(t) for t in train_vocab}
    survivors = [t for t in lex.vocab if t in present]
    survivor_set = set(survivors)
    vocab = Vocabulary(list(survivors) + list(trn.vocab.terms))

    def scaled_weights(model: CategoryModel, cat: str, keep: set | None):
        by_term = [
            (model.vocab.term_of(term_id), w)
            for term_id, w in model.vectors[cat].items()
        ]
        if keep is not None:
            by_term = [(t, w) for t, w in by_term if t in keep]
        total = math.fsum(w for _, w in by_term)
        if total <= 0.0:
            return []
        return [(t, w / total) for t, w in by_term]

    vectors = {}
    for cat in lex.categories:
        merged: dict[int, float] = {}
        for source, keep in ((lex, survivor_set), (trn, None)):
            for term, w in scaled_weights(source, cat, keep):
                term_id = vocab.id_of(term)
                merged[term_id] = merged.get(term_id, 0.0) + w
        vectors[cat] = SparseVector(merged)
    metadata = dict(trn.metadata)
    metadata.update(
        {
            "lexicon_term_count": len(survivors),
            "training_term_count": len(trn.vocab),
            "merged_term_count": len(vocab),
        }
    )
    return CategoryModel(
        Approach.INTEGRATED, vocab, vectors, lex.categories, metadata
    )


def classify(
    doc: Document, model: CategoryModel, dft: DfTable
) -> list[ScoredAssignment]:
    """Score one document against every category, best first.

    Ties break on category name so rankings are reproducible.
    """
    tf = match_terms(doc.tokens, model.vocab)
    dv = document_vector(tf, dft)
    scored = [
        ScoredAssignment(doc.doc_id, cat, cosine(dv, vec))
        for cat, vec in model.vectors.items()
    ]
    scored.sort(key=lambda s: (-s.score, s.category))
    return scored


def score_documents(
    docs: Sequence[Document],
    model: CategoryModel,
    dft: DfTable,
    jobs: int = 1,
) -> list[ScoredAssignment]:
    """Score a batch of documents; the flat result preserves document order
    (and with it determinism) regardless of worker count.  Tiny batches
    stay in-process: pool startup costs more than the scoring."""
    if jobs > 1 and len(docs) >= 50:
        worker = partial(classify, model=model, dft=dft)
        chunk = max(1, len(docs) // (jobs * 4))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_doc = list(pool.map(worker, docs, chunksize=chunk))
    else:
        per_doc = [classify(d, model, dft) for d in docs]
    return [sa for scored in per_doc for sa in scored]


def model_to_dict(model: CategoryModel, dft: DfTable | None = None) -> dict:
    """JSON-ready snapshot; includes the df table when given so a cached
    model can score new documents on its own."""
    term_str = {tid: " ".join(t) for tid, t in enumerate(model.vocab.terms)}
    data = {
        "format": MODEL_FORMAT,
        "approach": model.approach.value,
        "categories": list(model.categories),
        "vocab": [term_str[i] for i in range(len(model.vocab))],
        "vectors": {
            cat: {term_str[tid]: w for tid, w in vec.items()}
            for cat, vec in model.vectors.items()
        },
        "metadata": dict(model.metadata),
    }
    if dft is not None:
        data["df"] = {term_str[tid]: n for tid, n in sorted(dft.df.items())}
        data["doc_count"] = dft.doc_count
    return data


def model_from_dict(data: dict) -> tuple[CategoryModel, DfTable | None]:
    fmt = data.get("format")
    if fmt != MODEL_FORMAT:
        raise ValueError(f"unsupported model format {fmt!r}")
    vocab = Vocabulary(tuple(t.split(" ")) for t in data["vocab"])
    vectors = {
        cat: SparseVector(
            {vocab.id_of(tuple(t.split(" "))): w for t, w in weights.items()}
        )
        for cat, weights in data["vectors"].items()
    }
    model = CategoryModel(
        Approach(data["approach"]),
        vocab,
        vectors,
        tuple(data["categories"]),
        dict(data.get("metadata", {})),
    )
    dft = None
    if "df" in data:
        dft = DfTable(
            {vocab.id_of(tuple(t.split(" "))): n for t, n in data["df"].items()},
            data["doc_count"],
        )
    return model, dft


def save_model(
    path: str | Path, model: CategoryModel, dft: DfTable | None = None
) -> None:
    Path(path).write_text(
        json.dumps(model_to_dict(model, dft), indent=2, sort_keys=True),
        encoding="utf-8",
    )


def load_model(path: str | Path) -> tuple[CategoryModel, DfTable | None]:
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
