"""Deterministic synthetic corpora for desk-scale end-to-end runs.

The generator emits a tagged-record corpus plus a matching synonym map.
Each category owns a small content vocabulary; background words are
shared across everything (and get filtered by the training selector's
category-frequency band), numeric and slashed tokens exercise the
preprocessor.  The last category is deliberately undertrained: its name
never labels a document in the training region, but its content words do
occur in unlabeled training text, so expansion-based models can still
represent it while purely statistical ones cannot.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import Collection, Document, Split, serialize_collection

_BACKGROUND = (
    "market", "prices", "report", "trading", "week", "bank", "rate",
    "shares", "percent", "government", "exchange", "announced", "company",
    "quarter", "billion", "daily", "statement", "figures", "output",
    "demand",
)

_TEST_FRACTION = 10  # last 1/10th (at least one doc) is the test region
_UNDERTRAINED_EVERY = 9  # every 9th test doc is labeled with the odd category


@dataclass(frozen=True)
class SyntheticCorpus:
    corpus_text: str
    lexicon_text: str
    categories: tuple[str, ...]
    undertrained_category: str
    train_count: int


def _content_words(category: str) -> tuple[str, ...]:
    return (category, f"{category}w1", f"{category}w2", f"{category}w3")


def generate(seed: int, n_docs: int, n_categories: int = 20) -> SyntheticCorpus:
    """Build a corpus of ``n_docs`` records over ``n_categories`` categories.

    Identical arguments produce byte-identical output.  The returned
    ``train_count`` marks the positional split the corpus was generated
    for (documents past it form the test region).
    """
    if n_docs < 1:
        raise ValueError("n_docs must be >= 1")
    if n_categories < 1:
        raise ValueError("n_categories must be >= 1")
    rng = random.Random(seed)
    categories = tuple(f"cat{i:02d}" for i in range(n_categories))
    undertrained = categories[-1]
    trained = categories[:-1]
    content = {c: _content_words(c) for c in categories}

    test_count = max(1, n_docs // _TEST_FRACTION)
    train_count = n_docs - test_count

    documents = []
    for idx in range(n_docs):
        doc_id = idx + 1
        in_test = idx >= train_count
        if in_test and (idx - train_count) % _UNDERTRAINED_EVERY == 0:
            topics: list[str] = [undertrained]
        elif not trained or rng.random() < 0.45:
            topics = []
        else:
            first = rng.choice(trained)
            topics = [first]
            # occasional second topic; body words still come from the
            # first one, keeping content-word category frequencies small
            if len(trained) > 1 and rng.random() < 0.15:
                topics.append(trained[(trained.index(first) + 1) % len(trained)])

        words: list[str] = []
        if topics:
            source = content[topics[0]]
            for _ in range(rng.randint(6, 12)):
                words.append(rng.choice(source))
        elif not in_test and rng.random() < 0.04:
            # leak undertrained vocabulary into unlabeled training text
            for _ in range(rng.randint(3, 6)):
                words.append(rng.choice(content[undertrained]))
        for _ in range(rng.randint(6, 10)):
            words.append(rng.choice(_BACKGROUND))
        rng.shuffle(words)
        words.insert(
            rng.randrange(len(words) + 1),
            f"{rng.randint(1, 9)},{rng.randint(100, 999)}",
        )
        words.append(f"{rng.randint(1, 28)}/{rng.randint(1, 12)}")

        title = (
            f"{topics[0].upper()} SECTOR UPDATE"
            if topics
            else "GENERAL MARKET NOTES"
        )
        body = "\n".join(
            "    " + " ".join(words[i : i + 8]) for i in range(0, len(words), 8)
        )
        documents.append(
            Document(
                doc_id,
                Split.TEST if in_test else Split.TRAINING,
                title,
                body,
                frozenset(topics),
            )
        )

    collection = Collection(tuple(documents), categories)
    lexicon_lines = ["# synthetic synonym map"]
    lexicon_lines.extend(
        f"{c}: " + " | ".join(content[c]) for c in categories
    )
    return SyntheticCorpus(
        corpus_text=serialize_collection(collection),
        lexicon_text="\n".join(lexicon_lines) + "\n",
        categories=categories,
        undertrained_category=undertrained,
        train_count=train_count,
    )
