import random

import pytest

from catvec import Collection, Document, Split


def make_record(doc_id, topics, title="", body_lines=(), split="TRAINING-SET",
                date_line=None):
    lines = [f" PATTERN-ID {doc_id} {split}"]
    if date_line:
        lines.append(date_line)
    lines.append(f"TOPICS:     {' '.join(topics)}  END-TOPICS".rstrip())
    for name in ("PLACES", "PEOPLE", "ORGS", "EXCHANGES", "COMPANIES"):
        lines.append(f"{name}:  END-{name}")
    if title:
        lines.append("    " + title)
    lines.extend("    " + b for b in body_lines)
    lines.append(" REUTER")
    return "\n".join(lines) + "\n"


def make_doc(doc_id, text, topics=(), split=Split.TRAINING, title=""):
    return Document(doc_id, split, title, text, frozenset(topics))


@pytest.fixture
def payments_record():
    """A record in the tagged newswire shape, topics bop + trade."""
    return make_record(
        6505,
        ["bop", "trade"],
        title="PAYMENTS POSITION WORSENS IN MAY",
        body_lines=[
            "Italy's overall balance of payments moved into",
            "deficit, showing a 3,211 billion lire gap for May",
            "against a surplus of 2,040 billion in April.",
        ],
        date_line="18-JUN-1987 11:44:27.20",
    )


@pytest.fixture
def five_doc_collection():
    docs = tuple(
        make_doc(i, f"word{i} shared text", topics=("alpha",) if i % 2 else ())
        for i in range(1, 6)
    )
    return Collection(docs, ("alpha",))


def random_eval_fixture(rng: random.Random):
    """Random gold/assigned pair sets over up to 10 docs x 5 categories."""
    categories = [f"c{i}" for i in range(rng.randint(1, 5))]
    doc_ids = list(range(1, rng.randint(1, 10) + 1))
    gold = {
        d: frozenset(c for c in categories if rng.random() < 0.4) for d in doc_ids
    }
    assigned = {
        (d, c) for d in doc_ids for c in categories if rng.random() < 0.4
    }
    return assigned, gold, categories


def random_training_fixture(rng: random.Random, max_docs=10, max_cats=5):
    """Random labeled token documents for selection/weighting oracles."""
    categories = tuple(f"c{i}" for i in range(rng.randint(1, max_cats)))
    words = [f"w{i}" for i in range(rng.randint(3, 10))]
    docs = []
    for doc_id in range(1, rng.randint(1, max_docs) + 1):
        tokens = [rng.choice(words) for _ in range(rng.randint(0, 12))]
        topics = frozenset(c for c in categories if rng.random() < 0.35)
        docs.append(
            Document(doc_id, Split.TRAINING, "", " ".join(tokens), topics)
        )
    return Collection(tuple(docs), categories)
