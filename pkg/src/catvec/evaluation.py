"""Recall/precision evaluation with macro and micro averaging.

Assignments come from either a similarity threshold swept over eleven
levels (0.0 .. 1.0) or a top-k-per-document rule.  Each level yields one
recall/precision point per averaging mode, and the report carries the
plain means over all levels as single comparison figures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .categorizers import ScoredAssignment
from .corpus import Collection

# doc_id -> set of correct categories
GoldStandard = dict[int, frozenset[str]]

Assignment = tuple[int, str]

DEFAULT_THRESHOLDS = tuple(i / 10 for i in range(11))
DEFAULT_K_MAX = 10


class Strategy(Enum):
    THRESHOLD = "threshold"
    K_PER_DOC = "k-per-doc"


@dataclass(frozen=True)
class RPPoint:
    level: float
    macro_recall: float
    macro_precision: float
    micro_recall: float
    micro_precision: float


@dataclass(frozen=True)
class RPAverages:
    macro_recall: float
    macro_precision: float
    micro_recall: float
    micro_precision: float


@dataclass(frozen=True)
class EvalReport:
    approach: str
    strategy: Strategy
    points: tuple[RPPoint, ...]
    averages: RPAverages


def gold_from_collection(collection: Collection) -> GoldStandard:
    return {d.doc_id: frozenset(d.topics) for d in collection.documents}


def assign_by_threshold(
    scores: Iterable[ScoredAssignment], threshold: float
) -> set[Assignment]:
    """Pairs scoring at or above the threshold.  Zero scores are never
    assigned, even at threshold 0, so the bottom sweep level stays
    meaningful."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold {threshold} outside [0, 1]")
    return {
        (s.doc_id, s.category)
        for s in scores
        if s.score > 0.0 and s.score >= threshold
    }


def assign_k_per_doc(scores: Iterable[ScoredAssignment], k: int) -> set[Assignment]:
    """Top-k categories per document, zero scores excluded, ties broken by
    category name."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    by_doc: dict[int, list[ScoredAssignment]] = {}
    for s in scores:
        by_doc.setdefault(s.doc_id, []).append(s)
    assigned: set[Assignment] = set()
    for doc_id, doc_scores in by_doc.items():
        doc_scores.sort(key=lambda s: (-s.score, s.category))
        taken = 0
        for s in doc_scores:
            if taken >= k or s.score <= 0.0:
                break
            assigned.add((doc_id, s.category))
            taken += 1
    return assigned


def rp_counts(
    assigned: set[Assignment],
    gold: Mapping[int, frozenset[str]],
    categories: Sequence[str],
) -> dict[str, tuple[int, int, int]]:
    """Per-category (correct, to-be-assigned, assigned) counts."""
    per: dict[str, list[int]] = {c: [0, 0, 0] for c in categories}
    for _, cats in gold.items():
        for c in cats:
            per[c][1] += 1
    for doc_id, c in assigned:
        per[c][2] += 1
        if c in gold.get(doc_id, ()):
            per[c][0] += 1
    return {c: (v[0], v[1], v[2]) for c, v in per.items()}


def _mean_or_zero(values: list[float]) -> float:
    return math.fsum(values) / len(values) if values else 0.0


def macro_rp(
    assigned: set[Assignment],
    gold: Mapping[int, frozenset[str]],
    categories: Sequence[str],
    orientation: str = "category",
) -> tuple[float, float]:
    """Macro-averaged (recall, precision).

    Category orientation averages per-category figures; document
    orientation (the alternative reading) averages per-document ones.
    Items with a zero denominator are skipped rather than scored 0 or 1;
    if everything is skipped the average is 0.
    """
    if orientation == "category":
        counts = rp_counts(assigned, gold, categories)
        recalls = [c / g for c, g, _ in counts.values() if g > 0]
        precisions = [c / a for c, _, a in counts.values() if a > 0]
    elif orientation == "document":
        per_doc: dict[int, int] = {}
        assigned_per_doc: dict[int, int] = {}
        for doc_id, cat in assigned:
            assigned_per_doc[doc_id] = assigned_per_doc.get(doc_id, 0) + 1
            if cat in gold.get(doc_id, ()):
                per_doc[doc_id] = per_doc.get(doc_id, 0) + 1
        recalls = [
            per_doc.get(doc_id, 0) / len(cats)
            for doc_id, cats in gold.items()
            if cats
        ]
        precisions = [
            per_doc.get(doc_id, 0) / n
            for doc_id, n in assigned_per_doc.items()
            if n > 0
        ]
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    return _mean_or_zero(recalls), _mean_or_zero(precisions)


def micro_rp(
    assigned: set[Assignment], gold: Mapping[int, frozenset[str]]
) -> tuple[float, float]:
    """Micro-averaged (recall, precision): counts pooled before dividing,
    0/0 defined as 0."""
    n_gold = sum(len(cats) for cats in gold.values())
    n_assigned = len(assigned)
    correct = sum(1 for doc_id, cat in assigned if cat in gold.get(doc_id, ()))
    recall = correct / n_gold if n_gold else 0.0
    precision = correct / n_assigned if n_assigned else 0.0
    return recall, precision


def sweep(
    scores: Sequence[ScoredAssignment],
    gold: Mapping[int, frozenset[str]],
    categories: Sequence[str],
    strategy: Strategy = Strategy.THRESHOLD,
    thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
    k_max: int = DEFAULT_K_MAX,
    approach: str = "",
) -> EvalReport:
    """Evaluate one score matrix over every assignment level."""
    if strategy is Strategy.THRESHOLD:
        levels: Sequence[float] = thresholds
    else:
        if k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {k_max}")
        levels = range(1, k_max + 1)
    points = []
    for level in levels:
        if strategy is Strategy.THRESHOLD:
            assigned = assign_by_threshold(scores, level)
        else:
            assigned = assign_k_per_doc(scores, level)
        mac_r, mac_p = macro_rp(assigned, gold, categories)
        mic_r, mic_p = micro_rp(assigned, gold)
        points.append(RPPoint(level, mac_r, mac_p, mic_r, mic_p))
    averages = RPAverages(
        _mean_or_zero([p.macro_recall for p in points]),
        _mean_or_zero([p.macro_precision for p in points]),
        _mean_or_zero([p.micro_recall for p in points]),
        _mean_or_zero([p.micro_precision for p in points]),
    )
    return EvalReport(approach, strategy, tuple(points), averages)


def render_report(reports: Sequence[EvalReport]) -> str:
    """Comparison table, one row of six-decimal averages per approach."""
    if not reports:
        raise ValueError("no reports to render")
    headers = ("Approach", "Macro-R", "Macro-P", "Micro-R", "Micro-P")
    name_w = max(len(headers[0]), max(len(r.approach) for r in reports))
    lines = [
        "  ".join(
            [headers[0].ljust(name_w)] + [h.rjust(8) for h in headers[1:]]
        ).rstrip()
    ]
    for r in reports:
        a = r.averages
        lines.append(
            "  ".join(
                [r.approach.ljust(name_w)]
                + [
                    f"{v:.6f}".rjust(8)
                    for v in (
                        a.macro_recall,
                        a.macro_precision,
                        a.micro_recall,
                        a.micro_precision,
                    )
                ]
            ).rstrip()
        )
    return "\n".join(lines) + "\n"


def reports_to_dict(reports: Sequence[EvalReport]) -> dict:
    return {
        "format": "catvec-report/1",
        "reports": [
            {
                "approach": r.approach,
                "strategy": r.strategy.value,
                "points": [
                    {
                        "level": p.level,
                        "macro_recall": p.macro_recall,
                        "macro_precision": p.macro_precision,
                        "micro_recall": p.micro_recall,
                        "micro_precision": p.micro_precision,
                    }
                    for p in r.points
                ],
                "averages": {
                    "macro_recall": r.averages.macro_recall,
                    "macro_precision": r.averages.macro_precision,
                    "micro_recall": r.averages.micro_recall,
                    "micro_precision": r.averages.micro_precision,
                },
            }
            for r in reports
        ],
    }


def scores_to_csv(scores: Sequence[ScoredAssignment]) -> str:
    """Score matrix interchange: one (doc_id, category, score) row each."""
    lines = ["doc_id,category,score"]
    lines.extend(f"{s.doc_id},{s.category},{s.score:.12g}" for s in scores)
    return "\n".join(lines) + "\n"
