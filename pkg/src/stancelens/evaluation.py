"""Scoring predictions against gold labels and quarterly application tables."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .classifier import UNCLASSIFIABLE, PredictionRow
from .corpus import LABELED, Article, Leaning, QuarterKey


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class ClassScore:
    precision: float
    recall: float
    f1: float
    support: int            # gold articles of this class that got a real prediction
    unclassifiable: int     # gold articles of this class with no usable vector


@dataclass(frozen=True)
class ClassMetrics:
    per_class: dict[Leaning, ClassScore]
    strict: bool

    @property
    def total_unclassifiable(self) -> int:
        return sum(s.unclassifiable for s in self.per_class.values())


def score(predictions: Sequence[PredictionRow], gold: Mapping[str, Leaning],
          strict: bool = False) -> ClassMetrics:
    """One-vs-rest precision/recall/F1 per class.

    Unclassifiable predictions are their own outcome: they are never a
    true/false positive for any class. By default they still count in
    recall denominators (a miss); with strict=True they are excluded
    from denominators entirely.
    """
    pred_by_id = {p.article_id: p.predicted for p in predictions}
    missing = sorted(set(gold) - set(pred_by_id))
    if missing:
        raise EvaluationError(f"no prediction for gold article ids: {missing}")
    tp: Counter = Counter()
    fp: Counter = Counter()
    gold_n: Counter = Counter()
    unclassifiable: Counter = Counter()
    for art_id, gold_leaning in gold.items():
        predicted = pred_by_id[art_id]
        gold_n[gold_leaning] += 1
        if predicted == UNCLASSIFIABLE:
            unclassifiable[gold_leaning] += 1
            continue
        pred_leaning = Leaning(predicted)
        if pred_leaning is gold_leaning:
            tp[gold_leaning] += 1
        else:
            fp[pred_leaning] += 1
    per_class: dict[Leaning, ClassScore] = {}
    for leaning in LABELED:
        support = gold_n[leaning] - unclassifiable[leaning]
        n_pred = tp[leaning] + fp[leaning]
        recall_denom = support if strict else gold_n[leaning]
        precision = tp[leaning] / n_pred if n_pred else 0.0
        recall = tp[leaning] / recall_denom if recall_denom else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[leaning] = ClassScore(precision, recall, f1, support, unclassifiable[leaning])
    return ClassMetrics(per_class=per_class, strict=strict)


@dataclass(frozen=True)
class QuarterRow:
    fractions: dict[Leaning, float]  # over classified articles in the quarter
    n: int                           # all articles in the quarter
    unclassifiable_fraction: float


@dataclass(frozen=True)
class QuarterDistribution:
    rows: dict[QuarterKey, QuarterRow]


def temporal_apply(predictions: Sequence[PredictionRow],
                   articles: Sequence[Article]) -> QuarterDistribution:
    """Per-quarter distribution of predicted leanings.

    Fractions are taken over the quarter's classified articles; the
    unclassifiable share is reported separately so each row sums to 1.
    """
    dates = {a.id: a.quarter for a in articles}
    missing = sorted({p.article_id for p in predictions} - set(dates))
    if missing:
        raise EvaluationError(f"predictions reference unknown article ids: {missing[:5]}")
    counts: dict[QuarterKey, Counter] = {}
    for pred in predictions:
        quarter = dates[pred.article_id]
        counts.setdefault(quarter, Counter())[pred.predicted] += 1
    rows: dict[QuarterKey, QuarterRow] = {}
    for quarter in sorted(counts):
        c = counts[quarter]
        n = sum(c.values())
        classified = n - c[UNCLASSIFIABLE]
        fractions = {
            leaning: (c[leaning.value] / classified if classified else 0.0)
            for leaning in LABELED
        }
        rows[quarter] = QuarterRow(
            fractions=fractions,
            n=n,
            unclassifiable_fraction=c[UNCLASSIFIABLE] / n if n else 0.0,
        )
    return QuarterDistribution(rows)
