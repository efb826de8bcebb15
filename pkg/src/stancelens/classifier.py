"""Cosine-distance classification with per-noun contribution explanations."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import LABELED, Article, Leaning
from .refres import resolve_article
from .space import LeaningSpace, project
from .stance import ValenceLexicon, article_stance
from .util import read_jsonl, write_jsonl

#: Distances closer than this are treated as tied and resolved Left, Center, Right.
TIE_TOLERANCE = 1e-9

UNCLASSIFIABLE = "unclassifiable"


class UnclassifiableError(ValueError):
    """The article shares no scored noun with the training corpus (zero vector)."""


@dataclass(frozen=True)
class Contribution:
    noun: str
    article_stance: float
    class_stances: dict[Leaning, float]

    def product(self, leaning: Leaning) -> float:
        return self.article_stance * self.class_stances[leaning]


@dataclass(frozen=True)
class ClassificationResult:
    article_id: str
    distances: dict[Leaning, float]
    predicted: Leaning
    tie_flag: bool
    contributions: tuple[Contribution, ...]


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    """1 - cos(a, b), in [0, 2]. Zero vectors are unclassifiable by definition."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"vector lengths differ: {a.shape} vs {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise UnclassifiableError("cosine distance undefined for a zero vector")
    return 1.0 - float(np.dot(a, b)) / (norm_a * norm_b)


def classify_vector(article_id: str, vec: np.ndarray, space: LeaningSpace,
                    stance_map=None) -> ClassificationResult:
    if not np.any(vec):
        raise UnclassifiableError(
            f"article {article_id}: no scored nouns shared with the training corpus")
    distances = {leaning: cosine_distance(vec, space.vectors[leaning]) for leaning in LABELED}
    best = min(distances.values())
    candidates = [l for l in LABELED if distances[l] - best <= TIE_TOLERANCE]
    contributions = []
    if stance_map:
        for noun, entry in stance_map.items():
            idx = space.index.mapping.get(noun)
            if idx is None:
                continue
            contributions.append(Contribution(
                noun=noun,
                article_stance=entry.mean_valence,
                class_stances={l: float(space.vectors[l][idx]) for l in LABELED},
            ))
    return ClassificationResult(
        article_id=article_id,
        distances=distances,
        predicted=candidates[0],
        tie_flag=len(candidates) > 1,
        contributions=tuple(contributions),
    )


def classify(article: Article, space: LeaningSpace, lexicon: ValenceLexicon) -> ClassificationResult:
    """Full per-article pipeline: resolve references, score stance, project, compare.

    The article must be parsed and coref-substituted. Raises
    UnclassifiableError when the projected vector is zero.
    """
    descriptors = resolve_article(article)
    stance_map = article_stance(descriptors, lexicon)
    vec = project(stance_map, space.index)
    return classify_vector(article.id, vec, space, stance_map)


def _classify_one(args) -> "PredictionRow":
    article, space, lexicon = args
    try:
        return prediction_row(classify(article, space, lexicon))
    except UnclassifiableError:
        return PredictionRow(article_id=article.id, model="rule",
                             predicted=UNCLASSIFIABLE, distances=None, tie_flag=False)


def classify_many(articles: Sequence[Article], space: LeaningSpace, lexicon: ValenceLexicon,
                  jobs: int = 1) -> list["PredictionRow"]:
    """Classify a batch, mapping zero-vector articles to the unclassifiable outcome."""
    work = [(a, space, lexicon) for a in articles]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_classify_one, work, chunksize=max(1, len(work) // (jobs * 4) or 1)))
    return [_classify_one(w) for w in work]


def explain(result: ClassificationResult, top_k: int) -> list[dict]:
    """Top contributing nouns for the predicted class, by |article stance x class stance|."""
    pred = result.predicted
    rows = []
    for c in result.contributions:
        product = c.product(pred)
        if c.article_stance == 0.0:
            continue
        rows.append({
            "noun": c.noun,
            "article_stance": c.article_stance,
            "class_stance": c.class_stances[pred],
            "product": product,
            "pull": "toward" if product > 0 else ("away" if product < 0 else "neutral"),
        })
    rows.sort(key=lambda r: (-abs(r["product"]), r["noun"]))
    return rows[:top_k]


@dataclass(frozen=True)
class PredictionRow:
    """One line of the shared prediction JSONL (rule-based and conv models alike)."""

    article_id: str
    model: str
    predicted: str  # left | center | right | unclassifiable
    distances: dict[str, float] | None
    tie_flag: bool


def prediction_row(result: ClassificationResult) -> PredictionRow:
    return PredictionRow(
        article_id=result.article_id,
        model="rule",
        predicted=result.predicted.value,
        distances={l.value: result.distances[l] for l in LABELED},
        tie_flag=result.tie_flag,
    )


def write_predictions(rows: Iterable[PredictionRow], path: str | Path,
                      meta: dict | None = None) -> None:
    write_jsonl(path, (
        {
            "article_id": r.article_id,
            "model": r.model,
            "predicted": r.predicted,
            "distances": r.distances,
            "tie_flag": r.tie_flag,
        }
        for r in rows
    ), meta=meta)


def read_predictions(path: str | Path) -> list[PredictionRow]:
    rows = []
    valid = {l.value for l in LABELED} | {UNCLASSIFIABLE}
    for lineno, obj in read_jsonl(path):
        predicted = str(obj.get("predicted", ""))
        if predicted not in valid:
            raise ValueError(f"{path}: line {lineno}: bad predicted label {predicted!r}")
        rows.append(PredictionRow(
            article_id=str(obj["article_id"]),
            model=str(obj.get("model", "rule")),
            predicted=predicted,
            distances=obj.get("distances"),
            tie_flag=bool(obj.get("tie_flag", False)),
        ))
    return rows
