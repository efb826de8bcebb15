"""Labeled article corpora: JSONL ingest, temporal balancing, stratified splitting, stats.

Articles are one-per-line JSON objects with fields id, outlet, leaning,
published_at (ISO-8601 date), title and text. Leanings other than
left/center/right load as UNLABELED; unlabeled corpora are fine for the
apply stage but are rejected by balance and split.
"""

from __future__ import annotations

import datetime as dt
import random
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .conllu import DepSentence
from .util import read_jsonl


class CorpusError(ValueError):
    """Bad corpus file or an operation precondition violation."""


class Leaning(Enum):
    LEFT = "left"
    CENTER = "center"
    RIGHT = "right"
    UNLABELED = "unlabeled"

    @classmethod
    def parse(cls, value: str) -> "Leaning":
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            return cls.UNLABELED


#: Fixed label order used for reports and deterministic tie-breaking.
LABELED = (Leaning.LEFT, Leaning.CENTER, Leaning.RIGHT)


class QuarterKey(NamedTuple):
    year: int
    quarter: int

    @classmethod
    def from_date(cls, date: dt.date) -> "QuarterKey":
        return cls(date.year, (date.month - 1) // 3 + 1)

    def label(self) -> str:
        """Column-header style label, e.g. 2021 Q2 -> '21Q2'."""
        return f"{self.year % 100:02d}Q{self.quarter}"


@dataclass(frozen=True)
class Article:
    id: str
    outlet: str
    leaning: Leaning
    published_at: dt.date
    title: str
    text: str
    sentences: tuple[DepSentence, ...] = field(default=(), compare=False)

    @property
    def quarter(self) -> QuarterKey:
        return QuarterKey.from_date(self.published_at)

    def with_sentences(self, sentences: Iterable[DepSentence]) -> "Article":
        return replace(self, sentences=tuple(sentences))


@dataclass
class CorpusStats:
    """Article counts per (leaning, outlet, quarter) cell."""

    counts: dict[tuple[str, str, QuarterKey], int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def by_leaning(self) -> dict[str, int]:
        agg: Counter = Counter()
        for (leaning, _outlet, _q), n in self.counts.items():
            agg[leaning] += n
        return dict(agg)

    def rows(self) -> list[tuple[str, str, str, int]]:
        """Sorted (leaning, outlet, quarter-label, count) rows for the TSV report."""
        order = {l.value: i for i, l in enumerate(list(LABELED) + [Leaning.UNLABELED])}
        keys = sorted(self.counts, key=lambda k: (order.get(k[0], 99), k[1], k[2]))
        return [(leaning, outlet, q.label(), self.counts[(leaning, outlet, q)]) for (leaning, outlet, q) in keys]


REQUIRED_FIELDS = ("id", "outlet", "leaning", "published_at", "title", "text")


def load_corpus(path: str | Path, window: tuple[dt.date, dt.date] | None = None) -> list[Article]:
    """Load an article corpus from JSONL.

    With `window` set, articles dated outside [start, end] are dropped
    (the corpus is restricted to the configured study period).
    """
    articles: list[Article] = []
    seen_ids: set[str] = set()
    try:
        records = list(read_jsonl(path))
    except ValueError as exc:
        raise CorpusError(str(exc)) from exc
    for lineno, obj in records:
        missing = [f for f in REQUIRED_FIELDS if f not in obj]
        if missing:
            raise CorpusError(f"{path}: line {lineno}: missing fields {missing}")
        try:
            published = dt.date.fromisoformat(str(obj["published_at"]))
        except ValueError as exc:
            raise CorpusError(f"{path}: line {lineno}: bad published_at {obj['published_at']!r}") from exc
        art_id = str(obj["id"])
        if art_id in seen_ids:
            raise CorpusError(f"{path}: line {lineno}: duplicate article id {art_id!r}")
        seen_ids.add(art_id)
        if window is not None and not (window[0] <= published <= window[1]):
            continue
        articles.append(Article(
            id=art_id,
            outlet=str(obj["outlet"]),
            leaning=Leaning.parse(obj["leaning"]),
            published_at=published,
            title=str(obj["title"]),
            text=str(obj["text"]),
        ))
    return articles


def save_corpus(articles: Iterable[Article], path: str | Path, meta: dict | None = None) -> None:
    from .util import write_jsonl

    write_jsonl(path, (
        {
            "id": a.id,
            "outlet": a.outlet,
            "leaning": a.leaning.value,
            "published_at": a.published_at.isoformat(),
            "title": a.title,
            "text": a.text,
        }
        for a in articles
    ), meta=meta)


def attach_parses(articles: list[Article], parses: Mapping[str, list[DepSentence]]) -> list[Article]:
    """Attach pre-parsed sentences to articles by article id."""
    return [a.with_sentences(parses.get(a.id, ())) for a in articles]


def _require_labeled(corpus: list[Article], op: str) -> None:
    bad = [a.id for a in corpus if a.leaning is Leaning.UNLABELED]
    if bad:
        raise CorpusError(f"{op} requires labeled articles; unlabeled ids: {bad[:5]}" +
                          (f" (+{len(bad) - 5} more)" if len(bad) > 5 else ""))


def balance(corpus: list[Article], cap: int = 10000, seed: int = 0) -> list[Article]:
    """Truncate each leaning class to at most `cap` articles.

    Removals drain the most over-represented (outlet, quarter) cell first,
    which flattens the temporal distribution; ties between equally full
    cells, and the victim within a cell, are chosen by the seeded RNG.
    Output preserves the input article order.
    """
    if cap < 1:
        raise CorpusError("cap must be >= 1")
    _require_labeled(corpus, "balance")
    by_class: dict[Leaning, list[Article]] = {l: [] for l in LABELED}
    for art in corpus:
        by_class[art.leaning].append(art)
    for leaning in LABELED:
        if not by_class[leaning]:
            raise CorpusError(f"cannot balance: class {leaning.value!r} has no articles")
    rng = random.Random(seed)
    removed: set[str] = set()
    for leaning in LABELED:
        members = by_class[leaning]
        excess = len(members) - cap
        if excess <= 0:
            continue
        cells: dict[tuple[str, QuarterKey], list[Article]] = {}
        for art in members:
            cells.setdefault((art.outlet, art.quarter), []).append(art)
        for _ in range(excess):
            fullest = max(len(v) for v in cells.values())
            tied = sorted(key for key, v in cells.items() if len(v) == fullest)
            cell = tied[0] if len(tied) == 1 else rng.choice(tied)
            victims = cells[cell]
            victim = victims.pop(rng.randrange(len(victims)))
            removed.add(victim.id)
            if not victims:
                del cells[cell]
    return [a for a in corpus if a.id not in removed]


def split(corpus: list[Article], train_fraction: float = 0.8, seed: int = 0) -> tuple[list[Article], list[Article]]:
    """Stratified train/test split over (leaning, quarter) cells.

    Each cell contributes round(train_fraction * cell size) articles to
    train. Outputs keep the input order and are disjoint with union equal
    to the input.
    """
    if not (0.0 < train_fraction < 1.0):
        raise CorpusError(f"train_fraction must be in (0, 1), got {train_fraction}")
    _require_labeled(corpus, "split")
    cells: dict[tuple[str, QuarterKey], list[Article]] = {}
    for art in corpus:
        cells.setdefault((art.leaning.value, art.quarter), []).append(art)
    rng = random.Random(seed)
    train_ids: set[str] = set()
    for key in sorted(cells):
        members = list(cells[key])
        rng.shuffle(members)
        n_train = round(train_fraction * len(members))
        train_ids.update(a.id for a in members[:n_train])
    train = [a for a in corpus if a.id in train_ids]
    test = [a for a in corpus if a.id not in train_ids]
    return train, test


def stats(corpus: list[Article]) -> CorpusStats:
    counts: Counter = Counter()
    for art in corpus:
        counts[(art.leaning.value, art.outlet, art.quarter)] += 1
    return CorpusStats(dict(counts))
