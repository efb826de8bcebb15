"""Per-noun stance from descriptor valences.

A noun's stance in an article is the arithmetic mean of the valence
scores of the adjectives and verbs resolved to it; descriptors missing
from the lexicon are skipped (they neither count nor dilute). Corpus
stance merges article maps weighted by mention count, so it equals the
mean over all mentions regardless of how articles are grouped.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping


class LexiconError(ValueError):
    """Malformed valence lexicon file."""


@dataclass(frozen=True)
class StanceEntry:
    mean_valence: float
    mention_count: int


#: noun key (lowercased lemma) -> stance; insertion order is first appearance.
StanceMap = dict[str, StanceEntry]


@dataclass(frozen=True)
class ValenceLexicon:
    entries: Mapping[str, float]

    def get(self, lemma: str) -> float | None:
        return self.entries.get(lemma.lower())

    def __len__(self) -> int:
        return len(self.entries)


def load_lexicon(path: str | Path) -> ValenceLexicon:
    """Load a lemma<TAB>score lexicon; later duplicate lemmas override earlier ones."""
    entries: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise LexiconError(f"{path}: line {lineno}: expected lemma<TAB>score")
            lemma, raw_score = parts
            try:
                score = float(raw_score)
            except ValueError as exc:
                raise LexiconError(f"{path}: line {lineno}: non-numeric score {raw_score!r}") from exc
            if not (-1.0 <= score <= 1.0):
                raise LexiconError(f"{path}: line {lineno}: score {score} outside [-1, 1]")
            entries[lemma.strip().lower()] = score
    return ValenceLexicon(entries)


def article_stance(descriptors: Mapping[str, list[tuple[str, str]]],
                   lexicon: ValenceLexicon) -> StanceMap:
    """Average lexicon valences per noun; nouns with no scored descriptor are dropped."""
    result: StanceMap = {}
    for noun, refs in descriptors.items():
        scores = [s for s in (lexicon.get(lemma) for lemma, _kind in refs) if s is not None]
        if scores:
            result[noun] = StanceEntry(sum(scores) / len(scores), len(scores))
    return result


def corpus_stance(stance_maps: Iterable[StanceMap]) -> StanceMap:
    """Mention-weighted merge of article stance maps."""
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for stance_map in stance_maps:
        for noun, entry in stance_map.items():
            sums[noun] = sums.get(noun, 0.0) + entry.mean_valence * entry.mention_count
            counts[noun] = counts.get(noun, 0) + entry.mention_count
    return {noun: StanceEntry(sums[noun] / counts[noun], counts[noun]) for noun in sums}


def stance_to_json(stance_map: StanceMap) -> dict[str, dict[str, float | int]]:
    return {noun: {"mean": e.mean_valence, "count": e.mention_count} for noun, e in stance_map.items()}


def stance_from_json(obj: Mapping[str, Mapping[str, float | int]]) -> StanceMap:
    return {noun: StanceEntry(float(v["mean"]), int(v["count"])) for noun, v in obj.items()}
