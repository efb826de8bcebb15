"""The shared noun index and per-leaning stance vectors (the trained model).

All nouns seen across the three class corpora share one index; each class
gets an N-length vector holding its stance per noun, 0.0 where the class
never scored that noun. Index order is first appearance iterating classes
Left, Right, Center (insertion order within each), which makes rebuilt
models byte-identical for identical inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from .corpus import Leaning
from .stance import StanceMap
from .util import atomic_write_text

FORMAT_VERSION = 1

#: Class iteration order when assigning noun indices.
INDEX_CLASS_ORDER = (Leaning.LEFT, Leaning.RIGHT, Leaning.CENTER)


class ModelFormatError(ValueError):
    """Unreadable or internally inconsistent model file."""


@dataclass(frozen=True)
class NounIndex:
    mapping: dict[str, int]

    @property
    def size(self) -> int:
        return len(self.mapping)

    @property
    def nouns(self) -> list[str]:
        ordered = [""] * len(self.mapping)
        for noun, idx in self.mapping.items():
            ordered[idx] = noun
        return ordered


@dataclass(frozen=True)
class LeaningSpace:
    index: NounIndex
    vectors: dict[Leaning, np.ndarray]
    config_digest: str | None = None


def _apply_min_mentions(stances: Mapping[Leaning, StanceMap], min_mentions: int) -> dict[Leaning, StanceMap]:
    if min_mentions <= 1:
        return dict(stances)
    return {
        leaning: {n: e for n, e in stance_map.items() if e.mention_count >= min_mentions}
        for leaning, stance_map in stances.items()
    }


def build_index(stances: Mapping[Leaning, StanceMap], min_mentions: int = 1) -> NounIndex:
    filtered = _apply_min_mentions(stances, min_mentions)
    mapping: dict[str, int] = {}
    for leaning in INDEX_CLASS_ORDER:
        for noun in filtered.get(leaning, {}):
            if noun not in mapping:
                mapping[noun] = len(mapping)
    if not mapping:
        raise ModelFormatError("cannot build a noun index: every class stance map is empty")
    return NounIndex(mapping)


def build_space(stances: Mapping[Leaning, StanceMap], min_mentions: int = 1,
                config_digest: str | None = None) -> LeaningSpace:
    filtered = _apply_min_mentions(stances, min_mentions)
    index = build_index(filtered)
    vectors: dict[Leaning, np.ndarray] = {}
    for leaning in INDEX_CLASS_ORDER:
        vec = np.zeros(index.size, dtype=float)
        for noun, entry in filtered.get(leaning, {}).items():
            vec[index.mapping[noun]] = entry.mean_valence
        vectors[leaning] = vec
    return LeaningSpace(index=index, vectors=vectors, config_digest=config_digest)


def project(article_stance: StanceMap, index: NounIndex) -> np.ndarray:
    """Map an article's stance onto the shared index; unindexed nouns are dropped."""
    vec = np.zeros(index.size, dtype=float)
    for noun, entry in article_stance.items():
        idx = index.mapping.get(noun)
        if idx is not None:
            vec[idx] = entry.mean_valence
    return vec


def save_space(space: LeaningSpace, path: str | Path) -> None:
    doc = {
        "version": FORMAT_VERSION,
        "config_digest": space.config_digest,
        "nouns": space.index.nouns,
        "vectors": {leaning.value: space.vectors[leaning].tolist() for leaning in INDEX_CLASS_ORDER},
    }
    atomic_write_text(path, json.dumps(doc, indent=1) + "\n")


def load_space(path: str | Path) -> LeaningSpace:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"{path}: cannot read model file: {exc}") from exc
    if doc.get("version") != FORMAT_VERSION:
        raise ModelFormatError(f"{path}: unsupported model version {doc.get('version')!r} "
                               f"(expected {FORMAT_VERSION})")
    nouns = doc.get("nouns")
    vectors = doc.get("vectors")
    if not isinstance(nouns, list) or not isinstance(vectors, dict):
        raise ModelFormatError(f"{path}: model file missing nouns/vectors")
    index = NounIndex({noun: i for i, noun in enumerate(nouns)})
    if len(index.mapping) != len(nouns):
        raise ModelFormatError(f"{path}: duplicate nouns in index")
    out: dict[Leaning, np.ndarray] = {}
    for leaning in INDEX_CLASS_ORDER:
        values = vectors.get(leaning.value)
        if values is None:
            raise ModelFormatError(f"{path}: missing vector for class {leaning.value!r}")
        vec = np.asarray(values, dtype=float)
        if vec.shape != (len(nouns),):
            raise ModelFormatError(
                f"{path}: vector for {leaning.value!r} has length {vec.shape[0]}, expected {len(nouns)}")
        out[leaning] = vec
    return LeaningSpace(index=index, vectors=out, config_digest=doc.get("config_digest"))
