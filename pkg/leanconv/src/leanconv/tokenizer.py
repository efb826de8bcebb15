"""Word indexing for the convolutional model.

Words are lowercased, stop words removed, then ranked by descending
training-corpus frequency (ties by first occurrence). Index 0 is reserved
for padding; the vocabulary is truncated so indices stay below the
embedding size. Unknown words at inference are dropped.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from pathlib import Path

import numpy as np

VOCAB_LIMIT = 100_000
#: two kernel-7 convolutions around a width-5 pool need at least this many tokens
MIN_SEQUENCE_LENGTH = 41

WORD_RE = re.compile(r"[a-z0-9']+")

_STOPWORDS_PATH = Path(__file__).parent / "data" / "stopwords.txt"


def load_stopwords(path: str | Path = _STOPWORDS_PATH) -> frozenset[str]:
    words = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line.lower())
    return frozenset(words)


def words_of(text: str) -> list[str]:
    return WORD_RE.findall(text.lower())


class Tokenizer:
    def __init__(self, word_index: dict[str, int], sequence_length: int,
                 stop_words: frozenset[str]):
        self.word_index = word_index
        self.sequence_length = sequence_length
        self.stop_words = stop_words

    @classmethod
    def fit(cls, texts: list[str], vocab_limit: int = VOCAB_LIMIT,
            stop_words: frozenset[str] | None = None) -> "Tokenizer":
        if not texts:
            raise ValueError("cannot fit a tokenizer on an empty training set")
        stop_words = load_stopwords() if stop_words is None else stop_words
        counts: Counter = Counter()
        lengths = []
        for text in texts:
            kept = [w for w in words_of(text) if w not in stop_words]
            lengths.append(len(kept))
            counts.update(kept)
        if not counts:
            raise ValueError("training set contains no indexable words")
        # most_common sorts by count; the underlying sort is stable, so ties
        # keep first-occurrence order
        ranked = [w for w, _ in counts.most_common(vocab_limit - 1)]
        word_index = {w: i for i, w in enumerate(ranked, start=1)}
        p95 = int(math.ceil(float(np.percentile(lengths, 95))))
        return cls(word_index, max(MIN_SEQUENCE_LENGTH, p95), stop_words)

    @property
    def vocab_size(self) -> int:
        return len(self.word_index)

    def keep(self, word: str) -> bool:
        return word in self.word_index

    def token_ids(self, text: str) -> list[int]:
        """Unpadded ids; stop words and out-of-vocabulary words are dropped."""
        return [self.word_index[w] for w in words_of(text) if w in self.word_index]

    def encode(self, text: str) -> np.ndarray:
        return self.pad(self.token_ids(text))

    def pad(self, ids: list[int]) -> np.ndarray:
        out = np.zeros(self.sequence_length, dtype=np.int32)
        clipped = ids[: self.sequence_length]
        out[: len(clipped)] = clipped
        return out

    def encode_batch(self, texts: list[str]) -> np.ndarray:
        return np.stack([self.encode(t) for t in texts])

    def to_json(self) -> str:
        return json.dumps({
            "sequence_length": self.sequence_length,
            "word_index": self.word_index,
            "stop_words": sorted(self.stop_words),
        })

    @classmethod
    def from_json(cls, text: str) -> "Tokenizer":
        doc = json.loads(text)
        return cls({w: int(i) for w, i in doc["word_index"].items()},
                   int(doc["sequence_length"]), frozenset(doc["stop_words"]))
