"""Word-influence explanations via a local surrogate over word presence.

For one article, distinct indexable words are toggled on/off in random
perturbations; the model's probability for the article's predicted class
is regressed on the presence mask with proximity-kernel weights (ridge).
The largest-magnitude coefficients name the words driving that
prediction. Per-class reports count how often a word appears among the
per-article top lists.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import LABELS, ConvClassifier

KERNEL_WIDTH = 0.25
RIDGE_ALPHA = 1.0


@dataclass(frozen=True)
class ArticleInfluence:
    article_id: str
    predicted: str
    words: list[tuple[str, float]]  # (word, signed weight), strongest first


def explain_article(classifier: ConvClassifier, article_id: str, text: str,
                    n_words: int = 20, n_samples: int = 200,
                    seed: int = 0) -> ArticleInfluence:
    tokenizer = classifier.tokenizer
    ids = tokenizer.token_ids(text)
    distinct: list[str] = []
    seen = set()
    for word in (w for w in _indexable_words(tokenizer, text)):
        if word not in seen:
            seen.add(word)
            distinct.append(word)
    full_probs = classifier.predict_ids(tokenizer.pad(ids)[None, :])[0]
    predicted = LABELS[int(np.argmax(full_probs))]
    if not distinct:
        return ArticleInfluence(article_id, predicted, [])

    rng = np.random.default_rng(seed)
    k = len(distinct)
    masks = rng.integers(0, 2, size=(n_samples, k))
    masks[0, :] = 1  # anchor on the intact article
    word_pos = {w: i for i, w in enumerate(distinct)}
    kept_words = _indexable_words(tokenizer, text)

    batch = np.zeros((n_samples, tokenizer.sequence_length), dtype=np.int32)
    for row, mask in enumerate(masks):
        kept_ids = [tokenizer.word_index[w] for w in kept_words if mask[word_pos[w]]]
        batch[row] = tokenizer.pad(kept_ids)
    probs = classifier.predict_ids(batch)
    y = probs[:, LABELS.index(predicted)]

    # proximity kernel on cosine distance between the mask and the full article
    kept_fraction = masks.sum(axis=1) / k
    distance = 1.0 - np.sqrt(kept_fraction)
    weights = np.exp(-(distance ** 2) / KERNEL_WIDTH ** 2)

    x = masks.astype(float)
    xw = x * weights[:, None]
    gram = x.T @ xw + RIDGE_ALPHA * np.eye(k)
    beta = np.linalg.solve(gram, x.T @ (weights * y))

    ranked = sorted(zip(distinct, beta), key=lambda wb: (-abs(wb[1]), wb[0]))
    top = [(w, float(b)) for w, b in ranked[:n_words]]
    return ArticleInfluence(article_id, predicted, top)


def _indexable_words(tokenizer, text: str) -> list[str]:
    from .tokenizer import words_of

    return [w for w in words_of(text) if tokenizer.keep(w)]


@dataclass
class InfluenceReport:
    articles: list[ArticleInfluence]
    class_tables: dict[str, list[tuple[str, int]]]  # class -> [(word, frequency)] desc


def aggregate_influence(articles: list[ArticleInfluence], top: int = 25) -> InfluenceReport:
    """Per-class frequency of words appearing in per-article top lists."""
    counters: dict[str, Counter] = {label: Counter() for label in LABELS}
    for art in articles:
        counters[art.predicted].update(w for w, _ in art.words)
    tables = {
        label: sorted(counter.items(), key=lambda wc: (-wc[1], wc[0]))[:top]
        for label, counter in counters.items()
    }
    return InfluenceReport(articles=articles, class_tables=tables)


def influence_json(report: InfluenceReport, meta: dict | None = None) -> str:
    doc = {
        "meta": meta or {},
        "articles": [
            {"article_id": a.article_id, "predicted": a.predicted,
             "words": [{"word": w, "weight": b} for w, b in a.words]}
            for a in report.articles
        ],
        "class_tables": {
            label: [{"word": w, "frequency": c} for w, c in rows]
            for label, rows in report.class_tables.items()
        },
    }
    return json.dumps(doc, indent=1) + "\n"


def save_influence_figures(report: InfluenceReport, out_dir: str | Path) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for label, rows in report.class_tables.items():
        if not rows:
            continue
        words = [w for w, _ in rows][::-1]
        counts = [c for _, c in rows][::-1]
        fig, ax = plt.subplots(figsize=(7, max(2.5, 0.28 * len(words))))
        ax.barh(words, counts)
        ax.set_xlabel("articles ranking the word among their top influences")
        ax.set_title(f"top influential words: {label}")
        fig.tight_layout()
        path = out_dir / f"influence_{label}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
