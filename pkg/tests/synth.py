"""Synthetic planted-stance corpora for end-to-end and property tests.

Each leaning gets marker entities with fixed descriptor polarity, so the
true class of a generated article is known by construction:

  left   praises velora, slams brandor, mild + on tessia
  right  slams velora, praises brandor, mild - on tessia
  center praises unita, near-neutral elsewhere

Filler nouns with tiny +/-0.1 descriptors add harmless extra dimensions.
"""

from __future__ import annotations

import datetime as dt
import random

from stancelens.conllu import DepSentence, DepToken, write_conllu
from stancelens.corpus import Article, Leaning, save_corpus

POSITIVE = ["wonderful", "brilliant", "excellent", "admirable"]
NEGATIVE = ["terrible", "corrupt", "awful", "dreadful"]
MILD_POS = ["decent", "steady"]
MILD_NEG = ["shaky", "dull"]
POS_VERBS = ["thrive", "succeed"]
NEG_VERBS = ["fail", "collapse"]
FILLER_POS = ["routine"]
FILLER_NEG = ["slow"]

LEXICON_SCORES = {
    "wonderful": 0.9, "brilliant": 0.85, "excellent": 0.9, "admirable": 0.8,
    "terrible": -0.9, "corrupt": -0.85, "awful": -0.9, "dreadful": -0.8,
    "decent": 0.3, "steady": 0.25, "shaky": -0.3, "dull": -0.25,
    "thrive": 0.7, "succeed": 0.65, "fail": -0.7, "collapse": -0.65,
    "routine": 0.1, "slow": -0.1,
    # seen in pronoun sentences
    "gifted": 0.6, "good": 0.7,
}

FILLERS = ["budget", "council", "harbor", "festival"]

OUTLETS = {
    Leaning.LEFT: ["Daily Meridian", "The Vantage"],
    Leaning.RIGHT: ["Ridgeline Post", "The Bulwark Times"],
    Leaning.CENTER: ["Plainview Wire", "Civic Ledger"],
}

# (entity, descriptor pool) recipes per class; every article samples from these.
RECIPES = {
    Leaning.LEFT: [("velora", POSITIVE + POS_VERBS), ("brandor", NEGATIVE + NEG_VERBS),
                   ("tessia", MILD_POS)],
    Leaning.RIGHT: [("velora", NEGATIVE + NEG_VERBS), ("brandor", POSITIVE + POS_VERBS),
                    ("tessia", MILD_NEG)],
    Leaning.CENTER: [("unita", POSITIVE + POS_VERBS), ("tessia", MILD_POS + MILD_NEG)],
}

VERB_LEMMAS = set(POS_VERBS + NEG_VERBS)


def adj_sentence(entity: str, adj: str, sent_id: str, article_id: str) -> DepSentence:
    tokens = [
        DepToken(0, entity.capitalize(), entity, "PROPN", 1, "nsubj"),
        DepToken(1, "is", "be", "AUX", None, "root"),
        DepToken(2, adj, adj, "ADJ", 1, "acomp"),
        DepToken(3, ".", ".", "PUNCT", 1, "punct"),
    ]
    return DepSentence(tokens, sent_id=sent_id, article_id=article_id)


def verb_sentence(entity: str, verb: str, sent_id: str, article_id: str) -> DepSentence:
    tokens = [
        DepToken(0, entity.capitalize(), entity, "PROPN", 2, "nsubj"),
        DepToken(1, "often", "often", "ADV", 2, "advmod"),
        DepToken(2, verb + "s", verb, "VERB", None, "root"),
        DepToken(3, ".", ".", "PUNCT", 2, "punct"),
    ]
    return DepSentence(tokens, sent_id=sent_id, article_id=article_id)


def pronoun_sentence(adj: str, sent_id: str, article_id: str) -> DepSentence:
    """'He is <adj> .' — descriptor reaches the marker only via coref substitution."""
    tokens = [
        DepToken(0, "He", "he", "PRON", 1, "nsubj"),
        DepToken(1, "is", "be", "AUX", None, "root"),
        DepToken(2, adj, adj, "ADJ", 1, "acomp"),
        DepToken(3, ".", ".", "PUNCT", 1, "punct"),
    ]
    return DepSentence(tokens, sent_id=sent_id, article_id=article_id)


def filler_sentence(noun: str, adj: str, sent_id: str, article_id: str) -> DepSentence:
    tokens = [
        DepToken(0, "the", "the", "DET", 1, "det"),
        DepToken(1, noun, noun, "NOUN", 3, "nsubj"),
        DepToken(2, "is", "be", "AUX", 3, "cop"),
        DepToken(3, adj, adj, "ADJ", None, "root"),
        DepToken(4, ".", ".", "PUNCT", 3, "punct"),
    ]
    return DepSentence(tokens, sent_id=sent_id, article_id=article_id)


def synth_article(leaning: Leaning, art_id: str, rng: random.Random) -> Article:
    sentences: list[DepSentence] = []
    n = 0

    def next_id() -> str:
        nonlocal n
        n += 1
        return f"{art_id}-s{n}"

    for entity, pool in RECIPES[leaning]:
        for lemma in rng.sample(pool, k=min(2, len(pool))):
            if lemma in VERB_LEMMAS:
                sentences.append(verb_sentence(entity, lemma, next_id(), art_id))
            else:
                sentences.append(adj_sentence(entity, lemma, next_id(), art_id))
        if rng.random() < 0.3:
            # pronoun follows the entity sentence; coref should route it back
            follow = rng.choice([w for w in pool if w not in VERB_LEMMAS] or ["good"])
            sentences.append(pronoun_sentence(follow, next_id(), art_id))
    if rng.random() < 0.5:
        sentences.append(filler_sentence(
            rng.choice(FILLERS), rng.choice(FILLER_POS + FILLER_NEG), next_id(), art_id))

    date = dt.date(2021, 1, 1) + dt.timedelta(days=rng.randrange(3 * 365))
    text = " ".join(" ".join(t.surface for t in s.tokens) for s in sentences)
    return Article(
        id=art_id,
        outlet=rng.choice(OUTLETS[leaning]),
        leaning=leaning,
        published_at=date,
        title=f"synthetic {art_id}",
        text=text,
        sentences=tuple(sentences),
    )


def synth_corpus(n_per_class: int, seed: int, prefix: str = "a") -> list[Article]:
    rng = random.Random(seed)
    articles = []
    i = 0
    for leaning in (Leaning.LEFT, Leaning.CENTER, Leaning.RIGHT):
        for _ in range(n_per_class):
            articles.append(synth_article(leaning, f"{prefix}{i}", rng))
            i += 1
    return articles


def write_lexicon(path) -> None:
    lines = [f"{lemma}\t{score}" for lemma, score in sorted(LEXICON_SCORES.items())]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_fixture_files(tmp_path, articles, stem: str = "corpus"):
    """Write corpus JSONL + CoNLL-U + lexicon TSV; returns their paths."""
    corpus_path = tmp_path / f"{stem}.jsonl"
    conllu_path = tmp_path / f"{stem}.conllu"
    lexicon_path = tmp_path / "lexicon.tsv"
    save_corpus(articles, corpus_path)
    write_conllu([s for a in articles for s in a.sentences], conllu_path)
    write_lexicon(lexicon_path)
    return corpus_path, conllu_path, lexicon_path
