from __future__ import annotations

import datetime as dt

import pytest

from stancelens.conllu import DepSentence, DepToken
from stancelens.corpus import Article, Leaning
from stancelens.stance import ValenceLexicon


def mk_sentence(rows, sent_id=None, article_id=None) -> DepSentence:
    """rows: (surface, lemma, upos, head) with head as 0-based index or None for root."""
    tokens = [
        DepToken(index=i, surface=surface, lemma=lemma, upos=upos, head=head, deprel="dep")
        for i, (surface, lemma, upos, head) in enumerate(rows)
    ]
    sent = DepSentence(tokens, sent_id=sent_id, article_id=article_id)
    sent.validate()
    return sent


def mk_article(art_id="a1", leaning=Leaning.CENTER, sentences=(), outlet="PBS",
               date=dt.date(2022, 3, 4), title="t", text="x") -> Article:
    return Article(id=art_id, outlet=outlet, leaning=leaning, published_at=date,
                   title=title, text=text, sentences=tuple(sentences))


@pytest.fixture
def walkthrough_sentence() -> DepSentence:
    """Eight-token tree for 'John is very healthy because John often jogs'.

    Root is the auxiliary 'is'; 'jogs' heads the subordinate clause.
    """
    return mk_sentence([
        ("John", "john", "PROPN", 1),
        ("is", "be", "AUX", None),
        ("very", "very", "ADV", 3),
        ("healthy", "healthy", "ADJ", 1),
        ("because", "because", "SCONJ", 7),
        ("John", "john", "PROPN", 7),
        ("often", "often", "ADV", 7),
        ("jogs", "jog", "VERB", 1),
    ], sent_id="walkthrough")


@pytest.fixture
def john_article() -> Article:
    """'John is gifted. He was always good at math.' — parsed, not yet coref-substituted."""
    s1 = mk_sentence([
        ("John", "john", "PROPN", 1),
        ("is", "be", "AUX", None),
        ("gifted", "gifted", "ADJ", 1),
        (".", ".", "PUNCT", 1),
    ], sent_id="john-1", article_id="john")
    s2 = mk_sentence([
        ("He", "he", "PRON", 1),
        ("was", "be", "AUX", None),
        ("always", "always", "ADV", 3),
        ("good", "good", "ADJ", 1),
        ("at", "at", "ADP", 3),
        ("math", "math", "NOUN", 4),
        (".", ".", "PUNCT", 1),
    ], sent_id="john-2", article_id="john")
    return mk_article("john", sentences=(s1, s2))


@pytest.fixture
def tiny_lexicon() -> ValenceLexicon:
    return ValenceLexicon({
        "gifted": 0.6,
        "good": 0.7,
        "healthy": 0.6,
        "bad": -0.7,
        "corrupt": -0.8,
        "plain": 0.0,
    })
