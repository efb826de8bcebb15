"""Pronoun substitution ahead of reference resolution.

Substitutions normally come from an external coreference resolver's
serialized output (JSONL); `heuristic_resolve` is a deliberately simple
built-in fallback that rewrites each personal pronoun to the nearest
preceding proper noun. It does no gender or number agreement, so reports
using it should flag results as baseline coref.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from .conllu import NOMINAL_POS, DepSentence, DepToken
from .corpus import Article
from .util import read_jsonl

#: Personal pronoun lemmas/surfaces the heuristic rewrites (lowercased).
PERSONAL_PRONOUNS = frozenset({
    "i", "me", "my", "mine", "myself",
    "we", "us", "our", "ours", "ourselves",
    "you", "your", "yours", "yourself", "yourselves",
    "he", "him", "his", "himself",
    "she", "her", "hers", "herself",
    "it", "its", "itself",
    "they", "them", "their", "theirs", "themselves",
})


class SubstitutionError(ValueError):
    """A substitution addresses a token that does not exist."""


@dataclass(frozen=True)
class Substitution:
    sentence_index: int
    token_index: int
    replacement_lemma: str
    replacement_pos: str  # NOUN or PROPN

    def __post_init__(self):
        if self.replacement_pos not in NOMINAL_POS:
            raise SubstitutionError(
                f"replacement_pos must be nominal (NOUN/PROPN), got {self.replacement_pos!r}")


def apply_substitutions(article: Article, subs: list[Substitution]) -> Article:
    """Return a copy of the article with each addressed token's lemma and POS replaced.

    Tree structure, surfaces and every unaddressed token are untouched.
    """
    if not subs:
        return article
    sentences = [list(s.tokens) for s in article.sentences]
    for sub in subs:
        if not (0 <= sub.sentence_index < len(sentences)):
            raise SubstitutionError(
                f"article {article.id}: sentence index {sub.sentence_index} out of range "
                f"(article has {len(sentences)} sentences)")
        tokens = sentences[sub.sentence_index]
        if not (0 <= sub.token_index < len(tokens)):
            raise SubstitutionError(
                f"article {article.id}: token index {sub.token_index} out of range "
                f"in sentence {sub.sentence_index} ({len(tokens)} tokens)")
        old = tokens[sub.token_index]
        tokens[sub.token_index] = DepToken(
            index=old.index,
            surface=old.surface,
            lemma=sub.replacement_lemma,
            upos=sub.replacement_pos,
            head=old.head,
            deprel=old.deprel,
        )
    new_sentences = [
        replace(orig, tokens=toks)
        for orig, toks in zip(article.sentences, sentences)
    ]
    return article.with_sentences(new_sentences)


def _is_personal_pronoun(tok: DepToken) -> bool:
    return tok.upos == "PRON" and (
        tok.lemma.lower() in PERSONAL_PRONOUNS or tok.surface.lower() in PERSONAL_PRONOUNS)


def heuristic_resolve(article: Article, window: int = 2) -> list[Substitution]:
    """Nearest-preceding-proper-noun substitutions for personal pronouns.

    Candidates are PROPN tokens earlier in the same sentence or in up to
    `window` preceding sentences. Pronouns with no candidate in range get
    no substitution.
    """
    subs: list[Substitution] = []
    sentences = article.sentences
    for s_idx, sent in enumerate(sentences):
        for tok in sent.tokens:
            if not _is_personal_pronoun(tok):
                continue
            antecedent = _nearest_preceding_propn(sentences, s_idx, tok.index, window)
            if antecedent is not None:
                subs.append(Substitution(
                    sentence_index=s_idx,
                    token_index=tok.index,
                    replacement_lemma=antecedent.lemma.lower(),
                    replacement_pos="PROPN",
                ))
    return subs


def _nearest_preceding_propn(
    sentences: tuple[DepSentence, ...], s_idx: int, t_idx: int, window: int,
) -> DepToken | None:
    for tok in reversed(sentences[s_idx].tokens[:t_idx]):
        if tok.upos == "PROPN":
            return tok
    for back in range(1, window + 1):
        prev = s_idx - back
        if prev < 0:
            break
        for tok in reversed(sentences[prev].tokens):
            if tok.upos == "PROPN":
                return tok
    return None


def read_substitutions(path: str | Path) -> dict[str, list[Substitution]]:
    """Read external-resolver output: JSONL keyed by article_id."""
    by_article: dict[str, list[Substitution]] = {}
    for lineno, obj in read_jsonl(path):
        try:
            sub = Substitution(
                sentence_index=int(obj["sentence_index"]),
                token_index=int(obj["token_index"]),
                replacement_lemma=str(obj["replacement_lemma"]),
                replacement_pos=str(obj["replacement_pos"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SubstitutionError(f"{path}: line {lineno}: {exc}") from exc
        by_article.setdefault(str(obj.get("article_id", "")), []).append(sub)
    return by_article
