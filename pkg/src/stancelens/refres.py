"""Part-of-speech reference resolution over dependency trees.

Every verb and adjective in a sentence is linked to its nearest noun
(NOUN or PROPN) by tree distance. A bottom-up pass first memoizes, per
token, the distance to the closest noun inside that token's own subtree
(-1 if there is none) together with the noun's index. Resolution for a
verb/adjective then starts from its own memo entry and climbs ancestors:
the candidate through an ancestor k edges up costs k plus that ancestor's
memoized subtree distance. A candidate at level k costs at least k, so
the climb cannot improve once k exceeds the best total found; it runs
through that boundary level (where equal-cost candidates can still sit)
and stops there, which keeps the noun-index tie rule global while doing
the minimal number of climbs. The ancestor's memo may point back down the
branch the climb came from; that candidate is accepted as-is, and is
always dominated by the shallower candidate it routes through, so it
never changes the result.

Ties are broken by smaller total distance, then smaller noun index. Each
verb/adjective yields at most one link (nouns may receive many).

Worst case is the degenerate chain with a single noun at the root, where
the climbs sum to O(N^2) work for an N-token sentence.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .conllu import DepSentence, ParseError
from .corpus import Article
from .util import read_jsonl

KIND_ADJECTIVE = "adjective"
KIND_VERB = "verb"
DESCRIPTOR_KINDS = {"VERB": KIND_VERB, "ADJ": KIND_ADJECTIVE}


@dataclass
class MemoEntry:
    """Distance to the nearest noun within the token's own subtree, and that noun.

    distance == 0 iff the token itself is a noun; distance == -1 (and
    noun_index None) iff the subtree holds no noun.
    """

    distance: int
    noun_index: int | None


@dataclass(frozen=True)
class RefAssignment:
    source_index: int
    noun_index: int
    distance: int
    source_kind: str  # "verb" | "adjective"


@dataclass(frozen=True)
class GoldRelation:
    sentence_id: str
    source_index: int
    noun_index: int
    kind: str


@dataclass
class OpCounter:
    """Counts elementary steps; used by the complexity regression tests."""

    ops: int = 0


def _topo_order(sentence: DepSentence) -> list[int]:
    """Tokens in parents-before-children order (iterative; chains can be deep)."""
    kids = sentence.children()
    order: list[int] = []
    stack = [sentence.root_index]
    while stack:
        node = stack.pop()
        order.append(node)
        stack.extend(kids[node])
    if len(order) != len(sentence.tokens):
        raise ParseError(f"sentence {sentence.sent_id or '?'}: head links are cyclic or disconnected")
    return order


def build_memo(sentence: DepSentence, counter: OpCounter | None = None) -> list[MemoEntry]:
    """Children-first pass filling one MemoEntry per token."""
    n = len(sentence.tokens)
    memo = [MemoEntry(-1, None) for _ in range(n)]
    kids = sentence.children()
    for node in reversed(_topo_order(sentence)):
        tok = sentence.tokens[node]
        if counter is not None:
            counter.ops += 1
        if tok.is_nominal():
            memo[node] = MemoEntry(0, node)
            continue
        best: tuple[int, int] | None = None
        for child in kids[node]:
            if counter is not None:
                counter.ops += 1
            child_entry = memo[child]
            if child_entry.distance < 0:
                continue
            cand = (child_entry.distance + 1, child_entry.noun_index)
            if best is None or cand < best:
                best = cand
        if best is not None:
            memo[node] = MemoEntry(best[0], best[1])
    return memo


def resolve(sentence: DepSentence, memo: list[MemoEntry],
            counter: OpCounter | None = None) -> list[RefAssignment]:
    """Link each verb/adjective to its nearest noun; emit nothing when the sentence has none."""
    tokens = sentence.tokens
    assignments: list[RefAssignment] = []
    for tok in tokens:
        kind = DESCRIPTOR_KINDS.get(tok.upos)
        if kind is None:
            continue
        own = memo[tok.index]
        best: tuple[int, int] | None = None
        if own.distance >= 1:
            best = (own.distance, own.noun_index)
        k = 0
        node = tok.index
        while True:
            head = tokens[node].head
            if head is None:
                break
            k += 1
            if best is not None and k > best[0]:
                break  # every candidate above costs more than the current best
            node = head
            if counter is not None:
                counter.ops += 1
            entry = memo[node]
            if entry.distance >= 0:
                cand = (k + entry.distance, entry.noun_index)
                if best is None or cand < best:
                    best = cand
        if best is not None:
            assignments.append(RefAssignment(
                source_index=tok.index,
                noun_index=best[1],
                distance=best[0],
                source_kind=kind,
            ))
    return assignments


def resolve_sentence(sentence: DepSentence, counter: OpCounter | None = None) -> list[RefAssignment]:
    return resolve(sentence, build_memo(sentence, counter), counter)


def resolve_article(article: Article) -> dict[str, list[tuple[str, str]]]:
    """Descriptor lemmas grouped under the lowercased lemma of their resolved noun.

    Returns {noun key: [(descriptor lemma, kind), ...]} merged across all
    sentences of the article (the article must already be parsed and
    coref-substituted).
    """
    descriptors: dict[str, list[tuple[str, str]]] = {}
    for s_idx, sent in enumerate(article.sentences):
        try:
            assignments = resolve_sentence(sent)
        except ParseError as exc:
            raise ParseError(f"article {article.id}, sentence {s_idx}: {exc}") from exc
        for ref in assignments:
            noun_key = sent.tokens[ref.noun_index].lemma.lower()
            lemma = sent.tokens[ref.source_index].lemma.lower()
            descriptors.setdefault(noun_key, []).append((lemma, ref.source_kind))
    return descriptors


@dataclass
class PRF:
    precision: float
    recall: float
    f1: float

    def as_dict(self) -> dict[str, float]:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def _prf(tp: int, n_pred: int, n_gold: int) -> PRF:
    precision = tp / n_pred if n_pred else 0.0
    recall = tp / n_gold if n_gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return PRF(precision, recall, f1)


def eval_refres(predicted: dict[str, list[RefAssignment]], gold: list[GoldRelation]) -> dict[str, PRF]:
    """Score predicted assignments against gold relations, per descriptor kind.

    A prediction is a true positive iff its (sentence, source, noun, kind)
    quadruple appears in gold.
    """
    gold_set = {(g.sentence_id, g.source_index, g.noun_index, g.kind) for g in gold}
    results: dict[str, PRF] = {}
    for kind in (KIND_ADJECTIVE, KIND_VERB):
        preds = [
            (sid, a.source_index, a.noun_index, a.source_kind)
            for sid, assignments in predicted.items()
            for a in assignments
            if a.source_kind == kind
        ]
        kind_gold = {g for g in gold_set if g[3] == kind}
        tp = sum(1 for p in preds if p in kind_gold)
        results[kind] = _prf(tp, len(preds), len(kind_gold))
    return results


def read_gold_relations(path: str | Path) -> list[GoldRelation]:
    """Gold annotations: JSONL {sentence_id, source_index, noun_index, kind}."""
    gold = []
    for lineno, obj in read_jsonl(path):
        kind = str(obj["kind"]).lower()
        if kind not in (KIND_ADJECTIVE, KIND_VERB):
            raise ValueError(f"{path}: line {lineno}: kind must be adjective|verb, got {obj['kind']!r}")
        gold.append(GoldRelation(
            sentence_id=str(obj["sentence_id"]),
            source_index=int(obj["source_index"]),
            noun_index=int(obj["noun_index"]),
            kind=kind,
        ))
    return gold
