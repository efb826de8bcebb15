"""Dependency-tree types and a CoNLL-U reader.

Sentences arrive pre-parsed in 10-column CoNLL-U (blank line between
sentences). Only ID, FORM, LEMMA, UPOS, HEAD and DEPREL are consumed.
``# article_id = ...`` comments link sentences to corpus articles and
``# sent_id = ...`` comments name individual sentences.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

NOMINAL_POS = frozenset({"NOUN", "PROPN"})


class ParseError(ValueError):
    """Malformed CoNLL-U input or an ill-formed dependency tree."""


@dataclass(frozen=True)
class DepToken:
    index: int          # 0-based position within the sentence
    surface: str
    lemma: str
    upos: str
    head: int | None    # 0-based parent index; None marks the root
    deprel: str

    def is_nominal(self) -> bool:
        return self.upos in NOMINAL_POS


@dataclass
class DepSentence:
    tokens: list[DepToken]
    sent_id: str | None = None
    article_id: str | None = None
    _children: list[list[int]] = field(default=None, repr=False, compare=False)  # type: ignore[assignment]

    def __post_init__(self):
        self._children = None

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def root_index(self) -> int:
        roots = [t.index for t in self.tokens if t.head is None]
        if len(roots) != 1:
            raise ParseError(f"sentence {self.sent_id or '?'}: expected exactly one root, found {len(roots)}")
        return roots[0]

    def children(self) -> list[list[int]]:
        if self._children is None:
            kids: list[list[int]] = [[] for _ in self.tokens]
            for tok in self.tokens:
                if tok.head is not None:
                    kids[tok.head].append(tok.index)
            self._children = kids
        return self._children

    def validate(self) -> None:
        """Check index contiguity and that head links form a single tree."""
        n = len(self.tokens)
        for pos, tok in enumerate(self.tokens):
            if tok.index != pos:
                raise ParseError(f"sentence {self.sent_id or '?'}: token index {tok.index} at position {pos}")
            if tok.head is not None and not (0 <= tok.head < n):
                raise ParseError(f"sentence {self.sent_id or '?'}: head {tok.head} out of range for token {pos}")
            if tok.head == tok.index:
                raise ParseError(f"sentence {self.sent_id or '?'}: token {pos} is its own head")
        root = self.root_index
        seen = 0
        queue = deque([root])
        visited = [False] * n
        visited[root] = True
        kids = self.children()
        while queue:
            node = queue.popleft()
            seen += 1
            for c in kids[node]:
                if visited[c]:
                    raise ParseError(f"sentence {self.sent_id or '?'}: cyclic head links at token {c}")
                visited[c] = True
                queue.append(c)
        if seen != n:
            raise ParseError(f"sentence {self.sent_id or '?'}: head links are cyclic or disconnected")


def read_conllu(path: str | Path) -> list[DepSentence]:
    """Read all sentences from a CoNLL-U file, validating each tree.

    Multiword-token ranges (``1-2``) and empty nodes (``1.1``) are skipped.
    """
    sentences: list[DepSentence] = []
    raw: list[list[str]] = []
    article_id: str | None = None
    sent_id: str | None = None
    auto_index = 0

    def flush(lineno: int) -> None:
        nonlocal raw, article_id, sent_id, auto_index
        if not raw:
            return
        id_map: dict[int, int] = {}
        for pos, cols in enumerate(raw):
            id_map[int(cols[0])] = pos
        tokens = []
        for pos, cols in enumerate(raw):
            head_col = cols[6]
            if head_col == "_":
                raise ParseError(f"{path}: line {lineno}: missing HEAD for token {cols[0]}")
            head_id = int(head_col)
            if head_id == 0:
                head = None
            elif head_id in id_map:
                head = id_map[head_id]
            else:
                raise ParseError(f"{path}: sentence {sent_id or '?'}: HEAD {head_id} does not exist")
            tokens.append(DepToken(
                index=pos,
                surface=cols[1],
                lemma=cols[2],
                upos=cols[3],
                head=head,
                deprel=cols[7],
            ))
        sent = DepSentence(tokens, sent_id=sent_id or f"s{auto_index}", article_id=article_id)
        sent.validate()
        sentences.append(sent)
        auto_index += 1
        raw = []
        sent_id = None

    with open(path, encoding="utf-8") as fh:
        lineno = 0
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                flush(lineno)
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    key = key.strip()
                    if key == "article_id":
                        article_id = value.strip()
                    elif key == "sent_id":
                        sent_id = value.strip()
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise ParseError(f"{path}: line {lineno}: expected 10 tab-separated columns, got {len(cols)}")
            if "-" in cols[0] or "." in cols[0]:
                continue  # multiword range / empty node
            try:
                int(cols[0])
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: bad token ID {cols[0]!r}") from exc
            raw.append(cols)
        flush(lineno + 1)
    return sentences


def group_by_article(sentences: list[DepSentence]) -> dict[str, list[DepSentence]]:
    grouped: dict[str, list[DepSentence]] = {}
    for sent in sentences:
        if sent.article_id is None:
            continue
        grouped.setdefault(sent.article_id, []).append(sent)
    return grouped


def write_conllu(sentences: list[DepSentence], path: str | Path) -> None:
    """Serialize sentences back to CoNLL-U (used by fixtures and round-trip tests)."""
    chunks = []
    for sent in sentences:
        lines = []
        if sent.article_id is not None:
            lines.append(f"# article_id = {sent.article_id}")
        if sent.sent_id is not None:
            lines.append(f"# sent_id = {sent.sent_id}")
        for tok in sent.tokens:
            head = 0 if tok.head is None else tok.head + 1
            lines.append("\t".join([
                str(tok.index + 1), tok.surface, tok.lemma, tok.upos, "_", "_",
                str(head), tok.deprel, "_", "_",
            ]))
        chunks.append("\n".join(lines))
    from .util import atomic_write_text

    atomic_write_text(path, "\n\n".join(chunks) + "\n")
