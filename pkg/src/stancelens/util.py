"""Small shared helpers: atomic file writes, JSONL with a meta header, config digests."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Iterator


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write text to `path` via a temp file + rename so readers never see partial output."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def config_digest(config: dict[str, Any]) -> str:
    """Short stable digest of a run configuration, embedded in outputs for provenance."""
    canon = json.dumps(config, sort_keys=True, default=str)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


def write_jsonl(path: str | Path, records: Iterable[dict], meta: dict | None = None) -> None:
    """Write one JSON object per line; an optional leading {"meta": ...} record carries provenance."""
    lines = []
    if meta is not None:
        lines.append(json.dumps({"meta": meta}, sort_keys=True))
    for rec in records:
        lines.append(json.dumps(rec, sort_keys=True))
    atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))


def read_jsonl(path: str | Path) -> Iterator[tuple[int, dict]]:
    """Yield (line_number, object) for each data line, skipping blanks and meta records."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: malformed JSON on line {lineno}: {exc}") from exc
            if isinstance(obj, dict) and set(obj) == {"meta"}:
                continue
            yield lineno, obj


def comment_header(digest: str | None, extra: dict[str, Any] | None = None) -> str:
    """'#'-prefixed provenance lines for delimited outputs; readers skip '#' lines."""
    fields = {"config_digest": digest or "none"}
    if extra:
        fields.update(extra)
    return "".join(f"# {k}={v}\n" for k, v in fields.items())
