"""CLI for the convolutional baseline: train, classify, explain.

Consumes the same article JSONL as the rule-based pipeline and emits the
shared prediction JSONL (model field "conv"), so the rule-based
`evaluate` command scores its output unchanged.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np


class CliError(ValueError):
    pass


def _read_articles(path: str | Path, require_label: bool) -> list[dict]:
    articles = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CliError(f"{path}: line {lineno}: malformed JSON: {exc}") from exc
            if set(obj) == {"meta"}:
                continue
            for field in ("id", "text") + (("leaning",) if require_label else ()):
                if field not in obj:
                    raise CliError(f"{path}: line {lineno}: missing field {field!r}")
            articles.append(obj)
    if not articles:
        raise CliError(f"{path}: no articles found")
    return articles


def _digest(args: argparse.Namespace, keys: list[str]) -> str:
    doc = json.dumps({k: getattr(args, k, None) for k in keys}, sort_keys=True, default=str)
    return hashlib.sha256(doc.encode("utf-8")).hexdigest()[:16]


def cmd_train(args) -> int:
    from .model import curve_csv, save_curve_figure, train_conv

    articles = _read_articles(args.corpus, require_label=True)
    labeled = [a for a in articles if str(a["leaning"]).lower() in ("left", "center", "right")]
    if not labeled:
        raise CliError(f"{args.corpus}: no labeled articles to train on")
    texts = [str(a["text"]) for a in labeled]
    labels = [str(a["leaning"]).lower() for a in labeled]
    classifier, curve = train_conv(texts, labels, val_fraction=args.val_fraction,
                                   seed=args.seed)
    digest = _digest(args, ["corpus", "val_fraction", "seed"])
    out_dir = Path(args.out)
    classifier.save(out_dir, meta={"config_digest": digest})
    (out_dir / "curve.csv").write_text(f"# config_digest={digest}\n" + curve_csv(curve),
                                       encoding="utf-8")
    if args.plots:
        save_curve_figure(curve, out_dir / "curve.png")
    last = curve[-1]
    print(f"trained {len(labeled)} articles, epoch {last.epoch}: "
          f"train acc {last.train_accuracy:.3f}, val acc {last.val_accuracy:.3f} -> {out_dir}")
    return 0


def cmd_classify(args) -> int:
    from .model import LABELS, ConvClassifier

    classifier = ConvClassifier.load(args.model)
    articles = _read_articles(args.corpus, require_label=False)
    probs = classifier.predict_proba([str(a["text"]) for a in articles])
    digest = _digest(args, ["corpus", "model"])
    lines = [json.dumps({"meta": {"config_digest": digest, "model": "conv"}}, sort_keys=True)]
    for art, row in zip(articles, probs):
        order = np.argsort(row)[::-1]
        tie = bool(abs(row[order[0]] - row[order[1]]) <= 1e-9)
        lines.append(json.dumps({
            "article_id": str(art["id"]),
            "model": "conv",
            "predicted": LABELS[int(order[0])],
            "probabilities": {label: float(row[i]) for i, label in enumerate(LABELS)},
            "tie_flag": tie,
        }, sort_keys=True))
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"classified {len(articles)} articles -> {args.out}")
    return 0


def cmd_explain(args) -> int:
    from .explain import aggregate_influence, explain_article, influence_json, save_influence_figures
    from .model import ConvClassifier

    classifier = ConvClassifier.load(args.model)
    articles = _read_articles(args.corpus, require_label=False)
    if args.limit:
        articles = articles[: args.limit]
    influences = [
        explain_article(classifier, str(a["id"]), str(a["text"]),
                        n_words=args.n_words, n_samples=args.samples,
                        seed=args.seed + i)
        for i, a in enumerate(articles)
    ]
    report = aggregate_influence(influences, top=args.top)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    digest = _digest(args, ["corpus", "model", "n_words", "samples", "top", "seed", "limit"])
    (out_dir / "influence.json").write_text(
        influence_json(report, meta={"config_digest": digest}), encoding="utf-8")
    if args.plots:
        save_influence_figures(report, out_dir)
    print(f"explained {len(influences)} articles -> {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leanconv", description="Convolutional political-leaning baseline.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train the five-epoch convolutional classifier")
    p.add_argument("--corpus", required=True, help="labeled article JSONL")
    p.add_argument("--val-fraction", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="model directory")
    p.add_argument("--no-plots", dest="plots", action="store_false")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="emit shared-schema predictions for a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("explain", help="word-influence report over a corpus sample")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--n-words", type=int, default=20, help="words kept per article")
    p.add_argument("--top", type=int, default=25, help="rows per class frequency table")
    p.add_argument("--samples", type=int, default=200, help="perturbations per article")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, help="explain only the first N articles")
    p.add_argument("--no-plots", dest="plots", action="store_false")
    p.set_defaults(func=cmd_explain)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(sys.argv[1:] if argv is None else list(argv))
    try:
        return args.func(args)
    except (CliError, ValueError, FileNotFoundError) as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
