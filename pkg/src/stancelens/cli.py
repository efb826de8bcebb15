"""Command-line pipeline driver.

Subcommands wire the library stages together; every run is a pure
function of its input files and --seed, and every emitted file embeds a
digest of the run configuration. Failures print a machine-readable error
object to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import sys
from pathlib import Path

from . import classifier, coref, conllu, corpus, evaluation, refres, report, space, stance
from .util import config_digest

DEFAULT_LEXICON = Path(__file__).parent / "data" / "valence_default.tsv"


class CliError(ValueError):
    pass


def _parse_window(value: str | None):
    if not value:
        return None
    try:
        start_s, _, end_s = value.partition(":")
        start, end = dt.date.fromisoformat(start_s), dt.date.fromisoformat(end_s)
    except ValueError as exc:
        raise CliError(f"--window must be START:END ISO dates, got {value!r}") from exc
    if start > end:
        raise CliError(f"--window start {start} is after end {end}")
    return start, end


def _digest_for(args: argparse.Namespace, keys: list[str]) -> str:
    return config_digest({k: getattr(args, k, None) for k in keys})


def _load_parsed_corpus(args: argparse.Namespace) -> list[corpus.Article]:
    articles = corpus.load_corpus(args.corpus, window=_parse_window(args.window))
    parses = conllu.group_by_article(conllu.read_conllu(args.conllu))
    articles = corpus.attach_parses(articles, parses)
    return _apply_coref(articles, args)


def _apply_coref(articles: list[corpus.Article], args: argparse.Namespace) -> list[corpus.Article]:
    if getattr(args, "substitutions", None):
        subs_by_article = coref.read_substitutions(args.substitutions)
        return [coref.apply_substitutions(a, subs_by_article.get(a.id, [])) for a in articles]
    # Baseline coref: nearest preceding proper noun. Flagged so reports can say so.
    return [coref.apply_substitutions(a, coref.heuristic_resolve(a)) for a in articles]


def _figure_path(out: str | Path) -> Path:
    out = Path(out)
    return out.with_suffix(".png")


# ------------------------------------------------------------------ commands

def cmd_stats(args) -> int:
    articles = corpus.load_corpus(args.corpus, window=_parse_window(args.window))
    digest = _digest_for(args, ["corpus", "window"])
    table = corpus.stats(articles)
    text = report.stats_tsv(table, digest)
    if args.out:
        report.write_text(args.out, text)
        if args.plots:
            report.save_stats_figure(table, _figure_path(args.out))
    else:
        sys.stdout.write(text)
    return 0


def cmd_balance(args) -> int:
    articles = corpus.load_corpus(args.corpus, window=_parse_window(args.window))
    digest = _digest_for(args, ["corpus", "cap", "seed", "window"])
    balanced = corpus.balance(articles, cap=args.cap, seed=args.seed)
    corpus.save_corpus(balanced, args.out, meta={"config_digest": digest, "command": "balance"})
    print(f"balanced {len(articles)} -> {len(balanced)} articles ({args.out})")
    return 0


def cmd_split(args) -> int:
    articles = corpus.load_corpus(args.corpus, window=_parse_window(args.window))
    digest = _digest_for(args, ["corpus", "train_fraction", "seed", "window"])
    train, test = corpus.split(articles, train_fraction=args.train_fraction, seed=args.seed)
    meta = {"config_digest": digest, "command": "split"}
    corpus.save_corpus(train, args.train_out, meta=meta)
    corpus.save_corpus(test, args.test_out, meta=meta)
    print(f"split {len(articles)} articles -> {len(train)} train / {len(test)} test")
    return 0


def cmd_train(args) -> int:
    digest = _digest_for(args, ["corpus", "conllu", "substitutions", "lexicon", "seed",
                                "cap", "train_fraction", "min_mentions", "window"])
    articles = _load_parsed_corpus(args)
    lexicon = stance.load_lexicon(args.lexicon)
    balanced = corpus.balance(articles, cap=args.cap, seed=args.seed)
    train_set, test_set = corpus.split(balanced, train_fraction=args.train_fraction, seed=args.seed)
    stances = {}
    for leaning in corpus.LABELED:
        members = [a for a in train_set if a.leaning is leaning]
        article_maps = [stance.article_stance(refres.resolve_article(a), lexicon) for a in members]
        stances[leaning] = stance.corpus_stance(article_maps)
    model = space.build_space(stances, min_mentions=args.min_mentions, config_digest=digest)
    space.save_space(model, args.out)
    if args.test_out:
        corpus.save_corpus(test_set, args.test_out,
                           meta={"config_digest": digest, "command": "train/test-split"})
    print(f"trained leaning space over {model.index.size} nouns "
          f"({len(train_set)} train / {len(test_set)} held-out articles) -> {args.out}")
    return 0


def cmd_classify(args) -> int:
    digest = _digest_for(args, ["corpus", "conllu", "substitutions", "lexicon", "model", "window"])
    articles = _load_parsed_corpus(args)
    model = space.load_space(args.model)
    lexicon = stance.load_lexicon(args.lexicon)
    rows = classifier.classify_many(articles, model, lexicon, jobs=args.jobs)
    coref_mode = "external" if args.substitutions else "baseline-heuristic"
    classifier.write_predictions(rows, args.out, meta={
        "config_digest": digest, "model": "rule", "coref": coref_mode,
    })
    n_unc = sum(1 for r in rows if r.predicted == classifier.UNCLASSIFIABLE)
    print(f"classified {len(rows)} articles ({n_unc} unclassifiable, coref={coref_mode}) -> {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    digest = _digest_for(args, ["predictions", "corpus", "strict"])
    predictions = classifier.read_predictions(args.predictions)
    articles = corpus.load_corpus(args.corpus)
    gold = {a.id: a.leaning for a in articles if a.leaning is not corpus.Leaning.UNLABELED}
    if not gold:
        raise CliError(f"{args.corpus}: no labeled articles to evaluate against")
    metrics = evaluation.score(predictions, gold, strict=args.strict)
    tsv = report.metrics_tsv(metrics, digest)
    if args.out:
        report.write_text(args.out, tsv)
        report.write_text(Path(args.out).with_suffix(".json"), report.metrics_json(metrics, digest))
        if args.plots:
            report.save_metrics_figure(metrics, _figure_path(args.out))
    sys.stdout.write(tsv)
    if metrics.total_unclassifiable:
        print(f"# unclassifiable: {metrics.total_unclassifiable} "
              f"({'excluded from' if metrics.strict else 'counted in'} recall denominators)")
    return 0


def cmd_apply(args) -> int:
    digest = _digest_for(args, ["corpus", "conllu", "substitutions", "lexicon", "model",
                                "predictions", "window"])
    articles = corpus.load_corpus(args.corpus, window=_parse_window(args.window))
    if args.predictions:
        rows = classifier.read_predictions(args.predictions)
    else:
        if not (args.model and args.conllu):
            raise CliError("apply needs either --predictions or --model + --conllu")
        parses = conllu.group_by_article(conllu.read_conllu(args.conllu))
        parsed = _apply_coref(corpus.attach_parses(articles, parses), args)
        model = space.load_space(args.model)
        lexicon = stance.load_lexicon(args.lexicon)
        rows = classifier.classify_many(parsed, model, lexicon, jobs=args.jobs)
        if args.predictions_out:
            classifier.write_predictions(rows, args.predictions_out,
                                         meta={"config_digest": digest, "model": "rule"})
    dist = evaluation.temporal_apply(rows, articles)
    csv_text = report.distribution_csv(dist, digest)
    if args.out:
        report.write_text(args.out, csv_text)
        if args.plots:
            report.save_distribution_figure(dist, _figure_path(args.out))
    sys.stdout.write(report.distribution_text(dist))
    return 0


def cmd_refres_eval(args) -> int:
    digest = _digest_for(args, ["conllu", "gold"])
    sentences = conllu.read_conllu(args.conllu)
    gold = refres.read_gold_relations(args.gold)
    predicted = {s.sent_id: refres.resolve_sentence(s) for s in sentences}
    results = refres.eval_refres(predicted, gold)
    tsv = report.refres_metrics_tsv(results, digest)
    if args.out:
        report.write_text(args.out, tsv)
        report.write_text(
            Path(args.out).with_suffix(".json"),
            json.dumps({"config_digest": digest,
                        "kinds": {k: v.as_dict() for k, v in results.items()}}, indent=1) + "\n")
    sys.stdout.write(tsv)
    return 0


# ---------------------------------------------------------------- CLI plumbing

def _add_common(p: argparse.ArgumentParser, *flags: str) -> None:
    p.add_argument("--config", help="plain key=value defaults file; explicit flags win")
    if "corpus" in flags:
        p.add_argument("--corpus", required=True, help="article corpus JSONL")
    if "conllu" in flags:
        p.add_argument("--conllu", help="pre-parsed sentences (CoNLL-U, linked by # article_id)")
    if "subs" in flags:
        p.add_argument("--substitutions", help="external coref substitutions JSONL "
                                               "(default: built-in baseline heuristic)")
    if "lexicon" in flags:
        p.add_argument("--lexicon", default=str(DEFAULT_LEXICON),
                       help="valence lexicon TSV (default: bundled list)")
    if "seed" in flags:
        p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    if "window" in flags:
        p.add_argument("--window", default=None,
                       help="restrict articles to START:END ISO dates (e.g. 2021-01-01:2023-12-31)")
    if "jobs" in flags:
        p.add_argument("--jobs", type=int, default=1, help="parallel workers for per-article stages")
    if "plots" in flags:
        p.add_argument("--no-plots", dest="plots", action="store_false",
                       help="skip writing the companion figure next to the table")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="stancelens",
        description="Rule-based political-leaning classification from entity stance.")
    parser.add_argument("--config", help="plain key=value defaults file; explicit flags win")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="corpus distribution per (leaning, outlet, quarter)")
    _add_common(p, "corpus", "window", "plots")
    p.add_argument("--out", help="TSV output path (default: stdout)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("balance", help="truncate each class to --cap, flattening time cells")
    _add_common(p, "corpus", "seed", "window")
    p.add_argument("--cap", type=int, default=10000)
    p.add_argument("--out", required=True, help="balanced corpus JSONL")
    p.set_defaults(func=cmd_balance)

    p = sub.add_parser("split", help="stratified train/test split per (leaning, quarter)")
    _add_common(p, "corpus", "seed", "window")
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--train-out", required=True)
    p.add_argument("--test-out", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("train", help="balance, split, resolve stance and build the leaning space")
    _add_common(p, "corpus", "subs", "lexicon", "seed", "window")
    p.add_argument("--conllu", required=True, help="pre-parsed sentences (CoNLL-U)")
    p.add_argument("--cap", type=int, default=10000)
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--min-mentions", type=int, default=1,
                   help="drop nouns mentioned fewer times than this (default 1 = keep all)")
    p.add_argument("--out", required=True, help="model JSON path")
    p.add_argument("--test-out", help="also write the held-out split as JSONL")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="classify parsed articles against a trained space")
    _add_common(p, "corpus", "subs", "lexicon", "window", "jobs")
    p.add_argument("--conllu", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True, help="predictions JSONL")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="precision/recall/F1 of predictions against corpus labels")
    _add_common(p, "corpus", "plots")
    p.add_argument("--predictions", required=True)
    p.add_argument("--strict", action="store_true",
                   help="drop unclassifiable articles from recall denominators")
    p.add_argument("--out", help="metrics TSV path (JSON written alongside)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("apply", help="quarterly distribution of predictions for an outlet corpus")
    _add_common(p, "corpus", "subs", "lexicon", "window", "jobs", "plots")
    p.add_argument("--conllu")
    p.add_argument("--model")
    p.add_argument("--predictions", help="reuse an existing predictions JSONL instead of classifying")
    p.add_argument("--predictions-out", help="save the predictions produced along the way")
    p.add_argument("--out", help="distribution CSV path")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("refres-eval", help="score reference resolution against gold relations")
    p.add_argument("--config", help="plain key=value defaults file; explicit flags win")
    p.add_argument("--conllu", required=True, help="gold sentences (CoNLL-U with sent_id)")
    p.add_argument("--gold", required=True, help="gold relations JSONL")
    p.add_argument("--out", help="metrics TSV path (JSON written alongside)")
    p.set_defaults(func=cmd_refres_eval)
    return parser, dict(sub.choices)


def _coerce(value: str):
    lowered = value.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    for caster in (int, float):
        try:
            return caster(value)
        except ValueError:
            continue
    return value


def _read_config_defaults(path: str) -> dict:
    """key=value defaults for the optional knobs; explicit flags always win."""
    defaults = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise CliError(f"{path}: line {lineno}: expected key=value")
            key, _, value = line.partition("=")
            defaults[key.strip().replace("-", "_")] = _coerce(value.strip())
    return defaults


ERROR_TYPES = (
    CliError, corpus.CorpusError, conllu.ParseError, coref.SubstitutionError,
    stance.LexiconError, space.ModelFormatError, classifier.UnclassifiableError,
    evaluation.EvaluationError, FileNotFoundError, ValueError,
)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser, commands = build_parser()
    # Apply config-file defaults to the chosen subcommand before the real
    # parse; explicitly passed flags still win. (Subparsers parse into a
    # fresh namespace, so defaults must be set on the subparser itself.)
    probe, _ = parser.parse_known_args(argv)
    if getattr(probe, "config", None):
        try:
            defaults = _read_config_defaults(probe.config)
        except OSError as exc:
            print(json.dumps({"error": {"type": "ConfigError", "message": str(exc)}}), file=sys.stderr)
            return 2
        commands[probe.command].set_defaults(**defaults)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ERROR_TYPES as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
