"""Report rendering: delimited tables plus matplotlib figures saved next to them."""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .corpus import LABELED, CorpusStats, Leaning
from .evaluation import ClassMetrics, QuarterDistribution
from .util import atomic_write_text, comment_header

CLASS_COLORS = {Leaning.LEFT: "#3b5bdb", Leaning.CENTER: "#845ef7", Leaning.RIGHT: "#e03131"}
BAND_WIDTH = 10  # rank-band resolution in text tables: darker = larger fraction


def band(fraction: float) -> str:
    """Text stand-in for the shaded cells: a bar whose length tracks the fraction."""
    filled = int(round(max(0.0, min(1.0, fraction)) * BAND_WIDTH))
    return "#" * filled + "." * (BAND_WIDTH - filled)


# ---------------------------------------------------------------- corpus stats

def stats_tsv(stats: CorpusStats, digest: str | None = None) -> str:
    lines = [comment_header(digest) + "leaning\toutlet\tquarter\tcount"]
    for leaning, outlet, quarter, count in stats.rows():
        lines.append(f"{leaning}\t{outlet}\t{quarter}\t{count}")
    return "\n".join(lines) + "\n"


def save_stats_figure(stats: CorpusStats, path: str | Path) -> None:
    """Per-leaning article counts over quarters, stacked by outlet."""
    per_leaning: dict[str, dict[str, dict[str, int]]] = {}
    quarters: set[str] = set()
    for leaning, outlet, quarter, count in stats.rows():
        per_leaning.setdefault(leaning, {}).setdefault(outlet, {})[quarter] = count
        quarters.add(quarter)
    ordered_quarters = sorted(quarters)
    leanings = [l for l in per_leaning]
    fig, axes = plt.subplots(len(leanings), 1, figsize=(8, 2.6 * max(1, len(leanings))),
                             sharex=True, squeeze=False)
    for ax, leaning in zip(axes.ravel(), leanings):
        bottom = np.zeros(len(ordered_quarters))
        for outlet, per_quarter in sorted(per_leaning[leaning].items()):
            heights = np.array([per_quarter.get(q, 0) for q in ordered_quarters], dtype=float)
            ax.bar(ordered_quarters, heights, bottom=bottom, label=outlet)
            bottom += heights
        ax.set_ylabel("articles")
        ax.set_title(f"{leaning} corpus by quarter")
        ax.legend(fontsize=7)
    axes.ravel()[-1].set_xlabel("quarter")
    for label in axes.ravel()[-1].get_xticklabels():
        label.set_rotation(45)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


# ------------------------------------------------------------- metrics tables

def metrics_tsv(metrics: ClassMetrics, digest: str | None = None) -> str:
    """Three-column class metrics table (two decimals, like the published format)."""
    header = comment_header(digest, {"strict": str(metrics.strict).lower()})
    lines = [header + "class\tprecision\trecall\tf1"]
    for leaning in LABELED:
        s = metrics.per_class[leaning]
        lines.append(f"{leaning.value.capitalize()}\t{s.precision:.2f}\t{s.recall:.2f}\t{s.f1:.2f}")
    return "\n".join(lines) + "\n"


def metrics_json(metrics: ClassMetrics, digest: str | None = None) -> str:
    doc = {
        "config_digest": digest,
        "strict": metrics.strict,
        "classes": {
            leaning.value: {
                "precision": s.precision,
                "recall": s.recall,
                "f1": s.f1,
                "support": s.support,
                "unclassifiable": s.unclassifiable,
            }
            for leaning, s in metrics.per_class.items()
        },
    }
    return json.dumps(doc, indent=1) + "\n"


def save_metrics_figure(metrics: ClassMetrics, path: str | Path) -> None:
    names = [l.value.capitalize() for l in LABELED]
    x = np.arange(len(names))
    width = 0.27
    fig, ax = plt.subplots(figsize=(6, 3.4))
    for offset, (label, attr) in enumerate((("precision", "precision"), ("recall", "recall"), ("F1", "f1"))):
        values = [getattr(metrics.per_class[l], attr) for l in LABELED]
        ax.bar(x + (offset - 1) * width, values, width, label=label)
    ax.set_xticks(x, names)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("score")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


# -------------------------------------------------- quarterly apply tables

def distribution_csv(dist: QuarterDistribution, digest: str | None = None) -> str:
    lines = [comment_header(digest) + "quarter,left,center,right,n"]
    for quarter, row in dist.rows.items():
        fr = row.fractions
        lines.append(f"{quarter.label()},{fr[Leaning.LEFT]:.4f},{fr[Leaning.CENTER]:.4f},"
                     f"{fr[Leaning.RIGHT]:.4f},{row.n}")
    return "\n".join(lines) + "\n"


def distribution_text(dist: QuarterDistribution) -> str:
    """Shaded-table analog: each cell prints the fraction plus a rank band."""
    quarters = list(dist.rows)
    header = "        " + "  ".join(f"{q.label():>16}" for q in quarters)
    lines = [header]
    for leaning in LABELED:
        cells = []
        for q in quarters:
            f = dist.rows[q].fractions[leaning]
            cells.append(f"{f:.2f} {band(f)}".rjust(16))
        lines.append(f"{leaning.value.capitalize():<8}" + "  ".join(cells))
    unc = [dist.rows[q].unclassifiable_fraction for q in quarters]
    if any(u > 0 for u in unc):
        cells = [f"{u:.2f} {band(u)}".rjust(16) for u in unc]
        lines.append(f"{'Unclass.':<8}" + "  ".join(cells))
    lines.append("n       " + "  ".join(f"{dist.rows[q].n:>16}" for q in quarters))
    return "\n".join(lines) + "\n"


def save_distribution_figure(dist: QuarterDistribution, path: str | Path) -> None:
    """Heatmap of predicted-leaning share per quarter (darker = larger)."""
    quarters = list(dist.rows)
    data = np.array([[dist.rows[q].fractions[l] for q in quarters] for l in LABELED])
    fig, ax = plt.subplots(figsize=(max(6, 0.8 * len(quarters)), 2.8))
    im = ax.imshow(data, cmap="Purples", vmin=0.0, vmax=1.0, aspect="auto")
    ax.set_yticks(range(len(LABELED)), [l.value.capitalize() for l in LABELED])
    ax.set_xticks(range(len(quarters)), [q.label() for q in quarters], rotation=45)
    for i in range(data.shape[0]):
        for j in range(data.shape[1]):
            ax.text(j, i, f"{data[i, j]:.2f}", ha="center", va="center",
                    color="black" if data[i, j] < 0.6 else "white", fontsize=8)
    fig.colorbar(im, ax=ax, label="share of quarter")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


# -------------------------------------------------- refres evaluation report

def refres_metrics_tsv(results: dict, digest: str | None = None) -> str:
    lines = [comment_header(digest) + "kind\tprecision\trecall\tf1"]
    for kind, prf in results.items():
        lines.append(f"{kind}\t{prf.precision:.2f}\t{prf.recall:.2f}\t{prf.f1:.2f}")
    return "\n".join(lines) + "\n"


def write_text(path: str | Path, text: str) -> None:
    atomic_write_text(path, text)
