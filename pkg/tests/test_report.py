import datetime as dt
from pathlib import Path

from conftest import mk_article
from stancelens.classifier import PredictionRow
from stancelens.corpus import Leaning, stats
from stancelens.evaluation import score, temporal_apply
from stancelens import report

DATA = Path(__file__).parent / "data"


def pred(art_id, label):
    return PredictionRow(article_id=art_id, model="rule", predicted=label,
                         distances=None, tie_flag=False)


def format_metrics():
    """Fixed synthetic confusion for the metrics-table golden."""
    gold = {"a": Leaning.LEFT, "b": Leaning.RIGHT, "c": Leaning.LEFT,
            "d": Leaning.RIGHT, "e": Leaning.CENTER}
    preds = [pred("a", "right"), pred("b", "left"), pred("c", "left"),
             pred("d", "right"), pred("e", "center")]
    return score(preds, gold)


def format_distribution():
    """Two quarters echoing the published table's cell style (0.10/0.50/0.40)."""
    arts = [mk_article(f"q2-{i}", leaning=Leaning.UNLABELED, date=dt.date(2021, 5, 1))
            for i in range(20)]
    arts += [mk_article(f"q3-{i}", leaning=Leaning.UNLABELED, date=dt.date(2023, 8, 1))
             for i in range(4)]
    labels = ["left"] * 2 + ["center"] * 10 + ["right"] * 8
    preds = [pred(a.id, lab) for a, lab in zip(arts[:20], labels)]
    preds += [pred(a.id, "center") for a in arts[20:]]
    return temporal_apply(preds, arts)


def test_metrics_table_matches_golden():
    got = report.metrics_tsv(format_metrics())
    assert got == (DATA / "metrics_format.golden.tsv").read_text()


def test_distribution_csv_matches_golden():
    got = report.distribution_csv(format_distribution())
    assert got == (DATA / "distribution_format.golden.csv").read_text()


def test_distribution_text_matches_golden():
    got = report.distribution_text(format_distribution())
    assert got == (DATA / "distribution_text.golden.txt").read_text()


def test_band_monotone():
    values = [0.0, 0.1, 0.5, 0.77, 1.0]
    widths = [report.band(v).count("#") for v in values]
    assert widths == sorted(widths)
    assert widths[0] == 0 and widths[-1] == report.BAND_WIDTH


def test_stats_tsv_and_figure(tmp_path):
    arts = [mk_article(f"a{i}", leaning=Leaning.LEFT, outlet="The Vantage",
                       date=dt.date(2021, 2, 1)) for i in range(3)]
    arts.append(mk_article("b", leaning=Leaning.CENTER, outlet="Plainview Wire",
                           date=dt.date(2022, 7, 1)))
    table = stats(arts)
    text = report.stats_tsv(table, digest="d1gest")
    assert "# config_digest=d1gest" in text
    assert "left\tThe Vantage\t21Q1\t3" in text
    fig = tmp_path / "stats.png"
    report.save_stats_figure(table, fig)
    assert fig.stat().st_size > 1000


def test_metrics_figure(tmp_path):
    fig = tmp_path / "metrics.png"
    report.save_metrics_figure(format_metrics(), fig)
    assert fig.stat().st_size > 1000


def test_distribution_figure(tmp_path):
    fig = tmp_path / "dist.png"
    report.save_distribution_figure(format_distribution(), fig)
    assert fig.stat().st_size > 1000
