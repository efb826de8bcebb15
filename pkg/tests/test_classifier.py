import numpy as np
import pytest

from conftest import mk_article, mk_sentence
from oracles import cosine_distance_oracle
from stancelens.classifier import (
    UNCLASSIFIABLE, UnclassifiableError, classify, classify_many, classify_vector,
    cosine_distance, explain, prediction_row, read_predictions, write_predictions,
)
from stancelens.corpus import Leaning
from stancelens.space import build_space, project
from stancelens.stance import StanceEntry, ValenceLexicon
from test_space import table3_stances

ARTICLE_VEC = np.array([-0.3, 0.0, 0.0, 0.1, 0.0, 0.0])


@pytest.fixture
def example_space():
    return build_space(table3_stances())


class TestCosineDistance:
    def test_worked_example_left(self, example_space):
        assert cosine_distance(ARTICLE_VEC, example_space.vectors[Leaning.LEFT]) == \
            pytest.approx(0.17, abs=0.005)

    def test_worked_example_center(self, example_space):
        assert cosine_distance(ARTICLE_VEC, example_space.vectors[Leaning.CENTER]) == \
            pytest.approx(0.51, abs=0.005)

    def test_worked_example_right_formula_value(self, example_space):
        # The published table prints 1.51 for this cell; the distance formula
        # evaluates to 1.61, confirmed by the independent plain-Python oracle
        # below. The formula value is pinned.
        right = example_space.vectors[Leaning.RIGHT]
        got = cosine_distance(ARTICLE_VEC, right)
        assert got == pytest.approx(1.61, abs=0.005)
        assert got == pytest.approx(cosine_distance_oracle(ARTICLE_VEC.tolist(), right.tolist()),
                                    abs=1e-12)

    def test_self_distance_zero(self):
        v = np.array([0.3, -0.2, 0.9])
        assert cosine_distance(v, v) == pytest.approx(0.0, abs=1e-12)

    def test_zero_vector_unclassifiable(self):
        with pytest.raises(UnclassifiableError):
            cosine_distance(np.zeros(3), np.array([1.0, 0.0, 0.0]))

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="lengths"):
            cosine_distance(np.ones(2), np.ones(3))

    def test_symmetry_and_range(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            a, b = rng.normal(size=5), rng.normal(size=5)
            d = cosine_distance(a, b)
            assert d == cosine_distance(b, a)
            assert -1e-12 <= d <= 2 + 1e-12


def article_with_stance(stance_map, art_id="t1"):
    """Build a parsed article whose resolved stance equals `stance_map` (scores via lexicon)."""
    sentences = []
    lexicon_entries = {}
    for i, (noun, value) in enumerate(stance_map.items()):
        adj = f"desc{i}"
        lexicon_entries[adj] = value
        sentences.append(mk_sentence([
            (noun.capitalize(), noun, "PROPN", 1),
            ("is", "be", "AUX", None),
            (adj, adj, "ADJ", 1),
        ], sent_id=f"{art_id}-{i}"))
    return mk_article(art_id, sentences=sentences), ValenceLexicon(lexicon_entries)


class TestClassify:
    def test_worked_example_predicts_left(self, example_space):
        art, lexicon = article_with_stance({"trump": -0.3, "immigrant": 0.10, "canada": 0.05})
        result = classify(art, example_space, lexicon)
        assert result.predicted is Leaning.LEFT
        assert not result.tie_flag
        assert result.distances[Leaning.LEFT] == pytest.approx(0.17, abs=0.005)
        assert result.distances[Leaning.CENTER] == pytest.approx(0.51, abs=0.005)
        assert result.distances[Leaning.RIGHT] == pytest.approx(1.61, abs=0.005)

    def test_matching_restriction_gives_zero_distance(self, example_space):
        # article stance == Right vector restricted to Right's nonzero nouns
        art, lexicon = article_with_stance(
            {"trump": 0.8, "ira": -0.1, "israel": 0.8, "vaccine": -0.5})
        result = classify(art, example_space, lexicon)
        assert result.predicted is Leaning.RIGHT
        assert result.distances[Leaning.RIGHT] == pytest.approx(0.0, abs=1e-12)

    def test_out_of_corpus_nouns_unclassifiable(self, example_space):
        art, lexicon = article_with_stance({"canada": 0.4, "ottawa": -0.2})
        with pytest.raises(UnclassifiableError):
            classify(art, example_space, lexicon)

    def test_tie_resolved_in_fixed_order(self):
        # article equidistant from the Left and Right axes; Center points away
        space = build_space({
            Leaning.LEFT: {"a": StanceEntry(1.0, 1)},
            Leaning.RIGHT: {"b": StanceEntry(1.0, 1)},
            Leaning.CENTER: {"a": StanceEntry(1.0, 1), "b": StanceEntry(-1.0, 1)},
        })
        vec = project({"a": StanceEntry(0.5, 1), "b": StanceEntry(0.5, 1)}, space.index)
        result = classify_vector("tie", vec, space)
        assert result.distances[Leaning.LEFT] == pytest.approx(result.distances[Leaning.RIGHT])
        assert result.tie_flag
        assert result.predicted is Leaning.LEFT  # fixed order Left, Center, Right

    def test_determinism(self, example_space):
        art, lexicon = article_with_stance({"trump": -0.3, "immigrant": 0.10})
        a = classify(art, example_space, lexicon)
        b = classify(art, example_space, lexicon)
        assert a == b

    def test_scale_invariance_of_argmin(self, example_space):
        base = classify_vector("s", ARTICLE_VEC, example_space)
        for lam in (1e-6, 0.5, 3.0, 1e6):
            scaled = classify_vector("s", lam * ARTICLE_VEC, example_space)
            assert scaled.predicted is base.predicted
            for leaning, d in base.distances.items():
                assert abs(scaled.distances[leaning] - d) <= 1e-12


class TestExplain:
    def test_worked_example_top2(self, example_space):
        art, lexicon = article_with_stance({"trump": -0.3, "immigrant": 0.10, "canada": 0.05})
        rows = explain(classify(art, example_space, lexicon), top_k=2)
        assert [r["noun"] for r in rows] == ["trump", "immigrant"]
        assert rows[0]["product"] == pytest.approx(0.21)   # (-0.3) * (-0.7)
        assert rows[0]["pull"] == "toward"
        assert rows[1]["product"] == pytest.approx(0.03)
        assert [r["pull"] for r in rows] == ["toward", "toward"]

    def test_k_larger_than_nonzero(self, example_space):
        art, lexicon = article_with_stance({"trump": -0.3, "immigrant": 0.10})
        rows = explain(classify(art, example_space, lexicon), top_k=50)
        assert len(rows) == 2


class TestPredictionIO:
    def test_roundtrip(self, tmp_path, example_space):
        art, lexicon = article_with_stance({"trump": -0.3})
        rows = [prediction_row(classify(art, example_space, lexicon))]
        path = tmp_path / "preds.jsonl"
        write_predictions(rows, path, meta={"config_digest": "abc"})
        assert read_predictions(path) == rows

    def test_classify_many_marks_unclassifiable(self, tmp_path, example_space):
        known, lexicon = article_with_stance({"trump": -0.3}, art_id="known")
        unknown, lex2 = article_with_stance({"pluto": 0.4}, art_id="unknown")
        rows = classify_many([known, unknown], example_space,
                             ValenceLexicon({**lex2.entries, **lexicon.entries}))
        by_id = {r.article_id: r for r in rows}
        assert by_id["known"].predicted == "left"
        assert by_id["unknown"].predicted == UNCLASSIFIABLE
        assert by_id["unknown"].distances is None

    def test_bad_label_rejected(self, tmp_path):
        path = tmp_path / "preds.jsonl"
        path.write_text('{"article_id": "x", "predicted": "sideways"}\n', encoding="utf-8")
        with pytest.raises(ValueError, match="sideways"):
            read_predictions(path)

    def test_parallel_matches_serial(self, example_space):
        arts = []
        lex_entries = {}
        for i in range(6):
            art, lex = article_with_stance({"trump": -0.2 - i / 100, "israel": 0.1}, art_id=f"p{i}")
            arts.append(art)
            lex_entries.update(lex.entries)
        lexicon = ValenceLexicon(lex_entries)
        serial = classify_many(arts, example_space, lexicon, jobs=1)
        parallel = classify_many(arts, example_space, lexicon, jobs=2)
        assert serial == parallel
