"""Dataset / prediction CSV round trips and parse diagnostics."""

import numpy as np
import pytest

from jcpot import (
    ParseError,
    Prediction,
    gen_multisource_scenario,
    load_labeled_csv,
    load_predictions_csv,
    save_labeled_csv,
    save_predictions_csv,
    scenario_to_csvs,
)
from jcpot.adaptation import _scores_from_raw


class TestLabeledCsv:
    def test_round_trip_bit_exact(self, tmp_path):
        # repr() floats must survive write -> read unchanged, including
        # values with no finite decimal expansion and denormal-ish scales.
        rng = np.random.default_rng(0)
        X = rng.standard_normal((17, 3))
        X[0, 0] = 0.1
        X[1, 1] = 1.0 / 3.0
        X[2, 2] = 1e-300
        X[3, 0] = -12345.6789e10
        y = rng.integers(0, 4, 17)
        y[5] = -1
        p = tmp_path / "data.csv"
        save_labeled_csv(p, X, y)
        X2, y2 = load_labeled_csv(p)
        assert X2.dtype == np.float64 and y2.dtype == np.int64
        assert np.array_equal(X, X2)
        assert np.array_equal(y, y2)

    def test_header_and_line_endings(self, tmp_path):
        p = tmp_path / "data.csv"
        save_labeled_csv(p, np.zeros((2, 2)), [0, 1])
        blob = p.read_bytes()
        assert b"\r" not in blob
        assert blob.split(b"\n")[0] == b"f0,f1,label"

    def test_unlabeled_save(self, tmp_path):
        p = tmp_path / "t.csv"
        save_labeled_csv(p, np.ones((3, 1)), None)
        _, y = load_labeled_csv(p)
        assert np.array_equal(y, [-1, -1, -1])

    def test_trailing_blank_line_tolerated(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("f0,label\n1.5,0\n2.5,1\n\n")
        X, y = load_labeled_csv(p)
        assert X.shape == (2, 1)
        assert np.array_equal(y, [0, 1])

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError, match="no such file"):
            load_labeled_csv(tmp_path / "nope.csv")

    def test_empty_file(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("")
        with pytest.raises(ParseError, match="line 1"):
            load_labeled_csv(p)

    def test_header_only(self, tmp_path):
        p = tmp_path / "h.csv"
        p.write_text("f0,label\n")
        with pytest.raises(ParseError, match="no data rows"):
            load_labeled_csv(p)

    @pytest.mark.parametrize("header", ["x0,label", "f0,f1", "f1,f0,label", "label"])
    def test_bad_header(self, tmp_path, header):
        p = tmp_path / "b.csv"
        p.write_text(header + "\n1.0,0\n")
        with pytest.raises(ParseError, match="bad header"):
            load_labeled_csv(p)

    def test_ragged_row_names_line(self, tmp_path):
        p = tmp_path / "r.csv"
        p.write_text("f0,f1,label\n1.0,2.0,0\n1.0,0\n")
        with pytest.raises(ParseError, match="line 3"):
            load_labeled_csv(p)

    def test_non_numeric_cell_names_column(self, tmp_path):
        p = tmp_path / "n.csv"
        p.write_text("f0,f1,label\n1.0,abc,0\n")
        with pytest.raises(ParseError, match="line 2.*f1.*'abc'"):
            load_labeled_csv(p)

    def test_float_label_rejected(self, tmp_path):
        # labels are strict ints; 0.5 must not be silently truncated
        p = tmp_path / "f.csv"
        p.write_text("f0,label\n1.0,0.5\n")
        with pytest.raises(ParseError, match="label.*not an integer"):
            load_labeled_csv(p)


class TestPredictionsCsv:
    def _prediction(self):
        raw = np.array([[0.2, 0.0, 0.0], [0.6, 1.0, 0.0]])
        scores = _scores_from_raw(raw)
        return Prediction(labels=np.array([1, 1, 0]), scores=scores, method="lp")

    def test_round_trip(self, tmp_path):
        pred = self._prediction()
        p = tmp_path / "pred.csv"
        save_predictions_csv(p, pred)
        idx, labels, scores = load_predictions_csv(p)
        assert np.array_equal(idx, [0, 1, 2])
        assert np.array_equal(labels, pred.labels)
        # loader returns (n, C); writer normalizes columns to probabilities
        assert scores.shape == (3, 2)
        assert np.array_equal(scores, pred.scores.probabilities.T)
        assert np.allclose(scores[0], [0.25, 0.75])
        assert np.array_equal(scores[2], [0.0, 0.0])  # zero-mass column kept as-is

    def test_header(self, tmp_path):
        p = tmp_path / "pred.csv"
        save_predictions_csv(p, self._prediction())
        assert p.read_text().splitlines()[0] == "index,pred_label,score_c0,score_c1"

    def test_bad_header(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("idx,label,score_c0\n0,0,1.0\n")
        with pytest.raises(ParseError, match="bad header"):
            load_predictions_csv(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError, match="no such file"):
            load_predictions_csv(tmp_path / "nope.csv")


class TestScenarioExport:
    def test_writes_all_files(self, tmp_path):
        sc = gen_multisource_scenario(3, n_source=30, n_target=20, seed=7)
        paths = scenario_to_csvs(sc, tmp_path / "out")
        assert len(paths["sources"]) == 3
        for k, path in enumerate(paths["sources"]):
            X, y = load_labeled_csv(path)
            assert np.array_equal(X, sc.sources[k][0])
            assert np.array_equal(y, sc.sources[k][1])
        Xt, yt = load_labeled_csv(paths["target"])
        assert np.array_equal(Xt, sc.target_points)
        assert np.all(yt == -1)
        _, y_true = load_labeled_csv(paths["target_true"])
        assert np.array_equal(y_true, sc.true_labels)
