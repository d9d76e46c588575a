import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complexclip.errors import SingleClass, TooFewSamples
from complexclip.harness.roc import (
    LabeledScores,
    auc,
    bootstrap_ci,
    read_scores_csv,
    roc_curve,
    trapezoid_area,
    write_scores_csv,
)

from oracles import pairwise_auc

PERFECT = LabeledScores([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0])


def random_scores(seed, n=100, ties=False):
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 2, n)
    labels[:2] = [0, 1]
    scores = rng.standard_normal(n) + 0.8 * labels
    if ties:
        scores = np.round(scores, 1)
    return LabeledScores(scores, labels)


class TestAuc:
    def test_perfect(self):
        assert auc(PERFECT) == 1.0

    def test_reversed(self):
        assert auc(LabeledScores([0.1, 0.2, 0.8, 0.9], [1, 1, 0, 0])) == 0.0

    def test_all_tied(self):
        assert auc(LabeledScores([0.5] * 6, [1, 0, 1, 0, 1, 0])) == 0.5

    def test_single_class(self):
        with pytest.raises(SingleClass):
            auc(LabeledScores([0.1, 0.2], [1, 1]))

    @pytest.mark.parametrize("seed", range(5))
    @pytest.mark.parametrize("ties", [False, True])
    def test_matches_pairwise(self, seed, ties):
        d = random_scores(seed, ties=ties)
        assert auc(d) == pytest.approx(pairwise_auc(d.scores, d.labels), abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_monotone_invariance(self, seed):
        d = random_scores(seed, n=60, ties=True)
        t = LabeledScores(np.exp(3 * d.scores) + 7, d.labels)
        assert auc(t) == auc(d)

    def test_label_permutation_near_half(self):
        d = random_scores(1, n=200)
        rng = np.random.default_rng(99)
        vals = [auc(LabeledScores(d.scores, rng.permutation(d.labels))) for _ in range(100)]
        assert abs(np.mean(vals) - 0.5) <= 0.05


class TestRocCurve:
    def test_perfect_passes_corner(self):
        pts = roc_curve(PERFECT)
        assert (0.0, 1.0) in pts
        assert pts[0] == (0.0, 0.0) and pts[-1] == (1.0, 1.0)

    def test_all_tied(self):
        pts = roc_curve(LabeledScores([0.3] * 4, [1, 0, 1, 0]))
        assert pts == [(0.0, 0.0), (1.0, 1.0)]
        assert trapezoid_area(pts) == 0.5

    @pytest.mark.parametrize("seed", range(10))
    def test_area_equals_auc(self, seed):
        d = random_scores(seed, ties=seed % 2 == 0)
        pts = roc_curve(d)
        assert abs(trapezoid_area(pts) - pairwise_auc(d.scores, d.labels)) < 1e-12
        fpr, tpr = np.array(pts).T
        assert np.all(np.diff(fpr) >= 0) and np.all(np.diff(tpr) >= 0)

    def test_single_class(self):
        with pytest.raises(SingleClass):
            roc_curve(LabeledScores([1, 2], [0, 0]))


class TestBootstrap:
    def test_perfect(self):
        assert bootstrap_ci(PERFECT, 200, 0.95, 1) == (1.0, 1.0)

    def test_deterministic(self):
        d = random_scores(3)
        assert bootstrap_ci(d, 300, 0.9, 5) == bootstrap_ci(d, 300, 0.9, 5)
        assert bootstrap_ci(d, 300, 0.9, 5) != bootstrap_ci(d, 300, 0.9, 6)

    def test_brackets_point_estimate(self):
        for seed in range(100):
            d = random_scores(seed, n=60)
            lo, hi = bootstrap_ci(d, 200, 0.95, seed)
            assert 0 <= lo <= auc(d) <= hi <= 1

    def test_errors(self):
        with pytest.raises(TooFewSamples):
            bootstrap_ci(LabeledScores([0.1, 0.9, 0.5], [0, 1, 0]), 100)
        with pytest.raises(SingleClass):
            bootstrap_ci(LabeledScores([0.1] * 5, [0] * 5), 100)
        with pytest.raises(ValueError):
            bootstrap_ci(PERFECT, 50)
        with pytest.raises(ValueError):
            bootstrap_ci(PERFECT, 100, level=1.0)

    def test_small_sample_redraws(self):
        # 1 positive in 4: many resamples lose it and must be redrawn
        lo, hi = bootstrap_ci(LabeledScores([0.9, 0.1, 0.2, 0.3], [1, 0, 0, 0]), 200, 0.95, 0)
        assert (lo, hi) == (1.0, 1.0)


class TestCsv:
    def test_roundtrip(self, tmp_path):
        d = random_scores(4, n=30)
        write_scores_csv(tmp_path / "s.csv", d)
        back = read_scores_csv(tmp_path / "s.csv")
        np.testing.assert_array_equal(back.scores, d.scores)
        np.testing.assert_array_equal(back.labels, d.labels)

    @pytest.mark.parametrize(
        "text", ["a,b\n1,0\n", "score,label\n0.1,2\n", "score,label\nfoo,1\n", "score,label\n0.5\n", ""]
    )
    def test_malformed(self, tmp_path, text):
        p = tmp_path / "bad.csv"
        p.write_text(text)
        with pytest.raises(ValueError):
            read_scores_csv(p)
