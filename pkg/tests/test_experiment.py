import json
import math

import numpy as np
import pytest

from complexclip.detector import DetectorSpec
from complexclip.errors import InvalidConfig
from complexclip.harness.experiment import (
    ExperimentConfig,
    corpus_condition_reports,
    format_summary,
    run_experiment,
    run_pipeline,
    stratified_split,
    summarize_reports,
    write_results,
)
from complexclip.harness.synth import SynthConfig, synth_dataset
from complexclip.stft import StftParams

SMALL = SynthConfig(n_per_class=8, duration=1.0, seed=3)
PARAMS = StftParams(256, 128)


def small_config(**kw):
    base = dict(
        synth=SMALL,
        stft=PARAMS,
        bootstrap=100,
        gate=ExperimentConfig().gate.__class__(target_duration=1.0, snr_threshold=5.0),
    )
    return ExperimentConfig(**(base | kw))


class TestSplit:
    def test_stratified_and_disjoint(self):
        labels = np.array([0, 1] * 50)
        train, test = stratified_split(labels, 0.7, 7)
        assert np.intersect1d(train, test).size == 0
        assert train.size + test.size == 100
        assert labels[train].sum() == 35 and labels[test].sum() == 15

    def test_deterministic(self):
        labels = [0, 1] * 10
        a = stratified_split(labels, 0.5, 1)
        b = stratified_split(labels, 0.5, 1)
        c = stratified_split(labels, 0.5, 2)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))
        assert not np.array_equal(a[0], c[0])


class TestRunExperiment:
    def test_structure(self):
        dets = [DetectorSpec("magsq"), DetectorSpec("clip")]
        runs = run_experiment(SMALL, PARAMS, dets, 100.0, 100, 1)
        assert len(runs) == 2
        for run, det in zip(runs, dets):
            assert run.detector == det
            assert 0 <= run.ci_low <= run.auc <= run.ci_high <= 1
            assert run.n_train + run.n_test == 16
            j = run.to_json()
            assert j["ci"] == [run.ci_low, run.ci_high] and j["detector"] == det.label

    def test_noisy_corpus_runs_share_split(self):
        synth = SynthConfig(n_per_class=8, duration=1.0, seed=3, noise_snr_db=10.0)
        a, b = run_experiment(synth, PARAMS, [DetectorSpec("magsq"), DetectorSpec("clip")], 100.0, 100, 1)
        assert (a.n_test, a.n_train) == (b.n_test, b.n_train)
        np.testing.assert_array_equal(a.scores.labels, b.scores.labels)
        ja, jb = a.to_json(), b.to_json()
        shared = {"n_test", "n_train", "n_bootstrap", "seed", "level"}
        assert {k: ja[k] for k in shared} == {k: jb[k] for k in shared}
        assert ja["detector"] != jb["detector"]

    def test_repeated_detector_identical(self):
        runs = run_experiment(SMALL, PARAMS, [DetectorSpec("clip")] * 2, 100.0, 100, 1)
        assert runs[0].to_json() == runs[1].to_json()

    def test_clip_angle_zero_matches_clip(self):
        runs = run_experiment(SMALL, PARAMS, [DetectorSpec("clip"), DetectorSpec("clip_angle", 0.0)], 100.0, 100, 1)
        assert runs[0].auc == runs[1].auc
        np.testing.assert_array_equal(runs[0].scores.scores, runs[1].scores.scores)


class TestConditionReports:
    def test_summary(self):
        sigs = [s for s, _ in synth_dataset(SMALL)][:4]
        for domain in ("db", "linear"):
            reps = corpus_condition_reports(sigs, PARAMS, DetectorSpec("clip"), domain=domain)
            s = summarize_reports(reps)
            assert s["n_files"] == 4
            assert 0 <= s["fraction_reduced"] <= 1
            assert 0 < s["median_support_fraction"] < 1

    def test_linear_domain_never_increases_sigma_max(self):
        # entrywise 0 <= clip <= magsq, so the Perron root cannot grow
        sigs = [s for s, _ in synth_dataset(SMALL)]
        reps = corpus_condition_reports(sigs, PARAMS, DetectorSpec("clip"), domain="linear")
        assert all(r.sigma_max_reduction >= -1e-12 for r in reps)

    def test_bad_domain(self):
        with pytest.raises(ValueError):
            corpus_condition_reports([], PARAMS, DetectorSpec("clip"), domain="log")


class TestConfig:
    def test_desk_config_loads(self):
        cfg = ExperimentConfig.load("configs/desk.json")
        assert cfg.synth.n_per_class == 100
        assert [d.label for d in cfg.detectors] == ["magsq", "clip", "clip-rot"]
        assert ExperimentConfig.from_json(cfg.to_json()) == cfg

    @pytest.mark.parametrize(
        "data",
        [
            [],
            {"bogus": 1},
            {"detectors": []},
            {"detectors": ["relu"]},
            {"ridge_lambda": 0},
            {"bootstrap": 10},
            {"level": 1.5},
            {"db_floor": 10},
            {"stft": {"fft_size": 500}},
            {"synth": {"n_per_class": 0}},
            {"synth": {"colour": "red"}},
            {"domain": "log"},
        ],
    )
    def test_invalid(self, data):
        with pytest.raises(InvalidConfig):
            ExperimentConfig.from_json(data)

    def test_null_threshold_keeps_everything(self):
        cfg = ExperimentConfig.from_json({"gate": {"snr_threshold": None}})
        assert cfg.gate.snr_threshold == -math.inf
        assert cfg.to_json()["gate"]["snr_threshold"] is None

    def test_bad_json(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text("{not json")
        with pytest.raises(InvalidConfig):
            ExperimentConfig.load(p)


class TestPipeline:
    def test_artifacts(self, tmp_path):
        result = run_pipeline(small_config())
        paths = write_results(result, tmp_path)
        names = {p.name for p in paths}
        assert {"config.json", "gate.json", "runs.json", "summary.json", "condition_clip.json"} <= names
        assert {"scores_magsq.csv", "scores_clip.csv", "scores_clip_rot.csv"} <= names
        runs = json.loads((tmp_path / "runs.json").read_text())
        assert len(runs) == 3
        gate = json.loads((tmp_path / "gate.json").read_text())
        assert len(gate) == 16
        kept = sum(g["kept"] for g in gate)
        assert runs[0]["n_train"] + runs[0]["n_test"] == kept
        table = format_summary(result.summary_rows())
        assert table.splitlines()[0].startswith("detector") and len(table.splitlines()) == 4

    def test_gate_too_strict(self):
        cfg = small_config(gate=ExperimentConfig().gate.__class__(target_duration=1.0, snr_threshold=200.0))
        with pytest.raises(InvalidConfig):
            run_pipeline(cfg)
