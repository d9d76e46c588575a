"""End-to-end desk experiment: corpus, gate, features, ridge, ROC, conditioning."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..analysis import DEFAULT_RTOL, ConditionReport, condition_report
from ..detector import DEFAULT_DB_FLOOR, DetectorSpec, detect, to_db
from ..errors import InvalidConfig
from ..signal_io import IngestConfig, InputSignal, condition_length, gate_report, screen
from ..stft import StftParams, stft
from .features import extract_features
from .ridge import train_ridge
from .roc import LabeledScores, auc, bootstrap_ci, roc_curve, write_scores_csv
from .synth import SynthConfig, philox, synth_dataset

# Split streams live far from the per-signal synth streams keyed by index.
_SPLIT_STREAM = 0x5350_4C49_5400_0000


@dataclass(frozen=True, eq=False)
class EvalRun:
    detector: DetectorSpec | None
    auc: float
    ci_low: float
    ci_high: float
    roc_points: list
    n_bootstrap: int
    seed: int
    level: float = 0.95
    n_train: int = 0
    n_test: int = 0
    scores: LabeledScores | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        out = {}
        if self.detector is not None:
            out.update(detector=self.detector.label, phi=self.detector.phi)
        return out | {
            "auc": self.auc,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "ci": [self.ci_low, self.ci_high],
            "level": self.level,
            "n_bootstrap": self.n_bootstrap,
            "seed": self.seed,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "roc_points": [list(p) for p in self.roc_points],
        }


def evaluate_scores(
    data: LabeledScores, detector: DetectorSpec | None, n_boot: int, level: float, seed: int, n_train: int = 0
) -> EvalRun:
    lo, hi = bootstrap_ci(data, n_boot, level, seed)
    return EvalRun(
        detector=detector,
        auc=auc(data),
        ci_low=lo,
        ci_high=hi,
        roc_points=roc_curve(data),
        n_bootstrap=n_boot,
        seed=seed,
        level=level,
        n_train=n_train,
        n_test=len(data),
        scores=data,
    )


def stratified_split(labels: Sequence[int], train_fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-class shuffled split; returns sorted (train, test) index arrays."""
    labels = np.asarray(labels)
    rng = philox(seed, _SPLIT_STREAM)
    train, test = [], []
    for c in (0, 1):
        idx = rng.permutation(np.flatnonzero(labels == c))
        k = int(round(train_fraction * idx.size))
        train.append(idx[:k])
        test.append(idx[k:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def evaluate_corpus(
    corpus: Sequence[tuple[InputSignal, int]],
    params: StftParams,
    detectors: Sequence[DetectorSpec],
    lam: float,
    n_boot: int,
    split_seed: int,
    *,
    level: float = 0.95,
    bootstrap_seed: int | None = None,
    db_floor: float = DEFAULT_DB_FLOOR,
    train_fraction: float = 0.7,
) -> list[EvalRun]:
    """Train and score one ridge model per detector on a shared split."""
    signals = [s for s, _ in corpus]
    labels = np.array([y for _, y in corpus])
    train, test = stratified_split(labels, train_fraction, split_seed)
    boot_seed = split_seed if bootstrap_seed is None else bootstrap_seed
    runs = []
    for det in detectors:
        feats = extract_features(signals, params, det, db_floor)
        model = train_ridge(feats[train], 2.0 * labels[train] - 1.0, lam)
        scores = model.decision_function(feats[test])
        data = LabeledScores(scores, labels[test])
        runs.append(evaluate_scores(data, det, n_boot, level, boot_seed, n_train=train.size))
    return runs


def run_experiment(
    synth: SynthConfig,
    params: StftParams,
    detectors: Sequence[DetectorSpec],
    lam: float,
    n_boot: int,
    split_seed: int,
    **kwargs,
) -> list[EvalRun]:
    return evaluate_corpus(synth_dataset(synth), params, detectors, lam, n_boot, split_seed, **kwargs)


def corpus_condition_reports(
    signals: Sequence[InputSignal],
    params: StftParams,
    clipped: DetectorSpec,
    *,
    db_floor: float = DEFAULT_DB_FLOOR,
    rtol: float = DEFAULT_RTOL,
    domain: str = "db",
) -> list[ConditionReport]:
    """Per-file magsq-vs-``clipped`` reports, in source order."""
    if domain not in ("db", "linear"):
        raise ValueError(f"domain must be 'db' or 'linear', got {domain!r}")
    reports = []
    for s in signals:
        X = stft(s, params)
        base = detect(X, DetectorSpec("magsq"))
        clip = detect(X, clipped)
        if domain == "db":
            base, clip = to_db(base, db_floor), to_db(clip, db_floor)
        reports.append(condition_report(base, clip, rtol, source_id=s.source_id))
    return reports


def summarize_reports(reports: Sequence[ConditionReport]) -> dict:
    red = np.array([r.sigma_max_reduction for r in reports])
    ratios = np.array([r.condition_ratio for r in reports])
    ratios = ratios[np.isfinite(ratios)]
    return {
        "n_files": len(reports),
        "median_sigma_max_reduction": float(np.median(red)) if red.size else None,
        "fraction_reduced": float(np.mean(red > 0)) if red.size else None,
        "median_condition_ratio": float(np.median(ratios)) if ratios.size else None,
        "median_support_fraction": float(np.median([r.support_fraction_clipped for r in reports]))
        if reports
        else None,
    }


@dataclass(frozen=True)
class ExperimentConfig:
    synth: SynthConfig = SynthConfig()
    stft: StftParams = StftParams()
    detectors: tuple[DetectorSpec, ...] = (
        DetectorSpec("magsq"),
        DetectorSpec("clip"),
        DetectorSpec("clip_rotated"),
    )
    ridge_lambda: float = 1000.0
    bootstrap: int = 1000
    level: float = 0.95
    bootstrap_seed: int = 42
    split_seed: int = 7
    db_floor: float = DEFAULT_DB_FLOOR
    gate: IngestConfig = IngestConfig()
    rtol: float = DEFAULT_RTOL
    domain: str = "db"

    @classmethod
    def from_json(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise InvalidConfig("config must be a JSON object")
        known = {
            "synth", "stft", "detectors", "ridge_lambda", "bootstrap", "level",
            "bootstrap_seed", "split_seed", "db_floor", "gate", "rtol", "domain",
        }
        unknown = set(data) - known
        if unknown:
            raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
        try:
            kw = {}
            if "synth" in data:
                kw["synth"] = SynthConfig.from_json(data["synth"])
            if "stft" in data:
                s = dict(data["stft"])
                if "window" in s:
                    s["window_kind"] = s.pop("window")
                kw["stft"] = StftParams(**s)
            if "detectors" in data:
                kw["detectors"] = tuple(DetectorSpec.parse(d) for d in data["detectors"])
            if "gate" in data:
                g = dict(data["gate"])
                if g.get("snr_threshold") is None and "snr_threshold" in g:
                    g["snr_threshold"] = -math.inf
                kw["gate"] = IngestConfig(**g)
            for key in ("ridge_lambda", "level", "db_floor", "rtol"):
                if key in data:
                    kw[key] = float(data[key])
            for key in ("bootstrap", "bootstrap_seed", "split_seed"):
                if key in data:
                    kw[key] = int(data[key])
            if "domain" in data:
                kw["domain"] = str(data["domain"])
            cfg = cls(**kw)
        except InvalidConfig:
            raise
        except (TypeError, ValueError, KeyError) as exc:
            raise InvalidConfig(f"bad experiment config: {exc}") from exc
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | os.PathLike) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"{path}: invalid JSON: {exc}") from exc
        return cls.from_json(data)

    def validate(self) -> None:
        if not self.detectors:
            raise InvalidConfig("at least one detector is required")
        if not self.ridge_lambda > 0:
            raise InvalidConfig("ridge_lambda must be positive")
        if self.bootstrap < 100:
            raise InvalidConfig("bootstrap must be >= 100")
        if not 0 < self.level < 1:
            raise InvalidConfig("level must be in (0, 1)")
        if not (math.isfinite(self.db_floor) and self.db_floor < 0):
            raise InvalidConfig("db_floor must be finite and negative")
        if not 0 < self.rtol < 1:
            raise InvalidConfig("rtol must be in (0, 1)")
        if self.domain not in ("db", "linear"):
            raise InvalidConfig("domain must be 'db' or 'linear'")

    def to_json(self) -> dict:
        return {
            "synth": self.synth.to_json(),
            "stft": self.stft.to_json(),
            "detectors": [d.label for d in self.detectors],
            "ridge_lambda": self.ridge_lambda,
            "bootstrap": self.bootstrap,
            "level": self.level,
            "bootstrap_seed": self.bootstrap_seed,
            "split_seed": self.split_seed,
            "db_floor": self.db_floor,
            "gate": {
                "target_duration": self.gate.target_duration,
                "snr_threshold": self.gate.snr_threshold if math.isfinite(self.gate.snr_threshold) else None,
                "snr_frame_length": self.gate.snr_frame_length,
                "noise_percentile": self.gate.noise_percentile,
                "signal_percentile": self.gate.signal_percentile,
            },
            "rtol": self.rtol,
            "domain": self.domain,
        }


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    gate: list[dict]
    runs: list[EvalRun]
    conditions: dict[str, list[ConditionReport]]

    def summary_rows(self) -> list[dict]:
        rows = []
        for run in self.runs:
            reports = self.conditions.get(run.detector.label)
            red = summarize_reports(reports)["median_sigma_max_reduction"] if reports else None
            rows.append(
                {
                    "detector": run.detector.label,
                    "auc": run.auc,
                    "ci_low": run.ci_low,
                    "ci_high": run.ci_high,
                    "median_sigma_max_reduction": red,
                }
            )
        return rows


def run_pipeline(config: ExperimentConfig) -> ExperimentResult:
    """Synthesize, gate, evaluate every detector and build conditioning reports."""
    corpus = synth_dataset(config.synth)
    labels = {s.source_id: y for s, y in corpus}
    decisions = screen([s for s, _ in corpus], config.gate)
    kept = [d for d in decisions if d.kept]
    kept_corpus = [
        (condition_length(d.signal, config.gate.target_duration), labels[d.signal.source_id]) for d in kept
    ]
    n_pos = sum(y for _, y in kept_corpus)
    if n_pos < 2 or len(kept_corpus) - n_pos < 2:
        raise InvalidConfig(
            f"SNR gate kept {len(kept_corpus)} signals ({n_pos} positive); need two of each class"
        )
    runs = evaluate_corpus(
        kept_corpus,
        config.stft,
        config.detectors,
        config.ridge_lambda,
        config.bootstrap,
        config.split_seed,
        level=config.level,
        bootstrap_seed=config.bootstrap_seed,
        db_floor=config.db_floor,
    )
    conditions = {}
    kept_signals = [s for s, _ in kept_corpus]
    for det in config.detectors:
        if det.kind == "magsq" or det.label in conditions:
            continue
        conditions[det.label] = corpus_condition_reports(
            kept_signals, config.stft, det, db_floor=config.db_floor, rtol=config.rtol, domain=config.domain
        )
    return ExperimentResult(config, gate_report(decisions), runs, conditions)


def _slug(label: str) -> str:
    return label.replace("=", "_").replace(".", "p").replace("-", "_")


def _dump(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, allow_nan=False) + "\n")


def write_results(result: ExperimentResult, out_dir: str | os.PathLike) -> list[Path]:
    """Write all artifacts; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def put(name, obj):
        p = out / name
        _dump(p, obj)
        written.append(p)

    put("config.json", result.config.to_json())
    put("gate.json", result.gate)
    put("runs.json", [r.to_json() for r in result.runs])
    seen = set()
    for run in result.runs:
        slug = _slug(run.detector.label)
        if slug in seen or run.scores is None:
            continue
        seen.add(slug)
        p = out / f"scores_{slug}.csv"
        write_scores_csv(p, run.scores)
        written.append(p)
    for label, reports in result.conditions.items():
        put(
            f"condition_{_slug(label)}.json",
            {
                "detector": label,
                "baseline": "magsq",
                "domain": result.config.domain,
                "summary": summarize_reports(reports),
                "files": [r.to_json() for r in reports],
            },
        )
    put("summary.json", result.summary_rows())
    return written


def format_summary(rows: Sequence[dict]) -> str:
    lines = [f"{'detector':<24}{'AUC':>8}{'CI low':>9}{'CI high':>9}{'sigma_max red.':>16}"]
    for r in rows:
        red = r["median_sigma_max_reduction"]
        red_s = f"{red:>16.3f}" if red is not None else f"{'-':>16}"
        lines.append(f"{r['detector']:<24}{r['auc']:>8.3f}{r['ci_low']:>9.3f}{r['ci_high']:>9.3f}{red_s}")
    return "\n".join(lines)
