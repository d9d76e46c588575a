"""ROC curve, Mann-Whitney AUC and percentile-bootstrap intervals."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.stats import rankdata

from ..errors import SingleClass, TooFewSamples
from .synth import philox


@dataclass(frozen=True, eq=False)
class LabeledScores:
    scores: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64).ravel()
        labels = np.asarray(self.labels).ravel()
        if scores.size != labels.size:
            raise ValueError(f"{scores.size} scores but {labels.size} labels")
        if not np.all(np.isin(labels, (0, 1))):
            raise ValueError("labels must be 0 or 1")
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "labels", labels.astype(np.int64))

    def __len__(self) -> int:
        return self.scores.size

    def require_both_classes(self) -> None:
        n_pos = int(self.labels.sum())
        if n_pos == 0 or n_pos == self.labels.size:
            raise SingleClass("need at least one positive and one negative label")


def _auc(scores: np.ndarray, labels: np.ndarray) -> float:
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = labels.size - n_pos
    ranks = rankdata(scores)  # ties get their average rank -> half credit
    return float((ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def auc(data: LabeledScores) -> float:
    """Probability that a random positive outscores a random negative (ties count 1/2)."""
    data.require_both_classes()
    return _auc(data.scores, data.labels)


def roc_curve(data: LabeledScores) -> list[tuple[float, float]]:
    """ROC points ``(fpr, tpr)`` from thresholds at each distinct score, high to low."""
    data.require_both_classes()
    order = np.argsort(-data.scores, kind="stable")
    s = data.scores[order]
    y = data.labels[order]
    tp = np.cumsum(y)
    fp = np.cumsum(1 - y)
    # last index of each run of equal scores
    ends = np.flatnonzero(np.r_[s[1:] != s[:-1], True])
    P, N = tp[-1], fp[-1]
    points = [(0.0, 0.0)]
    points += [(float(fp[i] / N), float(tp[i] / P)) for i in ends]
    return points


def trapezoid_area(points: list[tuple[float, float]]) -> float:
    area = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        area += (x1 - x0) * (y0 + y1) / 2.0
    return area


def bootstrap_aucs(data: LabeledScores, n_boot: int, seed: int) -> np.ndarray:
    """AUC on ``n_boot`` resamples of the (score, label) pairs.

    Resample ``b`` draws from the Philox stream keyed ``(seed, b)``; a draw
    that loses a class is redrawn from the same stream.
    """
    n = len(data)
    out = np.empty(n_boot)
    for b in range(n_boot):
        rng = philox(seed, b)
        while True:
            idx = rng.integers(0, n, size=n)
            lab = data.labels[idx]
            n_pos = int(lab.sum())
            if 0 < n_pos < n:
                break
        out[b] = _auc(data.scores[idx], lab)
    return out


def bootstrap_ci(data: LabeledScores, n_boot: int = 1000, level: float = 0.95, seed: int = 0) -> tuple[float, float]:
    """Percentile bootstrap interval for the AUC."""
    data.require_both_classes()
    if len(data) < 4:
        raise TooFewSamples(f"need at least 4 samples for a bootstrap, got {len(data)}")
    if n_boot < 100:
        raise ValueError(f"need at least 100 resamples, got {n_boot}")
    if not 0 < level < 1:
        raise ValueError(f"level must be in (0, 1), got {level}")
    aucs = bootstrap_aucs(data, n_boot, seed)
    alpha = (1.0 - level) / 2.0
    lo, hi = np.quantile(aucs, [alpha, 1.0 - alpha])
    return float(lo), float(hi)


def write_scores_csv(path: str | os.PathLike, data: LabeledScores) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["score", "label"])
        for s, y in zip(data.scores, data.labels):
            writer.writerow([repr(float(s)), int(y)])


def read_scores_csv(path: str | os.PathLike) -> LabeledScores:
    """Parse a ``score,label`` CSV; raises ``ValueError`` on malformed input."""
    text = Path(path).read_text()
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["score", "label"]:
        raise ValueError(f"{path}: expected header 'score,label', got {reader.fieldnames}")
    scores, labels = [], []
    for lineno, row in enumerate(reader, start=2):
        try:
            score = float(row["score"])
            label = int(row["label"])
        except (TypeError, ValueError):
            raise ValueError(f"{path}:{lineno}: malformed row {row}") from None
        if label not in (0, 1) or not np.isfinite(score):
            raise ValueError(f"{path}:{lineno}: label must be 0/1 and score finite")
        scores.append(score)
        labels.append(label)
    return LabeledScores(np.array(scores), np.array(labels, dtype=np.int64))
