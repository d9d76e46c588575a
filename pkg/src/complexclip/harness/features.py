"""Flattened dB spectrogram features."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..detector import DEFAULT_DB_FLOOR, DetectorSpec, detect, to_db
from ..errors import InconsistentSignals
from ..signal_io import InputSignal
from ..stft import StftParams, num_frames, stft


def feature_spectrogram(signal: InputSignal, params: StftParams, det: DetectorSpec, floor: float):
    return to_db(detect(stft(signal, params), det), floor)


def extract_features(
    signals: Sequence[InputSignal],
    params: StftParams = StftParams(),
    det: DetectorSpec = DetectorSpec("clip"),
    floor: float = DEFAULT_DB_FLOOR,
) -> np.ndarray:
    """One row per signal: the row-major flattened dB spectrogram.

    All signals must share length and sample rate; the column count is
    ``(K/2) * (M+1)``.
    """
    if not signals:
        raise InconsistentSignals("no signals given")
    length, rate = len(signals[0]), signals[0].sample_rate
    for s in signals:
        if len(s) != length or s.sample_rate != rate:
            raise InconsistentSignals(
                f"{s.source_id or 'signal'}: length {len(s)} @ {s.sample_rate} Hz, "
                f"expected {length} @ {rate} Hz"
            )
    cols = params.n_bins * num_frames(length, params)
    out = np.empty((len(signals), cols))
    for i, s in enumerate(signals):
        out[i] = feature_spectrogram(s, params, det, floor).values.ravel()
    return out
