"""Complex-clipping spectrogram detectors and the tools around them."""

from .analysis import ConditionReport, SingularSpectrum, condition_report, numerical_rank, singular_values
from .detector import (
    DetectorSpec,
    Spectrogram,
    SpectrogramDb,
    detect,
    detect_clip,
    detect_clip_angle,
    detect_clip_rotated,
    detect_magsq,
    support_fraction,
    to_db,
)
from .signal_io import IngestConfig, InputSignal, condition_length, estimate_snr, gate_by_snr, read_wav
from .stft import StftMatrix, StftParams, WindowSpec, dft, make_window, num_frames, stft

__version__ = "0.1.0"

__all__ = [
    "ConditionReport", "DetectorSpec", "IngestConfig", "InputSignal", "SingularSpectrum",
    "Spectrogram", "SpectrogramDb", "StftMatrix", "StftParams", "WindowSpec",
    "condition_length", "condition_report", "detect", "detect_clip", "detect_clip_angle",
    "detect_clip_rotated", "detect_magsq", "dft", "estimate_snr", "gate_by_snr", "make_window",
    "num_frames", "numerical_rank", "read_wav", "singular_values", "stft", "support_fraction", "to_db",
]
