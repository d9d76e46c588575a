"""Audio ingestion, length conditioning and SNR gating."""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.io import wavfile

from .errors import MalformedWav, SilentSignal, TooShort, UnsupportedEncoding

# Noise power below this is treated as digital silence.
SILENCE_POWER = 1e-12


@dataclass(frozen=True, eq=False)
class InputSignal:
    """A mono real-valued recording at a fixed sample rate."""

    samples: np.ndarray
    sample_rate: int
    source_id: str = ""

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.float64).ravel()
        if samples.size == 0:
            raise ValueError("signal has no samples")
        if not np.all(np.isfinite(samples)):
            raise ValueError("signal contains non-finite samples")
        if not self.sample_rate > 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    def with_samples(self, samples: np.ndarray) -> "InputSignal":
        return InputSignal(samples, self.sample_rate, self.source_id)


@dataclass(frozen=True)
class IngestConfig:
    """Preprocessing knobs.

    ``snr_frame_length`` is in samples; ``None`` means 25 ms at the signal's
    own sample rate.
    """

    target_duration: float = 4.0
    snr_threshold: float = 15.0
    snr_frame_length: int | None = None
    noise_percentile: float = 0.1
    signal_percentile: float = 0.9

    def __post_init__(self):
        if not self.target_duration > 0:
            raise ValueError("target_duration must be positive")
        if not (0 < self.noise_percentile < self.signal_percentile < 1):
            raise ValueError("need 0 < noise_percentile < signal_percentile < 1")
        if self.snr_frame_length is not None and self.snr_frame_length < 1:
            raise ValueError("snr_frame_length must be at least 1 sample")

    def frame_length(self, sample_rate: int) -> int:
        if self.snr_frame_length is not None:
            return int(self.snr_frame_length)
        return max(1, round(0.025 * sample_rate))


def read_wav(path: str | os.PathLike) -> InputSignal:
    """Read a PCM WAV file into an :class:`InputSignal`.

    16-bit integer data is scaled by 1/32768; 32-bit float data passes through
    unscaled. Multichannel files are averaged to mono.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", wavfile.WavFileWarning)
            sample_rate, data = wavfile.read(path)
    except wavfile.WavFileWarning as exc:
        raise MalformedWav(f"{path}: {exc}") from exc
    except ValueError as exc:
        msg = str(exc)
        if "Unknown wave file format" in msg or "Unsupported bit depth" in msg:
            raise UnsupportedEncoding(f"{path}: {msg}") from exc
        raise MalformedWav(f"{path}: {msg}") from exc
    except EOFError as exc:
        raise MalformedWav(f"{path}: truncated file") from exc
    except Exception as exc:  # scipy surfaces some header corruption as arbitrary errors
        raise MalformedWav(f"{path}: unreadable WAV ({type(exc).__name__}: {exc})") from exc

    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.float32:
        samples = data.astype(np.float64)
    else:
        raise UnsupportedEncoding(
            f"{path}: only 16-bit PCM and 32-bit float are supported, got {data.dtype}"
        )
    if samples.ndim > 1:
        samples = samples.mean(axis=1)
    if samples.size == 0:
        raise MalformedWav(f"{path}: no audio frames")
    if not np.all(np.isfinite(samples)):
        raise MalformedWav(f"{path}: non-finite samples")
    return InputSignal(samples, int(sample_rate), path.stem)


def write_wav(path: str | os.PathLike, signal: InputSignal, encoding: str = "float32") -> None:
    """Write ``signal`` as a mono WAV file (``float32`` or ``int16``)."""
    if encoding == "float32":
        data = signal.samples.astype(np.float32)
    elif encoding == "int16":
        data = np.clip(np.round(signal.samples * 32768.0), -32768, 32767).astype(np.int16)
    else:
        raise ValueError(f"unknown encoding {encoding!r}")
    wavfile.write(path, signal.sample_rate, data)


def condition_length(signal: InputSignal, target_duration: float) -> InputSignal:
    """Right-pad with zeros or truncate to exactly ``target_duration`` seconds."""
    if not target_duration > 0:
        raise ValueError("target_duration must be positive")
    target = round(target_duration * signal.sample_rate)
    x = signal.samples
    if x.size == target:
        return signal
    if x.size > target:
        return signal.with_samples(x[:target])
    out = np.zeros(target)
    out[: x.size] = x
    return signal.with_samples(out)


def frame_powers(samples: np.ndarray, frame_length: int) -> np.ndarray:
    n_frames = samples.size // frame_length
    frames = samples[: n_frames * frame_length].reshape(n_frames, frame_length)
    return np.mean(frames * frames, axis=1)


def estimate_snr(signal: InputSignal, config: IngestConfig = IngestConfig()) -> float:
    """Frame-power quantile SNR estimate in dB.

    Non-overlapping frames are reduced to their mean power; the ratio of the
    ``signal_percentile`` and ``noise_percentile`` quantiles gives the SNR.
    """
    frame_length = config.frame_length(signal.sample_rate)
    if len(signal) < 2 * frame_length:
        raise TooShort(
            f"{signal.source_id or 'signal'}: {len(signal)} samples, "
            f"need at least {2 * frame_length}"
        )
    powers = frame_powers(signal.samples, frame_length)
    noise = float(np.quantile(powers, config.noise_percentile))
    if noise < SILENCE_POWER:
        raise SilentSignal(f"{signal.source_id or 'signal'}: noise power {noise:.3g} is silent")
    level = float(np.quantile(powers, config.signal_percentile))
    return 10.0 * math.log10(level / noise)


@dataclass(frozen=True, eq=False)
class GateDecision:
    signal: InputSignal
    snr_db: float | None
    kept: bool
    reason: str = field(default="ok")

    def to_json(self) -> dict:
        return {
            "source_id": self.signal.source_id,
            "snr_db": self.snr_db,
            "kept": self.kept,
            "reason": self.reason,
        }


def screen(signals: Iterable[InputSignal], config: IngestConfig = IngestConfig()) -> list[GateDecision]:
    """Evaluate the SNR gate on every signal, in input order."""
    decisions = []
    for sig in signals:
        try:
            snr = estimate_snr(sig, config)
        except SilentSignal:
            decisions.append(GateDecision(sig, None, False, "silent"))
            continue
        except TooShort:
            decisions.append(GateDecision(sig, None, False, "too_short"))
            continue
        if snr > config.snr_threshold:
            decisions.append(GateDecision(sig, snr, True, "ok"))
        else:
            decisions.append(GateDecision(sig, snr, False, "below_threshold"))
    return decisions


def gate_by_snr(
    signals: Sequence[InputSignal], config: IngestConfig = IngestConfig()
) -> tuple[list[GateDecision], list[GateDecision]]:
    """Split signals into (kept, rejected) by estimated SNR, order preserved.

    A signal is kept when its estimate is strictly above ``snr_threshold``.
    Silent or too-short signals are rejected with a reason tag rather than
    raising.
    """
    decisions = screen(signals, config)
    kept = [d for d in decisions if d.kept]
    rejected = [d for d in decisions if not d.kept]
    return kept, rejected


def gate_report(decisions: Iterable[GateDecision]) -> list[dict]:
    return [d.to_json() for d in decisions]
