"""Short-time Fourier transform built on an in-house radix-2 FFT.

The output keeps the non-negative frequency bins ``0 .. K/2 - 1`` only, so a
signal of ``L`` samples maps to a ``(K/2) x (M+1)`` complex matrix with
``M + 1 = (L - K) // H + 1`` frames. Trailing samples that do not fill a
whole frame are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

import numpy as np

from .errors import InvalidLength, SignalTooShort
from .signal_io import InputSignal

WindowKind = Literal["rectangular", "hann", "hamming"]
WINDOW_KINDS = ("rectangular", "hann", "hamming")


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True, eq=False)
class WindowSpec:
    kind: str
    length: int
    coefficients: np.ndarray


def make_window(kind: str, length: int) -> WindowSpec:
    """Periodic analysis window (denominator ``K``, not ``K - 1``)."""
    if length < 2:
        raise InvalidLength(f"window length must be >= 2, got {length}")
    m = np.arange(length)
    if kind == "rectangular":
        w = np.ones(length)
    elif kind == "hann":
        w = 0.5 * (1.0 - np.cos(2.0 * np.pi * m / length))
    elif kind == "hamming":
        w = 0.54 - 0.46 * np.cos(2.0 * np.pi * m / length)
    else:
        raise ValueError(f"unknown window kind {kind!r}; expected one of {WINDOW_KINDS}")
    # cos rounding can leave values a hair outside [0, 1]
    w = np.clip(w, 0.0, 1.0)
    w.setflags(write=False)
    return WindowSpec(kind, length, w)


@dataclass(frozen=True)
class StftParams:
    fft_size: int = 512
    hop: int = 128
    window_kind: str = "hann"

    def __post_init__(self):
        if self.fft_size < 2 or not _is_pow2(self.fft_size):
            raise InvalidLength(f"fft_size must be a power of two >= 2, got {self.fft_size}")
        if not 1 <= self.hop <= self.fft_size:
            raise ValueError(f"hop must be in [1, fft_size], got {self.hop}")
        if self.window_kind not in WINDOW_KINDS:
            raise ValueError(f"unknown window kind {self.window_kind!r}")

    @cached_property
    def window(self) -> WindowSpec:
        return make_window(self.window_kind, self.fft_size)

    @property
    def n_bins(self) -> int:
        return self.fft_size // 2

    def to_json(self) -> dict:
        return {"fft_size": self.fft_size, "hop": self.hop, "window": self.window_kind}


def fft_rows(x: np.ndarray) -> np.ndarray:
    """Radix-2 decimation-in-time FFT along the last axis.

    Iterative form: level ``r`` holds, for each offset ``j`` in the stride-``c``
    decimation, the ``r``-point DFT of ``x[j], x[j+c], ...``; two such halves
    are merged with one butterfly per level, ``log2(K)`` levels in all.
    """
    x = np.asarray(x, dtype=np.complex128)
    K = x.shape[-1]
    if not _is_pow2(K):
        raise InvalidLength(f"transform length must be a power of two, got {K}")
    lead = x.shape[:-1]
    X = x.reshape(lead + (1, K))
    r = 1
    while r < K:
        c = X.shape[-1]
        even = X[..., : c // 2]
        odd = X[..., c // 2 :]
        twiddle = np.exp(-1j * np.pi * np.arange(r) / r)[:, None]
        t = twiddle * odd
        X = np.concatenate([even + t, even - t], axis=-2)
        r *= 2
    return X.reshape(lead + (K,))


def dft(frame: np.ndarray) -> np.ndarray:
    """Discrete Fourier transform of one power-of-two length frame."""
    frame = np.asarray(frame)
    if frame.ndim != 1:
        raise ValueError("dft expects a 1-D frame")
    return fft_rows(frame)


def num_frames(signal_length: int, params: StftParams) -> int:
    K = params.fft_size
    if signal_length < K:
        raise SignalTooShort(f"signal has {signal_length} samples, fft_size is {K}")
    return (signal_length - K) // params.hop + 1


def frame_matrix(samples: np.ndarray, params: StftParams) -> np.ndarray:
    """Windowed frames, shape ``(M+1, K)``; row ``n`` is ``w[m] * x[m + nH]``."""
    samples = np.asarray(samples, dtype=np.float64)
    n = num_frames(samples.size, params)
    frames = np.lib.stride_tricks.sliding_window_view(samples, params.fft_size)
    frames = frames[:: params.hop][:n]
    return frames * params.window.coefficients


def frame_spectra(samples: np.ndarray, params: StftParams) -> np.ndarray:
    """Full ``K``-point spectrum of every frame, shape ``(M+1, K)``."""
    return fft_rows(frame_matrix(samples, params))


@dataclass(frozen=True, eq=False)
class StftMatrix:
    """Complex STFT with rows = frequency bins and columns = frames."""

    values: np.ndarray
    params: StftParams
    sample_rate: int = field(default=0)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def stft(signal: InputSignal | np.ndarray, params: StftParams = StftParams()) -> StftMatrix:
    """STFT of a real signal, shape ``(K/2, M+1)``."""
    if isinstance(signal, InputSignal):
        samples, rate = signal.samples, signal.sample_rate
    else:
        samples, rate = np.asarray(signal, dtype=np.float64), 0
    spectra = frame_spectra(samples, params)
    values = np.ascontiguousarray(spectra[:, : params.n_bins].T)
    return StftMatrix(values, params, rate)
