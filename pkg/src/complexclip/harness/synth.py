"""Seeded synthetic two-class corpus with reverberation-style echoes.

Class 1 is a burst of three exponentially damped sinusoids; class 0 is noise
band-limited to the same 200-1200 Hz range and shaped by the same kind of
decaying envelope, normalized to the same burst power. Every signal then
passes through a two-tap echo ``h = delta[n] + g delta[n - d]`` and gets white
Gaussian noise at a fixed SNR.

Randomness comes from the Philox-4x64 counter-based generator; signal ``i``
of a corpus with seed ``s`` draws from the stream keyed ``(s, i)``, so any
signal can be regenerated on its own and the result does not depend on
generation order.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..errors import InvalidConfig
from ..signal_io import InputSignal, write_wav

BAND_HZ = (200.0, 1200.0)
PEAK_LEVEL = 0.9
_MASK64 = (1 << 64) - 1


def philox(seed: int, stream: int) -> np.random.Generator:
    """Generator on the Philox stream keyed ``(seed, stream)``."""
    key = np.array([seed & _MASK64, stream & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class SynthConfig:
    n_per_class: int = 100
    sample_rate: int = 8000
    duration: float = 4.0
    echo_delay_range: tuple[int, int] = (80, 800)
    echo_gain_range: tuple[float, float] = (0.6, 0.9)
    noise_snr_db: float = 20.0
    seed: int = 0
    burst_decay_range: tuple[float, float] = (0.15, 0.4)

    def __post_init__(self):
        object.__setattr__(self, "echo_delay_range", tuple(int(v) for v in self.echo_delay_range))
        object.__setattr__(self, "echo_gain_range", tuple(float(v) for v in self.echo_gain_range))
        object.__setattr__(self, "burst_decay_range", tuple(float(v) for v in self.burst_decay_range))
        self.validate()

    def validate(self) -> None:
        if self.n_per_class < 1:
            raise InvalidConfig("n_per_class must be >= 1")
        if self.sample_rate <= 0:
            raise InvalidConfig("sample_rate must be positive")
        if not self.duration > 0:
            raise InvalidConfig("duration must be positive")
        if self.sample_rate < 2 * BAND_HZ[1]:
            raise InvalidConfig(f"sample_rate must be at least {2 * BAND_HZ[1]:g} Hz")
        lo, hi = self.echo_gain_range
        if not (0 <= lo <= hi < 1):
            raise InvalidConfig("echo gains must satisfy 0 <= low <= high < 1")
        dlo, dhi = self.echo_delay_range
        if not (1 <= dlo <= dhi < self.n_samples):
            raise InvalidConfig("echo delays must satisfy 1 <= low <= high < signal length")
        tlo, thi = self.burst_decay_range
        if not (0 < tlo <= thi):
            raise InvalidConfig("burst decay constants must be positive")
        if not np.isfinite(self.noise_snr_db):
            raise InvalidConfig("noise_snr_db must be finite")
        if not 0 <= self.seed <= _MASK64:
            raise InvalidConfig("seed must be an unsigned 64-bit integer")

    @property
    def n_samples(self) -> int:
        return round(self.duration * self.sample_rate)

    def to_json(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    @classmethod
    def from_json(cls, data: dict) -> "SynthConfig":
        try:
            return cls(**data)
        except TypeError as exc:
            raise InvalidConfig(f"bad synth config: {exc}") from exc


def _band_noise(rng: np.random.Generator, n: int, rate: int) -> np.ndarray:
    spec = np.fft.rfft(rng.standard_normal(n))
    freqs = np.fft.rfftfreq(n, 1.0 / rate)
    spec[(freqs < BAND_HZ[0]) | (freqs > BAND_HZ[1])] = 0.0
    return np.fft.irfft(spec, n)


def synth_signal(config: SynthConfig, index: int, label: int) -> tuple[InputSignal, dict]:
    """Generate signal ``index`` of the corpus; returns the signal and its draw parameters."""
    rng = philox(config.seed, index)
    n, rate = config.n_samples, config.sample_rate
    t = np.arange(n) / rate

    onset = rng.uniform(0.05, 0.5) * config.duration
    tau = rng.uniform(*config.burst_decay_range)
    envelope = np.where(t >= onset, np.exp(-(t - onset) / tau), 0.0)
    active = envelope > 0.01

    params: dict = {"label": label, "onset_s": onset, "decay_s": tau}
    if label == 1:
        burst = np.zeros(n)
        tones = []
        for _ in range(3):
            freq = rng.uniform(*BAND_HZ)
            amp = rng.uniform(0.5, 1.0)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            burst += amp * np.sin(2.0 * np.pi * freq * t + phase)
            tones.append({"freq_hz": freq, "amp": amp, "phase": phase})
        params["tones"] = tones
    else:
        burst = _band_noise(rng, n, rate)
    burst = burst * envelope
    burst /= np.sqrt(np.mean(burst[active] ** 2))

    gain = rng.uniform(*config.echo_gain_range)
    delay = int(rng.integers(config.echo_delay_range[0], config.echo_delay_range[1] + 1))
    echoed = burst.copy()
    echoed[delay:] += gain * burst[:-delay]
    params.update(echo_gain=gain, echo_delay=delay)

    power = np.mean(echoed[active] ** 2)
    noise_sd = np.sqrt(power / 10.0 ** (config.noise_snr_db / 10.0))
    x = echoed + noise_sd * rng.standard_normal(n)
    x *= PEAK_LEVEL / np.max(np.abs(x))

    source_id = f"synth-{config.seed}-{index:04d}"
    params["source_id"] = source_id
    return InputSignal(x, rate, source_id), params


def synth_dataset(config: SynthConfig) -> list[tuple[InputSignal, int]]:
    """Balanced labeled corpus of ``2 * n_per_class`` signals, labels alternating 0, 1."""
    config.validate()
    out = []
    for i in range(2 * config.n_per_class):
        sig, _ = synth_signal(config, i, i % 2)
        out.append((sig, i % 2))
    return out


def write_corpus(config: SynthConfig, out_dir: str | os.PathLike) -> Path:
    """Write the corpus as float32 WAV files plus ``manifest.json``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for i in range(2 * config.n_per_class):
        sig, params = synth_signal(config, i, i % 2)
        name = f"{sig.source_id}.wav"
        write_wav(out_dir / name, sig)
        entries.append({"file": name, **params})
    manifest = {"generator": "philox4x64", "config": config.to_json(), "signals": entries}
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path
