"""Complex-to-non-negative detectors for STFT values.

Besides the usual magnitude square, the complex-clipping family keeps
``|X|**2`` only inside a double cone of half-angle 45 degrees in the complex
plane and sets everything else to zero:

* ``clip``: cone around the real axis, ``|Im X| <= |Re X|`` (boundary kept)
* ``clip_rotated``: cone around the imaginary axis, ``|Im X| > |Re X|``
* ``clip_angle``: cone around the axis at angle ``phi``

``clip`` and ``clip_rotated`` partition the plane, so their outputs sum to
the magnitude square exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EmptyMatrix, InvalidFloor, NonFiniteAngle
from .stft import StftMatrix, StftParams

DETECTOR_KINDS = ("magsq", "clip", "clip_rotated", "clip_angle")
DEFAULT_DB_FLOOR = -80.0


@dataclass(frozen=True)
class DetectorSpec:
    kind: str = "clip"
    phi: float = 0.0

    def __post_init__(self):
        if self.kind not in DETECTOR_KINDS:
            raise ValueError(f"unknown detector {self.kind!r}; expected one of {DETECTOR_KINDS}")
        if not math.isfinite(self.phi):
            raise NonFiniteAngle(f"cone angle must be finite, got {self.phi}")

    @classmethod
    def parse(cls, text: str) -> "DetectorSpec":
        """Parse the CLI form: ``magsq``, ``clip``, ``clip-rot`` or ``clip-angle=<radians>``."""
        text = text.strip()
        if text.startswith("clip-angle=") or text.startswith("clip_angle="):
            value = text.split("=", 1)[1]
            try:
                phi = float(value)
            except ValueError:
                raise ValueError(f"bad cone angle {value!r}") from None
            return cls("clip_angle", phi)
        aliases = {
            "magsq": "magsq",
            "clip": "clip",
            "clip-rot": "clip_rotated",
            "clip_rot": "clip_rotated",
            "clip-rotated": "clip_rotated",
            "clip_rotated": "clip_rotated",
        }
        if text not in aliases:
            raise ValueError(f"unknown detector {text!r}")
        return cls(aliases[text])

    @property
    def label(self) -> str:
        if self.kind == "clip_angle":
            return f"clip-angle={self.phi!r}"
        return {"clip_rotated": "clip-rot"}.get(self.kind, self.kind)

    def to_json(self) -> dict:
        return {"kind": self.kind, "phi": self.phi}


@dataclass(frozen=True, eq=False)
class Spectrogram:
    values: np.ndarray
    detector: DetectorSpec
    params: StftParams | None = None
    sample_rate: int = 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True, eq=False)
class SpectrogramDb:
    values: np.ndarray
    floor: float
    detector: DetectorSpec
    params: StftParams | None = None
    sample_rate: int = 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


StftLike = Union[StftMatrix, np.ndarray]


def _unpack(X: StftLike) -> tuple[np.ndarray, StftParams | None, int]:
    if isinstance(X, StftMatrix):
        return X.values, X.params, X.sample_rate
    return np.asarray(X, dtype=np.complex128), None, 0


def _power(z: np.ndarray) -> np.ndarray:
    re, im = z.real, z.imag
    return re * re + im * im


def real_cone(z: np.ndarray) -> np.ndarray:
    """Boolean mask of ``|Im z| <= |Re z|``."""
    return np.abs(z.imag) <= np.abs(z.real)


def _wrap(values, X, spec) -> Spectrogram:
    _, params, rate = _unpack(X)
    return Spectrogram(values, spec, params, rate)


def detect_magsq(X: StftLike) -> Spectrogram:
    z, _, _ = _unpack(X)
    return _wrap(_power(z), X, DetectorSpec("magsq"))


def detect_clip(X: StftLike) -> Spectrogram:
    z, _, _ = _unpack(X)
    p = _power(z)
    return _wrap(np.where(real_cone(z), p, 0.0), X, DetectorSpec("clip"))


def detect_clip_rotated(X: StftLike) -> Spectrogram:
    z, _, _ = _unpack(X)
    p = _power(z)
    return _wrap(np.where(real_cone(z), 0.0, p), X, DetectorSpec("clip_rotated"))


def _unit_rotation(phi: float) -> complex:
    # e^{-j phi}; phi is reduced mod pi (the cone is symmetric under z -> -z)
    # and cos/sin are snapped at the axes so phi = 0 and pi/2 rotate exactly.
    r = math.fmod(phi, math.pi)
    if r < 0:
        r += math.pi
    c, s = math.cos(r), math.sin(r)
    if abs(c) < 1e-15:
        c = 0.0
    if abs(s) < 1e-15:
        s = 0.0
    if c == 0.0:
        s = 1.0
    elif s == 0.0:
        c = 1.0
    return complex(c, -s)


def detect_clip_angle(X: StftLike, phi: float) -> Spectrogram:
    """Clip with the cone axis rotated to angle ``phi`` (radians)."""
    if not math.isfinite(phi):
        raise NonFiniteAngle(f"cone angle must be finite, got {phi}")
    z, _, _ = _unpack(X)
    rot = _unit_rotation(phi)
    # real-arithmetic rotation so that an exact unit factor leaves z untouched
    zr = z.real * rot.real - z.imag * rot.imag
    zi = z.real * rot.imag + z.imag * rot.real
    keep = np.abs(zi) <= np.abs(zr)
    return _wrap(np.where(keep, _power(z), 0.0), X, DetectorSpec("clip_angle", phi))


def detect(X: StftLike, spec: DetectorSpec) -> Spectrogram:
    if spec.kind == "magsq":
        return detect_magsq(X)
    if spec.kind == "clip":
        return detect_clip(X)
    if spec.kind == "clip_rotated":
        return detect_clip_rotated(X)
    return detect_clip_angle(X, spec.phi)


def to_db(Y: Spectrogram | np.ndarray, floor: float = DEFAULT_DB_FLOOR) -> SpectrogramDb:
    """``max(10 log10 y, floor)``; zero entries map to ``floor`` exactly."""
    if not (math.isfinite(floor) and floor < 0):
        raise InvalidFloor(f"dB floor must be finite and negative, got {floor}")
    if isinstance(Y, Spectrogram):
        y, det, params, rate = Y.values, Y.detector, Y.params, Y.sample_rate
    else:
        y, det, params, rate = np.asarray(Y, dtype=np.float64), DetectorSpec("magsq"), None, 0
    threshold = 10.0 ** (floor / 10.0)
    out = np.full(y.shape, float(floor))
    above = y > threshold
    out[above] = np.maximum(10.0 * np.log10(y[above]), floor)
    return SpectrogramDb(out, float(floor), det, params, rate)


def support_fraction(Y: Spectrogram | np.ndarray) -> float:
    """Fraction of strictly positive entries."""
    y = Y.values if isinstance(Y, Spectrogram) else np.asarray(Y)
    if y.size == 0:
        raise EmptyMatrix("support fraction of an empty matrix")
    return float(np.count_nonzero(y > 0)) / y.size
