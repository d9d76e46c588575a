"""Binary feature files: ``CSPC`` magic, version byte, JSON header, f32 payload.

Layout::

    b"CSPC" | u8 version (=1) | u32 LE header length | UTF-8 JSON header |
    rows * cols float32 LE values, row-major
"""

from __future__ import annotations

import json
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAGIC = b"CSPC"
VERSION = 1
HEADER_KEYS = (
    "rows", "cols", "dtype", "detector", "phi", "fft_size", "hop",
    "window", "sample_rate", "db_floor", "source_id",
)


class FeatureFileError(ValueError):
    pass


@dataclass(eq=False)
class FeatureFile:
    values: np.ndarray
    header: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 2:
            raise FeatureFileError(f"feature matrix must be 2-D, got shape {values.shape}")
        self.values = values.astype("<f4", copy=False)
        self.header = {**self.header, "rows": int(values.shape[0]), "cols": int(values.shape[1]), "dtype": "f32"}

    def to_bytes(self) -> bytes:
        header = json.dumps(self.header, sort_keys=True, separators=(",", ":")).encode("utf-8")
        payload = np.ascontiguousarray(self.values, dtype="<f4").tobytes()
        return MAGIC + struct.pack("<BI", VERSION, len(header)) + header + payload

    @classmethod
    def from_bytes(cls, blob: bytes) -> "FeatureFile":
        if len(blob) < 9 or blob[:4] != MAGIC:
            raise FeatureFileError("not a feature file (bad magic)")
        version, hlen = struct.unpack_from("<BI", blob, 4)
        if version != VERSION:
            raise FeatureFileError(f"unsupported feature file version {version}")
        start = 9 + hlen
        if len(blob) < start:
            raise FeatureFileError("truncated header")
        try:
            header = json.loads(blob[9:start].decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise FeatureFileError(f"bad header: {exc}") from exc
        try:
            rows, cols = int(header["rows"]), int(header["cols"])
        except (KeyError, TypeError, ValueError):
            raise FeatureFileError("header lacks rows/cols") from None
        if header.get("dtype") != "f32":
            raise FeatureFileError(f"unsupported dtype {header.get('dtype')!r}")
        payload = blob[start:]
        if len(payload) != rows * cols * 4:
            raise FeatureFileError(f"payload is {len(payload)} bytes, header implies {rows * cols * 4}")
        values = np.frombuffer(payload, dtype="<f4").reshape(rows, cols).copy()
        return cls(values, header)

    def write(self, path: str | os.PathLike) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def read(cls, path: str | os.PathLike) -> "FeatureFile":
        return cls.from_bytes(Path(path).read_bytes())

    @property
    def db_floor(self) -> float | None:
        v = self.header.get("db_floor")
        return None if v is None else float(v)
