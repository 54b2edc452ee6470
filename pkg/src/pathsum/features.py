"""On-disk frame-feature format (FVEC v1 binary, CSV for fixtures).

Binary layout, little-endian:

    magic "FVEC" | version u16 = 1 | n_frames u32 | dim u32 | fps f32 |
    n_frames * dim float32 values, row-major

The CSV variant starts with a ``# fps=<value>`` header line followed by one
comma-separated row per frame.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from pathsum.errors import FormatError

MAGIC = b"FVEC"
VERSION = 1
_HEADER = struct.Struct("<4sHIIf")


@dataclass(frozen=True)
class FeatureMatrix:
    """N frame feature vectors, one row per frame, plus the sampling rate."""

    data: np.ndarray  # (n_frames, dim) float32
    fps: float

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float32)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"feature matrix must be 2-D and non-empty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("feature matrix contains non-finite entries")
        if not (self.fps > 0 and math.isfinite(self.fps)):
            raise ValueError(f"fps must be positive and finite, got {self.fps}")
        object.__setattr__(self, "data", arr)

    @property
    def n_frames(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FeatureMatrix):
            return NotImplemented
        return (
            self.data.shape == other.data.shape
            and np.array_equal(self.data, other.data)
            and np.float32(self.fps) == np.float32(other.fps)
        )


def write_features(m: FeatureMatrix, path, format: str = "binary") -> None:
    """Write a FeatureMatrix to disk in the given format ("binary" or "csv")."""
    path = Path(path)
    if format == "binary":
        header = _HEADER.pack(MAGIC, VERSION, m.n_frames, m.dim, m.fps)
        payload = np.ascontiguousarray(m.data, dtype="<f4").tobytes()
        path.write_bytes(header + payload)
    elif format == "csv":
        lines = [f"# fps={m.fps!r}"]
        for row in m.data:
            lines.append(",".join(repr(float(v)) for v in row))
        path.write_text("\n".join(lines) + "\n")
    else:
        raise ValueError(f"unknown format {format!r}")


def load_features(path, format: str = "binary") -> FeatureMatrix:
    """Load a FeatureMatrix written by :func:`write_features`.

    Raises FormatError naming the byte offset (binary) or row (CSV) on any
    structural problem.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"feature file not found: {path}")
    if format == "binary":
        return _load_binary(path)
    if format == "csv":
        return _load_csv(path)
    raise ValueError(f"unknown format {format!r}")


def _load_binary(path: Path) -> FeatureMatrix:
    raw = path.read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: truncated header, {len(raw)} bytes < {_HEADER.size}")
    magic, version, n_frames, dim, fps = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r} at byte offset 0")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version} at byte offset 4")
    if n_frames < 1 or dim < 1:
        raise FormatError(f"{path}: invalid shape {n_frames}x{dim} in header")
    expected = n_frames * dim * 4
    got = len(raw) - _HEADER.size
    if got != expected:
        raise FormatError(
            f"{path}: payload is {got} bytes from offset {_HEADER.size}, "
            f"header declares {expected}"
        )
    data = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(n_frames, dim)
    if not np.all(np.isfinite(data)):
        bad = int(np.flatnonzero(~np.isfinite(data.ravel()))[0])
        raise FormatError(f"{path}: non-finite value at byte offset {_HEADER.size + 4 * bad}")
    if not (fps > 0 and math.isfinite(fps)):
        raise FormatError(f"{path}: invalid fps {fps} at byte offset 14")
    return FeatureMatrix(data=data.copy(), fps=float(fps))


def _load_csv(path: Path) -> FeatureMatrix:
    lines = path.read_text().splitlines()
    if not lines or not lines[0].startswith("# fps="):
        raise FormatError(f"{path}: row 1 must be a '# fps=<value>' header")
    try:
        fps = float(lines[0].split("=", 1)[1])
    except ValueError as exc:
        raise FormatError(f"{path}: row 1 has unparseable fps") from exc
    rows = []
    dim = None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if dim is None:
            dim = len(fields)
        elif len(fields) != dim:
            raise FormatError(f"{path}: row {lineno} has {len(fields)} fields, expected {dim}")
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            raise FormatError(f"{path}: row {lineno} has an unparseable value") from exc
    if not rows:
        raise FormatError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=np.float32)
    if not np.all(np.isfinite(data)):
        bad_row = int(np.flatnonzero(~np.isfinite(data).all(axis=1))[0]) + 2
        raise FormatError(f"{path}: non-finite value in row {bad_row}")
    return FeatureMatrix(data=data, fps=fps)
