"""Utterance encoding: feature matrices, prosodic codes, projection, IO.

An utterance becomes an N x 20 binary feature matrix plus two parallel
code vectors: tone codes (0 none, 1..4 lexical tones, 5 neutral) and
prosody codes (0 none, 1 word boundary, 2 phrase boundary, 3
utterance-final).  Projection maps each segment to a 256-dimensional
dense row: 192 from the feature bits, 32 from the tone embedding, 32
from the prosody embedding.

Serialized forms:

* ``jsonl`` — one JSON object per segment, human-inspectable.
* ``rawbin`` — deterministic little-endian binary: magic ``PHF1``,
  u16 version, u8 kind (0 = features+codes, 1 = projected), u32 row
  count, u32 column count; kind-0 payload is bit-packed feature rows
  (LSB-first, padded to whole bytes) followed by the tone and prosody
  code bytes; kind-1 payload is row-major float32.
"""
from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    ConstraintViolationError,
    SchemaError,
    SerializationError,
    ShapeMismatchError,
)
from .features import FEATURE_COUNT, EXCLUSION_PAIRS, Feature, bundle_to_vector
from .inventory import LookupMode
from .transcribe import SegmentSequence

TONE_COUNT = 6        # 0 none, 1..4 lexical, 5 neutral
PROSODY_COUNT = 4     # 0 none, 1 word, 2 phrase, 3 utterance-final
FEATURE_DIM = 192
EMBED_DIM = 32
PROJECTED_DIM = FEATURE_DIM + 2 * EMBED_DIM  # 256

MAGIC = b"PHF1"
FORMAT_VERSION = 1
_KIND_CODES = 0
_KIND_PROJECTED = 1
_HEADER = struct.Struct("<4sHBII")

NEUTRAL_TONE = 5


def _validate_rows(features: np.ndarray) -> None:
    for a, b in EXCLUSION_PAIRS:
        bad = np.flatnonzero(features[:, a] & features[:, b])
        if bad.size:
            raise ConstraintViolationError(
                f"row {int(bad[0])} sets mutually exclusive bits {a.name}+{b.name}",
                pairs=[(a, b)],
            )


@dataclass
class EncodedUtterance:
    """Feature matrix plus tone/prosody code vectors for one utterance.

    ``symbols`` and ``langs`` are optional provenance (surface symbol and
    language per row).  They travel through jsonl but not rawbin, so they
    are excluded from equality.
    """

    features: np.ndarray  # (N, 20) uint8
    tones: np.ndarray     # (N,) uint8
    prosody: np.ndarray   # (N,) uint8
    symbols: list[str] | None = field(default=None, compare=False)
    langs: list[str] | None = field(default=None, compare=False)

    def __post_init__(self):
        self.features = np.ascontiguousarray(self.features, dtype=np.uint8)
        self.tones = np.ascontiguousarray(self.tones, dtype=np.uint8)
        self.prosody = np.ascontiguousarray(self.prosody, dtype=np.uint8)
        n = self.features.shape[0] if self.features.ndim == 2 else -1
        if self.features.ndim != 2 or self.features.shape[1] != FEATURE_COUNT:
            raise ShapeMismatchError(
                f"feature matrix must be (N, {FEATURE_COUNT}), got {self.features.shape}"
            )
        if self.tones.shape != (n,) or self.prosody.shape != (n,):
            raise ShapeMismatchError("tones and prosody must be length-N vectors")
        if not np.isin(self.features, (0, 1)).all():
            raise ConstraintViolationError("feature matrix entries must be 0 or 1")
        _validate_rows(self.features)
        if self.tones.size and self.tones.max() >= TONE_COUNT:
            raise ConstraintViolationError(f"tone codes must be < {TONE_COUNT}")
        if self.prosody.size and self.prosody.max() >= PROSODY_COUNT:
            raise ConstraintViolationError(f"prosody codes must be < {PROSODY_COUNT}")
        for meta in (self.symbols, self.langs):
            if meta is not None and len(meta) != n:
                raise ShapeMismatchError("metadata length must match row count")

    def __eq__(self, other):
        if not isinstance(other, EncodedUtterance):
            return NotImplemented
        return (
            np.array_equal(self.features, other.features)
            and np.array_equal(self.tones, other.tones)
            and np.array_equal(self.prosody, other.prosody)
        )

    def __len__(self) -> int:
        return self.features.shape[0]


def encode_utterance(
    seq: SegmentSequence, mode: LookupMode = LookupMode.CROSS_LINGUAL
) -> EncodedUtterance:
    """Encode a segment sequence using the surface form of each segment."""
    n = len(seq)
    features = np.zeros((n, FEATURE_COUNT), dtype=np.uint8)
    tones = np.zeros(n, dtype=np.uint8)
    prosody = np.zeros(n, dtype=np.uint8)
    symbols: list[str] = []
    langs: list[str] = []
    for i, seg in enumerate(seq):
        features[i] = bundle_to_vector(seg.surface.bundle(mode))
        tones[i] = seg.tone if seg.tone is not None else 0
        prosody[i] = seg.prosody_break_after
        symbols.append(seg.symbol)
        langs.append(str(seg.lang))
    return EncodedUtterance(features, tones, prosody, symbols=symbols, langs=langs)


# ---------------------------------------------------------------------------
# projection


@dataclass(frozen=True)
class ProjectionWeights:
    feature_matrix: np.ndarray  # (20, 192) float32
    tone_table: np.ndarray      # (6, 32) float32
    prosody_table: np.ndarray   # (4, 32) float32
    version: str = "unversioned"

    _SHAPES = {
        "feature_matrix": (FEATURE_COUNT, FEATURE_DIM),
        "tone_table": (TONE_COUNT, EMBED_DIM),
        "prosody_table": (PROSODY_COUNT, EMBED_DIM),
    }

    def __post_init__(self):
        for name, shape in self._SHAPES.items():
            arr = np.asarray(getattr(self, name), dtype=np.float32)
            if arr.shape != shape:
                raise ShapeMismatchError(f"{name} must have shape {shape}, got {arr.shape}")
            if not np.isfinite(arr).all():
                raise ShapeMismatchError(f"{name} contains non-finite values")
            object.__setattr__(self, name, arr)

    @classmethod
    def default(cls, seed: int = 0) -> "ProjectionWeights":
        """Deterministic random weights for reproducible smoke runs."""
        rng = np.random.default_rng(seed)
        return cls(
            feature_matrix=rng.standard_normal(cls._SHAPES["feature_matrix"], dtype=np.float32),
            tone_table=rng.standard_normal(cls._SHAPES["tone_table"], dtype=np.float32),
            prosody_table=rng.standard_normal(cls._SHAPES["prosody_table"], dtype=np.float32),
            version=f"default-seed-{seed}",
        )

    def save(self, path: Path | str) -> None:
        np.savez(
            path,
            feature_matrix=self.feature_matrix,
            tone_table=self.tone_table,
            prosody_table=self.prosody_table,
            version=np.array(self.version),
        )

    @classmethod
    def load(cls, path: Path | str) -> "ProjectionWeights":
        try:
            with np.load(path, allow_pickle=False) as npz:
                missing = set(cls._SHAPES) - set(npz.files)
                if missing:
                    raise SchemaError(
                        "weights file missing arrays: " + ", ".join(sorted(missing)), path=path
                    )
                version = str(npz["version"]) if "version" in npz.files else "unversioned"
                return cls(
                    feature_matrix=npz["feature_matrix"],
                    tone_table=npz["tone_table"],
                    prosody_table=npz["prosody_table"],
                    version=version,
                )
        except (OSError, ValueError) as exc:
            raise SchemaError(f"cannot read weights file: {exc}", path=path) from None


def project(enc: EncodedUtterance, weights: ProjectionWeights) -> np.ndarray:
    """Dense (N, 256) float32: feature projection ++ tone ++ prosody embeddings."""
    dense = enc.features.astype(np.float32) @ weights.feature_matrix
    return np.concatenate(
        [dense, weights.tone_table[enc.tones], weights.prosody_table[enc.prosody]],
        axis=1,
    )


# ---------------------------------------------------------------------------
# serialization

_FORMATS = ("jsonl", "rawbin")


def serialize(obj: EncodedUtterance | np.ndarray, format: str = "jsonl") -> bytes:
    if format not in _FORMATS:
        raise SerializationError(f"unknown format {format!r}")
    if isinstance(obj, EncodedUtterance):
        return _ser_codes(obj, format)
    return _ser_projected(np.asarray(obj), format)


def deserialize(data: bytes, format: str = "rawbin") -> EncodedUtterance | np.ndarray:
    if format not in _FORMATS:
        raise SerializationError(f"unknown format {format!r}")
    if format == "rawbin":
        return _de_rawbin(data)
    return _de_jsonl(data)


def _ser_codes(enc: EncodedUtterance, format: str) -> bytes:
    if format == "jsonl":
        lines = []
        for i in range(len(enc)):
            row = {
                "symbol": enc.symbols[i] if enc.symbols else None,
                "features": [f.name for f in Feature if enc.features[i, f]],
                "tone": int(enc.tones[i]),
                "prosody": int(enc.prosody[i]),
                "lang": enc.langs[i] if enc.langs else None,
            }
            lines.append(json.dumps(row, ensure_ascii=False))
        return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, _KIND_CODES, len(enc), FEATURE_COUNT)
    packed = np.packbits(enc.features, axis=1, bitorder="little")
    return header + packed.tobytes() + enc.tones.tobytes() + enc.prosody.tobytes()


def _ser_projected(mat: np.ndarray, format: str) -> bytes:
    if mat.ndim != 2:
        raise ShapeMismatchError(f"projected matrix must be 2-D, got shape {mat.shape}")
    mat = np.ascontiguousarray(mat, dtype="<f4")
    if format == "jsonl":
        lines = [
            json.dumps({"projected": [float(x) for x in row]}, ensure_ascii=False)
            for row in mat
        ]
        return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, _KIND_PROJECTED, mat.shape[0], mat.shape[1])
    return header + mat.tobytes()


def _de_rawbin(data: bytes) -> EncodedUtterance | np.ndarray:
    if len(data) < _HEADER.size:
        raise SerializationError(f"truncated header: {len(data)} bytes")
    magic, version, kind, rows, cols = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise SerializationError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise SerializationError(f"unsupported format version {version}")
    payload = data[_HEADER.size:]
    if kind == _KIND_CODES:
        if cols != FEATURE_COUNT:
            raise SerializationError(f"feature payload must have {FEATURE_COUNT} columns, got {cols}")
        row_bytes = (cols + 7) // 8
        expected = rows * (row_bytes + 2)
        if len(payload) != expected:
            raise SerializationError(
                f"payload is {len(payload)} bytes, expected {expected} for {rows} rows"
            )
        packed = np.frombuffer(payload[: rows * row_bytes], dtype=np.uint8).reshape(rows, row_bytes)
        features = np.unpackbits(packed, axis=1, count=cols, bitorder="little")
        tones = np.frombuffer(payload[rows * row_bytes : rows * (row_bytes + 1)], dtype=np.uint8)
        prosody = np.frombuffer(payload[rows * (row_bytes + 1) :], dtype=np.uint8)
        return EncodedUtterance(features, tones, prosody)
    if kind == _KIND_PROJECTED:
        expected = rows * cols * 4
        if len(payload) != expected:
            raise SerializationError(
                f"payload is {len(payload)} bytes, expected {expected} for {rows}x{cols} float32"
            )
        return np.frombuffer(payload, dtype="<f4").reshape(rows, cols).copy()
    raise SerializationError(f"unknown payload kind {kind}")


def _de_jsonl(data: bytes) -> EncodedUtterance | np.ndarray:
    feature_rows: list[dict] = []
    projected_rows: list[list[float]] = []
    for lineno, line in enumerate(data.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SerializationError(f"line {lineno}: invalid JSON: {exc}") from None
        if "projected" in row:
            projected_rows.append(row["projected"])
        elif "features" in row:
            feature_rows.append(row)
        else:
            raise SerializationError(f"line {lineno}: neither a feature row nor a projected row")
    if feature_rows and projected_rows:
        raise SerializationError("stream mixes feature rows and projected rows")
    if projected_rows:
        widths = {len(r) for r in projected_rows}
        if len(widths) > 1:
            raise SerializationError("projected rows have inconsistent widths")
        return np.asarray(projected_rows, dtype=np.float32)
    n = len(feature_rows)
    features = np.zeros((n, FEATURE_COUNT), dtype=np.uint8)
    tones = np.zeros(n, dtype=np.uint8)
    prosody = np.zeros(n, dtype=np.uint8)
    symbols: list[str] = []
    langs: list[str] = []
    for i, row in enumerate(feature_rows):
        try:
            for name in row["features"]:
                features[i, Feature[name]] = 1
            tones[i] = row["tone"]
            prosody[i] = row["prosody"]
        except (KeyError, TypeError, ValueError) as exc:
            raise SerializationError(f"row {i}: {exc}") from None
        symbols.append(row.get("symbol"))
        langs.append(row.get("lang"))
    has_meta = any(s is not None for s in symbols)
    return EncodedUtterance(
        features,
        tones,
        prosody,
        symbols=symbols if has_meta else None,
        langs=langs if has_meta else None,
    )
