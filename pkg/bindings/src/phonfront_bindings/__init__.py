"""In-process bindings for the phonfront front end.

A :class:`Session` pins one loaded data snapshot (inventories, parsing
tables, optional projection weights); the module functions hand text to
the core pipeline and return numpy arrays and plain dict records.  This
layer is marshalling only — every linguistic decision and every byte of
serialized output comes from the core library, so library, CLI, and
binding results cannot drift apart.

Sessions are immutable and safe for concurrent reads; construct them
once (construction itself is not thread-safe) and share freely.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from phonfront.encode import (
    EncodedUtterance,
    ProjectionWeights,
    project as _project,
    serialize as _serialize,
)
from phonfront.inventory import Lang, LookupMode
from phonfront.pipeline import Resources, encode_line, map_l2_rows, transcribe_line

__all__ = ["Encoding", "Session", "encode", "map_l2", "open_session", "transcribe"]
__version__ = "0.1.0"


@dataclass(frozen=True)
class Session:
    """Immutable handle to loaded inventories, tables, and optional weights."""

    resources: Resources
    weights: ProjectionWeights | None = None


def open_session(
    data_dir: Path | str | None = None,
    weights: Path | str | ProjectionWeights | None = None,
) -> Session:
    """Load all data tables once; ``weights`` may be an .npz path.

    Without ``weights``, projection falls back to the same seeded default
    weights the command line uses.
    """
    loaded = None
    if weights is not None:
        loaded = (
            weights
            if isinstance(weights, ProjectionWeights)
            else ProjectionWeights.load(weights)
        )
    return Session(resources=Resources.load(data_dir), weights=loaded)


def transcribe(session: Session, lang: Lang | str | None, text: str) -> list[dict]:
    """Segment records for one utterance.

    ``lang`` is the default for untagged tokens (pass None to require
    ``en:``/``cmn:`` tags on every token).  Each record carries the
    underlying phoneme, the realized surface symbol, the language, and
    the tone/stress/break attributes.  Parse failures raise the core
    error types unchanged.
    """
    seq = transcribe_line(session.resources, text, lang)
    return [
        {
            "phoneme": seg.phoneme.symbol,
            "surface": seg.surface.symbol,
            "lang": str(seg.lang),
            "tone": seg.tone,
            "stress": seg.stress,
            "break": seg.prosody_break_after,
        }
        for seg in seq
    ]


@dataclass(frozen=True)
class Encoding:
    """Matrix plus aligned tone/prosody code vectors for one utterance.

    ``matrix`` is the (N, 20) uint8 feature matrix, or the (N, 256)
    float32 projection when the utterance was encoded with
    ``project=True``.
    """

    matrix: np.ndarray
    tones: np.ndarray
    prosody: np.ndarray
    symbols: tuple[str, ...]
    langs: tuple[str, ...]
    _payload: EncodedUtterance | np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.tones)

    def to_bytes(self, format: str = "rawbin") -> bytes:
        """Serialized form, byte-identical to the command-line output."""
        return _serialize(self._payload, format)


def encode(
    session: Session,
    lang: Lang | str | None,
    text: str,
    project: bool = False,
    *,
    mode: LookupMode | str = LookupMode.CROSS_LINGUAL,
) -> Encoding:
    """Encode one utterance as arrays (optionally densely projected)."""
    _, enc = encode_line(session.resources, text, lang, LookupMode(mode))
    if project:
        weights = session.weights or ProjectionWeights.default()
        payload: EncodedUtterance | np.ndarray = _project(enc, weights)
        matrix = payload
    else:
        payload = enc
        matrix = enc.features
    return Encoding(
        matrix=matrix,
        tones=enc.tones,
        prosody=enc.prosody,
        symbols=tuple(enc.symbols or ()),
        langs=tuple(enc.langs or ()),
        _payload=payload,
    )


def map_l2(
    session: Session,
    source: Lang | str,
    target: Lang | str,
    *,
    mode: LookupMode | str = LookupMode.CROSS_LINGUAL,
    top: int = 5,
    asymmetric: bool = False,
) -> list[dict]:
    """Ranked native-substitute rows, one dict per (source, candidate)."""
    return map_l2_rows(
        session.resources,
        source,
        target,
        mode=LookupMode(mode),
        top=top,
        asymmetric=asymmetric,
    )
