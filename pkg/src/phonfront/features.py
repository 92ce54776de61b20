"""Monovalent phonological feature system.

A segment is described by the *presence* of features; absence carries no
claim (underspecification).  The 20 features live at fixed indices 0..19 —
this order is a serialization contract shared with the binary utterance
format and must never be reordered.  Features are grouped under the nodes
of the feature geometry, and six pairs are mutually exclusive.
"""
from __future__ import annotations

import enum
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstraintViolationError


class Feature(enum.IntEnum):
    """One monovalent feature; the enum value is its vector index."""

    CONSONANTAL = 0
    VOCALIC = 1
    OBSTRUENT = 2
    SONORANT = 3
    VOICE = 4
    SPREAD_GLOTTIS = 5
    PLOSIVE = 6
    CONTINUANT = 7
    STRIDENT = 8
    NASAL = 9
    LATERAL = 10
    RHOTIC = 11
    LABIAL = 12
    CORONAL = 13
    DORSAL = 14
    RADICAL = 15
    HIGH = 16
    LOW = 17
    ATR = 18
    RTR = 19


FEATURE_COUNT = len(Feature)

FeatureBundle = frozenset  # frozenset[Feature]


class FeatureNode(enum.Enum):
    """Organizational nodes of the feature geometry."""

    ROOT = "root"
    LARYNGEAL = "laryngeal"
    CONSTRICTION = "constriction"
    MANNER_MISC = "manner_misc"
    ARTICULATOR = "articulator"
    TONGUE_HEIGHT = "tongue_height"
    TONGUE_ROOT = "tongue_root"


NODE_OF: dict[Feature, FeatureNode] = {
    Feature.CONSONANTAL: FeatureNode.ROOT,
    Feature.VOCALIC: FeatureNode.ROOT,
    Feature.OBSTRUENT: FeatureNode.ROOT,
    Feature.SONORANT: FeatureNode.ROOT,
    Feature.VOICE: FeatureNode.LARYNGEAL,
    Feature.SPREAD_GLOTTIS: FeatureNode.LARYNGEAL,
    Feature.PLOSIVE: FeatureNode.CONSTRICTION,
    Feature.CONTINUANT: FeatureNode.CONSTRICTION,
    Feature.STRIDENT: FeatureNode.MANNER_MISC,
    Feature.NASAL: FeatureNode.MANNER_MISC,
    Feature.LATERAL: FeatureNode.MANNER_MISC,
    Feature.RHOTIC: FeatureNode.MANNER_MISC,
    Feature.LABIAL: FeatureNode.ARTICULATOR,
    Feature.CORONAL: FeatureNode.ARTICULATOR,
    Feature.DORSAL: FeatureNode.ARTICULATOR,
    Feature.RADICAL: FeatureNode.ARTICULATOR,
    Feature.HIGH: FeatureNode.TONGUE_HEIGHT,
    Feature.LOW: FeatureNode.TONGUE_HEIGHT,
    Feature.ATR: FeatureNode.TONGUE_ROOT,
    Feature.RTR: FeatureNode.TONGUE_ROOT,
}

# Mutually exclusive feature pairs.  Note that articulator features are NOT
# exclusive: rounded back vowels and /w/ carry LABIAL and DORSAL together.
EXCLUSION_PAIRS: tuple[tuple[Feature, Feature], ...] = (
    (Feature.CONSONANTAL, Feature.VOCALIC),
    (Feature.OBSTRUENT, Feature.SONORANT),
    (Feature.PLOSIVE, Feature.CONTINUANT),
    (Feature.HIGH, Feature.LOW),
    (Feature.ATR, Feature.RTR),
    (Feature.VOICE, Feature.SPREAD_GLOTTIS),
)


def feature_from_name(name: str) -> Feature:
    """Resolve a feature by its canonical name, e.g. ``"SPREAD_GLOTTIS"``."""
    try:
        return Feature[name]
    except KeyError:
        raise KeyError(f"unknown feature name {name!r}") from None


def bundle_from_names(names: Iterable[str]) -> FeatureBundle:
    return frozenset(feature_from_name(n) for n in names)


def validate_bundle(bundle: Iterable[Feature]) -> list[tuple[Feature, Feature]]:
    """Return every violated exclusion pair (empty list: bundle is legal)."""
    present = frozenset(bundle)
    return [(a, b) for a, b in EXCLUSION_PAIRS if a in present and b in present]


def bundle_to_vector(bundle: Iterable[Feature]) -> np.ndarray:
    """Encode a legal bundle as a length-20 uint8 presence vector."""
    present = frozenset(bundle)
    violations = validate_bundle(present)
    if violations:
        raise ConstraintViolationError(
            "bundle combines mutually exclusive features: "
            + ", ".join(f"{a.name}+{b.name}" for a, b in violations),
            pairs=violations,
        )
    vec = np.zeros(FEATURE_COUNT, dtype=np.uint8)
    for f in present:
        vec[f] = 1
    return vec


def vector_to_bundle(vector: Sequence[int] | np.ndarray) -> FeatureBundle:
    """Decode a length-20 presence vector back into a feature bundle."""
    arr = np.asarray(vector)
    if arr.shape != (FEATURE_COUNT,):
        raise ConstraintViolationError(
            f"feature vector must have shape ({FEATURE_COUNT},), got {arr.shape}"
        )
    if not np.isin(arr, (0, 1)).all():
        raise ConstraintViolationError("feature vector entries must be 0 or 1")
    bundle = frozenset(Feature(i) for i in np.flatnonzero(arr))
    violations = validate_bundle(bundle)
    if violations:
        raise ConstraintViolationError(
            "vector sets mutually exclusive bits: "
            + ", ".join(f"{a.name}+{b.name}" for a, b in violations),
            pairs=violations,
        )
    return bundle


def format_bundle(bundle: Iterable[Feature]) -> str:
    """Canonical human-readable rendering, in index order."""
    return "{" + ", ".join(f.name for f in sorted(bundle)) + "}"
