"""Multilingual phonological front-end.

Converts ARPABET (English) and numeric-tone pinyin (Mandarin) into
monovalent feature bundles, encodes utterances as binary feature matrices
with tone and prosody codes, and maps phonemes across languages by
ternary feature matching.
"""

__version__ = "0.1.0"

from .encode import (
    EMBED_DIM,
    FEATURE_DIM,
    PROJECTED_DIM,
    PROSODY_COUNT,
    TONE_COUNT,
    EncodedUtterance,
    ProjectionWeights,
    deserialize,
    encode_utterance,
    project,
    serialize,
)
from .errors import PhonfrontError
from .features import (
    EXCLUSION_PAIRS,
    FEATURE_COUNT,
    Feature,
    FeatureNode,
    NODE_OF,
    bundle_from_names,
    bundle_to_vector,
    format_bundle,
    validate_bundle,
    vector_to_bundle,
)
from .inventory import (
    Inventory,
    Kind,
    Lang,
    LookupMode,
    Phoneme,
    inventory_stats,
    load_inventory,
)
from .pipeline import Resources, encode_line, map_l2_rows, transcribe_line, validate_resources
from .transcribe import (
    PinyinSyllable,
    Segment,
    SegmentSequence,
    apply_allophony,
    format_pinyin,
    format_sequence,
    parse_arpabet,
    parse_pinyin,
    parse_sampa,
    syllable_to_segments,
)
from .xling import ConflictTable, InventoryDiff, MatchReport, ful_match, inventory_diff, nearest_native

__all__ = [
    "EMBED_DIM",
    "EXCLUSION_PAIRS",
    "FEATURE_COUNT",
    "FEATURE_DIM",
    "PROJECTED_DIM",
    "PROSODY_COUNT",
    "TONE_COUNT",
    "ConflictTable",
    "EncodedUtterance",
    "Feature",
    "FeatureNode",
    "Inventory",
    "InventoryDiff",
    "Kind",
    "Lang",
    "LookupMode",
    "MatchReport",
    "NODE_OF",
    "Phoneme",
    "PhonfrontError",
    "PinyinSyllable",
    "ProjectionWeights",
    "Resources",
    "Segment",
    "SegmentSequence",
    "apply_allophony",
    "bundle_from_names",
    "bundle_to_vector",
    "deserialize",
    "encode_line",
    "encode_utterance",
    "format_bundle",
    "format_pinyin",
    "format_sequence",
    "ful_match",
    "inventory_diff",
    "inventory_stats",
    "load_inventory",
    "map_l2_rows",
    "nearest_native",
    "parse_arpabet",
    "parse_pinyin",
    "parse_sampa",
    "project",
    "serialize",
    "syllable_to_segments",
    "transcribe_line",
    "validate_bundle",
    "validate_resources",
    "vector_to_bundle",
]
