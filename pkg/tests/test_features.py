import numpy as np
import pytest
from hypothesis import given, strategies as st

from phonfront.errors import ConstraintViolationError
from phonfront.features import (
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

# The canonical index order is a frozen serialization contract.
CANONICAL_ORDER = [
    "CONSONANTAL", "VOCALIC", "OBSTRUENT", "SONORANT",
    "VOICE", "SPREAD_GLOTTIS", "PLOSIVE", "CONTINUANT",
    "STRIDENT", "NASAL", "LATERAL", "RHOTIC",
    "LABIAL", "CORONAL", "DORSAL", "RADICAL",
    "HIGH", "LOW", "ATR", "RTR",
]


def test_feature_count_and_order():
    assert FEATURE_COUNT == 20
    assert [f.name for f in Feature] == CANONICAL_ORDER
    assert [f.value for f in Feature] == list(range(20))


def test_node_assignment():
    by_node = {}
    for f, node in NODE_OF.items():
        by_node.setdefault(node, set()).add(f.name)
    assert by_node[FeatureNode.ROOT] == {"CONSONANTAL", "VOCALIC", "OBSTRUENT", "SONORANT"}
    assert by_node[FeatureNode.LARYNGEAL] == {"VOICE", "SPREAD_GLOTTIS"}
    assert by_node[FeatureNode.CONSTRICTION] == {"PLOSIVE", "CONTINUANT"}
    assert by_node[FeatureNode.MANNER_MISC] == {"STRIDENT", "NASAL", "LATERAL", "RHOTIC"}
    assert by_node[FeatureNode.ARTICULATOR] == {"LABIAL", "CORONAL", "DORSAL", "RADICAL"}
    assert by_node[FeatureNode.TONGUE_HEIGHT] == {"HIGH", "LOW"}
    assert by_node[FeatureNode.TONGUE_ROOT] == {"ATR", "RTR"}
    assert set(NODE_OF) == set(Feature)


def test_exclusion_pairs():
    named = {frozenset((a.name, b.name)) for a, b in EXCLUSION_PAIRS}
    assert named == {
        frozenset({"CONSONANTAL", "VOCALIC"}),
        frozenset({"OBSTRUENT", "SONORANT"}),
        frozenset({"PLOSIVE", "CONTINUANT"}),
        frozenset({"HIGH", "LOW"}),
        frozenset({"ATR", "RTR"}),
        frozenset({"VOICE", "SPREAD_GLOTTIS"}),
    }
    # Articulators never clash: rounded back vocoids are LABIAL+DORSAL.
    assert frozenset({Feature.LABIAL, Feature.DORSAL}) not in {
        frozenset(p) for p in EXCLUSION_PAIRS
    }


def test_validate_bundle_reports_all_violations():
    bundle = {Feature.CONSONANTAL, Feature.VOCALIC, Feature.HIGH, Feature.LOW}
    pairs = validate_bundle(bundle)
    assert (Feature.CONSONANTAL, Feature.VOCALIC) in pairs
    assert (Feature.HIGH, Feature.LOW) in pairs
    assert len(pairs) == 2
    assert validate_bundle({Feature.LABIAL, Feature.DORSAL, Feature.HIGH}) == []


def test_bundle_to_vector_known_value():
    # /p/: CONSONANTAL OBSTRUENT PLOSIVE LABIAL -> bits 0, 2, 6, 12.
    bundle = bundle_from_names(["CONSONANTAL", "OBSTRUENT", "PLOSIVE", "LABIAL"])
    vec = bundle_to_vector(bundle)
    assert vec.dtype == np.uint8
    assert vec.tolist() == [1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0]
    assert int(vec.sum()) == 4


def test_bundle_to_vector_rejects_conflicts():
    with pytest.raises(ConstraintViolationError) as exc:
        bundle_to_vector({Feature.ATR, Feature.RTR})
    assert (Feature.ATR, Feature.RTR) in exc.value.pairs


def test_vector_to_bundle_rejects_bad_input():
    with pytest.raises(ConstraintViolationError):
        vector_to_bundle(np.zeros(19, dtype=np.uint8))
    with pytest.raises(ConstraintViolationError):
        vector_to_bundle(np.full(20, 2, dtype=np.uint8))
    bad = np.zeros(20, dtype=np.uint8)
    bad[Feature.PLOSIVE] = 1
    bad[Feature.CONTINUANT] = 1
    with pytest.raises(ConstraintViolationError):
        vector_to_bundle(bad)


def test_empty_bundle_round_trips():
    assert vector_to_bundle(bundle_to_vector(frozenset())) == frozenset()


def test_format_bundle_is_index_ordered():
    text = format_bundle({Feature.RTR, Feature.CONSONANTAL, Feature.HIGH})
    assert text == "{CONSONANTAL, HIGH, RTR}"


@st.composite
def legal_bundles(draw):
    feats = set()
    for a, b in EXCLUSION_PAIRS:
        pick = draw(st.sampled_from((None, a, b)))
        if pick is not None:
            feats.add(pick)
    free = [f for f in Feature if not any(f in pair for pair in EXCLUSION_PAIRS)]
    feats |= draw(st.frozensets(st.sampled_from(free)))
    return frozenset(feats)


@given(legal_bundles())
def test_vector_round_trip(bundle):
    assert vector_to_bundle(bundle_to_vector(bundle)) == bundle


@given(legal_bundles())
def test_string_name_round_trip(bundle):
    assert bundle_from_names(f.name for f in bundle) == bundle
