"""Cross-lingual phoneme comparison by ternary feature matching.

A surface bundle is compared against a stored (lexical) bundle feature by
feature: a surface feature present in the lexical bundle is a *match*; a
surface feature that conflicts with some lexical feature is a *mismatch*
(recorded as the offending pair); a surface feature that is merely absent
from the lexical bundle is a *no-mismatch* and costs nothing — absence is
not a claim.  Conflicts come from a symmetric feature-pair table that
defaults to the feature system's exclusion pairs.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .data import iter_table_rows
from .errors import SchemaError
from .features import EXCLUSION_PAIRS, Feature, FeatureBundle, feature_from_name
from .inventory import Inventory, LookupMode, Phoneme


@dataclass(frozen=True)
class ConflictTable:
    pairs: frozenset  # frozenset[frozenset[Feature]]

    @classmethod
    def default(cls) -> "ConflictTable":
        return cls(frozenset(frozenset(p) for p in EXCLUSION_PAIRS))

    @classmethod
    def from_file(cls, path: Path) -> "ConflictTable":
        pairs = set()
        for lineno, (a, b) in _rows2(path):
            try:
                fa, fb = feature_from_name(a), feature_from_name(b)
            except KeyError as exc:
                raise SchemaError(str(exc), path=path, line=lineno) from None
            if fa == fb:
                raise SchemaError(f"feature {a} conflicts with itself", path=path, line=lineno)
            pairs.add(frozenset((fa, fb)))
        return cls(frozenset(pairs))

    def is_conflict(self, a: Feature, b: Feature) -> bool:
        return frozenset((a, b)) in self.pairs

    def conflicting(self, f: Feature, bundle: FeatureBundle) -> list[Feature]:
        return sorted(b for b in bundle if self.is_conflict(f, b))


def _rows2(path: Path):
    for lineno, fields in iter_table_rows(path, 2):
        yield lineno, fields


@dataclass(frozen=True)
class MatchReport:
    """Outcome of one surface-vs-lexical comparison.

    ``mismatches`` holds (surface feature, lexical feature) pairs.
    ``unrealized`` is populated only by the asymmetric variant: lexical
    features with no surface support that were not already part of a
    mismatch pair.
    """

    matches: FeatureBundle
    mismatches: tuple[tuple[Feature, Feature], ...]
    no_mismatches: FeatureBundle
    score: float
    unrealized: FeatureBundle = frozenset()


def ful_match(
    surface: FeatureBundle,
    lexical: FeatureBundle,
    *,
    table: ConflictTable | None = None,
    asymmetric: bool = False,
) -> MatchReport:
    """Ternary match of a surface bundle against a lexical bundle.

    score = (|matches| - |mismatch pairs|) / max(|surface|, |lexical|, 1),
    clamped to [-1, 1].  With ``asymmetric=True``, lexical features left
    entirely unrealized by the surface additionally count half a mismatch
    each, so the comparison is no longer direction-neutral.
    """
    table = table or ConflictTable.default()
    matches = frozenset(surface & lexical)
    mismatches: list[tuple[Feature, Feature]] = []
    no_mismatches = set()
    for f in sorted(surface - lexical):
        partners = table.conflicting(f, lexical)
        if partners:
            mismatches.extend((f, p) for p in partners)
        else:
            no_mismatches.add(f)

    penalty = float(len(mismatches))
    unrealized: frozenset = frozenset()
    if asymmetric:
        in_pairs = {l for _, l in mismatches}
        unrealized = frozenset(lexical - surface - in_pairs)
        penalty += 0.5 * len(unrealized)

    denom = max(len(surface), len(lexical), 1)
    score = (len(matches) - penalty) / denom
    return MatchReport(
        matches=matches,
        mismatches=tuple(mismatches),
        no_mismatches=frozenset(no_mismatches),
        score=max(-1.0, min(1.0, score)),
        unrealized=unrealized,
    )


def nearest_native(
    phoneme: Phoneme,
    native: Inventory,
    *,
    mode: LookupMode = LookupMode.CROSS_LINGUAL,
    table: ConflictTable | None = None,
    asymmetric: bool = False,
) -> list[tuple[Phoneme, MatchReport]]:
    """Rank every native phoneme as a stand-in for a foreign one.

    The foreign phoneme's realization is the surface signal; native
    lexical entries are the candidates.  Ordering is total and
    deterministic: score descending, then fewer mismatch pairs, then
    symbol codepoint order.
    """
    surface = phoneme.bundle(mode)
    ranked = [
        (cand, ful_match(surface, cand.bundle(mode), table=table, asymmetric=asymmetric))
        for cand in native
    ]
    ranked.sort(key=lambda pair: (-pair[1].score, len(pair[1].mismatches), pair[0].symbol))
    return ranked


@dataclass(frozen=True)
class InventoryDiff:
    features_only_in_a: FeatureBundle
    features_only_in_b: FeatureBundle
    unmatched_a: tuple[str, ...]  # symbols with no identical counterpart in b
    unmatched_b: tuple[str, ...]
    laryngeal_contrast: dict


def inventory_diff(
    a: Inventory,
    b: Inventory,
    *,
    mode: LookupMode = LookupMode.CROSS_LINGUAL,
    table: ConflictTable | None = None,
) -> InventoryDiff:
    """Typological comparison of two inventories.

    Reports features used by only one language, phonemes with no
    perfect-score counterpart on the other side, and how each language
    splits its obstruents between the two laryngeal features.
    """

    def used(inv: Inventory) -> frozenset:
        out = set()
        for p in inv:
            out |= p.bundle(mode)
        return frozenset(out)

    def unmatched(src: Inventory, tgt: Inventory) -> tuple[str, ...]:
        out = []
        for p in src:
            ranked = nearest_native(p, tgt, mode=mode, table=table)
            if not ranked or ranked[0][1].score < 1.0:
                out.append(p.symbol)
        return tuple(out)

    def laryngeal(inv: Inventory) -> dict:
        counts = {Feature.VOICE.name: 0, Feature.SPREAD_GLOTTIS.name: 0}
        for p in inv:
            bundle = p.bundle(mode)
            if Feature.OBSTRUENT not in bundle:
                continue
            for f in (Feature.VOICE, Feature.SPREAD_GLOTTIS):
                if f in bundle:
                    counts[f.name] += 1
        return counts

    ua, ub = used(a), used(b)
    return InventoryDiff(
        features_only_in_a=ua - ub,
        features_only_in_b=ub - ua,
        unmatched_a=unmatched(a, b),
        unmatched_b=unmatched(b, a),
        laryngeal_contrast={str(a.lang): laryngeal(a), str(b.lang): laryngeal(b)},
    )
