"""Phoneme inventories: the lexical feature specifications per language.

An inventory file is a TSV with one phoneme per line::

    symbol <TAB> kind <TAB> contrastive-features <TAB> optional-features <TAB> reconstructed

Feature lists are space-separated canonical feature names, ``-`` for the
empty list.  Contrastive features are lexically specified; optional
features are underspecified in the lexicon and only surface in the
cross-lingual lookup mode.  Phonemes whose specification had to be
reconstructed from secondary evidence carry ``reconstructed = true``.
"""
from __future__ import annotations

import difflib
import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .data import iter_table_rows, table_version
from .errors import InventoryInvariantError, SchemaError, UnknownSymbolError
from .features import Feature, FeatureBundle, bundle_from_names, validate_bundle


class Lang(str, enum.Enum):
    EN = "en"
    CMN = "cmn"

    def __str__(self) -> str:  # so f-strings render "en", not "Lang.EN"
        return self.value


class LookupMode(str, enum.Enum):
    """Which features a lookup returns.

    CONTRASTIVE: only the lexically specified features.
    CROSS_LINGUAL: contrastive plus optional features, the fully specified
    bundle used when comparing across languages.
    """

    CONTRASTIVE = "contrastive"
    CROSS_LINGUAL = "cross_lingual"

    def __str__(self) -> str:
        return self.value


class Kind(str, enum.Enum):
    CONSONANT = "consonant"
    VOWEL = "vowel"

    def __str__(self) -> str:
        return self.value


# Expected (total, consonants, vowels) per language; the loader refuses
# inventories that do not match.
EXPECTED_COUNTS: dict[Lang, tuple[int, int, int]] = {
    Lang.EN: (38, 24, 14),
    Lang.CMN: (37, 21, 16),
}


@dataclass(frozen=True)
class Phoneme:
    symbol: str
    lang: Lang
    kind: Kind
    contrastive: FeatureBundle
    optional: FeatureBundle
    reconstructed: bool = False

    def bundle(self, mode: LookupMode = LookupMode.CROSS_LINGUAL) -> FeatureBundle:
        if mode is LookupMode.CONTRASTIVE:
            return self.contrastive
        return self.contrastive | self.optional

    def __str__(self) -> str:
        return f"/{self.symbol}/"


@dataclass(frozen=True)
class Inventory:
    lang: Lang
    phonemes: Mapping[str, Phoneme]  # insertion order == file order
    version: str = "unversioned"
    # Surface-only segments (allophones) and the rule mapping underlying
    # symbol -> surface symbol.  Not counted in the phoneme totals.
    allophones: Mapping[str, Phoneme] = field(default_factory=dict)
    allophone_of: Mapping[str, str] = field(default_factory=dict)

    def __iter__(self):
        return iter(self.phonemes.values())

    def __len__(self) -> int:
        return len(self.phonemes)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.phonemes

    @property
    def consonants(self) -> list[Phoneme]:
        return [p for p in self if p.kind is Kind.CONSONANT]

    @property
    def vowels(self) -> list[Phoneme]:
        return [p for p in self if p.kind is Kind.VOWEL]

    def lookup(self, symbol: str, mode: LookupMode = LookupMode.CROSS_LINGUAL) -> FeatureBundle:
        return self.phoneme(symbol).bundle(mode)

    def phoneme(self, symbol: str) -> Phoneme:
        """Phoneme or allophone by symbol; suggests close matches on failure."""
        hit = self.phonemes.get(symbol) or self.allophones.get(symbol)
        if hit is None:
            pool = list(self.phonemes) + list(self.allophones)
            raise UnknownSymbolError(
                symbol, difflib.get_close_matches(symbol, pool, n=3, cutoff=0.5)
            )
        return hit


def _parse_feature_list(text: str, *, path: Path, lineno: int) -> FeatureBundle:
    if text == "-":
        return frozenset()
    try:
        return bundle_from_names(text.split())
    except KeyError as exc:
        raise SchemaError(str(exc), path=path, line=lineno) from None


def _parse_flag(text: str, *, path: Path, lineno: int) -> bool:
    if text in ("true", "false"):
        return text == "true"
    raise SchemaError(
        f"reconstructed flag must be 'true' or 'false', got {text!r}",
        path=path,
        line=lineno,
    )


def _load_phoneme_rows(path: Path, lang: Lang) -> dict[str, Phoneme]:
    phonemes: dict[str, Phoneme] = {}
    for lineno, fields in iter_table_rows(path, 5):
        symbol, kind_text, contr_text, opt_text, flag_text = fields
        if not symbol:
            raise SchemaError("empty symbol field", path=path, line=lineno)
        if symbol in phonemes:
            raise SchemaError(f"duplicate symbol {symbol!r}", path=path, line=lineno)
        try:
            kind = Kind(kind_text)
        except ValueError:
            raise SchemaError(
                f"kind must be 'consonant' or 'vowel', got {kind_text!r}",
                path=path,
                line=lineno,
            ) from None
        phonemes[symbol] = Phoneme(
            symbol=symbol,
            lang=lang,
            kind=kind,
            contrastive=_parse_feature_list(contr_text, path=path, lineno=lineno),
            optional=_parse_feature_list(opt_text, path=path, lineno=lineno),
            reconstructed=_parse_flag(flag_text, path=path, lineno=lineno),
        )
    return phonemes


def _check_invariants(phonemes: Iterable[Phoneme], lang: Lang) -> list[str]:
    """Collect every structural violation instead of stopping at the first."""
    failures: list[str] = []
    plist = list(phonemes)
    for p in plist:
        overlap = p.contrastive & p.optional
        if overlap:
            failures.append(
                f"{lang} {p}: features listed as both contrastive and optional: "
                + ", ".join(f.name for f in sorted(overlap))
            )
        full = p.contrastive | p.optional
        for a, b in validate_bundle(full):
            failures.append(f"{lang} {p}: exclusive features {a.name}+{b.name}")
        root = full & {Feature.CONSONANTAL, Feature.VOCALIC}
        if len(root) != 1:
            failures.append(f"{lang} {p}: needs exactly one of CONSONANTAL/VOCALIC")
        elif Feature.CONSONANTAL in root and p.kind is not Kind.CONSONANT:
            failures.append(f"{lang} {p}: CONSONANTAL phoneme not marked consonant")
        elif Feature.VOCALIC in root and p.kind is not Kind.VOWEL:
            failures.append(f"{lang} {p}: VOCALIC phoneme not marked vowel")
        if Feature.VOCALIC in full:
            missing = {Feature.SONORANT, Feature.VOICE} - full
            if missing:
                failures.append(
                    f"{lang} {p}: vowel lacks " + ", ".join(f.name for f in sorted(missing))
                )

    expected = EXPECTED_COUNTS[lang]
    total = len(plist)
    ncons = sum(1 for p in plist if p.kind is Kind.CONSONANT)
    nvow = total - ncons
    if (total, ncons, nvow) != expected:
        failures.append(
            f"{lang}: expected {expected[0]} phonemes "
            f"({expected[1]} consonants + {expected[2]} vowels), "
            f"got {total} ({ncons} + {nvow})"
        )
    return failures


def load_inventory(
    lang: Lang | str,
    path: Path | str,
    allophone_path: Path | str | None = None,
) -> Inventory:
    """Load and validate one language's inventory (plus optional allophones)."""
    lang = Lang(lang)
    path = Path(path)
    phonemes = _load_phoneme_rows(path, lang)
    failures = _check_invariants(phonemes.values(), lang)
    if failures:
        raise InventoryInvariantError(failures)

    allophones: dict[str, Phoneme] = {}
    allophone_of: dict[str, str] = {}
    if allophone_path is not None:
        allophone_path = Path(allophone_path)
        # Allophone rows carry the underlying symbol in place of the kind
        # column: surface <TAB> underlying <TAB> contrastive <TAB> optional <TAB> flag
        for lineno, fields in iter_table_rows(allophone_path, 5):
            surface, underlying, contr_text, opt_text, flag_text = fields
            if underlying not in phonemes:
                raise SchemaError(
                    f"allophone {surface!r} of unknown phoneme {underlying!r}",
                    path=allophone_path,
                    line=lineno,
                )
            if surface in phonemes or surface in allophones:
                raise SchemaError(
                    f"allophone symbol {surface!r} collides", path=allophone_path, line=lineno
                )
            seg = Phoneme(
                symbol=surface,
                lang=lang,
                kind=Kind.CONSONANT,
                contrastive=_parse_feature_list(contr_text, path=allophone_path, lineno=lineno),
                optional=_parse_feature_list(opt_text, path=allophone_path, lineno=lineno),
                reconstructed=_parse_flag(flag_text, path=allophone_path, lineno=lineno),
            )
            bad = validate_bundle(seg.contrastive | seg.optional)
            if bad:
                raise SchemaError(
                    f"allophone {surface!r} has exclusive features "
                    + ", ".join(f"{a.name}+{b.name}" for a, b in bad),
                    path=allophone_path,
                    line=lineno,
                )
            allophones[surface] = seg
            allophone_of[underlying] = surface

    return Inventory(
        lang=lang,
        phonemes=phonemes,
        version=table_version(path),
        allophones=allophones,
        allophone_of=allophone_of,
    )


def inventory_stats(inv: Inventory) -> dict:
    """Counts used by the ``inventory --stats`` command and sanity tests."""
    feature_counts = {f.name: 0 for f in Feature}
    for p in inv:
        for f in p.bundle(LookupMode.CROSS_LINGUAL):
            feature_counts[f.name] += 1
    return {
        "lang": str(inv.lang),
        "version": inv.version,
        "phonemes": len(inv),
        "consonants": len(inv.consonants),
        "vowels": len(inv.vowels),
        "features": feature_counts,
    }
