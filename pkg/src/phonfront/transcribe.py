"""Transcription-system parsing and rendering.

Two input notations are supported: whitespace-separated ARPABET labels
(English) and numeric-tone pinyin (Mandarin).  Both are parsed against
data tables, producing segment sequences that reference inventory
phonemes; nothing phonological is hard-coded here except the small set of
orthographic conventions of pinyin spelling and the palatalization rule
environment.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .data import iter_table_rows
from .errors import (
    AmbiguousSegmentationError,
    DecompositionGapError,
    IllegalSyllableError,
    MalformedStressError,
    ParseError,
    SchemaError,
    UnknownTokenError,
)
from .features import Feature
from .inventory import Inventory, Kind, Lang, Phoneme

# ---------------------------------------------------------------------------
# segments


@dataclass(frozen=True)
class Segment:
    """One realized segment: an inventory phoneme plus prosodic attributes.

    ``phoneme`` is the underlying phoneme; ``surface`` differs from it only
    when an allophony rule applied.  ``tone`` (Mandarin, 1..5) and
    ``stress`` (English, 0..2) never co-occur.  ``prosody_break_after``
    marks the boundary strength following this segment (0 none, 1 word,
    2 phrase, 3 utterance-final).
    """

    phoneme: Phoneme
    surface: Phoneme
    tone: int | None = None
    stress: int | None = None
    prosody_break_after: int = 0

    def __post_init__(self):
        if self.tone is not None and self.stress is not None:
            raise ValueError(f"segment {self.symbol!r} carries both tone and stress")
        if self.tone is not None and self.tone not in range(1, 6):
            raise ValueError(f"tone must be 1..5, got {self.tone}")
        if self.stress is not None and self.stress not in range(0, 3):
            raise ValueError(f"stress must be 0..2, got {self.stress}")
        if self.prosody_break_after not in range(0, 4):
            raise ValueError(f"prosody break must be 0..3, got {self.prosody_break_after}")

    @property
    def lang(self) -> Lang:
        return self.phoneme.lang

    @property
    def symbol(self) -> str:
        return self.surface.symbol


@dataclass(frozen=True)
class SegmentSequence:
    segments: tuple[Segment, ...] = ()

    def __iter__(self):
        return iter(self.segments)

    def __len__(self) -> int:
        return len(self.segments)

    def __getitem__(self, i):
        return self.segments[i]

    def __add__(self, other: "SegmentSequence") -> "SegmentSequence":
        return SegmentSequence(self.segments + other.segments)

    @property
    def language_tags(self) -> tuple[Lang, ...]:
        return tuple(seg.lang for seg in self.segments)

    def symbols(self) -> tuple[str, ...]:
        return tuple(seg.symbol for seg in self.segments)

    def with_break(self, index: int, level: int) -> "SegmentSequence":
        """Copy with ``prosody_break_after`` set on the segment at ``index``."""
        segs = list(self.segments)
        segs[index] = replace(segs[index], prosody_break_after=level)
        return SegmentSequence(tuple(segs))


# ---------------------------------------------------------------------------
# ARPABET


@dataclass(frozen=True)
class ArpabetEntry:
    label: str
    sampa: tuple[str, ...]
    ipa: tuple[str, ...]


@dataclass(frozen=True)
class ArpabetTable:
    rows: Mapping[str, ArpabetEntry]

    def base_labels(self) -> set[str]:
        return {label for label in self.rows if not label[-1].isdigit()}


def load_arpabet_table(path: Path) -> ArpabetTable:
    """Load the ARPABET mapping table.

    Rows map a label to SAMPA and IPA symbol sequences.  A label with a
    trailing stress digit (e.g. ``AH0``) is a stress-conditioned override
    of its base label and is preferred when that exact stress occurs.
    """
    rows: dict[str, ArpabetEntry] = {}
    for lineno, (label, sampa, ipa) in _rows3(path):
        if label in rows:
            raise SchemaError(f"duplicate label {label!r}", path=path, line=lineno)
        sampa_seq = tuple(sampa.split())
        ipa_seq = tuple(ipa.split())
        if len(sampa_seq) != len(ipa_seq) or not ipa_seq:
            raise SchemaError(
                f"label {label!r}: SAMPA and IPA sequences must align and be non-empty",
                path=path,
                line=lineno,
            )
        rows[label] = ArpabetEntry(label, sampa_seq, ipa_seq)
    for label in rows:
        if label[-1].isdigit() and label[:-1] not in rows:
            raise SchemaError(f"stress variant {label!r} has no base row", path=path)
    return ArpabetTable(rows)


def _rows3(path: Path):
    for lineno, fields in iter_table_rows(path, 3):
        yield lineno, fields


def parse_arpabet(text: str, *, table: ArpabetTable, inventory: Inventory) -> SegmentSequence:
    """Parse whitespace-separated ARPABET labels into segments.

    Vowel labels may carry a stress digit 0..2; a stress digit on a
    consonant label is rejected.  Diphthong labels expand to two segments
    with the stress carried by the nucleus.
    """
    segments: list[Segment] = []
    for position, token in enumerate(text.split()):
        label, stress = token, None
        if token and token[-1].isdigit():
            label, digit = token[:-1], int(token[-1])
            entry = table.rows.get(token) or table.rows.get(label)
            if entry is None:
                raise UnknownTokenError(token, position)
            if digit not in range(0, 3) or inventory.phoneme(entry.ipa[0]).kind is not Kind.VOWEL:
                raise MalformedStressError(token, position)
            stress = digit
        else:
            entry = table.rows.get(label)
            if entry is None:
                raise UnknownTokenError(token, position)
        for j, symbol in enumerate(entry.ipa):
            phoneme = inventory.phoneme(symbol)
            segments.append(
                Segment(
                    phoneme=phoneme,
                    surface=phoneme,
                    stress=stress if j == 0 and stress is not None else None,
                )
            )
    return SegmentSequence(tuple(segments))


# ---------------------------------------------------------------------------
# pinyin

# Initial spellings after which the final "i" is the apical vowel, realized
# as a syllabic continuation of the sibilant rather than /i/.
APICAL_INITIALS = frozenset({"z", "c", "s", "zh", "ch", "sh", "r"})
APICAL_SYMBOL = "z"

# After j/q/x the letter u spells the front rounded vowel.
_U_TO_UMLAUT = {"u": "ü", "ue": "üe", "uan": "üan", "un": "ün"}

# Erhua: rhotacized counterpart of a syllable-final vowel, and the
# nasalized rhotacized counterpart that absorbs a nasal coda.
_RHOTIC_VOWEL = {"a": "a˞", "o": "o˞", "ə": "ə˞", "ɛ": "ɛ˞", "u": "u˞"}
# Under a nasal coda the vowel takes the nasalized rhotacized form and
# the coda drops; /ɛ/ (only ever pre-nasal in ian/üan) lowers to the low
# nasal vowel.
_NASAL_RHOTIC = {"a": "ã˞", "ə": "ə̃˞", "u": "ũ˞", "ɛ": "ã˞"}

_SEPARATORS = frozenset({"'", " "})


@dataclass(frozen=True)
class PinyinSyllable:
    """A parsed pinyin syllable: spelled initial/final, tone, erhua flag."""

    initial: str | None
    final: str
    tone: int
    erhua: bool = False

    @property
    def text(self) -> str:
        return (self.initial or "") + self.final + ("r" if self.erhua else "") + str(self.tone)


@dataclass(frozen=True)
class PinyinTables:
    initials: Mapping[str, str]       # initial spelling -> phoneme symbol
    finals: Mapping[str, tuple[str, ...]]  # final spelling -> phoneme symbols
    syllabary: frozenset              # legal base syllables (no tone, no erhua)

    def split_base(self, base: str) -> tuple[str | None, str]:
        """Split a base syllable into (initial, final) by longest initial."""
        for k in (2, 1):
            if base[:k] in self.initials:
                return base[:k], base[k:]
        return None, base


def load_pinyin_tables(initials_path: Path, finals_path: Path, syllabary_path: Path) -> PinyinTables:
    initials: dict[str, str] = {}
    for lineno, (spelling, symbol) in _rows2(initials_path):
        if spelling in initials:
            raise SchemaError(f"duplicate initial {spelling!r}", path=initials_path, line=lineno)
        initials[spelling] = symbol
    finals: dict[str, tuple[str, ...]] = {}
    for lineno, (spelling, symbols) in _rows2(finals_path):
        if spelling in finals:
            raise SchemaError(f"duplicate final {spelling!r}", path=finals_path, line=lineno)
        finals[spelling] = tuple(symbols.split())
    try:
        lines = syllabary_path.read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        raise SchemaError("table file not found", path=syllabary_path) from None
    syllabary = frozenset(
        line.strip() for line in lines if line.strip() and not line.lstrip().startswith("#")
    )
    return PinyinTables(initials=initials, finals=finals, syllabary=syllabary)


def _rows2(path: Path):
    for lineno, fields in iter_table_rows(path, 2):
        yield lineno, fields


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def parse_pinyin(text: str, *, tables: PinyinTables) -> tuple[PinyinSyllable, ...]:
    """Parse numeric-tone pinyin into syllables.

    Greedy longest-match syllabification over the bundled syllabary; every
    syllable requires a tone digit 1..5; an ``r`` between the base syllable
    and the digit marks erhua.  ``v`` is read as ``ü``.  Apostrophes and
    spaces separate syllables but are never required.  Diacritic tone
    marks are not accepted.

    If the greedy scan fails but a backtracked segmentation of the whole
    string exists, the input is reported as ambiguous rather than being
    silently re-segmented.
    """
    s = text.replace("v", "ü")
    syllables: list[PinyinSyllable] = []
    pos = 0
    while pos < len(s):
        if s[pos] in _SEPARATORS:
            pos += 1
            continue
        parsed = _match_syllable(s, pos, tables)
        if parsed is None:
            alternatives = _backtrack_parses(s, tables)
            if alternatives:
                raise AmbiguousSegmentationError(text, _byte_offset(text, pos), alternatives)
            raise IllegalSyllableError(text, _byte_offset(text, pos))
        syllable, pos = parsed
        syllables.append(syllable)
    return tuple(syllables)


def _match_syllable(s: str, pos: int, tables: PinyinTables) -> tuple[PinyinSyllable, int] | None:
    """Greedy: longest base syllable at ``pos``, optional erhua r, tone digit."""
    base = None
    for end in range(min(len(s), pos + 6), pos, -1):
        if s[pos:end] in tables.syllabary:
            base = s[pos:end]
            break
    if base is None:
        return None
    p = pos + len(base)
    erhua = False
    if p < len(s) and s[p] == "r" and p + 1 < len(s) and s[p + 1] in "12345":
        erhua = True
        p += 1
    if p >= len(s) or s[p] not in "12345":
        return None
    initial, final = tables.split_base(base)
    return PinyinSyllable(initial=initial, final=final, tone=int(s[p]), erhua=erhua), p + 1


def _backtrack_parses(s: str, tables: PinyinTables, limit: int = 4) -> list[tuple[PinyinSyllable, ...]]:
    """Exhaustive segmentations of the whole string, shortest-base-first.

    Only consulted after the greedy scan fails, to distinguish genuinely
    illegal input from input the greedy strategy mis-segmented.  With
    mandatory tone digits the two strategies accept the same language, so
    this returns [] for every failure the bundled syllabary can produce,
    but the check is kept so a customized syllabary cannot silently change
    parses.
    """
    out: list[tuple[PinyinSyllable, ...]] = []

    def walk(pos: int, acc: list[PinyinSyllable]):
        if len(out) >= limit:
            return
        while pos < len(s) and s[pos] in _SEPARATORS:
            pos += 1
        if pos == len(s):
            out.append(tuple(acc))
            return
        for end in range(pos + 1, min(len(s), pos + 6) + 1):
            base = s[pos:end]
            if base not in tables.syllabary:
                continue
            p = end
            options = [(False, p)]
            if p < len(s) and s[p] == "r":
                options.append((True, p + 1))
            for erhua, q in options:
                if q < len(s) and s[q] in "12345":
                    initial, final = tables.split_base(base)
                    acc.append(
                        PinyinSyllable(initial=initial, final=final, tone=int(s[q]), erhua=erhua)
                    )
                    walk(q + 1, acc)
                    acc.pop()

    walk(0, [])
    return out


def syllable_to_segments(
    syl: PinyinSyllable, inventory: Inventory, *, tables: PinyinTables
) -> SegmentSequence:
    """Decompose one syllable into segments and attach its tone.

    The tone lands on every VOCALIC segment of the syllable; onset and
    coda consonants (including the apical vowel, which is consonantal)
    carry none.
    """
    symbols: list[str] = []
    if syl.initial is not None:
        onset = syl.initial
        if onset not in tables.initials:
            raise DecompositionGapError(syl.text, f"unknown initial {onset!r}")
        symbols.append(tables.initials[onset])

    final = syl.final
    if syl.initial in APICAL_INITIALS and final == "i":
        final_symbols = [APICAL_SYMBOL]
    else:
        if syl.initial in ("j", "q", "x"):
            final = _U_TO_UMLAUT.get(final, final)
        if final not in tables.finals:
            raise DecompositionGapError(syl.text, f"no decomposition for final {final!r}")
        final_symbols = list(tables.finals[final])

    if syl.erhua:
        last = final_symbols[-1]
        if last in _RHOTIC_VOWEL:
            final_symbols[-1] = _RHOTIC_VOWEL[last]
        elif last in ("n", "ŋ") and len(final_symbols) >= 2 and final_symbols[-2] in _NASAL_RHOTIC:
            final_symbols[-2:] = [_NASAL_RHOTIC[final_symbols[-2]]]
        else:
            raise DecompositionGapError(syl.text, f"no rhotacized counterpart for {last!r}")

    symbols.extend(final_symbols)
    # /ri/: initial and apical vowel collapse into one segment.
    deduped = [s for i, s in enumerate(symbols) if i == 0 or s != symbols[i - 1]]

    segments = []
    for symbol in deduped:
        phoneme = inventory.phoneme(symbol)
        vocalic = Feature.VOCALIC in phoneme.contrastive
        segments.append(
            Segment(phoneme=phoneme, surface=phoneme, tone=syl.tone if vocalic else None)
        )
    return SegmentSequence(tuple(segments))


# ---------------------------------------------------------------------------
# allophony

# Dental sibilants palatalize before high front vocoids: /i y/ and the
# homorganic glide /j/.
ALLOPHONY_ENV = frozenset({"i", "y", "j"})


def apply_allophony(seq: SegmentSequence, inventory: Inventory) -> SegmentSequence:
    """Rewrite surface forms per the inventory's allophone rules.

    Flat left-to-right scan; only segments of the inventory's language are
    touched, and the conditioning segment must belong to the same
    language.  Idempotent: outputs are never rule triggers.
    """
    triggers = inventory.allophone_of
    if not triggers:
        return seq
    segs = list(seq.segments)
    for i, seg in enumerate(segs):
        if seg.lang is not inventory.lang or seg.surface.symbol not in triggers:
            continue
        nxt = segs[i + 1] if i + 1 < len(segs) else None
        if nxt is not None and nxt.lang is seg.lang and nxt.surface.symbol in ALLOPHONY_ENV:
            segs[i] = replace(seg, surface=inventory.allophones[triggers[seg.surface.symbol]])
    return SegmentSequence(tuple(segs))


# ---------------------------------------------------------------------------
# rendering and the SAMPA round-trip

_STRESS_SAMPA = {1: '"', 2: "%"}
_STRESS_IPA = {1: "ˈ", 2: "ˌ"}


def format_sequence(
    seq: SegmentSequence,
    notation: str = "sampa",
    *,
    sampa_tables: Mapping[Lang, Mapping[str, str]],
) -> str:
    """Render a sequence as space-separated symbols.

    Tones appear as digit suffixes; primary/secondary stress as prefixed
    ``"``/``%`` (SAMPA) or ``ˈ``/``ˌ`` (IPA); unstressed vowels are
    unmarked.
    """
    if notation not in ("sampa", "ipa"):
        raise ValueError(f"notation must be 'sampa' or 'ipa', got {notation!r}")
    parts = []
    for seg in seq:
        if notation == "sampa":
            table = sampa_tables[seg.lang]
            if seg.symbol not in table:
                raise SchemaError(f"no SAMPA mapping for {seg.lang} symbol {seg.symbol!r}")
            out = table[seg.symbol]
            out = _STRESS_SAMPA.get(seg.stress, "") + out
        else:
            out = _STRESS_IPA.get(seg.stress, "") + seg.symbol
        if seg.tone is not None:
            out += str(seg.tone)
        parts.append(out)
    return " ".join(parts)


def parse_sampa(
    text: str,
    inventory: Inventory,
    *,
    sampa_table: Mapping[str, str],
) -> SegmentSequence:
    """Parse one language's space-separated SAMPA back into segments.

    Inverse of :func:`format_sequence` for single-language sequences;
    allophone symbols resolve to their underlying phoneme with the
    allophone as surface.
    """
    reverse = {v: k for k, v in sampa_table.items()}
    if len(reverse) != len(sampa_table):
        raise SchemaError(f"SAMPA table for {inventory.lang} is not invertible")
    underlying_of = {v: k for k, v in inventory.allophone_of.items()}
    segments = []
    for position, token in enumerate(text.split()):
        stress = None
        tone = None
        if token[:1] in ('"', "%"):
            stress = 1 if token[0] == '"' else 2
            token = token[1:]
        # A whole-token symbol outranks tone stripping: some SAMPA symbols
        # are themselves digits (the rhotic vowels), and tone digits never
        # follow them.
        if token not in reverse and token[-1:].isdigit():
            tone = int(token[-1])
            token = token[:-1]
            if tone not in range(1, 6):
                raise UnknownTokenError(token + str(tone), position)
        if token not in reverse:
            raise UnknownTokenError(token, position)
        symbol = reverse[token]
        surface = inventory.phoneme(symbol)
        phoneme = inventory.phoneme(underlying_of.get(symbol, symbol))
        if tone is not None and Feature.VOCALIC not in surface.contrastive:
            raise UnknownTokenError(token + str(tone), position)
        segments.append(Segment(phoneme=phoneme, surface=surface, tone=tone, stress=stress))
    return SegmentSequence(tuple(segments))


def load_sampa_table(path: Path) -> dict[str, str]:
    """Load an IPA-symbol -> SAMPA-symbol table."""
    table: dict[str, str] = {}
    for lineno, (ipa, sampa) in _rows2(path):
        if ipa in table:
            raise SchemaError(f"duplicate symbol {ipa!r}", path=path, line=lineno)
        table[ipa] = sampa
    return table


def format_pinyin(syllables: Iterable[PinyinSyllable]) -> str:
    """Render syllables back to numeric pinyin (ü kept as ü, no separators).

    Inverse of :func:`parse_pinyin` for canonical strings, i.e. lowercase
    numeric pinyin without separator characters.
    """
    return "".join(syl.text for syl in syllables)
