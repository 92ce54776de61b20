"""Shared front-end pipeline: resource loading and line-level operations.

Everything the CLI can do goes through this module, so embedders get
byte-identical behavior by calling the same functions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .data import default_data_dir
from .encode import EncodedUtterance, encode_utterance
from .errors import ParseError
from .features import FEATURE_COUNT, Feature, NODE_OF, EXCLUSION_PAIRS
from .inventory import Inventory, Lang, LookupMode, load_inventory
from .transcribe import (
    ArpabetTable,
    PinyinTables,
    SegmentSequence,
    apply_allophony,
    load_arpabet_table,
    load_pinyin_tables,
    load_sampa_table,
    parse_arpabet,
    parse_pinyin,
    syllable_to_segments,
)
from .xling import ConflictTable, nearest_native

# Prosodic boundary notation accepted in input lines.  Explicit markers
# take word/phrase/utterance levels; trailing punctuation implies the
# phrase or utterance level; the final segment of a line is always
# utterance-final.
BREAK_MARKERS = {"|": 1, "||": 2, "|||": 3}
PUNCT_BREAKS = {
    ",": 2, ";": 2, "，": 2, "、": 2, "；": 2,
    ".": 3, "!": 3, "?": 3, "。": 3, "！": 3, "？": 3,
}

_LANG_PREFIX = re.compile(r"^(en|cmn):")


@dataclass(frozen=True)
class Resources:
    """All loaded data tables, ready for transcription and mapping."""

    data_dir: Path
    en: Inventory
    cmn: Inventory
    arpabet: ArpabetTable
    pinyin: PinyinTables
    sampa: Mapping[Lang, Mapping[str, str]]
    conflicts: ConflictTable

    @classmethod
    def load(cls, data_dir: Path | str | None = None) -> "Resources":
        base = Path(data_dir) if data_dir is not None else default_data_dir()
        en = load_inventory(Lang.EN, base / "en_inventory.tsv")
        cmn = load_inventory(
            Lang.CMN, base / "cmn_inventory.tsv", allophone_path=base / "cmn_allophones.tsv"
        )
        return cls(
            data_dir=base,
            en=en,
            cmn=cmn,
            arpabet=load_arpabet_table(base / "arpabet_table.tsv"),
            pinyin=load_pinyin_tables(
                base / "pinyin_initials.tsv", base / "pinyin_finals.tsv", base / "syllabary.txt"
            ),
            sampa={
                Lang.EN: load_sampa_table(base / "sampa_en.tsv"),
                Lang.CMN: load_sampa_table(base / "sampa_cmn.tsv"),
            },
            conflicts=ConflictTable.from_file(base / "conflict_pairs.tsv"),
        )

    def inventory(self, lang: Lang | str) -> Inventory:
        return self.en if Lang(lang) is Lang.EN else self.cmn


def transcribe_line(
    res: Resources, line: str, default_lang: Lang | str | None
) -> SegmentSequence:
    """Parse one input line into a segment sequence.

    Tokens are whitespace-separated.  A token may carry an ``en:`` or
    ``cmn:`` prefix overriding the default language; English tokens are
    ARPABET labels, Mandarin tokens are numeric pinyin runs.  ``|``
    markers and trailing punctuation set the prosodic break on the
    preceding segment.
    """
    default = Lang(default_lang) if default_lang is not None else None
    segments: list = []

    def set_break(level: int):
        if not segments:
            raise ParseError("prosodic break marker before any segment")
        seq = SegmentSequence(tuple(segments))
        level = max(level, segments[-1].prosody_break_after)
        segments[:] = seq.with_break(len(segments) - 1, level).segments

    for token in line.split():
        if token in BREAK_MARKERS:
            set_break(BREAK_MARKERS[token])
            continue
        lang = default
        m = _LANG_PREFIX.match(token)
        if m:
            lang = Lang(m.group(1))
            token = token[m.end():]
        trailing = 0
        while token and token[-1] in PUNCT_BREAKS:
            trailing = max(trailing, PUNCT_BREAKS[token[-1]])
            token = token[:-1]
        if not token:
            if trailing:
                set_break(trailing)
            continue
        if lang is None:
            raise ParseError(
                f"token {token!r} has no language: tag it en:/cmn: or set a default language"
            )
        if lang is Lang.EN:
            segments.extend(parse_arpabet(token, table=res.arpabet, inventory=res.en))
        else:
            for syl in parse_pinyin(token, tables=res.pinyin):
                segments.extend(syllable_to_segments(syl, res.cmn, tables=res.pinyin))
        if trailing:
            set_break(trailing)

    seq = SegmentSequence(tuple(segments))
    seq = apply_allophony(seq, res.cmn)
    if len(seq):
        seq = seq.with_break(len(seq) - 1, 3)
    return seq


def encode_line(
    res: Resources,
    line: str,
    default_lang: Lang | str | None,
    mode: LookupMode = LookupMode.CROSS_LINGUAL,
) -> tuple[SegmentSequence, EncodedUtterance]:
    seq = transcribe_line(res, line, default_lang)
    return seq, encode_utterance(seq, mode)


def map_l2_rows(
    res: Resources,
    source_lang: Lang | str,
    target_lang: Lang | str,
    *,
    mode: LookupMode = LookupMode.CROSS_LINGUAL,
    top: int = 5,
    table: ConflictTable | None = None,
    asymmetric: bool = False,
) -> list[dict]:
    """Mapping table rows: every source phoneme ranked against the target."""
    source = res.inventory(source_lang)
    target = res.inventory(target_lang)
    table = table or res.conflicts
    rows = []
    for p in source:
        ranked = nearest_native(p, target, mode=mode, table=table, asymmetric=asymmetric)
        if top:
            ranked = ranked[:top]
        for rank, (cand, report) in enumerate(ranked, start=1):
            rows.append(
                {
                    "source": p.symbol,
                    "rank": rank,
                    "candidate": cand.symbol,
                    "score": report.score,
                    "matches": len(report.matches),
                    "mismatches": len(report.mismatches),
                    "no_mismatches": len(report.no_mismatches),
                }
            )
    return rows


# ---------------------------------------------------------------------------
# deep validation (the `validate` command and the test suite)

_CONTRACT_ROW = re.compile(r"^\|\s*(\d+)\s*\|\s*([A-Z_]+)\s*\|\s*([a-z_]+)\s*\|")
_CONTRACT_PAIR = re.compile(r"^[-*]\s*([A-Z_]+)\s*x\s*([A-Z_]+)\s*$")


def validate_resources(res: Resources) -> list[str]:
    """Cross-table consistency checks; returns a list of problems."""
    problems: list[str] = []

    contract = res.data_dir / "feature_contract.md"
    try:
        text = contract.read_text(encoding="utf-8")
    except FileNotFoundError:
        problems.append(f"{contract}: missing")
        text = ""
    rows = {}
    pairs = set()
    for line in text.splitlines():
        m = _CONTRACT_ROW.match(line.strip())
        if m:
            rows[int(m.group(1))] = (m.group(2), m.group(3))
        m = _CONTRACT_PAIR.match(line.strip())
        if m:
            pairs.add(frozenset((m.group(1), m.group(2))))
    if text:
        for f in Feature:
            declared = rows.get(f.value)
            actual = (f.name, NODE_OF[f].value)
            if declared != actual:
                problems.append(
                    f"feature contract row {f.value}: declares {declared}, code has {actual}"
                )
        if len(rows) != FEATURE_COUNT:
            problems.append(f"feature contract lists {len(rows)} features, code has {FEATURE_COUNT}")
        code_pairs = {frozenset((a.name, b.name)) for a, b in EXCLUSION_PAIRS}
        if pairs != code_pairs:
            problems.append("feature contract exclusion pairs disagree with code")

    for label, entry in res.arpabet.rows.items():
        for sym in entry.ipa:
            if sym not in res.en:
                problems.append(f"ARPABET {label}: symbol {sym!r} not in en inventory")

    for inv in (res.en, res.cmn):
        table = res.sampa[inv.lang]
        for sym in list(inv.phonemes) + list(inv.allophones):
            if sym not in table:
                problems.append(f"{inv.lang}: no SAMPA mapping for {sym!r}")
        values = list(table.values())
        if len(set(values)) != len(values):
            problems.append(f"{inv.lang}: SAMPA table not invertible")

    for spelling, sym in res.pinyin.initials.items():
        if sym not in res.cmn:
            problems.append(f"initial {spelling!r}: symbol {sym!r} not in cmn inventory")
    for spelling, syms in res.pinyin.finals.items():
        for sym in syms:
            if sym not in res.cmn:
                problems.append(f"final {spelling!r}: symbol {sym!r} not in cmn inventory")

    for base in sorted(res.pinyin.syllabary):
        try:
            syls = parse_pinyin(base + "1", tables=res.pinyin)
            if len(syls) != 1 or syls[0].erhua:
                problems.append(f"syllabary {base!r}: does not parse as one plain syllable")
                continue
            syllable_to_segments(syls[0], res.cmn, tables=res.pinyin)
        except ParseError as exc:
            problems.append(f"syllabary {base!r}: {exc}")

    return problems
