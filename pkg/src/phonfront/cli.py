"""Command-line interface.

Exit codes: 0 success, 1 input-data errors, 2 configuration/schema errors
(argparse errors also exit 2).  Per-line failures in batch commands are
reported on stderr with their line number and do not stop the batch
unless --strict is given.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .encode import ProjectionWeights, project, serialize
from .errors import ConfigError, PhonfrontError
from .inventory import Lang, LookupMode, inventory_stats
from .features import Feature
from .pipeline import Resources, encode_line, map_l2_rows, transcribe_line, validate_resources
from .transcribe import format_sequence
from .xling import ConflictTable

_CONFIG_KEYS = {"data", "lang", "mode", "format", "notation", "weights", "top", "strict"}


def load_config(path: str) -> dict:
    """Parse a ``key = value`` config file; # starts a comment."""
    config: dict = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key == "strict":
            if value not in ("true", "false"):
                raise ConfigError(f"{path}:{lineno}: strict must be true or false")
            config[key] = value == "true"
        elif key == "top":
            try:
                config[key] = int(value)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: top must be an integer") from None
        else:
            config[key] = value
    return config


def _merge(args: argparse.Namespace, config: dict, key: str, default=None):
    value = getattr(args, key, None)
    if value is None:
        value = config.get(key, default)
    return value


def _default_lang(args, config) -> Lang | None:
    """Default language for untagged tokens; None means tags are required."""
    lang = _merge(args, config, "lang")
    if lang is None:
        return None
    try:
        return Lang(lang)
    except ValueError:
        raise ConfigError(f"unknown language {lang!r}") from None


def _require_lang(args, config) -> Lang:
    lang = _default_lang(args, config)
    if lang is None:
        raise ConfigError("a language is required: pass --lang en|cmn (or set it in the config)")
    return lang


def _mode(args, config) -> LookupMode:
    value = _merge(args, config, "mode", str(LookupMode.CROSS_LINGUAL))
    try:
        return LookupMode(value)
    except ValueError:
        raise ConfigError(f"unknown lookup mode {value!r}") from None


def _input_lines(path: str):
    if path == "-":
        yield from enumerate(sys.stdin, start=1)
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                yield from enumerate(fh, start=1)
        except OSError as exc:
            raise ConfigError(f"cannot read input file: {exc}") from None


def _write_atomic(path: str, data: bytes):
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=str(target.parent) or ".", prefix=target.name + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, target)
    except BaseException:
        os.unlink(tmp)
        raise


def _emit(path: str | None, data: bytes):
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        _write_atomic(path, data)


# ---------------------------------------------------------------------------
# commands


def cmd_transcribe(args, config) -> int:
    lang = _default_lang(args, config)
    notation = _merge(args, config, "notation", "sampa")
    if notation not in ("sampa", "ipa"):
        raise ConfigError(f"unknown notation {notation!r}")
    strict = args.strict or config.get("strict", False)
    res = Resources.load(_merge(args, config, "data"))
    failures = 0
    for lineno, raw in _input_lines(args.input):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        try:
            seq = transcribe_line(res, line, lang)
            print(format_sequence(seq, notation, sampa_tables=res.sampa))
        except PhonfrontError as exc:
            print(f"line {lineno}: {exc}", file=sys.stderr)
            failures += 1
            if strict:
                return 1
    return 1 if failures else 0


def cmd_encode(args, config) -> int:
    lang = _default_lang(args, config)
    mode = _mode(args, config)
    out_format = _merge(args, config, "format", "jsonl")
    if out_format not in ("jsonl", "rawbin"):
        raise ConfigError(f"unknown output format {out_format!r}")
    strict = args.strict or config.get("strict", False)
    weights_path = _merge(args, config, "weights")
    if weights_path is not None and not args.project:
        raise ConfigError("--weights only makes sense together with --project")
    if out_format == "rawbin" and args.output is None:
        raise ConfigError("rawbin output requires -o/--output (refusing to write binary to a tty)")
    weights = None
    if args.project:
        weights = ProjectionWeights.load(weights_path) if weights_path else ProjectionWeights.default()

    res = Resources.load(_merge(args, config, "data"))
    chunks: list[bytes] = []
    failures = 0
    for lineno, raw in _input_lines(args.input):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        try:
            _, enc = encode_line(res, line, lang, mode)
            payload = project(enc, weights) if weights is not None else enc
            chunks.append(serialize(payload, out_format))
        except PhonfrontError as exc:
            print(f"line {lineno}: {exc}", file=sys.stderr)
            failures += 1
            if strict:
                return 1
    _emit(args.output, b"".join(chunks))
    return 1 if failures else 0


def cmd_inventory(args, config) -> int:
    lang = _require_lang(args, config)
    res = Resources.load(_merge(args, config, "data"))
    inv = res.inventory(lang)
    if args.validate:
        # Loading already enforces the structural invariants; getting here
        # means the file is sound.
        print(f"ok: {lang} inventory valid ({len(inv)} phonemes, version {inv.version})")
        return 0
    stats = inventory_stats(inv)
    for key in ("lang", "version", "phonemes", "consonants", "vowels"):
        print(f"{key}: {stats[key]}")
    for f in Feature:
        print(f"{f.name}: {stats['features'][f.name]}")
    return 0


def cmd_map_l2(args, config) -> int:
    for name in (args.source, args.target):
        try:
            Lang(name)
        except ValueError:
            raise ConfigError(f"unknown language {name!r}") from None
    mode = _mode(args, config)
    top = _merge(args, config, "top", 5)
    res = Resources.load(_merge(args, config, "data"))
    table = ConflictTable.from_file(Path(args.table)) if args.table else None
    rows = map_l2_rows(
        res,
        args.source,
        args.target,
        mode=mode,
        top=top,
        table=table,
        asymmetric=args.asymmetric,
    )
    print("source\trank\tcandidate\tscore\tmatches\tmismatches\tno_mismatches")
    for row in rows:
        print(
            f"{row['source']}\t{row['rank']}\t{row['candidate']}\t{row['score']:.4f}"
            f"\t{row['matches']}\t{row['mismatches']}\t{row['no_mismatches']}"
        )
    return 0


def cmd_validate(args, config) -> int:
    res = Resources.load(_merge(args, config, "data"))
    problems = validate_resources(res)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        print(f"{len(problems)} problem(s) found", file=sys.stderr)
        return 1
    print(
        f"ok: data at {res.data_dir} is consistent "
        f"({len(res.en)} en + {len(res.cmn)} cmn phonemes, "
        f"{len(res.pinyin.syllabary)} base syllables)"
    )
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phonfront",
        description="Phonological-feature front-end: transcribe, encode, and map phonemes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--data", help="data directory (default: $PHONFRONT_DATA or bundled)")
        p.add_argument("--config", help="config file with key = value lines")

    p = sub.add_parser("transcribe", help="parse input lines and render SAMPA or IPA")
    common(p)
    p.add_argument("input", nargs="?", default="-", help="input file, - for stdin")
    p.add_argument("--lang", help="default language for untagged tokens (en|cmn)")
    p.add_argument("--notation", choices=["sampa", "ipa"], default=None)
    p.add_argument("--strict", action="store_true", help="stop at the first failing line")
    p.set_defaults(func=cmd_transcribe)

    p = sub.add_parser("encode", help="encode input lines as feature matrices")
    common(p)
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--lang", help="default language for untagged tokens (en|cmn)")
    p.add_argument("--mode", choices=[str(m) for m in LookupMode], default=None)
    p.add_argument("--format", choices=["jsonl", "rawbin"], default=None)
    p.add_argument("--project", action="store_true", help="apply the dense projection")
    p.add_argument("--weights", help="projection weights .npz (default: seeded weights)")
    p.add_argument("-o", "--output", help="output file (required for rawbin)")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("inventory", help="inventory statistics and validation")
    common(p)
    p.add_argument("--lang", help="language (en|cmn)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--stats", action="store_true", help="print counts (default)")
    group.add_argument("--validate", action="store_true", help="check the inventory file")
    p.set_defaults(func=cmd_inventory)

    p = sub.add_parser("map-l2", help="rank native substitutes for foreign phonemes")
    common(p)
    p.add_argument("source", help="source language (en|cmn)")
    p.add_argument("target", help="target language (en|cmn)")
    p.add_argument("--mode", choices=[str(m) for m in LookupMode], default=None)
    p.add_argument("--top", type=int, default=None, help="candidates per phoneme (0 = all)")
    p.add_argument("--table", help="custom conflict-pair table")
    p.add_argument("--asymmetric", action="store_true", help="penalize unrealized lexical features")
    p.set_defaults(func=cmd_map_l2)

    p = sub.add_parser("validate", help="cross-check every bundled data table")
    common(p)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else {}
        return args.func(args, config)
    except PhonfrontError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
