"""Binding outputs must be byte-identical to the command-line outputs.

The corpus below is generated deterministically (fixed seed) from the
shipped tables: 70 English label sequences, 70 Mandarin pinyin runs, and
60 code-mixed lines with break markers and punctuation, 200 utterances
in total.  Every token carries an explicit language tag so a single CLI
invocation can process the whole file.
"""
import dataclasses
import random
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from phonfront.encode import ProjectionWeights, deserialize
from phonfront.errors import IllegalSyllableError, UnknownTokenError
from phonfront.inventory import Kind, Lang
from phonfront.pipeline import map_l2_rows
from phonfront.transcribe import parse_sampa

from phonfront_bindings import Session, encode, map_l2, open_session, transcribe

_SEED = 20250817
_ERHUA = ["huar1", "ger4", "zhur2", "bor2", "dianr3", "wanr2", "menr2"]


def _en_token(rng, labels, vowels):
    label = rng.choice(labels)
    if label in vowels and rng.random() < 0.7:
        label += rng.choice("012")
    return "en:" + label


def _cmn_token(rng, bases):
    n = rng.randint(1, 3)
    return "cmn:" + "".join(f"{rng.choice(bases)}{rng.randint(1, 5)}" for _ in range(n))


def build_corpus(session):
    res = session.resources
    labels = sorted(res.arpabet.base_labels())
    vowels = {
        label
        for label in labels
        if res.en.phoneme(res.arpabet.rows[label].ipa[0]).kind is Kind.VOWEL
    }
    bases = sorted(res.pinyin.syllabary)
    rng = random.Random(_SEED)

    en_lines = [
        " ".join(_en_token(rng, labels, vowels) for _ in range(rng.randint(2, 6)))
        for _ in range(70)
    ]
    cmn_lines = [
        " ".join(_cmn_token(rng, bases) for _ in range(rng.randint(1, 3)))
        for _ in range(70)
    ]
    mixed = []
    for _ in range(60):
        chunks = [_en_token(rng, labels, vowels), _cmn_token(rng, bases)]
        for _ in range(rng.randint(0, 2)):
            chunks.append(
                _en_token(rng, labels, vowels) if rng.random() < 0.5
                else _cmn_token(rng, bases)
            )
        if rng.random() < 0.3:
            chunks.append("cmn:" + rng.choice(_ERHUA))
        rng.shuffle(chunks)
        for i in range(len(chunks) - 1, 0, -1):
            if rng.random() < 0.25:
                chunks.insert(i, rng.choice(["|", "||", "|||"]))
        line = " ".join(chunks)
        if rng.random() < 0.4:
            line += rng.choice([" .", " ?", " !", ","])
        mixed.append(line)
    return en_lines, cmn_lines, mixed


@pytest.fixture(scope="session")
def corpus(session):
    return build_corpus(session)


def _run_cli(args, **kwargs):
    proc = subprocess.run(
        [sys.executable, "-m", "phonfront.cli", *args],
        capture_output=True,
        timeout=300,
        **kwargs,
    )
    assert proc.returncode == 0, proc.stderr
    return proc


# ---------------------------------------------------------------------------
# the parity corpus


def test_corpus_composition(corpus):
    en_lines, cmn_lines, mixed = corpus
    assert len(en_lines) == 70
    assert len(cmn_lines) == 70
    assert len(mixed) == 60


def test_corpus_parity_with_cli(tmp_path, session, corpus):
    lines = [line for group in corpus for line in group]
    assert len(lines) == 200
    src = tmp_path / "corpus.txt"
    src.write_text("\n".join(lines) + "\n", encoding="utf-8")

    for fmt in ("jsonl", "rawbin"):
        out = tmp_path / f"cli.{fmt}"
        _run_cli(["encode", str(src), "--format", fmt, "-o", str(out)])
        bound = b"".join(encode(session, None, line).to_bytes(fmt) for line in lines)
        label = f"bindings parity: {fmt} byte-identical to CLI over 200 utterances"
        if bound != out.read_bytes():
            print(f"ACCEPTANCE FAIL [S] {label}")
            raise AssertionError(f"{fmt} outputs differ from CLI")
        print(f"ACCEPTANCE PASS [S] {label}")

    out = tmp_path / "cli.proj"
    _run_cli(["encode", str(src), "--format", "rawbin", "--project", "-o", str(out)])
    bound = b"".join(
        encode(session, None, line, project=True).to_bytes("rawbin") for line in lines
    )
    assert bound == out.read_bytes()


def test_transcribe_matches_cli_text(tmp_path, session, corpus):
    en_lines, cmn_lines, _ = corpus
    for lines, inv in ((en_lines, session.resources.en), (cmn_lines, session.resources.cmn)):
        src = tmp_path / f"{inv.lang}.txt"
        src.write_text("\n".join(lines) + "\n", encoding="utf-8")
        proc = _run_cli(["transcribe", str(src)], text=True)
        rendered = proc.stdout.splitlines()
        assert len(rendered) == len(lines)
        table = session.resources.sampa[inv.lang]
        for line, cli_text in zip(lines, rendered):
            records = transcribe(session, None, line)
            decoded = parse_sampa(cli_text, inv, sampa_table=table)
            assert [r["surface"] for r in records] == list(decoded.symbols())
            assert [r["tone"] for r in records] == [s.tone for s in decoded]


# ---------------------------------------------------------------------------
# single-utterance semantics


def test_transcribe_record_fields(session):
    records = transcribe(session, "cmn", "xi2")
    assert records == [
        {"phoneme": "s", "surface": "ɕ", "lang": "cmn", "tone": None, "stress": None,
         "break": 0},
        {"phoneme": "i", "surface": "i", "lang": "cmn", "tone": 2, "stress": None,
         "break": 3},
    ]


def test_transcribe_empty_line(session):
    assert transcribe(session, "en", "") == []


def test_errors_pass_through(session):
    with pytest.raises(IllegalSyllableError) as exc:
        transcribe(session, "cmn", "bga1")
    assert exc.value.offset == 0
    with pytest.raises(UnknownTokenError):
        transcribe(session, "en", "HH XX")


def test_encode_shapes(session):
    enc = encode(session, "cmn", "ni3hao3")
    assert enc.matrix.shape == (5, 20)
    assert enc.matrix.dtype == np.uint8
    assert enc.tones.tolist() == [0, 3, 0, 3, 3]
    assert enc.symbols == ("n", "i", "x", "a", "u")
    assert enc.langs == ("cmn",) * 5
    assert len(enc) == 5


def test_encode_empty_line(session):
    enc = encode(session, "en", "")
    assert enc.matrix.shape == (0, 20)
    assert deserialize(enc.to_bytes("rawbin"), "rawbin") == enc._payload
    assert encode(session, "en", "", project=True).matrix.shape == (0, 256)


def test_encode_projected_width(session):
    enc = encode(session, "en", "HH AH0 L OW1", project=True)
    assert enc.matrix.shape == (4, 256)
    assert enc.matrix.dtype == np.float32
    assert enc.tones.shape == (4,)


def test_custom_weights_match_cli(tmp_path, session):
    weights = ProjectionWeights.default(seed=11)
    path = tmp_path / "w.npz"
    weights.save(path)
    src = tmp_path / "line.txt"
    src.write_text("en:S en:IY1 cmn:ni3\n", encoding="utf-8")
    out = tmp_path / "cli.bin"
    _run_cli([
        "encode", str(src), "--format", "rawbin", "--project",
        "--weights", str(path), "-o", str(out),
    ])
    bound = open_session(weights=path)
    enc = encode(bound, None, "en:S en:IY1 cmn:ni3", project=True)
    assert enc.to_bytes("rawbin") == out.read_bytes()


def test_map_l2_matches_pipeline_and_cli(session):
    rows = map_l2(session, "en", "cmn", top=3)
    assert rows == map_l2_rows(session.resources, "en", "cmn", top=3)
    proc = _run_cli(["map-l2", "en", "cmn", "--top", "3"], text=True)
    lines = proc.stdout.splitlines()
    header, body = lines[0].split("\t"), lines[1:]
    assert len(body) == len(rows)
    for text_row, row in zip(body, rows):
        fields = dict(zip(header, text_row.split("\t")))
        assert fields["source"] == row["source"]
        assert fields["candidate"] == row["candidate"]
        assert fields["score"] == f"{row['score']:.4f}"


# ---------------------------------------------------------------------------
# session behavior


def test_session_is_immutable(session):
    with pytest.raises(dataclasses.FrozenInstanceError):
        session.weights = None


def test_session_concurrent_reads(session, corpus):
    en_lines, cmn_lines, mixed = corpus
    lines = (en_lines + cmn_lines + mixed)[:40]
    serial = [encode(session, None, line).to_bytes("rawbin") for line in lines]
    with ThreadPoolExecutor(max_workers=8) as pool:
        parallel = list(
            pool.map(lambda l: encode(session, None, l).to_bytes("rawbin"), lines)
        )
    assert parallel == serial


def test_open_session_accepts_weight_objects():
    w = ProjectionWeights.default(seed=2)
    s = open_session(weights=w)
    assert isinstance(s, Session)
    assert s.weights is w
