import os

import pytest

from sagex import parse_grammar
from sagex.cli import (
    ANNOTATED_FILENAME,
    BUNDLE_FILENAME,
    EXIT_BUNDLE,
    EXIT_FORMAT,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    main,
)

SOURCE = "le chat noir\nle chien\n"
TARGET = "the black cat\nthe dog\n"
ALIGNMENT = "0-0 1-2 2-1\n0-0 1-1\n"


@pytest.fixture
def corpus(tmp_path):
    paths = {}
    for name, text in (("src", SOURCE), ("tgt", TARGET), ("aln", ALIGNMENT)):
        path = tmp_path / f"corpus.{name}"
        path.write_text(text, encoding="utf-8")
        paths[name] = str(path)
    return paths


def run_preprocess(corpus, out_dir, *extra):
    return main(
        [
            "preprocess",
            "--source", corpus["src"],
            "--target", corpus["tgt"],
            "--alignment", corpus["aln"],
            "--out", str(out_dir),
            *extra,
        ]
    )


def run_extract(bundle_dir, input_path, out_dir, *extra):
    return main(
        [
            "extract",
            "--bundle", str(bundle_dir),
            "--input", str(input_path),
            "--out", str(out_dir),
            *extra,
        ]
    )


def test_usage_errors():
    assert main([]) == EXIT_USAGE
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main(["preprocess", "--source", "x"]) == EXIT_USAGE  # missing flags
    assert main(["extract", "--bundle", "b", "--input", "i", "--out", "o", "--bogus"]) == EXIT_USAGE
    assert main(["extract", "--bundle", "b", "--input", "i", "--out", "o", "--threads", "two"]) == EXIT_USAGE


def test_bad_limit_value_is_usage_error(corpus, tmp_path):
    code = run_preprocess(corpus, tmp_path / "bundle", "--max-rule-span", "0")
    assert code == EXIT_USAGE


def test_missing_input_file_is_io_error(corpus, tmp_path):
    missing = str(tmp_path / "nope.txt")
    code = main(
        [
            "preprocess",
            "--source", missing,
            "--target", corpus["tgt"],
            "--alignment", corpus["aln"],
            "--out", str(tmp_path / "bundle"),
        ]
    )
    assert code == EXIT_IO


def test_malformed_alignment_is_format_error(corpus, tmp_path):
    with open(corpus["aln"], "w", encoding="utf-8") as fh:
        fh.write("0-0 what\n0-0\n")
    assert run_preprocess(corpus, tmp_path / "bundle") == EXIT_FORMAT


def test_count_mismatch_is_format_error(corpus, tmp_path):
    with open(corpus["aln"], "w", encoding="utf-8") as fh:
        fh.write("0-0\n")
    assert run_preprocess(corpus, tmp_path / "bundle") == EXIT_FORMAT


def test_non_utf8_input_is_format_error(corpus, tmp_path):
    with open(corpus["src"], "wb") as fh:
        fh.write(b"le chat \xff\xfe noir\n")
    assert run_preprocess(corpus, tmp_path / "bundle") == EXIT_FORMAT


def test_corrupt_bundle_is_bundle_error(corpus, tmp_path):
    bundle_dir = tmp_path / "bundle"
    assert run_preprocess(corpus, bundle_dir) == EXIT_OK
    bundle_file = bundle_dir / BUNDLE_FILENAME
    blob = bytearray(bundle_file.read_bytes())
    blob[4] = 99  # future format version
    bundle_file.write_bytes(bytes(blob))

    test_file = tmp_path / "test.txt"
    test_file.write_text("le chat\n", encoding="utf-8")
    assert run_extract(bundle_dir, test_file, tmp_path / "out") == EXIT_BUNDLE


def test_preprocess_then_extract(corpus, tmp_path, capsys):
    bundle_dir = tmp_path / "bundle"
    assert run_preprocess(corpus, bundle_dir) == EXIT_OK
    assert (bundle_dir / BUNDLE_FILENAME).is_file()
    assert "2 sentence pairs" in capsys.readouterr().out

    test_file = tmp_path / "test.txt"
    test_file.write_text("le chat noir\nle chien vert\n", encoding="utf-8")
    out_dir = tmp_path / "grammars"
    assert run_extract(bundle_dir, test_file, out_dir) == EXIT_OK

    first = (out_dir / "grammar.0").read_text(encoding="utf-8")
    assert first.startswith("# grammar v1 features=")
    assert (
        "[X] ||| le [X,1] noir ||| the black [X,1] ||| "
        "EGivenFCoherent=0 SampleCountF=0.30103 CountEF=0.30103 "
        "MaxLexFGivenE=0 MaxLexEGivenF=0 ||| 0-0 2-1\n"
    ) in first
    assert (out_dir / "grammar.1").is_file()

    annotated = (out_dir / ANNOTATED_FILENAME).read_text(encoding="utf-8")
    lines = annotated.splitlines()
    assert lines[0] == (
        f'<seg grammar="{out_dir / "grammar.0"}" id="0"> le chat noir </seg>'
    )
    assert lines[1].endswith('id="1"> le chien vert </seg>')

    # --bundle may also point straight at the bundle file
    out2 = tmp_path / "grammars2"
    assert run_extract(bundle_dir / BUNDLE_FILENAME, test_file, out2) == EXIT_OK
    assert (out2 / "grammar.0").read_text(encoding="utf-8") == first


def test_empty_test_corpus(corpus, tmp_path):
    bundle_dir = tmp_path / "bundle"
    assert run_preprocess(corpus, bundle_dir) == EXIT_OK
    test_file = tmp_path / "empty.txt"
    test_file.write_text("", encoding="utf-8")
    out_dir = tmp_path / "out"
    assert run_extract(bundle_dir, test_file, out_dir) == EXIT_OK
    assert sorted(os.listdir(out_dir)) == [ANNOTATED_FILENAME]
    assert (out_dir / ANNOTATED_FILENAME).read_text(encoding="utf-8") == ""


def test_oov_sentence_gets_empty_grammar(corpus, tmp_path):
    bundle_dir = tmp_path / "bundle"
    assert run_preprocess(corpus, bundle_dir) == EXIT_OK
    test_file = tmp_path / "test.txt"
    test_file.write_text("totally unknown words\n", encoding="utf-8")
    out_dir = tmp_path / "out"
    assert run_extract(bundle_dir, test_file, out_dir) == EXIT_OK
    assert (out_dir / "grammar.0").read_bytes() == b""


def test_threading_does_not_change_output(corpus, tmp_path):
    bundle_dir = tmp_path / "bundle"
    assert run_preprocess(corpus, bundle_dir) == EXIT_OK
    test_file = tmp_path / "test.txt"
    test_file.write_text("le chat noir\nle chien\nle chat\n", encoding="utf-8")

    single = tmp_path / "single"
    threaded = tmp_path / "threaded"
    assert run_extract(bundle_dir, test_file, single, "--threads", "1") == EXIT_OK
    assert run_extract(bundle_dir, test_file, threaded, "--threads", "4") == EXIT_OK
    for i in range(3):
        assert (single / f"grammar.{i}").read_bytes() == (
            threaded / f"grammar.{i}"
        ).read_bytes()


def test_extract_override_changes_limits(corpus, tmp_path):
    bundle_dir = tmp_path / "bundle"
    assert run_preprocess(corpus, bundle_dir) == EXIT_OK
    test_file = tmp_path / "test.txt"
    test_file.write_text("le chat noir\n", encoding="utf-8")

    plain = tmp_path / "plain"
    narrowed = tmp_path / "narrowed"
    assert run_extract(bundle_dir, test_file, plain) == EXIT_OK
    assert run_extract(
        bundle_dir, test_file, narrowed, "--max-rule-span", "2"
    ) == EXIT_OK

    wide = (plain / "grammar.0").read_text(encoding="utf-8")
    narrow = (narrowed / "grammar.0").read_text(encoding="utf-8")
    assert "le [X,1] noir" in wide
    assert "le [X,1] noir" not in narrow  # span 3 no longer fits
    assert "max_rule_span=2" in narrow.splitlines()[0]


def test_grammar_files_parse_back(corpus, tmp_path):
    from sagex import load_bundle

    bundle_dir = tmp_path / "bundle"
    assert run_preprocess(corpus, bundle_dir) == EXIT_OK
    test_file = tmp_path / "test.txt"
    test_file.write_text("le chat noir\n", encoding="utf-8")
    out_dir = tmp_path / "out"
    assert run_extract(bundle_dir, test_file, out_dir) == EXIT_OK

    vocab = load_bundle(bundle_dir / BUNDLE_FILENAME).vocabulary
    with open(out_dir / "grammar.0", encoding="utf-8") as fh:
        rules = parse_grammar(fh, vocab)
    assert rules and all(len(r.features) == 5 for r in rules)
