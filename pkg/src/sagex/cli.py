"""Command-line front end.

Two commands: `preprocess` turns an aligned corpus into a single binary
bundle; `extract` loads a bundle and writes one grammar file per input
sentence plus an annotated copy of the input. Exit codes: 0 success,
1 usage, 2 input format, 3 bundle version or structure, 4 I/O.
"""

from __future__ import annotations

import argparse
import os
import sys
import threading

from .bundle import BUNDLE_VERSION, BundleError, load_bundle, preprocess
from .config import DEFAULT_CONFIG
from .corpus import FormatError, read_alignment, read_tokenized
from .grammar_io import write_grammar

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_BUNDLE = 3
EXIT_IO = 4

BUNDLE_FILENAME = "bundle.sagex"
ANNOTATED_FILENAME = "corpus.annotated"


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; route through our codes instead
    def error(self, message):
        raise UsageError(message)


_LIMIT_FLAGS = (
    ("--max-rule-span", "max_rule_span"),
    ("--max-nonterminals", "max_nonterminals"),
    ("--max-rule-symbols", "max_rule_symbols"),
    ("--min-gap-size", "min_gap_size"),
    ("--max-samples", "max_samples"),
)
_BUILD_FLAGS = (
    ("--frequent-patterns", "frequent_patterns"),
    ("--max-pattern-len", "max_pattern_len"),
)


def _add_limits(parser, flags) -> None:
    for flag, dest in flags:
        parser.add_argument(flag, dest=dest, type=int, default=None, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="sagex",
        description="Suffix-array grammar extraction over a word-aligned corpus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pre = sub.add_parser("preprocess", help="index an aligned corpus into a bundle")
    pre.add_argument("--source", required=True, help="tokenized source text, one sentence per line")
    pre.add_argument("--target", required=True, help="tokenized target text, one sentence per line")
    pre.add_argument("--alignment", required=True, help="word alignment, i-j pairs per line")
    pre.add_argument("--out", required=True, help="output directory for the bundle")
    _add_limits(pre, _LIMIT_FLAGS + _BUILD_FLAGS)
    pre.set_defaults(func=cmd_preprocess)

    ext = sub.add_parser("extract", help="write per-sentence grammars for a test corpus")
    ext.add_argument("--bundle", required=True, help="bundle directory (or file) from preprocess")
    ext.add_argument("--input", required=True, help="tokenized test corpus, one sentence per line")
    ext.add_argument("--out", required=True, help="output directory for grammar files")
    ext.add_argument("--threads", type=int, default=None, metavar="N")
    _add_limits(ext, _LIMIT_FLAGS)
    ext.set_defaults(func=cmd_extract)
    return parser


def _overrides(args, flags) -> dict:
    out = {}
    for _, dest in flags:
        value = getattr(args, dest, None)
        if value is not None:
            out[dest] = value
    return out


def _read_lines(path) -> list[str]:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.readlines()


def cmd_preprocess(args) -> int:
    config = DEFAULT_CONFIG.replace(**_overrides(args, _LIMIT_FLAGS + _BUILD_FLAGS))
    source = read_tokenized(_read_lines(args.source))
    target = read_tokenized(_read_lines(args.target))
    alignment = read_alignment(_read_lines(args.alignment))
    if alignment.num_sentences != len(source):
        raise FormatError(
            "alignment has wrong sentence count: "
            f"{alignment.num_sentences} vs {len(source)}"
        )
    bundle = preprocess(source, target, alignment, config)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, BUNDLE_FILENAME)
    bundle.save(path)
    print(
        f"wrote {path}: {len(source)} sentence pairs, "
        f"{len(bundle.vocabulary)} vocabulary entries, bundle v{BUNDLE_VERSION}"
    )
    return EXIT_OK


def run_batch(extractor, sentences, out_dir, config) -> list[str]:
    """Extract every sentence, one grammar file each, then the annotated copy.

    Work is handed out through a shared counter; any thread picks up the next
    unclaimed sentence, and each output file is written by exactly one thread.
    """
    paths = [os.path.join(out_dir, f"grammar.{i}") for i in range(len(sentences))]
    lock = threading.Lock()
    counter = [0]
    failures: list[BaseException] = []

    def worker() -> None:
        while True:
            with lock:
                if failures:
                    return
                i = counter[0]
                counter[0] += 1
            if i >= len(sentences):
                return
            try:
                rules = extractor.extract_grammar(sentences[i])
                write_grammar(rules, paths[i], extractor.vocabulary, config)
            except BaseException as exc:
                with lock:
                    failures.append(exc)
                return

    thread_count = max(1, config.threads)
    if thread_count == 1 or len(sentences) <= 1:
        worker()
    else:
        workers = [
            threading.Thread(target=worker, name=f"extract-{k}")
            for k in range(thread_count)
        ]
        for t in workers:
            t.start()
        for t in workers:
            t.join()
    if failures:
        raise failures[0]

    annotated = os.path.join(out_dir, ANNOTATED_FILENAME)
    with open(annotated, "w", encoding="utf-8", newline="\n") as fh:
        for i, sent in enumerate(sentences):
            fh.write(f'<seg grammar="{paths[i]}" id="{i}"> {" ".join(sent)} </seg>\n')
    return paths


def cmd_extract(args) -> int:
    bundle_path = args.bundle
    if os.path.isdir(bundle_path):
        bundle_path = os.path.join(bundle_path, BUNDLE_FILENAME)
    bundle = load_bundle(bundle_path)
    changes = _overrides(args, _LIMIT_FLAGS)
    if args.threads is not None:
        changes["threads"] = args.threads
    config = bundle.config.replace(**changes) if changes else bundle.config
    extractor = bundle.build_extractor(config)
    sentences = read_tokenized(_read_lines(args.input))
    os.makedirs(args.out, exist_ok=True)
    run_batch(extractor, sentences, args.out, config)
    print(f"wrote {len(sentences)} grammar files to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except UnicodeDecodeError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except ValueError as exc:  # bad limit values reported by config validation
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BundleError as exc:
        print(f"bundle error: {exc}", file=sys.stderr)
        return EXIT_BUNDLE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
