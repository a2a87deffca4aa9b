"""Text form of extracted grammars.

One rule per line:

    [X] ||| source symbols ||| target symbols ||| name=value features ||| i-j links

Gaps print as [X,1] and [X,2]; features keep a fixed order so files diff
cleanly; numbers use at most six significant digits. A non-empty grammar
starts with a comment line recording the format version, feature order, and
extraction limits.
"""

from __future__ import annotations

import io

from .config import DEFAULT_CONFIG, ExtractorConfig
from .corpus import FormatError, Vocabulary
from .extraction import FEATURE_NAMES, Rule, is_gap_symbol

GRAMMAR_FORMAT_VERSION = 1
FIELD_SEPARATOR = " ||| "
LHS = "[X]"


def format_number(value: float) -> str:
    text = "%.6g" % value
    return "0" if text in ("-0", "-0.0") else text


def render_symbol(symbol: int, vocabulary: Vocabulary) -> str:
    if is_gap_symbol(symbol):
        return f"[X,{-symbol}]"
    return vocabulary.token_of(symbol)


def rule_to_line(rule: Rule, vocabulary: Vocabulary) -> str:
    source = " ".join(render_symbol(s, vocabulary) for s in rule.source)
    target = " ".join(render_symbol(s, vocabulary) for s in rule.target)
    features = " ".join(f"{name}={format_number(v)}" for name, v in rule.features)
    links = " ".join(f"{i}-{j}" for i, j in rule.alignment)
    return FIELD_SEPARATOR.join((LHS, source, target, features, links))


def grammar_header(config: ExtractorConfig) -> str:
    return (
        f"# grammar v{GRAMMAR_FORMAT_VERSION}"
        f" features={','.join(FEATURE_NAMES)}"
        f" {config.limits_echo()}"
    )


def render_grammar(
    rules: list[Rule],
    vocabulary: Vocabulary,
    config: ExtractorConfig = DEFAULT_CONFIG,
) -> str:
    """The full file content; empty input renders to an empty file."""
    if not rules:
        return ""
    out = io.StringIO()
    out.write(grammar_header(config))
    out.write("\n")
    for rule in rules:
        out.write(rule_to_line(rule, vocabulary))
        out.write("\n")
    return out.getvalue()


def write_grammar(
    rules: list[Rule],
    path,
    vocabulary: Vocabulary,
    config: ExtractorConfig = DEFAULT_CONFIG,
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_grammar(rules, vocabulary, config))


def _parse_symbol(token: str, vocabulary: Vocabulary) -> int:
    if token.startswith("[X,") and token.endswith("]"):
        body = token[3:-1]
        if not body.isdigit() or int(body) < 1:
            raise FormatError(f"bad gap symbol: {token!r}")
        return -int(body)
    if token not in vocabulary:
        raise FormatError(f"unknown token in grammar: {token!r}")
    return vocabulary.id_of(token)


def parse_grammar(lines, vocabulary: Vocabulary) -> list[Rule]:
    """Read rules back from text; the inverse of render_grammar.

    Comment lines (leading '#') and blank lines are skipped. Occurrence
    counts are not stored in the format, so parsed rules carry count=0.
    """
    rules = []
    for line_number, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split(FIELD_SEPARATOR)
        if len(parts) != 5:
            raise FormatError(
                f"line {line_number}: expected 5 fields, got {len(parts)}"
            )
        lhs, source_text, target_text, feature_text, link_text = parts
        if lhs.strip() != LHS:
            raise FormatError(f"line {line_number}: bad left-hand side {lhs!r}")
        source = tuple(
            _parse_symbol(t, vocabulary) for t in source_text.split()
        )
        target = tuple(
            _parse_symbol(t, vocabulary) for t in target_text.split()
        )
        features = []
        for item in feature_text.split():
            name, eq, value = item.partition("=")
            if not eq:
                raise FormatError(f"line {line_number}: bad feature {item!r}")
            features.append((name, float(value)))
        links = []
        for item in link_text.split():
            i, dash, j = item.partition("-")
            if not dash or not i.isdigit() or not j.isdigit():
                raise FormatError(f"line {line_number}: bad link {item!r}")
            links.append((int(i), int(j)))
        rules.append(
            Rule(source, target, tuple(links), count=0, features=tuple(features))
        )
    return rules
