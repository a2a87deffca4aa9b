"""Turning matched source phrases into scored translation rules.

For each occurrence of a matched phrase the aligned target span is closed
over the alignment; occurrences whose spans are inconsistent, or whose gaps
have no clean target image, yield nothing. Surviving occurrences produce the
base rule plus variants that take in one unaligned boundary word per side.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_CONFIG, ExtractorConfig
from .corpus import Alignment, DataArray, GAP, Vocabulary
from .lexical import NULL_WORD, TranslationTable
from .matching import MatchSet, PhraseMatcher, pattern_chunks

Symbols = tuple[int, ...]
Links = tuple[tuple[int, int], ...]

# Gap k (source order, 1-based) is symbol -k on both rule sides; word ids are
# always positive, so the sign alone separates terminals from gaps.


def gap_symbol(index: int) -> int:
    return -index


def is_gap_symbol(symbol: int) -> bool:
    return symbol < 0


@dataclass
class Rule:
    """One translation rule with its occurrence count and scored features."""

    source: Symbols
    target: Symbols
    alignment: Links
    count: int = 1
    features: tuple[tuple[str, float], ...] = field(default=())

    def key(self) -> tuple[Symbols, Symbols, Links]:
        return (self.source, self.target, self.alignment)


class SampledMatches:
    """A deterministic subset of match rows plus the original set size."""

    __slots__ = ("rows", "original_size")

    def __init__(self, rows: np.ndarray, original_size: int) -> None:
        self.rows = rows
        self.original_size = original_size

    def __len__(self) -> int:
        return int(self.rows.shape[0])


def sample_matches(matches: MatchSet, max_samples: int) -> SampledMatches:
    """Pick at most max_samples rows at a fixed stride: row floor(i*n/k)."""
    n = len(matches)
    if n <= max_samples:
        return SampledMatches(matches.positions, n)
    idx = (np.arange(max_samples, dtype=np.int64) * n) // max_samples
    return SampledMatches(matches.positions[idx], n)


def target_span(lo: int, hi: int, links) -> tuple[int, int] | None:
    """Smallest target window covering every link out of source [lo, hi]."""
    tlo, thi = None, None
    for i, j in links:
        if lo <= i <= hi:
            if tlo is None or j < tlo:
                tlo = j
            if thi is None or j > thi:
                thi = j
    if tlo is None:
        return None
    return tlo, thi


def is_consistent(src_lo: int, src_hi: int, tgt_lo: int, tgt_hi: int, links) -> bool:
    """No link may connect the inside of one span with the outside of the other."""
    for i, j in links:
        inside_src = src_lo <= i <= src_hi
        inside_tgt = tgt_lo <= j <= tgt_hi
        if inside_src != inside_tgt:
            return False
    return True


class PairView:
    """Pre-digested alignment of one sentence pair, shared across extractions."""

    __slots__ = (
        "src_start", "src_len", "target_ids", "links",
        "links_from_source", "links_to_target", "target_aligned",
    )

    def __init__(
        self,
        src_start: int,
        src_len: int,
        target_ids: list[int],
        links: list[tuple[int, int]],
    ) -> None:
        self.src_start = src_start
        self.src_len = src_len
        self.target_ids = target_ids
        self.links = links
        self.links_from_source: list[list[int]] = [[] for _ in range(src_len)]
        self.links_to_target: list[list[int]] = [[] for _ in range(len(target_ids))]
        self.target_aligned = [False] * len(target_ids)
        for i, j in links:
            self.links_from_source[i].append(j)
            self.links_to_target[j].append(i)
            self.target_aligned[j] = True


def extract_rules(
    row,
    symbols: Symbols,
    view: PairView,
    config: ExtractorConfig = DEFAULT_CONFIG,
) -> list[tuple[Symbols, Symbols, Links]]:
    """Rules from one phrase occurrence: (source, target, alignment) triples.

    Returns [] when the occurrence has no consistent aligned image. Otherwise
    the tight rule plus up to one unaligned-expansion variant per side, every
    alignment entry linking symbol positions of the two rule sides.
    """
    chunks = pattern_chunks(symbols)
    starts = [int(p) - view.src_start for p in row]
    src_lo = starts[0]
    src_hi = starts[-1] + chunks[-1][1] - 1
    if src_hi - src_lo + 1 > config.max_rule_span:
        return []

    links_from_source = view.links_from_source
    links_to_target = view.links_to_target
    target_len = len(view.target_ids)

    tlo, thi = target_len, -1
    for i in range(src_lo, src_hi + 1):
        for j in links_from_source[i]:
            if j < tlo:
                tlo = j
            if j > thi:
                thi = j
    if thi < 0:
        return []  # nothing aligned: no target image
    for j in range(tlo, thi + 1):
        for i in links_to_target[j]:
            if not src_lo <= i <= src_hi:
                return []

    gap_spans: list[tuple[int, int]] = []
    for t in range(len(chunks) - 1):
        g_lo = starts[t] + chunks[t][1]
        g_hi = starts[t + 1] - 1
        g_tlo, g_thi = target_len, -1
        for i in range(g_lo, g_hi + 1):
            for j in links_from_source[i]:
                if j < g_tlo:
                    g_tlo = j
                if j > g_thi:
                    g_thi = j
        if g_thi < 0:
            return []  # the gap must translate to something
        for j in range(g_tlo, g_thi + 1):
            for i in links_to_target[j]:
                if not g_lo <= i <= g_hi:
                    return []
        gap_spans.append((g_tlo, g_thi))
    if len(gap_spans) == 2:
        a, b = sorted(gap_spans)
        if b[0] <= a[1]:
            return []  # gap images overlap: no unambiguous placement

    # map source sentence position of each terminal to its symbol offset
    sym_of_src: dict[int, int] = {}
    for t, (sym_off, length) in enumerate(chunks):
        for off in range(length):
            sym_of_src[starts[t] + off] = sym_off + off

    rule_source = []
    g = 0
    for s in symbols:
        if s == GAP:
            g += 1
            rule_source.append(gap_symbol(g))
        else:
            rule_source.append(s)
    rule_source = tuple(rule_source)

    # which gap (if any) owns each target position inside the image
    gap_at = {}
    for gi, (a, b) in enumerate(gap_spans):
        for j in range(a, b + 1):
            gap_at[j] = gi

    target_ids = view.target_ids

    def build(v_lo: int, v_hi: int) -> tuple[Symbols, Symbols, Links]:
        target = []
        align = []
        j = v_lo
        while j <= v_hi:
            gi = gap_at.get(j)
            if gi is not None:
                target.append(gap_symbol(gi + 1))
                j = gap_spans[gi][1] + 1
            else:
                for i in links_to_target[j]:
                    align.append((sym_of_src[i], len(target)))
                target.append(target_ids[j])
                j += 1
        return rule_source, tuple(target), tuple(sorted(align))

    out = [build(tlo, thi)]
    can_left = tlo > 0 and not view.target_aligned[tlo - 1]
    can_right = thi + 1 < target_len and not view.target_aligned[thi + 1]
    if can_left:
        out.append(build(tlo - 1, thi))
    if can_right:
        out.append(build(tlo, thi + 1))
    if can_left and can_right:
        out.append(build(tlo - 1, thi + 1))
    return out


FEATURE_NAMES = (
    "EGivenFCoherent",
    "SampleCountF",
    "CountEF",
    "MaxLexFGivenE",
    "MaxLexEGivenF",
)


def _max_lex_features(
    rule: Rule, table: TranslationTable, ceiling: float
) -> tuple[float, float]:
    """(MaxLexFGivenE, MaxLexEGivenF): -log10 products of best link choices."""
    by_source: dict[int, list[int]] = defaultdict(list)
    by_target: dict[int, list[int]] = defaultdict(list)
    for i, j in rule.alignment:
        by_source[i].append(j)
        by_target[j].append(i)

    f_given_e = 0.0
    for k, s in enumerate(rule.source):
        if is_gap_symbol(s):
            continue
        partners = by_source.get(k)
        if partners:
            best = max(table.query(s, rule.target[j])[1] for j in partners)
        else:
            best = table.query(s, NULL_WORD)[1]
        if best <= 0.0:
            f_given_e = ceiling
            break
        f_given_e += -math.log10(best)
    f_given_e = min(f_given_e, ceiling)

    e_given_f = 0.0
    for k, t in enumerate(rule.target):
        if is_gap_symbol(t):
            continue
        partners = by_target.get(k)
        if partners:
            best = max(table.query(rule.source[i], t)[0] for i in partners)
        else:
            best = table.query(NULL_WORD, t)[0]
        if best <= 0.0:
            e_given_f = ceiling
            break
        e_given_f += -math.log10(best)
    e_given_f = min(e_given_f, ceiling)
    return f_given_e, e_given_f


def score_rules(
    rules: list[Rule],
    sample_size: int,
    table: TranslationTable,
    ceiling: float = 99.0,
) -> None:
    """Attach the five features, in order, to every rule of one source phrase.

    sample_size is the number of sampled occurrences the rules came from;
    pair counts are summed over alignment variants of the same source/target.
    """
    pair_counts: defaultdict = defaultdict(int)
    for r in rules:
        pair_counts[(r.source, r.target)] += r.count
    for r in rules:
        c = pair_counts[(r.source, r.target)]
        lex_fe, lex_ef = _max_lex_features(r, table, ceiling)
        r.features = (
            ("EGivenFCoherent", -math.log10(c / sample_size)),
            ("SampleCountF", math.log10(1 + sample_size)),
            ("CountEF", math.log10(1 + c)),
            ("MaxLexFGivenE", lex_fe),
            ("MaxLexEGivenF", lex_ef),
        )


class GrammarExtractor:
    """End-to-end extraction: match a sentence, then score what it licenses."""

    def __init__(
        self,
        vocabulary: Vocabulary,
        source: DataArray,
        target: DataArray,
        alignment: Alignment,
        matcher: PhraseMatcher,
        translation_table: TranslationTable,
        config: ExtractorConfig = DEFAULT_CONFIG,
    ) -> None:
        self.vocabulary = vocabulary
        self.source = source
        self.target = target
        self.alignment = alignment
        self.matcher = matcher
        self.translation_table = translation_table
        self.config = config

    def _view(self, cache: dict, sentence: int) -> PairView:
        view = cache.get(sentence)
        if view is None:
            start, end = self.source.sentence_bounds(sentence)
            view = PairView(
                start,
                end - start,
                self.target.sentence_ids(sentence).tolist(),
                [tuple(l) for l in self.alignment.links(sentence).tolist()],
            )
            cache[sentence] = view
        return view

    def extract_grammar(self, tokens) -> list[Rule]:
        """All scored rules for one query sentence, deterministically ordered."""
        cfg = self.config
        trie = self.matcher.match_sentence(tokens)
        position_to_sentence = self.source.position_to_sentence
        views: dict[int, PairView] = {}
        out: list[Rule] = []
        for symbols in sorted(k for k in trie.nodes if k):
            node = trie.nodes[symbols]
            if node.matchset is None:
                continue
            if symbols[0] == GAP or symbols[-1] == GAP:
                continue  # rules never begin or end with a gap
            sampled = sample_matches(node.matchset, cfg.max_samples)
            sample_size = len(sampled)
            counts: dict[tuple[Symbols, Symbols, Links], int] = {}
            for row in sampled.rows.tolist():
                view = self._view(views, int(position_to_sentence[row[0]]))
                for triple in extract_rules(row, symbols, view, cfg):
                    counts[triple] = counts.get(triple, 0) + 1
            if not counts:
                continue
            rules = [
                Rule(src, tgt, links, count)
                for (src, tgt, links), count in sorted(counts.items())
            ]
            score_rules(rules, sample_size, self.translation_table, cfg.lex_feature_ceiling)
            out.extend(rules)
        out.sort(key=Rule.key)
        return out
