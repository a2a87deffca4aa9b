"""Phrase matching over the indexed corpus.

Contiguous phrases narrow suffix-array intervals one word at a time; phrases
with gaps are grown by extending the match list of a shorter phrase, always
working from whichever side (prefix or suffix) has the smaller list. Per query
sentence, match sets are cached in a trie so each distinct subphrase is
computed once, and a phrase is searched at all only when both the phrase minus
its last symbol and the phrase minus its first symbol matched.
"""

from __future__ import annotations

from collections import defaultdict

import numpy as np

from .config import DEFAULT_CONFIG, ExtractorConfig
from .corpus import DataArray, FIRST_WORD_ID, GAP, Vocabulary
from .suffix_array import (
    SuffixArray,
    SuffixInterval,
    full_interval,
    interval_positions,
    narrow_interval,
)

Symbols = tuple[int, ...]


def pattern_chunks(symbols: Symbols) -> list[tuple[int, int]]:
    """Maximal terminal runs as (symbol offset, length) pairs."""
    chunks = []
    i, n = 0, len(symbols)
    while i < n:
        if symbols[i] == GAP:
            i += 1
            continue
        j = i
        while j < n and symbols[j] != GAP:
            j += 1
        chunks.append((i, j - i))
        i = j
    return chunks


def num_subpatterns(symbols: Symbols) -> int:
    return max(len(pattern_chunks(symbols)), 1)


def strip_outer_gaps(symbols: Symbols) -> Symbols:
    """Drop leading/trailing GAP symbols; occurrences are unaffected by them."""
    lo, hi = 0, len(symbols)
    while lo < hi and symbols[lo] == GAP:
        lo += 1
    while hi > lo and symbols[hi - 1] == GAP:
        hi -= 1
    return symbols[lo:hi]


def is_well_formed(symbols: Symbols, config: ExtractorConfig) -> bool:
    """Pattern sanity: some terminal, gap budget, no adjacent gaps, size cap."""
    if not symbols or len(symbols) > config.max_rule_symbols:
        return False
    gaps = symbols.count(GAP)
    if gaps == len(symbols) or gaps > config.max_nonterminals:
        return False
    return all(
        not (a == GAP and b == GAP) for a, b in zip(symbols, symbols[1:])
    )


class MatchSet:
    """Occurrences of one pattern: a row of chunk start positions per match.

    Rows are kept in ascending corpus order (lexicographic over the row), so
    equal sets are equal arrays regardless of how they were produced — the
    precomputed index, either extension direction, and the scan oracle all
    agree element for element.
    """

    __slots__ = ("num_subpatterns", "positions")

    def __init__(self, subpatterns: int, positions, canonical: bool = False) -> None:
        pos = np.ascontiguousarray(positions, dtype=np.int32).reshape(-1, subpatterns)
        if not canonical and pos.shape[0] > 1:
            order = np.lexsort(pos.T[::-1])
            pos = np.ascontiguousarray(pos[order])
        self.num_subpatterns = subpatterns
        self.positions = pos

    @classmethod
    def empty(cls, subpatterns: int) -> "MatchSet":
        return cls(subpatterns, np.empty((0, subpatterns), dtype=np.int32), canonical=True)

    def __len__(self) -> int:
        return int(self.positions.shape[0])

    def tuples(self) -> list[tuple[int, ...]]:
        return [tuple(row) for row in self.positions.tolist()]

    def row_set(self) -> set[tuple[int, ...]]:
        return set(self.tuples())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatchSet)
            and self.num_subpatterns == other.num_subpatterns
            and self.positions.shape == other.positions.shape
            and bool((self.positions == other.positions).all())
        )

    def __repr__(self) -> str:
        return f"MatchSet({self.num_subpatterns}, n={len(self)})"


def strip_outer_gap(symbols: Symbols, matches: MatchSet) -> MatchSet:
    """An outer gap adds no position information: the match set is reused as is."""
    return matches


class OpCounter:
    """Counts word-equality probes performed by the extension operations."""

    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0

    def add(self, n: int) -> None:
        self.count += n


def choose_extension_side(prefix_matches: MatchSet, suffix_matches: MatchSet) -> str:
    """Extend from whichever operand list is smaller; ties go to 'back'."""
    return "back" if len(prefix_matches) <= len(suffix_matches) else "front"


def extend_with_terminal(
    matches: MatchSet,
    pattern: Symbols,
    word: int,
    data_array: DataArray,
    config: ExtractorConfig = DEFAULT_CONFIG,
    counter: OpCounter | None = None,
) -> MatchSet:
    """M(pattern) -> M(pattern + (word,)): the last chunk grows by one word.

    One probe per tuple: keep rows whose last chunk is immediately followed by
    ``word``. A sentence-final chunk is followed by SENTINEL, which never
    equals a word id, so matches cannot cross sentence ends. Rows whose span
    would exceed max_rule_span are dropped.
    """
    pos = matches.positions
    n = len(matches)
    if counter is not None:
        counter.add(n)
    if n == 0:
        return MatchSet.empty(matches.num_subpatterns)
    last_len = pattern_chunks(pattern)[-1][1]
    data = data_array.data
    probe = pos[:, -1] + last_len
    ok = (data[probe] == word) & (probe - pos[:, 0] + 1 <= config.max_rule_span)
    return MatchSet(matches.num_subpatterns, pos[ok], canonical=True)


def extend_through_gap(
    matches: MatchSet,
    pattern: Symbols,
    word: int,
    data_array: DataArray,
    config: ExtractorConfig = DEFAULT_CONFIG,
    counter: OpCounter | None = None,
) -> MatchSet:
    """M(pattern) -> M(pattern + (GAP, word)): ``word`` starts a new chunk.

    For each tuple, scan the positions that keep the gap >= min_gap_size and
    the full span <= max_rule_span, stopping at the sentence end; one probe
    per scanned position.
    """
    pos = matches.positions
    m = matches.num_subpatterns
    n = len(matches)
    if n == 0:
        return MatchSet.empty(m + 1)
    last_len = pattern_chunks(pattern)[-1][1]
    data = data_array.data
    ends = pos[:, -1].astype(np.int64) + last_len
    w0 = ends + config.min_gap_size
    sent_end = data_array.next_sentinel[pos[:, -1]].astype(np.int64)
    limit = np.minimum(pos[:, 0].astype(np.int64) + config.max_rule_span - 1, sent_end - 1)
    lens = np.maximum(limit - w0 + 1, 0)
    if counter is not None:
        counter.add(int(lens.sum()))
    width = int(lens.max()) if n else 0
    if width <= 0:
        return MatchSet.empty(m + 1)
    offs = np.arange(width, dtype=np.int64)
    cand = w0[:, None] + offs[None, :]
    live = offs[None, :] < lens[:, None]
    hit = live & (data[np.where(live, cand, 0)] == word)
    rows, cols = np.nonzero(hit)
    if rows.size == 0:
        return MatchSet.empty(m + 1)
    out = np.empty((rows.size, m + 1), dtype=np.int32)
    out[:, :m] = pos[rows]
    out[:, m] = cand[rows, cols]
    return MatchSet(m + 1, out, canonical=True)


def extend_from_front(
    matches: MatchSet,
    pattern: Symbols,
    word: int,
    through_gap: bool,
    data_array: DataArray,
    config: ExtractorConfig = DEFAULT_CONFIG,
    counter: OpCounter | None = None,
) -> MatchSet:
    """Mirror-image extensions: prepend ``word`` before M(pattern).

    through_gap=False joins the first chunk (word immediately precedes it);
    through_gap=True opens a new first chunk separated by a gap.
    """
    pos = matches.positions
    m = matches.num_subpatterns
    n = len(matches)
    last_len = pattern_chunks(pattern)[-1][1] if n else 1
    data = data_array.data
    if not through_gap:
        if counter is not None:
            counter.add(n)
        if n == 0:
            return MatchSet.empty(m)
        first = pos[:, 0]
        last_end = pos[:, -1].astype(np.int64) + last_len
        probe = np.maximum(first - 1, 0)
        # a sentence-initial chunk is preceded by SENTINEL: never equal to word
        ok = (first > 0) & (data[probe] == word)
        ok &= (last_end - (first - 1)) <= config.max_rule_span
        out = pos[ok].copy()
        if out.size:
            out[:, 0] -= 1
        return MatchSet(m, out, canonical=True)

    if n == 0:
        return MatchSet.empty(m + 1)
    first = pos[:, 0].astype(np.int64)
    last_end = pos[:, -1].astype(np.int64) + last_len
    sent = data_array.position_to_sentence[pos[:, 0]]
    sent_start = data_array.sentence_start[sent].astype(np.int64)
    hi = first - config.min_gap_size - 1
    lo = np.maximum(last_end - config.max_rule_span, sent_start)
    lens = np.maximum(hi - lo + 1, 0)
    if counter is not None:
        counter.add(int(lens.sum()))
    width = int(lens.max()) if n else 0
    if width <= 0:
        return MatchSet.empty(m + 1)
    offs = np.arange(width, dtype=np.int64)
    cand = lo[:, None] + offs[None, :]
    live = offs[None, :] < lens[:, None]
    hit = live & (data[np.where(live, cand, 0)] == word)
    rows, cols = np.nonzero(hit)
    if rows.size == 0:
        return MatchSet.empty(m + 1)
    out = np.empty((rows.size, m + 1), dtype=np.int32)
    out[:, 0] = cand[rows, cols]
    out[:, 1:] = pos[rows]
    return MatchSet(m + 1, out)


def _window_occurrences(data_array: DataArray, words: Symbols) -> np.ndarray:
    """Start positions of a contiguous word sequence, by direct scanning."""
    data = data_array.data
    n = data.size
    k = len(words)
    if n < k or k == 0:
        return np.empty(0, dtype=np.int64)
    mask = data[: n - k + 1] == words[0]
    for off in range(1, k):
        mask &= data[off : n - k + 1 + off] == words[off]
    return np.nonzero(mask)[0]


def brute_force_match(
    symbols: Symbols,
    data_array: DataArray,
    config: ExtractorConfig = DEFAULT_CONFIG,
) -> MatchSet:
    """Scan oracle: place every chunk combination directly, no index involved.

    Outer gaps are stripped first (they carry no positions). Used by the test
    suite as the independent reference for both matching paths.
    """
    symbols = strip_outer_gaps(tuple(symbols))
    if not symbols or all(s == GAP for s in symbols):
        raise ValueError("pattern needs at least one terminal")
    chunks = pattern_chunks(symbols)
    words = [symbols[o : o + l] for o, l in chunks]
    lens = [l for _, l in chunks]
    occ = [_window_occurrences(data_array, w) for w in words]
    if any(o.size == 0 for o in occ):
        return MatchSet.empty(len(chunks))

    if len(chunks) == 1:
        if lens[0] > config.max_rule_span:
            return MatchSet.empty(1)
        return MatchSet(1, occ[0][:, None], canonical=True)

    p2s = data_array.position_to_sentence
    by_sent: list[dict[int, np.ndarray]] = []
    for o in occ:
        sents = p2s[o]
        d: dict[int, np.ndarray] = {}
        bounds = np.nonzero(np.diff(sents))[0] + 1
        for grp, block in zip(np.split(sents, bounds), np.split(o, bounds)):
            if grp.size:
                d[int(grp[0])] = block
        by_sent.append(d)

    rows: list[list[int]] = []
    min_gap = config.min_gap_size
    span = config.max_rule_span

    def place(sent: int, depth: int, prefix: list[int]) -> None:
        if depth == len(chunks):
            rows.append(list(prefix))
            return
        cands = by_sent[depth].get(sent)
        if cands is None:
            return
        lo = prefix[-1] + lens[depth - 1] + min_gap
        hi = prefix[0] + span - lens[depth]
        a = int(np.searchsorted(cands, lo, side="left"))
        b = int(np.searchsorted(cands, hi, side="right"))
        for q in cands[a:b].tolist():
            prefix.append(q)
            place(sent, depth + 1, prefix)
            prefix.pop()

    for start in occ[0].tolist():
        if lens[0] > span:
            break
        place(int(p2s[start]), 1, [start])
    out = np.asarray(rows, dtype=np.int32).reshape(-1, len(chunks))
    return MatchSet(len(chunks), out)


class TrieNode:
    """One cached pattern: match set (None when absent), children, suffix link."""

    __slots__ = (
        "symbols", "matchset", "interval", "children",
        "suffix_link", "comparisons", "operand_sizes",
    )

    def __init__(self, symbols: Symbols) -> None:
        self.symbols = symbols
        self.matchset: MatchSet | None = None
        self.interval: SuffixInterval | None = None
        self.children: dict[int, "TrieNode"] = {}
        self.suffix_link: "TrieNode | None" = None
        self.comparisons = 0
        self.operand_sizes: tuple[int, int] | None = None


class SentenceTrie:
    """Per-sentence cache of every subphrase looked up while matching."""

    def __init__(self) -> None:
        self.root = TrieNode(())
        self.nodes: dict[Symbols, TrieNode] = {(): self.root}

    def node(self, symbols: Symbols) -> TrieNode | None:
        return self.nodes.get(tuple(symbols))

    def matches(self, symbols: Symbols) -> MatchSet | None:
        """Match set for a pattern (outer gaps ignored); None when absent."""
        key = strip_outer_gaps(tuple(symbols))
        node = self.nodes.get(key)
        return None if node is None else node.matchset


class MatcherStats:
    """Aggregate probe counts, for the efficiency contract tests."""

    def __init__(self) -> None:
        self.gapped_comparisons = 0

    def reset(self) -> None:
        self.gapped_comparisons = 0


class PhraseMatcher:
    """Match every in-limit subphrase of query sentences against the corpus."""

    def __init__(
        self,
        vocabulary: Vocabulary,
        suffix_array: SuffixArray,
        collocations=None,
        config: ExtractorConfig = DEFAULT_CONFIG,
    ) -> None:
        self.vocabulary = vocabulary
        self.suffix_array = suffix_array
        self.data_array = suffix_array.data_array
        self.collocations = collocations
        self.config = config
        self.stats = MatcherStats()
        self._full = full_interval(suffix_array)

    def match_sentence(self, tokens) -> SentenceTrie:
        """Build the trie of match sets for one tokenized query sentence.

        Patterns are enumerated breadth-first from their anchorings in the
        sentence, so a pattern's parent (minus last symbol) and suffix (minus
        first symbol) are always resolved before the pattern itself.
        """
        if tokens and isinstance(tokens[0], str):
            ids = [self.vocabulary.id_of(t) for t in tokens]
        else:
            ids = [int(t) for t in tokens]
        cfg = self.config
        m = len(ids)
        trie = SentenceTrie()
        pending: dict[int, list] = defaultdict(list)
        seen: set = set()

        def push(s: int, e: int, symbols: Symbols) -> None:
            inst = (s, e, symbols)
            if inst not in seen:
                seen.add(inst)
                pending[len(symbols)].append(inst)

        for i in range(m):
            push(i, i + 1, (ids[i],))

        for level in range(1, cfg.max_rule_symbols + 1):
            for s, e, symbols in pending.pop(level, ()):
                node = trie.nodes.get(symbols)
                if node is None:
                    node = self._compute_node(trie, symbols)
                if node.matchset is None:
                    continue  # absent: descendants are never searched
                if (
                    e < m
                    and level + 1 <= cfg.max_rule_symbols
                    and e + 1 - s <= cfg.max_rule_span
                ):
                    push(s, e + 1, symbols + (ids[e],))
                if level + 2 <= cfg.max_rule_symbols and symbols.count(GAP) < cfg.max_nonterminals:
                    for j in range(e + cfg.min_gap_size, min(m, s + cfg.max_rule_span)):
                        push(s, j + 1, symbols + (GAP, ids[j]))
        return trie

    # -- node construction -------------------------------------------------

    def _compute_node(self, trie: SentenceTrie, symbols: Symbols) -> TrieNode:
        cfg = self.config
        if len(symbols) == 1:
            wid = symbols[0]
            if wid < FIRST_WORD_ID:  # OOV (UNK) can never occur in the corpus
                return self._store(trie, symbols, None)
            iv = narrow_interval(self.suffix_array, self._full, wid)
            if iv.empty:
                return self._store(trie, symbols, None)
            ms = MatchSet(
                1, interval_positions(self.suffix_array, iv)[:, None], canonical=True
            )
            return self._store(trie, symbols, ms, interval=iv)

        if GAP not in symbols:
            parent = trie.nodes[symbols[:-1]]
            suffix = trie.nodes[symbols[1:]]
            if parent.matchset is None or suffix.matchset is None:
                return self._store(trie, symbols, None)
            iv = narrow_interval(self.suffix_array, parent.interval, symbols[-1])
            if iv.empty:
                return self._store(trie, symbols, None)
            ms = MatchSet(
                1, interval_positions(self.suffix_array, iv)[:, None], canonical=True
            )
            return self._store(trie, symbols, ms, interval=iv)

        parent = self._node_for(trie, symbols[:-1])
        suffix = self._node_for(trie, symbols[1:])
        if parent.matchset is None or suffix.matchset is None:
            return self._store(trie, symbols, None)
        sizes = (len(parent.matchset), len(suffix.matchset))

        if self.collocations is not None:
            hit = self.collocations.lookup(symbols)
            if hit is not None:
                ms = hit if len(hit) else None
                return self._store(trie, symbols, ms, operand_sizes=sizes)

        counter = OpCounter()
        if choose_extension_side(parent.matchset, suffix.matchset) == "back":
            prefix_pattern = strip_outer_gaps(symbols[:-1])
            if symbols[-2] == GAP:
                ms = extend_through_gap(
                    parent.matchset, prefix_pattern, symbols[-1],
                    self.data_array, cfg, counter,
                )
            else:
                ms = extend_with_terminal(
                    parent.matchset, prefix_pattern, symbols[-1],
                    self.data_array, cfg, counter,
                )
        else:
            suffix_pattern = strip_outer_gaps(symbols[1:])
            ms = extend_from_front(
                suffix.matchset, suffix_pattern, symbols[0],
                through_gap=(symbols[1] == GAP),
                data_array=self.data_array, config=cfg, counter=counter,
            )
        self.stats.gapped_comparisons += counter.count
        return self._store(
            trie, symbols, ms if len(ms) else None,
            comparisons=counter.count, operand_sizes=sizes,
        )

    def _node_for(self, trie: SentenceTrie, symbols: Symbols) -> TrieNode:
        """Node for a pattern that may carry outer gaps, sharing the inner set."""
        node = trie.nodes.get(symbols)
        if node is not None:
            return node
        base = trie.nodes[strip_outer_gaps(symbols)]
        return self._store(trie, symbols, base.matchset, interval=base.interval)

    def _store(
        self,
        trie: SentenceTrie,
        symbols: Symbols,
        matchset: MatchSet | None,
        interval: SuffixInterval | None = None,
        comparisons: int = 0,
        operand_sizes: tuple[int, int] | None = None,
    ) -> TrieNode:
        node = TrieNode(symbols)
        node.matchset = matchset
        node.interval = interval
        node.comparisons = comparisons
        node.operand_sizes = operand_sizes
        trie.nodes[symbols] = node
        parent_key = symbols[:-1]
        if parent_key and parent_key not in trie.nodes:
            if all(s == GAP for s in parent_key):
                # structural placeholder only; never a matchable pattern
                trie.nodes[parent_key] = TrieNode(parent_key)
                trie.root.children[GAP] = trie.nodes[parent_key]
            else:
                self._node_for(trie, parent_key)
        trie.nodes[parent_key].children[symbols[-1]] = node
        if len(symbols) == 1:
            node.suffix_link = trie.root
        else:
            node.suffix_link = trie.nodes.get(symbols[1:])
        return node
