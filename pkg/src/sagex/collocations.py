"""Precomputed match sets for gapped combinations of frequent phrases.

The most frequent short contiguous patterns are mined from the LCP array,
then every in-limit pairing of their occurrences (u GAP v, and u GAP v GAP w)
is tabulated in one corpus pass. Matching consults this table before falling
back to extension, so the most expensive intersections are answered with no
per-position probing at all.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import chain

import numpy as np

from .config import DEFAULT_CONFIG, ExtractorConfig
from .corpus import DataArray, GAP
from .matching import MatchSet, _window_occurrences
from .suffix_array import LcpArray, SuffixArray

Symbols = tuple[int, ...]


@dataclass(frozen=True)
class FrequentPattern:
    symbols: Symbols
    frequency: int


class FrequentPatternSet:
    """The top-k contiguous patterns by corpus frequency."""

    def __init__(self, patterns: list[FrequentPattern]) -> None:
        self.patterns = list(patterns)

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)


def find_frequent_patterns(
    lcp_array: LcpArray,
    k: int,
    max_pattern_len: int,
) -> FrequentPatternSet:
    """Mine the k most frequent contiguous patterns up to max_pattern_len words.

    Walks the LCP array with the standard interval stack. A maximal repeat
    interval of depth d whose enclosing interval has depth p stands for the
    patterns of lengths p+1 .. d, each occurring exactly interval-width
    times; all of them are candidates. Ties break toward shorter patterns,
    then lexicographically smaller ids.
    """
    suffix_array = lcp_array.suffix_array
    sa = suffix_array.sa
    data = suffix_array.data_array.data
    lcp = lcp_array.lcp
    n = sa.size
    if n == 0 or k == 0:
        return FrequentPatternSet([])

    candidates: list[tuple[int, Symbols]] = []
    stack: list[tuple[int, int]] = []  # (depth, leftmost row)
    lcp_list = lcp.tolist()
    for i in range(1, n + 1):
        cur = lcp_list[i] if i < n else 0
        left = i - 1
        while stack and stack[-1][0] > cur:
            depth, left = stack.pop()
            parent_depth = max(stack[-1][0] if stack else 0, cur)
            width = i - left
            if width < 2:
                continue
            start = int(sa[left])
            # each length in (parent depth, depth] names a distinct pattern
            # whose occurrence set is exactly this interval
            for length in range(parent_depth + 1, min(depth, max_pattern_len) + 1):
                symbols = tuple(data[start : start + length].tolist())
                candidates.append((width, symbols))
        if cur > 0 and (not stack or stack[-1][0] < cur):
            stack.append((cur, left))

    top = heapq.nsmallest(
        k, candidates, key=lambda c: (-c[0], len(c[1]), c[1])
    )
    return FrequentPatternSet([FrequentPattern(sym, freq) for freq, sym in top])


_EMPTY_PAIRS = np.empty((0, 2), dtype=np.int32)
_EMPTY_TRIPLES = np.empty((0, 3), dtype=np.int32)


class CollocationIndex:
    """Exact-match table from gapped pattern symbols to their match sets.

    Positions live in two flat arrays (one per gap count) and each entry
    records its slice, so building and serializing the index move a couple
    of large arrays instead of millions of tiny ones. Lookups wrap the
    slice in a MatchSet view on demand.
    """

    def __init__(
        self,
        entries: dict[Symbols, tuple[int, int]] | None = None,
        pair_positions: np.ndarray | None = None,
        triple_positions: np.ndarray | None = None,
    ) -> None:
        self.entries = entries if entries is not None else {}
        self.pair_positions = (
            pair_positions if pair_positions is not None else _EMPTY_PAIRS
        )
        self.triple_positions = (
            triple_positions if triple_positions is not None else _EMPTY_TRIPLES
        )

    def lookup(self, symbols: Symbols) -> MatchSet | None:
        """The stored match set, or None when the pattern was not tabulated.

        Contiguous patterns are never stored; callers resolve those through
        the suffix array.
        """
        key = tuple(symbols)
        entry = self.entries.get(key)
        if entry is None:
            return None
        offset, count = entry
        if key.count(GAP) == 1:
            rows = self.pair_positions[offset : offset + count]
            return MatchSet(2, rows, canonical=True)
        rows = self.triple_positions[offset : offset + count]
        return MatchSet(3, rows, canonical=True)

    def keys(self):
        return self.entries.keys()

    def items(self):
        for key in self.entries:
            yield key, self.lookup(key)

    def __contains__(self, symbols) -> bool:
        return tuple(symbols) in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def build_collocation_index(
    data_array: DataArray,
    frequent: FrequentPatternSet,
    config: ExtractorConfig = DEFAULT_CONFIG,
) -> CollocationIndex:
    """Tabulate co-occurrences of frequent patterns in a single corpus pass.

    Every ordered pair (and triple) of occurrences within one sentence is
    kept when each gap is at least min_gap_size wide and the overall span
    stays within max_rule_span. Positions are appended in ascending corpus
    order, so the stored arrays are already canonical.
    """
    patterns = [fp.symbols for fp in frequent]
    if not patterns:
        return CollocationIndex()

    starts_parts = []
    pids_parts = []
    for pid, symbols in enumerate(patterns):
        occ = _window_occurrences(data_array, symbols)
        if occ.size:
            starts_parts.append(occ)
            pids_parts.append(np.full(occ.size, pid, dtype=np.int64))
    if not starts_parts:
        return CollocationIndex()

    starts = np.concatenate(starts_parts)
    pids = np.concatenate(pids_parts)
    order = np.lexsort((pids, starts))
    starts = starts[order]
    pids = pids[order]
    sents = data_array.position_to_sentence[starts]

    lens = [len(p) for p in patterns]
    min_gap = config.min_gap_size
    span = config.max_rule_span
    table: dict[Symbols, list] = {}

    bounds = np.nonzero(np.diff(sents))[0] + 1
    for s_block, p_block in zip(np.split(starts, bounds), np.split(pids, bounds)):
        occ_s = s_block.tolist()
        occ_p = p_block.tolist()
        n = len(occ_s)
        for a in range(n):
            ua, pa = occ_s[a], occ_p[a]
            ea = ua + lens[pa]
            first_limit = ua + span
            for b in range(a + 1, n):
                ub, pb = occ_s[b], occ_p[b]
                if ub >= first_limit:
                    break
                if ub - ea < min_gap:
                    continue
                eb = ub + lens[pb]
                if eb - ua > span:
                    continue
                key2 = patterns[pa] + (GAP,) + patterns[pb]
                table.setdefault(key2, []).append((ua, ub))
                for c in range(b + 1, n):
                    uc, pc = occ_s[c], occ_p[c]
                    if uc >= first_limit:
                        break
                    if uc - eb < min_gap:
                        continue
                    if uc + lens[pc] - ua > span:
                        continue
                    key3 = key2 + (GAP,) + patterns[pc]
                    table.setdefault(key3, []).append((ua, ub, uc))

    entries: dict[Symbols, tuple[int, int]] = {}
    pair_parts: list[list] = []
    triple_parts: list[list] = []
    pair_rows = triple_rows = 0
    for key, rows in table.items():
        count = len(rows)
        if len(rows[0]) == 2:
            entries[key] = (pair_rows, count)
            pair_rows += count
            pair_parts.append(rows)
        else:
            entries[key] = (triple_rows, count)
            triple_rows += count
            triple_parts.append(rows)
    return CollocationIndex(
        entries,
        _stack_rows(pair_parts, pair_rows, 2),
        _stack_rows(triple_parts, triple_rows, 3),
    )


def _stack_rows(parts: list[list], rows: int, width: int) -> np.ndarray:
    flat = np.fromiter(
        chain.from_iterable(map(chain.from_iterable, parts)),
        dtype=np.int32,
        count=rows * width,
    )
    return flat.reshape(rows, width)
