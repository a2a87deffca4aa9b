"""Suffix array and LCP array over the source side of an encoded corpus.

The array indexes every non-SENTINEL position. Suffixes compare with SENTINEL
as the smallest symbol, so a sentence-final word's one-word suffix sorts before
any longer suffix sharing its first word; ties between suffixes whose sentences
are duplicated resolve by continuing comparison into the following material,
which keeps the order total and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import DataArray, SENTINEL


def _suffix_order(data: np.ndarray) -> np.ndarray:
    """Sort all suffixes of ``data`` by prefix doubling (O(N log N) passes)."""
    n = data.size
    if n == 0:
        return np.empty(0, dtype=np.int64)
    rank = data.astype(np.int64)
    k = 1
    order = np.argsort(rank, kind="stable")
    while True:
        key2 = np.full(n, -1, dtype=np.int64)
        if k < n:
            key2[: n - k] = rank[k:]
        order = np.lexsort((key2, rank))
        r1 = rank[order]
        r2 = key2[order]
        new_sorted = np.zeros(n, dtype=np.int64)
        if n > 1:
            new_sorted[1:] = np.cumsum(
                (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
            )
        rank = np.empty(n, dtype=np.int64)
        rank[order] = new_sorted
        if new_sorted[-1] == n - 1:
            break
        k *= 2
    return order


class SuffixArray:
    """Sorted suffix positions of one DataArray, SENTINEL starts excluded."""

    def __init__(self, data_array: DataArray, sa: np.ndarray) -> None:
        self.data_array = data_array
        self.sa = np.ascontiguousarray(sa, dtype=np.int32)

    def __len__(self) -> int:
        return int(self.sa.size)


def build_suffix_array(data_array: DataArray) -> SuffixArray:
    data = data_array.data
    order = _suffix_order(data)
    if order.size:
        order = order[data[order] != SENTINEL]
    return SuffixArray(data_array, order.astype(np.int32))


class LcpArray:
    """lcp[i] = longest common prefix of suffixes sa[i-1] and sa[i].

    Common prefixes never count past a SENTINEL, so values are bounded by the
    shorter suffix's distance to its sentence end. lcp[0] = 0.
    """

    def __init__(self, suffix_array: SuffixArray, lcp: np.ndarray) -> None:
        self.suffix_array = suffix_array
        self.lcp = np.ascontiguousarray(lcp, dtype=np.int32)


def build_lcp_array(suffix_array: SuffixArray) -> LcpArray:
    """Kasai's linear-time LCP over the full array, clamped at sentence ends."""
    data_array = suffix_array.data_array
    data = data_array.data
    n = int(data.size)
    if n == 0:
        return LcpArray(suffix_array, np.empty(0, dtype=np.int32))

    full_order = _suffix_order(data)
    rank = np.empty(n, dtype=np.int64)
    rank[full_order] = np.arange(n)

    dlist = data.tolist()
    order_list = full_order.tolist()
    rank_list = rank.tolist()
    lcp_full = [0] * n
    h = 0
    for i in range(n):
        r = rank_list[i]
        if r > 0:
            j = order_list[r - 1]
            while i + h < n and j + h < n and dlist[i + h] == dlist[j + h]:
                h += 1
            lcp_full[r] = h
            if h > 0:
                h -= 1
        else:
            h = 0

    # clamp at the distance to each suffix's sentence end, then drop the
    # leading block of sentinel-start suffixes (they all sort first)
    dist = (data_array.next_sentinel - np.arange(n)).astype(np.int64)
    lcp_arr = np.asarray(lcp_full, dtype=np.int64)
    prev_dist = np.empty(n, dtype=np.int64)
    prev_dist[0] = 0
    prev_dist[1:] = dist[full_order[:-1]]
    clamped = np.minimum(lcp_arr, np.minimum(prev_dist, dist[full_order]))

    num_sentinels = n - len(suffix_array)
    out = clamped[num_sentinels:].astype(np.int32)
    if out.size:
        out[0] = 0
    return LcpArray(suffix_array, out)


@dataclass(frozen=True)
class SuffixInterval:
    """Half-open run [low, high) of suffix-array rows sharing a matched prefix."""

    low: int
    high: int
    matched_length: int

    def __len__(self) -> int:
        return self.high - self.low

    @property
    def empty(self) -> bool:
        return self.high <= self.low


def full_interval(suffix_array: SuffixArray) -> SuffixInterval:
    return SuffixInterval(0, len(suffix_array), 0)


def narrow_interval(
    suffix_array: SuffixArray, interval: SuffixInterval, word: int
) -> SuffixInterval:
    """Shrink ``interval`` to suffixes whose next word equals ``word``.

    Two binary searches probing only data[sa[k] + matched_length]; suffixes
    that end (hit SENTINEL) before that offset sort below every real word and
    fall out automatically. O(log N) comparisons.
    """
    sa = suffix_array.sa
    data = suffix_array.data_array.data
    off = interval.matched_length

    lo, hi = interval.low, interval.high
    while lo < hi:
        mid = (lo + hi) // 2
        if data[sa[mid] + off] < word:
            lo = mid + 1
        else:
            hi = mid
    left = lo

    hi = interval.high
    while lo < hi:
        mid = (lo + hi) // 2
        if data[sa[mid] + off] <= word:
            lo = mid + 1
        else:
            hi = mid
    return SuffixInterval(left, lo, off + 1)


def interval_positions(suffix_array: SuffixArray, interval: SuffixInterval) -> np.ndarray:
    """Corpus positions covered by an interval, in ascending corpus order."""
    return np.sort(suffix_array.sa[interval.low : interval.high])
