"""Independent reference implementations the tests check the library against.

Everything here is deliberately naive: suffixes are compared as byte strings,
occurrences are found by scanning, and rules are derived by enumerating spans
directly from the consistency definition, so none of the library's indexing
or extension machinery is involved.
"""

from __future__ import annotations

import random

import numpy as np

from sagex.config import ExtractorConfig
from sagex.corpus import DataArray, GAP, SENTINEL


# -- suffix structures ---------------------------------------------------------


def naive_suffix_array(data_array: DataArray) -> np.ndarray:
    """Sort every word-initial suffix by comparing raw big-endian bytes."""
    data = data_array.data
    be = np.ascontiguousarray(data, dtype=">i4")
    order = sorted(range(len(data)), key=lambda i: be[i:].tobytes())
    return np.asarray(
        [i for i in order if data[i] != SENTINEL], dtype=np.int32
    )


def naive_lcp(data_array: DataArray, sa) -> np.ndarray:
    """Common prefix of neighboring suffixes, stopping at sentence ends."""
    data = data_array.data.tolist()
    n = len(data)

    def common(p: int, q: int) -> int:
        k = 0
        while (
            p + k < n
            and q + k < n
            and data[p + k] != SENTINEL
            and data[q + k] != SENTINEL
            and data[p + k] == data[q + k]
        ):
            k += 1
        return k

    sa = list(sa)
    out = [0] * len(sa)
    for r in range(1, len(sa)):
        out[r] = common(sa[r - 1], sa[r])
    return np.asarray(out, dtype=np.int32)


# -- random inputs -------------------------------------------------------------


def random_corpus(
    rng: random.Random,
    num_sentences: int,
    vocab_size: int,
    min_len: int = 3,
    max_len: int = 12,
    prefix: str = "w",
) -> list[list[str]]:
    words = [f"{prefix}{i}" for i in range(vocab_size)]
    return [
        [rng.choice(words) for _ in range(rng.randint(min_len, max_len))]
        for _ in range(num_sentences)
    ]


def zipf_corpus(
    rng: random.Random,
    num_sentences: int,
    vocab_size: int,
    min_len: int = 5,
    max_len: int = 20,
    exponent: float = 1.1,
    prefix: str = "z",
) -> list[list[str]]:
    """Skewed word frequencies: wide spread between common and rare words."""
    words = [f"{prefix}{i}" for i in range(vocab_size)]
    weights = [1.0 / (rank + 1) ** exponent for rank in range(vocab_size)]
    return [
        rng.choices(words, weights=weights, k=rng.randint(min_len, max_len))
        for _ in range(num_sentences)
    ]


def random_links(
    rng: random.Random, source_len: int, target_len: int, density: float = 0.7
) -> list[tuple[int, int]]:
    total = max(1, round(density * min(source_len, target_len)))
    links = {
        (rng.randrange(source_len), rng.randrange(target_len))
        for _ in range(total)
    }
    return sorted(links)


def alignment_lines(links_per_sentence: list[list[tuple[int, int]]]) -> list[str]:
    return [
        " ".join(f"{i}-{j}" for i, j in links) for links in links_per_sentence
    ]


# -- pattern enumeration -------------------------------------------------------


def patterns_in_span(span_ids: list[int], cfg: ExtractorConfig) -> list[tuple[int, ...]]:
    """Every pattern shape the span supports: 0, 1, or 2 interior gaps."""
    width = len(span_ids)
    out = []
    if width <= cfg.max_rule_symbols:
        out.append(tuple(span_ids))
    if cfg.max_nonterminals < 1 or width < cfg.min_gap_size + 2:
        return out
    for a1 in range(1, width - 1):
        for b1 in range(a1 + cfg.min_gap_size, width):
            one = tuple(span_ids[:a1]) + (GAP,) + tuple(span_ids[b1:])
            if len(one) <= cfg.max_rule_symbols:
                out.append(one)
            if cfg.max_nonterminals < 2:
                continue
            for a2 in range(b1 + 1, width - 1):
                for b2 in range(a2 + cfg.min_gap_size, width):
                    two = (
                        tuple(span_ids[:a1])
                        + (GAP,)
                        + tuple(span_ids[b1:a2])
                        + (GAP,)
                        + tuple(span_ids[b2:])
                    )
                    if len(two) <= cfg.max_rule_symbols:
                        out.append(two)
    return out


def enumerate_query_patterns(ids: list[int], cfg: ExtractorConfig) -> set[tuple[int, ...]]:
    """All distinct in-limit patterns derivable from one query sentence."""
    out: set[tuple[int, ...]] = set()
    n = len(ids)
    for s in range(n):
        for e in range(s + 1, min(n, s + cfg.max_rule_span) + 1):
            out.update(patterns_in_span(ids[s:e], cfg))
    return out


# -- single-pair rule extraction ----------------------------------------------


def brute_pair_rules(
    src_ids: list[int],
    tgt_ids: list[int],
    links: list[tuple[int, int]],
    cfg: ExtractorConfig,
) -> set[tuple[tuple[int, ...], tuple[int, ...], tuple[tuple[int, int], ...]]]:
    """Every rule one sentence pair licenses, straight from the definition.

    Enumerates source spans and interior gap runs, closes each span over the
    links, applies the consistency conditions, and builds the target side by
    walking its span, with the unaligned-boundary variants. Completely
    separate from the library's extraction path.
    """
    n_src = len(src_ids)
    n_tgt = len(tgt_ids)
    tgt_aligned = [False] * n_tgt
    for _, j in links:
        tgt_aligned[j] = True

    def image(lo: int, hi: int) -> tuple[int, int] | None:
        cols = [j for i, j in links if lo <= i <= hi]
        if not cols:
            return None
        return min(cols), max(cols)

    def consistent(slo: int, shi: int, tlo: int, thi: int) -> bool:
        for i, j in links:
            if (slo <= i <= shi) != (tlo <= j <= thi):
                return False
        return True

    rules = set()

    def emit(s: int, e: int, runs: list[tuple[int, int]]) -> None:
        # runs are [lo, hi] inclusive source index ranges replaced by gaps
        whole = image(s, e - 1)
        if whole is None:
            return
        tlo, thi = whole
        if not consistent(s, e - 1, tlo, thi):
            return
        gap_images = []
        for g_lo, g_hi in runs:
            gi = image(g_lo, g_hi)
            if gi is None:
                return
            if not consistent(g_lo, g_hi, gi[0], gi[1]):
                return
            gap_images.append(gi)
        for a in range(len(gap_images)):
            for b in range(a + 1, len(gap_images)):
                alo, ahi = gap_images[a]
                blo, bhi = gap_images[b]
                if not (ahi < blo or bhi < alo):
                    return

        source = []
        src_symbol_of: dict[int, int] = {}
        pos = s
        for g_index, (g_lo, g_hi) in enumerate(runs):
            while pos < g_lo:
                src_symbol_of[pos] = len(source)
                source.append(src_ids[pos])
                pos += 1
            source.append(-(g_index + 1))
            pos = g_hi + 1
        while pos < e:
            src_symbol_of[pos] = len(source)
            source.append(src_ids[pos])
            pos += 1

        owner = {}
        for g_index, (a, b) in enumerate(gap_images):
            for j in range(a, b + 1):
                owner[j] = g_index

        def build(v_lo: int, v_hi: int):
            target = []
            align = []
            j = v_lo
            while j <= v_hi:
                g_index = owner.get(j)
                if g_index is not None:
                    target.append(-(g_index + 1))
                    j = gap_images[g_index][1] + 1
                    continue
                for i, jj in links:
                    if jj == j:
                        align.append((src_symbol_of[i], len(target)))
                target.append(tgt_ids[j])
                j += 1
            return tuple(source), tuple(target), tuple(sorted(align))

        grow_left = tlo > 0 and not tgt_aligned[tlo - 1]
        grow_right = thi + 1 < n_tgt and not tgt_aligned[thi + 1]
        rules.add(build(tlo, thi))
        if grow_left:
            rules.add(build(tlo - 1, thi))
        if grow_right:
            rules.add(build(tlo, thi + 1))
        if grow_left and grow_right:
            rules.add(build(tlo - 1, thi + 1))

    for s in range(n_src):
        for e in range(s + 1, min(n_src, s + cfg.max_rule_span) + 1):
            width = e - s
            if width <= cfg.max_rule_symbols:
                emit(s, e, [])
            if cfg.max_nonterminals < 1:
                continue
            for a1 in range(1, width - 1):
                for b1 in range(a1 + cfg.min_gap_size, width):
                    symbols_1 = width - (b1 - a1) + 1
                    if symbols_1 <= cfg.max_rule_symbols:
                        emit(s, e, [(s + a1, s + b1 - 1)])
                    if cfg.max_nonterminals < 2:
                        continue
                    for a2 in range(b1 + 1, width - 1):
                        for b2 in range(a2 + cfg.min_gap_size, width):
                            symbols_2 = symbols_1 - (b2 - a2) + 1
                            if symbols_2 <= cfg.max_rule_symbols:
                                emit(
                                    s, e,
                                    [(s + a1, s + b1 - 1), (s + a2, s + b2 - 1)],
                                )
    return rules
