#!/usr/bin/env python3
"""Measure what the precomputed collocation index saves during matching.

Gapped patterns are matched by combining the occurrence lists of their
parts, walking the smaller list and probing the larger one. For patterns
made of very frequent words even that is work worth skipping, so
preprocessing stores the finished occurrence lists of every pattern built
from the most frequent contiguous phrases. At query time those patterns
become dictionary hits and their combination cost drops to zero.

    python demos/04_collocation_speedup.py
"""

import random
import time

from sagex import (
    DEFAULT_CONFIG,
    PhraseMatcher,
    build_collocation_index,
    build_lcp_array,
    build_suffix_array,
    build_vocabulary,
    encode_corpus,
    find_frequent_patterns,
)


def zipf_sentences(rng, total_tokens, vocab_size):
    words = [f"w{i}" for i in range(vocab_size)]
    weights = [1.0 / (r + 1) ** 1.1 for r in range(vocab_size)]
    out, n = [], 0
    while n < total_tokens:
        sent = rng.choices(words, weights=weights, k=rng.randint(5, 18))
        out.append(sent)
        n += len(sent)
    return out


def run_queries(matcher, queries):
    start = time.perf_counter()
    comparisons = 0
    for tokens in queries:
        trie = matcher.match_sentence(tokens)
        for node in trie.nodes.values():
            comparisons += node.comparisons
    return comparisons, time.perf_counter() - start


def main():
    rng = random.Random(11)
    sentences = zipf_sentences(rng, 30_000, 300)
    vocab = build_vocabulary(t for s in sentences for t in s)
    data = encode_corpus(sentences, vocab)
    suffix_array = build_suffix_array(data)
    queries = rng.sample(sentences, 30)

    cfg = DEFAULT_CONFIG
    frequent = find_frequent_patterns(
        build_lcp_array(suffix_array), cfg.frequent_patterns, cfg.max_pattern_len
    )
    index = build_collocation_index(data, frequent, cfg)
    print(f"corpus: {data.data.size} positions, "
          f"index covers {len(index)} gapped patterns")

    plain = PhraseMatcher(vocab, suffix_array, None, cfg)
    indexed = PhraseMatcher(vocab, suffix_array, index, cfg)

    base_comparisons, base_time = run_queries(plain, queries)
    fast_comparisons, fast_time = run_queries(indexed, queries)

    print(f"without index: {base_comparisons:10d} comparisons  {base_time:6.2f}s")
    print(f"with index:    {fast_comparisons:10d} comparisons  {fast_time:6.2f}s")
    print(f"comparison work saved: "
          f"{1 - fast_comparisons / base_comparisons:.1%}")

    # Identical results either way; the index is purely a shortcut.
    for tokens in queries[:5]:
        a = plain.match_sentence(tokens)
        b = indexed.match_sentence(tokens)
        for key, node in a.nodes.items():
            mine = set(node.matchset.tuples()) if node.matchset else set()
            other = b.nodes.get(key)
            theirs = set(other.matchset.tuples()) if other and other.matchset else set()
            assert mine == theirs
    print("spot check: matchsets identical with and without the index")


if __name__ == "__main__":
    main()
