#!/usr/bin/env python3
"""Match contiguous and gapped phrases of one query sentence.

The matcher takes a query sentence and finds, for every phrase of the
sentence within the configured limits, all the places that phrase occurs
in the indexed training corpus. Phrases may contain gap placeholders, so
"le _ noir" matches any occurrence of "le" followed by "noir" with
something in between, as long as the whole window stays inside one
sentence and inside the span limit.

    python demos/02_match_phrases.py
"""

import random

from sagex import (
    DEFAULT_CONFIG,
    GAP,
    PhraseMatcher,
    build_suffix_array,
    build_vocabulary,
    encode_corpus,
)

from textwrap import shorten


def render(vocab, symbols):
    return " ".join("_" if s == GAP else vocab.token_of(s) for s in symbols)


def main():
    rng = random.Random(7)
    colors = ["noir", "blanc", "gris"]
    animals = ["chat", "chien", "cheval"]
    sentences = []
    for _ in range(200):
        a = rng.choice(animals)
        c = rng.choice(colors)
        sentences.append(f"le {a} {c} dort".split())
        sentences.append(f"un {a} tres {c}".split())

    vocab = build_vocabulary(t for s in sentences for t in s)
    data = encode_corpus(sentences, vocab)
    matcher = PhraseMatcher(vocab, build_suffix_array(data), None, DEFAULT_CONFIG)

    query = "le chat noir dort".split()
    trie = matcher.match_sentence(query)

    print(f"query: {' '.join(query)}")
    print(f"corpus: {len(sentences)} sentences, {data.data.size} positions")
    print()

    # The trie holds one node per distinct pattern of the query that occurs
    # in the corpus. Patterns that begin or end with a gap exist internally
    # as stepping stones but only interior-gap patterns can become rules.
    rows = []
    for symbols in sorted(k for k in trie.nodes if k):
        node = trie.nodes[symbols]
        if node.matchset is None or symbols[0] == GAP or symbols[-1] == GAP:
            continue
        count = len(node.matchset)
        rows.append((count, render(vocab, symbols)))
    rows.sort(key=lambda r: (-r[0], r[1]))

    print(f"{len(rows)} matchable patterns, most frequent first:")
    for count, text in rows[:12]:
        print(f"  {count:5d}  {text}")

    gapped = trie.matches([vocab.id_of("le"), GAP, vocab.id_of("noir")])
    print()
    print(f'"le _ noir" occurs {len(gapped)} times; first three start pairs:')
    for row in gapped.tuples()[:3]:
        lo, hi = row[0], row[-1]
        sent = int(data.position_to_sentence[lo])
        start, _ = data.sentence_bounds(sent)
        words = sentences[sent]
        print(f"  sentence {sent}: {shorten(' '.join(words), 40)}"
              f"  (gap covers {' '.join(words[lo - start + 1:hi - start])})")


if __name__ == "__main__":
    main()
