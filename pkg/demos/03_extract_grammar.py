#!/usr/bin/env python3
"""Extract a per-sentence translation grammar and read its features.

    python demos/03_extract_grammar.py
"""

from sagex import preprocess, read_alignment, render_grammar

SOURCE = [
    "le chat noir dort".split(),
    "le chien noir court".split(),
    "le chat blanc dort".split(),
    "un chat noir".split(),
    "le chien court".split(),
    "le chat dort".split(),
]
TARGET = [
    "the black cat sleeps".split(),
    "the black dog runs".split(),
    "the white cat sleeps".split(),
    "a black cat".split(),
    "the dog runs".split(),
    "the kitty sleeps".split(),
]
ALIGNMENT = [
    "0-0 1-2 2-1 3-3",
    "0-0 1-2 2-1 3-3",
    "0-0 1-2 2-1 3-3",
    "0-0 1-2 2-1",
    "0-0 1-1 2-2",
    "0-0 1-1 2-2",
]


def main():
    bundle = preprocess(SOURCE, TARGET, read_alignment(ALIGNMENT))
    extractor = bundle.build_extractor()

    query = "le chat noir dort".split()
    rules = extractor.extract_grammar(query)

    print(f"query: {' '.join(query)}")
    print(f"{len(rules)} rules extracted\n")

    # Each rule pairs a source pattern (gaps shown as [X,n]) with a target
    # pattern, plus word alignment points and five scoring features:
    #   EGivenFCoherent  how often the source phrase translated this way,
    #                    against every sampled occurrence of the phrase
    #   SampleCountF     how many occurrences were sampled
    #   CountEF          how many of them yielded this exact rule
    #   MaxLexFGivenE    best-link lexical weight, source given target
    #   MaxLexEGivenF    best-link lexical weight, target given source
    # The counts are log10, the lexical weights negated log10, so smaller
    # EGivenFCoherent means a more reliable translation. "chat" translates
    # as both "cat" and "kitty" in the corpus, so its rules carry nonzero
    # scores while unambiguous words sit at 0.
    print(render_grammar(rules, bundle.vocabulary, bundle.config))

    # A gapped source phrase generalizes: "chat noir" and "chien noir" both
    # feed the rule family around "le [X,1] dort" even though the middles
    # differ. Count how many rules use at least one gap.
    gapped = sum(1 for r in rules if any(s < 0 for s in r.source))
    print(f"{gapped} of {len(rules)} rules contain a gap")


if __name__ == "__main__":
    main()
