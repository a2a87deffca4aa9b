#!/usr/bin/env python3
"""Index a tiny aligned corpus and poke at the pieces.

Run from the repository root after `pip install -e .`:

    python demos/01_build_index.py
"""

import tempfile
from pathlib import Path

from sagex import (
    full_interval,
    interval_positions,
    load_bundle,
    narrow_interval,
    preprocess,
    read_alignment,
    save_bundle,
)

SOURCE = [
    "le chat noir dort".split(),
    "le chien regarde le chat".split(),
    "un chat noir".split(),
]
TARGET = [
    "the black cat sleeps".split(),
    "the dog watches the cat".split(),
    "a black cat".split(),
]
ALIGNMENT = [
    "0-0 1-2 2-1 3-3",
    "0-0 1-1 2-2 3-3 4-4",
    "0-0 1-2 2-1",
]


def main():
    bundle = preprocess(SOURCE, TARGET, read_alignment(ALIGNMENT))

    vocab = bundle.vocabulary
    print(f"{len(SOURCE)} sentence pairs, vocabulary of {len(vocab)} source+target words")

    # The source side lives in one flat id array with sentence separators.
    # The suffix array sorts every suffix of that array; equal words sit in
    # one contiguous block of rows, so a word lookup is a binary search.
    sa = bundle.suffix_array
    chat = vocab.id_of("chat")
    interval = narrow_interval(sa, full_interval(sa), chat)
    positions = sorted(interval_positions(sa, interval).tolist())
    print(f'"chat" occupies suffix rows [{interval.low}, {interval.high}) '
          f"and occurs at corpus positions {positions}")

    for pos in positions:
        sent = int(bundle.source.position_to_sentence[pos])
        print(f"  position {pos} is inside sentence {sent}: {' '.join(SOURCE[sent])}")

    # Everything above survives a save/load round trip as one file.
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "bundle.sagex"
        save_bundle(bundle, path)
        size = path.stat().st_size
        reloaded = load_bundle(path)
        again = narrow_interval(
            reloaded.suffix_array, full_interval(reloaded.suffix_array), chat
        )
        print(f"saved {size} bytes; reloaded lookup gives rows "
              f"[{again.low}, {again.high}) as before")


if __name__ == "__main__":
    main()
