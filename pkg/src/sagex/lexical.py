"""Word translation probabilities estimated from the alignment links.

Counts are collected per link; a word with no link in its sentence counts
once against the empty word. Both conditional directions are kept so rule
scoring can read p(t|s) and p(s|t) from one table.
"""

from __future__ import annotations

from collections import Counter, defaultdict

from .corpus import Alignment, DataArray, FormatError

# The empty alignment partner. Reuses the sentinel id: a sentinel is never
# inside a sentence, so no real word ever carries id 0.
NULL_WORD = 0


class TranslationTable:
    """p(t|s) and p(s|t) lookups keyed by (source id, target id)."""

    def __init__(self, pair_counts: dict[tuple[int, int], int]) -> None:
        self.pair_counts = dict(pair_counts)
        source_totals: Counter = Counter()
        target_totals: Counter = Counter()
        for (s, t), c in self.pair_counts.items():
            source_totals[s] += c
            target_totals[t] += c
        self.probs: dict[tuple[int, int], tuple[float, float]] = {}
        for (s, t), c in self.pair_counts.items():
            self.probs[(s, t)] = (c / source_totals[s], c / target_totals[t])

    @classmethod
    def from_probs(
        cls, probs: dict[tuple[int, int], tuple[float, float]]
    ) -> "TranslationTable":
        """Rebuild from stored probabilities (counts are not kept on disk)."""
        table = cls.__new__(cls)
        table.pair_counts = {}
        table.probs = dict(probs)
        return table

    def query(self, source: int, target: int) -> tuple[float, float]:
        """(p(target|source), p(source|target)); (0, 0) for an unseen pair."""
        return self.probs.get((source, target), (0.0, 0.0))

    def __len__(self) -> int:
        return len(self.pair_counts)

    def items(self) -> list[tuple[int, int, int]]:
        """Deterministic (source, target, count) listing for serialization."""
        return [(s, t, c) for (s, t), c in sorted(self.pair_counts.items())]


def build_translation_table(
    source: DataArray,
    target: DataArray,
    alignment: Alignment,
) -> TranslationTable:
    """Count link co-occurrences over the whole corpus.

    Raises FormatError when a link indexes outside its sentence pair.
    """
    if source.num_sentences != target.num_sentences:
        raise FormatError(
            "source and target have different sentence counts: "
            f"{source.num_sentences} vs {target.num_sentences}"
        )
    if alignment.num_sentences != source.num_sentences:
        raise FormatError(
            "alignment has wrong sentence count: "
            f"{alignment.num_sentences} vs {source.num_sentences}"
        )
    counts: defaultdict = defaultdict(int)
    for k in range(source.num_sentences):
        s_ids = source.sentence_ids(k).tolist()
        t_ids = target.sentence_ids(k).tolist()
        links = alignment.links(k)
        s_linked = [False] * len(s_ids)
        t_linked = [False] * len(t_ids)
        for i, j in links:
            if i >= len(s_ids) or j >= len(t_ids):
                raise FormatError(
                    f"alignment link {i}-{j} out of range in sentence {k} "
                    f"({len(s_ids)} source words, {len(t_ids)} target words)"
                )
            counts[(s_ids[i], t_ids[j])] += 1
            s_linked[i] = True
            t_linked[j] = True
        for i, flag in enumerate(s_linked):
            if not flag:
                counts[(s_ids[i], NULL_WORD)] += 1
        for j, flag in enumerate(t_linked):
            if not flag:
                counts[(NULL_WORD, t_ids[j])] += 1
    return TranslationTable(counts)
