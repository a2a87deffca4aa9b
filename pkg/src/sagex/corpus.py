"""Integer-encoded corpus model: vocabulary, packed sentence arrays, alignments.

Every corpus side is stored as one flat int32 array with a SENTINEL after each
sentence. Reserved ids never collide with real words: 0 terminates sentences,
1 marks unknown query words, 2 is the nonterminal marker used only in patterns.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

SENTINEL = 0
UNK = 1
GAP = 2
FIRST_WORD_ID = 3

RESERVED_TOKENS = ("</s>", "<unk>", "[X]")


class FormatError(ValueError):
    """Malformed corpus or alignment input."""


def _check_token(token: str) -> None:
    if not token:
        raise FormatError("empty token")
    if any(ch.isspace() for ch in token):
        raise FormatError(f"token contains whitespace: {token!r}")


class Vocabulary:
    """Bijective token <-> id map with ids 0-2 reserved for control symbols."""

    def __init__(self) -> None:
        self.id_to_token: list[str] = list(RESERVED_TOKENS)
        self.token_to_id: dict[str, int] = {
            tok: i for i, tok in enumerate(RESERVED_TOKENS)
        }

    def __len__(self) -> int:
        return len(self.id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def add(self, token: str) -> int:
        """Return the token's id, assigning the next free id on first sight."""
        wid = self.token_to_id.get(token)
        if wid is None:
            _check_token(token)
            wid = len(self.id_to_token)
            self.token_to_id[token] = wid
            self.id_to_token.append(token)
        return wid

    def id_of(self, token: str) -> int:
        """Query-mode lookup: unknown tokens map to UNK."""
        return self.token_to_id.get(token, UNK)

    def token_of(self, word_id: int) -> str:
        return self.id_to_token[word_id]

    def encode(self, tokens: Sequence[str], allow_unknown: bool = False) -> list[int]:
        if allow_unknown:
            return [self.token_to_id.get(t, UNK) for t in tokens]
        out = []
        for t in tokens:
            wid = self.token_to_id.get(t)
            if wid is None:
                raise FormatError(f"token not in vocabulary: {t!r}")
            out.append(wid)
        return out

    def decode(self, ids: Iterable[int]) -> list[str]:
        return [self.id_to_token[i] for i in ids]


def build_vocabulary(tokens: Iterable[str]) -> Vocabulary:
    """Assign ids in first-occurrence order, starting at FIRST_WORD_ID."""
    vocab = Vocabulary()
    for tok in tokens:
        vocab.add(tok)
    return vocab


class DataArray:
    """All sentences of one corpus side packed into a single id array.

    ``sentence_start[k]`` is the offset of sentence k's first word; the word at
    the following start minus one (or at the very end) is always SENTINEL.
    """

    def __init__(self, data, sentence_start, validate: bool = True) -> None:
        self.data = np.ascontiguousarray(data, dtype=np.int32)
        self.sentence_start = np.ascontiguousarray(sentence_start, dtype=np.int32)
        self._pos_to_sentence: np.ndarray | None = None
        self._next_sentinel: np.ndarray | None = None
        if validate:
            self._validate()

    def _validate(self) -> None:
        n = self.data.size
        s = self.sentence_start.size
        if n == 0:
            if s != 0:
                raise FormatError("sentence starts given for empty data")
            return
        if s == 0 or self.sentence_start[0] != 0:
            raise FormatError("first sentence must start at 0")
        ends = np.append(self.sentence_start[1:], n) - 1
        if (self.data[ends] != SENTINEL).any():
            raise FormatError("every sentence must end with SENTINEL")
        # exactly one sentinel per sentence, at its end
        if int((self.data == SENTINEL).sum()) != s:
            raise FormatError("SENTINEL may appear only at sentence ends")
        if (self.data < 0).any():
            raise FormatError("negative word id")

    def __len__(self) -> int:
        return int(self.data.size)

    @property
    def num_sentences(self) -> int:
        return int(self.sentence_start.size)

    def sentence_bounds(self, k: int) -> tuple[int, int]:
        """(start, end) of sentence k's words; data[end] is its SENTINEL."""
        start = int(self.sentence_start[k])
        if k + 1 < self.num_sentences:
            end = int(self.sentence_start[k + 1]) - 1
        else:
            end = len(self) - 1
        return start, end

    def sentence_length(self, k: int) -> int:
        start, end = self.sentence_bounds(k)
        return end - start

    def sentence_ids(self, k: int) -> np.ndarray:
        start, end = self.sentence_bounds(k)
        return self.data[start:end]

    def sentence_of(self, position: int) -> tuple[int, int]:
        """Map a corpus position to (sentence index, offset within sentence)."""
        if not 0 <= position < len(self):
            raise ValueError(f"position {position} out of range")
        if self.data[position] == SENTINEL:
            raise ValueError(f"position {position} points at SENTINEL")
        k = int(np.searchsorted(self.sentence_start, position, side="right")) - 1
        return k, position - int(self.sentence_start[k])

    @property
    def position_to_sentence(self) -> np.ndarray:
        """int32 array mapping every position (sentinels included) to its sentence."""
        if self._pos_to_sentence is None:
            idx = np.zeros(len(self) + 1, dtype=np.int32)
            np.add.at(idx, self.sentence_start, 1)
            self._pos_to_sentence = np.cumsum(idx[:-1]).astype(np.int32) - 1
        return self._pos_to_sentence

    @property
    def next_sentinel(self) -> np.ndarray:
        """For each position, the offset of its sentence's SENTINEL."""
        if self._next_sentinel is None:
            n = len(self)
            ends = np.append(self.sentence_start[1:], n) - 1
            self._next_sentinel = ends[self.position_to_sentence].astype(np.int32)
        return self._next_sentinel


def encode_corpus(
    sentences: Sequence[Sequence[str]],
    vocab: Vocabulary,
    allow_unknown: bool = False,
) -> DataArray:
    """Pack tokenized sentences into a DataArray using ``vocab``.

    Builder mode (default) requires full coverage; query mode maps unknown
    tokens to UNK.
    """
    flat: list[int] = []
    starts: list[int] = []
    for sent in sentences:
        starts.append(len(flat))
        flat.extend(vocab.encode(sent, allow_unknown=allow_unknown))
        flat.append(SENTINEL)
    return DataArray(
        np.asarray(flat, dtype=np.int32),
        np.asarray(starts, dtype=np.int32),
        validate=False,
    )


def parse_alignment_line(line: str, line_number: int | None = None) -> list[tuple[int, int]]:
    """Parse one "i-j i-j ..." alignment line into sorted, deduplicated pairs."""
    where = f" (line {line_number})" if line_number is not None else ""
    links = set()
    for part in line.split():
        left, sep, right = part.partition("-")
        if not sep or not left or not right:
            raise FormatError(f"malformed alignment pair {part!r}{where}")
        try:
            i, j = int(left), int(right)
        except ValueError:
            raise FormatError(f"malformed alignment pair {part!r}{where}") from None
        if i < 0 or j < 0:
            raise FormatError(f"negative alignment index in {part!r}{where}")
        links.add((i, j))
    return sorted(links)


class Alignment:
    """Per-sentence word alignment links, one (L, 2) int32 array per sentence."""

    def __init__(self, links: Sequence[np.ndarray]) -> None:
        self.sentence_links = [
            np.ascontiguousarray(l, dtype=np.int32).reshape(-1, 2) for l in links
        ]

    @property
    def num_sentences(self) -> int:
        return len(self.sentence_links)

    def links(self, k: int) -> np.ndarray:
        return self.sentence_links[k]


def read_alignment(lines: Iterable[str]) -> Alignment:
    per_sentence = []
    for number, line in enumerate(lines, start=1):
        pairs = parse_alignment_line(line.strip(), line_number=number)
        per_sentence.append(np.asarray(pairs, dtype=np.int32).reshape(-1, 2))
    return Alignment(per_sentence)


def split_joint_line(line: str, line_number: int | None = None) -> tuple[list[str], list[str]]:
    """Split a joint "source ||| target" corpus line into token lists."""
    parts = line.split("|||")
    if len(parts) != 2:
        where = f" (line {line_number})" if line_number is not None else ""
        raise FormatError(f"expected exactly one '|||' separator{where}")
    return parts[0].split(), parts[1].split()


def read_tokenized(lines: Iterable[str]) -> list[list[str]]:
    """Whitespace-tokenize corpus lines; blank lines become empty sentences."""
    return [line.split() for line in lines]


def read_joint(lines: Iterable[str]) -> tuple[list[list[str]], list[list[str]]]:
    """Read the joint one-file corpus layout."""
    source, target = [], []
    for number, line in enumerate(lines, start=1):
        s, t = split_joint_line(line, line_number=number)
        source.append(s)
        target.append(t)
    return source, target


def _iter_tokens(sentences: Iterable[Sequence[str]]) -> Iterator[str]:
    for sent in sentences:
        yield from sent
