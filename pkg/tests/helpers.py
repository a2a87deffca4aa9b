"""Small builders shared by the test modules."""

from __future__ import annotations

from sagex import (
    DataArray,
    Vocabulary,
    build_suffix_array,
    encode_corpus,
    read_alignment,
)

TOY_SENTENCE = "the dog chases the cat many times around the block"


def sorted_vocab(sentences: list[list[str]]) -> Vocabulary:
    """Ids assigned alphabetically, matching the worked toy examples."""
    vocab = Vocabulary()
    for token in sorted({t for sent in sentences for t in sent}):
        vocab.add(token)
    return vocab


def toy_index():
    sentences = [TOY_SENTENCE.split()]
    vocab = sorted_vocab(sentences)
    data = encode_corpus(sentences, vocab)
    return vocab, data, build_suffix_array(data)


def encode(sentences: list[list[str]]) -> tuple[Vocabulary, DataArray]:
    vocab = Vocabulary()
    for sent in sentences:
        for token in sent:
            vocab.add(token)
    return vocab, encode_corpus(sentences, vocab)


def alignment_of(lines: list[str]):
    return read_alignment(lines)
