import random

import numpy as np
import pytest

from sagex import (
    build_lcp_array,
    build_suffix_array,
    build_vocabulary,
    encode_corpus,
    full_interval,
    interval_positions,
    narrow_interval,
)

from helpers import sorted_vocab, toy_index
from oracles import naive_lcp, naive_suffix_array, random_corpus


def test_toy_suffix_array_matches_worked_example():
    vocab, data, sa = toy_index()
    assert data.data.tolist()[:-1] == [
        vocab.id_of(t)
        for t in "the dog chases the cat many times around the block".split()
    ]
    assert sa.sa.tolist() == [7, 9, 4, 2, 1, 5, 8, 3, 0, 6]


def test_toy_lcp_matches_worked_example():
    _, _, sa = toy_index()
    lcp = build_lcp_array(sa)
    assert lcp.lcp.tolist() == [0, 0, 0, 0, 0, 0, 0, 1, 1, 0]


def test_repeated_word_lcp():
    vocab = build_vocabulary(["a"])
    data = encode_corpus([["a", "a", "a"]], vocab)
    sa = build_suffix_array(data)
    assert sa.sa.tolist() == [2, 1, 0]
    assert build_lcp_array(sa).lcp.tolist() == [0, 1, 2]


def test_narrow_interval_toy_word():
    vocab, _, sa = toy_index()
    iv = narrow_interval(sa, full_interval(sa), vocab.id_of("the"))
    assert (iv.low, iv.high, iv.matched_length) == (6, 9, 1)
    assert sorted(interval_positions(sa, iv).tolist()) == [0, 3, 8]


def test_narrow_interval_second_word():
    vocab, _, sa = toy_index()
    iv = narrow_interval(sa, full_interval(sa), vocab.id_of("the"))
    iv2 = narrow_interval(sa, iv, vocab.id_of("cat"))
    assert (iv2.low, iv2.high, iv2.matched_length) == (7, 8, 2)
    assert interval_positions(sa, iv2).tolist() == [3]


def test_narrow_interval_misses():
    vocab, _, sa = toy_index()
    iv = narrow_interval(sa, full_interval(sa), vocab.id_of("cat"))
    dead = narrow_interval(sa, iv, vocab.id_of("cat"))
    assert dead.empty
    assert len(dead) == 0
    # narrowing an empty interval stays empty
    assert narrow_interval(sa, dead, vocab.id_of("the")).empty


def test_narrowing_never_crosses_sentences():
    vocab = build_vocabulary(["a", "b"])
    data = encode_corpus([["a"], ["b"]], vocab)
    sa = build_suffix_array(data)
    iv = narrow_interval(sa, full_interval(sa), vocab.id_of("a"))
    assert len(iv) == 1
    # "a b" never occurs: the sentence break separates them
    assert narrow_interval(sa, iv, vocab.id_of("b")).empty


def test_interval_positions_sorted_ascending():
    _, _, sa = toy_index()
    the = narrow_interval(sa, full_interval(sa), sa.data_array.data[0])
    pos = interval_positions(sa, the)
    assert (np.diff(pos) > 0).all()


def test_random_corpora_match_naive_oracles():
    rng = random.Random(902)
    for trial in range(25):
        sentences = random_corpus(
            rng,
            num_sentences=rng.randint(1, 30),
            vocab_size=rng.randint(1, 12),
            min_len=1,
            max_len=14,
        )
        vocab = sorted_vocab(sentences)
        data = encode_corpus(sentences, vocab)
        sa = build_suffix_array(data)
        expect_sa = naive_suffix_array(data)
        assert sa.sa.tolist() == expect_sa.tolist(), f"trial {trial}"
        lcp = build_lcp_array(sa)
        expect_lcp = naive_lcp(data, sa.sa)
        assert lcp.lcp.tolist() == expect_lcp.tolist(), f"trial {trial}"


def test_narrow_matches_scan_on_random_corpus():
    rng = random.Random(903)
    sentences = random_corpus(rng, num_sentences=40, vocab_size=6, max_len=10)
    vocab = sorted_vocab(sentences)
    data = encode_corpus(sentences, vocab)
    sa = build_suffix_array(data)
    flat = data.data.tolist()
    for _ in range(200):
        words = [rng.randrange(3, 3 + 6) for _ in range(rng.randint(1, 3))]
        iv = full_interval(sa)
        for w in words:
            iv = narrow_interval(sa, iv, w)
        expect = [
            p
            for p in range(len(flat) - len(words) + 1)
            if flat[p : p + len(words)] == words
        ]
        assert sorted(interval_positions(sa, iv).tolist()) == expect


def test_suffix_interval_length():
    _, _, sa = toy_index()
    iv = full_interval(sa)
    assert len(iv) == len(sa)
    assert iv.matched_length == 0
