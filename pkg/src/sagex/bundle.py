"""Preprocessing and the on-disk bundle holding every derived structure.

A bundle file is a section container: magic, format version, a table of
(name, offset, length, crc32) entries, then raw payloads. All integers are
little-endian and fixed-width, positions are 32-bit, probabilities are
64-bit floats, and nothing time- or path-dependent is stored, so the same
corpus always produces the same bytes.
"""

from __future__ import annotations

import json
import struct
import zlib
from itertools import chain

import numpy as np

from .collocations import (
    CollocationIndex,
    build_collocation_index,
    find_frequent_patterns,
)
from .config import DEFAULT_CONFIG, ExtractorConfig
from .corpus import (
    Alignment,
    DataArray,
    FIRST_WORD_ID,
    FormatError,
    GAP,
    Vocabulary,
    build_vocabulary,
    encode_corpus,
)
from .extraction import GrammarExtractor
from .lexical import TranslationTable, build_translation_table
from .matching import PhraseMatcher
from .suffix_array import LcpArray, SuffixArray, build_lcp_array, build_suffix_array

MAGIC = b"SAGX"
BUNDLE_VERSION = 1

_I4 = np.dtype("<i4")
_F8 = np.dtype("<f8")


class BundleError(Exception):
    """Raised for unreadable, corrupt, or wrong-version bundle files."""


class PreprocessedBundle:
    """Everything extraction needs, built once from the aligned corpus."""

    def __init__(
        self,
        config: ExtractorConfig,
        vocabulary: Vocabulary,
        source: DataArray,
        target: DataArray,
        alignment: Alignment,
        suffix_array: SuffixArray,
        lcp_array: LcpArray,
        collocations: CollocationIndex,
        translation_table: TranslationTable,
    ) -> None:
        self.config = config
        self.vocabulary = vocabulary
        self.source = source
        self.target = target
        self.alignment = alignment
        self.suffix_array = suffix_array
        self.lcp_array = lcp_array
        self.collocations = collocations
        self.translation_table = translation_table

    def build_extractor(self, config: ExtractorConfig | None = None) -> GrammarExtractor:
        """Wire up an extractor, optionally overriding extraction limits.

        The collocation table was built under the bundle's span and gap
        limits; when an override changes either, the table no longer answers
        the right question and matching falls back to pure extension.
        """
        cfg = config or self.config
        index_valid = (
            cfg.max_rule_span == self.config.max_rule_span
            and cfg.min_gap_size == self.config.min_gap_size
        )
        matcher = PhraseMatcher(
            self.vocabulary,
            self.suffix_array,
            self.collocations if index_valid else None,
            cfg,
        )
        return GrammarExtractor(
            self.vocabulary, self.source, self.target, self.alignment,
            matcher, self.translation_table, cfg,
        )

    def save(self, path) -> None:
        save_bundle(self, path)


def preprocess(
    source_sentences: list[list[str]],
    target_sentences: list[list[str]],
    alignment: Alignment,
    config: ExtractorConfig = DEFAULT_CONFIG,
) -> PreprocessedBundle:
    """Index an aligned corpus: one call builds every structure in the bundle."""
    if not source_sentences:
        raise FormatError("the corpus has no sentences")
    if len(source_sentences) != len(target_sentences):
        raise FormatError(
            "source and target have different sentence counts: "
            f"{len(source_sentences)} vs {len(target_sentences)}"
        )

    def stream():
        for sent in source_sentences:
            yield from sent
        for sent in target_sentences:
            yield from sent

    vocabulary = build_vocabulary(stream())
    source = encode_corpus(source_sentences, vocabulary)
    target = encode_corpus(target_sentences, vocabulary)
    translation_table = build_translation_table(source, target, alignment)
    suffix_array = build_suffix_array(source)
    lcp_array = build_lcp_array(suffix_array)
    frequent = find_frequent_patterns(
        lcp_array, config.frequent_patterns, config.max_pattern_len
    )
    collocations = build_collocation_index(source, frequent, config)
    return PreprocessedBundle(
        config, vocabulary, source, target, alignment,
        suffix_array, lcp_array, collocations, translation_table,
    )


# -- encoding -----------------------------------------------------------------


def _i4_bytes(values) -> bytes:
    return np.ascontiguousarray(values, dtype=_I4).tobytes()


def _encode_alignment(alignment: Alignment) -> tuple[bytes, bytes]:
    blocks = alignment.sentence_links
    counts = np.asarray([b.shape[0] for b in blocks], dtype=_I4)
    if blocks:
        flat = np.concatenate([np.asarray(b, dtype=_I4).reshape(-1) for b in blocks])
    else:
        flat = np.empty(0, dtype=_I4)
    return counts.tobytes(), _i4_bytes(flat)


def _encode_collocations(index: CollocationIndex) -> bytes:
    keys = list(index.entries)
    key_lens = np.fromiter((len(k) for k in keys), dtype=_I4, count=len(keys))
    keys_flat = np.fromiter(
        chain.from_iterable(keys), dtype=_I4, count=int(key_lens.sum())
    )
    counts = np.fromiter(
        (index.entries[k][1] for k in keys), dtype=_I4, count=len(keys)
    )
    header = struct.pack(
        "<QQQ",
        len(keys),
        index.pair_positions.shape[0],
        index.triple_positions.shape[0],
    )
    return b"".join(
        (
            header,
            key_lens.tobytes(),
            keys_flat.tobytes(),
            counts.tobytes(),
            _i4_bytes(index.pair_positions),
            _i4_bytes(index.triple_positions),
        )
    )


def _encode_lexical(table: TranslationTable) -> bytes:
    entries = sorted(table.probs.items())
    pairs = np.asarray(
        [(s, t) for (s, t), _ in entries], dtype=_I4
    ).reshape(-1, 2)
    probs = np.asarray(
        [p for _, p in entries], dtype=_F8
    ).reshape(-1, 2)
    return struct.pack("<I", len(entries)) + pairs.tobytes() + probs.tobytes()


def save_bundle(bundle: PreprocessedBundle, path) -> None:
    config_blob = json.dumps(bundle.config.as_dict(), sort_keys=True).encode("utf-8")
    vocab_blob = "\n".join(bundle.vocabulary.id_to_token[FIRST_WORD_ID:]).encode("utf-8")
    align_counts, align_links = _encode_alignment(bundle.alignment)
    sections = [
        ("config", config_blob),
        ("vocab", vocab_blob),
        ("srcdat", _i4_bytes(bundle.source.data)),
        ("srcidx", _i4_bytes(bundle.source.sentence_start)),
        ("tgtdat", _i4_bytes(bundle.target.data)),
        ("tgtidx", _i4_bytes(bundle.target.sentence_start)),
        ("algncnt", align_counts),
        ("algnlnk", align_links),
        ("sa", _i4_bytes(bundle.suffix_array.sa)),
        ("lcp", _i4_bytes(bundle.lcp_array.lcp)),
        ("colloc", _encode_collocations(bundle.collocations)),
        ("lex", _encode_lexical(bundle.translation_table)),
    ]
    header = MAGIC + struct.pack("<II", BUNDLE_VERSION, len(sections))
    table_size = 28 * len(sections)
    offset = len(header) + table_size
    table = []
    for name, payload in sections:
        table.append(
            struct.pack(
                "<8sQQI",
                name.encode("ascii").ljust(8, b"\0"),
                offset,
                len(payload),
                zlib.crc32(payload),
            )
        )
        offset += len(payload)
    with open(path, "wb") as fh:
        fh.write(header)
        for entry in table:
            fh.write(entry)
        for _, payload in sections:
            fh.write(payload)


# -- decoding -----------------------------------------------------------------


def _i4_array(blob: bytes, name: str) -> np.ndarray:
    if len(blob) % 4:
        raise BundleError(f"section {name!r} is not a whole number of int32 values")
    return np.frombuffer(blob, dtype=_I4).astype(np.int32)


def _decode_collocations(blob: bytes) -> CollocationIndex:
    if len(blob) < 24:
        raise BundleError("collocation section truncated")
    num_keys, pair_rows, triple_rows = struct.unpack("<QQQ", blob[:24])
    view = memoryview(blob)
    pos = 24

    def take(count: int) -> np.ndarray:
        nonlocal pos
        end = pos + 4 * count
        if end > len(view):
            raise BundleError("collocation section truncated")
        out = np.frombuffer(view[pos:end], dtype=_I4)
        pos = end
        return out

    key_lens = take(num_keys)
    keys_flat = take(int(key_lens.sum())).tolist()
    counts = take(num_keys).tolist()
    pair_positions = take(pair_rows * 2).astype(np.int32).reshape(pair_rows, 2)
    triple_positions = take(triple_rows * 3).astype(np.int32).reshape(triple_rows, 3)
    if pos != len(view):
        raise BundleError("collocation section has trailing bytes")

    entries: dict[tuple[int, ...], tuple[int, int]] = {}
    cursor = 0
    pair_off = triple_off = 0
    for length, count in zip(key_lens.tolist(), counts):
        key = tuple(keys_flat[cursor : cursor + length])
        cursor += length
        if key.count(GAP) == 1:
            entries[key] = (pair_off, count)
            pair_off += count
        else:
            entries[key] = (triple_off, count)
            triple_off += count
    if pair_off != pair_rows or triple_off != triple_rows:
        raise BundleError("collocation section counts do not add up")
    return CollocationIndex(entries, pair_positions, triple_positions)


def _decode_lexical(blob: bytes) -> TranslationTable:
    if len(blob) < 4:
        raise BundleError("lexical section truncated")
    (count,) = struct.unpack("<I", blob[:4])
    need = 4 + count * 8 + count * 16
    if len(blob) != need:
        raise BundleError("lexical section has wrong size")
    pairs = np.frombuffer(blob[4 : 4 + count * 8], dtype=_I4).reshape(count, 2)
    probs = np.frombuffer(blob[4 + count * 8 :], dtype=_F8).reshape(count, 2)
    mapping = {
        (int(s), int(t)): (float(a), float(b))
        for (s, t), (a, b) in zip(pairs.tolist(), probs.tolist())
    }
    return TranslationTable.from_probs(mapping)


def _decode_alignment(counts: np.ndarray, flat: np.ndarray) -> Alignment:
    if counts.size:
        splits = np.cumsum(counts)[:-1] * 2
        blocks = [b.reshape(-1, 2) for b in np.split(flat, splits)]
    else:
        blocks = []
    return Alignment([np.ascontiguousarray(b, dtype=np.int32) for b in blocks])


def load_bundle(path) -> PreprocessedBundle:
    """Read a bundle back; raises BundleError on any format problem."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError:
        raise
    if len(blob) < 12 or blob[:4] != MAGIC:
        raise BundleError(f"{path}: not a bundle file")
    version, section_count = struct.unpack("<II", blob[4:12])
    if version != BUNDLE_VERSION:
        raise BundleError(
            f"{path}: unsupported bundle version {version} "
            f"(this build reads version {BUNDLE_VERSION})"
        )
    table_end = 12 + 28 * section_count
    if len(blob) < table_end:
        raise BundleError(f"{path}: section table truncated")
    sections: dict[str, bytes] = {}
    for k in range(section_count):
        entry = blob[12 + 28 * k : 12 + 28 * (k + 1)]
        raw_name, offset, length, crc = struct.unpack("<8sQQI", entry)
        name = raw_name.rstrip(b"\0").decode("ascii")
        if offset + length > len(blob):
            raise BundleError(f"{path}: section {name!r} extends past end of file")
        payload = blob[offset : offset + length]
        if zlib.crc32(payload) != crc:
            raise BundleError(f"{path}: section {name!r} fails its checksum")
        sections[name] = payload

    def need(name: str) -> bytes:
        if name not in sections:
            raise BundleError(f"{path}: missing section {name!r}")
        return sections[name]

    try:
        config = ExtractorConfig(**json.loads(need("config").decode("utf-8")))
    except (ValueError, TypeError) as exc:
        raise BundleError(f"{path}: bad config section: {exc}")

    vocabulary = Vocabulary()
    vocab_blob = need("vocab").decode("utf-8")
    for token in vocab_blob.split("\n") if vocab_blob else []:
        vocabulary.add(token)

    try:
        source = DataArray(
            _i4_array(need("srcdat"), "srcdat"),
            _i4_array(need("srcidx"), "srcidx"),
        )
        target = DataArray(
            _i4_array(need("tgtdat"), "tgtdat"),
            _i4_array(need("tgtidx"), "tgtidx"),
        )
    except ValueError as exc:
        raise BundleError(f"{path}: corrupt corpus section: {exc}")
    alignment = _decode_alignment(
        _i4_array(need("algncnt"), "algncnt"),
        _i4_array(need("algnlnk"), "algnlnk"),
    )
    suffix_array = SuffixArray(source, _i4_array(need("sa"), "sa"))
    lcp_array = LcpArray(suffix_array, _i4_array(need("lcp"), "lcp"))
    collocations = _decode_collocations(need("colloc"))
    translation_table = _decode_lexical(need("lex"))
    return PreprocessedBundle(
        config, vocabulary, source, target, alignment,
        suffix_array, lcp_array, collocations, translation_table,
    )
