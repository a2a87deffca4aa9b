"""Online grammar extraction from a suffix-array-indexed parallel corpus.

Instead of materializing a phrase table ahead of time, the aligned training
corpus is indexed once (suffix array, collocation table, word translation
table) and hierarchical translation rules are extracted per query sentence,
on demand, from sampled occurrences of each matched source phrase.
"""

from .bundle import (
    BundleError,
    PreprocessedBundle,
    load_bundle,
    preprocess,
    save_bundle,
)
from .collocations import (
    CollocationIndex,
    FrequentPattern,
    FrequentPatternSet,
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
    SENTINEL,
    UNK,
    Vocabulary,
    build_vocabulary,
    encode_corpus,
    parse_alignment_line,
    read_alignment,
    read_joint,
    read_tokenized,
)
from .extraction import (
    GrammarExtractor,
    Rule,
    SampledMatches,
    extract_rules,
    is_consistent,
    sample_matches,
    score_rules,
    target_span,
)
from .grammar_io import (
    FEATURE_NAMES,
    parse_grammar,
    render_grammar,
    rule_to_line,
    write_grammar,
)
from .lexical import NULL_WORD, TranslationTable, build_translation_table
from .matching import (
    MatchSet,
    PhraseMatcher,
    SentenceTrie,
    brute_force_match,
    choose_extension_side,
    extend_from_front,
    extend_through_gap,
    extend_with_terminal,
    pattern_chunks,
    strip_outer_gaps,
)
from .suffix_array import (
    LcpArray,
    SuffixArray,
    SuffixInterval,
    build_lcp_array,
    build_suffix_array,
    full_interval,
    interval_positions,
    narrow_interval,
)

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "BundleError",
    "CollocationIndex",
    "DEFAULT_CONFIG",
    "DataArray",
    "ExtractorConfig",
    "FEATURE_NAMES",
    "FIRST_WORD_ID",
    "FormatError",
    "FrequentPattern",
    "FrequentPatternSet",
    "GAP",
    "GrammarExtractor",
    "LcpArray",
    "MatchSet",
    "NULL_WORD",
    "PhraseMatcher",
    "PreprocessedBundle",
    "Rule",
    "SENTINEL",
    "SampledMatches",
    "SentenceTrie",
    "SuffixArray",
    "SuffixInterval",
    "TranslationTable",
    "UNK",
    "Vocabulary",
    "build_collocation_index",
    "build_lcp_array",
    "build_suffix_array",
    "build_translation_table",
    "build_vocabulary",
    "brute_force_match",
    "choose_extension_side",
    "encode_corpus",
    "extend_from_front",
    "extend_through_gap",
    "extend_with_terminal",
    "extract_rules",
    "find_frequent_patterns",
    "full_interval",
    "interval_positions",
    "is_consistent",
    "load_bundle",
    "narrow_interval",
    "parse_alignment_line",
    "parse_grammar",
    "pattern_chunks",
    "preprocess",
    "read_alignment",
    "read_joint",
    "read_tokenized",
    "render_grammar",
    "rule_to_line",
    "sample_matches",
    "save_bundle",
    "score_rules",
    "strip_outer_gaps",
    "target_span",
    "write_grammar",
]
