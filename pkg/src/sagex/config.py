"""Shared limit configuration for matching and extraction."""

from __future__ import annotations

from dataclasses import dataclass, asdict, replace


@dataclass(frozen=True)
class ExtractorConfig:
    """Limits that shape which phrases are matched and which rules are emitted.

    All limits apply to the source side. ``max_rule_span`` counts corpus words
    from the first matched word to the last; ``max_rule_symbols`` counts
    terminals plus gap symbols on a rule's source side.
    """

    max_rule_span: int = 15
    max_nonterminals: int = 2
    max_rule_symbols: int = 5
    min_gap_size: int = 1
    max_samples: int = 300
    frequent_patterns: int = 1000   # top-K contiguous patterns kept by the index
    max_pattern_len: int = 3        # longest contiguous pattern the index considers
    threads: int = 1
    lex_feature_ceiling: float = 99.0

    def __post_init__(self) -> None:
        if self.max_rule_span < 1:
            raise ValueError("max_rule_span must be >= 1")
        if not 0 <= self.max_nonterminals <= 2:
            raise ValueError("max_nonterminals must be 0, 1 or 2")
        if self.max_rule_symbols < 1:
            raise ValueError("max_rule_symbols must be >= 1")
        if self.min_gap_size < 1:
            raise ValueError("min_gap_size must be >= 1")
        if self.max_samples < 1:
            raise ValueError("max_samples must be >= 1")
        if self.frequent_patterns < 0:
            raise ValueError("frequent_patterns must be >= 0")
        if self.max_pattern_len < 1:
            raise ValueError("max_pattern_len must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def replace(self, **kwargs) -> "ExtractorConfig":
        return replace(self, **kwargs)

    def as_dict(self) -> dict:
        return asdict(self)

    def limits_echo(self) -> str:
        """Deterministic one-line echo of extraction limits.

        Excludes ``threads``: thread count must never change output bytes.
        """
        keys = (
            "max_rule_span", "max_nonterminals", "max_rule_symbols",
            "min_gap_size", "max_samples", "frequent_patterns",
            "max_pattern_len",
        )
        d = self.as_dict()
        return " ".join(f"{k}={d[k]}" for k in keys)


DEFAULT_CONFIG = ExtractorConfig()
