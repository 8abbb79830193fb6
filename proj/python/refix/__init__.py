"""Patch synthesis for Java runtime exceptions from community Q&A."""

try:
    from ._refix import (
        build_index,
        derive_script,
        fix,
        match_pattern,
        outline_snippet,
        prepare_corpus,
        repair_snippet,
    )
except ImportError:
    from _refix import (
        build_index,
        derive_script,
        fix,
        match_pattern,
        outline_snippet,
        prepare_corpus,
        repair_snippet,
    )

__all__ = [
    "build_index",
    "derive_script",
    "fix",
    "match_pattern",
    "outline_snippet",
    "prepare_corpus",
    "repair_snippet",
]
