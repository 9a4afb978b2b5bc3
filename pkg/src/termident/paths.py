"""Per-segment encoding of qualified paths against a segment vocabulary.

Path segments (libraries, directories, files/modules: Coq, Init, Datatypes)
get their own frequency-thresholded vocabulary, separate from identifier
vocabularies.  Every occurrence of a path counts each of its segments once;
the final label is an identifier, not a segment, and is never counted here.
encode_path maps a path to one index per segment, root first, with rare or
unseen segments mapping to the vocabulary's unknown index.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .terms import QualifiedPath
from .vocab import VocabFormatError, format_vocab_text, parse_vocab_text, rank_counts

__all__ = [
    "PathVocabulary",
    "build_path_vocab",
    "encode_path",
    "load_path_vocab",
    "save_path_vocab",
]

_CATEGORY_NAME = "path"


@dataclass(frozen=True)
class PathVocabulary:
    threshold: int
    entries: Mapping[str, int]
    entry_counts: Mapping[str, int]
    below_threshold_counts: Mapping[str, int]

    @property
    def unknown_index(self) -> int:
        return len(self.entries)

    def lookup(self, segment: str) -> int:
        return self.entries.get(segment, self.unknown_index)

    def export_below_threshold(self) -> dict[str, int]:
        return dict(self.below_threshold_counts)


def build_path_vocab(paths: Iterable[QualifiedPath], threshold: int) -> PathVocabulary:
    counts: Counter[str] = Counter()
    for path in paths:
        counts.update(path.segments)
    entries, entry_counts, below = rank_counts(counts, threshold)
    return PathVocabulary(threshold, entries, entry_counts, below)


def encode_path(vocab: PathVocabulary, path: Optional[QualifiedPath]) -> list[int]:
    """One index per segment, root first; no path encodes to []."""
    if path is None:
        return []
    return [vocab.lookup(segment) for segment in path.segments]


def save_path_vocab(vocab: PathVocabulary, path: str | Path) -> None:
    text = format_vocab_text(
        _CATEGORY_NAME,
        vocab.threshold,
        vocab.entries,
        vocab.entry_counts,
        vocab.below_threshold_counts,
    )
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def load_path_vocab(path: str | Path) -> PathVocabulary:
    text = Path(path).read_text(encoding="utf-8")
    category_name, threshold, entries, entry_counts, below = parse_vocab_text(text)
    if category_name != _CATEGORY_NAME:
        raise VocabFormatError(
            f"expected a path vocabulary, found category {category_name!r}"
        )
    return PathVocabulary(threshold, entries, entry_counts, below)
