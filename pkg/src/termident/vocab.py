"""Frequency-thresholded identifier vocabularies, one per category.

An identifier enters the vocabulary when its corpus count reaches the
threshold (count >= threshold).  Entries get dense indices ordered by count
descending, name ascending; every other identifier maps to unknown_index,
which always equals the entry count.  Below-threshold counts are kept so
sweeps can be replayed without recounting the corpus.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .enrichment import CategorizedIdent
from .errors import ToolError
from .terms import ANONYMOUS, IdentCategory, is_name

__all__ = [
    "VocabFormatError",
    "Vocabulary",
    "build_vocab",
    "load_vocab",
    "save_vocab",
]


class VocabFormatError(ToolError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    category: IdentCategory
    threshold: int
    entries: Mapping[str, int]
    entry_counts: Mapping[str, int]
    below_threshold_counts: Mapping[str, int]

    @property
    def unknown_index(self) -> int:
        return len(self.entries)

    def lookup(self, name: str) -> int:
        """Dense index of name, or unknown_index when it is not an entry."""
        return self.entries.get(name, self.unknown_index)

    def export_below_threshold(self) -> dict[str, int]:
        return dict(self.below_threshold_counts)


def rank_counts(
    counts: Mapping[str, int], threshold: int
) -> tuple[dict[str, int], dict[str, int], dict[str, int]]:
    """Split counts at the threshold and assign dense indices to the keepers.

    Index order is count descending, then name ascending, so the assignment
    is independent of input order.
    """
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    kept = {name: c for name, c in counts.items() if c >= threshold}
    order = sorted(kept, key=lambda name: (-kept[name], name))
    entries = {name: i for i, name in enumerate(order)}
    below = {name: c for name, c in counts.items() if c < threshold}
    return entries, kept, below


def build_vocab(
    idents: Iterable[CategorizedIdent], category: IdentCategory, threshold: int
) -> Vocabulary:
    """Count identifiers of one category and threshold them into a vocabulary.

    Occurrences of other categories are ignored; the anonymous name is never
    counted.
    """
    counts: Counter[str] = Counter()
    for ident in idents:
        if ident.category is category and ident.name != ANONYMOUS:
            counts[ident.name] += 1
    entries, entry_counts, below = rank_counts(counts, threshold)
    return Vocabulary(category, threshold, entries, entry_counts, below)


_HEADER_RE = re.compile(r"^# category=(\S+) threshold=(\d+)$")
_BELOW_MARKER = "# below-threshold"


def format_vocab_text(
    category_name: str,
    threshold: int,
    entries: Mapping[str, int],
    entry_counts: Mapping[str, int],
    below: Mapping[str, int],
) -> str:
    """Render the on-disk vocabulary format; shared with path vocabularies."""
    lines = [f"# category={category_name} threshold={threshold}"]
    for name in sorted(entries, key=entries.get):
        lines.append(f"{entries[name]}\t{name}\t{entry_counts[name]}")
    lines.append(_BELOW_MARKER)
    for name in sorted(below, key=lambda n: (-below[n], n)):
        lines.append(f"{name}\t{below[name]}")
    return "\n".join(lines) + "\n"


def parse_vocab_text(
    text: str,
) -> tuple[str, int, dict[str, int], dict[str, int], dict[str, int]]:
    """Inverse of format_vocab_text; validates dense 0..N-1 index lines."""
    lines = text.splitlines()
    if not lines:
        raise VocabFormatError("empty vocabulary file")
    header = _HEADER_RE.match(lines[0])
    if header is None:
        raise VocabFormatError(f"bad vocabulary header: {lines[0]!r}")
    category_name = header.group(1)
    threshold = int(header.group(2))
    entries: dict[str, int] = {}
    entry_counts: dict[str, int] = {}
    below: dict[str, int] = {}
    in_below = False
    for line_no, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        if line == _BELOW_MARKER:
            in_below = True
            continue
        fields = line.split("\t")
        if in_below:
            if len(fields) != 2 or not _is_count(fields[1]) or not is_name(fields[0]):
                raise VocabFormatError(f"line {line_no}: bad below-threshold line")
            below[fields[0]] = int(fields[1])
        else:
            if len(fields) != 3 or not fields[0].isdigit() or not _is_count(fields[2]):
                raise VocabFormatError(f"line {line_no}: bad entry line")
            index, name, count = int(fields[0]), fields[1], int(fields[2])
            if not is_name(name) or index != len(entries):
                raise VocabFormatError(f"line {line_no}: bad entry line")
            entries[name] = index
            entry_counts[name] = count
    return category_name, threshold, entries, entry_counts, below


def _is_count(text: str) -> bool:
    return text.isdigit() and int(text) >= 0


def save_vocab(vocab: Vocabulary, path: str | Path) -> None:
    text = format_vocab_text(
        vocab.category.value,
        vocab.threshold,
        vocab.entries,
        vocab.entry_counts,
        vocab.below_threshold_counts,
    )
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def load_vocab(path: str | Path) -> Vocabulary:
    text = Path(path).read_text(encoding="utf-8")
    category_name, threshold, entries, entry_counts, below = parse_vocab_text(text)
    categories = {c.value: c for c in IdentCategory}
    if category_name not in categories:
        raise VocabFormatError(f"unknown vocabulary category {category_name!r}")
    return Vocabulary(categories[category_name], threshold, entries, entry_counts, below)
