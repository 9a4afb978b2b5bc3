"""Byte-pair subword models for breaking identifiers into chunks.

Training starts from exactly the characters seen in the corpus and greedily
merges the most frequent adjacent element pair (within identifiers only),
counting occurrences with multiplicity.  Ties break on lexicographic pair
order and training stops early once no pair occurs at least twice.

Tokenization is greedy longest prefix match against the final vocabulary,
not a replay of the merge sequence.  Characters never seen in training are
dropped, or, in emit-unknown mode, replaced by a reserved unknown element.
Output is capped by keeping a prefix: four elements per identifier when
encoding training data, eight at test time.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .errors import ToolError

__all__ = [
    "BpeFormatError",
    "BpeModel",
    "DROP",
    "EMIT_UNKNOWN",
    "TRAIN_CAP",
    "TEST_CAP",
    "UNKNOWN_ELEMENT",
    "load_bpe",
    "save_bpe",
    "tokenize",
    "tokenize_test",
    "tokenize_train",
    "train_bpe",
]

DROP = "drop"
EMIT_UNKNOWN = "unknown"
UNKNOWN_ELEMENT = "<unknown>"
TRAIN_CAP = 4
TEST_CAP = 8

# Trie key under which a node stores the vocabulary element it completes.
_LEAF = None


class BpeFormatError(ToolError):
    pass


@dataclass(frozen=True)
class BpeModel:
    base_chars: frozenset[str]
    merges: tuple[tuple[str, str], ...]
    unseen_char_mode: str = DROP
    unknown_element: str = UNKNOWN_ELEMENT
    train_cap: int = TRAIN_CAP
    test_cap: int = TEST_CAP

    def __post_init__(self) -> None:
        object.__setattr__(self, "base_chars", frozenset(self.base_chars))
        object.__setattr__(
            self, "merges", tuple((left, right) for left, right in self.merges)
        )
        if any(len(ch) != 1 for ch in self.base_chars):
            raise ValueError("base_chars must contain single characters")
        if self.unseen_char_mode not in (DROP, EMIT_UNKNOWN):
            raise ValueError(f"invalid unseen-char mode: {self.unseen_char_mode!r}")
        if self.unknown_element in self.base_chars or not self.unknown_element:
            raise ValueError("unknown_element must be reserved: non-empty, not a base char")
        if self.train_cap < 1 or self.test_cap < 1:
            raise ValueError("token caps must be >= 1")
        available = set(self.base_chars)
        for left, right in self.merges:
            if left not in available or right not in available:
                raise ValueError(f"merge ({left!r}, {right!r}) uses an unknown element")
            available.add(left + right)

    @cached_property
    def vocab(self) -> frozenset[str]:
        return frozenset(self.base_chars | {left + right for left, right in self.merges})

    @cached_property
    def element_ids(self) -> dict[str, int]:
        """Canonical dense ids: base chars by code point, merges in order,
        then the unknown element when the mode can emit it."""
        ids: dict[str, int] = {}
        for ch in sorted(self.base_chars):
            ids[ch] = len(ids)
        for left, right in self.merges:
            ids.setdefault(left + right, len(ids))
        if self.unseen_char_mode == EMIT_UNKNOWN:
            ids.setdefault(self.unknown_element, len(ids))
        return ids

    @cached_property
    def _trie(self) -> dict:
        root: dict = {}
        for element in self.vocab:
            node = root
            for ch in element:
                node = node.setdefault(ch, {})
            node[_LEAF] = element
        return root


def train_bpe(
    idents: Iterable[str], num_merges: int, unseen_char_mode: str = DROP
) -> BpeModel:
    """Train a model with up to num_merges merges on an identifier stream."""
    if num_merges < 0:
        raise ValueError(f"merge count must be >= 0, got {num_merges}")
    words: Counter[str] = Counter(idents)
    chars = frozenset(ch for word in words for ch in word)
    seqs: dict[str, tuple[str, ...]] = {word: tuple(word) for word in words}
    merges: list[tuple[str, str]] = []
    for _ in range(num_merges):
        pairs: Counter[tuple[str, str]] = Counter()
        for word, mult in words.items():
            seq = seqs[word]
            for pair in zip(seq, seq[1:]):
                pairs[pair] += mult
        if not pairs:
            break
        top = max(pairs.values())
        if top < 2:
            break
        best = min(pair for pair, count in pairs.items() if count == top)
        merges.append(best)
        seqs = {word: _merge_seq(seq, best) for word, seq in seqs.items()}
    return BpeModel(chars, tuple(merges), unseen_char_mode)


def _merge_seq(seq: tuple[str, ...], pair: tuple[str, str]) -> tuple[str, ...]:
    left, right = pair
    merged = left + right
    out: list[str] = []
    i = 0
    while i < len(seq):
        if i + 1 < len(seq) and seq[i] == left and seq[i + 1] == right:
            out.append(merged)
            i += 2
        else:
            out.append(seq[i])
            i += 1
    return tuple(out)


def tokenize(model: BpeModel, name: str, cap: int | None = None) -> list[str]:
    """Split name into vocabulary elements, greedy longest match first.

    cap=None means uncapped; otherwise at most cap elements are returned
    (the leading ones).  Unseen characters are handled per the model's mode.
    """
    if cap is not None and cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    trie = model._trie
    base = model.base_chars
    emit_unknown = model.unseen_char_mode == EMIT_UNKNOWN
    out: list[str] = []
    i = 0
    while i < len(name):
        if cap is not None and len(out) >= cap:
            break
        if name[i] not in base:
            if emit_unknown:
                out.append(model.unknown_element)
            i += 1
            continue
        node = trie
        j = i
        end = i
        while j < len(name):
            child = node.get(name[j])
            if child is None:
                break
            node = child
            j += 1
            if _LEAF in node:
                end = j
        # every base char is itself an element, so end > i here
        out.append(name[i:end])
        i = end
    return out


def tokenize_train(model: BpeModel, name: str) -> list[str]:
    return tokenize(model, name, model.train_cap)


def tokenize_test(model: BpeModel, name: str) -> list[str]:
    return tokenize(model, name, model.test_cap)


def _escape(text: str) -> str:
    return text.encode("unicode_escape").decode("ascii")


def _unescape(text: str) -> str:
    try:
        return text.encode("ascii").decode("unicode_escape")
    except (UnicodeEncodeError, UnicodeDecodeError) as exc:
        raise BpeFormatError(f"bad escape in subword model: {text!r}") from exc


_HEADER_RE = re.compile(r"^# base_chars=(\d+) merges=(\d+) mode=(drop|unknown)$")


def save_bpe(model: BpeModel, path: str | Path) -> None:
    """Write the model: header, sorted escaped base chars, merges in order."""
    lines = [
        f"# base_chars={len(model.base_chars)} merges={len(model.merges)} "
        f"mode={model.unseen_char_mode}"
    ]
    for ch in sorted(model.base_chars):
        lines.append(_escape(ch))
    for left, right in model.merges:
        lines.append(f"{_escape(left)}\t{_escape(right)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def load_bpe(path: str | Path) -> BpeModel:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise BpeFormatError("empty subword model file")
    header = _HEADER_RE.match(lines[0])
    if header is None:
        raise BpeFormatError(f"bad subword model header: {lines[0]!r}")
    n_chars, n_merges, mode = int(header.group(1)), int(header.group(2)), header.group(3)
    if len(lines) != 1 + n_chars + n_merges:
        raise BpeFormatError(
            f"subword model declares {n_chars} chars and {n_merges} merges "
            f"but has {len(lines) - 1} content lines"
        )
    chars = []
    for line in lines[1 : 1 + n_chars]:
        ch = _unescape(line)
        if len(ch) != 1:
            raise BpeFormatError(f"bad base char line: {line!r}")
        chars.append(ch)
    merges = []
    for line in lines[1 + n_chars :]:
        fields = line.split("\t")
        if len(fields) != 2:
            raise BpeFormatError(f"bad merge line: {line!r}")
        merges.append((_unescape(fields[0]), _unescape(fields[1])))
    try:
        return BpeModel(frozenset(chars), tuple(merges), mode)
    except ValueError as exc:
        raise BpeFormatError(str(exc)) from exc
