"""Encode enriched terms into integer trees ready for model consumption.

An EncoderBundle packages the three identifier vocabularies, the path
vocabulary, the subword model, a dense node-tag table, and the run mode
(train or test, which only changes the subword cap: 4 vs 8).  encode_tree
maps an enriched term to an isomorphic EncodedNode tree; ident nodes carry
category code, vocabulary index, subword element ids, and, when the
identifier is qualified, one path index per segment.

encode_corpus writes one compact JSON object per term.  Bundles persist as
five files plus a manifest of their content hashes; loading verifies the
hashes and refuses tampered bundles.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Mapping, Optional

from .enrichment import MalformedEnrichmentError
from .errors import ToolError
from .paths import PathVocabulary, encode_path, load_path_vocab, save_path_vocab
from .subword import BpeModel, load_bpe, save_bpe, tokenize
from .terms import (
    App,
    Binder,
    Case,
    ConstructorRef,
    GlobalRef,
    IdentCategory,
    IdentNode,
    LocalRef,
    QualifiedPath,
    Sort,
    Term,
)
from .vocab import Vocabulary, load_vocab, save_vocab

__all__ = [
    "BUNDLE_FILES",
    "CorpusEncodeError",
    "EncodedNode",
    "EncoderBundle",
    "MANIFEST_FILE",
    "ManifestMismatchError",
    "MODES",
    "NODE_TAGS",
    "default_nonterminal_table",
    "encode_corpus",
    "encode_tree",
    "load_bundle",
    "save_bundle",
]

MODES = ("train", "test")

# Every serialized node tag, in canonical (alphabetical) order.
NODE_TAGS = (
    "app",
    "binder",
    "case",
    "constructor",
    "directory_path",
    "file_path",
    "global_ref",
    "ident",
    "inductive",
    "int",
    "label",
    "local_ref",
    "sort",
)

CATEGORY_CODES: Mapping[IdentCategory, int] = {
    IdentCategory.GLOBAL: 0,
    IdentCategory.LOCAL: 1,
    IdentCategory.CONSTRUCTOR: 2,
}

BUNDLE_FILES = {
    "global": "global.vocab",
    "local": "local.vocab",
    "constructor": "constructor.vocab",
    "path": "path.vocab",
    "bpe": "subword.bpe",
}
MANIFEST_FILE = "manifest.json"
ENCODED_FILE = "encoded.jsonl"


class ManifestMismatchError(ToolError):
    pass


class CorpusEncodeError(ToolError):
    def __init__(self, ordinal: int, cause: ToolError):
        super().__init__(f"term {ordinal}: {cause}")
        self.ordinal = ordinal


def default_nonterminal_table() -> dict[str, int]:
    return {tag: i for i, tag in enumerate(NODE_TAGS)}


@dataclass(frozen=True)
class EncodedNode:
    node_kind_id: int
    category: Optional[IdentCategory] = None
    vocab_index: Optional[int] = None
    subword_ids: Optional[tuple[int, ...]] = None
    path_ids: Optional[tuple[int, ...]] = None
    children: tuple["EncodedNode", ...] = ()


@dataclass(frozen=True)
class EncoderBundle:
    global_vocab: Vocabulary
    local_vocab: Vocabulary
    constructor_vocab: Vocabulary
    path_vocab: PathVocabulary
    bpe: BpeModel
    nonterminal_table: Mapping[str, int] = field(default_factory=default_nonterminal_table)
    mode: str = "train"

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"invalid mode: {self.mode!r}")
        for vocab, category in (
            (self.global_vocab, IdentCategory.GLOBAL),
            (self.local_vocab, IdentCategory.LOCAL),
            (self.constructor_vocab, IdentCategory.CONSTRUCTOR),
        ):
            if vocab.category is not category:
                raise ValueError(
                    f"{category.value} slot holds a {vocab.category.value} vocabulary"
                )
        missing = [tag for tag in NODE_TAGS if tag not in self.nonterminal_table]
        if missing:
            raise ValueError(f"nonterminal table is missing tags: {missing}")

    def vocab_for(self, category: IdentCategory) -> Vocabulary:
        if category is IdentCategory.GLOBAL:
            return self.global_vocab
        if category is IdentCategory.LOCAL:
            return self.local_vocab
        return self.constructor_vocab

    @property
    def subword_cap(self) -> int:
        return self.bpe.train_cap if self.mode == "train" else self.bpe.test_cap


def encode_tree(term: Term, bundle: EncoderBundle) -> EncodedNode:
    """Encode one enriched term; un-enriched references are rejected."""
    table = bundle.nonterminal_table

    def ident_child(ident: Optional[IdentNode], path: Optional[QualifiedPath]) -> EncodedNode:
        if ident is None:
            raise MalformedEnrichmentError("reference is missing its ident child")
        tokens = tokenize(bundle.bpe, ident.name, bundle.subword_cap)
        ids = bundle.bpe.element_ids
        return EncodedNode(
            table["ident"],
            category=ident.category,
            vocab_index=bundle.vocab_for(ident.category).lookup(ident.name),
            subword_ids=tuple(ids[tok] for tok in tokens),
            path_ids=None if path is None else tuple(encode_path(bundle.path_vocab, path)),
        )

    def go(t: Term) -> EncodedNode:
        match t:
            case GlobalRef(path=path, ident=ident):
                return EncodedNode(table["global_ref"], children=(ident_child(ident, path),))
            case LocalRef(ident=ident):
                return EncodedNode(table["local_ref"], children=(ident_child(ident, None),))
            case ConstructorRef(inductive=inductive, ident=ident):
                return EncodedNode(
                    table["constructor"], children=(ident_child(ident, inductive),)
                )
            case Binder(annotation=ann, body=body):
                return EncodedNode(table["binder"], children=(go(ann), go(body)))
            case App(head=head, args=args):
                return EncodedNode(
                    table["app"], children=(go(head), *(go(a) for a in args))
                )
            case Case(scrutinee=scrut, branches=branches):
                return EncodedNode(
                    table["case"], children=(go(scrut), *(go(b) for b in branches))
                )
            case Sort():
                return EncodedNode(table["sort"])
            case IdentNode():
                raise MalformedEnrichmentError("ident node outside a reference")
        raise TypeError(f"not a term: {t!r}")

    return go(term)


def _record(node: EncodedNode) -> dict:
    rec: dict = {"kind": node.node_kind_id}
    if node.category is not None:
        rec["cat"] = CATEGORY_CODES[node.category]
    if node.vocab_index is not None:
        rec["vocab"] = node.vocab_index
    if node.subword_ids is not None:
        rec["sub"] = list(node.subword_ids)
    if node.path_ids is not None:
        rec["path"] = list(node.path_ids)
    rec["children"] = [_record(child) for child in node.children]
    return rec


def encode_corpus(terms: Iterable[Term], bundle: EncoderBundle, sink: IO[str]) -> int:
    """Write one JSON line per term to sink; returns the number written."""
    count = 0
    for ordinal, term in enumerate(terms, start=1):
        try:
            node = encode_tree(term, bundle)
        except ToolError as exc:
            raise CorpusEncodeError(ordinal, exc) from exc
        sink.write(json.dumps(_record(node), separators=(",", ":")) + "\n")
        count += 1
    return count


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def save_bundle(
    directory: str | Path,
    global_vocab: Vocabulary,
    local_vocab: Vocabulary,
    constructor_vocab: Vocabulary,
    path_vocab: PathVocabulary,
    bpe: BpeModel,
) -> None:
    """Write the five bundle files plus the manifest of their hashes."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_vocab(global_vocab, directory / BUNDLE_FILES["global"])
    save_vocab(local_vocab, directory / BUNDLE_FILES["local"])
    save_vocab(constructor_vocab, directory / BUNDLE_FILES["constructor"])
    save_path_vocab(path_vocab, directory / BUNDLE_FILES["path"])
    save_bpe(bpe, directory / BUNDLE_FILES["bpe"])
    manifest = {
        "files": {name: _sha256(directory / name) for name in sorted(BUNDLE_FILES.values())}
    }
    (directory / MANIFEST_FILE).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
        newline="\n",
    )


def load_bundle(directory: str | Path, mode: str = "train") -> EncoderBundle:
    """Load a bundle, verifying every file against the manifest first."""
    directory = Path(directory)
    manifest_path = directory / MANIFEST_FILE
    if not manifest_path.is_file():
        raise ManifestMismatchError(f"missing bundle manifest: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        hashes = manifest["files"]
    except (ValueError, KeyError, TypeError) as exc:
        raise ManifestMismatchError(f"unreadable bundle manifest: {manifest_path}") from exc
    expected = sorted(BUNDLE_FILES.values())
    if sorted(hashes) != expected:
        raise ManifestMismatchError(
            f"manifest lists {sorted(hashes)}, expected {expected}"
        )
    for name in expected:
        file_path = directory / name
        if not file_path.is_file():
            raise ManifestMismatchError(f"bundle file missing: {file_path}")
        actual = _sha256(file_path)
        if actual != hashes[name]:
            raise ManifestMismatchError(
                f"bundle file {name} does not match its manifest hash"
            )
    return EncoderBundle(
        global_vocab=load_vocab(directory / BUNDLE_FILES["global"]),
        local_vocab=load_vocab(directory / BUNDLE_FILES["local"]),
        constructor_vocab=load_vocab(directory / BUNDLE_FILES["constructor"]),
        path_vocab=load_path_vocab(directory / BUNDLE_FILES["path"]),
        bpe=load_bpe(directory / BUNDLE_FILES["bpe"]),
        mode=mode,
    )
