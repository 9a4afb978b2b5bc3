"""Identifier enrichment and deterministic encoding for proof-term ASTs.

Pipeline: parse s-expression terms, enrich references with categorized
identifiers, build per-category vocabularies plus a path-segment vocabulary
and a byte-pair subword model, then encode terms to integer trees.
"""

from .encoding import (
    EncodedNode,
    EncoderBundle,
    default_nonterminal_table,
    encode_corpus,
    encode_tree,
    load_bundle,
    save_bundle,
)
from .enrichment import CategorizedIdent, MalformedEnrichmentError, collect_idents, enrich
from .environment import GlobalEnv, InductiveDecl, load_env, resolve_constructor
from .errors import ToolError
from .paths import PathVocabulary, build_path_vocab, encode_path
from .subword import BpeModel, tokenize, tokenize_test, tokenize_train, train_bpe
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
    TermSyntaxError,
    node_count,
    parse_corpus,
    parse_term,
    print_term,
)
from .vocab import Vocabulary, build_vocab

__version__ = "0.1.0"

__all__ = [
    "App",
    "Binder",
    "BpeModel",
    "Case",
    "CategorizedIdent",
    "ConstructorRef",
    "EncodedNode",
    "EncoderBundle",
    "GlobalEnv",
    "GlobalRef",
    "IdentCategory",
    "IdentNode",
    "InductiveDecl",
    "LocalRef",
    "MalformedEnrichmentError",
    "PathVocabulary",
    "QualifiedPath",
    "Sort",
    "Term",
    "TermSyntaxError",
    "ToolError",
    "Vocabulary",
    "build_path_vocab",
    "build_vocab",
    "collect_idents",
    "default_nonterminal_table",
    "encode_corpus",
    "encode_path",
    "encode_tree",
    "enrich",
    "load_bundle",
    "load_env",
    "node_count",
    "parse_corpus",
    "parse_term",
    "print_term",
    "resolve_constructor",
    "save_bundle",
    "tokenize",
    "tokenize_test",
    "tokenize_train",
    "train_bpe",
]
