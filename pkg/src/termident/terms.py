"""Gallina-style term ASTs and their s-expression serialization.

Terms arrive as s-expressions in the shape produced by Coq serialization
tools, e.g. a reference to the second constructor of ``option``:

    (constructor
      (inductive (file_path (directory_path [Datatypes; Init; Coq]) (label option)))
      (int 2))

The grammar, one form per node kind:

    term     := global | local | ctor | binder | app | sort | case | ident
    global   := ( global_ref fpath NAME ident? )
    local    := ( local_ref NAME ident? )
    ctor     := ( constructor ( inductive fpath ) ( int INT ) ident? )
    binder   := ( binder KIND NAME term term )        KIND in lambda|forall|let
    app      := ( app term ( term+ ) )
    sort     := ( sort NAME )
    case     := ( case term ( term* ) )
    ident    := ( ident CATEGORY NAME )               CATEGORY in global|local|constructor
    fpath    := ( file_path ( directory_path [ NAME (; NAME)* ] ) ( label NAME ) )

Bracket lists store directory segments leaf-first ([Datatypes; Init; Coq]);
the in-memory QualifiedPath keeps them root-first (Coq, Init, Datatypes), the
order in which segments are encoded downstream.  Both directions are lossless.

The optional trailing ident child on reference nodes is written by the
enrichment pass.  print_term emits the canonical single-space rendering, and
parse_term(print_term(t)) == t for every well-formed term.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

from .errors import ToolError

__all__ = [
    "ANONYMOUS",
    "App",
    "Binder",
    "BINDER_KINDS",
    "Case",
    "ConstructorRef",
    "GlobalRef",
    "IdentCategory",
    "IdentNode",
    "LocalRef",
    "QualifiedPath",
    "Sort",
    "Term",
    "TermSyntaxError",
    "is_name",
    "node_count",
    "node_tag",
    "parse_corpus",
    "parse_term",
    "print_term",
]

# Reserved binder name marking an anonymous binding; never a real identifier.
ANONYMOUS = "_"

BINDER_KINDS = ("lambda", "forall", "let")

_STRUCTURAL = frozenset("()[];")


def is_name(text: str) -> bool:
    """Names are non-empty and free of whitespace and structural punctuation."""
    if not text:
        return False
    return not any(ch.isspace() or ch in _STRUCTURAL for ch in text)


class IdentCategory(enum.Enum):
    GLOBAL = "global"
    LOCAL = "local"
    CONSTRUCTOR = "constructor"


@dataclass(frozen=True)
class QualifiedPath:
    """A dotted path: segments root-first plus the final label.

    GlobalRef(Coq.Init.Nat.mul) carries segments (Coq, Init, Nat) and label
    mul; the inductive behind option carries (Coq, Init, Datatypes) / option.
    """

    segments: tuple[str, ...]
    label: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))
        for seg in self.segments:
            if not is_name(seg):
                raise ValueError(f"invalid path segment: {seg!r}")
        if not is_name(self.label):
            raise ValueError(f"invalid path label: {self.label!r}")

    def dotted(self) -> str:
        return ".".join((*self.segments, self.label))

    @classmethod
    def from_dotted(cls, text: str) -> "QualifiedPath":
        parts = text.split(".")
        if len(parts) < 2 or not all(parts):
            raise ValueError(f"not a fully qualified dotted name: {text!r}")
        return cls(tuple(parts[:-1]), parts[-1])


@dataclass(frozen=True)
class IdentNode:
    """Identifier payload attached to a reference by enrichment; always a leaf."""

    category: IdentCategory
    name: str

    def __post_init__(self) -> None:
        if not isinstance(self.category, IdentCategory):
            raise ValueError(f"invalid identifier category: {self.category!r}")
        if not is_name(self.name):
            raise ValueError(f"invalid identifier name: {self.name!r}")


@dataclass(frozen=True)
class GlobalRef:
    """Reference to a global definition by its fully qualified path."""

    path: QualifiedPath
    ident: Optional[IdentNode] = None

    def __post_init__(self) -> None:
        if not self.path.segments:
            raise ValueError("global reference requires a fully qualified path")
        if self.ident is not None:
            if self.ident.category is not IdentCategory.GLOBAL:
                raise ValueError("global reference carries a non-global identifier")
            if self.ident.name != self.path.label:
                raise ValueError(
                    f"identifier {self.ident.name!r} does not match referenced {self.path.label!r}"
                )

    @property
    def name(self) -> str:
        return self.path.label


@dataclass(frozen=True)
class LocalRef:
    """Reference to a locally bound variable by bare name."""

    name: str
    ident: Optional[IdentNode] = None

    def __post_init__(self) -> None:
        if not is_name(self.name):
            raise ValueError(f"invalid local name: {self.name!r}")
        if self.ident is not None:
            if self.ident.category is not IdentCategory.LOCAL:
                raise ValueError("local reference carries a non-local identifier")
            if self.ident.name != self.name:
                raise ValueError(
                    f"identifier {self.ident.name!r} does not match referenced {self.name!r}"
                )


@dataclass(frozen=True)
class ConstructorRef:
    """Positional constructor reference: inductive path plus 1-based index."""

    inductive: QualifiedPath
    index: int
    ident: Optional[IdentNode] = None

    def __post_init__(self) -> None:
        if not self.inductive.segments:
            raise ValueError("constructor reference requires a fully qualified inductive")
        if not isinstance(self.index, int) or isinstance(self.index, bool) or self.index < 1:
            raise ValueError(f"constructor index must be an integer >= 1, got {self.index!r}")
        if self.ident is not None and self.ident.category is not IdentCategory.CONSTRUCTOR:
            raise ValueError("constructor reference carries a non-constructor identifier")


@dataclass(frozen=True)
class Binder:
    """lambda/forall/let binding; name "_" marks an anonymous binder."""

    kind: str
    name: str
    annotation: "Term"
    body: "Term"

    def __post_init__(self) -> None:
        if self.kind not in BINDER_KINDS:
            raise ValueError(f"invalid binder kind: {self.kind!r}")
        if not is_name(self.name):
            raise ValueError(f"invalid binder name: {self.name!r}")


@dataclass(frozen=True)
class App:
    head: "Term"
    args: tuple["Term", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("application requires at least one argument")


@dataclass(frozen=True)
class Sort:
    name: str

    def __post_init__(self) -> None:
        if not is_name(self.name):
            raise ValueError(f"invalid sort name: {self.name!r}")


@dataclass(frozen=True)
class Case:
    scrutinee: "Term"
    branches: tuple["Term", ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "branches", tuple(self.branches))


Term = Union[GlobalRef, LocalRef, ConstructorRef, Binder, App, Sort, Case, IdentNode]

_TAGS = {
    GlobalRef: "global_ref",
    LocalRef: "local_ref",
    ConstructorRef: "constructor",
    Binder: "binder",
    App: "app",
    Sort: "sort",
    Case: "case",
    IdentNode: "ident",
}


def node_tag(t: Term) -> str:
    return _TAGS[type(t)]


def node_count(t: Term) -> int:
    """Number of AST nodes in t; attached ident children count as nodes."""
    match t:
        case GlobalRef() | LocalRef() | ConstructorRef():
            return 1 if t.ident is None else 2
        case Binder(annotation=ann, body=body):
            return 1 + node_count(ann) + node_count(body)
        case App(head=head, args=args):
            return 1 + node_count(head) + sum(node_count(a) for a in args)
        case Case(scrutinee=scrut, branches=branches):
            return 1 + node_count(scrut) + sum(node_count(b) for b in branches)
        case Sort() | IdentNode():
            return 1
    raise TypeError(f"not a term: {t!r}")


class TermSyntaxError(ToolError):
    """Malformed term text; carries the byte offset and line of the fault."""

    def __init__(self, message: str, offset: int, line: int):
        super().__init__(f"line {line}, byte {offset}: {message}")
        self.offset = offset
        self.line = line


_CATEGORY_BY_ATOM = {c.value: c for c in IdentCategory}


class _Cursor:
    """Single position over the input text; parse functions advance it."""

    __slots__ = ("text", "pos")

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, message: str, pos: int | None = None) -> None:
        at = self.pos if pos is None else pos
        offset = len(self.text[:at].encode("utf-8"))
        line = self.text.count("\n", 0, at) + 1
        raise TermSyntaxError(message, offset, line)

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_ws(self) -> None:
        text = self.text
        while self.pos < len(text) and text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = repr(self.peek()) if not self.at_end() else "end of input"
            self.fail(f"expected {ch!r}, found {found}")
        self.pos += 1

    def atom(self) -> str:
        self.skip_ws()
        start = self.pos
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch.isspace() or ch in _STRUCTURAL:
                break
            self.pos += 1
        if self.pos == start:
            self.fail("expected a name")
        return text[start:self.pos]


def parse_term(text: str) -> Term:
    """Parse exactly one term; trailing non-whitespace is an error."""
    cur = _Cursor(text)
    term = _term(cur)
    cur.skip_ws()
    if not cur.at_end():
        cur.fail("unexpected text after term")
    return term


def parse_corpus(text: str) -> list[Term]:
    """Parse a whole corpus: any number of terms separated by whitespace.

    Covers both one-term-per-line files and multi-line terms separated by
    blank lines; line structure carries no meaning.
    """
    cur = _Cursor(text)
    out: list[Term] = []
    cur.skip_ws()
    while not cur.at_end():
        out.append(_term(cur))
        cur.skip_ws()
    return out


def _term(cur: _Cursor) -> Term:
    cur.skip_ws()
    open_pos = cur.pos
    cur.expect("(")
    tag_pos = cur.pos
    tag = cur.atom()
    parse_rest = _PARSERS.get(tag)
    if parse_rest is None:
        cur.fail(f"unknown node tag {tag!r}", tag_pos)
    try:
        return parse_rest(cur)
    except ValueError as exc:
        cur.fail(str(exc), open_pos)
        raise AssertionError  # unreachable; fail always raises


def _close(cur: _Cursor) -> None:
    cur.skip_ws()
    if cur.at_end():
        cur.fail("unbalanced parentheses: unexpected end of input")
    cur.expect(")")


def _open_tag(cur: _Cursor, tag: str) -> None:
    cur.skip_ws()
    cur.expect("(")
    found_pos = cur.pos
    found = cur.atom()
    if found != tag:
        cur.fail(f"expected {tag!r} node, found {found!r}", found_pos)


def _bracket_list(cur: _Cursor) -> list[str]:
    cur.skip_ws()
    cur.expect("[")
    cur.skip_ws()
    if cur.peek() == "]":
        cur.pos += 1
        return []
    items = [cur.atom()]
    while True:
        cur.skip_ws()
        ch = cur.peek()
        if ch == ";":
            cur.pos += 1
            items.append(cur.atom())
        elif ch == "]":
            cur.pos += 1
            return items
        else:
            cur.fail("expected ';' or ']' in directory list")


def _file_path(cur: _Cursor) -> tuple[list[str], str]:
    """Parse (file_path (directory_path [...]) (label X)); returns (dirs, X)."""
    _open_tag(cur, "file_path")
    _open_tag(cur, "directory_path")
    dirs = _bracket_list(cur)
    _close(cur)
    _open_tag(cur, "label")
    label = cur.atom()
    _close(cur)
    _close(cur)
    return dirs, label


def _int_node(cur: _Cursor) -> int:
    _open_tag(cur, "int")
    num_pos = cur.pos
    atom = cur.atom()
    try:
        value = int(atom, 10)
    except ValueError:
        cur.fail(f"expected an integer constructor index, found {atom!r}", num_pos)
    _close(cur)
    return value


def _ident_rest(cur: _Cursor) -> IdentNode:
    cat_pos = cur.pos
    cat_atom = cur.atom()
    category = _CATEGORY_BY_ATOM.get(cat_atom)
    if category is None:
        cur.fail(f"unknown identifier category {cat_atom!r}", cat_pos)
    name = cur.atom()
    _close(cur)
    return IdentNode(category, name)


def _opt_ident(cur: _Cursor) -> Optional[IdentNode]:
    cur.skip_ws()
    if cur.peek() != "(":
        return None
    _open_tag(cur, "ident")
    return _ident_rest(cur)


def _term_list(cur: _Cursor) -> list[Term]:
    cur.skip_ws()
    cur.expect("(")
    items: list[Term] = []
    while True:
        cur.skip_ws()
        if cur.peek() == ")":
            cur.pos += 1
            return items
        if cur.at_end():
            cur.fail("unbalanced parentheses: unexpected end of input")
        items.append(_term(cur))


def _global_rest(cur: _Cursor) -> Term:
    dirs, file_label = _file_path(cur)
    name = cur.atom()
    ident = _opt_ident(cur)
    _close(cur)
    path = QualifiedPath((*reversed(dirs), file_label), name)
    return GlobalRef(path, ident)


def _local_rest(cur: _Cursor) -> Term:
    name = cur.atom()
    ident = _opt_ident(cur)
    _close(cur)
    return LocalRef(name, ident)


def _constructor_rest(cur: _Cursor) -> Term:
    _open_tag(cur, "inductive")
    dirs, ind_label = _file_path(cur)
    _close(cur)
    index = _int_node(cur)
    ident = _opt_ident(cur)
    _close(cur)
    inductive = QualifiedPath(tuple(reversed(dirs)), ind_label)
    return ConstructorRef(inductive, index, ident)


def _binder_rest(cur: _Cursor) -> Term:
    kind = cur.atom()
    name = cur.atom()
    annotation = _term(cur)
    body = _term(cur)
    _close(cur)
    return Binder(kind, name, annotation, body)


def _app_rest(cur: _Cursor) -> Term:
    head = _term(cur)
    args = _term_list(cur)
    _close(cur)
    return App(head, tuple(args))


def _sort_rest(cur: _Cursor) -> Term:
    name = cur.atom()
    _close(cur)
    return Sort(name)


def _case_rest(cur: _Cursor) -> Term:
    scrutinee = _term(cur)
    branches = _term_list(cur)
    _close(cur)
    return Case(scrutinee, tuple(branches))


_PARSERS = {
    "global_ref": _global_rest,
    "local_ref": _local_rest,
    "constructor": _constructor_rest,
    "binder": _binder_rest,
    "app": _app_rest,
    "sort": _sort_rest,
    "case": _case_rest,
    "ident": _ident_rest,
}


def print_term(t: Term) -> str:
    """Render t in canonical form: single spaces, '; '-separated brackets."""
    parts: list[str] = []
    _render(t, parts)
    return "".join(parts)


def _render_file_path(segments: tuple[str, ...], label: str, parts: list[str]) -> None:
    dirs = "; ".join(reversed(segments))
    parts.append(f"(file_path (directory_path [{dirs}]) (label {label}))")


def _render(t: Term, parts: list[str]) -> None:
    match t:
        case GlobalRef(path=path, ident=ident):
            parts.append("(global_ref ")
            _render_file_path(path.segments[:-1], path.segments[-1], parts)
            parts.append(f" {path.label}")
            if ident is not None:
                parts.append(" ")
                _render(ident, parts)
            parts.append(")")
        case LocalRef(name=name, ident=ident):
            parts.append(f"(local_ref {name}")
            if ident is not None:
                parts.append(" ")
                _render(ident, parts)
            parts.append(")")
        case ConstructorRef(inductive=ind, index=index, ident=ident):
            parts.append("(constructor (inductive ")
            _render_file_path(ind.segments, ind.label, parts)
            parts.append(f") (int {index})")
            if ident is not None:
                parts.append(" ")
                _render(ident, parts)
            parts.append(")")
        case Binder(kind=kind, name=name, annotation=ann, body=body):
            parts.append(f"(binder {kind} {name} ")
            _render(ann, parts)
            parts.append(" ")
            _render(body, parts)
            parts.append(")")
        case App(head=head, args=args):
            parts.append("(app ")
            _render(head, parts)
            parts.append(" (")
            for i, arg in enumerate(args):
                if i:
                    parts.append(" ")
                _render(arg, parts)
            parts.append("))")
        case Sort(name=name):
            parts.append(f"(sort {name})")
        case Case(scrutinee=scrut, branches=branches):
            parts.append("(case ")
            _render(scrut, parts)
            parts.append(" (")
            for i, br in enumerate(branches):
                if i:
                    parts.append(" ")
                _render(br, parts)
            parts.append("))")
        case IdentNode(category=category, name=name):
            parts.append(f"(ident {category.value} {name})")
        case _:
            raise TypeError(f"not a term: {t!r}")
