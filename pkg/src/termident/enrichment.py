"""Attach identifier payloads to reference nodes and collect them back out.

enrich gives every global/local/constructor reference an ident child naming
what it refers to (constructors are resolved through the environment); the
rest of the tree is untouched.  collect_idents walks an enriched term in
pre-order and yields one CategorizedIdent per reference, plus one Local entry
per named binder at its binding site.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .environment import GlobalEnv, resolve_constructor
from .errors import ToolError
from .terms import (
    ANONYMOUS,
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

__all__ = [
    "CategorizedIdent",
    "IdentCategory",
    "MalformedEnrichmentError",
    "collect_idents",
    "enrich",
]


class MalformedEnrichmentError(ToolError):
    pass


@dataclass(frozen=True)
class CategorizedIdent:
    """An identifier occurrence: category, text, and qualified path if any.

    Local identifiers never carry a path; global and constructor identifiers
    always do (for constructors it is the path of their inductive).
    """

    category: IdentCategory
    name: str
    path: Optional[QualifiedPath] = None

    def __post_init__(self) -> None:
        if self.category is IdentCategory.LOCAL:
            if self.path is not None:
                raise ValueError("local identifiers carry no path")
        elif self.path is None:
            raise ValueError(f"{self.category.value} identifiers require a path")


def enrich(term: Term, env: GlobalEnv) -> Term:
    """Insert one ident child per reference node; all other structure is kept.

    Rejects input that already contains ident nodes rather than inserting a
    second copy.  Constructor references must resolve in env.
    """
    match term:
        case GlobalRef(path=path, ident=ident):
            _require_bare(ident)
            return GlobalRef(path, IdentNode(IdentCategory.GLOBAL, path.label))
        case LocalRef(name=name, ident=ident):
            _require_bare(ident)
            return LocalRef(name, IdentNode(IdentCategory.LOCAL, name))
        case ConstructorRef(inductive=inductive, index=index, ident=ident):
            _require_bare(ident)
            ctor = resolve_constructor(env, inductive, index)
            return ConstructorRef(
                inductive, index, IdentNode(IdentCategory.CONSTRUCTOR, ctor)
            )
        case Binder(kind=kind, name=name, annotation=ann, body=body):
            return Binder(kind, name, enrich(ann, env), enrich(body, env))
        case App(head=head, args=args):
            return App(enrich(head, env), tuple(enrich(a, env) for a in args))
        case Case(scrutinee=scrut, branches=branches):
            return Case(enrich(scrut, env), tuple(enrich(b, env) for b in branches))
        case Sort():
            return term
        case IdentNode():
            raise MalformedEnrichmentError("input already contains an ident node")
    raise TypeError(f"not a term: {term!r}")


def _require_bare(ident: Optional[IdentNode]) -> None:
    if ident is not None:
        raise MalformedEnrichmentError("reference is already enriched")


def collect_idents(term: Term) -> list[CategorizedIdent]:
    """All identifier occurrences of an enriched term, in pre-order.

    Named binders contribute a Local entry at their binding site; anonymous
    binders contribute nothing.  A reference without its ident child is a
    malformed-enrichment error.
    """
    out: list[CategorizedIdent] = []
    _collect(term, out)
    return out


def _collect(term: Term, out: list[CategorizedIdent]) -> None:
    match term:
        case GlobalRef(path=path, ident=ident):
            _require_enriched(ident)
            out.append(CategorizedIdent(IdentCategory.GLOBAL, ident.name, path))
        case LocalRef(ident=ident):
            _require_enriched(ident)
            out.append(CategorizedIdent(IdentCategory.LOCAL, ident.name))
        case ConstructorRef(inductive=inductive, ident=ident):
            _require_enriched(ident)
            out.append(CategorizedIdent(IdentCategory.CONSTRUCTOR, ident.name, inductive))
        case Binder(name=name, annotation=ann, body=body):
            if name != ANONYMOUS:
                out.append(CategorizedIdent(IdentCategory.LOCAL, name))
            _collect(ann, out)
            _collect(body, out)
        case App(head=head, args=args):
            _collect(head, out)
            for arg in args:
                _collect(arg, out)
        case Case(scrutinee=scrut, branches=branches):
            _collect(scrut, out)
            for br in branches:
                _collect(br, out)
        case Sort():
            pass
        case IdentNode():
            raise MalformedEnrichmentError("ident node outside a reference")
        case _:
            raise TypeError(f"not a term: {term!r}")


def _require_enriched(ident: Optional[IdentNode]) -> None:
    if ident is None:
        raise MalformedEnrichmentError("reference is missing its ident child")
