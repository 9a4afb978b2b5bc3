"""Global environment: inductive declarations and constructor lookup.

Environment files carry one record per line:

    # comment
    inductive Coq.Init.Datatypes.option := Some | None
    definition Coq.Init.Nat.mul

Constructor order in the declaration is positional; resolve_constructor maps
a (inductive, 1-based index) pair back to the constructor's name.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import ToolError
from .terms import QualifiedPath, is_name

__all__ = [
    "ConstructorIndexError",
    "DuplicateInductiveError",
    "EnvFormatError",
    "GlobalEnv",
    "InductiveDecl",
    "UnknownInductiveError",
    "load_env",
    "resolve_constructor",
]


class EnvFormatError(ToolError):
    pass


class DuplicateInductiveError(EnvFormatError):
    def __init__(self, message: str, name: str):
        super().__init__(message)
        self.name = name


class UnknownInductiveError(ToolError):
    def __init__(self, path: QualifiedPath):
        super().__init__(f"unknown inductive: {path.dotted()}")
        self.path = path


class ConstructorIndexError(ToolError):
    def __init__(self, path: QualifiedPath, index: int, arity: int):
        super().__init__(
            f"constructor index {index} out of range for {path.dotted()} "
            f"({arity} constructors)"
        )
        self.path = path
        self.index = index


@dataclass(frozen=True)
class InductiveDecl:
    name: QualifiedPath
    constructors: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "constructors", tuple(self.constructors))
        if not self.constructors:
            raise ValueError(f"inductive {self.name.dotted()} declares no constructors")
        seen = set()
        for ctor in self.constructors:
            if not is_name(ctor):
                raise ValueError(f"invalid constructor name: {ctor!r}")
            if ctor in seen:
                raise ValueError(
                    f"duplicate constructor {ctor!r} in {self.name.dotted()}"
                )
            seen.add(ctor)


@dataclass(frozen=True)
class GlobalEnv:
    """Inductives keyed by dotted name, plus known global definitions."""

    inductives: Mapping[str, InductiveDecl] = field(default_factory=dict)
    definitions: frozenset[str] = frozenset()


def load_env(text: str) -> GlobalEnv:
    """Parse environment text; blank lines and '#' comments are skipped."""
    inductives: dict[str, InductiveDecl] = {}
    definitions: set[str] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "inductive":
            name_part, sep, ctors_part = rest.partition(":=")
            if not sep:
                raise EnvFormatError(f"line {line_no}: inductive record missing ':='")
            path = _dotted(name_part.strip(), line_no)
            ctors = tuple(c.strip() for c in ctors_part.split("|"))
            try:
                decl = InductiveDecl(path, ctors)
            except ValueError as exc:
                raise EnvFormatError(f"line {line_no}: {exc}") from exc
            key = path.dotted()
            if key in inductives:
                raise DuplicateInductiveError(
                    f"line {line_no}: duplicate inductive {key}", key
                )
            inductives[key] = decl
        elif keyword == "definition":
            if not rest:
                raise EnvFormatError(f"line {line_no}: definition record missing a name")
            definitions.add(_dotted(rest, line_no).dotted())
        else:
            raise EnvFormatError(f"line {line_no}: unknown record {keyword!r}")
    return GlobalEnv(inductives, frozenset(definitions))


def _dotted(text: str, line_no: int) -> QualifiedPath:
    try:
        return QualifiedPath.from_dotted(text)
    except ValueError as exc:
        raise EnvFormatError(f"line {line_no}: {exc}") from exc


def resolve_constructor(env: GlobalEnv, inductive: QualifiedPath, index: int) -> str:
    """Name of constructor `index` (1-based) of `inductive`; exact-path lookup."""
    decl = env.inductives.get(inductive.dotted())
    if decl is None:
        raise UnknownInductiveError(inductive)
    if not 1 <= index <= len(decl.constructors):
        raise ConstructorIndexError(inductive, index, len(decl.constructors))
    return decl.constructors[index - 1]
