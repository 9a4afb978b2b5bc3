"""Independent reference implementations used to check the package.

Everything here is written from the operation definitions alone, with
different mechanics than the package (flat occurrence lists instead of
word counters, selection loops instead of sorts, length-descending prefix
scans instead of tries) so that agreement is meaningful.
"""

from __future__ import annotations

import random

from termident.terms import (
    ANONYMOUS,
    App,
    Binder,
    Case,
    ConstructorRef,
    GlobalRef,
    IdentNode,
    LocalRef,
    QualifiedPath,
    Sort,
)


# ---------------------------------------------------------------- subword

def textbook_bpe_merges(corpus: list[str], num_merges: int) -> list[tuple[str, str]]:
    """Classic byte-pair training: recount all adjacent pairs each round over
    a flat list of occurrence sequences, merge the most frequent pair, ties
    to the lexicographically smallest pair, stop when the best pair occurs
    fewer than two times."""
    seqs = [list(word) for word in corpus]
    merges: list[tuple[str, str]] = []
    for _ in range(num_merges):
        counts: dict[tuple[str, str], int] = {}
        for seq in seqs:
            for k in range(len(seq) - 1):
                pair = (seq[k], seq[k + 1])
                counts[pair] = counts.get(pair, 0) + 1
        ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
        if not ranked or ranked[0][1] < 2:
            break
        pair = ranked[0][0]
        merges.append(pair)
        seqs = [_merge_one(seq, pair) for seq in seqs]
    return merges


def _merge_one(seq: list[str], pair: tuple[str, str]) -> list[str]:
    out: list[str] = []
    k = 0
    while k < len(seq):
        if k + 1 < len(seq) and (seq[k], seq[k + 1]) == pair:
            out.append(seq[k] + seq[k + 1])
            k += 2
        else:
            out.append(seq[k])
            k += 1
    return out


def brute_longest_match(
    vocab: set[str],
    base_chars: set[str],
    name: str,
    mode: str = "drop",
    unknown: str = "<unknown>",
    cap: int | None = None,
) -> list[str]:
    """Greedy longest prefix match by trying every length, longest first."""
    out: list[str] = []
    i = 0
    while i < len(name) and (cap is None or len(out) < cap):
        if name[i] not in base_chars:
            if mode == "unknown":
                out.append(unknown)
            i += 1
            continue
        for length in range(len(name) - i, 0, -1):
            piece = name[i : i + length]
            if piece in vocab:
                out.append(piece)
                i += length
                break
        else:  # unreachable when base chars are all in vocab
            raise AssertionError(f"no match at {i} in {name!r}")
    return out


# ------------------------------------------------------------ vocabularies

def count_filter_entries(
    names: list[str], threshold: int
) -> tuple[dict[str, int], dict[str, int], dict[str, int]]:
    """Count, split at the threshold, and assign indices by repeatedly
    selecting the (highest count, smallest name) remainder."""
    counts: dict[str, int] = {}
    for name in names:
        counts[name] = counts.get(name, 0) + 1
    kept = {name: c for name, c in counts.items() if c >= threshold}
    below = {name: c for name, c in counts.items() if c < threshold}
    entries: dict[str, int] = {}
    remaining = dict(kept)
    while remaining:
        best = None
        for name, count in remaining.items():
            if (
                best is None
                or count > remaining[best]
                or (count == remaining[best] and name < best)
            ):
                best = name
        entries[best] = len(entries)
        del remaining[best]
    return entries, kept, below


# ------------------------------------------------------------- tree walks

def children_of(term) -> list:
    """Child terms in serialization order; attached idents come as children."""
    if isinstance(term, (GlobalRef, LocalRef, ConstructorRef)):
        return [] if term.ident is None else [term.ident]
    if isinstance(term, Binder):
        return [term.annotation, term.body]
    if isinstance(term, App):
        return [term.head, *term.args]
    if isinstance(term, Case):
        return [term.scrutinee, *term.branches]
    if isinstance(term, (Sort, IdentNode)):
        return []
    raise AssertionError(f"not a term: {term!r}")


def tree_node_count(term) -> int:
    total = 0
    stack = [term]
    while stack:
        node = stack.pop()
        total += 1
        stack.extend(children_of(node))
    return total


def reference_nodes(term) -> list:
    """All reference nodes in pre-order."""
    refs = []
    agenda = [term]
    while agenda:
        node = agenda.pop(0)
        if isinstance(node, (GlobalRef, LocalRef, ConstructorRef)):
            refs.append(node)
        agenda = children_of(node) + agenda
    return refs


def arity_sequence(root, children_getter) -> list[int]:
    """Pre-order list of child counts; equal sequences mean isomorphic shape."""
    out: list[int] = []

    def visit(node) -> None:
        kids = children_getter(node)
        out.append(len(kids))
        for kid in kids:
            visit(kid)

    visit(root)
    return out


# -------------------------------------------------------- term generation

_LOCALS = ("x", "x0", "y", "n", "m", "g", "g0", "acc", "αx")
_GLOBALS = (
    QualifiedPath(("Coq", "Init", "Nat"), "mul"),
    QualifiedPath(("Coq", "Init", "Nat"), "add"),
    QualifiedPath(("Coq", "Init", "Peano"), "le"),
    QualifiedPath(("Top", "Posnat"), "posnatEq"),
    QualifiedPath(("Top", "Posnat"), "mult_gt_0"),
    QualifiedPath(("Coq", "Lists", "List"), "map"),
)
_SORTS = ("Prop", "Set", "Type")
_BINDER_NAMES = ("x", "y", "n", "H", ANONYMOUS)


def gen_term(
    rng: random.Random,
    inductives: list[tuple[QualifiedPath, int]],
    depth: int = 4,
):
    """Random well-formed raw term; constructor refs stay within arity."""
    leaf_kinds = ["local", "global", "sort"] + (["ctor"] if inductives else [])
    kind = rng.choice(leaf_kinds if depth <= 0 else leaf_kinds + ["app", "binder", "case"])
    if kind == "local":
        return LocalRef(rng.choice(_LOCALS))
    if kind == "global":
        return GlobalRef(rng.choice(_GLOBALS))
    if kind == "sort":
        return Sort(rng.choice(_SORTS))
    if kind == "ctor":
        path, arity = rng.choice(inductives)
        return ConstructorRef(path, rng.randint(1, arity))
    if kind == "app":
        head = gen_term(rng, inductives, depth - 1)
        args = tuple(
            gen_term(rng, inductives, depth - 1) for _ in range(rng.randint(1, 3))
        )
        return App(head, args)
    if kind == "binder":
        return Binder(
            rng.choice(("lambda", "forall", "let")),
            rng.choice(_BINDER_NAMES),
            gen_term(rng, inductives, depth - 1),
            gen_term(rng, inductives, depth - 1),
        )
    scrut = gen_term(rng, inductives, depth - 1)
    branches = tuple(
        gen_term(rng, inductives, depth - 1) for _ in range(rng.randint(0, 3))
    )
    return Case(scrut, branches)
