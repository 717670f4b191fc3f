"""Tanglegrams: two equal-size white tree shapes with a perfect matching
between their leaf sets.

A tanglegram is stored as ``(left, right, matching)`` where ``matching[i]``
is the right-tree leaf position matched with left-tree leaf position ``i``
(positions follow each shape's canonical leaf order).  Two tanglegrams are
isomorphic when a graph isomorphism maps one to the other fixing the left
root and the right root; equivalently, when their trees are equal as shapes
and some pair of leaf automorphisms carries one matching to the other.
Swapping the left and right trees is *not* quotiented out.

Canonical codes take the form ``<left code>|<right code>|<permutation>``
with the permutation minimized lexicographically over the automorphism
orbit, so isomorphism is again plain string equality.  The automorphism
orbit is enumerated explicitly, which is fine at the small sizes where
canonicalization is ever needed; never canonicalize a tanglegram whose trees
have huge automorphism groups (e.g. large complete trees).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from utk.shapes import (
    Shape,
    enumerate_shapes,
    induced_with_leafmap,
    parse_newick,
    to_newick,
)

__all__ = [
    "Tanglegram",
    "leaf_automorphisms",
    "canonical_tanglegram",
    "enumerate_tanglegrams",
    "count_tanglegrams",
    "induced_subtanglegram",
    "is_induced_subtanglegram",
    "is_universal_tanglegram",
    "format_tanglegram",
    "parse_tanglegram",
    "tanglegram_dot",
]


@dataclass(frozen=True)
class Tanglegram:
    left: Shape
    right: Shape
    matching: tuple[int, ...]

    def __post_init__(self):
        if self.left.has_red or self.right.has_red:
            raise ValueError("tanglegram trees must be white-only")
        if self.left.arity != self.right.arity:
            raise ValueError("tanglegram trees must share an arity bound")
        n = self.left.white_leaves
        if self.right.white_leaves != n:
            raise ValueError("tanglegram trees must have equally many leaves")
        if sorted(self.matching) != list(range(n)):
            raise ValueError("matching must be a permutation of the leaf positions")

    @property
    def size(self) -> int:
        return self.left.white_leaves

    def mirror(self) -> "Tanglegram":
        """Swap the left and right trees (matching inverted)."""
        inverse = [0] * self.size
        for i, j in enumerate(self.matching):
            inverse[j] = i
        return Tanglegram(self.right, self.left, tuple(inverse))

    def code(self) -> str:
        return canonical_tanglegram(self)

    def __repr__(self) -> str:
        return f"Tanglegram({format_tanglegram(self)!r})"


# --------------------------------------------------------------------------- #
# Automorphisms and canonical codes
# --------------------------------------------------------------------------- #


def leaf_automorphisms(shape: Shape) -> list[tuple[int, ...]]:
    """All permutations of leaf positions induced by tree automorphisms.

    Children with equal codes may be permuted among themselves; every child
    contributes its own automorphisms.  The group is returned explicitly, so
    only call this for shapes whose group is small.
    """
    if shape.is_leaf:
        return [(0,)]

    kids = shape.children
    sizes = [k.leaf_count for k in kids]
    offsets = [0]
    for s in sizes[:-1]:
        offsets.append(offsets[-1] + s)
    kid_auts = [leaf_automorphisms(k) for k in kids]

    # Groups of consecutive equal children (canonical order keeps them adjacent).
    groups: list[list[int]] = []
    for idx, kid in enumerate(kids):
        if groups and kids[groups[-1][0]].code == kid.code:
            groups[-1].append(idx)
        else:
            groups.append([idx])

    group_perms = [list(itertools.permutations(g)) for g in groups]
    out = []
    for placement in itertools.product(*group_perms):
        target = {}
        for group, perm in zip(groups, placement):
            for src, dst in zip(group, perm):
                target[src] = dst
        for chosen in itertools.product(*kid_auts):
            perm = [0] * (offsets[-1] + sizes[-1])
            for i in range(len(kids)):
                base, dest = offsets[i], offsets[target[i]]
                aut = chosen[i]
                for local in range(sizes[i]):
                    perm[base + local] = dest + aut[local]
            out.append(tuple(perm))
    return out


def _orbit(matching: tuple[int, ...], auts_left, auts_right) -> Iterator[tuple[int, ...]]:
    n = len(matching)
    for g_left in auts_left:
        # sigma o g_left^{-1}
        moved = [0] * n
        for p in range(n):
            moved[g_left[p]] = matching[p]
        for g_right in auts_right:
            yield tuple(g_right[moved[p]] for p in range(n))


def canonical_tanglegram(t: Tanglegram) -> str:
    """Canonical code; equal codes mean isomorphic tanglegrams."""
    best = min(_orbit(t.matching, leaf_automorphisms(t.left), leaf_automorphisms(t.right)))
    return _render_code(t.left, t.right, best)


def _render_code(left: Shape, right: Shape, matching: Iterable[int]) -> str:
    return f"{left.code}|{right.code}|{' '.join(str(i) for i in matching)}"


# --------------------------------------------------------------------------- #
# Enumeration
# --------------------------------------------------------------------------- #


@lru_cache(maxsize=None)
def _tanglegram_classes(n: int, arity: int) -> tuple[Tanglegram, ...]:
    shapes = list(enumerate_shapes(n, arity))
    auts = {s.code: leaf_automorphisms(s) for s in shapes}
    out = []
    for left, right in itertools.product(shapes, repeat=2):
        seen: set[tuple[int, ...]] = set()
        for sigma in itertools.permutations(range(n)):
            if sigma in seen:
                continue
            orbit = set(_orbit(sigma, auts[left.code], auts[right.code]))
            seen |= orbit
            out.append(Tanglegram(left, right, min(orbit)))
    out.sort(key=lambda t: _render_code(t.left, t.right, t.matching))
    return tuple(out)


def enumerate_tanglegrams(n: int, arity: int = 2) -> Iterator[Tanglegram]:
    """One representative per isomorphism class of size-``n`` tanglegrams,
    sorted by canonical code.  Practical for desk-scale ``n`` (about 6)."""
    if n < 1:
        raise ValueError("tanglegram size must be >= 1")
    yield from _tanglegram_classes(n, arity)


def count_tanglegrams(n: int, arity: int = 2) -> int:
    return len(_tanglegram_classes(n, arity))


# --------------------------------------------------------------------------- #
# Induced subtanglegrams and universality
# --------------------------------------------------------------------------- #


def induced_subtanglegram(t: Tanglegram, left_positions: Iterable[int]) -> Tanglegram:
    """Subtanglegram induced by the matching edges at the given left-leaf
    positions: both leaf sets induce subtrees, and the selected edges are
    kept (re-indexed to the induced trees' canonical leaf orders)."""
    edges = [(p, t.matching[p]) for p in sorted(set(left_positions))]
    if not edges:
        raise ValueError("need at least one matching edge")
    left, left_map = induced_with_leafmap(t.left, [p for p, _ in edges])
    right, right_map = induced_with_leafmap(t.right, [q for _, q in edges])
    matching = [0] * len(edges)
    for p, q in edges:
        matching[left_map[p]] = right_map[q]
    return Tanglegram(left, right, tuple(matching))


def is_induced_subtanglegram(small: Tanglegram, big: Tanglegram) -> bool:
    """True iff some subset of ``big``'s matching edges induces a tanglegram
    isomorphic to ``small``."""
    k = small.size
    if k > big.size:
        return False
    wanted = canonical_tanglegram(small)
    for subset in itertools.combinations(range(big.size), k):
        if canonical_tanglegram(induced_subtanglegram(big, subset)) == wanted:
            return True
    return False


def is_universal_tanglegram(t: Tanglegram, n: int) -> bool:
    """True iff every isomorphism class of size-``n`` tanglegrams occurs as
    an induced subtanglegram of ``t``."""
    if t.size < n:
        return False
    needed = {canonical_tanglegram(c) for c in enumerate_tanglegrams(n, t.left.arity)}
    for subset in itertools.combinations(range(t.size), n):
        code = canonical_tanglegram(induced_subtanglegram(t, subset))
        needed.discard(code)
        if not needed:
            return True
    return False


# --------------------------------------------------------------------------- #
# Text and DOT formats
# --------------------------------------------------------------------------- #


def format_tanglegram(t: Tanglegram) -> str:
    """``<newick-left>|<newick-right>|<perm as space-separated 0-based list>``"""
    return "|".join(
        (to_newick(t.left), to_newick(t.right), " ".join(str(i) for i in t.matching))
    )


def parse_tanglegram(text: str, arity: int = 2) -> Tanglegram:
    parts = text.strip().split("|")
    if len(parts) != 3:
        raise ValueError("tanglegram text needs exactly 3 '|'-separated fields")
    left = parse_newick(parts[0], arity)
    right = parse_newick(parts[1], arity)
    matching = tuple(int(tok) for tok in parts[2].split())
    return Tanglegram(left, right, matching)


def tanglegram_dot(t: Tanglegram, name: str = "tanglegram") -> str:
    """DOT export: the two trees face each other, matching edges dashed."""
    lines = [
        f"graph {name} {{",
        "  rankdir=LR;",
    ]
    leaf_ids: dict[tuple[str, int], str] = {}

    def emit(shape: Shape, tag: str) -> None:
        counter = itertools.count()
        leaf_counter = itertools.count()

        def walk(node: Shape, parent: str | None) -> None:
            node_id = f"{tag}{next(counter)}"
            if node.is_leaf:
                leaf_ids[(tag, next(leaf_counter))] = node_id
                lines.append(f'  {node_id} [shape=circle, label=""];')
            elif parent is None:
                lines.append(f'  {node_id} [shape=box, label=""];')
            else:
                lines.append(f'  {node_id} [shape=point];')
            if parent is not None:
                lines.append(f"  {parent} -- {node_id};")
            for kid in node.children:
                walk(kid, node_id)

        walk(shape, None)

    emit(t.left, "L")
    emit(t.right, "R")
    for p, q in enumerate(t.matching):
        lines.append(f"  {leaf_ids[('L', p)]} -- {leaf_ids[('R', q)]} [style=dashed];")
    lines.append("}")
    return "\n".join(lines)
