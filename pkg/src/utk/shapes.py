"""Rooted tree shapes with an optional red leaf.

The central object is :class:`Shape`: an unlabeled rooted tree in which every
internal vertex has between 2 and ``d`` children (``d = 2`` gives the binary
case), every leaf is white except for at most one distinguished red leaf, and
children are unordered.  Shapes are value objects: children are stored sorted
by canonical code, so two shapes are isomorphic exactly when their codes are
equal, and ``==`` tests isomorphism.

Canonical code format
---------------------
A leaf is ``"o"`` (white) or ``"r"`` (red).  An internal vertex is ``"("`` +
the concatenation of its children's codes + ``")"``, with children sorted
ascending under the symbol order ``o < r < ( < )`` (leaves sort before
subtrees, white before red).  Example: the 3-leaf caterpillar is
``"(o(oo))"`` and the 4-leaf complete tree is ``"((oo)(oo))"``.

Streams produced by :func:`enumerate_shapes` are sorted by plain ASCII order
of the codes, which is also the order used for catalogs and CLI output.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Shape",
    "JellyfishSpec",
    "make_leaf",
    "join",
    "graft",
    "caterpillar",
    "complete_tree",
    "jellyfish",
    "white_leaf_count",
    "height",
    "canonical_code",
    "parse_code",
    "parse_newick",
    "to_newick",
    "to_dot",
    "enumerate_shapes",
    "count_shapes",
    "leaf_colors",
    "induced_subshape",
    "induced_with_leafmap",
    "subtree_at",
    "replace_subtree",
]

# Child sort order: leaves before subtrees, white before red.  Translating a
# code through this table and comparing the results implements that order
# with ordinary string comparison.
_CHILD_ORDER = str.maketrans({"o": "\x00", "r": "\x01", "(": "\x02", ")": "\x03"})


def _child_key(code: str) -> str:
    return code.translate(_CHILD_ORDER)


class Shape:
    """An immutable rooted tree shape, canonicalized at construction.

    Use the factory functions (:func:`make_leaf`, :func:`join`, ...) rather
    than calling the constructor directly.  A shape is a leaf iff
    ``children`` is empty; ``red`` is only meaningful for leaves.  ``arity``
    is the maximum number of children allowed anywhere in the tree; shapes of
    different arity bounds never mix in one operation.
    """

    __slots__ = ("children", "red", "arity", "code", "white_leaves", "height", "has_red")

    children: tuple["Shape", ...]
    red: bool
    arity: int
    code: str
    white_leaves: int
    height: int
    has_red: bool

    def __init__(self, children: Sequence["Shape"] = (), red: bool = False, arity: int = 2):
        if arity < 2:
            raise ValueError(f"arity bound must be >= 2, got {arity}")
        kids = tuple(sorted(children, key=lambda s: _child_key(s.code)))
        if kids:
            if red:
                raise ValueError("only a leaf can be red")
            if not 2 <= len(kids) <= arity:
                raise ValueError(
                    f"internal vertex needs 2..{arity} children, got {len(kids)}"
                )
            if any(k.arity != arity for k in kids):
                raise ValueError("mixed arity bounds in children")
            reds = sum(k.has_red for k in kids)
            if reds > 1:
                raise ValueError("more than one red leaf")
            code = "(" + "".join(k.code for k in kids) + ")"
            white = sum(k.white_leaves for k in kids)
            hgt = 1 + max(k.height for k in kids)
            has_red = reds == 1
        else:
            code = "r" if red else "o"
            white = 0 if red else 1
            hgt = 0
            has_red = red
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "red", red)
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "code", code)
        object.__setattr__(self, "white_leaves", white)
        object.__setattr__(self, "height", hgt)
        object.__setattr__(self, "has_red", has_red)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Shape is immutable")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def leaf_count(self) -> int:
        """Total number of leaves, red included."""
        return self.white_leaves + (1 if self.has_red else 0)

    def with_arity(self, arity: int) -> "Shape":
        """Re-tag this shape with a different arity bound (must still fit)."""
        if arity == self.arity:
            return self
        if self.is_leaf:
            return Shape((), self.red, arity)
        return Shape(tuple(k.with_arity(arity) for k in self.children), False, arity)

    def __eq__(self, other) -> bool:
        return isinstance(other, Shape) and self.code == other.code

    def __hash__(self) -> int:
        return hash(self.code)

    def __lt__(self, other: "Shape") -> bool:
        return self.code < other.code

    def __repr__(self) -> str:
        return f"Shape({self.code!r})"


@dataclass(frozen=True)
class JellyfishSpec:
    """Parameters of a jellyfish tree: a complete binary tree of height ``h``
    with a caterpillar of ``ell`` leaves hanging from each of its leaves."""

    h: int
    ell: int

    def __post_init__(self):
        if self.h < 0:
            raise ValueError("jellyfish height must be >= 0")
        if self.ell < 2:
            raise ValueError("jellyfish caterpillar size must be >= 2")


# --------------------------------------------------------------------------- #
# Constructors
# --------------------------------------------------------------------------- #


def make_leaf(color: str = "white", arity: int = 2) -> Shape:
    """Return a single-leaf shape; ``color`` is ``"white"`` or ``"red"``."""
    if color not in ("white", "red"):
        raise ValueError(f"leaf color must be 'white' or 'red', got {color!r}")
    return Shape((), color == "red", arity)


def join(parts: Sequence[Shape], arity: int | None = None) -> Shape:
    """Join shapes under a fresh root.

    At most one part may carry a red leaf; the result is a redleaf shape
    exactly when one does.  White-leaf counts add up.  ``arity`` defaults to
    the parts' common arity bound.
    """
    parts = tuple(parts)
    if not parts:
        raise ValueError("join needs at least 2 parts")
    if arity is None:
        arity = parts[0].arity
    return Shape(parts, False, arity)


def graft(host: Shape, scion: Shape) -> Shape:
    """Replace the red leaf of ``host`` by ``scion``.

    The red leaf loses its coloring; the result has a red leaf iff ``scion``
    does.  White-leaf counts add up.
    """
    if not host.has_red:
        raise ValueError("graft host has no red leaf")
    if host.arity != scion.arity:
        raise ValueError("mixed arity bounds in graft")

    def rebuild(node: Shape) -> Shape:
        if node.is_leaf:
            return scion  # node is the red leaf
        kids = tuple(rebuild(k) if k.has_red else k for k in node.children)
        return Shape(kids, False, node.arity)

    return rebuild(host)


def caterpillar(n: int, arity: int = 2) -> Shape:
    """The rooted caterpillar with ``n`` white leaves (height ``n - 1``)."""
    if n < 1:
        raise ValueError("caterpillar needs n >= 1")
    shape = make_leaf("white", arity)
    for _ in range(n - 1):
        shape = join([make_leaf("white", arity), shape])
    return shape


def complete_tree(h: int, arity: int = 2) -> Shape:
    """The complete binary tree of height ``h`` (``2**h`` white leaves)."""
    if h < 0:
        raise ValueError("complete tree needs h >= 0")
    shape = make_leaf("white", arity)
    for _ in range(h):
        shape = join([shape, shape])
    return shape


def jellyfish(spec: JellyfishSpec | None = None, h: int | None = None,
              ell: int | None = None, arity: int = 2) -> Shape:
    """A complete tree of height ``h`` with a caterpillar of ``ell`` leaves
    identified with each of its leaves; ``2**h * ell`` white leaves in total,
    height ``h + ell - 1``."""
    if spec is None:
        if h is None or ell is None:
            raise ValueError("jellyfish needs a spec or both h and ell")
        spec = JellyfishSpec(h, ell)
    shape = caterpillar(spec.ell, arity)
    for _ in range(spec.h):
        shape = join([shape, shape])
    return shape


# --------------------------------------------------------------------------- #
# Basic queries
# --------------------------------------------------------------------------- #


def white_leaf_count(shape: Shape) -> int:
    return shape.white_leaves


def height(shape: Shape) -> int:
    return shape.height


def canonical_code(shape: Shape) -> str:
    return shape.code


def leaf_colors(shape: Shape) -> list[bool]:
    """Per-leaf red flags, in canonical (code) order of the leaves."""
    if shape.is_leaf:
        return [shape.red]
    out: list[bool] = []
    for kid in shape.children:
        out.extend(leaf_colors(kid))
    return out


# --------------------------------------------------------------------------- #
# Text formats
# --------------------------------------------------------------------------- #


def parse_code(text: str, arity: int = 2) -> Shape:
    """Parse a canonical-code string; children may appear in any order.

    Rejects malformed text, more than one red leaf, and internal vertices
    with fewer than 2 or more than ``arity`` children.
    """
    text = text.strip()
    pos = 0

    def parse_node() -> Shape:
        nonlocal pos
        if pos >= len(text):
            raise ValueError("unexpected end of code")
        ch = text[pos]
        if ch == "o":
            pos += 1
            return Shape((), False, arity)
        if ch == "r":
            pos += 1
            return Shape((), True, arity)
        if ch == "(":
            pos += 1
            kids = []
            while pos < len(text) and text[pos] != ")":
                kids.append(parse_node())
            if pos >= len(text):
                raise ValueError("unbalanced '(' in code")
            pos += 1  # consume ')'
            return Shape(tuple(kids), False, arity)
        raise ValueError(f"unexpected character {ch!r} at position {pos}")

    shape = parse_node()
    if pos != len(text):
        raise ValueError(f"trailing characters after code: {text[pos:]!r}")
    return shape


def to_newick(shape: Shape) -> str:
    """Newick export: white leaf ``x``, red leaf ``R``, children in canonical
    order, trailing ``;``."""

    def render(node: Shape) -> str:
        if node.is_leaf:
            return "R" if node.red else "x"
        return "(" + ",".join(render(k) for k in node.children) + ")"

    return render(shape) + ";"


def parse_newick(text: str, arity: int = 2) -> Shape:
    """Parse the Newick format produced by :func:`to_newick`."""
    text = text.strip()
    if text.endswith(";"):
        text = text[:-1]
    pos = 0

    def parse_node() -> Shape:
        nonlocal pos
        if pos >= len(text):
            raise ValueError("unexpected end of newick")
        if text[pos] == "(":
            pos += 1
            kids = [parse_node()]
            while pos < len(text) and text[pos] == ",":
                pos += 1
                kids.append(parse_node())
            if pos >= len(text) or text[pos] != ")":
                raise ValueError("unbalanced '(' in newick")
            pos += 1
            return Shape(tuple(kids), False, arity)
        if text[pos] == "x":
            pos += 1
            return Shape((), False, arity)
        if text[pos] == "R":
            pos += 1
            return Shape((), True, arity)
        raise ValueError(f"unexpected character {text[pos]!r} at position {pos}")

    shape = parse_node()
    if pos != len(text):
        raise ValueError(f"trailing characters after newick: {text[pos:]!r}")
    return shape


def to_dot(shape: Shape, name: str = "shape") -> str:
    """GraphViz export: leaves as circles (red leaf filled red), root as box."""
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    counter = itertools.count()

    def emit(node: Shape, parent: str | None) -> None:
        node_id = f"v{next(counter)}"
        if node.is_leaf:
            fill = ', style=filled, fillcolor=red' if node.red else ""
            lines.append(f'  {node_id} [shape=circle, label=""{fill}];')
        elif parent is None:
            lines.append(f'  {node_id} [shape=box, label=""];')
        else:
            lines.append(f'  {node_id} [shape=point];')
        if parent is not None:
            lines.append(f"  {parent} -> {node_id};")
        for kid in node.children:
            emit(kid, node_id)

    emit(shape, None)
    lines.append("}")
    return "\n".join(lines)


# --------------------------------------------------------------------------- #
# Isomorph-free enumeration
# --------------------------------------------------------------------------- #
#
# Generative and duplicate-free by construction: a shape of size n is a root
# over a multiset of smaller shapes, so enumerating multisets (nondecreasing
# part sizes, nondecreasing shapes within equal sizes) hits every isomorphism
# class exactly once.  Redleaf shapes are built as one redleaf part joined
# with a multiset of white parts; the redleaf part is distinguished, so no
# dedup is needed there either.


def _size_partitions(total: int, num_parts: int, minimum: int = 1) -> Iterator[tuple[int, ...]]:
    """Nondecreasing ``num_parts``-tuples of integers >= minimum summing to total."""
    if num_parts == 1:
        if total >= minimum:
            yield (total,)
        return
    for first in range(minimum, total // num_parts + 1):
        for rest in _size_partitions(total - first, num_parts - 1, first):
            yield (first,) + rest


def _part_multisets(total: int, max_parts: int, arity: int,
                    min_parts: int = 1) -> Iterator[tuple[Shape, ...]]:
    """All multisets of 'min_parts..max_parts' white shapes with the given
    total white-leaf count."""
    for num in range(min_parts, max_parts + 1):
        for sizes in _size_partitions(total, num):
            groups = [(size, len(list(grp))) for size, grp in itertools.groupby(sizes)]
            pools = [
                itertools.combinations_with_replacement(_white_shapes(size, arity), count)
                for size, count in groups
            ]
            for combo in itertools.product(*pools):
                yield tuple(itertools.chain.from_iterable(combo))


@lru_cache(maxsize=None)
def _white_shapes(n: int, arity: int) -> tuple[Shape, ...]:
    if n == 1:
        return (make_leaf("white", arity),)
    out = [
        Shape(parts, False, arity)
        for parts in _part_multisets(n, arity, arity, min_parts=2)
    ]
    out.sort(key=lambda s: s.code)
    return tuple(out)


@lru_cache(maxsize=None)
def _redleaf_shapes(n: int, arity: int) -> tuple[Shape, ...]:
    if n == 0:
        return (make_leaf("red", arity),)
    out = []
    for red_white in range(n):
        for red_part in _redleaf_shapes(red_white, arity):
            for whites in _part_multisets(n - red_white, arity - 1, arity):
                out.append(Shape((red_part,) + whites, False, arity))
    out.sort(key=lambda s: s.code)
    return tuple(out)


def enumerate_shapes(n: int, arity: int = 2, redleaf: bool = False) -> Iterator[Shape]:
    """Yield every shape with ``n`` white leaves exactly once, in ASCII order
    of canonical codes.  With ``redleaf=True``, shapes carry exactly one red
    leaf in addition to the ``n`` white ones (``n = 0`` gives the bare red
    leaf)."""
    if arity < 2:
        raise ValueError("arity must be >= 2")
    if redleaf:
        if n < 0:
            raise ValueError("need n >= 0 for redleaf shapes")
        yield from _redleaf_shapes(n, arity)
    else:
        if n < 1:
            raise ValueError("need n >= 1 white leaves")
        yield from _white_shapes(n, arity)


def count_shapes(n: int, arity: int = 2, redleaf: bool = False) -> int:
    """Number of isomorphism classes with ``n`` white leaves."""
    if redleaf:
        return len(_redleaf_shapes(n, arity))
    return len(_white_shapes(n, arity))


# --------------------------------------------------------------------------- #
# Induced subtrees and surgery
# --------------------------------------------------------------------------- #


def induced_with_leafmap(shape: Shape, positions: Iterable[int]) -> tuple[Shape, dict[int, int]]:
    """Subtree induced by a set of leaf positions (canonical leaf order).

    Takes the minimal spanning subtree of the selected leaves and suppresses
    non-root degree-2 vertices.  Returns the induced shape together with the
    mapping from each selected original position to its position in the
    induced shape's own canonical leaf order.
    """
    wanted = set(positions)
    if not wanted:
        raise ValueError("need at least one leaf position")
    total = shape.leaf_count
    bad = [p for p in wanted if not 0 <= p < total]
    if bad:
        raise ValueError(f"leaf positions out of range: {sorted(bad)}")

    def walk(node: Shape, offset: int) -> tuple[Shape, list[int]] | None:
        if node.is_leaf:
            if offset in wanted:
                return node, [offset]
            return None
        picked = []
        off = offset
        for kid in node.children:
            sub = walk(kid, off)
            if sub is not None:
                picked.append(sub)
            off += kid.leaf_count
        if not picked:
            return None
        if len(picked) == 1:
            return picked[0]  # suppress this vertex
        # Sort children together with their leaf lists; ties broken by the
        # original positions so the mapping stays deterministic.
        picked.sort(key=lambda sub: (_child_key(sub[0].code), sub[1]))
        kids = tuple(sub[0] for sub in picked)
        leaves = [p for sub in picked for p in sub[1]]
        return Shape(kids, False, node.arity), leaves

    result = walk(shape, 0)
    assert result is not None
    induced, order = result
    return induced, {orig: idx for idx, orig in enumerate(order)}


def induced_subshape(shape: Shape, positions: Iterable[int]) -> Shape:
    """Subtree induced by a set of leaf positions (see induced_with_leafmap)."""
    return induced_with_leafmap(shape, positions)[0]


def subtree_at(shape: Shape, path: Sequence[int]) -> Shape:
    """Subtree at a root path (child indices in canonical order)."""
    node = shape
    for idx in path:
        node = node.children[idx]
    return node


def replace_subtree(shape: Shape, path: Sequence[int], replacement: Shape) -> Shape:
    """Return a copy of ``shape`` with the subtree at ``path`` replaced."""
    if not path:
        return replacement
    idx = path[0]
    kids = list(shape.children)
    kids[idx] = replace_subtree(kids[idx], path[1:], replacement)
    return Shape(tuple(kids), False, shape.arity)
