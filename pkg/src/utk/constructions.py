"""Provably universal objects built by recursion.

A shape is *n-universal* when every shape with n white leaves embeds into it
as an induced subtree (similarly for redleaf shapes and for tanglegrams).
The builders here follow the centroid-halving recursions:

- ``U(n)``: graft a ``floor(n/2)``-universal redleaf shape with d copies of a
  ``floor(n/2)``-universal shape joined under one root.
- ``U1(n)`` (redleaf): graft a ``floor(n/2)``-universal redleaf shape with a
  join of one more such redleaf shape, one ``U(n)``, and d-2 copies of
  ``U(floor(n/2))``.

Both recursions accept injected replacement parts (e.g. minimal universal
shapes found by exhaustive search), which shrinks the result without
affecting the universality argument.

``build_redleaf_comb`` realizes the comb construction that bounds the
redleaf universality size by sums of plain universality sizes: universal
shapes of the palindromic doubling sequence sizes are chained onto a path
ending in the red leaf, and every redleaf shape embeds because every
composition of ``2**k`` embeds termwise into that sequence
(:func:`embed_composition`).

``build_universal_tanglegram`` blows an n-universal tree up into an
n-universal tanglegram of quadratic size by hanging a small tree off every
leaf and wiring each left small tree to all right small trees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from utk.shapes import Shape, caterpillar, graft, join, make_leaf
from utk.tanglegrams import Tanglegram

__all__ = [
    "CoeffSequences",
    "coeff_sequences",
    "svec",
    "embed_composition",
    "build_universal",
    "build_universal_redleaf",
    "build_redleaf_comb",
    "build_universal_tanglegram",
    "construction_trace",
]

PartSource = Callable[[int, bool], "Shape | None"]


# --------------------------------------------------------------------------- #
# Coefficient sequences of the iterated halving bound
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class CoeffSequences:
    """Coefficients (a_k, b_k, c_k), 1-indexed via ``a(k)`` etc.

    ``a_1 = 1``, ``b_1 = d``, ``a_{k+1} = 3 a_k + b_k``,
    ``b_{k+1} = (2d-2) a_k + d b_k``, and ``c_k = 2 a_k + b_k``.
    For d = 2 these are the binary sequences, with the closed form
    ``b_k = (4**k + 2) / 3``; in general ``c_k = (d+2)**k``.
    """

    d: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]

    def __call__(self, name: str, k: int) -> int:
        return getattr(self, name)[k - 1]


def coeff_sequences(k_max: int, d: int = 2) -> CoeffSequences:
    if k_max < 1:
        raise ValueError("need k_max >= 1")
    a, b = [1], [d]
    for _ in range(k_max - 1):
        a_next = 3 * a[-1] + b[-1]
        b_next = (2 * d - 2) * a[-1] + d * b[-1]
        a.append(a_next)
        b.append(b_next)
    c = [2 * x + y for x, y in zip(a, b)]
    return CoeffSequences(d=d, a=tuple(a), b=tuple(b), c=tuple(c))


# --------------------------------------------------------------------------- #
# The palindromic doubling sequence and composition embedding
# --------------------------------------------------------------------------- #


def svec(k: int) -> tuple[int, ...]:
    """The sequence s_k of length ``2**(k+1) - 1``: s_0 = (1) and
    s_k = s_{k-1} ++ (2**k) ++ s_{k-1}.  The term ``2**i`` appears exactly
    ``2**(k-i)`` times."""
    if k < 0:
        raise ValueError("need k >= 0")
    seq: tuple[int, ...] = (1,)
    for i in range(1, k + 1):
        seq = seq + (2**i,) + seq
    return seq


def embed_composition(composition: Sequence[int], k: int) -> tuple[int, ...]:
    """Strictly increasing 1-based indices a_1 < ... < a_m into ``svec(k)``
    with ``composition[i] <= svec(k)[a_i - 1]`` for every term.

    The composition must consist of positive terms summing to ``2**k``.
    Follows the recursive pivot rule: the first prefix exceeding half the
    total is placed on the middle ``2**k`` entry and the two remainders embed
    into the two halves, padded by one extra term when they fall short.
    """
    terms = list(composition)
    if any(t < 1 for t in terms):
        raise ValueError("composition terms must be positive")
    if sum(terms) != 2**k:
        raise ValueError(f"composition must sum to 2**{k} = {2**k}")

    def rec(part: list[int], kk: int, offset: int) -> list[int]:
        # sum(part) == 2**kk, all terms positive
        if kk == 0:
            return [offset + 1]
        half = 2 ** (kk - 1)
        prefix = 0
        pivot = 0
        for i, t in enumerate(part):
            prefix += t
            if prefix > half:
                pivot = i
                break
        out: list[int] = []
        left = part[:pivot]
        if left:
            missing = half - sum(left)
            padded = left + [missing] if missing else left
            out.extend(rec(padded, kk - 1, offset)[: len(left)])
        out.append(offset + 2**kk)
        right = part[pivot + 1 :]
        if right:
            missing = half - sum(right)
            padded = right + [missing] if missing else right
            out.extend(rec(padded, kk - 1, offset + 2**kk)[: len(right)])
        return out

    return tuple(rec(terms, k, 0))


# --------------------------------------------------------------------------- #
# Universal shape builders
# --------------------------------------------------------------------------- #


def _build(n: int, d: int, redleaf: bool, parts: PartSource | None,
           memo: dict) -> Shape:
    key = (n, redleaf)
    shape = memo.get(key)
    if shape is not None:
        return shape
    injected = parts(n, redleaf) if parts is not None else None
    if injected is not None:
        if injected.arity != d or injected.has_red != redleaf:
            raise ValueError(f"injected part for {key} has the wrong kind")
        shape = injected
    elif n == 1:
        if redleaf:
            shape = join([make_leaf("white", d), make_leaf("red", d)], arity=d)
        else:
            shape = make_leaf("white", d)
    else:
        half = n // 2
        host = _build(half, d, True, parts, memo)
        if redleaf:
            core = [
                _build(half, d, True, parts, memo),
                _build(n, d, False, parts, memo),
            ] + [_build(half, d, False, parts, memo)] * (d - 2)
        else:
            core = [_build(half, d, False, parts, memo)] * d
        shape = graft(host, join(core, arity=d))
    memo[key] = shape
    return shape


def build_universal(n: int, d: int = 2, parts: PartSource | None = None) -> Shape:
    """An n-universal d-ary shape from the halving recursion.

    ``parts(m, redleaf)`` may return a replacement shape known to be
    m-universal (of the right kind) for any subproblem; returning ``None``
    falls back to the recursion.  Shared subproblems are memoized per call.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    return _build(n, d, False, parts, {})


def build_universal_redleaf(n: int, d: int = 2, parts: PartSource | None = None) -> Shape:
    """An n-universal redleaf d-ary shape from the halving recursion."""
    if n < 1:
        raise ValueError("need n >= 1")
    return _build(n, d, True, parts, {})


def build_redleaf_comb(k: int, d: int = 2,
                       universal_source: Callable[[int], Shape] | None = None) -> Shape:
    """A ``2**k``-universal redleaf shape chained from plain universal parts.

    Chains ``R_1 (+) (R_2 (+) (... (R_m (+) red-leaf)))`` over the doubling
    sequence ``svec(k)``, where ``R_i`` packs ``d - 1`` shapes universal for
    ``svec(k)[i-1]`` leaves (one shape for d = 2).  ``universal_source(m)``
    supplies the m-universal shapes, defaulting to :func:`build_universal`.
    """
    if k < 0:
        raise ValueError("need k >= 0")
    if universal_source is None:
        cache: dict[int, Shape] = {}

        def universal_source(m: int, _d=d, _cache=cache) -> Shape:
            if m not in _cache:
                _cache[m] = build_universal(m, _d)
            return _cache[m]

    tail = make_leaf("red", d)
    for size in reversed(svec(k)):
        part = universal_source(size)
        if part.arity != d or part.has_red:
            raise ValueError("universal_source must return white d-ary shapes")
        if d > 2:
            part = join([part] * (d - 1), arity=d)
        tail = join([part, tail], arity=d)
    return tail


def build_universal_tanglegram(n: int, universal: Shape | None = None,
                               d: int = 2) -> Tanglegram:
    """An n-universal tanglegram of size ``u**2`` from an n-universal tree of
    size ``u``.

    Both trees are the universal tree with a fixed u-leaf tree (a
    caterpillar) hanging off every leaf; each left small tree sends exactly
    one matching edge into each right small tree.  Works for d-ary trees the
    same way (pass a d-ary ``universal`` or set ``d``).
    """
    if universal is None:
        universal = build_universal(n, d)
    if universal.has_red:
        raise ValueError("need a white universal shape")
    u = universal.white_leaves
    small = caterpillar(u, universal.arity)

    def inflate(node: Shape) -> Shape:
        if node.is_leaf:
            return small
        return join([inflate(kid) for kid in node.children], arity=node.arity)

    tree = inflate(universal)
    # Left block i's j-th leaf pairs with right block j's i-th leaf.  Each
    # small tree's leaves occupy one contiguous block of u positions.
    matching = tuple((p % u) * u + p // u for p in range(u * u))
    return Tanglegram(tree, tree, matching)


# --------------------------------------------------------------------------- #
# Provenance traces
# --------------------------------------------------------------------------- #


def construction_trace(n: int, d: int = 2, redleaf: bool = False,
                       parts: PartSource | None = None) -> dict:
    """JSON-ready description of how the recursive builder assembles its
    output: which rule fired at each level and which parts it used."""
    injected = parts(n, redleaf) if parts is not None else None
    if injected is not None:
        return {
            "rule": "injected-part",
            "n": n,
            "redleaf": redleaf,
            "code": injected.code,
            "white_leaves": injected.white_leaves,
        }
    if n == 1:
        shape = build_universal_redleaf(1, d) if redleaf else build_universal(1, d)
        return {
            "rule": "base",
            "n": 1,
            "redleaf": redleaf,
            "code": shape.code,
            "white_leaves": shape.white_leaves,
        }
    half = n // 2
    if redleaf:
        shape = build_universal_redleaf(n, d, parts)
        children = [
            construction_trace(half, d, True, parts),
            construction_trace(half, d, True, parts),
            construction_trace(n, d, False, parts),
        ] + [construction_trace(half, d, False, parts)] * (d - 2)
        rule = "redleaf-halving-graft"
    else:
        shape = build_universal(n, d, parts)
        children = [construction_trace(half, d, True, parts)] + [
            construction_trace(half, d, False, parts)
        ] * d
        rule = "halving-graft"
    return {
        "rule": rule,
        "n": n,
        "redleaf": redleaf,
        "code": shape.code,
        "white_leaves": shape.white_leaves,
        "parts": children,
    }
