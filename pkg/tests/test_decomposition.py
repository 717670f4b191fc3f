import itertools

import pytest

from oracles import all_shapes_upto
from utk.decomposition import (
    split_dary,
    split_for_redleaf,
    split_for_universal,
    white_leaf_centroid,
)
from utk.shapes import (
    Shape,
    caterpillar,
    complete_tree,
    enumerate_shapes,
    join,
    leaf_colors,
    make_leaf,
    parse_code,
)


def tau_by_component_walk(shape: Shape) -> dict[tuple, int]:
    """Independent tau_W computation: materialize the vertex graph, delete a
    vertex, walk the remaining components, count white leaves."""
    vertices = []
    edges = {}
    colors = {}

    def build(node, path):
        vertices.append(path)
        edges.setdefault(path, [])
        colors[path] = node.is_leaf and not node.red
        for idx, kid in enumerate(node.children):
            child_path = path + (idx,)
            edges[path].append(child_path)
            edges.setdefault(child_path, []).append(path)
            build(kid, child_path)

    build(shape, ())
    tau = {}
    for v in vertices:
        best = 0
        seen = {v}
        for start in edges[v]:
            if start in seen:
                continue
            stack, comp = [start], set()
            while stack:
                u = stack.pop()
                if u in comp:
                    continue
                comp.add(u)
                stack.extend(w for w in edges[u] if w != v and w not in comp)
            seen |= comp
            whites = sum(1 for u in comp if colors[u])
            best = max(best, whites)
        tau[v] = best + (1 if colors[v] else 0)
    return tau


class TestCentroid:
    def test_tau_matches_component_walk(self):
        shapes = [s for n in range(2, 11) for s in enumerate_shapes(n)]
        shapes += [s for n in range(2, 8) for s in enumerate_shapes(n, redleaf=True)]
        shapes += [s for n in range(2, 7) for s in enumerate_shapes(n, arity=3)]
        for shape in shapes:
            report = white_leaf_centroid(shape)
            assert report.tau == tau_by_component_walk(shape), shape.code

    def test_b2_root(self):
        report = white_leaf_centroid(complete_tree(2))
        assert report.tau[()] == 2
        assert report.designated == ()
        assert len(report.tau) == 7

    def test_c4_centroid_is_parent_of_bottom_cherry(self):
        # C_4 canonical form is (o(o(oo))): the parent of the bottom cherry
        # sits at path (1,).
        report = white_leaf_centroid(caterpillar(4))
        assert report.tau[(1,)] == 2
        assert (1,) in report.centroids
        assert report.designated == (1,)

    def test_centroid_bound_all_small_shapes(self):
        for n in range(2, 11):
            for shape in enumerate_shapes(n):
                report = white_leaf_centroid(shape)
                assert min(report.tau.values()) <= n // 2

    def test_designated_is_internal(self):
        for n in range(2, 9):
            for shape in enumerate_shapes(n):
                report = white_leaf_centroid(shape)
                vertex = shape
                for idx in report.designated:
                    vertex = vertex.children[idx]
                assert not vertex.is_leaf

    def test_rejects_degenerate_inputs(self):
        with pytest.raises(ValueError):
            white_leaf_centroid(make_leaf())
        with pytest.raises(ValueError):
            white_leaf_centroid(join([make_leaf(), make_leaf("red")]))


class TestSplitForUniversal:
    def test_b2_splits_at_root(self):
        split = split_for_universal(complete_tree(2))
        assert split.f1 == make_leaf("red")
        assert split.f2 == complete_tree(1)
        assert split.f3 == complete_tree(1)
        assert split.kind == "universal"

    def test_smallest_case(self):
        split = split_for_universal(caterpillar(2))
        assert split.f1 == make_leaf("red")
        assert split.f2 == make_leaf() == split.f3

    def test_reassembly_and_bounds_exhaustive(self):
        for n in range(2, 10):
            for shape in enumerate_shapes(n):
                split = split_for_universal(shape)
                assert split.reassemble() == shape
                for part in (split.f1, split.f2, split.f3):
                    assert part.white_leaves <= n // 2

    def test_rejects_redleaf_and_tiny(self):
        with pytest.raises(ValueError):
            split_for_universal(next(enumerate_shapes(2, redleaf=True)))
        with pytest.raises(ValueError):
            split_for_universal(make_leaf())


class TestSplitForRedleaf:
    def test_reassembly_exhaustive(self):
        for n in range(2, 9):
            for shape in enumerate_shapes(n, redleaf=True):
                split = split_for_redleaf(shape)
                assert split.reassemble() == shape
                assert split.f2.has_red
                assert not split.f3.has_red

    def test_descendant_case_example(self):
        # Caterpillar-like shape with the red leaf at the very bottom: the
        # centroid sits above it, so the red leaf is a descendant.
        shape = parse_code("(o(o(o(o(o(or))))))")
        split = split_for_redleaf(shape)
        assert split.kind == "redleaf-descendant"
        assert split.f2.has_red

    def test_case_bounds(self):
        for n in range(2, 9):
            for shape in enumerate_shapes(n, redleaf=True):
                split = split_for_redleaf(shape)
                if split.kind == "redleaf-descendant":
                    for part in (split.f1, split.f2, split.f3):
                        assert part.white_leaves <= n // 2
                else:
                    assert split.kind == "redleaf-ancestor"
                    assert split.f1.white_leaves + split.f2.white_leaves <= n // 2
                    assert split.f3.white_leaves <= n

    def test_ancestor_part_can_exceed_half(self):
        # Regression: the centroid-carrying part is NOT bounded by n/2.
        # Here the centroid lies inside the caterpillar, the red leaf hangs
        # off the root, and f3 keeps all 4 white leaves.
        shape = join([make_leaf("red"), caterpillar(4)])
        split = split_for_redleaf(shape)
        assert split.kind == "redleaf-ancestor"
        assert split.f3.white_leaves == 4 > 4 // 2
        assert split.reassemble() == shape

    def test_rejects_white_shape(self):
        with pytest.raises(ValueError):
            split_for_redleaf(caterpillar(3))


class TestSplitDary:
    def test_three_star(self):
        star = join([make_leaf(arity=3)] * 3, arity=3)
        split = split_dary(star)
        assert split.f1 == make_leaf("red", arity=3)
        assert split.parts == (make_leaf(arity=3),) * 3

    def test_reassembly_white_exhaustive(self):
        for n in range(2, 7):
            for shape in enumerate_shapes(n, arity=3):
                split = split_dary(shape)
                assert split.reassemble() == shape
                assert split.f1.white_leaves <= n // 2
                for part in split.parts:
                    assert part.white_leaves <= n // 2

    def test_reassembly_white_4ary(self):
        for n in range(2, 6):
            for shape in enumerate_shapes(n, arity=4):
                split = split_dary(shape)
                assert split.reassemble() == shape
                for part in split.parts:
                    assert part.white_leaves <= n // 2

    def test_redleaf_cases(self):
        for n in range(2, 6):
            for shape in enumerate_shapes(n, arity=3, redleaf=True):
                split = split_dary(shape, redleaf=True)
                assert split.reassemble() == shape
                assert split.parts[0].has_red
                if split.kind == "redleaf-descendant":
                    assert split.centroid_part is None
                    assert split.f1.white_leaves <= n // 2
                    for part in split.parts:
                        assert part.white_leaves <= n // 2
                else:
                    assert split.kind == "redleaf-ancestor"
                    assert split.centroid_part == 1
                    assert (
                        split.f1.white_leaves + split.parts[0].white_leaves <= n // 2
                    )
                    for idx, part in enumerate(split.parts):
                        if idx != split.centroid_part and idx != 0:
                            assert part.white_leaves <= n // 2

    def test_redleaf_flag_mismatch(self):
        with pytest.raises(ValueError):
            split_dary(caterpillar(3, arity=3), redleaf=True)
