import itertools
import random

import pytest

from utk.shapes import caterpillar, complete_tree, enumerate_shapes, join, make_leaf
from utk.tanglegrams import (
    Tanglegram,
    canonical_tanglegram,
    count_tanglegrams,
    enumerate_tanglegrams,
    format_tanglegram,
    induced_subtanglegram,
    is_induced_subtanglegram,
    is_universal_tanglegram,
    leaf_automorphisms,
    parse_tanglegram,
    tanglegram_dot,
)

# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------


def lca_depth_matrix(shape, perm=None):
    """Pairwise leaf LCA depths; a leaf permutation is induced by a tree
    automorphism iff it preserves this matrix."""
    paths = []

    def walk(node, path):
        if node.is_leaf:
            paths.append(path)
        for idx, kid in enumerate(node.children):
            walk(kid, path + (idx,))

    walk(shape, ())
    n = len(paths)
    if perm is None:
        perm = range(n)
    mat = {}
    for i in range(n):
        for j in range(n):
            a, b = paths[perm[i]], paths[perm[j]]
            depth = 0
            while depth < min(len(a), len(b)) and a[depth] == b[depth]:
                depth += 1
            mat[i, j] = depth
    return mat


def brute_leaf_automorphisms(shape):
    base = lca_depth_matrix(shape)
    n = shape.leaf_count
    return {
        perm
        for perm in itertools.permutations(range(n))
        if lca_depth_matrix(shape, perm) == base
    }


def oracle_isomorphic(t1: Tanglegram, t2: Tanglegram) -> bool:
    """Pairwise isomorphism without canonical codes."""
    if t1.left != t2.left or t1.right != t2.right:
        return False
    auts_l = leaf_automorphisms(t1.left)
    auts_r = leaf_automorphisms(t1.right)
    n = t1.size
    for gl in auts_l:
        moved = [0] * n
        for p in range(n):
            moved[gl[p]] = t1.matching[p]
        for gr in auts_r:
            if tuple(gr[moved[p]] for p in range(n)) == t2.matching:
                return True
    return False


def oracle_class_count(n: int) -> int:
    """Partition the raw (left, right, matching) space by pairwise
    isomorphism, greedily."""
    shapes = list(enumerate_shapes(n))
    reps: list[Tanglegram] = []
    for left, right in itertools.product(shapes, repeat=2):
        for sigma in itertools.permutations(range(n)):
            t = Tanglegram(left, right, sigma)
            if not any(oracle_isomorphic(t, rep) for rep in reps):
                reps.append(t)
    return len(reps)


# ---------------------------------------------------------------------------


class TestTanglegramModel:
    def test_validation(self):
        with pytest.raises(ValueError):
            Tanglegram(caterpillar(2), caterpillar(3), (0, 1))
        with pytest.raises(ValueError):
            Tanglegram(caterpillar(2), caterpillar(2), (0, 0))
        with pytest.raises(ValueError):
            Tanglegram(join([make_leaf(), make_leaf("red")]), caterpillar(2), (0, 1))

    def test_text_roundtrip(self):
        t = Tanglegram(caterpillar(3), caterpillar(3), (2, 0, 1))
        text = format_tanglegram(t)
        assert text == "(x,(x,x));|(x,(x,x));|2 0 1"
        assert parse_tanglegram(text) == t

    def test_dot_has_dashed_matching(self):
        dot = tanglegram_dot(Tanglegram(caterpillar(2), caterpillar(2), (1, 0)))
        assert dot.count("style=dashed") == 2
        assert "rankdir=LR" in dot


class TestLeafAutomorphisms:
    def test_sizes(self):
        assert len(leaf_automorphisms(make_leaf())) == 1
        assert len(leaf_automorphisms(caterpillar(5))) == 2  # bottom cherry swap
        assert len(leaf_automorphisms(caterpillar(2))) == 2
        assert len(leaf_automorphisms(complete_tree(2))) == 8
        assert len(leaf_automorphisms(complete_tree(3))) == 2**7

    def test_matches_lca_oracle(self):
        for n in range(1, 7):
            for shape in enumerate_shapes(n):
                assert set(leaf_automorphisms(shape)) == brute_leaf_automorphisms(shape)


class TestCanonicalization:
    def test_size_one_unique(self):
        t = Tanglegram(make_leaf(), make_leaf(), (0,))
        assert canonical_tanglegram(t) == "o|o|0"

    def test_cherry_orientations_collide(self):
        cherry = caterpillar(2)
        straight = Tanglegram(cherry, cherry, (0, 1))
        crossed = Tanglegram(cherry, cherry, (1, 0))
        assert canonical_tanglegram(straight) == canonical_tanglegram(crossed)

    def test_size3_has_two_classes(self):
        c3 = caterpillar(3)
        codes = {
            canonical_tanglegram(Tanglegram(c3, c3, sigma))
            for sigma in itertools.permutations(range(3))
        }
        assert len(codes) == 2

    def test_mirror_not_quotiented(self):
        # All classes of size <= 3 happen to be mirror-symmetric; the first
        # mirror-asymmetric tanglegrams appear at size 4.
        for n in (1, 2, 3):
            for t in enumerate_tanglegrams(n):
                assert canonical_tanglegram(t.mirror()) == canonical_tanglegram(t)
        asymmetric = [
            t
            for t in enumerate_tanglegrams(4)
            if canonical_tanglegram(t.mirror()) != canonical_tanglegram(t)
        ]
        assert len(asymmetric) == 6
        # both counts: 13 ordered classes, 10 after quotienting by the swap
        quotient = {
            min(canonical_tanglegram(t), canonical_tanglegram(t.mirror()))
            for t in enumerate_tanglegrams(4)
        }
        assert (count_tanglegrams(4), len(quotient)) == (13, 10)


class TestEnumeration:
    def test_counts_small(self):
        assert [count_tanglegrams(n) for n in range(1, 5)] == [1, 1, 2, 13]

    def test_counts_match_pairwise_oracle(self):
        for n in range(1, 5):
            assert count_tanglegrams(n) == oracle_class_count(n)

    def test_larger_counts(self):
        assert count_tanglegrams(5) == 114
        assert count_tanglegrams(6) == 1509

    def test_normalized_growth_trend(self):
        # t_{n+1} / ((n+1) t_n) climbs toward the asymptotic base 4.
        counts = [count_tanglegrams(n) for n in range(1, 7)]
        ratios = [
            counts[i + 1] / ((i + 2) * counts[i]) for i in range(len(counts) - 1)
        ]
        assert all(a < b for a, b in zip(ratios, ratios[1:]))
        assert ratios[-1] < 4

    def test_representatives_are_valid_and_canonical(self):
        for t in enumerate_tanglegrams(4):
            assert sorted(t.matching) == list(range(4))
            assert t.left.white_leaves == t.right.white_leaves == 4
            assert canonical_tanglegram(t).endswith(" ".join(map(str, t.matching)))

    def test_dary_enumeration(self):
        ternary = count_tanglegrams(3, arity=3)
        binary = count_tanglegrams(3, arity=2)
        assert ternary > binary  # the 3-star trees add classes
        for t in enumerate_tanglegrams(3, arity=3):
            assert t.left.arity == 3


class TestInducedSubtanglegrams:
    def test_self_containment(self):
        for n in (1, 2, 3):
            for t in enumerate_tanglegrams(n):
                assert is_induced_subtanglegram(t, t)

    def test_figure_example(self):
        # A size-5 tanglegram: left tree joins a cherry and a 3-leaf
        # caterpillar, right tree the same shape; the matching sends the
        # cherry pair to the deep caterpillar pair and vice versa, keeping
        # the middle leaf straight.  Selecting the first three edges induces
        # the straight caterpillar-to-caterpillar size-3 tanglegram.
        shape = join([caterpillar(2), caterpillar(3)])
        big = Tanglegram(shape, shape, (4, 3, 2, 0, 1))
        small = induced_subtanglegram(big, [0, 1, 2])
        c3 = caterpillar(3)
        pictured = Tanglegram(c3, c3, (0, 1, 2))
        assert canonical_tanglegram(small) == canonical_tanglegram(pictured)

    def test_agrees_with_subset_oracle(self):
        smalls = list(enumerate_tanglegrams(2)) + list(enumerate_tanglegrams(3))
        bigs = list(enumerate_tanglegrams(4))[::3]
        for small, big in itertools.product(smalls, bigs):
            oracle = any(
                oracle_isomorphic(induced_subtanglegram(big, subset), small)
                for subset in itertools.combinations(range(big.size), small.size)
            )
            assert is_induced_subtanglegram(small, big) == oracle

    def test_transitivity_sampled(self):
        rng = random.Random(4242)
        pool = (
            list(enumerate_tanglegrams(2))
            + list(enumerate_tanglegrams(3))
            + list(enumerate_tanglegrams(4))
        )
        for _ in range(60):
            a, b, c = (rng.choice(pool) for _ in range(3))
            if is_induced_subtanglegram(a, b) and is_induced_subtanglegram(b, c):
                assert is_induced_subtanglegram(a, c)

    def test_induced_needs_edges(self):
        t = Tanglegram(caterpillar(2), caterpillar(2), (0, 1))
        with pytest.raises(ValueError):
            induced_subtanglegram(t, [])


class TestUniversality:
    def test_size_n_universal_iff_unique_class(self):
        for n in (1, 2):
            (only,) = enumerate_tanglegrams(n)
            assert is_universal_tanglegram(only, n)

    def test_too_small_is_not_universal(self):
        t = Tanglegram(caterpillar(2), caterpillar(2), (0, 1))
        assert not is_universal_tanglegram(t, 3)

    def test_size3_classes_not_3_universal(self):
        for t in enumerate_tanglegrams(3):
            assert not is_universal_tanglegram(t, 3)
