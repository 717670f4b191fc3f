"""Universal tree kit: tree-shape universality, agreement subtrees, and
tanglegrams.

Library layout:

- :mod:`utk.shapes`: rooted tree shapes, canonical codes, special families,
  isomorph-free enumeration, text/DOT export.
- :mod:`utk.embedding`: induced-subtree containment and maximum agreement
  subtree sizes.
- :mod:`utk.decomposition`: white-leaf centroids and the split procedures
  behind the recursive universal constructions.
- :mod:`utk.constructions`: provably universal trees, the comb construction
  for redleaf universality, and universal tanglegrams.
- :mod:`utk.bounds`: exact integer evaluation of the known size bounds.
- :mod:`utk.tanglegrams`: tanglegram model, canonicalization, enumeration,
  induced subtanglegrams, universality checking.
- :mod:`utk.search`: exhaustive minimal-universal-shape search.
- :mod:`utk.cli`: the ``utk`` command-line tool.
"""

from utk.shapes import (
    JellyfishSpec,
    Shape,
    canonical_code,
    caterpillar,
    complete_tree,
    enumerate_shapes,
    graft,
    height,
    jellyfish,
    join,
    make_leaf,
    parse_code,
    parse_newick,
    to_newick,
    white_leaf_count,
)

__version__ = "0.1.0"
