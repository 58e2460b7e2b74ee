"""Directed trivalent planar trees and evaluation along them.

A ``d``-tree has ``d`` incoming leaves and one outgoing root edge; its
internal vertices are binary.  Edges carry labels ``ij``.  The leaves read
``01, 12, ..., (d-1)d`` in planar order and a vertex with incoming ``ij`` and
``jk`` emits ``ik``, so the root edge is always ``0d``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Sequence

Label = tuple[int, int]
Path = tuple[int, ...]


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class PlanarTree:
    """A leaf (no children) or an ordered pair of subtrees."""

    left: PlanarTree | None = None
    right: PlanarTree | None = None

    def __post_init__(self):
        if (self.left is None) != (self.right is None):
            raise TreeError("a vertex needs exactly two incoming subtrees")

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def leaves(self) -> int:
        return 1 if self.is_leaf else self.left.leaves + self.right.leaves

    @property
    def vertices(self) -> int:
        return 0 if self.is_leaf else 1 + self.left.vertices + self.right.vertices

    @property
    def internal_edges(self) -> int:
        # every non-root vertex has its outgoing edge internal
        return max(self.vertices - 1, 0)

    def __str__(self) -> str:
        return bracket_notation(label_edges(self))


LEAF = PlanarTree()


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


@lru_cache(maxsize=None)
def _trees(d: int) -> tuple[PlanarTree, ...]:
    if d == 1:
        return (LEAF,)
    out = []
    for i in range(1, d):
        for left in _trees(i):
            for right in _trees(d - i):
                out.append(PlanarTree(left, right))
    return tuple(out)


def enumerate_trees(d: int) -> list[PlanarTree]:
    """All planar topological types of ``d``-trees, in a fixed order."""
    if not isinstance(d, int) or d < 1:
        raise TreeError(f"number of leaves must be a positive integer, got {d!r}")
    return list(_trees(d))


@dataclass(frozen=True)
class LabeledTree:
    tree: PlanarTree
    labels: dict[Path, Label]

    @property
    def root_label(self) -> Label:
        return self.labels[()]

    def leaf_labels(self) -> list[Label]:
        out = []

        def walk(t, path):
            if t.is_leaf:
                out.append(self.labels[path])
            else:
                walk(t.left, path + (0,))
                walk(t.right, path + (1,))

        walk(self.tree, ())
        return out


def label_edges(t: PlanarTree) -> LabeledTree:
    """The unique ``ij`` labelling; paths index edges (``()`` is the root edge)."""
    labels: dict[Path, Label] = {}

    def walk(node, path, start):
        if node.is_leaf:
            labels[path] = (start, start + 1)
            return start + 1
        mid = walk(node.left, path + (0,), start)
        end = walk(node.right, path + (1,), mid)
        labels[path] = (start, end)
        return end

    walk(t, (), 0)
    return LabeledTree(t, labels)


def satisfies_vertex_rule(lt: LabeledTree) -> bool:
    d = lt.tree.leaves
    if lt.root_label != (0, d):
        return False
    if lt.leaf_labels() != [(i, i + 1) for i in range(d)]:
        return False

    def ok(node, path):
        if node.is_leaf:
            return True
        i, j = lt.labels[path + (0,)]
        j2, k = lt.labels[path + (1,)]
        return j == j2 and lt.labels[path] == (i, k) and ok(node.left, path + (0,)) and ok(node.right, path + (1,))

    return ok(lt.tree, ())


def bracket_notation(lt: LabeledTree) -> str:
    """E.g. ``((01 12)->02 23)->03`` for the left comb 3-tree."""

    def fmt(label):
        i, j = label
        return f"{i}{j}" if i < 10 and j < 10 else f"{i}.{j}"

    def walk(node, path):
        if node.is_leaf:
            return fmt(lt.labels[path])
        return f"({walk(node.left, path + (0,))} {walk(node.right, path + (1,))})->{fmt(lt.labels[path])}"

    return walk(lt.tree, ())


def evaluate_tree(t: PlanarTree, leaves: Sequence, vertex_op: Callable,
                  edge_op: Callable | None = None, root_op: Callable | None = None):
    """Fold ``vertex_op(left, right)`` over ``t`` in planar order.

    ``edge_op(value, label)`` runs on every internal edge and
    ``root_op(value, label)`` on the outgoing edge; either may be ``None``.
    For a single leaf only ``root_op`` applies.
    """
    if len(leaves) != t.leaves:
        raise TreeError(f"tree has {t.leaves} leaves but {len(leaves)} inputs were given")
    labels = label_edges(t).labels
    it = iter(leaves)

    def walk(node, path):
        if node.is_leaf:
            value = next(it)
        else:
            left = walk(node.left, path + (0,))
            right = walk(node.right, path + (1,))
            value = vertex_op(left, right)
            if path and edge_op is not None:
                value = edge_op(value, labels[path])
        return value

    value = walk(t, ())
    if root_op is not None:
        value = root_op(value, labels[()])
    return value


def ainfty_tree_product(t: PlanarTree, inputs: Sequence, product: Callable, homotopy: Callable,
                        projection: Callable, inclusion: Callable | None = None):
    """The tree summand ``m_k(T)`` of a homological-perturbation product.

    ``inputs`` are given in leaf order ``phi_01, phi_12, ...``.  Leaves get
    ``inclusion``, vertices multiply with the later input on the left
    (``phi_jk * phi_ij``), internal edges get ``homotopy(value, label)`` and
    the root gets ``projection(value, label)``.
    """
    if inclusion is not None:
        inputs = [inclusion(x, (i, i + 1)) for i, x in enumerate(inputs)]
    return evaluate_tree(t, inputs, lambda left, right: product(right, left),
                         edge_op=homotopy, root_op=projection)


def ainfty_product(k: int, inputs: Sequence, product: Callable, homotopy: Callable,
                   projection: Callable, inclusion: Callable | None = None):
    """``m_k = sum_T m_k(T)`` over all planar ``k``-trees (``k >= 2``)."""
    if k < 2:
        raise TreeError("m_k is built from trees only for k >= 2")
    total = None
    for t in enumerate_trees(k):
        v = ainfty_tree_product(t, inputs, product, homotopy, projection, inclusion)
        total = v if total is None else total + v
    return total


def moduli_dimension(degrees: Sequence[int], out_degree: int, k: int) -> int:
    """``deg(q_0k) - sum deg(q_i(i+1)) + k - 2`` for gradient flow trees."""
    if k < 1:
        raise TreeError("k must be at least 1")
    if len(degrees) != k:
        raise TreeError(f"expected {k} input degrees, got {len(degrees)}")
    return out_degree - sum(degrees) + k - 2


def area_constant(critical_values: Sequence) -> Fraction:
    """``f_0k(q_0k) - f_01(q_01) - ... - f_(k-1)k(q_(k-1)k)``; output value first."""
    if not critical_values:
        raise TreeError("need at least the output critical value")
    values = [Fraction(v) for v in critical_values]
    return values[0] - sum(values[1:], Fraction(0))
