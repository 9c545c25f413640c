"""Spanning-tree family weights, computed two independent ways.

The brute-force route enumerates spanning trees directly and is the oracle.
The fast route evaluates the weighted matrix-tree theorem with a
fraction-free (Bareiss) determinant and builds conditional families out of
deletions and contractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterator

from .graph import GraphError, Multigraph, contract_edge, delete_edge, is_connected

DEFAULT_TREE_CAP = 24

EdgeSet = frozenset


class CapExceeded(GraphError):
    """The brute-force enumerator refused a graph above its edge cap."""


def _check_cap(g: Multigraph, cap: int | None) -> None:
    if cap is not None and len(g.edges) > cap:
        raise CapExceeded(f"graph has {len(g.edges)} edges, enumeration cap is {cap}")


def sorted_edge_positions(g: Multigraph) -> list[int]:
    """Positions of non-loop edges, ordered by edge id."""
    return sorted((i for i, e in enumerate(g.edges) if not e.is_loop), key=lambda i: g.edges[i].id)


def _tree_position_tuples(g: Multigraph, order: list[int]) -> Iterator[tuple[int, ...]]:
    # Depth-first over edges in `order`, keeping only cycle-free prefixes.
    # Emits (n-1)-subsets in lexicographic order of their index sequences.
    need = g.n - 1
    ends = [(g.edges[p].tail, g.edges[p].head) for p in order]
    m = len(order)
    chosen: list[int] = []

    def rec(start: int, comp: list[int]):
        if len(chosen) == need:
            yield tuple(order[k] for k in chosen)
            return
        for k in range(start, m - (need - len(chosen)) + 1):
            u, v = ends[k]
            cu, cv = comp[u], comp[v]
            if cu == cv:
                continue
            merged = [cu if c == cv else c for c in comp]
            chosen.append(k)
            yield from rec(k + 1, merged)
            chosen.pop()

    yield from rec(0, list(range(g.n)))


def spanning_tree_masks(g: Multigraph, cap: int | None = DEFAULT_TREE_CAP) -> list[int]:
    """Spanning trees as bitmasks over edge positions, in canonical order."""
    _check_cap(g, cap)
    order = sorted_edge_positions(g)
    return [sum(1 << p for p in t) for t in _tree_position_tuples(g, order)]


def mask_to_edge_set(g: Multigraph, mask: int) -> frozenset[str]:
    return frozenset(e.id for i, e in enumerate(g.edges) if mask >> i & 1)


def enumerate_spanning_trees(g: Multigraph, cap: int | None = DEFAULT_TREE_CAP) -> list[frozenset[str]]:
    """Every spanning tree of ``g`` as a frozenset of edge ids.

    Order is lexicographic in the sorted edge-id sequence of each tree. The
    list is empty exactly when ``g`` is disconnected. Self-loops never appear.
    """
    _check_cap(g, cap)
    order = sorted_edge_positions(g)
    return [frozenset(g.edges[p].id for p in t) for t in _tree_position_tuples(g, order)]


def mask_weights(g: Multigraph) -> list[Fraction]:
    return [e.weight for e in g.edges]


def mask_weight(weights: list[Fraction], mask: int) -> Fraction:
    w = Fraction(1)
    i = 0
    while mask:
        if mask & 1:
            w *= weights[i]
        mask >>= 1
        i += 1
    return w


def enumerated_tree_weight_total(g: Multigraph, cap: int | None = DEFAULT_TREE_CAP) -> Fraction:
    """Brute-force ``||T||``: sum of weight products over enumerated trees."""
    weights = mask_weights(g)
    return sum((mask_weight(weights, t) for t in spanning_tree_masks(g, cap)), Fraction(0))


def bareiss_determinant(matrix: list[list[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def tree_weight_total(g: Multigraph) -> Fraction:
    """``||T||`` by the weighted matrix-tree theorem.

    Weights are scaled to integers by the lcm ``L`` of their denominators, the
    reduced Laplacian (row/column 0 removed) is reduced with Bareiss, and the
    result is divided by ``L**(n-1)``.
    """
    if g.n == 1:
        return Fraction(1)
    scale = lcm(*(e.weight.denominator for e in g.edges)) if g.edges else 1
    size = g.n - 1
    lap = [[0] * size for _ in range(size)]
    for e in g.edges:
        if e.is_loop:
            continue
        w = e.weight.numerator * (scale // e.weight.denominator)
        u, v = e.tail - 1, e.head - 1
        if u >= 0:
            lap[u][u] += w
        if v >= 0:
            lap[v][v] += w
        if u >= 0 and v >= 0:
            lap[u][v] -= w
            lap[v][u] -= w
    return Fraction(bareiss_determinant(lap), scale**size)


@dataclass(frozen=True)
class FamilyWeights:
    """Weights of the four spanning-tree families split by membership of e1, e2."""

    t_both: Fraction
    t_first_only: Fraction
    t_second_only: Fraction
    t_neither: Fraction
    t_total: Fraction

    @property
    def t_first(self) -> Fraction:
        return self.t_both + self.t_first_only

    @property
    def t_second(self) -> Fraction:
        return self.t_both + self.t_second_only

    @property
    def t_not_second(self) -> Fraction:
        return self.t_first_only + self.t_neither

    @property
    def partition_holds(self) -> bool:
        return self.t_total == self.t_both + self.t_first_only + self.t_second_only + self.t_neither


def _check_pair(g: Multigraph, e1: str, e2: str) -> None:
    if e1 == e2:
        raise GraphError(f"edges must be distinct, got {e1!r} twice")
    for eid in (e1, e2):
        if g.edge(eid).is_loop:
            raise GraphError(f"edge {eid!r} is a self-loop")


def _contracted_total(g: Multigraph, eid: str) -> Fraction:
    """``w(e) * ||T(G/e)||``, or 0 when ``e`` has become a loop."""
    e = g.edge(eid)
    if e.is_loop:
        return Fraction(0)
    return e.weight * tree_weight_total(contract_edge(g, eid))


def family_weights(g: Multigraph, e1: str, e2: str) -> FamilyWeights:
    """Conditional family weights via deletion and contraction."""
    _check_pair(g, e1, e2)
    w1 = g.edge(e1).weight
    g_c1 = contract_edge(g, e1)
    # e2 parallel to e1 becomes a loop and is dropped by the contraction
    t_both = w1 * _contracted_total(g_c1, e2) if e2 in g_c1 else Fraction(0)
    t_first_only = w1 * tree_weight_total(delete_edge(g_c1, e2)) if e2 in g_c1 else w1 * tree_weight_total(g_c1)
    g_d1 = delete_edge(g, e1)
    t_second_only = _contracted_total(g_d1, e2)
    t_neither = tree_weight_total(delete_edge(g_d1, e2))
    return FamilyWeights(t_both, t_first_only, t_second_only, t_neither, tree_weight_total(g))


def enumerated_family_weights(g: Multigraph, e1: str, e2: str, cap: int | None = DEFAULT_TREE_CAP) -> FamilyWeights:
    """Oracle counterpart of :func:`family_weights`, by filtering enumerated trees."""
    _check_pair(g, e1, e2)
    b1, b2 = 1 << g.position(e1), 1 << g.position(e2)
    weights = mask_weights(g)
    sums = {(True, True): Fraction(0), (True, False): Fraction(0), (False, True): Fraction(0), (False, False): Fraction(0)}
    for t in spanning_tree_masks(g, cap):
        sums[(bool(t & b1), bool(t & b2))] += mask_weight(weights, t)
    return FamilyWeights(
        sums[(True, True)],
        sums[(True, False)],
        sums[(False, True)],
        sums[(False, False)],
        sum(sums.values(), Fraction(0)),
    )


def effective_resistance(g: Multigraph, eid: str) -> Fraction:
    """Kirchhoff resistance between the endpoints of ``eid``: ``||T_e|| / (w(e) ||T||)``."""
    e = g.edge(eid)
    if e.is_loop:
        raise GraphError(f"edge {eid!r} is a self-loop")
    if not is_connected(g):
        raise GraphError("graph is disconnected")
    t_e = e.weight * tree_weight_total(contract_edge(g, eid))
    return t_e / (e.weight * tree_weight_total(g))
