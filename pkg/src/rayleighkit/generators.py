"""Small multigraph families: exhaustive up to isomorphism, or seeded random.

Exhaustive families grow edge multisets one edge at a time and keep one
canonical representative per isomorphism class. The canonical form is the
lexicographically least sorted edge list over all relabelings that respect
a degree-based vertex invariant, which is cheap at desk scale (n <= 7).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Iterator

from .graph import Edge, Multigraph, is_connected
from .sampler import Xoshiro256

Pairs = tuple[tuple[int, int], ...]


def _invariants(n: int, pairs: Pairs) -> list[tuple]:
    deg = [0] * n
    for u, v in pairs:
        deg[u] += 1
        deg[v] += 1
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in pairs:
        nbrs[u].append(deg[v])
        nbrs[v].append(deg[u])
    return [(deg[v], tuple(sorted(nbrs[v]))) for v in range(n)]


def canonical_form(n: int, pairs: Pairs) -> Pairs:
    inv = _invariants(n, pairs)
    order = sorted(range(n), key=lambda v: inv[v])
    blocks: list[list[int]] = []
    for v in order:
        if blocks and inv[blocks[-1][0]] == inv[v]:
            blocks[-1].append(v)
        else:
            blocks.append([v])
    best = None
    for choice in product(*(permutations(b) for b in blocks)):
        label = [0] * n
        pos = 0
        for block in choice:
            for v in block:
                label[v] = pos
                pos += 1
        cand = tuple(sorted((min(label[u], label[v]), max(label[u], label[v])) for u, v in pairs))
        if best is None or cand < best:
            best = cand
    return best


@lru_cache(maxsize=None)
def _multigraph_classes(n: int, m: int) -> tuple[Pairs, ...]:
    """All loopless multigraphs on n vertices with m edges, one per isomorphism class."""
    if m == 0:
        return ((),)
    slots = list(combinations(range(n), 2))
    found = set()
    for base in _multigraph_classes(n, m - 1):
        for s in slots:
            found.add(canonical_form(n, tuple(sorted(base + (s,)))))
    return tuple(sorted(found))


def pairs_to_graph(n: int, pairs: Pairs, weights: list[Fraction] | None = None) -> Multigraph:
    edges = []
    for k, (u, v) in enumerate(pairs):
        w = weights[k] if weights is not None else Fraction(1)
        edges.append(Edge(f"e{k}", u, v, w))
    return Multigraph(n, tuple(edges))


def connected_multigraphs(max_vertices: int, max_edges: int, min_vertices: int = 1) -> Iterator[Multigraph]:
    """Every connected loopless multigraph within the bounds, up to isomorphism.

    Deterministic order: by vertex count, then edge count, then canonical edge list.
    Edges are oriented from the smaller to the larger endpoint, with unit weight.
    """
    for n in range(max(min_vertices, 1), max_vertices + 1):
        for m in range(n - 1, max_edges + 1):
            for pairs in _multigraph_classes(n, m):
                g = pairs_to_graph(n, pairs)
                if is_connected(g):
                    yield g


def random_rational(rng: Xoshiro256, lo: int = 1, hi: int = 100) -> Fraction:
    """``p/q`` with ``p`` and ``q`` uniform in ``[lo, hi]`` (p drawn first)."""
    p = lo + rng.randbelow(hi - lo + 1)
    q = lo + rng.randbelow(hi - lo + 1)
    return Fraction(p, q)


def with_random_weights(g: Multigraph, rng: Xoshiro256) -> Multigraph:
    """Same structure, weights drawn in edge order with :func:`random_rational`."""
    return Multigraph(g.n, tuple(Edge(e.id, e.tail, e.head, random_rational(rng)) for e in g.edges))


def random_connected_multigraph(rng: Xoshiro256, max_vertices: int, max_edges: int) -> Multigraph:
    """A seeded random connected loopless multigraph.

    Draw order: vertex count ``n`` in ``[2, max_vertices]`` (capped so a tree
    fits in ``max_edges``), edge count in ``[n-1, max_edges]``, a random
    parent for each vertex ``1..n-1``, then the extra edges, then a coin per
    edge for its orientation. Weights are 1.
    """
    top = min(max_vertices, max_edges + 1)
    if top < 2:
        return Multigraph(1, ())
    n = 2 + rng.randbelow(top - 1)
    m = n - 1 + rng.randbelow(max_edges - (n - 1) + 1)
    pairs = [(rng.randbelow(v), v) for v in range(1, n)]
    while len(pairs) < m:
        u = rng.randbelow(n)
        v = rng.randbelow(n - 1)
        if v >= u:
            v += 1
        pairs.append((u, v))
    edges = []
    for k, (u, v) in enumerate(pairs):
        if rng.randbelow(2):
            u, v = v, u
        edges.append(Edge(f"e{k}", u, v, Fraction(1)))
    return Multigraph(n, tuple(edges))
