"""Exact-weight multigraphs with deletion and contraction.

Vertices are ``0..n-1``. Edges carry a caller-supplied string id, a stored
orientation ``(tail, head)`` and a positive :class:`fractions.Fraction`
weight. Graphs are immutable; every operation returns a new graph and
surviving edges keep their ids verbatim.

Contraction relabels vertices canonically: the smaller endpoint survives and
every vertex above the larger endpoint shifts down by one.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Iterator


class GraphError(ValueError):
    """Raised for malformed graph input or invalid graph operations."""


_WEIGHT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_weight(text: str | int) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into an exact Fraction. Zero denominators are rejected."""
    if isinstance(text, bool):
        raise GraphError(f"weight must be a string, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise GraphError(f"weight must be a string, got {text!r}")
    m = _WEIGHT_RE.match(text)
    if m is None:
        raise GraphError(f"malformed weight {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise GraphError(f"zero denominator in weight {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(x: Fraction) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Edge:
    id: str
    tail: int
    head: int
    weight: Fraction

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head

    def flipped(self) -> Edge:
        """The same edge with its stored orientation reversed."""
        return replace(self, tail=self.head, head=self.tail)

    def other(self, v: int) -> int:
        return self.head if v == self.tail else self.tail


@dataclass(frozen=True)
class Multigraph:
    n: int
    edges: tuple[Edge, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise GraphError(f"vertex count must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "edges", tuple(self.edges))
        index = {}
        for pos, e in enumerate(self.edges):
            if e.id in index:
                raise GraphError(f"duplicate edge id {e.id!r}")
            for v in (e.tail, e.head):
                if not (0 <= v < self.n):
                    raise GraphError(f"edge {e.id!r}: endpoint {v} out of range 0..{self.n - 1}")
            if e.weight <= 0:
                raise GraphError(f"edge {e.id!r}: non-positive weight {e.weight}")
            index[e.id] = pos
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_tuples(cls, n: int, edges: Iterable[tuple]) -> Multigraph:
        """Build from ``(id, tail, head[, weight])`` tuples; weight defaults to 1."""
        out = []
        for item in edges:
            eid, tail, head, *rest = item
            w = rest[0] if rest else 1
            w = parse_weight(w) if isinstance(w, str) else Fraction(w)
            out.append(Edge(str(eid), tail, head, w))
        return cls(n, tuple(out))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def __contains__(self, eid: str) -> bool:
        return eid in self._index

    def edge(self, eid: str) -> Edge:
        try:
            return self.edges[self._index[eid]]
        except KeyError:
            raise GraphError(f"unknown edge id {eid!r}") from None

    def position(self, eid: str) -> int:
        try:
            return self._index[eid]
        except KeyError:
            raise GraphError(f"unknown edge id {eid!r}") from None

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @property
    def loops(self) -> tuple[str, ...]:
        """Ids of self-loops (permitted, but excluded from every tree computation)."""
        return tuple(e.id for e in self.edges if e.is_loop)

    def weight_of(self, eids: Iterable[str]) -> Fraction:
        """Product of the weights of the given edges (1 for the empty set)."""
        w = Fraction(1)
        for eid in eids:
            w *= self.edge(eid).weight
        return w

    def with_edge(self, e: Edge) -> Multigraph:
        """Replace the edge with id ``e.id`` by ``e``."""
        pos = self.position(e.id)
        edges = list(self.edges)
        edges[pos] = e
        return Multigraph(self.n, tuple(edges))

    def flip(self, eid: str) -> Multigraph:
        return self.with_edge(self.edge(eid).flipped())

    def scaled(self, c: Fraction) -> Multigraph:
        return Multigraph(self.n, tuple(replace(e, weight=e.weight * c) for e in self.edges))

    def has_parallel_edges(self) -> bool:
        seen = set()
        for e in self.edges:
            if e.is_loop:
                continue
            key = (min(e.tail, e.head), max(e.tail, e.head))
            if key in seen:
                return True
            seen.add(key)
        return False

    def to_json(self) -> dict:
        return {
            "vertices": self.n,
            "edges": [
                {"id": e.id, "tail": e.tail, "head": e.head, "weight": format_rational(e.weight)}
                for e in self.edges
            ],
        }


def parse_graph(text: str) -> Multigraph:
    """Parse the JSON graph format.

    ``{"vertices": n, "edges": [{"id": ..., "tail": ..., "head": ..., "weight": "p/q"}]}``
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return graph_from_json(doc)


def graph_from_json(doc) -> Multigraph:
    if not isinstance(doc, dict):
        raise GraphError("graph document must be a JSON object")
    n = doc.get("vertices")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise GraphError(f"'vertices' must be an integer >= 1, got {n!r}")
    raw_edges = doc.get("edges")
    if not isinstance(raw_edges, list):
        raise GraphError("'edges' must be a list")
    edges = []
    seen = set()
    for k, item in enumerate(raw_edges):
        where = f"edges[{k}]"
        if not isinstance(item, dict):
            raise GraphError(f"{where}: edge must be an object")
        eid = item.get("id")
        if not isinstance(eid, str):
            raise GraphError(f"{where}: 'id' must be a string")
        if eid in seen:
            raise GraphError(f"{where}: duplicate edge id {eid!r}")
        seen.add(eid)
        ends = []
        for key in ("tail", "head"):
            v = item.get(key)
            if isinstance(v, bool) or not isinstance(v, int):
                raise GraphError(f"{where}: {key!r} must be an integer")
            if not (0 <= v < n):
                raise GraphError(f"{where}: endpoint out of range ({key}={v}, vertices={n})")
            ends.append(v)
        if "weight" not in item:
            raise GraphError(f"{where}: missing 'weight'")
        try:
            w = parse_weight(item["weight"])
        except GraphError as exc:
            raise GraphError(f"{where}: {exc}") from None
        if w <= 0:
            raise GraphError(f"{where}: non-positive weight {item['weight']!r}")
        edges.append(Edge(eid, ends[0], ends[1], w))
    return Multigraph(n, tuple(edges))


def delete_edge(g: Multigraph, eid: str) -> Multigraph:
    g.edge(eid)
    return Multigraph(g.n, tuple(e for e in g.edges if e.id != eid))


def contract_edge(g: Multigraph, eid: str) -> Multigraph:
    """Identify the endpoints of ``eid`` and drop it.

    Edges that turn into self-loops are removed; parallel edges stay distinct.
    """
    target = g.edge(eid)
    if target.is_loop:
        raise GraphError(f"cannot contract self-loop {eid!r}")
    keep, gone = sorted((target.tail, target.head))

    def relabel(v: int) -> int:
        if v == gone:
            v = keep
        return v - 1 if v > gone else v

    edges = []
    for e in g.edges:
        if e.id == eid:
            continue
        t, h = relabel(e.tail), relabel(e.head)
        if t == h:
            continue
        edges.append(replace(e, tail=t, head=h))
    return Multigraph(g.n - 1, tuple(edges))


def is_connected(g: Multigraph) -> bool:
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for e in g.edges:
        adj[e.tail].append(e.head)
        adj[e.head].append(e.tail)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == g.n


def is_bridge(g: Multigraph, eid: str) -> bool:
    """True iff removing ``eid`` increases the number of components."""
    e = g.edge(eid)
    if e.is_loop:
        return False
    h = delete_edge(g, eid)
    return _component_of(h, e.tail) != _component_of(h, e.head)


def _component_of(g: Multigraph, start: int) -> frozenset[int]:
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for e in g.edges:
        adj[e.tail].append(e.head)
        adj[e.head].append(e.tail)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return frozenset(seen)
