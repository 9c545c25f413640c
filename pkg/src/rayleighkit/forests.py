"""Spanning forests and the forest analogue of negative correlation.

A spanning forest here is any acyclic edge subset, on the full vertex set;
the empty set counts. Whether the tree inequality survives the switch to
forests is open, so :func:`search_counterexample` only gathers evidence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .graph import GraphError, Multigraph
from .generators import connected_multigraphs, random_connected_multigraph, with_random_weights
from .sampler import Xoshiro256, derive_seed
from .trees import CapExceeded, mask_weight, mask_weights, sorted_edge_positions

DEFAULT_FOREST_CAP = 20


def forest_masks(g: Multigraph, cap: int | None = DEFAULT_FOREST_CAP) -> list[int]:
    """Acyclic edge subsets as position bitmasks.

    Order: by size, then lexicographic in the sorted edge-id sequence.
    """
    if cap is not None and len(g.edges) > cap:
        raise CapExceeded(f"graph has {len(g.edges)} edges, forest enumeration cap is {cap}")
    order = sorted_edge_positions(g)
    ends = [(g.edges[p].tail, g.edges[p].head) for p in order]
    by_size: list[list[int]] = [[] for _ in range(g.n)]

    def rec(start: int, comp: list[int], chosen: list[int]):
        by_size[len(chosen)].append(sum(1 << order[k] for k in chosen))
        for k in range(start, len(order)):
            u, v = ends[k]
            cu, cv = comp[u], comp[v]
            if cu == cv:
                continue
            chosen.append(k)
            rec(k + 1, [cu if c == cv else c for c in comp], chosen)
            chosen.pop()

    rec(0, list(range(g.n)), [])
    return [m for bucket in by_size for m in bucket]


def enumerate_forests(g: Multigraph, cap: int | None = DEFAULT_FOREST_CAP) -> list[frozenset[str]]:
    return [frozenset(e.id for i, e in enumerate(g.edges) if m >> i & 1) for m in forest_masks(g, cap)]


@dataclass(frozen=True)
class ForestCorrelation:
    f_both: Fraction
    f_first_only: Fraction
    f_second_only: Fraction
    f_neither: Fraction
    p_given_absent: Fraction | None
    p_given_present: Fraction | None
    delta_f: Fraction
    holds: bool

    @property
    def total(self) -> Fraction:
        return self.f_both + self.f_first_only + self.f_second_only + self.f_neither


def _correlation_from_masks(g: Multigraph, forests: list[int], p1: int, p2: int) -> ForestCorrelation:
    b1, b2 = 1 << p1, 1 << p2
    weights = mask_weights(g)
    both = first = second = neither = Fraction(0)
    for f in forests:
        w = mask_weight(weights, f)
        if f & b1:
            if f & b2:
                both += w
            else:
                first += w
        elif f & b2:
            second += w
        else:
            neither += w
    absent = first + neither
    present = both + second
    p_absent = first / absent if absent else None
    p_present = both / present if present else None
    delta = first * second - both * neither
    return ForestCorrelation(both, first, second, neither, p_absent, p_present, delta, delta >= 0)


def forest_correlation(g: Multigraph, e1: str, e2: str, cap: int | None = DEFAULT_FOREST_CAP) -> ForestCorrelation:
    """Conditional forest probabilities of ``e1`` given ``e2`` absent / present.

    A conditioning event of zero mass (only possible when ``e2`` is a
    self-loop) is reported as ``None``; ``holds`` then falls back on
    ``delta_f >= 0``.
    """
    if e1 == e2:
        raise GraphError(f"edges must be distinct, got {e1!r} twice")
    p1, p2 = g.position(e1), g.position(e2)
    return _correlation_from_masks(g, forest_masks(g, cap), p1, p2)


class SpecError(ValueError):
    """Malformed counterexample-search specification."""


@dataclass(frozen=True)
class SearchSpec:
    mode: str
    max_vertices: int
    max_edges: int
    weight_seed: int | None = None
    count: int = 0
    seed: int = 0

    @classmethod
    def from_json(cls, doc) -> SearchSpec:
        if not isinstance(doc, dict) or not doc:
            raise SpecError("search spec must be a non-empty JSON object")
        mode = doc.get("mode")
        if mode not in ("exhaustive", "random"):
            raise SpecError(f"'mode' must be 'exhaustive' or 'random', got {mode!r}")
        ints = {}
        for key in ("max_vertices", "max_edges"):
            v = doc.get(key)
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise SpecError(f"{key!r} must be a non-negative integer, got {v!r}")
            ints[key] = v
        if ints["max_vertices"] < 2 or ints["max_edges"] < 1:
            raise SpecError("family is empty: need max_vertices >= 2 and max_edges >= 1")
        weights = doc.get("weights", "unit")
        if weights == "unit":
            wseed = None
        elif isinstance(weights, dict) and isinstance(weights.get("random_seed"), int):
            wseed = weights["random_seed"]
        else:
            raise SpecError(f"'weights' must be 'unit' or {{'random_seed': int}}, got {weights!r}")
        count = doc.get("count", 0)
        if isinstance(count, bool) or not isinstance(count, int) or count < 0:
            raise SpecError(f"'count' must be a non-negative integer, got {count!r}")
        if mode == "random" and count < 1:
            raise SpecError("random mode needs 'count' >= 1")
        seed = doc.get("seed", 0)
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise SpecError(f"'seed' must be an integer, got {seed!r}")
        return cls(mode, ints["max_vertices"], ints["max_edges"], wseed, count, seed)

    @classmethod
    def parse(cls, text: str) -> SearchSpec:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_json(doc)

    def graphs(self) -> Iterator[Multigraph]:
        """The family in canonical order, with weights already applied."""
        if self.mode == "exhaustive":
            family = connected_multigraphs(self.max_vertices, self.max_edges, min_vertices=2)
        else:
            rng = Xoshiro256(self.seed)
            family = (random_connected_multigraph(rng, self.max_vertices, self.max_edges) for _ in range(self.count))
        for idx, g in enumerate(family):
            if self.weight_seed is not None:
                g = with_random_weights(g, Xoshiro256(derive_seed(self.weight_seed, idx)))
            yield g


@dataclass(frozen=True)
class Instance:
    index: int
    graph: Multigraph
    e1: str
    e2: str
    correlation: ForestCorrelation

    @property
    def has_parallel_edges(self) -> bool:
        return self.graph.has_parallel_edges()


@dataclass
class SearchReport:
    graphs_checked: int = 0
    instances_checked: int = 0
    counterexample: Instance | None = None
    min_delta_f: Fraction | None = None
    argmin: Instance | None = None
    parallel_edge_instances: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.counterexample is not None


def search_counterexample(spec: SearchSpec, cap: int | None = DEFAULT_FOREST_CAP) -> SearchReport:
    """Run the forest inequality over every graph and ordered edge pair of ``spec``.

    Stops at the first violation in canonical order (graph order, then edge
    positions). The minimum ``delta_f`` seen so far is reported either way;
    ties keep the earliest instance.
    """
    report = SearchReport()
    for idx, g in enumerate(spec.graphs()):
        report.graphs_checked += 1
        forests = forest_masks(g, cap)
        parallel = g.has_parallel_edges()
        m = len(g.edges)
        for p1 in range(m):
            for p2 in range(m):
                if p1 == p2:
                    continue
                corr = _correlation_from_masks(g, forests, p1, p2)
                report.instances_checked += 1
                report.parallel_edge_instances += parallel
                if report.min_delta_f is None or corr.delta_f < report.min_delta_f:
                    report.min_delta_f = corr.delta_f
                    report.argmin = Instance(idx, g, g.edges[p1].id, g.edges[p2].id, corr)
                if not corr.holds:
                    report.counterexample = Instance(idx, g, g.edges[p1].id, g.edges[p2].id, corr)
                    return report
    return report
