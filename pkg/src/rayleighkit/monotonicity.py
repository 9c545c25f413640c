"""Rayleigh monotonicity for graphs and explicit matroids.

For a pair of edges ``e1, e2`` a forest ``F`` is *important* when both
``F + e1`` and ``F + e2`` are spanning trees. ``F + e1 + e2`` then has a
single cycle through both edges, and ``F`` is positive when the stored
orientations of ``e1`` and ``e2`` run the same way around that cycle.

Everything here checks, exactly, that

    ||T(e1, not e2)|| ||T(not e1, e2)|| - ||T(e1, e2)|| ||T(not e1, not e2)||
        = w(e1) w(e2) (||C+|| - ||C-||)**2

together with the coefficient-by-coefficient version of the same identity.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .graph import GraphError, Multigraph, is_connected, parse_weight
from .trees import (
    DEFAULT_TREE_CAP,
    FamilyWeights,
    _check_pair,
    enumerate_spanning_trees,
    family_weights,
    mask_to_edge_set,
    mask_weight,
    mask_weights,
    spanning_tree_masks,
)


@dataclass(frozen=True)
class OrientedForestClasses:
    positive: list[frozenset[str]]
    negative: list[frozenset[str]]
    weight_positive: Fraction
    weight_negative: Fraction


def _tree_path_edges(g: Multigraph, tree: int, src: int, dst: int) -> list[tuple[int, int]]:
    """Edges on the tree path from ``src`` to ``dst`` as ``(position, from_vertex)``."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    pos = 0
    mask = tree
    while mask:
        if mask & 1:
            e = g.edges[pos]
            adj[e.tail].append((e.head, pos))
            adj[e.head].append((e.tail, pos))
        mask >>= 1
        pos += 1
    parent: dict[int, tuple[int, int]] = {src: (-1, -1)}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            break
        for v, p in adj[u]:
            if v not in parent:
                parent[v] = (u, p)
                queue.append(v)
    path = []
    v = dst
    while v != src:
        u, p = parent[v]
        path.append((p, u))
        v = u
    path.reverse()
    return path


def classify_important_forests(g: Multigraph, trees: Iterable[int], p1: int, p2: int) -> tuple[list[int], list[int]]:
    """Split the important forests of ``(p1, p2)`` into positive and negative masks.

    ``trees`` are spanning-tree masks of ``g`` (as produced by
    :func:`spanning_tree_masks`); output order follows them.

    Orientation rule: in ``T = F + e1`` take the path from ``head(e2)`` back
    to ``tail(e2)``; together with ``e2`` it closes the cycle. ``e1`` lies on
    that path iff ``F + e2`` is also a tree, and ``F`` is positive iff the
    path crosses ``e1`` from its tail to its head.
    """
    b1, b2 = 1 << p1, 1 << p2
    edge1, edge2 = g.edges[p1], g.edges[p2]
    positive, negative = [], []
    for t in trees:
        if not t & b1 or t & b2:
            continue
        for p, frm in _tree_path_edges(g, t, edge2.head, edge2.tail):
            if p == p1:
                (positive if frm == edge1.tail else negative).append(t & ~b1)
                break
    return positive, negative


def important_forests(g: Multigraph, e1: str, e2: str, cap: int | None = DEFAULT_TREE_CAP) -> OrientedForestClasses:
    _check_pair(g, e1, e2)
    if not is_connected(g):
        raise GraphError("graph is disconnected")
    weights = mask_weights(g)
    pos, neg = classify_important_forests(g, spanning_tree_masks(g, cap), g.position(e1), g.position(e2))
    return OrientedForestClasses(
        positive=[mask_to_edge_set(g, f) for f in pos],
        negative=[mask_to_edge_set(g, f) for f in neg],
        weight_positive=sum((mask_weight(weights, f) for f in pos), Fraction(0)),
        weight_negative=sum((mask_weight(weights, f) for f in neg), Fraction(0)),
    )


def delta_from_families(fw: FamilyWeights) -> Fraction:
    return fw.t_first_only * fw.t_second_only - fw.t_both * fw.t_neither


def rayleigh_delta(g: Multigraph, e1: str, e2: str) -> Fraction:
    """Cross-product difference of the four tree families; never negative on graphs."""
    return delta_from_families(family_weights(g, e1, e2))


@dataclass(frozen=True)
class IdentityReport:
    delta: Fraction
    square_form: Fraction
    equal: bool
    weight_positive: Fraction
    weight_negative: Fraction
    expanded_lhs: Fraction
    expanded_rhs: Fraction
    expanded_equal: bool


def identity_sides(fw: FamilyWeights, w1: Fraction, w2: Fraction, c_pos: Fraction, c_neg: Fraction) -> IdentityReport:
    delta = delta_from_families(fw)
    square = w1 * w2 * (c_pos - c_neg) ** 2
    lhs = fw.t_first_only * fw.t_second_only + 2 * w1 * w2 * c_pos * c_neg
    rhs = fw.t_both * fw.t_neither + w1 * w2 * (c_pos**2 + c_neg**2)
    return IdentityReport(delta, square, delta == square, c_pos, c_neg, lhs, rhs, lhs == rhs)


def verify_identity(g: Multigraph, e1: str, e2: str, cap: int | None = DEFAULT_TREE_CAP) -> IdentityReport:
    """Compare the determinant-side difference with the important-forest square."""
    fw = family_weights(g, e1, e2)
    classes = important_forests(g, e1, e2, cap)
    return identity_sides(fw, g.edge(e1).weight, g.edge(e2).weight, classes.weight_positive, classes.weight_negative)


@dataclass(frozen=True, order=True)
class MonomialKey:
    """Exponent vector of a weight monomial, canonical by sorted edge id."""

    items: tuple[tuple[str, int], ...]

    @classmethod
    def from_map(cls, alpha: Mapping[str, int]) -> MonomialKey:
        return cls(tuple(sorted((k, v) for k, v in alpha.items() if v)))

    @classmethod
    def from_masks(cls, g: Multigraph, present: int, plentiful: int) -> MonomialKey:
        alpha = {}
        for i, e in enumerate(g.edges):
            a = (present >> i & 1) + (plentiful >> i & 1)
            if a:
                alpha[e.id] = a
        return cls.from_map(alpha)

    @property
    def exponents(self) -> dict[str, int]:
        return dict(self.items)

    def __str__(self) -> str:
        return " ".join(f"{k}^{v}" if v > 1 else k for k, v in self.items) or "1"

    def evaluate(self, g: Multigraph) -> Fraction:
        out = Fraction(1)
        for eid, a in self.items:
            out *= g.edge(eid).weight ** a
        return out

    def degree(self, g: Multigraph, v: int) -> int:
        alpha = self.exponents
        return sum(alpha.get(e.id, 0) * ((e.tail == v) + (e.head == v)) for e in g.edges)

    def feasibility_errors(self, g: Multigraph, e1: str, e2: str) -> list[str]:
        """Which of the necessary conditions on a nonzero monomial fail (empty if none)."""
        alpha = self.exponents
        errors = []
        if alpha.get(e1, 0) != 1 or alpha.get(e2, 0) != 1:
            errors.append("multiplicity of e1 and e2 must be 1")
        if sum(alpha.values()) != 2 * (g.n - 1):
            errors.append(f"total degree {sum(alpha.values())} != {2 * (g.n - 1)}")
        if any(a > 2 for a in alpha.values()):
            errors.append("multiplicity above 2")
        low = [v for v in range(g.n) if self.degree(g, v) <= 1]
        if low:
            errors.append(f"vertex degree <= 1 at {low}")
        return errors


@dataclass
class CoefficientCounts:
    a_split: int = 0
    a_joint: int = 0
    a_pm: int = 0
    a_pp: int = 0
    a_mm: int = 0

    @property
    def balanced(self) -> bool:
        # a_pm counts (C+, C-) pairs once; the identity needs both orders
        return self.a_split + 2 * self.a_pm == self.a_joint + self.a_pp + self.a_mm


_COUNT_FIELDS = ("a_split", "a_joint", "a_pm", "a_pp", "a_mm")


def _pair_counter(left: list[int], right: list[int], extra: int = 0) -> Counter:
    # alpha(f) = [f in A] + [f in B] is encoded as (A | B, A & B)
    c: Counter = Counter()
    for a in left:
        for b in right:
            c[((a | b) | extra, a & b)] += 1
    return c


def monomial_tally_masks(
    g: Multigraph, trees: list[int], p1: int, p2: int
) -> dict[tuple[int, int], CoefficientCounts]:
    """Monomial tally keyed by ``(present_mask, plentiful_mask)``."""
    b1, b2 = 1 << p1, 1 << p2
    fam: dict[tuple[bool, bool], list[int]] = {(a, b): [] for a in (True, False) for b in (True, False)}
    for t in trees:
        fam[(bool(t & b1), bool(t & b2))].append(t)
    pos, neg = classify_important_forests(g, trees, p1, p2)
    both = b1 | b2
    counters = {
        "a_split": _pair_counter(fam[(True, False)], fam[(False, True)]),
        "a_joint": _pair_counter(fam[(True, True)], fam[(False, False)]),
        "a_pm": _pair_counter(pos, neg, both),
        "a_pp": _pair_counter(pos, pos, both),
        "a_mm": _pair_counter(neg, neg, both),
    }
    out: dict[tuple[int, int], CoefficientCounts] = {}
    for name, counter in counters.items():
        for key, count in counter.items():
            setattr(out.setdefault(key, CoefficientCounts()), name, count)
    return out


def monomial_tally(
    g: Multigraph, e1: str, e2: str, cap: int | None = DEFAULT_TREE_CAP
) -> dict[MonomialKey, CoefficientCounts]:
    """Coefficient of every monomial in each of the five pair counts, sorted by key."""
    _check_pair(g, e1, e2)
    trees = spanning_tree_masks(g, cap)
    raw = monomial_tally_masks(g, trees, g.position(e1), g.position(e2))
    keyed = {MonomialKey.from_masks(g, *k): v for k, v in raw.items()}
    return dict(sorted(keyed.items()))


@dataclass(frozen=True)
class SymmetryReport:
    before: OrientedForestClasses
    after: OrientedForestClasses
    swapped: bool


def flip_orientation_check(g: Multigraph, e1: str, e2: str, cap: int | None = DEFAULT_TREE_CAP) -> SymmetryReport:
    """Reverse ``e1`` and check that the positive and negative classes trade places."""
    before = important_forests(g, e1, e2, cap)
    after = important_forests(g.flip(e1), e1, e2, cap)
    swapped = set(before.positive) == set(after.negative) and set(before.negative) == set(after.positive)
    return SymmetryReport(before, after, swapped)


@dataclass(frozen=True)
class MatroidBasisList:
    elements: tuple[str, ...]
    bases: tuple[frozenset[str], ...]
    weights: dict

    def __post_init__(self):
        ground = set(self.elements)
        if len(ground) != len(self.elements):
            raise GraphError("duplicate matroid element")
        if not self.bases:
            raise GraphError("matroid basis list is empty")
        sizes = {len(b) for b in self.bases}
        if len(sizes) != 1:
            raise GraphError(f"ragged basis sizes {sorted(sizes)}")
        for b in self.bases:
            unknown = b - ground
            if unknown:
                raise GraphError(f"basis uses unknown elements {sorted(unknown)}")
        for x in self.elements:
            w = self.weights.get(x)
            if w is None:
                raise GraphError(f"missing weight for element {x!r}")
            if w <= 0:
                raise GraphError(f"non-positive weight for element {x!r}")

    @property
    def rank(self) -> int:
        return len(self.bases[0])

    @cached_property
    def basis_weights(self) -> tuple[Fraction, ...]:
        return tuple(self.weight_of(b) for b in self.bases)

    def weight_of(self, subset: Iterable[str]) -> Fraction:
        w = Fraction(1)
        for x in subset:
            w *= self.weights[x]
        return w


def parse_matroid(text: str) -> MatroidBasisList:
    """Parse ``{"elements": [...], "weights": {"id": "p/q"}, "bases": [[...], ...]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise GraphError("matroid document must be a JSON object")
    elements = doc.get("elements")
    bases = doc.get("bases")
    weights = doc.get("weights", {})
    if not isinstance(elements, list) or not all(isinstance(x, str) for x in elements):
        raise GraphError("'elements' must be a list of strings")
    if not isinstance(bases, list) or not all(isinstance(b, list) for b in bases):
        raise GraphError("'bases' must be a list of lists")
    if not isinstance(weights, dict):
        raise GraphError("'weights' must be an object")
    parsed = {}
    for k, v in weights.items():
        try:
            parsed[k] = parse_weight(v)
        except GraphError as exc:
            raise GraphError(f"weights[{k!r}]: {exc}") from None
    unknown = set(parsed) - set(elements)
    if unknown:
        raise GraphError(f"weights given for unknown elements {sorted(unknown)}")
    return MatroidBasisList(tuple(elements), tuple(frozenset(b) for b in bases), parsed)


def graphic_matroid(g: Multigraph, cap: int | None = DEFAULT_TREE_CAP) -> MatroidBasisList:
    """Basis list of the cycle matroid of ``g``; its bases are the spanning trees."""
    return MatroidBasisList(
        g.edge_ids,
        tuple(enumerate_spanning_trees(g, cap)),
        {e.id: e.weight for e in g.edges},
    )


def satisfies_basis_exchange(m: MatroidBasisList) -> bool:
    """Check the basis exchange axiom. Quadratic in the number of bases."""
    bases = set(m.bases)
    for a, b in combinations(m.bases, 2):
        for first, second in ((a, b), (b, a)):
            for x in first - second:
                if not any((first - {x}) | {y} in bases for y in second - first):
                    return False
    return True


@dataclass(frozen=True)
class MatroidReport:
    families: FamilyWeights
    difference: Fraction
    rayleigh: bool


def matroid_rayleigh_check(m: MatroidBasisList, e1: str, e2: str) -> MatroidReport:
    if e1 == e2:
        raise GraphError(f"elements must be distinct, got {e1!r} twice")
    for x in (e1, e2):
        if x not in m.weights:
            raise GraphError(f"unknown element {x!r}")
    sums = {(a, b): Fraction(0) for a in (True, False) for b in (True, False)}
    for basis, w in zip(m.bases, m.basis_weights):
        sums[(e1 in basis, e2 in basis)] += w
    fw = FamilyWeights(
        sums[(True, True)], sums[(True, False)], sums[(False, True)], sums[(False, False)], sum(sums.values(), Fraction(0))
    )
    diff = delta_from_families(fw)
    return MatroidReport(fw, diff, diff >= 0)
