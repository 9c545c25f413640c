"""Weighted random spanning trees and the conditional-probability check.

Random numbers come from xoshiro256** seeded by four successive SplitMix64
outputs, so a (seed, graph, n) triple fixes every sample on any platform:

* ``splitmix64(x)``: ``x += 0x9E3779B97F4A7C15``; ``z = x``;
  ``z = (z ^ z >> 30) * 0xBF58476D1CE4E5B9``; ``z = (z ^ z >> 27) * 0x94D049BB133111EB``;
  output ``z ^ z >> 31`` (all mod 2**64).
* ``randbelow(n)``: draw ``k = (n-1).bit_length()`` bits from the top of
  ``ceil(k/64)`` consecutive words (first word most significant), reject and
  redraw while the value is ``>= n``.

Trees are drawn with Wilson's algorithm rooted at vertex 0. From vertex
``u`` the walk picks incident edge ``e`` with probability
``w(e) / sum of incident weights``; weights are scaled to integers first so
the step is exact. Parallel edges are separate outcomes; self-loops are
skipped.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .graph import GraphError, Multigraph, is_bridge, is_connected
from .trees import family_weights

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> tuple[int, int]:
    """One SplitMix64 step. Returns ``(new_state, output)``."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256:
    """xoshiro256** generator. Mutable; each caller owns its own instance."""

    def __init__(self, seed: int):
        x = seed & _MASK64
        s = []
        for _ in range(4):
            x, out = splitmix64(x)
            s.append(out)
        self.s = s

    def next_u64(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def randbelow(self, n: int) -> int:
        if n < 1:
            raise ValueError("randbelow needs n >= 1")
        if n == 1:
            return 0
        k = (n - 1).bit_length()
        words = (k + 63) // 64
        while True:
            r = 0
            for _ in range(words):
                r = (r << 64) | self.next_u64()
            r >>= 64 * words - k
            if r < n:
                return r


def derive_seed(seed: int, stream: int) -> int:
    """Seed of the ``stream``-th independent stream derived from ``seed``."""
    return splitmix64((seed + stream) & _MASK64)[1]


class _WalkTable:
    # Per-vertex cumulative integer weights of incident non-loop edges.
    def __init__(self, g: Multigraph):
        scale = lcm(*(e.weight.denominator for e in g.edges)) if g.edges else 1
        self.cum: list[list[int]] = [[] for _ in range(g.n)]
        self.steps: list[list[tuple[str, int]]] = [[] for _ in range(g.n)]
        for e in g.edges:
            if e.is_loop:
                continue
            w = e.weight.numerator * (scale // e.weight.denominator)
            for u in (e.tail, e.head):
                prev = self.cum[u][-1] if self.cum[u] else 0
                self.cum[u].append(prev + w)
                self.steps[u].append((e.id, e.other(u)))

    def step(self, u: int, rng: Xoshiro256) -> tuple[str, int]:
        cum = self.cum[u]
        r = rng.randbelow(cum[-1])
        return self.steps[u][bisect_right(cum, r)]


def _wilson(g: Multigraph, table: _WalkTable, rng: Xoshiro256) -> frozenset[str]:
    in_tree = [False] * g.n
    in_tree[0] = True
    nxt: list[tuple[str, int] | None] = [None] * g.n
    for start in range(1, g.n):
        u = start
        while not in_tree[u]:
            nxt[u] = table.step(u, rng)
            u = nxt[u][1]
        u = start
        while not in_tree[u]:
            in_tree[u] = True
            u = nxt[u][1]
    return frozenset(nxt[v][0] for v in range(1, g.n))


def sample_spanning_tree(g: Multigraph, rng: Xoshiro256) -> frozenset[str]:
    """One spanning tree drawn with probability proportional to its weight."""
    if not is_connected(g):
        raise GraphError("graph is disconnected")
    return _wilson(g, _WalkTable(g), rng)


def sample_spanning_trees(g: Multigraph, n_samples: int, seed: int) -> list[frozenset[str]]:
    if not is_connected(g):
        raise GraphError("graph is disconnected")
    rng = Xoshiro256(seed)
    table = _WalkTable(g)
    return [_wilson(g, table, rng) for _ in range(n_samples)]


def _check_conditionals(g: Multigraph, e1: str, e2: str) -> None:
    if e1 == e2:
        raise GraphError(f"edges must be distinct, got {e1!r} twice")
    if not is_connected(g):
        raise GraphError("graph is disconnected")
    if is_bridge(g, e2):
        raise GraphError(f"e2 is a bridge ({e2!r}); the event 'e2 not in T' has probability 0")


def exact_conditionals(g: Multigraph, e1: str, e2: str) -> tuple[Fraction, Fraction]:
    """``(Pr[e1 in T | e2 not in T], Pr[e1 in T | e2 in T])`` from exact family weights."""
    _check_conditionals(g, e1, e2)
    fw = family_weights(g, e1, e2)
    return fw.t_first_only / fw.t_not_second, fw.t_both / fw.t_second


@dataclass(frozen=True)
class SampleReport:
    condition: str
    n_samples: int
    seed: int
    event_count: int
    hit_count: int
    empirical_p: Fraction | None
    exact_p: Fraction
    abs_gap: Fraction | None

    @property
    def insufficient(self) -> bool:
        return self.empirical_p is None


def empirical_conditionals(
    g: Multigraph, e1: str, e2: str, n_samples: int, seed: int
) -> tuple[SampleReport, SampleReport]:
    """Sampled conditionals next to the exact ones.

    A conditioning event that never occurs gets ``empirical_p = None``
    (insufficient samples) rather than an error.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    exact_absent, exact_present = exact_conditionals(g, e1, e2)
    absent = [0, 0]
    present = [0, 0]
    for t in sample_spanning_trees(g, n_samples, seed):
        bucket = present if e2 in t else absent
        bucket[0] += 1
        bucket[1] += e1 in t

    def report(name: str, counts: list[int], exact: Fraction) -> SampleReport:
        if counts[0] == 0:
            return SampleReport(name, n_samples, seed, 0, 0, None, exact, None)
        p = Fraction(counts[1], counts[0])
        return SampleReport(name, n_samples, seed, counts[0], counts[1], p, exact, abs(p - exact))

    return (
        report("e1 | not e2", absent, exact_absent),
        report("e1 | e2", present, exact_present),
    )
