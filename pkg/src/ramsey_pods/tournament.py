"""Edge-colored tournaments and ordered colorings.

Vertices are integer labels; a freshly parsed instance uses 1..N.  Induced
subtournaments keep the original labels so that path certificates always
refer to the instance they were found in.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence


class OrderedColoring:
    """A q-edge-colored complete graph on ordered vertices 1..N."""

    def __init__(self, n_vertices: int, q: int, colors: Iterable[tuple[int, int, int]]):
        if n_vertices < 1:
            raise ValueError("need at least one vertex")
        if q < 1:
            raise ValueError("palette must be nonempty")
        self.n_vertices = n_vertices
        self.q = q
        self._color = [[0] * (n_vertices + 1) for _ in range(n_vertices + 1)]
        seen = 0
        for u, v, c in colors:
            if not (1 <= u < v <= n_vertices):
                raise ValueError(f"edge ({u},{v}) is not an ordered pair in range")
            if not 1 <= c <= q:
                raise ValueError(f"color {c} outside [1, {q}]")
            if self._color[u][v]:
                raise ValueError(f"edge ({u},{v}) colored twice")
            self._color[u][v] = self._color[v][u] = c
            seen += 1
        if seen != n_vertices * (n_vertices - 1) // 2:
            raise ValueError("every vertex pair must be colored exactly once")

    def color(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("no loops")
        return self._color[u][v]

    def edges(self) -> Iterator[tuple[int, int, int]]:
        for u in range(1, self.n_vertices + 1):
            for v in range(u + 1, self.n_vertices + 1):
                yield u, v, self._color[u][v]

    def recolored(self, mapping) -> "OrderedColoring":
        """A copy with every color c replaced by mapping(c)."""
        new_q = max(mapping(c) for c in range(1, self.q + 1))
        return OrderedColoring(
            self.n_vertices, new_q, ((u, v, mapping(c)) for u, v, c in self.edges())
        )

    def as_tournament(self) -> "ColoredTournament":
        """The transitive tournament carrying the same colors."""
        return ColoredTournament(
            self.n_vertices, self.q, ((u, v, c) for u, v, c in self.edges())
        )

    def to_json(self) -> dict:
        return {
            "N": self.n_vertices,
            "q": self.q,
            "colors": [[u, v, c] for u, v, c in self.edges()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "OrderedColoring":
        return cls(int(data["N"]), int(data["q"]), [tuple(e) for e in data["colors"]])

    def __eq__(self, other):
        return (
            isinstance(other, OrderedColoring)
            and self.n_vertices == other.n_vertices
            and self.q == other.q
            and self._color == other._color
        )


class ColoredTournament:
    """A q-edge-colored tournament on an explicit label set."""

    def __init__(self, n_vertices: int, q: int, edges: Iterable[tuple[int, int, int]]):
        self.vertices: tuple[int, ...] = tuple(range(1, n_vertices + 1))
        self.q = q
        self._init_from_edges(edges)

    def _init_from_edges(self, edges):
        n = len(self.vertices)
        self._idx = {v: i for i, v in enumerate(self.vertices)}
        self._colmat = [[0] * n for _ in range(n)]
        self._out = [0] * n
        if self.q < 1:
            raise ValueError("palette must be nonempty")
        seen = 0
        for u, v, c in edges:
            if u not in self._idx or v not in self._idx or u == v:
                raise ValueError(f"edge ({u},{v}) references an unknown vertex")
            if not 1 <= c <= self.q:
                raise ValueError(f"color {c} outside [1, {self.q}]")
            i, j = self._idx[u], self._idx[v]
            if self._colmat[i][j]:
                raise ValueError(f"pair ({u},{v}) oriented twice")
            self._colmat[i][j] = self._colmat[j][i] = c
            self._out[i] |= 1 << j
            seen += 1
        if seen != n * (n - 1) // 2:
            raise ValueError("every vertex pair needs exactly one directed edge")

    @classmethod
    def _from_parts(cls, vertices, q, colmat, out) -> "ColoredTournament":
        t = cls.__new__(cls)
        t.vertices = tuple(vertices)
        t.q = q
        t._idx = {v: i for i, v in enumerate(t.vertices)}
        t._colmat = colmat
        t._out = out
        return t

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def has_edge(self, u: int, v: int) -> bool:
        """True iff the pair is oriented u -> v."""
        return bool((self._out[self._idx[u]] >> self._idx[v]) & 1)

    def color(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("no loops")
        return self._colmat[self._idx[u]][self._idx[v]]

    def out_degree(self, u: int) -> int:
        return bin(self._out[self._idx[u]]).count("1")

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Each pair once, as (tail, head, color)."""
        for a in range(len(self.vertices)):
            for b in range(a + 1, len(self.vertices)):
                u, v = self.vertices[a], self.vertices[b]
                if (self._out[a] >> b) & 1:
                    yield u, v, self._colmat[a][b]
                else:
                    yield v, u, self._colmat[a][b]

    def restrict(self, keep: Iterable[int]) -> "ColoredTournament":
        """Induced subtournament on the given labels (labels preserved)."""
        keep_sorted = sorted(keep)
        old = [self._idx[v] for v in keep_sorted]
        n = len(old)
        colmat = [[self._colmat[old[a]][old[b]] for b in range(n)] for a in range(n)]
        out = [0] * n
        for a in range(n):
            for b in range(n):
                if a != b and (self._out[old[a]] >> old[b]) & 1:
                    out[a] |= 1 << b
        return ColoredTournament._from_parts(keep_sorted, self.q, colmat, out)

    def to_json(self) -> dict:
        if self.vertices != tuple(range(1, self.n_vertices + 1)):
            raise ValueError("only 1..N labeled tournaments serialize")
        return {
            "N": self.n_vertices,
            "q": self.q,
            "edges": [[u, v, c] for u, v, c in self.edges()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ColoredTournament":
        return cls(int(data["N"]), int(data["q"]), [tuple(e) for e in data["edges"]])


@dataclass(frozen=True)
class ConsistentOrderedGraph:
    """An ordered graph whose edges are exactly the forward pairs of a tournament."""

    order: tuple[int, ...]
    edges: frozenset[tuple[int, int]]  # pairs sorted by label

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def non_neighbor_count(self, v: int) -> int:
        return sum(1 for w in self.order if w != v and not self.has_edge(v, w))

    def is_consistent_with(self, t: ColoredTournament) -> bool:
        pos = {v: i for i, v in enumerate(self.order)}
        for u in self.order:
            for v in self.order:
                if pos[u] < pos[v] and self.has_edge(u, v) != t.has_edge(u, v):
                    return False
        return True


def backward_edge_count(t: ColoredTournament, order: Sequence[int]) -> int:
    """Pairs placed forward by ``order`` but oriented backward in ``t``."""
    if sorted(order) != sorted(t.vertices):
        raise ValueError("order must be a permutation of the vertex set")
    count = 0
    for i, u in enumerate(order):
        for v in order[i + 1 :]:
            if t.has_edge(v, u):
                count += 1
    return count


def heuristic_transitive_order(t: ColoredTournament, seed: int = 0) -> tuple[int, ...]:
    """Out-degree descending start, then adjacent swaps to local optimality.

    Remaining out-degree ties are broken by a seed-keyed shuffle, so equal
    seeds reproduce equal orders.
    """
    rng = random.Random(seed)
    verts = list(t.vertices)
    rng.shuffle(verts)
    verts.sort(key=lambda v: -t.out_degree(v))
    improved = True
    while improved:
        improved = False
        for i in range(len(verts) - 1):
            if t.has_edge(verts[i + 1], verts[i]):
                verts[i], verts[i + 1] = verts[i + 1], verts[i]
                improved = True
    return tuple(verts)


def exact_min_backward(t: ColoredTournament) -> tuple[int, tuple[int, ...]]:
    """Exact minimum reversal distance to transitivity, by prefix-set DP.

    Memory is 2^N, so this is limited to N <= 12; beyond that only the
    heuristic order's backward count is available, as an upper bound.
    """
    n = t.n_vertices
    if n > 12:
        raise ValueError("exact reversal distance is provided only for N <= 12")
    verts = t.vertices
    # wins[i] = bitmask of j beaten by i
    wins = [0] * n
    for a in range(n):
        for b in range(n):
            if a != b and t.has_edge(verts[a], verts[b]):
                wins[a] |= 1 << b
    size = 1 << n
    INF = float("inf")
    dp = [INF] * size
    choice = [-1] * size
    dp[0] = 0
    for mask in range(size):
        if dp[mask] == INF:
            continue
        rest = ((size - 1) ^ mask)
        m = rest
        while m:
            v_bit = m & -m
            v = v_bit.bit_length() - 1
            # placing v next: later vertices that beat v become backward edges
            cost = bin(rest & ~v_bit & ~wins[v]).count("1")
            new = dp[mask] + cost
            if new < dp[mask | v_bit]:
                dp[mask | v_bit] = new
                choice[mask | v_bit] = v
            m ^= v_bit
    order = []
    mask = size - 1
    while mask:
        v = choice[mask]
        order.append(verts[v])
        mask ^= 1 << v
    order.reverse()
    return int(dp[size - 1]), tuple(order)


def cyclic_triangles(t: ColoredTournament):
    """Count of 3-sets inducing a directed cycle, plus an iterator over them.

    Triangles are yielded once each, in cyclic vertex order starting from the
    smallest label.
    """
    n = t.n_vertices
    full = (1 << n) - 1
    total = 0
    for a in range(n):
        out_a = t._out[a]
        in_a = full & ~out_a & ~(1 << a)
        m = out_a
        while m:
            b_bit = m & -m
            b = b_bit.bit_length() - 1
            total += bin(t._out[b] & in_a).count("1")
            m ^= b_bit
    count = total // 3

    def gen():
        verts = t.vertices
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    u, v, w = verts[i], verts[j], verts[k]
                    if t.has_edge(u, v):
                        if t.has_edge(v, w) and t.has_edge(w, u):
                            yield (u, v, w)
                    else:
                        if t.has_edge(w, v) and t.has_edge(v, u) and t.has_edge(u, w):
                            yield (u, w, v)

    return count, gen()


def canonical_pattern(colors: tuple[int, int, int]) -> tuple[int, int, int]:
    """Lexicographically least cyclic rotation of a triangle's color triple."""
    rots = [colors, colors[1:] + colors[:1], colors[2:] + colors[:2]]
    return min(rots)


def pattern_buckets(t: ColoredTournament) -> dict[tuple[int, int, int], list[tuple[int, int, int]]]:
    """Cyclic triangles grouped by the canonical pattern of their edge colors."""
    buckets: dict[tuple[int, int, int], list[tuple[int, int, int]]] = {}
    _, tris = cyclic_triangles(t)
    for (a, b, c) in tris:
        pat = canonical_pattern((t.color(a, b), t.color(b, c), t.color(c, a)))
        buckets.setdefault(pat, []).append((a, b, c))
    return buckets


def clean_degrees(
    t: ColoredTournament, order: Sequence[int], delta
) -> tuple[ColoredTournament, ConsistentOrderedGraph]:
    """Drop high-backward-degree vertices and expose the forward graph.

    Requires the order to witness delta^2-closeness, i.e. at most
    delta^2 * N0^2 backward edges.  The result keeps at least (1-delta) N0
    vertices and every surviving vertex has at most 4 delta N non-neighbors
    in the returned graph, both guaranteed by construction and re-checkable
    independently.
    """
    delta = Fraction(delta)
    if not Fraction(0) < delta < Fraction(1, 2):
        raise ValueError("delta must lie strictly between 0 and 1/2")
    n0 = t.n_vertices
    back = backward_edge_count(t, order)
    if Fraction(back) > delta * delta * n0 * n0:
        raise ValueError(
            f"order witnesses only {back} backward edges > delta^2 N0^2 = "
            f"{float(delta * delta * n0 * n0):.3f}; closeness precondition fails"
        )
    # backward-pair graph degrees
    deg = {v: 0 for v in order}
    backward_pairs = set()
    for i, u in enumerate(order):
        for v in order[i + 1 :]:
            if t.has_edge(v, u):
                deg[u] += 1
                deg[v] += 1
                backward_pairs.add((min(u, v), max(u, v)))
    threshold = 2 * delta * n0
    kept = [v for v in order if Fraction(deg[v]) <= threshold]
    sub = t.restrict(kept)
    kept_set = set(kept)
    edges = frozenset(
        (min(u, v), max(u, v))
        for i, u in enumerate(kept)
        for v in kept[i + 1 :]
        if (min(u, v), max(u, v)) not in backward_pairs
    )
    graph = ConsistentOrderedGraph(order=tuple(kept), edges=edges)
    assert kept_set == set(sub.vertices)
    return sub, graph


def random_tournament(n_vertices: int, q: int, seed: int = 0) -> ColoredTournament:
    """Uniform orientation and color per pair, from a seeded generator."""
    rng = random.Random(seed)
    edges = []
    for u in range(1, n_vertices + 1):
        for v in range(u + 1, n_vertices + 1):
            c = rng.randint(1, q)
            if rng.random() < 0.5:
                edges.append((u, v, c))
            else:
                edges.append((v, u, c))
    return ColoredTournament(n_vertices, q, edges)


def random_ordered_coloring(n_vertices: int, q: int, seed: int = 0) -> OrderedColoring:
    rng = random.Random(seed)
    return OrderedColoring(
        n_vertices,
        q,
        (
            (u, v, rng.randint(1, q))
            for u in range(1, n_vertices + 1)
            for v in range(u + 1, n_vertices + 1)
        ),
    )
