"""Proof-derived path finders for general edge-colored tournaments.

Two families of algorithms live here.  The triangle-pattern builder extracts
a long directed path using at most three colors from any tournament with
cyclic triangles, by bucketing cyclic triangles by their rotated color
pattern, peeling weakly supported edges, and growing the path greedily; its
output is the square of a path (consecutive edges forward, distance-two
edges backward) with colors periodic with period three.

The recursive finder realizes the interval decomposition: order the
vertices, clean high-backward-degree vertices, split colors into long and
short by the gamma*N threshold, rank top in/out path endpoints near the
midpoint, glue matched halves through a non-avoided forward edge, and, when
enough colors are diffuse on the left, chain blocks of their top endpoints
through anchor vertices.  At desk scale these are heuristics; every returned
path is re-validated, never trusted.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .paths import (
    EXACT_VERTEX_CAP,
    PathCertificate,
    PathConstraint,
    ProofParameters,
    SubsetPathOracle,
    proof_parameters,
    validate_path,
)
from .tournament import (
    ColoredTournament,
    ConsistentOrderedGraph,
    backward_edge_count,
    clean_degrees,
    heuristic_transitive_order,
    pattern_buckets,
)


class NoCyclicTriangles(Exception):
    pass


class SupportTooHigh(Exception):
    pass


class DegenerateScale(Exception):
    pass


class NotDiffuse(Exception):
    pass


class AuditFailed(Exception):
    def __init__(self, message: str, offender=None):
        super().__init__(message)
        self.offender = offender


# ---------------------------------------------------------------------------
# triangle-pattern path builder


@dataclass(frozen=True)
class PatternPathResult:
    certificate: PathCertificate
    pattern: tuple[int, int, int]


def _peel(
    triangles: list[tuple[int, int, int]], min_support: int
) -> tuple[list[int], set[tuple[int, int]]]:
    """Drop edges lying in fewer than min_support triangles, cascading."""
    edge_tris: dict[tuple[int, int], list[int]] = {}
    tri_edges = []
    for idx, (a, b, c) in enumerate(triangles):
        es = [(a, b), (b, c), (c, a)]
        tri_edges.append(es)
        for e in es:
            edge_tris.setdefault(e, []).append(idx)
    alive_tri = [True] * len(triangles)
    support = {e: len(ts) for e, ts in edge_tris.items()}
    dead_edges: set[tuple[int, int]] = set()
    queue = [e for e, s in support.items() if s < min_support]
    while queue:
        e = queue.pop()
        if e in dead_edges:
            continue
        dead_edges.add(e)
        for idx in edge_tris[e]:
            if not alive_tri[idx]:
                continue
            alive_tri[idx] = False
            for other in tri_edges[idx]:
                if other == e or other in dead_edges:
                    continue
                support[other] -= 1
                if support[other] < min_support:
                    queue.append(other)
    alive = [i for i, ok in enumerate(alive_tri) if ok]
    alive_edges = {e for e in edge_tris if e not in dead_edges}
    return alive, alive_edges


def three_color_path(
    t: ColoredTournament, min_support: int | None = None
) -> PatternPathResult:
    """Grow a period-3 patterned path through well-supported cyclic triangles.

    Picks the largest canonical-pattern bucket, peels edges lying in fewer
    than min_support triangles of that pattern (min_support=None binary
    searches the largest threshold that leaves any triangle), then greedily
    appends vertices completing a pattern triangle with the last two.
    """
    buckets = pattern_buckets(t)
    if not buckets:
        raise NoCyclicTriangles("the tournament is transitive")
    pattern = min(buckets, key=lambda p: (-len(buckets[p]), p))
    triangles = buckets[pattern]
    if min_support is None:
        lo, hi = 1, max(len(triangles), 1)
        # largest m whose peel is nonempty
        best = 1
        while lo <= hi:
            mid = (lo + hi) // 2
            alive, _ = _peel(triangles, mid)
            if alive:
                best = mid
                lo = mid + 1
            else:
                hi = mid - 1
        min_support = best
    alive_idx, alive_edges = _peel(triangles, min_support)
    if not alive_idx:
        raise SupportTooHigh(
            f"support threshold {min_support} deletes every edge"
        )

    def rotations(tri):
        a, b, c = tri
        return ((a, b, c), (b, c, a), (c, a, b))

    start = None
    for idx in alive_idx:
        for rot in rotations(triangles[idx]):
            x, y, z = rot
            colors = (t.color(x, y), t.color(y, z), t.color(z, x))
            if colors == pattern and (start is None or rot < start):
                start = rot
    assert start is not None
    path = list(start)
    used = set(path)
    while True:
        prev, cur = path[-2], path[-1]
        k = len(path)  # next edge color index: pattern[(k - 1) % 3]
        c_next = pattern[(k - 1) % 3]
        c_back = pattern[k % 3]
        found = None
        for w in t.vertices:
            if w in used:
                continue
            if (
                (cur, w) in alive_edges
                and (w, prev) in alive_edges
                and t.color(cur, w) == c_next
                and t.color(w, prev) == c_back
            ):
                found = w
                break
        if found is None:
            break
        path.append(found)
        used.add(found)
    cert = PathCertificate(
        "directed", PathConstraint(allow=frozenset(pattern)), tuple(path)
    )
    problem = validate_path(t, cert)
    if problem is not None:
        raise AuditFailed(f"pattern path failed validation: {problem}")
    return PatternPathResult(cert, pattern)


def audit_pattern_path(t: ColoredTournament, cert: PathCertificate) -> str | None:
    """Square-of-path audit: forward steps, backward skips, period 3."""
    problem = validate_path(t, cert)
    if problem is not None:
        return problem
    verts = cert.vertices
    colors = [t.color(a, b) for a, b in zip(verts, verts[1:])]
    if len(set(colors)) > 3:
        return f"{len(set(colors))} distinct colors on the path"
    for j in range(len(colors) - 3):
        if colors[j] != colors[j + 3]:
            return f"colors not 3-periodic at edge {j + 1}"
    for j in range(len(verts) - 2):
        if not t.has_edge(verts[j + 2], verts[j]):
            return f"distance-two pair ({verts[j]},{verts[j + 2]}) not backward"
    return None


# ---------------------------------------------------------------------------
# maximal-acyclic-subgraph levels: estimator and merged-color baseline


def _level_paths(
    t: ColoredTournament,
    allowed: frozenset[int],
    vertices: tuple[int, ...],
):
    """Longest-path levels of a maximal acyclic subgraph of allowed edges.

    Returns (levels, parents) keyed by label.  The level of v is the vertex
    count of the longest path ending at v inside the subgraph, so levels
    properly color the allowed edge set and max(levels) realizes an actual
    directed path.
    """
    m = len(vertices)
    pos = {v: i for i, v in enumerate(vertices)}
    adj = [0] * m  # D restricted to the subset
    for a in range(m):
        for b in range(m):
            if a != b:
                u, v = vertices[a], vertices[b]
                if t.has_edge(u, v) and t.color(u, v) in allowed:
                    adj[a] |= 1 << b
    keep = [0] * m  # maximal acyclic subgraph, starts from forward edges
    for a in range(m):
        forward_mask = ~((1 << (a + 1)) - 1)
        keep[a] = adj[a] & forward_mask

    def reachable(src: int, dst: int) -> bool:
        seen = 1 << src
        stack = [src]
        while stack:
            x = stack.pop()
            if x == dst:
                return True
            fresh = keep[x] & ~seen
            seen |= fresh
            while fresh:
                bit = fresh & -fresh
                stack.append(bit.bit_length() - 1)
                fresh ^= bit
        return False

    for a in range(m):
        back = adj[a] & ((1 << a) - 1)
        while back:
            bit = back & -back
            b = bit.bit_length() - 1
            back ^= bit
            if not reachable(b, a):
                keep[a] |= bit
    # Kahn topological order of the kept DAG, smallest position first
    indeg = [0] * m
    for a in range(m):
        mm = keep[a]
        while mm:
            bit = mm & -mm
            indeg[bit.bit_length() - 1] += 1
            mm ^= bit
    ready = sorted(i for i in range(m) if indeg[i] == 0)
    topo = []
    while ready:
        x = ready.pop(0)
        topo.append(x)
        mm = keep[x]
        inserts = []
        while mm:
            bit = mm & -mm
            y = bit.bit_length() - 1
            indeg[y] -= 1
            if indeg[y] == 0:
                inserts.append(y)
            mm ^= bit
        ready = sorted(ready + inserts)
    level = [1] * m
    parent = [-1] * m
    for x in topo:
        mm = keep[x]
        while mm:
            bit = mm & -mm
            y = bit.bit_length() - 1
            if level[x] + 1 > level[y] or (
                level[x] + 1 == level[y] and (parent[y] == -1 or x < parent[y])
            ):
                level[y] = level[x] + 1
                parent[y] = x
            mm ^= bit
    levels = {vertices[i]: level[i] for i in range(m)}
    parents = {vertices[i]: (vertices[parent[i]] if parent[i] >= 0 else None) for i in range(m)}
    return levels, parents


def _level_path_to(levels, parents, v) -> tuple[int, ...]:
    seq = [v]
    while parents[seq[-1]] is not None:
        seq.append(parents[seq[-1]])
    return tuple(reversed(seq))


def merged_color_baseline(t: ColoredTournament) -> tuple[int, PathCertificate]:
    """Best avoiding path over monochromatic and two-color merged classes.

    Scanning every singleton and pair dominates the fixed merge used by the
    pigeonhole guarantee, so the result is always at least ceil(N^(1/(q-1)))
    on q >= 3 palettes and ceil(sqrt(N)) for q = 2.
    """
    q = t.q
    verts = tuple(sorted(t.vertices))
    if q == 1:
        cert = PathCertificate("directed", PathConstraint(avoid=1), (verts[0],))
        return 1, cert
    classes = [frozenset({c}) for c in range(1, q + 1)]
    if q >= 3:
        classes += [
            frozenset({a, b})
            for a in range(1, q + 1)
            for b in range(a + 1, q + 1)
        ]
    best: tuple[int, PathCertificate] | None = None
    for cls in classes:
        avoided = min(c for c in range(1, q + 1) if c not in cls)
        levels, parents = _level_paths(t, cls, verts)
        top = max(levels.values())
        v = min(u for u, lv in levels.items() if lv == top)
        cert = PathCertificate(
            "directed", PathConstraint(avoid=avoided), _level_path_to(levels, parents, v)
        )
        key = (-cert.length, avoided, cert.vertices)
        if best is None or key < (-best[1].length, best[0], best[1].vertices):
            best = (avoided, cert)
    assert validate_path(t, best[1]) is None
    return best


# ---------------------------------------------------------------------------
# classification of colors over the four intervals


@dataclass(frozen=True)
class ColorClassification:
    """Interval split, long/short colors, and ranked endpoint sets.

    ``ell_in[i][v]`` is the (exact or estimated) length of the longest
    i-avoiding path inside the left half ending at v, ``x_sets[i]`` the s
    best such endpoints; mirrored for the right half.  Paths witnessing the
    recorded lengths are kept for every ranked endpoint.
    """

    order: tuple[int, ...]
    params: ProofParameters
    graph: ConsistentOrderedGraph
    interval_a: tuple[int, ...]
    interval_b: tuple[int, ...]
    interval_c: tuple[int, ...]
    interval_d: tuple[int, ...]
    ell: dict[int, int]
    long_colors: frozenset[int]
    x_sets: dict[int, tuple[int, ...]]
    y_sets: dict[int, tuple[int, ...]]
    ell_in: dict[int, dict[int, int]] = field(repr=False)
    ell_out: dict[int, dict[int, int]] = field(repr=False)
    in_paths: dict[int, dict[int, tuple[int, ...]]] = field(repr=False)
    out_paths: dict[int, dict[int, tuple[int, ...]]] = field(repr=False)
    left_condensed: dict[int, bool] = field(default_factory=dict)
    right_condensed: dict[int, bool] = field(default_factory=dict)
    exact: bool = True

    @property
    def short_colors(self) -> list[int]:
        q = self.params.q
        return [c for c in range(1, q + 1) if c not in self.long_colors]

    @property
    def condensed(self) -> list[int]:
        return [
            c
            for c in self.short_colors
            if self.left_condensed[c] and self.right_condensed[c]
        ]

    @property
    def left_diffuse(self) -> list[int]:
        return [c for c in self.short_colors if not self.left_condensed[c]]


def _half_endpoint_data(t, allowed, half: tuple[int, ...], incoming: bool):
    """(lengths, paths) for best avoiding paths ending (or starting) per vertex."""
    if len(half) <= EXACT_VERTEX_CAP:
        oracle = SubsetPathOracle(t, allowed, half)
        if incoming:
            lengths = oracle.lengths_to()
            paths = {v: oracle.path_to(v) for v in half}
        else:
            lengths = oracle.lengths_from()
            paths = {v: oracle.path_from(v) for v in half}
        return lengths, paths, True
    if incoming:
        levels, parents = _level_paths(t, allowed, half)
        paths = {v: _level_path_to(levels, parents, v) for v in half}
        return levels, paths, False
    # starting lengths: the level method on the reversed orientation and order
    levels, parents = _level_paths(_Reversed(t), allowed, tuple(reversed(half)))
    paths = {
        v: tuple(reversed(_level_path_to(levels, parents, v))) for v in half
    }
    return levels, paths, False


class _Reversed:
    """Orientation-reversed view of a tournament (colors unchanged)."""

    def __init__(self, t: ColoredTournament):
        self._t = t
        self.vertices = t.vertices
        self.q = t.q

    def has_edge(self, u, v):
        return self._t.has_edge(v, u)

    def color(self, u, v):
        return self._t.color(u, v)


def classify_colors(
    t: ColoredTournament,
    order,
    params: ProofParameters,
    graph: ConsistentOrderedGraph | None = None,
) -> ColorClassification:
    """Split colors by length and rank endpoint sets over four intervals.

    The order is cut into A|B|C|D with |B| = |C| = 4s around the midpoint;
    requires at least 16s vertices.  Endpoint ranking ties break by vertex
    label ascending.
    """
    order = tuple(order)
    n = len(order)
    s = params.s
    if n < 16 * s:
        raise DegenerateScale(f"{n} vertices < 16s = {16 * s}")
    if sorted(order) != sorted(t.vertices):
        raise ValueError("order must be a permutation of the vertex set")
    if graph is None:
        edges = frozenset(
            (min(u, v), max(u, v))
            for i, u in enumerate(order)
            for v in order[i + 1 :]
            if t.has_edge(u, v)
        )
        graph = ConsistentOrderedGraph(order=order, edges=edges)
    h = n // 2
    interval_a = order[: h - 4 * s]
    interval_b = order[h - 4 * s : h]
    interval_c = order[h : h + 4 * s]
    interval_d = order[h + 4 * s :]
    left = interval_a + interval_b
    right = interval_c + interval_d
    q = params.q
    ell: dict[int, int] = {}
    long_colors = set()
    x_sets: dict[int, tuple[int, ...]] = {}
    y_sets: dict[int, tuple[int, ...]] = {}
    ell_in: dict[int, dict[int, int]] = {}
    ell_out: dict[int, dict[int, int]] = {}
    in_paths: dict[int, dict[int, tuple[int, ...]]] = {}
    out_paths: dict[int, dict[int, tuple[int, ...]]] = {}
    all_exact = True
    for i in range(1, q + 1):
        allowed = frozenset(c for c in range(1, q + 1) if c != i)
        if allowed:
            if n <= EXACT_VERTEX_CAP:
                ell[i] = SubsetPathOracle(t, allowed).longest()
            else:
                levels, _ = _level_paths(t, allowed, tuple(sorted(t.vertices)))
                ell[i] = max(levels.values())
                all_exact = False
            lengths_in, paths_in, exact_l = _half_endpoint_data(t, allowed, left, True)
            lengths_out, paths_out, exact_r = _half_endpoint_data(t, allowed, right, False)
            all_exact = all_exact and exact_l and exact_r
        else:
            ell[i] = 1
            lengths_in = {v: 1 for v in left}
            paths_in = {v: (v,) for v in left}
            lengths_out = {v: 1 for v in right}
            paths_out = {v: (v,) for v in right}
        if ell[i] >= params.gamma * n:
            long_colors.add(i)
        ranked_left = sorted(left, key=lambda v: (-lengths_in[v], v))
        ranked_right = sorted(right, key=lambda v: (-lengths_out[v], v))
        x_sets[i] = tuple(ranked_left[:s])
        y_sets[i] = tuple(ranked_right[:s])
        ell_in[i] = lengths_in
        ell_out[i] = lengths_out
        in_paths[i] = {v: paths_in[v] for v in x_sets[i]}
        out_paths[i] = {v: paths_out[v] for v in y_sets[i]}
    left_condensed = {}
    right_condensed = {}
    b_set, c_set = set(interval_b), set(interval_c)
    for i in range(1, q + 1):
        if i in long_colors:
            continue
        left_condensed[i] = 2 * len(set(x_sets[i]) & b_set) >= s
        right_condensed[i] = 2 * len(set(y_sets[i]) & c_set) >= s
    return ColorClassification(
        order=order,
        params=params,
        graph=graph,
        interval_a=interval_a,
        interval_b=interval_b,
        interval_c=interval_c,
        interval_d=interval_d,
        ell=ell,
        long_colors=frozenset(long_colors),
        x_sets=x_sets,
        y_sets=y_sets,
        ell_in=ell_in,
        ell_out=ell_out,
        in_paths=in_paths,
        out_paths=out_paths,
        left_condensed=left_condensed,
        right_condensed=right_condensed,
        exact=all_exact,
    )


# ---------------------------------------------------------------------------
# gluing structure


@dataclass(frozen=True)
class GluingStructure:
    """Anchors interleaved with blocks, wired by diffuse-colored edges."""

    anchors: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    delta_l: frozenset[int]
    s: int

    @property
    def t(self) -> int:
        return len(self.blocks)


def audit_gluing(
    t: ColoredTournament, order, structure: GluingStructure
) -> str | None:
    """Independent re-check of all four structural invariants."""
    pos = {v: i for i, v in enumerate(order)}
    anchors, blocks = structure.anchors, structure.blocks
    if len(anchors) != len(blocks) + 1:
        return "anchor/block counts disagree"
    seen: set[int] = set(anchors)
    if len(seen) != len(anchors):
        return "repeated anchor"
    for a, block in enumerate(blocks):
        if not block:
            return f"block {a + 1} is empty"
        if len(block) < structure.s:
            return f"block {a + 1} smaller than s = {structure.s}"
        if set(block) & seen:
            return f"block {a + 1} overlaps earlier vertices"
        seen |= set(block)
        for v in block:
            if not (pos[anchors[a]] < pos[v] < pos[anchors[a + 1]]):
                return f"vertex {v} breaks the interleaving order"
            if not t.has_edge(anchors[a], v):
                return f"edge ({anchors[a]},{v}) not directed anchor to block"
            if t.color(anchors[a], v) not in structure.delta_l:
                return f"edge ({anchors[a]},{v}) colored outside the diffuse set"
            if not t.has_edge(v, anchors[a + 1]):
                return f"edge ({v},{anchors[a + 1]}) not directed block to anchor"
            if t.color(v, anchors[a + 1]) not in structure.delta_l:
                return f"edge ({v},{anchors[a + 1]}) colored outside the diffuse set"
    return None


def build_gluing(
    t: ColoredTournament, order, classification: ColorClassification
) -> GluingStructure:
    """Anchor/block chain through the left-diffuse top endpoint sets.

    Follows the recursive construction: after each anchor take the next 4s
    vertices of U as candidates, the following 8s as anchor candidates,
    drop the current anchor's exceptional set, and pick the next anchor
    with few exceptional hits.  The result is audited edge by edge.
    """
    params = classification.params
    p, s = params.p, params.s
    diffuse = classification.left_diffuse
    if len(diffuse) < p:
        raise NotDiffuse(f"{len(diffuse)} left-diffuse colors < p = {p}")
    delta_l = tuple(sorted(diffuse)[:p])
    pos = {v: i for i, v in enumerate(order)}
    a_set = set(classification.interval_a)
    iota: dict[int, int] = {}
    for i in delta_l:
        for v in classification.x_sets[i]:
            if v in a_set and v not in iota:
                iota[v] = i
    u_all = sorted(iota, key=lambda v: pos[v])
    if not u_all:
        raise NotDiffuse("no ranked endpoints fall inside the first interval")

    graph = classification.graph

    def exceptional(v: int) -> set[int]:
        i = iota[v]
        bad = set(classification.in_paths[i].get(v, (v,)))
        bad.update(
            w
            for w in classification.interval_a + classification.interval_b
            if w != v and not graph.has_edge(v, w)
        )
        bad.update(classification.x_sets[i])
        return bad

    anchors = [u_all[0]]
    blocks: list[tuple[int, ...]] = []
    cursor = 0
    while True:
        rest = u_all[cursor + 1 :]
        if len(rest) < 12 * s:
            break
        i_cand = rest[: 4 * s]
        j_cand = rest[4 * s : 12 * s]
        exc_anchor = exceptional(anchors[-1])
        i_prime = [v for v in i_cand if v not in exc_anchor]
        if not i_prime:
            break
        exc_map = {v: exceptional(v) for v in i_prime}
        degrees = {w: sum(1 for v in i_prime if w in exc_map[v]) for w in j_cand}
        pick = next((w for w in j_cand if degrees[w] <= s), None)
        if pick is None:
            pick = min(j_cand, key=lambda w: (degrees[w], pos[w]))
        block = tuple(v for v in i_prime if pick not in exc_map[v])
        if not block:
            break
        blocks.append(block)
        anchors.append(pick)
        cursor = u_all.index(pick)
    structure = GluingStructure(
        anchors=tuple(anchors),
        blocks=tuple(blocks),
        delta_l=frozenset(delta_l),
        s=s,
    )
    problem = audit_gluing(t, order, structure)
    if problem is not None:
        raise AuditFailed(f"gluing audit failed: {problem}", offender=problem)
    return structure


# ---------------------------------------------------------------------------
# the recursive color-avoiding driver


def _driver_params(q: int, n: int) -> ProofParameters:
    """Formula parameters squeezed into the viable desk-scale window.

    The diffuse-set size is capped at the palette and the ranking size at
    n // 16 (the classification needs 16s vertices); the classification and
    gluing machinery stays a certificate-checked heuristic either way.
    """
    p = proof_parameters(q, n)
    s_eff = max(1, min(p.s, n // 16))
    return ProofParameters(q, n, p.gamma, min(p.p, q), s_eff, p.delta)


def _best_avoiding_in_subset(t, avoid: int, subset) -> tuple[int, ...]:
    allowed = frozenset(c for c in range(1, t.q + 1) if c != avoid)
    subset = tuple(sorted(subset))
    if not allowed:
        return (subset[0],)
    if len(subset) <= EXACT_VERTEX_CAP:
        oracle = SubsetPathOracle(t, allowed, subset)
        best_v = max(subset, key=lambda v: (oracle.longest_to(v), -v))
        return oracle.path_to(best_v)
    levels, parents = _level_paths(t, allowed, subset)
    top = max(levels.values())
    v = min(u for u, lv in levels.items() if lv == top)
    return _level_path_to(levels, parents, v)


def _measured_delta(back: int, n: int, floor_delta: float) -> Fraction | None:
    """Smallest workable rational delta covering the observed backwardness."""
    if back == 0:
        cand = Fraction(1, 4 * n)
    else:
        root = math.isqrt(back)
        if root * root < back:
            root += 1
        cand = Fraction(root, n)
    formula = Fraction(floor_delta).limit_denominator(10**9)
    delta = max(cand, formula)
    if delta >= Fraction(1, 2):
        return None
    return delta


def recursive_color_avoiding(
    t: ColoredTournament,
    params: ProofParameters | None = None,
    seed: int = 0,
    trace: list | None = None,
) -> tuple[int, PathCertificate]:
    """Best color-avoiding directed path over all proof-derived branches.

    Branches: exact subset DP below the recursion floor; the merged-color
    baseline; the triangle-pattern path when cyclic triangles exist; half
    recursion with midpoint gluing through ranked endpoints; and block
    chaining through a gluing structure when enough colors are left-diffuse.
    The maximum is returned and always re-validated; ties prefer the smaller
    avoided color, then the lexicographically smaller vertex sequence.
    """
    q = t.q
    n = t.n_vertices
    branch_lengths: dict[str, int] = {}
    candidates: list[tuple[int, PathCertificate, str]] = []

    if n <= EXACT_VERTEX_CAP:
        for i in range(1, q + 1):
            allowed = frozenset(c for c in range(1, q + 1) if c != i)
            if allowed:
                verts = SubsetPathOracle(t, allowed).lex_least_longest()
            else:
                verts = (min(t.vertices),)
            cert = PathCertificate("directed", PathConstraint(avoid=i), verts)
            candidates.append((i, cert, "exact"))
        chosen = _select(t, candidates)
        if trace is not None:
            trace.append(
                {
                    "case": "exact",
                    "N": n,
                    "chosen_color": chosen[0],
                    "branch_lengths": {"exact": chosen[1].length},
                }
            )
        return chosen

    base_color, base_cert = merged_color_baseline(t)
    candidates.append((base_color, base_cert, "baseline"))
    branch_lengths["baseline"] = base_cert.length

    try:
        result = three_color_path(t)
        used = set(result.pattern)
        if len(used) < q:
            avoided = min(c for c in range(1, q + 1) if c not in used)
            cert = PathCertificate(
                "directed", PathConstraint(avoid=avoided), result.certificate.vertices
            )
            if validate_path(t, cert) is None:
                candidates.append((avoided, cert, "pattern"))
                branch_lengths["pattern"] = cert.length
    except (NoCyclicTriangles, SupportTooHigh, AuditFailed):
        pass

    order = heuristic_transitive_order(t, seed)
    base_params = params if params is not None else _driver_params(q, n)

    classification = None
    cleaned = None
    back = backward_edge_count(t, order)
    delta = _measured_delta(back, n, base_params.delta)
    if delta is not None:
        try:
            sub_t, graph = clean_degrees(t, order, delta)
            sub_order = tuple(v for v in order if v in set(sub_t.vertices))
            cls_params = (
                params
                if params is not None
                else _driver_params(q, sub_t.n_vertices)
            )
            classification = classify_colors(sub_t, sub_order, cls_params, graph)
            cleaned = (sub_t, sub_order)
        except (DegenerateScale, ValueError):
            classification = None

    if classification is not None:
        sub_t, sub_order = cleaned
        halves = (
            classification.interval_a + classification.interval_b,
            classification.interval_c + classification.interval_d,
        )
        # midpoint gluing: first forward non-i edge between ranked endpoint sets
        b_set = set(classification.interval_b)
        c_set = set(classification.interval_c)
        for i in range(1, q + 1):
            xs = sorted(v for v in classification.x_sets[i] if v in b_set)
            ys = sorted(w for w in classification.y_sets[i] if w in c_set)
            hit = None
            for v in xs:
                for w in ys:
                    if (
                        classification.graph.has_edge(v, w)
                        and sub_t.has_edge(v, w)
                        and sub_t.color(v, w) != i
                    ):
                        hit = (v, w)
                        break
                if hit:
                    break
            if hit is None:
                continue
            v, w = hit
            verts = classification.in_paths[i][v] + classification.out_paths[i][w]
            cert = PathCertificate("directed", PathConstraint(avoid=i), verts)
            if validate_path(t, cert) is None:
                expected = classification.ell_in[i][v] + classification.ell_out[i][w]
                assert cert.length == expected
                candidates.append((i, cert, "case1"))
                branch_lengths["case1"] = max(
                    branch_lengths.get("case1", 0), cert.length
                )
        try:
            structure = build_gluing(sub_t, sub_order, classification)
        except (NotDiffuse, AuditFailed):
            structure = None
        if structure is not None and structure.t >= 1:
            for k in range(1, q + 1):
                if k in structure.delta_l:
                    continue
                chain: list[int] = [structure.anchors[0]]
                for a, block in enumerate(structure.blocks):
                    chain.extend(_best_avoiding_in_subset(sub_t, k, block))
                    chain.append(structure.anchors[a + 1])
                cert = PathCertificate(
                    "directed", PathConstraint(avoid=k), tuple(chain)
                )
                if validate_path(t, cert) is None:
                    candidates.append((k, cert, "case2"))
                    branch_lengths["case2"] = max(
                        branch_lengths.get("case2", 0), cert.length
                    )
    else:
        half = len(order) // 2
        halves = (order[:half], order[half:])

    for side, half_verts in zip(("left", "right"), halves):
        if len(half_verts) >= 2:
            sub = t.restrict(half_verts)
            color, cert = recursive_color_avoiding(sub, params, seed, trace)
            if validate_path(t, cert) is None:
                candidates.append((color, cert, f"recurse_{side}"))
                branch_lengths[f"recurse_{side}"] = cert.length

    chosen = _select(t, candidates)
    if trace is not None:
        case = next(src for c, cert, src in candidates if (c, cert) == chosen)
        trace.append(
            {
                "case": case,
                "N": n,
                "chosen_color": chosen[0],
                "branch_lengths": branch_lengths,
            }
        )
    return chosen


def _select(t, candidates) -> tuple[int, PathCertificate]:
    best = min(
        candidates, key=lambda item: (-item[1].length, item[0], item[1].vertices)
    )
    color, cert = best[0], best[1]
    problem = validate_path(t, cert)
    if problem is not None:
        raise AuditFailed(f"selected certificate failed validation: {problem}")
    return color, cert


def trace_to_jsonl(trace: list) -> str:
    return "\n".join(json.dumps(node) for node in trace) + "\n"
