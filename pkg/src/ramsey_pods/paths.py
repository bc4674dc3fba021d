"""Longest color-constrained path computations.

Monotone paths in ordered colorings are handled by a polynomial DP over the
DAG of forward edges.  Directed paths in general tournaments use an exact
subset DP indexed by (vertex set, endpoint); the default 22-vertex cap is a
memory decision (about 22 * 2^22 states).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .budget import Budget, BudgetExceeded
from .tournament import ColoredTournament, OrderedColoring

EXACT_VERTEX_CAP = 22


@dataclass(frozen=True)
class PathConstraint:
    """Either avoid one color or allow an explicit color set."""

    avoid: int | None = None
    allow: frozenset[int] | None = None

    def __post_init__(self):
        if (self.avoid is None) == (self.allow is None):
            raise ValueError("exactly one of avoid/allow must be given")
        if self.allow is not None:
            object.__setattr__(self, "allow", frozenset(self.allow))

    def permits(self, color: int) -> bool:
        if self.avoid is not None:
            return color != self.avoid
        return color in self.allow

    def allowed_set(self, q: int) -> frozenset[int]:
        if self.avoid is not None:
            return frozenset(c for c in range(1, q + 1) if c != self.avoid)
        return self.allow

    def to_json(self) -> dict:
        if self.avoid is not None:
            return {"avoid": self.avoid}
        return {"allow": sorted(self.allow)}

    @classmethod
    def from_json(cls, data: dict) -> "PathConstraint":
        if "avoid" in data:
            return cls(avoid=int(data["avoid"]))
        return cls(allow=frozenset(int(c) for c in data["allow"]))


@dataclass(frozen=True)
class PathCertificate:
    """A monotone or directed path together with its color constraint."""

    mode: str  # "monotone" | "directed"
    constraint: PathConstraint
    vertices: tuple[int, ...]

    def __post_init__(self):
        if self.mode not in ("monotone", "directed"):
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if not self.vertices:
            raise ValueError("a path contains at least one vertex")

    @property
    def length(self) -> int:
        """Path length counts vertices, so a single vertex has length 1."""
        return len(self.vertices)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "constraint": self.constraint.to_json(),
            "vertices": list(self.vertices),
        }

    @classmethod
    def from_json(cls, data: dict) -> "PathCertificate":
        return cls(
            data["mode"],
            PathConstraint.from_json(data["constraint"]),
            tuple(int(v) for v in data["vertices"]),
        )


def validate_path(instance, cert: PathCertificate) -> str | None:
    """Re-check a certificate against its instance; None means valid.

    Checks vertex distinctness and range, monotonicity or edge direction,
    and the color constraint on every step.
    """
    verts = cert.vertices
    if len(set(verts)) != len(verts):
        dup = next(v for i, v in enumerate(verts) if v in verts[:i])
        return f"duplicate vertex {dup}"
    if isinstance(instance, OrderedColoring):
        known = range(1, instance.n_vertices + 1)
        if cert.mode != "monotone":
            return "ordered colorings carry monotone certificates"
    else:
        known = instance.vertices
        if cert.mode == "monotone":
            return "tournaments carry directed certificates"
    for v in verts:
        if v not in known:
            return f"unknown vertex {v}"
    for a, b in zip(verts, verts[1:]):
        if cert.mode == "monotone":
            if not a < b:
                return f"vertices not increasing at ({a},{b})"
            color = instance.color(a, b)
        else:
            if not instance.has_edge(a, b):
                return f"edge ({a},{b}) points the wrong way"
            color = instance.color(a, b)
        if not cert.constraint.permits(color):
            return f"edge ({a},{b}) has forbidden color {color}"
    return None


# ---------------------------------------------------------------------------
# monotone paths


def longest_restricted_monotone(k: OrderedColoring, colors: Iterable[int]) -> PathCertificate:
    """Longest monotone path using only the given colors.

    Among the optimal paths, the lexicographically least vertex sequence is
    returned.
    """
    allowed = frozenset(colors)
    if not allowed:
        raise ValueError("the allowed color set must be nonempty")
    n = k.n_vertices
    # tail[v]: longest allowed monotone path starting at v
    tail = [1] * (n + 1)
    for v in range(n, 0, -1):
        for w in range(v + 1, n + 1):
            if k.color(v, w) in allowed and tail[w] + 1 > tail[v]:
                tail[v] = tail[w] + 1
    best = max(tail[1:])
    path = []
    need = best
    prev = 0
    while need:
        for v in range(prev + 1, n + 1):
            if tail[v] >= need and (not path or k.color(path[-1], v) in allowed):
                path.append(v)
                prev = v
                break
        need -= 1
    return PathCertificate("monotone", PathConstraint(allow=allowed), tuple(path))


def ell_avoid_monotone(k: OrderedColoring, i: int) -> PathCertificate:
    """Longest monotone path avoiding color i."""
    if not 1 <= i <= k.q:
        raise ValueError(f"color {i} outside [1, {k.q}]")
    allowed = frozenset(c for c in range(1, k.q + 1) if c != i)
    if not allowed:
        # single-color palette: only one-vertex paths avoid it
        return PathCertificate("monotone", PathConstraint(avoid=i), (1,))
    cert = longest_restricted_monotone(k, allowed)
    return PathCertificate("monotone", PathConstraint(avoid=i), cert.vertices)


# ---------------------------------------------------------------------------
# directed paths, exact subset DP


def _popcounts(masks: np.ndarray) -> np.ndarray:
    return np.bitwise_count(masks.astype(np.uint64)).astype(np.int64)


class SubsetPathOracle:
    """Exact longest-directed-path queries inside one vertex subset.

    Builds the table start[S, v] = "a directed path with vertex set exactly S
    starts at v", over allowed-colored edges of a tournament restricted to the
    subset.  The mirrored table for paths ending at a vertex is built on the
    reversed orientation.
    """

    def __init__(
        self,
        t: ColoredTournament,
        allowed: frozenset[int],
        vertices: Sequence[int] | None = None,
    ):
        self.t = t
        self.allowed = frozenset(allowed)
        self.labels = tuple(sorted(vertices if vertices is not None else t.vertices))
        n = len(self.labels)
        if n > EXACT_VERTEX_CAP:
            raise BudgetExceeded(
                f"{n} vertices exceed the exact-DP cap of {EXACT_VERTEX_CAP}"
            )
        self.n = n
        self._pos = {v: i for i, v in enumerate(self.labels)}
        adj = [0] * n  # adj[u] bit v set iff u -> v with an allowed color
        for a in range(n):
            for b in range(n):
                if a != b:
                    u, v = self.labels[a], self.labels[b]
                    if t.has_edge(u, v) and t.color(u, v) in self.allowed:
                        adj[a] |= 1 << b
        self._adj = adj
        self._radj = [0] * n
        for a in range(n):
            for b in range(n):
                if (adj[a] >> b) & 1:
                    self._radj[b] |= 1 << a
        self._masks = np.arange(1 << n, dtype=np.int64)
        self._pop = _popcounts(self._masks)
        self._by_pop = [self._masks[self._pop == k] for k in range(n + 1)]
        self._start = self._build(adj)
        self._end = None  # built lazily from the reversed adjacency

    def _build(self, adj: list[int]) -> np.ndarray:
        n = self.n
        h = np.zeros((1 << n, n), dtype=bool)
        for v in range(n):
            h[1 << v, v] = True
        for k in range(1, n):
            mk = self._by_pop[k]
            for v in range(n):
                alive = mk[h[mk, v]]
                if alive.size == 0:
                    continue
                for u in range(n):
                    if u == v or not (adj[u] >> v) & 1:
                        continue
                    fresh = alive[(alive >> u) & 1 == 0]
                    if fresh.size:
                        h[fresh | (1 << u), u] = True
        return h

    def _end_table(self) -> np.ndarray:
        if self._end is None:
            self._end = self._build(self._radj)
        return self._end

    def longest(self) -> int:
        reach = np.any(self._start, axis=1)
        return int(self._pop[reach].max())

    def longest_from(self, v: int) -> int:
        col = self._start[:, self._pos[v]]
        return int(self._pop[col].max())

    def longest_to(self, v: int) -> int:
        col = self._end_table()[:, self._pos[v]]
        return int(self._pop[col].max())

    def lengths_from(self) -> dict[int, int]:
        return {v: self.longest_from(v) for v in self.labels}

    def lengths_to(self) -> dict[int, int]:
        return {v: self.longest_to(v) for v in self.labels}

    def _walk(self, table: np.ndarray, adj: list[int], mask: int, v: int) -> list[int]:
        seq = [v]
        while mask != (1 << v):
            rest = mask ^ (1 << v)
            for u in range(self.n):
                if (rest >> u) & 1 and (adj[v] >> u) & 1 and table[rest, u]:
                    seq.append(u)
                    mask, v = rest, u
                    break
            else:  # pragma: no cover - table construction guarantees a step
                raise RuntimeError("corrupt path table")
        return seq

    def path_from(self, v: int) -> tuple[int, ...]:
        """A longest path starting at v (deterministic choice among optima)."""
        i = self._pos[v]
        col = self._start[:, i]
        target = self._pop[col].max()
        mask = int(self._masks[col & (self._pop == target)][0])
        return tuple(self.labels[u] for u in self._walk(self._start, self._adj, mask, i))

    def path_to(self, v: int) -> tuple[int, ...]:
        """A longest path ending at v (deterministic choice among optima)."""
        i = self._pos[v]
        table = self._end_table()
        col = table[:, i]
        target = self._pop[col].max()
        mask = int(self._masks[col & (self._pop == target)][0])
        rev = self._walk(table, self._radj, mask, i)
        return tuple(self.labels[u] for u in reversed(rev))

    def lex_least_longest(self) -> tuple[int, ...]:
        """The lexicographically least vertex sequence among all optima."""
        best = self.longest()
        path: list[int] = []
        used = 0
        last: int | None = None
        for pos in range(best):
            rem = best - pos
            for c in range(self.n):
                if (used >> c) & 1:
                    continue
                if last is not None and not (self._adj[last] >> c) & 1:
                    continue
                cand = self._masks[(self._pop == rem) & self._start[:, c]]
                if cand.size and bool(np.any((cand & used) == 0)):
                    path.append(c)
                    used |= 1 << c
                    last = c
                    break
            else:  # pragma: no cover - feasibility is exact
                raise RuntimeError("reconstruction failed")
        return tuple(self.labels[c] for c in path)


def greedy_directed_path(
    t: ColoredTournament, allowed: frozenset[int], vertices: Sequence[int] | None = None
) -> tuple[int, ...]:
    """Deterministic greedy extension; a sound lower bound at any size."""
    labels = sorted(vertices if vertices is not None else t.vertices)
    lab_set = set(labels)

    def extend(start: int) -> list[int]:
        path = [start]
        used = {start}
        while True:
            cur = path[-1]
            nxt = None
            nxt_deg = -1
            for w in labels:
                if w in used or not t.has_edge(cur, w) or t.color(cur, w) not in allowed:
                    continue
                deg = sum(
                    1
                    for z in labels
                    if z not in used
                    and z != w
                    and t.has_edge(w, z)
                    and t.color(w, z) in allowed
                )
                if deg > nxt_deg:
                    nxt, nxt_deg = w, deg
            if nxt is None:
                return path
            path.append(nxt)
            used.add(nxt)

    best: list[int] = [labels[0]]
    for s in labels:
        cand = extend(s)
        if len(cand) > len(best):
            best = cand
    assert set(best) <= lab_set
    return tuple(best)


def longest_directed_restricted_exact(
    t: ColoredTournament, colors: Iterable[int], budget: Budget | None = None
) -> PathCertificate:
    """Longest directed path using only the given colors, exactly.

    Raises BudgetExceeded above the vertex cap, carrying a greedy certificate
    as the best-found lower bound.
    """
    allowed = frozenset(colors)
    cap = EXACT_VERTEX_CAP
    if budget is not None and budget.max_nodes is not None:
        # a node here is one DP state; 2^n * n states must fit
        while cap > 1 and (1 << cap) * cap > budget.max_nodes:
            cap -= 1
    if t.n_vertices > cap:
        fallback = greedy_directed_path(t, allowed)
        raise BudgetExceeded(
            f"{t.n_vertices} vertices exceed the exact cap {cap}",
            best=PathCertificate("directed", PathConstraint(allow=allowed), fallback),
        )
    oracle = SubsetPathOracle(t, allowed)
    return PathCertificate(
        "directed", PathConstraint(allow=allowed), oracle.lex_least_longest()
    )


def longest_avoiding_directed_exact(
    t: ColoredTournament, i: int, budget: Budget | None = None
) -> PathCertificate:
    """Longest directed path whose edges avoid color i, exactly."""
    if not 1 <= i <= t.q:
        raise ValueError(f"color {i} outside [1, {t.q}]")
    allowed = frozenset(c for c in range(1, t.q + 1) if c != i)
    if not allowed:
        return PathCertificate("directed", PathConstraint(avoid=i), (min(t.vertices),))
    try:
        cert = longest_directed_restricted_exact(t, allowed, budget)
    except BudgetExceeded as exc:
        if exc.best is not None:
            exc.best = PathCertificate(
                "directed", PathConstraint(avoid=i), exc.best.vertices
            )
        raise
    return PathCertificate("directed", PathConstraint(avoid=i), cert.vertices)


# ---------------------------------------------------------------------------
# avoidance profiles and proof parameters


@dataclass(frozen=True)
class AvoidanceProfile:
    """Per-color longest-avoiding lengths, their truncations, and the product.

    ``m[i]`` is min(ell[i], gamma * N); with a Fraction gamma everything stays
    exact, with a float gamma the truncations are floats.
    """

    ell: tuple[int, ...]
    gamma: Fraction | float
    n_vertices: int
    m: tuple
    product: Fraction | float

    @property
    def q(self) -> int:
        return len(self.ell)


def avoidance_profile(instance, gamma, budget: Budget | None = None) -> AvoidanceProfile:
    """Compute every ell_i, truncate at gamma*N, and take the product."""
    if isinstance(instance, OrderedColoring):
        ells = [
            ell_avoid_monotone(instance, i).length for i in range(1, instance.q + 1)
        ]
        n = instance.n_vertices
    else:
        ells = [
            longest_avoiding_directed_exact(instance, i, budget).length
            for i in range(1, instance.q + 1)
        ]
        n = instance.n_vertices
    cap = gamma * n
    ms = tuple(ell if ell <= cap else cap for ell in ells)
    product = ms[0]
    for m in ms[1:]:
        product = product * m
    return AvoidanceProfile(tuple(ells), gamma, n, ms, product)


@dataclass(frozen=True)
class ProofParameters:
    """The scale parameters used by the interval decomposition.

    gamma = 1 / (2q * 2^sqrt(log2 q)); p = floor(24q / 2^sqrt(log2 q));
    s = floor(2 gamma N) clamped to >= 1; delta = gamma / 8.  Before rounding,
    4 delta N = s / 4.
    """

    q: int
    n_vertices: int
    gamma: float
    p: int
    s: int
    delta: float

    @property
    def raw_s(self) -> float:
        return 2.0 * self.gamma * self.n_vertices


def proof_parameters(q: int, n_vertices: int) -> ProofParameters:
    if q < 2:
        raise ValueError("need at least two colors")
    if n_vertices < 1:
        raise ValueError("need at least one vertex")
    scale = 2.0 ** math.sqrt(math.log2(q))
    gamma = 1.0 / (2.0 * q * scale)
    p = max(1, math.floor(24.0 * q / scale))
    s = max(1, math.floor(2.0 * gamma * n_vertices))
    delta = gamma / 8.0
    return ProofParameters(q, n_vertices, gamma, p, s, delta)
