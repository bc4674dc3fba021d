"""Grid vectors, the at-least-r-coordinates dominance relation, and validation
of increasing sequences and pairwise-comparable sets, with machine-checkable
certificates for every verdict.

All indices exposed by this module are 1-based: coordinate positions run over
1..q, family positions over 1..N, and coordinate values over 1..n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence


class Comparison(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"
    BOTH = "both"
    INCOMPARABLE = "incomparable"


class Verdict(Enum):
    INCREASING = "increasing"
    COMPARABLE = "comparable"
    FAIL_PAIR = "fail_pair"
    CYCLIC_TRIPLE = "cyclic_triple"


@dataclass(frozen=True)
class GridVector:
    """A point of [n]^q; ``coords`` holds q values, each in 1..n."""

    coords: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if not self.coords:
            raise ValueError("a grid vector needs at least one coordinate")
        if self.n < 1:
            raise ValueError("grid side must be positive")
        for c in self.coords:
            if not 1 <= c <= self.n:
                raise ValueError(f"coordinate {c} outside [1, {self.n}]")

    @property
    def q(self) -> int:
        return len(self.coords)


def _check_pair(x: GridVector, y: GridVector, r: int) -> None:
    if x.q != y.q or x.n != y.n:
        raise ValueError(
            f"ambient mismatch: ({x.q},{x.n}) vs ({y.q},{y.n})"
        )
    if not 1 <= r <= x.q:
        raise ValueError(f"threshold r={r} outside [1, {x.q}]")


def less_r(x: GridVector, y: GridVector, r: int) -> bool:
    """True iff y is strictly larger than x in at least r coordinates."""
    _check_pair(x, y, r)
    return sum(1 for a, b in zip(x.coords, y.coords) if a < b) >= r


def compare_r(x: GridVector, y: GridVector, r: int) -> Comparison:
    """Orientation of the pair under the threshold-r dominance relation.

    BOTH is possible only when r <= q/2; a pair related in both directions
    would need 2r strict coordinates split between the two.
    """
    fwd = less_r(x, y, r)
    bwd = less_r(y, x, r)
    if fwd and bwd:
        return Comparison.BOTH
    if fwd:
        return Comparison.FORWARD
    if bwd:
        return Comparison.BACKWARD
    return Comparison.INCOMPARABLE


@dataclass(frozen=True)
class VectorFamily:
    """An ordered list of grid vectors sharing one ambient, with a threshold r."""

    vectors: tuple[GridVector, ...]
    r: int

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(self.vectors))
        if not self.vectors:
            raise ValueError("a family must contain at least one vector")
        q, n = self.vectors[0].q, self.vectors[0].n
        for v in self.vectors:
            if v.q != q or v.n != n:
                raise ValueError("all members must share the same (q, n) ambient")
        if not 1 <= self.r <= q:
            raise ValueError(f"threshold r={self.r} outside [1, {q}]")

    @property
    def q(self) -> int:
        return self.vectors[0].q

    @property
    def n(self) -> int:
        return self.vectors[0].n

    def __len__(self) -> int:
        return len(self.vectors)

    @classmethod
    def from_coords(cls, rows: Iterable[Sequence[int]], r: int, n: int | None = None) -> "VectorFamily":
        rows = [tuple(row) for row in rows]
        if n is None:
            n = max((max(row) for row in rows), default=1)
        return cls(tuple(GridVector(row, n) for row in rows), r)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "r": self.r,
            "vectors": [list(v.coords) for v in self.vectors],
        }

    @classmethod
    def from_json(cls, data: dict) -> "VectorFamily":
        n = int(data["n"])
        vectors = tuple(GridVector(tuple(row), n) for row in data["vectors"])
        fam = cls(vectors, int(data["r"]))
        if fam.q != int(data["q"]):
            raise ValueError("declared q does not match vector width")
        return fam

    def to_csv(self) -> str:
        return "\n".join(",".join(str(c) for c in v.coords) for v in self.vectors) + "\n"

    @classmethod
    def from_csv(cls, text: str, r: int, n: int | None = None) -> "VectorFamily":
        rows = [
            tuple(int(tok) for tok in line.split(","))
            for line in text.splitlines()
            if line.strip()
        ]
        return cls.from_coords(rows, r, n)


@dataclass(frozen=True)
class ComparabilityCertificate:
    """Outcome of a family validation; indices are 1-based family positions.

    FAIL_PAIR carries ``pair`` = (a, b), the lexicographically first offending
    pair.  CYCLIC_TRIPLE carries ``triple`` = (x, y, z) with the dominance
    relation cycling x -> y -> z -> x, and the three coordinate witness sets
    A = {i: x_i < y_i}, B = {i: y_i < z_i}, C = {i: z_i < x_i}.
    """

    verdict: Verdict
    pair: tuple[int, int] | None = None
    triple: tuple[int, int, int] | None = None
    witness_a: frozenset[int] | None = None
    witness_b: frozenset[int] | None = None
    witness_c: frozenset[int] | None = None

    def ok(self) -> bool:
        return self.verdict in (Verdict.INCREASING, Verdict.COMPARABLE)

    def to_json(self) -> dict:
        data: dict = {"verdict": self.verdict.value}
        if self.pair is not None:
            data["pair"] = list(self.pair)
        if self.triple is not None:
            data["triple"] = list(self.triple)
            data["witness_a"] = sorted(self.witness_a)
            data["witness_b"] = sorted(self.witness_b)
            data["witness_c"] = sorted(self.witness_c)
        return data


INCREASING = ComparabilityCertificate(Verdict.INCREASING)
COMPARABLE = ComparabilityCertificate(Verdict.COMPARABLE)


def validate_increasing(fam: VectorFamily) -> ComparabilityCertificate:
    """Check that every earlier vector is below every later one.

    Returns INCREASING, or FAIL_PAIR with the lexicographically first (a, b)
    such that vector a is not below vector b.
    """
    vs, r = fam.vectors, fam.r
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            if not less_r(vs[a], vs[b], r):
                return ComparabilityCertificate(Verdict.FAIL_PAIR, pair=(a + 1, b + 1))
    return INCREASING


def validate_comparable(fam: VectorFamily) -> ComparabilityCertificate:
    """Check that every unordered pair is related in at least one direction.

    Duplicate vectors always fail: an equal pair has no strict coordinate.
    """
    vs, r = fam.vectors, fam.r
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            if compare_r(vs[a], vs[b], r) is Comparison.INCOMPARABLE:
                return ComparabilityCertificate(Verdict.FAIL_PAIR, pair=(a + 1, b + 1))
    return COMPARABLE


def _witness_sets(x: GridVector, y: GridVector, z: GridVector):
    a = frozenset(i + 1 for i, (u, v) in enumerate(zip(x.coords, y.coords)) if u < v)
    b = frozenset(i + 1 for i, (u, v) in enumerate(zip(y.coords, z.coords)) if u < v)
    c = frozenset(i + 1 for i, (u, v) in enumerate(zip(z.coords, x.coords)) if u < v)
    return a, b, c


def find_cyclic_triple(fam: VectorFamily) -> ComparabilityCertificate | None:
    """First (by index tuple) triple whose dominance relation forms a cycle.

    Requires a comparable family.  Returns None when no cycle exists; for
    r > 2q/3 that is always the case, since the three witness sets each have
    size >= r and would share a coordinate i with x_i < y_i < z_i < x_i.
    """
    if not validate_comparable(fam).ok():
        raise ValueError("input family is not comparable")
    vs, r = fam.vectors, fam.r
    m = len(vs)
    for a in range(m):
        for b in range(a + 1, m):
            for c in range(b + 1, m):
                for (i, j, k) in ((a, b, c), (a, c, b)):
                    x, y, z = vs[i], vs[j], vs[k]
                    if less_r(x, y, r) and less_r(y, z, r) and less_r(z, x, r):
                        wa, wb, wc = _witness_sets(x, y, z)
                        return ComparabilityCertificate(
                            Verdict.CYCLIC_TRIPLE,
                            triple=(i + 1, j + 1, k + 1),
                            witness_a=wa,
                            witness_b=wb,
                            witness_c=wc,
                        )
    return None


def transitive_order(fam: VectorFamily):
    """Reorder a comparable family into an increasing one, if possible.

    Returns a tuple of 1-based indices pi such that the family read in that
    order validates as increasing, or a CYCLIC_TRIPLE certificate when no
    such order exists.  Pairs related in both directions are oriented toward
    the higher index; sources are drained smallest index first.
    """
    if not validate_comparable(fam).ok():
        raise ValueError("input family is not comparable")
    vs, r = fam.vectors, fam.r
    m = len(vs)
    # beats[a] = set of b that a must precede
    beats = [set() for _ in range(m)]
    indeg = [0] * m
    for a in range(m):
        for b in range(a + 1, m):
            cmp = compare_r(vs[a], vs[b], r)
            if cmp in (Comparison.FORWARD, Comparison.BOTH):
                beats[a].add(b)
                indeg[b] += 1
            else:
                beats[b].add(a)
                indeg[a] += 1
    order: list[int] = []
    removed = [False] * m
    for _ in range(m):
        src = next((v for v in range(m) if not removed[v] and indeg[v] == 0), None)
        if src is None:
            cert = find_cyclic_triple(fam)
            assert cert is not None  # a stuck drain means the relation has a cycle
            return cert
        removed[src] = True
        order.append(src + 1)
        for w in beats[src]:
            if not removed[w]:
                indeg[w] -= 1
    return tuple(order)


def reordered(fam: VectorFamily, order: Sequence[int]) -> VectorFamily:
    """The same family read in the given 1-based index order."""
    return VectorFamily(tuple(fam.vectors[i - 1] for i in order), fam.r)


def certificate_is_sound(fam: VectorFamily, cert: ComparabilityCertificate) -> bool:
    """Re-check a certificate against the family it was issued for."""
    vs, r = fam.vectors, fam.r
    if cert.verdict is Verdict.FAIL_PAIR:
        # both validators only issue (a, b) when a is not below b
        a, b = cert.pair
        return not less_r(vs[a - 1], vs[b - 1], r)
    if cert.verdict is Verdict.CYCLIC_TRIPLE:
        x, y, z = (vs[i - 1] for i in cert.triple)
        wa, wb, wc = _witness_sets(x, y, z)
        return (
            wa == cert.witness_a
            and wb == cert.witness_b
            and wc == cert.witness_c
            and min(len(wa), len(wb), len(wc)) >= r
            and less_r(x, y, r)
            and less_r(y, z, r)
            and less_r(z, x, r)
        )
    return True


def dumps(fam: VectorFamily) -> str:
    return json.dumps(fam.to_json())


def loads(text: str) -> VectorFamily:
    return VectorFamily.from_json(json.loads(text))
