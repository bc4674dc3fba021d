"""Reductions between the vector world and the coloring world, and the
color-merging maps relating different palette sizes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import GridVector, VectorFamily, validate_increasing
from .tournament import ColoredTournament, OrderedColoring


def coloring_to_vectors(k: OrderedColoring) -> VectorFamily:
    """Record, per vertex, the longest avoiding monotone path ending there.

    Vertex a becomes the vector whose i-th entry is the length of the longest
    monotone path ending at a that avoids color i.  The resulting family is
    (q-1)-increasing: an edge (a, b) of color c strictly grows every entry
    except possibly the c-th.
    """
    n, q = k.n_vertices, k.q
    if q < 2:
        raise ValueError("the vector translation needs at least two colors")
    # ending[i][v] = longest monotone path avoiding color i that ends at v
    ending = [[1] * (n + 1) for _ in range(q + 1)]
    for v in range(1, n + 1):
        for u in range(1, v):
            c = k.color(u, v)
            for i in range(1, q + 1):
                if i != c and ending[i][u] + 1 > ending[i][v]:
                    ending[i][v] = ending[i][u] + 1
    side = max(max(row[1:]) for row in ending[1:])
    vectors = tuple(
        GridVector(tuple(ending[i][v] for i in range(1, q + 1)), side)
        for v in range(1, n + 1)
    )
    fam = VectorFamily(vectors, max(1, q - 1))
    cert = validate_increasing(fam)
    if not cert.ok():
        raise AssertionError(f"derived family failed validation at {cert.pair}")
    return fam


def vectors_to_coloring(fam: VectorFamily) -> OrderedColoring:
    """Color edge (a, b) by the unique stalled coordinate, defaulting to 1.

    Requires a (q-1)-increasing family; a coordinate i is stalled on (a, b)
    when x_a[i] >= x_b[i], and at most one can stall.  In the output, any
    monotone path avoiding some color has strictly increasing entries in that
    coordinate, so its length is bounded by the family's grid side.
    """
    q = fam.q
    if fam.r != q - 1:
        raise ValueError(f"expected threshold q-1={q - 1}, got {fam.r}")
    if not validate_increasing(fam).ok():
        raise ValueError("family is not (q-1)-increasing")
    n_vertices = len(fam.vectors)

    def edge_color(a: int, b: int) -> int:
        xa, xb = fam.vectors[a - 1].coords, fam.vectors[b - 1].coords
        stalled = [i + 1 for i in range(q) if xa[i] >= xb[i]]
        return stalled[0] if stalled else 1

    return OrderedColoring(
        n_vertices,
        q,
        (
            (a, b, edge_color(a, b))
            for a in range(1, n_vertices + 1)
            for b in range(a + 1, n_vertices + 1)
        ),
    )


@dataclass(frozen=True)
class ColorPartition:
    """A surjective map from an old palette onto block labels 1..q'."""

    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "blocks", tuple(frozenset(b) for b in self.blocks)
        )
        seen: set[int] = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block")
            if seen & b:
                raise ValueError("blocks overlap")
            seen |= b
        if seen != set(range(1, len(seen) + 1)):
            raise ValueError("blocks must cover exactly 1..q")

    @property
    def q_old(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def q_new(self) -> int:
        return len(self.blocks)

    def block_of(self, color: int) -> int:
        for label, b in enumerate(self.blocks, start=1):
            if color in b:
                return label
        raise ValueError(f"color {color} not covered")

    def pull_back(self, new_colors) -> frozenset[int]:
        """Original colors represented by a set of block labels."""
        out: set[int] = set()
        for label in new_colors:
            out |= self.blocks[label - 1]
        return frozenset(out)

    def to_json(self) -> dict:
        return {"blocks": [sorted(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, data: dict) -> "ColorPartition":
        return cls(tuple(frozenset(int(c) for c in b) for b in data["blocks"]))


def merge_colors(instance, partition: ColorPartition):
    """Replace every edge color by its block label.

    Works on both ordered colorings and tournaments.  A path using at most
    r' block labels uses at most the sum of those blocks' sizes original
    colors.
    """
    if partition.q_old != instance.q:
        raise ValueError(
            f"partition covers {partition.q_old} colors, instance has {instance.q}"
        )
    if isinstance(instance, OrderedColoring):
        return OrderedColoring(
            instance.n_vertices,
            partition.q_new,
            ((u, v, partition.block_of(c)) for u, v, c in instance.edges()),
        )
    if isinstance(instance, ColoredTournament):
        return ColoredTournament(
            instance.n_vertices,
            partition.q_new,
            ((u, v, partition.block_of(c)) for u, v, c in instance.edges()),
        )
    raise TypeError(f"cannot merge colors of {type(instance).__name__}")


def floor_reduction(q: int, r: int) -> tuple[int, ColorPartition]:
    """The palette-shrinking partition behind the floor(q/(q-r)) bound.

    With p = floor(q/(q-r)) and t = q - p(q-r), the last t+1 colors are first
    merged into one, and the q-t resulting pseudo-colors are grouped into p
    consecutive blocks of size q-r; the merged pseudo-color sits inside the
    last block.  Requires q > r >= 1 and p >= 2.
    """
    if not q > r >= 1:
        raise ValueError("need q > r >= 1")
    p = q // (q - r)
    if p < 2:
        raise ValueError(f"p = {p} < 2: the reduction needs r > q/2")
    t = q - p * (q - r)
    width = q - r
    blocks = []
    cursor = 1
    for _ in range(p - 1):
        blocks.append(frozenset(range(cursor, cursor + width)))
        cursor += width
    blocks.append(frozenset(range(cursor, q + 1)))  # absorbs the merged t+1 tail
    assert len(blocks[-1]) == width + t
    return p, ColorPartition(tuple(blocks))
