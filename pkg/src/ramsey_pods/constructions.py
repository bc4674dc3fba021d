"""Lower-bound constructions: lexicographic products of colorings, the
digit-mixing product of increasing vector families, the fully balanced
product coloring, and the color-block product attaining m^|S| restricted
path lengths.
"""

from __future__ import annotations

from functools import reduce

from .core import GridVector, VectorFamily, validate_increasing
from .tournament import OrderedColoring


def lex_product(k1: OrderedColoring, k2: OrderedColoring) -> OrderedColoring:
    """Blow every vertex of k2 up to an interval carrying a copy of k1.

    Edges between intervals inherit k2's colors; the longest monotone path
    restricted to any color set S multiplies exactly across the factors.
    """
    if k1.q != k2.q:
        raise ValueError(f"palette mismatch: {k1.q} vs {k2.q}")
    n1, n2 = k1.n_vertices, k2.n_vertices

    def color(u: int, v: int) -> int:
        bu, xu = divmod(u - 1, n1)
        bv, xv = divmod(v - 1, n1)
        if bu == bv:
            return k1.color(xu + 1, xv + 1)
        return k2.color(bu + 1, bv + 1)

    total = n1 * n2
    return OrderedColoring(
        total,
        k1.q,
        ((u, v, color(u, v)) for u in range(1, total + 1) for v in range(u + 1, total + 1)),
    )


def monochromatic_clique(m: int, color: int, q: int) -> OrderedColoring:
    return OrderedColoring(
        m, q, ((u, v, color) for u in range(1, m + 1) for v in range(u + 1, m + 1))
    )


def canonical_coloring(q: int, m: int) -> OrderedColoring:
    """The q-fold product of monochromatic m-cliques in colors 1..q.

    On m^q vertices, the longest monotone path using colors S has length
    exactly m^|S|, which realizes the general N^(r/q) upper bound.
    """
    if q < 1 or m < 1:
        raise ValueError("q and m must be positive")
    if m == 1:
        return OrderedColoring(1, q, [])
    factors = [monochromatic_clique(m, c, q) for c in range(1, q + 1)]
    return reduce(lex_product, factors)


def balance_coloring(k: OrderedColoring) -> OrderedColoring:
    """Product of the q cyclic color shifts of k, equalizing every color.

    The factor for step t recolors c to ((c + t - 2) mod q) + 1.  In the
    result, the longest path avoiding any one color equals the product of
    all q avoidance lengths of k.
    """
    q = k.q
    factors = [
        k.recolored(lambda c, t=t: ((c + t - 2) % q) + 1) for t in range(1, q + 1)
    ]
    return reduce(lex_product, factors)


def product_boost_vectors(a: VectorFamily, b: VectorFamily) -> VectorFamily:
    """Combine two increasing families into one on the product grid.

    Coordinates mix as z_i = (x_i - 1) * n2 + y_i and members are ordered
    lexicographically by (index in a, index in b).  The output is validated
    before being returned.
    """
    if a.q != b.q:
        raise ValueError(f"dimension mismatch: {a.q} vs {b.q}")
    if a.r != b.r:
        raise ValueError(f"threshold mismatch: {a.r} vs {b.r}")
    if not validate_increasing(a).ok() or not validate_increasing(b).ok():
        raise ValueError("both factors must be increasing families")
    n2 = b.n
    n_out = a.n * n2
    vectors = []
    for x in a.vectors:
        for y in b.vectors:
            coords = tuple((xc - 1) * n2 + yc for xc, yc in zip(x.coords, y.coords))
            vectors.append(GridVector(coords, n_out))
    out = VectorFamily(tuple(vectors), a.r)
    cert = validate_increasing(out)
    if not cert.ok():
        raise AssertionError(f"product family failed validation at {cert.pair}")
    return out
