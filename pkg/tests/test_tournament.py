import itertools
import random
from fractions import Fraction

import pytest

from ramsey_pods.tournament import (
    ColoredTournament,
    OrderedColoring,
    backward_edge_count,
    canonical_pattern,
    clean_degrees,
    cyclic_triangles,
    exact_min_backward,
    heuristic_transitive_order,
    pattern_buckets,
    random_tournament,
)


def transitive(n, q=1, color=1):
    return ColoredTournament(
        n, q, ((u, v, color) for u in range(1, n + 1) for v in range(u + 1, n + 1))
    )


def three_cycle(colors=(1, 1, 1), q=1):
    (a, b, c) = colors
    return ColoredTournament(3, q, [(1, 2, a), (2, 3, b), (3, 1, c)])


def brute_min_backward(t):
    return min(
        backward_edge_count(t, perm) for perm in itertools.permutations(t.vertices)
    )


def test_backward_edge_count_examples():
    t = transitive(5)
    order = tuple(range(1, 6))
    assert backward_edge_count(t, order) == 0
    assert backward_edge_count(t, order[::-1]) == 10
    assert brute_min_backward(three_cycle()) == 1


def test_backward_count_complementarity():
    for seed in range(20):
        t = random_tournament(9, 2, seed=seed)
        order = heuristic_transitive_order(t, seed=seed)
        total = 9 * 8 // 2
        assert (
            backward_edge_count(t, order) + backward_edge_count(t, order[::-1])
            == total
        )


def test_backward_edge_count_rejects_non_permutation():
    with pytest.raises(ValueError):
        backward_edge_count(transitive(3), (1, 2))


def test_heuristic_order_on_transitive():
    t = transitive(8)
    order = heuristic_transitive_order(t)
    assert backward_edge_count(t, order) == 0
    assert order == tuple(range(1, 9))


def test_heuristic_order_on_three_cycle():
    t = three_cycle()
    order = heuristic_transitive_order(t)
    assert backward_edge_count(t, order) == 1


def test_heuristic_order_seed_reproducible():
    t = random_tournament(12, 2, seed=5)
    assert heuristic_transitive_order(t, seed=3) == heuristic_transitive_order(t, seed=3)


def test_exact_min_backward_matches_bruteforce():
    for seed in range(12):
        t = random_tournament(6, 2, seed=seed)
        value, order = exact_min_backward(t)
        assert value == brute_min_backward(t)
        assert backward_edge_count(t, order) == value


def test_heuristic_never_beats_exact():
    for seed in range(12):
        t = random_tournament(10, 3, seed=100 + seed)
        exact_value, _ = exact_min_backward(t)
        heur = backward_edge_count(t, heuristic_transitive_order(t))
        assert heur >= exact_value


def test_exact_min_backward_size_cap():
    with pytest.raises(ValueError):
        exact_min_backward(transitive(13))


def test_cyclic_triangles_examples():
    count, tris = cyclic_triangles(transitive(6))
    assert count == 0 and list(tris) == []
    count, tris = cyclic_triangles(three_cycle())
    assert count == 1
    assert list(tris) == [(1, 2, 3)]


def test_triangle_count_identity_and_enumeration():
    for seed in range(15):
        n = random.Random(seed).randint(4, 24)
        t = random_tournament(n, 2, seed=seed)
        count, tris = cyclic_triangles(t)
        listed = list(tris)
        assert len(listed) == count
        identity = _comb3(n) - sum(
            _comb2(t.out_degree(v)) for v in t.vertices
        )
        assert count == identity
        for (a, b, c) in listed:
            assert t.has_edge(a, b) and t.has_edge(b, c) and t.has_edge(c, a)


def _comb2(k):
    return k * (k - 1) // 2


def _comb3(k):
    return k * (k - 1) * (k - 2) // 6


def test_canonical_pattern_rotations():
    assert canonical_pattern((1, 2, 3)) == (1, 2, 3)
    assert canonical_pattern((2, 3, 1)) == (1, 2, 3)
    assert canonical_pattern((3, 1, 2)) == (1, 2, 3)
    assert canonical_pattern((2, 2, 2)) == (2, 2, 2)


def test_pattern_buckets_examples():
    t = three_cycle((1, 2, 3), q=3)
    buckets = pattern_buckets(t)
    assert set(buckets) == {(1, 2, 3)}
    t = three_cycle((2, 3, 1), q=3)
    assert set(pattern_buckets(t)) == {(1, 2, 3)}
    t = three_cycle((2, 2, 2), q=3)
    assert set(pattern_buckets(t)) == {(2, 2, 2)}


def test_pattern_buckets_partition_triangles():
    for seed in range(8):
        t = random_tournament(15, 3, seed=seed)
        count, _ = cyclic_triangles(t)
        buckets = pattern_buckets(t)
        assert sum(len(v) for v in buckets.values()) == count


def test_clean_degrees_transitive_noop():
    t = transitive(10)
    order = tuple(range(1, 11))
    sub, graph = clean_degrees(t, order, Fraction(1, 10))
    assert sub.n_vertices == 10
    assert graph.order == order
    assert all(graph.non_neighbor_count(v) == 0 for v in order)
    assert graph.is_consistent_with(sub)


def test_clean_degrees_single_reversal_under_threshold():
    edges = [
        (v, u, 1) if (u, v) == (4, 5) else (u, v, 1)
        for u in range(1, 11)
        for v in range(u + 1, 11)
    ]
    t = ColoredTournament(10, 1, edges)
    order = tuple(range(1, 11))
    assert backward_edge_count(t, order) == 1
    sub, graph = clean_degrees(t, order, Fraction(2, 5))
    assert sub.n_vertices == 10  # degree 1 <= 2*delta*N = 8, nobody deleted
    assert graph.non_neighbor_count(4) == 1
    assert graph.is_consistent_with(sub)


def test_clean_degrees_postconditions_random():
    rng = random.Random(9)
    for trial in range(15):
        n0 = rng.randint(16, 36)
        delta = Fraction(1, 4)
        budget = int((delta * delta * n0 * n0))
        flips = rng.randint(0, max(0, budget - 1))
        pairs = [(u, v) for u in range(1, n0 + 1) for v in range(u + 1, n0 + 1)]
        flipped = set(rng.sample(pairs, min(flips, len(pairs))))
        edges = [
            (v, u, rng.randint(1, 2)) if (u, v) in flipped else (u, v, rng.randint(1, 2))
            for (u, v) in pairs
        ]
        t = ColoredTournament(n0, 2, edges)
        order = tuple(range(1, n0 + 1))
        sub, graph = clean_degrees(t, order, delta)
        n = sub.n_vertices
        assert Fraction(n) >= (1 - delta) * n0
        pos = {v: i for i, v in enumerate(graph.order)}
        for v in graph.order:
            # independent recount straight from the tournament orientation
            bad = sum(
                1
                for w in graph.order
                if w != v
                and (
                    t.has_edge(w, v) if pos[v] < pos[w] else t.has_edge(v, w)
                )
            )
            assert bad == graph.non_neighbor_count(v)
            assert Fraction(bad) <= 4 * delta * n
        assert graph.is_consistent_with(sub)


def test_clean_degrees_precondition_violation():
    t = three_cycle()
    with pytest.raises(ValueError, match="closeness"):
        clean_degrees(t, (1, 2, 3), Fraction(1, 100))
    with pytest.raises(ValueError, match="delta"):
        clean_degrees(t, (1, 2, 3), Fraction(3, 4))


def test_tournament_json_roundtrip():
    t = random_tournament(7, 3, seed=2)
    again = ColoredTournament.from_json(t.to_json())
    assert again.to_json() == t.to_json()


def test_tournament_validation():
    with pytest.raises(ValueError):
        ColoredTournament(3, 1, [(1, 2, 1), (2, 3, 1)])  # missing pair
    with pytest.raises(ValueError):
        ColoredTournament(3, 1, [(1, 2, 1), (2, 1, 1), (2, 3, 1), (1, 3, 1)])
    with pytest.raises(ValueError):
        ColoredTournament(2, 1, [(1, 2, 2)])  # color out of palette


def test_ordered_coloring_roundtrip_and_tournament_view():
    k = OrderedColoring(4, 2, [(1, 2, 1), (1, 3, 2), (1, 4, 1), (2, 3, 2), (2, 4, 1), (3, 4, 2)])
    assert OrderedColoring.from_json(k.to_json()) == k
    t = k.as_tournament()
    assert all(t.has_edge(u, v) for u, v, _ in k.edges())
    assert all(t.color(u, v) == c for u, v, c in k.edges())


def test_restrict_keeps_labels():
    t = random_tournament(8, 2, seed=3)
    sub = t.restrict([2, 5, 7, 8])
    assert sub.vertices == (2, 5, 7, 8)
    for u in sub.vertices:
        for v in sub.vertices:
            if u != v:
                assert sub.has_edge(u, v) == t.has_edge(u, v)
                assert sub.color(u, v) == t.color(u, v)
