import json

import pytest

from ramsey_pods.budget import Budget
from ramsey_pods.core import VectorFamily, validate_comparable, validate_increasing
from ramsey_pods.search import (
    EXACT,
    LOWER_BOUND,
    UPPER_BOUND,
    ExtremalRecord,
    cache_compact,
    cache_get,
    cache_put,
    exact_F,
    exact_G,
    exact_f,
    exact_g,
    run_search,
    validate_record,
)

# values pinned by the standalone brute-force oracles
PINNED_F = {(2, 1, 2): 4, (3, 2, 2): 2, (4, 3, 2): 2, (3, 2, 3): 4, (2, 2, 3): 3}
PINNED_G = {(3, 2, 2): 2, (4, 3, 2): 2, (3, 2, 3): 5}
PINNED_f = {
    (2, 1, 2): 2,
    (2, 1, 3): 2,
    (2, 1, 4): 2,
    (2, 1, 5): 3,
    (2, 1, 6): 3,
    (3, 2, 3): 3,
    (3, 2, 4): 3,
    (3, 2, 5): 4,
}
PINNED_g = {(2, 1, 3): 2, (2, 1, 4): 2}


@pytest.mark.parametrize("key,value", sorted(PINNED_F.items()))
def test_exact_F_pinned(key, value):
    rec = exact_F(*key)
    assert rec.status == EXACT
    assert rec.value == value
    assert validate_record(rec) is None


@pytest.mark.parametrize("key,value", sorted(PINNED_G.items()))
def test_exact_G_pinned(key, value):
    rec = exact_G(*key)
    assert rec.status == EXACT
    assert rec.value == value
    assert validate_record(rec) is None


@pytest.mark.parametrize("key,value", sorted(PINNED_f.items()))
def test_exact_f_pinned(key, value):
    rec = exact_f(*key)
    assert rec.status == EXACT
    assert rec.value == value
    assert validate_record(rec) is None


@pytest.mark.parametrize("key,value", sorted(PINNED_g.items()))
def test_exact_g_pinned(key, value):
    rec = exact_g(*key)
    assert rec.status == EXACT
    assert rec.value == value
    assert validate_record(rec) is None


def test_diagonal_families():
    for q in (1, 2, 3, 4):
        for n in (1, 2, 3):
            assert exact_F(q, q, n).value == n
    assert exact_f(3, 3, 5).value == 5
    assert exact_g(2, 2, 4).value == 4
    assert exact_g(3, 3, 1).value == 1
    assert exact_g(3, 1, 1).value == 1


def test_g_equals_f_at_n_five():
    # the only desk-scale probe of whether non-transitive instances can be
    # strictly worse: they are not at this size (g is pinned by the
    # monochromatic floor ceil(sqrt(5)) = 3 = f from below)
    rec_g = exact_g(2, 1, 5)
    rec_f = exact_f(2, 1, 5)
    assert rec_g.status == rec_f.status == EXACT
    assert rec_g.value == rec_f.value == 3


def test_F_strict_below_G_at_two_thirds():
    # r = 2q/3 exactly; the increasing and comparable questions separate
    assert exact_F(3, 2, 3).value == 4
    assert exact_G(3, 2, 3).value == 5


def test_sandwich_bounds():
    for key in PINNED_F:
        if key in PINNED_G:
            assert exact_F(*key).value <= exact_G(*key).value
    assert exact_g(2, 1, 4).value <= exact_f(2, 1, 4).value
    assert exact_g(2, 1, 3).value <= exact_f(2, 1, 3).value


def test_deletion_monotonicity_on_exact_records():
    assert exact_F(3, 2, 2).value <= exact_F(2, 1, 2).value
    assert exact_F(4, 3, 2).value <= exact_F(3, 2, 2).value
    assert exact_G(4, 3, 2).value <= exact_G(3, 2, 2).value


def test_merge_bounds_on_exact_records():
    assert exact_f(3, 2, 4).value >= exact_f(2, 1, 4).value
    assert exact_f(4, 2, 4).value >= exact_f(2, 1, 4).value


def test_witnesses_revalidate():
    rec = exact_F(3, 2, 3)
    fam = VectorFamily.from_json(rec.certificate)
    assert validate_increasing(fam).ok()
    assert len(fam) == rec.value
    rec = exact_G(3, 2, 3)
    fam = VectorFamily.from_json(rec.certificate)
    assert validate_comparable(fam).ok()


def test_budget_downgrades_to_bound():
    rec = exact_F(3, 2, 4, Budget(max_nodes=20))
    assert rec.status == LOWER_BOUND
    assert rec.value >= 1
    assert validate_record(rec) is None
    rec = exact_f(3, 2, 5, Budget(max_nodes=3))
    assert rec.status == UPPER_BOUND
    assert validate_record(rec) is None
    # the downgraded bounds must bracket the true values
    assert rec.value >= PINNED_f[(3, 2, 5)]


def test_open_grid_value_closes():
    # whether the 4-side grid reaches the 8-vector ceiling was left to the
    # oracle; it closes quickly and meets the product-construction bound
    rec = exact_F(3, 2, 4)
    assert rec.status == EXACT
    assert rec.value == 8


def test_invalid_parameters():
    with pytest.raises(ValueError):
        exact_F(2, 3, 2)
    with pytest.raises(ValueError):
        run_search("X", 2, 1, 2)
    with pytest.raises(ValueError):
        exact_f(2, 0, 3)


def test_cache_roundtrip(tmp_path):
    path = tmp_path / "c.jsonl"
    rec = exact_F(2, 1, 2)
    assert cache_put(rec, path)
    got = cache_get("F", 2, 1, 2, path)
    assert got is not None and got.value == 4 and got.status == EXACT
    assert cache_get("F", 9, 9, 9, path) is None


def test_cache_never_weakens_exact(tmp_path):
    path = tmp_path / "c.jsonl"
    cache_put(exact_F(2, 1, 2), path)
    bound = exact_F(2, 1, 2, Budget(max_nodes=1))
    assert bound.status == LOWER_BOUND
    assert not cache_put(bound, path)
    assert cache_get("F", 2, 1, 2, path).status == EXACT


def test_cache_rejects_corrupt_lines(tmp_path):
    path = tmp_path / "c.jsonl"
    cache_put(exact_F(2, 1, 2), path)
    with open(path, "a") as fh:
        fh.write("not json at all\n")
        broken = exact_F(2, 1, 2).to_json()
        broken["value"] = 99  # witness no longer matches
        fh.write(json.dumps(broken) + "\n")
    got = cache_get("F", 2, 1, 2, path)
    assert got is not None and got.value == 4


def test_cache_prefers_strongest_bound(tmp_path):
    path = tmp_path / "c.jsonl"
    weak = exact_F(3, 2, 3, Budget(max_nodes=2))
    strong = exact_F(3, 2, 3, Budget(max_nodes=20))
    assert weak.status == strong.status == LOWER_BOUND
    cache_put(weak, path)
    cache_put(strong, path)
    assert cache_get("F", 3, 2, 3, path).value == max(weak.value, strong.value)


def test_cache_compaction(tmp_path):
    path = tmp_path / "c.jsonl"
    cache_put(exact_F(2, 1, 2), path)
    cache_put(exact_F(2, 2, 2), path)
    cache_put(exact_F(2, 1, 2, Budget(max_nodes=1)), path)  # rejected anyway
    kept = cache_compact(path)
    assert kept == 2
    lines = [l for l in path.read_text().splitlines() if l.strip()]
    assert len(lines) == 2


def test_cache_env_default(tmp_path, monkeypatch):
    target = tmp_path / "env.jsonl"
    monkeypatch.setenv("RAMSEY_PODS_CACHE", str(target))
    rec = run_search("F", 2, 1, 2)
    assert rec.status == EXACT
    assert target.exists()
    assert cache_get("F", 2, 1, 2).value == 4


def test_run_search_uses_cache(tmp_path):
    path = tmp_path / "c.jsonl"
    first = run_search("f", 2, 1, 4, cache=path)
    assert first.status == EXACT
    again = run_search("f", 2, 1, 4, cache=path)
    assert again.to_json() == first.to_json()


def test_record_json_roundtrip():
    rec = exact_g(2, 1, 3)
    assert ExtremalRecord.from_json(rec.to_json()) == rec
