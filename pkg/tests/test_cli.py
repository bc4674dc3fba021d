import json

import pytest

from ramsey_pods.cli import main
from ramsey_pods.tournament import ColoredTournament, random_tournament


@pytest.fixture()
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("RAMSEY_PODS_CACHE", str(tmp_path / "cache.jsonl"))
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_search_exact_exit_zero(workdir, capsys):
    code, out, _ = run(capsys, "search", "F", "2", "1", "2")
    assert code == 0
    assert "kind,q,r,size,value,status" in out
    assert "F,2,1,2,4,exact" in out


def test_search_json_output(workdir, capsys):
    code, out, _ = run(capsys, "search", "f", "2", "1", "4", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == 2 and payload["status"] == "exact"


def test_search_bound_exit_two(workdir, capsys):
    code, out, _ = run(capsys, "search", "F", "3", "2", "4", "--budget", "5")
    assert code == 2
    assert "lower_bound" in out


def test_search_invalid_exit_one(workdir, capsys):
    code, _, err = run(capsys, "search", "F", "2", "3", "2")
    assert code == 1
    assert "error" in err


def test_search_hits_cache(workdir, capsys):
    run(capsys, "search", "g", "2", "1", "3")
    code, out, _ = run(capsys, "search", "g", "2", "1", "3", "--json")
    assert code == 0
    assert json.loads(out)["value"] == 2


def test_construct_and_verify_roundtrip(workdir, capsys):
    code, out, _ = run(capsys, "construct", "canonical", "3", "2", "-o", "can.json")
    assert code == 0
    data = json.loads((workdir / "can.json").read_text())
    assert data["N"] == 8

    code, _, _ = run(capsys, "construct", "balance", "can.json", "-o", "bal.json")
    assert code == 0

    fam = {"q": 2, "n": 2, "r": 1, "vectors": [[1, 1], [1, 2], [2, 1], [2, 2]]}
    (workdir / "fam.json").write_text(json.dumps(fam))
    code, _, _ = run(capsys, "construct", "boost", "fam.json", "fam.json", "-o", "out.json")
    assert code == 0
    code, out, _ = run(capsys, "verify", "sequence", "out.json")
    assert code == 0 and "ok" in out


def test_verify_detects_violation(workdir, capsys):
    fam = {"q": 3, "n": 2, "r": 2, "vectors": [[1, 1, 1], [2, 2, 1], [2, 2, 2]]}
    (workdir / "fam.json").write_text(json.dumps(fam))
    code, out, _ = run(capsys, "verify", "sequence", "fam.json")
    assert code == 1
    assert "(2, 3)" in out


def test_verify_packing(workdir, capsys):
    good = {"q": 3, "r": 2, "n": 2, "apices": [[1, 1, 1], [2, 2, 1]]}
    (workdir / "p.json").write_text(json.dumps(good))
    code, out, _ = run(capsys, "verify", "packing", "p.json")
    assert code == 0
    bad = {"q": 3, "r": 2, "n": 2, "apices": [[1, 1, 1], [2, 1, 1]]}
    (workdir / "p.json").write_text(json.dumps(bad))
    code, out, _ = run(capsys, "verify", "packing", "p.json")
    assert code == 1
    assert "1 and 2" in out


def test_verify_parse_error_exit_three(workdir, capsys):
    (workdir / "junk.json").write_text("{not json")
    code, _, err = run(capsys, "verify", "sequence", "junk.json")
    assert code == 3


def test_decompose_recursive_and_verify(workdir, capsys):
    t = random_tournament(10, 3, seed=1)
    (workdir / "t.json").write_text(json.dumps(t.to_json()))
    code, out, _ = run(
        capsys, "decompose", "recursive", "t.json", "-o", "cert.json", "--trace", "tr.jsonl"
    )
    assert code == 0
    code, out, _ = run(capsys, "verify", "path", "t.json", "cert.json")
    assert code == 0
    lines = (workdir / "tr.jsonl").read_text().splitlines()
    node = json.loads(lines[0])
    assert set(node) == {"case", "N", "chosen_color", "branch_lengths"}


def test_decompose_monochromatic_transitive(workdir, capsys):
    t = ColoredTournament(
        8, 2, ((u, v, 1) for u in range(1, 9) for v in range(u + 1, 9))
    )
    (workdir / "t.json").write_text(json.dumps(t.to_json()))
    code, out, _ = run(capsys, "decompose", "recursive", "t.json", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["summary"] == {"length": 8, "avoided_color": 2}


def test_decompose_three_color_transitive_exit_two(workdir, capsys):
    t = ColoredTournament(
        6, 2, ((u, v, 1) for u in range(1, 7) for v in range(u + 1, 7))
    )
    (workdir / "t.json").write_text(json.dumps(t.to_json()))
    code, out, _ = run(capsys, "decompose", "three-color", "t.json")
    assert code == 2


def test_decompose_three_color_writes_certificate(workdir, capsys):
    t = random_tournament(20, 3, seed=4)
    (workdir / "t.json").write_text(json.dumps(t.to_json()))
    code, _, _ = run(capsys, "decompose", "three-color", "t.json", "-o", "c.json")
    assert code == 0
    code, out, _ = run(capsys, "verify", "path", "t.json", "c.json")
    assert code == 0


def test_seed_reproducibility_byte_for_byte(workdir, capsys):
    t = random_tournament(26, 3, seed=2)
    (workdir / "t.json").write_text(json.dumps(t.to_json()))
    outputs = []
    for _ in range(2):
        code, out, _ = run(
            capsys, "decompose", "recursive", "t.json", "--seed", "7", "-o", "c.json", "--json"
        )
        assert code == 0
        outputs.append(out + (workdir / "c.json").read_text())
    assert outputs[0] == outputs[1]
