import copy
import json
import subprocess
import sys

import pytest

import knotconcord
from knotconcord import cli, verify

T7 = '{"type":"torus2q","q":7}'
FIG8 = '{"type":"banded","left":{"type":"unknot"},"right":{"type":"unknot"}}'


@pytest.fixture(autouse=True)
def fresh_caches():
    knotconcord.clear_caches()
    yield
    knotconcord.clear_caches()


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_signature(capsys):
    code, out, _ = run(capsys, "signature", "--knot", T7, "--p", "1/5")
    assert code == 0 and out.strip() == "signature=2 nullity=0"


def test_invariants_unknot(capsys):
    code, out, _ = run(capsys, "invariants", "--knot", '{"type":"unknot"}')
    assert code == 0
    assert "alexander: 1" in out and "fox-milnor: pass" in out


def test_invariants_banded_json(capsys):
    code, out, _ = run(capsys, "invariants", "--knot", FIG8, "--json", "--reproducible")
    doc = json.loads(out)
    assert doc["alexander"] == [1, -3, 1] and doc["fox_milnor"]["passed"] is False
    assert doc["genus_bound"] == 1 and "timestamp" not in doc


def test_timestamp_without_reproducible(capsys):
    _, out, _ = run(capsys, "invariants", "--knot", FIG8, "--json")
    assert "timestamp" in json.loads(out)


def test_profile_csv(capsys, tmp_path):
    dest = tmp_path / "p.csv"
    code, out, _ = run(capsys, "profile", "--knot", T7, "--output", str(dest))
    assert code == 0 and out == ""
    assert dest.read_text().splitlines()[0] == "p_lo,p_hi,signature"
    assert dest.read_text().splitlines()[-1] == "5/14,1/2,6"


def test_knot_from_file(capsys, tmp_path):
    f = tmp_path / "k.json"
    f.write_text(T7)
    code, out, _ = run(capsys, "signature", "--knot", str(f), "--p", "2/5")
    assert code == 0 and out.strip() == "signature=6 nullity=0"


def test_cover(capsys):
    code, out, _ = run(capsys, "cover", "--knot", FIG8, "--q", "5", "--json", "--reproducible")
    doc = json.loads(out)
    assert code == 0 and doc["factors"] == [5] and doc["linking_form"] == [["3/5"]]
    assert doc["characters"] == [[0, 0], [1, 3], [2, 1]]


def test_metabolizer(capsys):
    jj = json.dumps({"type": "sum", "parts": [json.loads(FIG8), json.loads(FIG8)]})
    code, out, _ = run(capsys, "metabolizer", "--knot", jj, "--bound", "2", "--json", "--reproducible")
    doc = json.loads(out)
    assert code == 0 and doc["witness"] == [[1, 0, -1, 1], [0, 1, 1, 0]] and doc["verified"]


def test_obstruct(capsys):
    code, out, _ = run(capsys, "obstruct", "1", "2", "--json", "--reproducible")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "NotSliceCertified"
    vals = {c["reduced"]["rational"] for m in doc["metabolizers"] for c in m["characters"]}
    assert vals == {"8/1", "-8/1"}
    assert doc["provenance"]["geometric-step"] == "paper-asserted"


def test_survey(capsys):
    code, out, _ = run(capsys, "survey", "0", "3", "--json", "--reproducible", "--jobs", "2")
    doc = json.loads(out)
    assert code == 0
    assert [p["verdict"] for p in doc["pairs"] if p["i"] < p["j"]] == ["NotSliceCertified"] * 6


@pytest.mark.parametrize(
    "argv",
    [
        ["signature", "--knot", '{"type":"torus2q","q":7', "--p", "1/5"],
        ["signature", "--knot", T7, "--p", "abc"],
        ["signature", "--knot", T7],
        ["signature", "--knot", "/nonexistent.json", "--p", "1/5"],
        ["invariants", "--knot", '{"type":"torus2q","q":2}'],
        ["survey", "3", "1"],
        ["verify-paper", "--only", "nope"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err


def test_parse_error_has_position(capsys):
    _, _, err = run(capsys, "invariants", "--knot", '{"type":"sum","parts":[{"type":"x"},{"type":"unknot"}]}')
    assert "$.parts[0]" in err


def test_computation_error(capsys):
    knot = json.dumps({"type": "sum", "parts": [{"type": "torus2q", "q": 7}, {"type": "mirror", "knot": {"type": "torus2q", "q": 7}}]})
    code, _, err = run(capsys, "metabolizer", "--knot", knot, "--bound", "2", "--max-nodes", "500", "--no-prefilter")
    assert code == 2 and "exceeded" in err


def test_verify_restricted(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "theorem-3.2", "--range", "0", "5", "--reproducible")
    assert code == 0 and "15/15 pairs certified" in out


def test_verify_json_is_deterministic(capsys):
    args = ["verify-paper", "--only", "alexander", "--only", "obstruction", "--json", "--reproducible"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b and json.loads(a)["passed"] is True


def test_obstruct_json_is_deterministic(capsys):
    _, a, _ = run(capsys, "obstruct", "-2", "3", "--json", "--reproducible")
    _, b, _ = run(capsys, "obstruct", "-2", "3", "--json", "--reproducible")
    assert a == b


# --- negative controls -------------------------------------------------------


def _leaves(d, path=()):
    if isinstance(d, dict):
        for k, v in d.items():
            yield from _leaves(v, path + (k,))
    elif isinstance(d, list):
        for i, v in enumerate(d):
            yield from _leaves(v, path + (i,))
    else:
        yield path


LEAVES = list(_leaves(verify.EXPECTED))


def _corrupt(value):
    if isinstance(value, bool):
        return not value
    if isinstance(value, int):
        return value + 1
    return value + "0"


@pytest.mark.parametrize("path", LEAVES, ids=["/".join(map(str, p)) for p in LEAVES])
def test_corrupted_constant_exits_3(capsys, monkeypatch, path):
    bad = copy.deepcopy(verify.EXPECTED)
    node = bad
    for key in path[:-1]:
        node = node[key]
    node[path[-1]] = _corrupt(node[path[-1]])
    monkeypatch.setattr(verify, "EXPECTED", bad)
    code, out, _ = run(capsys, "verify-paper", "--only", path[0], "--reproducible")
    assert code == 3 and out.startswith("FAIL")


def test_corrupted_torus_matrix_exits_3(capsys, monkeypatch):
    from knotconcord import seifert

    original = seifert.torus_seifert_matrix

    def wrong(q):
        return original(q).scale(-1)

    monkeypatch.setattr(seifert, "torus_seifert_matrix", wrong)
    knotconcord.clear_caches()
    code, out, _ = run(capsys, "verify-paper", "--only", "profile", "--reproducible")
    assert code == 3 and "FAIL profile" in out


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "knotconcord", "signature", "--knot", T7, "--p", "1/5"],
        capture_output=True, text=True, check=False,
    )
    assert r.returncode == 0 and r.stdout.strip() == "signature=2 nullity=0"
