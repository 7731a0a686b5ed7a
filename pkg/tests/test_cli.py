import json

import pytest

from posetpack.cli import main
from posetpack.lattice import family_from_json
from posetpack.poset import J, poset_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)

    return write


def test_closure_command(capsys, files):
    v = files("v.json", {"n": 2, "sets": [[], [1], [2]]})
    code, out, _ = run(capsys, "closure", v)
    doc = json.loads(out)
    assert code == 0 and doc["convex"] is True
    assert family_from_json(doc) == family_from_json({"n": 2, "sets": [[], [1], [2]]})

    gap = files("gap.json", {"n": 2, "sets": [[], [1, 2]]})
    doc = json.loads(run(capsys, "closure", gap)[1])
    assert len(doc["sets"]) == 4 and doc["convex"] is False

    empty = files("e.json", {"n": 3, "sets": []})
    doc = json.loads(run(capsys, "closure", empty)[1])
    assert doc["sets"] == [] and doc["convex"] is True


def test_convex_and_unrelated(capsys, files):
    a = files("a.json", {"n": 2, "sets": [[1]]})
    b = files("b.json", {"n": 2, "sets": [[1, 2]]})
    assert json.loads(run(capsys, "convex", a)[1]) == {"convex": True}
    doc = json.loads(run(capsys, "unrelated", a, b)[1])
    assert doc["unrelated"] is False and doc["witness"]["direction"] == "<"


def test_chains_command(capsys, files):
    f = files("f.json", {"n": 4, "sets": [[1, 2]]})
    code, out, _ = run(capsys, "chains", f, "--oracle")
    doc = json.loads(out)
    assert code == 0
    assert doc["chains"] == "4" and doc["oracle"] == "4" and doc["agree"]


def test_bignat_is_decimal_string(capsys, files):
    f = files("f.json", {"n": 30, "sets": [[1]]})
    doc = json.loads(run(capsys, "chains", f)[1])
    assert doc["chains"] == str(1 * 2 * 3 * 4 * 5 * 6 * 7 * 8 * 9 * 10 * 11 * 12 * 13 * 14 * 15 * 16 * 17 * 18 * 19 * 20 * 21 * 22 * 23 * 24 * 25 * 26 * 27 * 28 * 29)


def test_abar_and_budget(capsys, monkeypatch):
    doc = json.loads(run(capsys, "abar", "--m", "2", "--n", "4")[1])
    assert doc["abar"] == "8"
    code, _, err = run(capsys, "abar", "--m", "2", "--n", "4", "--budget", "5")
    assert code == 3 and "BudgetError" in err
    monkeypatch.setenv("POSETPACK_BUDGET", "5")
    assert run(capsys, "abar", "--m", "2", "--n", "4")[0] == 3


def test_cp_command(capsys, files):
    path = files("j.json", J().to_json())
    doc = json.loads(run(capsys, "cp", "--poset", path, "--strong")[1])
    assert doc == {"m": 5, "k": 3, "witness": [[], [1], [1, 2], [3]], "exhaustive_to": 4, "mode": "strong"}
    assert poset_from_json(open(path).read()) == J()
    doc = json.loads(run(capsys, "cp", "--poset", "chain(3)", "--kmax", "4")[1])
    assert doc["m"] == 8 and doc["exhaustive_to"] == 4


def test_construct_then_verify_round_trip(capsys, tmp_path):
    out = tmp_path / "copies.json"
    code, text, _ = run(capsys, "construct", "--poset", "V", "--n", "12", "--iters", "2", "--out", str(out))
    summary = json.loads(text)
    assert code == 0 and summary["copies"] == "218" and summary["family_size"] == "654"
    copies = json.loads(out.read_text())
    assert len(copies) == 218
    assert copies[0]["layer"] == {"j": 1, "R": [1, 2], "b": 3, "word": [[1, 2], "E"]}
    code, text, _ = run(capsys, "verify", str(out))
    assert code == 0 and json.loads(text)["ok"]


def test_verify_failure_exit_code(capsys, files):
    bad = files("bad.json", [{"n": 2, "sets": [[1]]}, {"n": 2, "sets": [[1, 2]]}])
    code, text, _ = run(capsys, "verify", bad)
    assert code == 4
    assert json.loads(text)["witness"]["copies"] == [0, 1]


def test_construct_count_only_and_too_small(capsys):
    doc = json.loads(run(capsys, "construct", "--poset", "V", "--n", "100", "--iters", "5", "--count-only")[1])
    assert len(doc["layers"]) == 5
    code, _, err = run(capsys, "construct", "--poset", "V", "--n", "5", "--iters", "3", "--count-only")
    assert code == 2 and "smallest feasible n is 20" in err


def test_oracle_commands(capsys):
    assert json.loads(run(capsys, "oracle-pa", "--poset", "antichain(1)", "--n", "4")[1])["pa"] == "6"
    doc = json.loads(run(capsys, "oracle-pa-collection", "--posets", "B0,chain(1)", "--n", "3")[1])
    assert doc["pa"] == "4"
    assert json.loads(run(capsys, "gst", "--k", "1", "--n", "3")[1])["pa"] == "4"
    assert run(capsys, "gst", "--k", "3", "--n", "2")[0] == 2


def test_best_ratio_command(capsys):
    doc = json.loads(run(capsys, "best-ratio", "--posets", "chain(1),chain(2)")[1])
    assert doc == {"ratio": {"fraction": "1/1", "decimal": "1"}, "index": 0}


def test_report_examples(capsys):
    doc = json.loads(run(capsys, "report", "--poset", "antichain(1)", "--n", "10")[1])
    assert doc["copies"] == "252"
    assert doc["ratio_to_target"]["fraction"] == "1/1"
    doc = json.loads(run(capsys, "report", "--poset", "chain(1)", "--n", "4")[1])
    assert doc["family_size"] == "6"
    doc = json.loads(run(capsys, "report", "--poset", "V", "--n", "100", "--iters", "5")[1])
    num, den = map(int, doc["ratio_to_target"]["fraction"].split("/"))
    assert 0.9 < num / den < 1
    assert doc["ratio_to_target"]["decimal"] == f"{num / den:.6g}"


def test_tsv_output(capsys):
    code, out, _ = run(capsys, "gst", "--k", "0", "--n", "4", "--tsv")
    assert code == 0
    assert out.splitlines() == ["k\t0", "n\t4", "pa\t6"]


def test_parse_error_reports_position(capsys, files):
    bad = files("bad.json", '{"n": 2,\n "sets": [[1,]]}')
    code, _, err = run(capsys, "closure", bad)
    assert code == 2
    assert "line 2" in json.loads(err)["message"]


def test_unknown_poset(capsys):
    assert run(capsys, "cp", "--poset", "no-such-thing")[0] == 2


def test_selftest_and_determinism(capsys):
    code, out, _ = run(capsys, "selftest", "--seed", "1")
    assert code == 0 and json.loads(out)["ok"]
    a = run(capsys, "cp", "--poset", "J", "--strong", "--seed", "1")[1]
    b = run(capsys, "cp", "--poset", "J", "--strong", "--seed", "2")[1]
    assert a == b
