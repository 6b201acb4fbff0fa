import json

import pytest

from finsemi import semigroups as sg
from finsemi.cli import main


@pytest.fixture
def b2_file(tmp_path):
    path = tmp_path / "b2.json"
    path.write_text(json.dumps(sg.catalog("B2").to_json_dict()))
    return str(path)


@pytest.fixture
def lz2_file(tmp_path):
    path = tmp_path / "lz2.json"
    path.write_text(json.dumps(sg.catalog("left_zero", 2).to_json_dict()))
    return str(path)


def test_member(capsys, lz2_file, b2_file):
    assert main(["member", "--v", "K", "--input", lz2_file]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["member"] is True
    assert main(["member", "--v", "K", "--input", b2_file]) == 1


def test_ident_check(capsys, b2_file):
    code = main(["ident-check", "--input", b2_file, "--id", "x1^w = x1^w x2"])
    assert code == 1
    out = json.loads(capsys.readouterr().out)
    assert out["satisfies"] is False and out["witness"] is not None


def test_green(capsys, b2_file):
    assert main(["green", "--input", b2_file]) == 0
    out = json.loads(capsys.readouterr().out)
    assert sorted(map(len, out["j_classes"])) == [1, 4]
    assert out["idempotents"] == [2, 3, 4]


def test_malcev(capsys, lz2_file, b2_file):
    assert main(["malcev", "--z", "K", "--v", "Sl", "--input", lz2_file]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["member"] is True and out["mu_quotient_order"] == 1
    assert "witness" in out
    assert main(["malcev", "--z", "LG", "--v", "Sl", "--input", b2_file]) == 1


def test_phi(capsys):
    assert main(["phi", "--k", "1", "--input", "abab"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["blocks"] == ["ab", "ba", "ab"]
    assert main(["phi", "--k", "1", "--input", "(a b)^w"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["kind"] == "term" and "[ab]" in out["image"]


def test_phi_from_file(capsys, tmp_path):
    path = tmp_path / "term.txt"
    path.write_text("(a b)^w c\n")
    assert main(["phi", "--k", "1", "--input", f"@{path}"]) == 0
    assert json.loads(capsys.readouterr().out)["kind"] == "term"


def test_ilbf(capsys):
    assert main(["ilbf", "--input", "abab"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"outcome": "finite", "factors": [["a", "b"], ["a", "b"]],
                   "remainder": ""}
    assert main(["ilbf", "--input", "(a b)^w"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["outcome"] == "infinite"
    assert main(["ilbf", "--input", "(a b)^w", "--k", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["outcome"] == "infinite"


def test_syn(capsys):
    assert main(["syn", "--regex", "(ab)+"]) == 0
    out = json.loads(capsys.readouterr().out)
    S = sg.FiniteSemigroup.from_json_dict(out)
    assert sg.is_isomorphic(S, sg.catalog("B2"))


def test_enumerate(capsys, tmp_path):
    out_path = tmp_path / "corpus.jsonl"
    assert main(["enumerate", "--max-order", "3", "--out", str(out_path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["counts"] == {"1": 1, "2": 5, "3": 24}
    lines = out_path.read_text().strip().splitlines()
    assert len(lines) == 30
    entry = json.loads(lines[0])
    assert {"id", "order", "table", "flags", "provenance"} <= set(entry)


def test_verify_paper_single_suite(capsys):
    assert main(["verify-paper", "--suite", "enumeration_counts"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out[0]["passed"] is True


def test_usage_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["member", "--v", "K", "--input", str(bad)]) == 2
    assert main(["member", "--v", "NOPE", "--input", str(bad)]) == 2


def test_budget_exit_code(capsys, tmp_path):
    # enumerate order 5 exceeds the exact-enumeration budget
    assert main(["enumerate", "--max-order", "5"]) == 3


def test_member_custom_pseudovariety(capsys, tmp_path, lz2_file):
    pv_file = tmp_path / "myk.json"
    pv_file.write_text(json.dumps(
        {"name": "myK", "basis": [{"lhs": "x1^w x2", "rhs": "x1^w"}]}))
    assert main(["member", "--v", f"@{pv_file}", "--input", lz2_file]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"member": True, "pseudovariety": "myK"}


def test_permanence_counterexample_replays(capsys, tmp_path):
    # the serialized counterexample alone suffices to replay the refutation
    from finsemi import suites
    report = suites.run_suite("permanence")
    refutations = [e for e in report.examples if e.get("verdict") == "refuted"]
    assert refutations
    ex = refutations[0]
    sgp_file = tmp_path / "witness.json"
    sgp_file.write_text(json.dumps(ex["semigroup"]))
    ident = f"{ex['lhs']} = {ex['rhs']}"
    assert main(["ident-check", "--input", str(sgp_file), "--id", ident]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["satisfies"] is False
