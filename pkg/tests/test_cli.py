import json

import pytest

from copbound.cli import run
from copbound.graph import encode_graph6, path, petersen


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_copnumber_path9(capsys):
    assert call(capsys, "copnumber", "--gen", "path:9") == (0, "1\n", "")


def test_copnumber_json(capsys):
    code, out, _ = call(capsys, "copnumber", "--gen", "petersen", "--json")
    assert code == 0 and json.loads(out)["copNumber"] == 3


def test_invariants_text_and_json(capsys):
    code, out, _ = call(capsys, "invariants", "--g6", encode_graph6(path(5)))
    assert code == 0 and "alpha      3" in out and "girth      inf" in out
    code, out, _ = call(capsys, "invariants", "--gen", "cycle:5", "--json")
    data = json.loads(out)
    assert (data["alpha"], data["gamma"], data["girth"], data["diameter"]) == (2, 2, 5, 2)


def test_certify_hoffman_singleton(capsys):
    code, out, _ = call(capsys, "certify", "--gen", "hoffman-singleton")
    assert code == 0 and out.startswith("c=7 (girth 5")


def test_bounds_path10(capsys):
    code, out, _ = call(capsys, "bounds", "--gen", "path:10")
    assert code == 0
    assert "theorem 2: c <= 2  ok" in out and "theorem 4: not applicable" in out


def test_strategy_validate_path7(capsys):
    code, out, _ = call(capsys, "strategy", "--gen", "path:7", "--theorem", "3", "--validate")
    assert code == 0
    assert "cops: 2" in out and "verdict: Sound" in out
    assert out.rstrip().splitlines()[-1].startswith("CAPTURED")


def test_strategy_fallback_when_not_applicable(capsys):
    code, out, _ = call(capsys, "strategy", "--gen", "complete:4", "--theorem", "1", "--json", "--validate")
    data = json.loads(out)
    assert code == 0 and data["fallback"] and data["cops"] == 1 and data["verdict"] == "sound"


def test_strategy_inconclusive_exit(capsys):
    code, _, _ = call(capsys, "strategy", "--gen", "path:19", "--theorem", "4", "--validate", "--budget", "2")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ("copnumber", "--gen", "wheel:5"),
    ("copnumber", "--g6", "~~~"),
    ("copnumber", "--gen", "paley:15"),
    ("copnumber", "--file", "/nonexistent.g6"),
    ("copnumber", "--g6", "C`"),  # disconnected
    ("copnumber", "--gen", "paley:17", "--budget", "10"),
    ("nonsense",),
    (),
])
def test_operational_errors_exit_2(capsys, argv):
    assert call(capsys, *argv)[0] == 2


def test_verify_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.g6"
    good.write_text(f"{encode_graph6(path(6))}\n{encode_graph6(petersen())}\n")
    code, out, _ = call(capsys, "verify", str(good), "--strategies", "--jobs", "1")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(lines) == 3 and lines[-1]["summary"]["violations"] == 0

    bad = tmp_path / "bad.g6"
    bad.write_text(f"{encode_graph6(path(6))}\n!!bad\n")
    report = tmp_path / "out.jsonl"
    code, out, _ = call(capsys, "verify", str(bad), "--jobs", "1", "-o", str(report))
    assert code == 2 and "errors 1" in out
    assert len(report.read_text().splitlines()) == 3


def test_search_cli(tmp_path, capsys):
    f = tmp_path / "c.g6"
    f.write_text("Ch\nCl\nC~\n")
    code, out, _ = call(capsys, "search", str(f), "--equality", "alpha", "--min-value", "2", "--json")
    data = json.loads(out)
    assert code == 0 and [w["graph6"] for w in data["witnesses"]] == ["Cl"]
