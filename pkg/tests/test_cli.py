import json

import pytest

from src.cli.app import run
from src.config.settings import settings
from src.core.actions import build_mu_prime
from src.core.degrees import table2_csv

ALPHA = "[[1,4],[2,3,-4,-5],[5,6],[-1,-2,-6],[-3]]"
BETA = "[[1,2],[3,4,-1],[5,-4,-5,-6],[6],[-2,-3]]"


def test_mul(capsys):
    assert run(["mul", "--n", "6", ALPHA, BETA]) == 0
    assert capsys.readouterr().out == "[[1,4],[2,3,-1,-4,-5,-6],[5,6],[-2,-3]]\n"


def test_star(capsys):
    assert run(["star", "--n", "6", ALPHA]) == 0
    assert capsys.readouterr().out.strip() == "[[1,2,6],[3],[4,5,-2,-3],[-1,-4],[-5,-6]]"


def test_info(capsys):
    assert run(["info", "--n", "6", BETA]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["planar"] is True
    assert info["rank"] == 2
    assert info["families"] == ["P", "PP"]


def test_enum_count(capsys):
    assert run(["enum", "--family", "B", "--n", "3", "--count"]) == 0
    assert json.loads(capsys.readouterr().out) == {"family": "B", "n": 3, "count": 15}
    assert run(["enum", "--family", "b", "--n", "5", "--rank", "3", "--count"]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 10


def test_enum_lists_elements(capsys):
    assert run(["enum", "--family", "TL", "--n", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == len(set(lines)) == 5


def test_degree_verify_certificate(capsys):
    assert run(["degree", "--family", "P", "--n", "3", "--mode", "verify"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "deg=22 deg_prime=21 faithful=true monogenic=true"
    assert lines[1].startswith("checks=full-kernel/direct,monogenic")


def test_degree_verify_reports_failure(monkeypatch, capsys):
    monkeypatch.setattr("src.cli.app.build_action", build_mu_prime)
    assert run(["degree", "--family", "P", "--n", "2", "--mode", "verify"]) == 1
    out = capsys.readouterr().out
    assert "faithful=false monogenic=n/a" in out
    assert "witness[full-kernel/direct]" in out


def test_degree_verify_uses_minpairs_above_limit(monkeypatch, capsys):
    monkeypatch.setattr(settings, "full_check_limit", 100)
    assert run(["degree", "--family", "P", "--n", "3", "--mode", "verify"]) == 0
    assert "checks=minpairs,monogenic" in capsys.readouterr().out


def test_degree_formula(capsys):
    assert run(["degree", "--family", "B", "--n", "5"]) == 0
    assert capsys.readouterr().out == "deg=46 deg_prime=45\n"
    assert run(["degree", "--family", "TL", "--n", "4", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["deg_prime"] == 6 and report["valid"] is True


def test_degree_construct(capsys):
    assert run(["degree", "--family", "B", "--n", "4", "--mode", "construct"]) == 0
    assert capsys.readouterr().out == "deg=19 deg_prime=18 construction=brauer-even formula_match=true\n"


def test_degree_outside_validity(capsys):
    assert run(["degree", "--family", "B", "--n", "1", "--mode", "formula"]) == 2
    assert "outside validity range n ≥ 3" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["degree", "--family", "Q", "--n", "3"],
    ["degree", "--family", "P"],
    ["degree", "--family", "P", "--n", "3", "--bogus"],
    ["mul", "--n", "2", "[[1,-1]]", "[[1,-1],[2,-2]]"],
    ["star", "--n", "1", "[[1],[1]]"],
    ["mul", "--n", "1", "[" * 5000 + "]" * 5000, "[[1,-1]]"],
    ["enum", "--family", "P", "--n", "-1"],
    [],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err


def test_budget_exceeded(monkeypatch, capsys):
    monkeypatch.setattr(settings, "budget", 1000)
    assert run(["enum", "--family", "P", "--n", "4", "--count"]) == 3
    assert "budget exceeded" in capsys.readouterr().err
    assert run(["oracle", "degrc", "--family", "B", "--n", "4"]) == 3
    assert run(["degree", "--family", "P", "--n", "6", "--mode", "construct"]) == 3
    assert "needs" in capsys.readouterr().err


def test_table(capsys):
    assert run(["table", "--max-n", "6"]) == 0
    assert capsys.readouterr().out == table2_csv(6)
    assert run(["table", "--max-n", "4", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert {"family": "M", "n": 2, "deg_prime": 5, "deg": 6, "source": "formula"} in rows


def test_action_build_to_file(tmp_path, capsys):
    out = tmp_path / "p2.json"
    assert run(["action", "build", "--family", "P", "--n", "2", "--out", str(out)]) == 0
    raw = json.loads(out.read_text(encoding="utf-8"))
    assert raw["construction"] == "projection" and len(raw["states"]) == 7
    assert capsys.readouterr().out == ""


def test_action_verify(capsys):
    assert run(["action", "verify", "--family", "B", "--n", "3", "--full"]) == 0
    out = capsys.readouterr().out
    assert "full-kernel/direct: ok" in out and "monogenic: ok" in out and "full: ok" in out
    assert run(["action", "verify", "--family", "TL", "--n", "5", "--minpairs"]) == 0
    assert capsys.readouterr().out.splitlines() == ["minpairs: ok", "monogenic: ok"]


def test_oracle_commands(capsys):
    assert run(["oracle", "degrc", "--family", "TL", "--n", "4"]) == 0
    assert json.loads(capsys.readouterr().out) == {"family": "TL", "n": 4, "degrc": 7}
    assert run(["oracle", "minimal-congruences", "--family", "B", "--n", "3"]) == 0
    found = json.loads(capsys.readouterr().out)
    assert found["count"] == 2 and len(found["congruences"]) == 2
    assert run(["oracle", "rc-lattice", "--family", "TL", "--n", "3", "--cap", "5"]) == 0
    lattice = json.loads(capsys.readouterr().out)
    assert lattice["classes"][0] == 5 and lattice["classes"][-1] == 1
