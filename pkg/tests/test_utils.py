import pytest

from src.config.settings import Settings
from src.core.errors import DiagramError, FamilyError
from src.core.diagram import Family
from src.utils.union_find import UnionFind
from src.utils.validation import parse_family, sanitize_degree, sanitize_diagram_text


def test_union_find():
    uf = UnionFind(6)
    assert len(uf) == 6
    assert uf.union(4, 1) and uf.union(1, 5)
    assert not uf.union(5, 4)
    assert uf.find(4) == uf.find(5)
    assert uf.groups() == [[0], [1, 4, 5], [2], [3]]
    assert uf.labels() == [0, 1, 2, 3, 1, 1]
    assert len(uf) == 4


def test_sanitize_diagram_text():
    assert sanitize_diagram_text("  [[1,-1]] ") == "[[1,-1]]"
    for bad in ["[[1,'a']]", "__import__('os')", None]:
        with pytest.raises(DiagramError):
            sanitize_diagram_text(bad)


def test_sanitize_degree():
    assert sanitize_degree(0) == 0
    assert sanitize_degree(40, upper=40) == 40
    for bad in [-1, True, 2.0]:
        with pytest.raises(DiagramError):
            sanitize_degree(bad)
    with pytest.raises(DiagramError):
        sanitize_degree(41, upper=40)


def test_parse_family():
    assert parse_family(" tl ") is Family.TL
    assert parse_family("TLM") is Family.TLM
    with pytest.raises(FamilyError, match="expected one of"):
        parse_family("Q")


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("DIAGRAMDEG_BUDGET", "123")
    monkeypatch.setenv("DIAGRAMDEG_ORACLE_CAP", "7")
    s = Settings()
    assert s.budget == 123 and s.oracle_cap == 7
    monkeypatch.setenv("DIAGRAMDEG_BUDGET", "0")
    with pytest.raises(ValueError):
        Settings()
