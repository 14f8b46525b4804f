import pytest
from fastapi.testclient import TestClient

from src.api.app import app

ALPHA = "[[1,4],[2,3,-4,-5],[5,6],[-1,-2,-6],[-3]]"
BETA = "[[1,2],[3,4,-1],[5,-4,-5,-6],[6],[-2,-3]]"


@pytest.fixture
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_multiply(client):
    response = client.post("/multiply", json={"n": 6, "a": ALPHA, "b": BETA})
    assert response.status_code == 200
    assert response.json() == {"product": "[[1,4],[2,3,-1,-4,-5,-6],[5,6],[-2,-3]]"}


@pytest.mark.parametrize("payload", [
    {"n": 6, "a": ALPHA, "b": "[[1,2]]"},
    {"n": 2, "a": "[[1,-1],[2,-2]]", "b": "[[1,-1],[2,-3]]"},
    {"n": -1, "a": "[]", "b": "[]"},
    {"n": 1, "a": "[[1,-1]]; drop", "b": "[[1,-1]]"},
    {"n": 1, "a": "[" * 5000 + "]" * 5000, "b": "[[1,-1]]"},
])
def test_multiply_rejects_bad_input(client, payload):
    assert client.post("/multiply", json=payload).status_code == 400


def test_info(client):
    response = client.post("/info", json={"n": 6, "a": BETA})
    assert response.status_code == 200
    info = response.json()
    assert info["rank"] == 2 and info["planar"] is True and info["projection"] is False
    assert info["families"] == ["P", "PP"]


def test_info_projection(client):
    info = client.post("/info", json={"n": 2, "a": "[[1,2,-1,-2]]"}).json()
    assert info["projection"] is True
    assert info["families"] == ["P", "PP", "TLM"]


def test_degree(client):
    response = client.get("/degree/P/3")
    assert response.status_code == 200
    body = response.json()
    assert body["deg_prime"] == 21 and body["deg"] == 22 and body["valid"] is True


def test_degree_outside_validity_is_reported(client):
    body = client.get("/degree/b/1").json()
    assert body["valid"] is False and body["deg_prime"] is None


@pytest.mark.parametrize("path", ["/degree/Q/3", "/degree/P/1000"])
def test_degree_rejects_bad_input(client, path):
    assert client.get(path).status_code == 400


def test_table2(client):
    rows = client.get("/table2", params={"max_n": 4}).json()
    assert len(rows) == 6 * 5
    assert {"family": "TL", "n": 4, "deg_prime": 6, "deg": 7, "source": "formula"} in rows
    b2 = next(r for r in rows if r["family"] == "B" and r["n"] == 2)
    assert b2["deg_prime"] is None
    assert client.get("/table2", params={"max_n": 10_000}).status_code == 400
