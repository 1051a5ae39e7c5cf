import pytest
from fastapi.testclient import TestClient

from app import app
from conftest import fixture_path

STAR = fixture_path("star.txt")


@pytest.fixture
def client():
    return TestClient(app)


def test_root(client):
    response = client.get("/")
    assert response.status_code == 200


def test_solve(client):
    response = client.post("/solve", json={"graph_path": STAR, "kind": "im-ca", "k": 2, "theta": 4})
    assert response.status_code == 200
    body = response.json()
    assert body["status"] is True
    assert body["report"]["seed_labels"] == ["a", "b"]


def test_solve_infeasible(client, tmp_path):
    target = tmp_path / "target.txt"
    target.write_text("u\n")
    response = client.post("/solve", json={
        "graph_path": fixture_path("fanin3.txt"), "kind": "sm-ca", "eta": 1, "theta": 200,
        "target_path": str(target), "candidates": ["a", "b", "c"],
    })
    assert response.status_code == 400
    body = response.json()
    assert body["status"] is False
    assert body["achieved"] == 0
    assert body["report"]["status"] == "infeasible"


def test_solve_bad_graph(client):
    response = client.post("/solve", json={"graph_path": "missing.txt", "kind": "im-ca", "k": 1})
    assert response.status_code == 400
    assert response.json()["status"] is False


def test_request_validation(client):
    response = client.post("/solve", json={"graph_path": STAR, "kind": "im-ca", "k": 0})
    assert response.status_code == 422


def test_baseline(client):
    response = client.post("/baseline", json={"graph_path": STAR, "name": "degree", "k": 2})
    body = response.json()
    assert body["seeds"] == ["a", "b"]
    assert body["scores"] == [2.0, 1.0]


def test_evaluate(client):
    response = client.post("/evaluate", json={"graph_path": STAR, "seeds": ["a"], "runs": 10})
    body = response.json()
    assert body["evaluation"]["rho_hat"] == 3
    assert body["probabilities"]["y"] == 1.0
