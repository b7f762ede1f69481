"""HTTP service endpoints: request/response schemas and error mapping."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from liesurf import gallery
from liesurf.service.app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health_and_gallery(client):
    assert client.get("/health").json() == {"status": "ok"}
    body = client.get("/gallery").json()
    assert "parabolic-cylinder" in body["surfaces"]
    assert "beaks-lips-family" in body["matrices"]


def test_classify_endpoint_worked_example(client):
    resp = client.post("/classify", json={
        "surface": {"name": "parabolic-cylinder"},
        "matrix": {"name": "swallowtail-steer"},
    })
    assert resp.status_code == 200
    body = resp.json()
    assert len(body["points"]) == 1
    pt = body["points"][0]
    assert pt["class"] == "Swallowtail"
    assert pt["method"] == "Both"
    assert max(abs(x) for x in pt["uv"]) <= 1e-8
    assert body["matrixA"][0][0] == -0.5
    assert body["stats"]["masked_fraction"] < 0.01
    assert body["locus"]


def test_classify_endpoint_inline_surface_and_matrix(client):
    rows = [[float(x) for x in r] for r in gallery.beaks_lips_family(1.0)]
    resp = client.post("/classify", json={
        "surface": {"text": gallery.PARABOLIC_CYLINDER},
        "matrix": {"rows": rows},
        "grid": [31, 31],
    })
    assert resp.status_code == 200
    classes = {p["class"] for p in resp.json()["points"]}
    assert "CuspidalLips" in classes


def test_classify_point_endpoint(client):
    resp = client.post("/classify-point", json={
        "surface": {"name": "parabolic-cylinder"},
        "matrix": {"name": "beaks-lips-family", "xi": 0.2},
        "point": [0.0, 0.0],
    })
    body = resp.json()
    assert body["report"]["class"] == "CuspidalBeaks"
    assert body["agreement"] is True
    assert body["surface_type"] == "Type2"
    assert body["report"]["margins"]["lie_detHess"] < 0


def test_sweep_endpoint(client):
    resp = client.post("/sweep", json={
        "surface": {"name": "parabolic-cylinder"},
        "family": "beaks-lips-family",
        "xi_range": [0.0, 1.0],
        "samples": 11,
    })
    body = resp.json()
    assert abs(body["transition_xi"] - 1.0 / (2.0 * np.sqrt(2.0))) < 1e-6
    assert body["transition_class"] == "Type2Degenerate"
    by_xi = {round(r["xi"], 2): r["class"] for r in body["rows"]}
    assert by_xi[0.2] == "CuspidalBeaks"
    assert by_xi[0.5] == "CuspidalLips"


def test_steer_endpoint_round_trips_matrix(client):
    resp = client.post("/steer", json={
        "surface": {"name": "parabolic-cylinder"},
        "point": [0.0, 0.0],
        "target": "CuspidalLips",
        "seed": 9,
    })
    body = resp.json()
    assert body["verification"]["class"] == "CuspidalLips"
    # the returned matrix reproduces the verified class through /classify-point
    resp2 = client.post("/classify-point", json={
        "surface": {"name": "parabolic-cylinder"},
        "matrix": {"rows": body["matrix"]},
        "point": [0.0, 0.0],
    })
    assert resp2.json()["report"]["class"] == "CuspidalLips"


def test_check_matrix_endpoint(client):
    resp = client.post("/check-matrix", json={
        "matrix": {"name": "swallowtail-steer"}, "tol": 1e-12})
    body = resp.json()
    assert body["is_lie"] is True and body["residual"] <= 1e-12
    bad = np.eye(6)
    bad[0, 0] = 2.0
    resp = client.post("/check-matrix", json={
        "matrix": {"rows": bad.tolist()}, "tol": 1e-9})
    assert resp.json()["is_lie"] is False


def test_mesh_endpoint(client):
    resp = client.post("/mesh", json={
        "surface": {"name": "swallowtail"}, "grid": [9, 9]})
    assert resp.status_code == 200
    lines = resp.text.splitlines()
    assert lines[0].startswith("#")
    assert any(line.startswith("v ") for line in lines)
    assert any(line.startswith("f ") for line in lines)


def test_error_mapping(client):
    resp = client.post("/classify", json={"surface": {"text": "x = (u\ny=v\nz=0\n"}})
    assert resp.status_code == 422
    assert resp.json()["error"] == "syntax_error"

    resp = client.post("/steer", json={
        "surface": {"name": "parabolic-cylinder"}, "point": [0, 0],
        "target": "CuspidalEdge"})
    assert resp.status_code == 400
    assert resp.json()["error"] == "type_incompatible"

    resp = client.post("/classify", json={"surface": {"name": "no-such-surface"}})
    assert resp.status_code == 404

    # pydantic validation: surface spec needs exactly one of text/name
    resp = client.post("/classify", json={"surface": {}})
    assert resp.status_code == 422

    resp = client.post("/classify", json={
        "surface": {"name": "parabolic-cylinder"}, "order": 12})
    assert resp.status_code == 422


def test_classify_with_steering_returns_phat(client):
    resp = client.post("/classify", json={
        "surface": {"name": "parabolic-cylinder"},
        "steering": {"point": [0.0, 0.0], "mode": "generic", "seed": 1},
    })
    assert resp.status_code == 200
    body = resp.json()
    assert len(body["phat"]) == 6
    assert body["steering"]["mode"] == "generic"
    assert any(p["class"] == "Swallowtail" for p in body["points"])
