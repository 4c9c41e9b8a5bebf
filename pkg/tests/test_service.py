import json

import pytest
from fastapi.testclient import TestClient

from blockdec import Grid, decompose
from blockdec.files import module_to_doc
from blockdec.generator import counterexample
from blockdec.service import create_app

from .helpers import FIELD, twisted_ground_truth


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


@pytest.fixture(scope="module")
def good_module_doc():
    _, m = twisted_ground_truth(FIELD, Grid((3, 2, 2)), seed=11)
    return module_to_doc(m), m


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_validate_endpoint(client, good_module_doc):
    doc, _ = good_module_doc
    res = client.post("/validate", json={"module": doc})
    assert res.status_code == 200
    assert res.json() == {"valid": True, "issues": []}


def test_check_endpoint_matches_core(client, good_module_doc):
    doc, m = good_module_doc
    res = client.post("/check", json={"module": doc})
    assert res.status_code == 200
    assert res.json()["overall"] is True
    bad = module_to_doc(counterexample(FIELD))
    res = client.post("/check", json={"module": bad})
    body = res.json()
    assert body["overall"] is False
    assert body["cube_failures"] == [
        {"s": [1, 1, 1], "t": [2, 2, 2], "condition": "colimit-injective"}
    ]


def test_check_unit_cells_mode(client, good_module_doc):
    doc, _ = good_module_doc
    res = client.post("/check", json={"module": doc, "mode": "unit-cells"})
    assert res.status_code == 200
    assert res.json()["mode"] == "unit-cells"
    res = client.post("/check", json={"module": doc, "mode": "bogus"})
    assert res.status_code == 422  # pydantic rejects unknown modes


def test_decompose_endpoint(client, good_module_doc):
    doc, m = good_module_doc
    res = client.post("/decompose", json={"module": doc})
    assert res.status_code == 200
    body = res.json()
    assert body["strongly_exact"] is True
    expected = decompose(m).to_doc()
    assert body["report"]["entries"] == expected["entries"]
    assert body["report"]["verified"] is True
    bad = module_to_doc(counterexample(FIELD))
    res = client.post("/decompose", json={"module": bad})
    body = res.json()
    assert body["strongly_exact"] is False and body["report"] is None
    assert body["exactness"]["cube_failures"]


def test_generate_and_verify_round_trip(client):
    res = client.post(
        "/generate",
        json={"kind": "block-sum", "seed": 5, "cells": [3, 2, 2]},
    )
    assert res.status_code == 200
    body = res.json()
    assert body["truth"] is not None
    res2 = client.post(
        "/verify", json={"module": body["module"], "report": body["truth"]}
    )
    assert res2.status_code == 200
    assert res2.json() == {"verified": True}


def test_generate_example_and_perturbed(client):
    res = client.post("/generate", json={"kind": "example"})
    assert res.status_code == 200
    assert res.json()["module"]["cells"] == [2, 2, 2]
    assert res.json()["truth"] is None
    res = client.post("/generate", json={"kind": "perturbed", "seed": 3, "cells": [2, 2, 2]})
    assert res.status_code == 200
    check = client.post("/validate", json={"module": res.json()["module"]})
    assert check.json()["valid"] is True


def test_info_endpoint(client, good_module_doc):
    doc, m = good_module_doc
    res = client.post("/info", json={"module": doc})
    body = res.json()
    assert body["prime"] == FIELD.p
    assert body["cells"] == [3, 2, 2]
    assert body["total_dim"] == m.total_dim()
    assert body["valid"] is True


def test_malformed_module_is_400(client, good_module_doc):
    doc, _ = good_module_doc
    broken = json.loads(json.dumps(doc))
    broken["dims"][0][0][0] = -1
    res = client.post("/validate", json={"module": broken})
    assert res.status_code == 400
    assert "dims" in res.json()["detail"]
    res = client.post("/check", json={"module": broken})
    assert res.status_code == 400


def test_missing_fields_are_422(client):
    res = client.post("/check", json={"module": {"prime": 5}})
    assert res.status_code == 422
