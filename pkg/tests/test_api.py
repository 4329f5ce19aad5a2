import pytest
from fastapi.testclient import TestClient

import api
from api import app

client = TestClient(app)


@pytest.fixture(autouse=True)
def idle_random_check():
    api.random_check_status.update(is_running=False, processed=0, start_time=None, errors=[], last_summary=None)


def test_health_check():
    response = client.get("/")
    assert response.status_code == 200
    assert response.json()["version"] == "1.0.0"


def test_analyze():
    response = client.post("/analyze", json={"catalog": "solv4-nonunimodular"})
    assert response.status_code == 200
    report = response.json()[0]
    assert (report["dim_plus"], report["dim_minus"], report["intersection_dim"]) == (2, 2, 1)
    assert report["full"] is True and report["pure"] is False
    assert report["applicability"]["completely_solvable_flag"] == "solvable_real_spectrum"


def test_analyze_inline_with_dkahler():
    body = {"algebra": "(0,0,23,-24)", "k": "(-,+,+,-)", "dkahler": True}
    response = client.post("/analyze", json=body)
    assert response.status_code == 200
    assert response.json()[0]["dkahler"]["witness"] == "e12 + e34"


@pytest.mark.parametrize(
    "body, status",
    [
        ({"algebra": "(0,0,21)", "k": "(+,-,+)"}, 400),
        ({"catalog": "ex2.5", "algebra": "(0,0,12)"}, 400),
        ({"catalog": "no-such-entry"}, 404),
    ],
)
def test_analyze_errors(body, status):
    assert client.post("/analyze", json=body).status_code == status


def test_deform():
    body = {"catalog": "jump-sci", "t": ["0", "1/2", "1"]}
    response = client.post("/deform", json=body)
    assert response.status_code == 200
    report = response.json()
    assert report["family"]["integrable"] is True
    assert (report["generic"]["dim_plus"], report["generic"]["dim_minus"]) == (4, 3)
    assert {j["t"] for j in report["jumps"]} == {"0", "1"}


def test_deform_invalid_family():
    body = {"algebra": "(0,0)", "family": "1,t;0,1", "t": ["0"]}
    response = client.post("/deform", json=body)
    assert response.status_code == 400


def test_dkahler_at_parameter():
    response = client.post("/dkahler", json={"catalog": "ex2.17", "structure": "Kt", "t": "1"})
    assert response.status_code == 200
    assert response.json()["status"] == "cohomologically_obstructed_top_square"


def test_catalog_listing_and_entry():
    names = [item["name"] for item in client.get("/catalog").json()]
    assert "jump-scs" in names
    entry = client.get("/catalog/nil6-mixed").json()
    assert entry["name"] == "ex2.6"
    assert entry["algebra"] == "(0^3,12,13+14,24)"
    assert client.get("/catalog/missing").status_code == 404


def test_random_check_runs_in_background():
    response = client.post("/random-check", json={"catalog": "filiform4", "trials": 5, "seed": 7})
    assert response.status_code == 200
    status = client.get("/random-check-status").json()
    assert status["is_running"] is False
    assert status["processed"] == 5
    assert status["last_summary"]["counterexamples"] == []


def test_random_check_rejects_overlap():
    api.random_check_status["is_running"] = True
    response = client.post("/random-check", json={"catalog": "filiform4", "trials": 5})
    assert response.status_code == 400


def test_random_check_rejects_zero_trials():
    assert client.post("/random-check", json={"catalog": "filiform4", "trials": 0}).status_code == 400


def test_logs():
    response = client.get("/logs", params={"limit": 5})
    assert response.status_code == 200
    assert isinstance(response.json()["logs"], list)
