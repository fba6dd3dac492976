import pytest
from fastapi.testclient import TestClient

from mxassist.bundled import registration_kb_text
from mxassist.service import SCHEMA_VERSION, create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


def create(client, kb_text=None):
    response = client.post("/sessions", json={"kb": kb_text or registration_kb_text()})
    assert response.status_code == 201, response.text
    return response.json()


def test_create_session_reports_all_unknown(client):
    body = create(client)
    report = body["report"]
    assert report["schema"] == SCHEMA_VERSION
    assert report["satisfiable"] is True
    assert len(report["symbols"]) == 5
    assert all(s["status"] == "relevant_unknown" for s in report["symbols"])
    assert report["banners"] == {"definite": False, "contingent": False}
    assert report["history_length"] == 0


def test_create_session_parse_error(client):
    response = client.post("/sessions", json={"kb": "vocabulary { env A Bool }"})
    assert response.status_code == 400
    error = response.json()["error"]
    assert error["code"] == "kb_parse_error"
    assert error["line"] == 1
    assert "column" in error


def test_create_unsatisfiable_session_flagged(client):
    text = """
vocabulary {
  env A : Bool
  dec D : Bool
}
theory environment { A. ~A. }
theory solution { D. }
"""
    body = create(client, text)
    assert body["report"]["satisfiable"] is False
    assert "no solution" in body["report"]["message"]


def test_blocked_observation_carries_hints(client):
    session_id = create(client)["id"]
    response = client.post(
        f"/sessions/{session_id}/facts",
        json={"symbol": "RegistrationType", "value": "Social", "role": "decision"},
    )
    assert response.status_code == 200
    report = response.json()["report"]
    assert report["history_length"] == 1

    response = client.post(
        f"/sessions/{session_id}/facts",
        json={"symbol": "SocialHousing", "value": False, "role": "observation"},
    )
    assert response.status_code == 409
    error = response.json()["error"]
    assert error["code"] == "blocked"
    assert error["hints"] == [[{"symbol": "RegistrationType", "value": "Social"}]]

    # Follow the hint, then the observation goes through.
    response = client.delete(f"/sessions/{session_id}/facts/RegistrationType")
    assert response.status_code == 200
    response = client.post(
        f"/sessions/{session_id}/facts",
        json={"symbol": "SocialHousing", "value": False, "role": "observation"},
    )
    assert response.status_code == 200
    statuses = {s["name"]: s for s in response.json()["report"]["symbols"]}
    assert statuses["SocialHousing"]["status"] == "given_observation"
    assert statuses["SocialHousing"]["value"] is False


def test_solutions_endpoint(client):
    session_id = create(client)["id"]
    for name in ("SocialHousing", "LicensedSeller", "LowRent"):
        response = client.post(
            f"/sessions/{session_id}/facts",
            json={"symbol": name, "value": True, "role": "observation"},
        )
        assert response.status_code == 200
    response = client.get(f"/sessions/{session_id}/solutions", params={"limit": 10})
    assert response.status_code == 200
    models = response.json()["models"]
    assert len(models) == 3
    assert [(m["RegistrationType"], m["TaxRate"]) for m in models] == [
        ("Social", 1), ("Modest", 7), ("Other", 10),
    ]


def test_error_codes(client):
    session_id = create(client)["id"]

    assert client.get("/sessions/nope/report").status_code == 404
    assert client.get("/sessions/nope/report").json()["error"]["code"] == "unknown_session"

    response = client.post(
        f"/sessions/{session_id}/facts",
        json={"symbol": "SocialHousing", "value": True, "role": "decision"},
    )
    assert response.status_code == 409
    assert response.json()["error"]["code"] == "wrong_role"

    response = client.post(
        f"/sessions/{session_id}/facts",
        json={"symbol": "Mystery", "value": True, "role": "observation"},
    )
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "kb_parse_error"

    response = client.post(
        f"/sessions/{session_id}/facts",
        json={"symbol": "TaxRate", "value": "not-a-number", "role": "decision"},
    )
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "kb_parse_error"

    response = client.delete(f"/sessions/{session_id}/facts/TaxRate")
    assert response.status_code == 409
    assert response.json()["error"]["code"] == "not_interpreted"

    client.post(
        f"/sessions/{session_id}/facts",
        json={"symbol": "TaxRate", "value": 7, "role": "decision"},
    )
    response = client.post(
        f"/sessions/{session_id}/facts",
        json={"symbol": "TaxRate", "value": 9, "role": "decision"},
    )
    assert response.status_code == 409
    assert response.json()["error"]["code"] == "already_interpreted"


def test_report_modes(client):
    session_id = create(client)["id"]
    response = client.get(f"/sessions/{session_id}/report", params={"mode": "exact"})
    assert response.status_code == 200
    assert response.json()["report"]["mode"] == "exact"

    response = client.get(f"/sessions/{session_id}/report", params={"mode": "bogus"})
    assert response.status_code == 400


def test_size_guard_surfaces(client):
    from mxassist.bundled import legislation_kb_text

    session_id = create(client, legislation_kb_text())["id"]
    response = client.get(f"/sessions/{session_id}/report", params={"mode": "exact"})
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "size_guard"


def test_string_values_coerced(client):
    session_id = create(client)["id"]
    response = client.post(
        f"/sessions/{session_id}/facts",
        json={"symbol": "TaxRate", "value": "7", "role": "decision"},
    )
    assert response.status_code == 200
    statuses = {s["name"]: s for s in response.json()["report"]["symbols"]}
    assert statuses["TaxRate"]["value"] == 7
    assert statuses["LowRent"]["status"] == "to_verify"


def test_mutations_return_fresh_full_report(client):
    session_id = create(client)["id"]
    response = client.post(
        f"/sessions/{session_id}/facts",
        json={"symbol": "LowRent", "value": False, "role": "observation"},
    )
    report = response.json()["report"]
    statuses = {s["name"]: s["status"] for s in report["symbols"]}
    assert statuses == {
        "SocialHousing": "safe_consequence",
        "LicensedSeller": "irrelevant",
        "LowRent": "given_observation",
        "RegistrationType": "decision_consequence",
        "TaxRate": "decision_consequence",
    }
    assert report["banners"]["definite"] is True


def test_interleaved_clients_see_one_total_order(client):
    # Two threads hammer one session; the per-session lock must serialize the
    # mutations so the history grows by exactly the accepted count.
    import threading

    session_id = create(client)["id"]
    accepted = []
    errors = []

    def worker(symbol, value):
        response = client.post(
            f"/sessions/{session_id}/facts",
            json={"symbol": symbol, "value": value, "role": "observation"},
        )
        if response.status_code == 200:
            accepted.append(symbol)
        elif response.json()["error"]["code"] not in ("blocked", "already_interpreted"):
            errors.append(response.text)

    threads = [
        threading.Thread(target=worker, args=(sym, val))
        for sym, val in (
            ("SocialHousing", True), ("LicensedSeller", True), ("LowRent", True),
            ("SocialHousing", True),
        )
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    report = client.get(f"/sessions/{session_id}/report").json()["report"]
    assert report["history_length"] == len(accepted)
