import json
import warnings

import pytest

from scenograph.cli import main as cli_main

from conftest import FIXTURES

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from scenograph.service import create_app


@pytest.fixture
def client(tmp_path):
    app = create_app(tmp_path / "workspace", tmp_path / "catalog")
    with TestClient(app) as test_client:
        yield test_client


def load_fixture(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text(encoding="utf-8"))


def create(client, name="uis1.json") -> str:
    response = client.post("/scenarios", json=load_fixture(name))
    assert response.status_code == 201
    assert response.json()["revision"] == 1
    return response.json()["id"]


def test_create_and_get(client):
    scenario_id = create(client)
    response = client.get(f"/scenarios/{scenario_id}")
    assert response.status_code == 200
    body = response.json()
    assert body["revision"] == 1
    assert body["scenario"]["name"] == "UIS1"


def test_get_unknown_is_404(client):
    assert client.get("/scenarios/missing").status_code == 404


def test_create_rejects_malformed(client):
    response = client.post("/scenarios", json={"name": "broken"})
    assert response.status_code == 400


def test_put_requires_matching_revision(client):
    scenario_id = create(client)
    doc = load_fixture("uis1.json")
    first = client.put(f"/scenarios/{scenario_id}",
                       json={"revision": 1, "scenario": doc})
    assert first.status_code == 200
    assert first.json()["revision"] == 2
    stale = client.put(f"/scenarios/{scenario_id}",
                       json={"revision": 1, "scenario": doc})
    assert stale.status_code == 409


def test_validate_endpoint(client):
    scenario_id = create(client)
    response = client.post(f"/scenarios/{scenario_id}/validate")
    assert response.status_code == 200
    assert response.json()["is_valid"] is True


def test_validate_inline_document(client):
    scenario_id = create(client)
    response = client.post(f"/scenarios/{scenario_id}/validate",
                           json={"scenario": load_fixture("bad_join.json")})
    assert response.status_code == 200
    body = response.json()
    assert body["is_valid"] is False
    assert body["findings"][0]["rule_id"] == "R5"


def test_validate_malformed_body(client):
    scenario_id = create(client)
    response = client.post(f"/scenarios/{scenario_id}/validate",
                           json={"scenario": {"nodes": []}})
    assert response.status_code == 400


def test_export_parity_with_cli(client):
    scenario_id = create(client)
    response = client.post(f"/scenarios/{scenario_id}/export")
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("application/xml")
    golden = (FIXTURES / "golden" / "uis1.xosc").read_bytes()
    assert response.content == golden


def test_export_logical_is_422(client):
    scenario_id = create(client, "uis1_logical.json")
    response = client.post(f"/scenarios/{scenario_id}/export")
    assert response.status_code == 422
    assert response.json()["error"] == "LevelError"


def test_run_parity_with_cli(client, tmp_path, capsys):
    scenario_id = create(client)
    response = client.post(f"/scenarios/{scenario_id}/run", json={})
    assert response.status_code == 200
    api_trace = response.json()
    assert api_trace["outcome"]["kind"] == "Completed"

    out = tmp_path / "trace.json"
    with pytest.raises(SystemExit):
        cli_main(["run", str(FIXTURES / "uis1.json"), "--out", str(out)])
    cli_trace = json.loads(out.read_text())
    assert api_trace == cli_trace


def test_run_with_index_reaches_collision(client):
    scenario_id = create(client, "uis1_logical.json")
    response = client.post(f"/scenarios/{scenario_id}/run", json={"index": 7})
    assert response.status_code == 200
    outcome = response.json()["outcome"]
    assert outcome["kind"] == "Collision"
    assert outcome["pair"] == ["ego", "bike"]


def test_run_invalid_is_422(client):
    scenario_id = create(client, "bad_join.json")
    response = client.post(f"/scenarios/{scenario_id}/run", json={})
    assert response.status_code == 422
    assert response.json()["error"] == "InvalidScenario"


def test_library_endpoints(client):
    module_doc = load_fixture("crossing_maneuver.module.json")
    response = client.post("/library/modules", json=module_doc)
    assert response.status_code == 201
    revision = response.json()["revision"]

    listing = client.get("/library/modules")
    assert listing.status_code == 200
    entries = listing.json()["modules"]
    assert entries[0]["name"] == "CrossingManeuver"
    assert entries[0]["revision"] == revision

    detail = client.get("/library/modules/CrossingManeuver")
    assert detail.status_code == 200
    assert detail.json()["module"] == module_doc

    assert client.get("/library/modules/Nothing").status_code == 404


def test_workspace_file_is_canonical_format(client):
    # the service persists the same document the CLI would read
    scenario_id = create(client)
    response = client.get(f"/scenarios/{scenario_id}")
    assert response.json()["scenario"] == load_fixture("uis1.json")
