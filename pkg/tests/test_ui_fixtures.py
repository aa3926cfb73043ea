"""Cross-language contract: the checked-in frontend fixtures must match what
the live service accepts and returns. The frontend unit tests replay the
same files, so green here plus green there proves the round trip."""

import json
import sys
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

sys.path.insert(0, str(Path(__file__).parent.parent / "scripts"))

from make_ui_fixtures import build_artifact
from recourse.service import create_app

FIXTURES = Path(__file__).parent.parent / "frontend" / "fixtures"

pytestmark = pytest.mark.skipif(
    not (FIXTURES / "constraint_matrix.json").exists(),
    reason="frontend fixtures not generated",
)


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(build_artifact(), artifact_version="fixture"))


def test_schema_fixture_is_current(client):
    stored = json.loads((FIXTURES / "schema.json").read_text())
    assert client.get("/schema").json() == stored


def test_constraint_matrix_accepted_without_rejections(client):
    cases = json.loads((FIXTURES / "constraint_matrix.json").read_text())
    assert len(cases) >= 20
    rejections = []
    for case in cases:
        resp = client.post("/explain", json=case["request"])
        if resp.status_code != 200:
            rejections.append((case["name"], resp.status_code, resp.text))
    assert rejections == []


def test_response_fixtures_are_current(client):
    stored = json.loads((FIXTURES / "responses.json").read_text())
    assert len(stored) == 20
    for i, expected in enumerate(stored[:5]):
        body = {"instance": {"index": i}, "modules": [1, 2, 3], "N": 5, "seed": 500 + i}
        got = client.post("/explain", json=body).json()
        got.pop("timing")
        trimmed = dict(expected)
        trimmed.pop("timing")
        assert got == trimmed
