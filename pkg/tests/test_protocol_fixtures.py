"""The gateway client must speak exactly the shapes in fixtures/protocol/.

The same fixture files drive the model-service test suite, so both sides of
the wire agree on field names and types without sharing code.
"""

import json
from pathlib import Path

import pytest

from asumm.gateway import GatewayClient, GatewayConfig

FIXTURE_DIR = Path(__file__).parent.parent / "fixtures" / "protocol"


def load_fixture(name):
    return json.loads((FIXTURE_DIR / f"{name}.json").read_text())


def same_shape(value, template) -> bool:
    """Field names and scalar types match; values are free to differ."""
    if isinstance(template, dict):
        return (
            isinstance(value, dict)
            and set(value) >= set(template)
            and all(same_shape(value[k], v) for k, v in template.items())
        )
    if isinstance(template, list):
        if not isinstance(value, list):
            return False
        return not template or all(same_shape(item, template[0]) for item in value)
    if isinstance(template, bool):
        return isinstance(value, bool)
    if isinstance(template, (int, float)):
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    return isinstance(value, type(template))


class CapturingClient(GatewayClient):
    """Records dispatch bodies instead of hitting any transport."""

    def __init__(self, canned=None):
        super().__init__(GatewayConfig(mode="offline"))
        self.captured = []
        self.canned = canned

    def _request(self, endpoint, body, batch_index=0):
        self.captured.append((endpoint, body))
        if self.canned is not None:
            return self.canned
        return super()._request(endpoint, body, batch_index)


def _invoke(client, name, fixture):
    request = fixture["request"]
    if name == "embed":
        client.embed(request["texts"])
    elif name == "pair":
        client.pair(request["question"], request["sentence"], request["model"])
    elif name == "nli":
        client.nli_label(request["premise"], request["labels"])
    elif name == "moods":
        client.moods(request["sentence"])
    elif name == "summarize":
        client.summarize(
            request["text"],
            (request["family"], request["aspect"], request["strategy"]),
            max_len=request["max_len"],
        )
    else:
        raise AssertionError(name)


@pytest.mark.parametrize("name", ["embed", "pair", "nli", "moods", "summarize"])
def test_client_requests_match_fixtures(name):
    fixture = load_fixture(name)
    client = CapturingClient()
    _invoke(client, name, fixture)
    endpoint, body = client.captured[0]
    assert endpoint == fixture["endpoint"]
    assert same_shape(body, fixture["request"])
    assert set(body) == set(fixture["request"])


@pytest.mark.parametrize("name", ["embed", "pair", "nli", "moods", "summarize"])
def test_client_parses_fixture_responses(name):
    fixture = load_fixture(name)
    client = CapturingClient(canned=fixture["response"])
    _invoke(client, name, fixture)  # raises if the shape is unusable


@pytest.mark.parametrize("name", ["embed", "pair", "nli", "moods", "summarize"])
def test_offline_stub_responses_match_fixture_shapes(name):
    fixture = load_fixture(name)
    client = GatewayClient(GatewayConfig(mode="offline"))
    response = client._stub(fixture["endpoint"], fixture["request"])
    assert same_shape(response, fixture["response"])


def test_health_fixture_shape():
    fixture = load_fixture("health")
    client = GatewayClient(GatewayConfig(mode="offline"))
    assert same_shape(client.health(), {"status": "ok", "models": []})
    assert same_shape(fixture["response"], {"status": "ok", "models": []})
