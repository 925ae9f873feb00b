"""
Tests for the HTTP API, with the resource dependency swapped for the
in-memory left-neighbour resources
"""

import dataclasses

import pytest
from fastapi.testclient import TestClient

from tagger_app.main import app
from tagger_app.resources.store import ResourcesUnavailable, get_resources
from tagger_app.utils.errors import ResourceFormatError


@pytest.fixture
def client(neighbour_resources):
    app.dependency_overrides[get_resources] = lambda: neighbour_resources
    yield TestClient(app)
    app.dependency_overrides.clear()


def override(resolver):
    app.dependency_overrides[get_resources] = resolver
    return TestClient(app)


class TestHealth:
    def test_health(self, client):
        response = client.get("/api/health")
        assert response.status_code == 200
        assert response.json()["status"] == "ok"
        assert response.json()["resources"] in ("loaded", "unavailable")

    def test_root(self, client):
        assert client.get("/").json()["message"] == "Genotype Tagger API is running"


class TestTag:
    def test_tag_text(self, client):
        response = client.post("/api/tag", json={"text": "le chat mange."})
        assert response.status_code == 200
        body = response.json()
        assert len(body) == 1
        assert [token["tag"] for token in body[0]["tokens"]] == ["DET", "NOUN", "VERB", "PUNCT"]
        assert body[0]["total_cost"] == pytest.approx(sum(token["cost"] for token in body[0]["tokens"]))

    def test_sentences_in_order(self, client):
        body = client.post("/api/tag", json={"text": "Le chat mange. La porte ferme.", "mode": "bigram"}).json()
        assert [[token["surface"] for token in s["tokens"]] for s in body] == [
            ["Le", "chat", "mange", "."],
            ["La", "porte", "ferme", "."],
        ]

    def test_empty_text(self, client):
        response = client.post("/api/tag", json={"text": "   "})
        assert response.status_code == 200
        assert response.json() == []

    def test_invalid_mode(self, client):
        assert client.post("/api/tag", json={"text": "le chat", "mode": "fourgram"}).status_code == 422

    def test_missing_model(self, neighbour_resources):
        client = override(lambda: dataclasses.replace(neighbour_resources, model=None))
        try:
            response = client.post("/api/tag", json={"text": "le chat"})
        finally:
            app.dependency_overrides.clear()
        assert response.status_code == 503
        assert "no genotype model" in response.json()["detail"]


class TestResourceRoutes:
    def test_sizes(self, client, neighbour_resources):
        body = client.get("/api/resources/sizes").json()
        assert body["morphology"]["states"] == 2
        assert set(body) == {"morphology", "constraints", "ngrams"}

    def test_context(self, client):
        response = client.get("/api/resources/context", params={"genotype": "[PRON DET]"})
        assert response.status_code == 200
        body = response.json()
        assert body["genotype"] == "[DET PRON]"
        assert {summary["order"] for summary in body["summary"]} == {1, 2, 3}

    def test_context_unseen(self, client):
        body = client.get("/api/resources/context", params={"genotype": "[ACR]"}).json()
        assert body["rows"] == []

    def test_context_malformed(self, client):
        response = client.get("/api/resources/context", params={"genotype": "DET PRON"})
        assert response.status_code == 422

    def test_profile(self, client):
        body = client.post("/api/resources/profile", json={"text": "le chat zzz"}).json()
        assert body["tokens"] == 3
        assert (body["counts"]["0"], body["counts"]["1"], body["counts"]["2"]) == (1, 1, 1)


class TestErrors:
    def test_unavailable_resources(self):
        def unavailable():
            raise ResourcesUnavailable("TAGGER_TAGSET_PATH and TAGGER_LEXICON_PATH must be set")

        client = override(unavailable)
        try:
            response = client.get("/api/resources/sizes")
        finally:
            app.dependency_overrides.clear()
        assert response.status_code == 503

    def test_bad_resource_file(self):
        def broken():
            raise ResourceFormatError("expected surface<TAB>tag[<TAB>weight]", path="lexicon.tsv", line=3)

        client = override(broken)
        try:
            response = client.post("/api/tag", json={"text": "le chat"})
        finally:
            app.dependency_overrides.clear()
        assert response.status_code == 400
        assert response.json()["detail"].startswith("lexicon.tsv:3:")
