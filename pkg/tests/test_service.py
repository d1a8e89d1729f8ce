import json
import shutil

import pytest
from fastapi.testclient import TestClient

from summpilot.gateway import ProviderConfig
from summpilot.service import MAX_DOCUMENT_CHARS, ServiceConfig, create_app


@pytest.fixture()
def make_app(tmp_path, playbook_path):
    def factory(data_dir=None, playbook=None):
        config = ServiceConfig(
            data_dir=data_dir or tmp_path / "data",
            provider=ProviderConfig(kind="scripted",
                                    playbook_path=str(playbook or playbook_path)),
        )
        return create_app(config)

    return factory


@pytest.fixture()
def client(make_app):
    return TestClient(make_app())


@pytest.fixture()
def session_id(client, tomjane_articles):
    response = client.post(
        "/sessions", json={"documents": [{"body": b} for b in tomjane_articles]}
    )
    assert response.status_code == 201
    return response.json()["session_id"]


def advance(client, session_id, *steps):
    for step in steps:
        response = client.post(f"/sessions/{session_id}/{step}")
        assert response.status_code == 200, (step, response.text)
    return response


class TestCreateSession:
    def test_two_articles_created(self, client, tomjane_articles):
        response = client.post(
            "/sessions", json={"documents": [{"body": b} for b in tomjane_articles]}
        )
        assert response.status_code == 201
        assert response.json()["session_id"]

    def test_zero_articles_rejected(self, client):
        assert client.post("/sessions", json={"documents": []}).status_code == 400

    def test_seventeen_articles_rejected(self, client):
        response = client.post(
            "/sessions", json={"documents": [{"body": f"doc {i}"} for i in range(17)]}
        )
        assert response.status_code == 400
        assert "16" in response.json()["error"]

    def test_oversize_document_rejected(self, client):
        body = "x" * (MAX_DOCUMENT_CHARS + 1)
        response = client.post("/sessions", json={"documents": [{"body": body}]})
        assert response.status_code == 400

    def test_blank_document_rejected(self, client):
        response = client.post("/sessions", json={"documents": [{"body": "   "}]})
        assert response.status_code == 400


class TestAnalyze:
    def test_merged_cluster_in_snapshot(self, client, session_id):
        response = client.post(f"/sessions/{session_id}/analyze")
        assert response.status_code == 200
        data = response.json()
        surfaces = {
            tuple(sorted(m["surface"] for m in cluster["mentions"]))
            for cluster in data["clusters"]
        }
        assert ("Jane", "Tom's wife") in surfaces
        aged = data["triples"][1]
        assert aged["relation"] == "aged"
        assert {m["surface"] for m in aged["subject"]["mentions"]} == {"Jane", "Tom's wife"}
        assert data["graph"]["nodes"]

    def test_repeat_call_conflicts(self, client, session_id):
        advance(client, session_id, "analyze")
        assert client.post(f"/sessions/{session_id}/analyze").status_code == 409

    def test_unknown_session(self, client):
        assert client.post("/sessions/nope/analyze").status_code == 404

    def test_provider_outage_leaves_phase_unchanged(self, make_app, tmp_path,
                                                    tomjane_articles):
        broken = tmp_path / "broken_playbook.json"
        broken.write_text("[]", encoding="utf-8")
        client = TestClient(make_app(playbook=broken))
        sid = client.post(
            "/sessions", json={"documents": [{"body": b} for b in tomjane_articles]}
        ).json()["session_id"]
        response = client.post(f"/sessions/{sid}/analyze")
        assert response.status_code == 502
        snapshot = client.get(f"/sessions/{sid}").json()
        assert snapshot["phase"] == "created"
        assert snapshot["triples"] == []


class TestSummarize:
    def test_version_zero_deterministic(self, client, session_id):
        advance(client, session_id, "analyze")
        response = client.post(f"/sessions/{session_id}/summarize")
        assert response.status_code == 200
        summary = response.json()["summary"]
        assert summary["version"] == 0
        assert summary["text"] == "Tom is married to Jane. Jane is aged 30 and sails often."

    def test_double_call_conflicts(self, client, session_id):
        advance(client, session_id, "analyze", "summarize")
        assert client.post(f"/sessions/{session_id}/summarize").status_code == 409

    def test_before_analyze_conflicts(self, client, session_id):
        assert client.post(f"/sessions/{session_id}/summarize").status_code == 409

    def test_unknown_session(self, client):
        assert client.post("/sessions/nope/summarize").status_code == 404


class TestRefine:
    def test_include_appends_version(self, client, session_id):
        advance(client, session_id, "analyze", "summarize")
        response = client.post(f"/sessions/{session_id}/refine", json={"include": [1]})
        assert response.status_code == 200
        assert response.json()["summary"]["version"] == 1
        snapshot = client.get(f"/sessions/{session_id}").json()
        assert [s["version"] for s in snapshot["summaries"]] == [0, 1]

    def test_overlap_rejected(self, client, session_id):
        advance(client, session_id, "analyze", "summarize")
        response = client.post(
            f"/sessions/{session_id}/refine", json={"include": [0], "exclude": [0]}
        )
        assert response.status_code == 400

    def test_out_of_range_rejected(self, client, session_id):
        advance(client, session_id, "analyze", "summarize")
        response = client.post(f"/sessions/{session_id}/refine", json={"include": [99]})
        assert response.status_code == 400

    def test_freeform_only_increments(self, client, session_id):
        advance(client, session_id, "analyze", "summarize")
        response = client.post(
            f"/sessions/{session_id}/refine", json={"freeform": "make it short"}
        )
        assert response.status_code == 200
        assert response.json()["summary"]["version"] == 1

    def test_refine_requires_summary_phase(self, client, session_id):
        advance(client, session_id, "analyze")
        assert client.post(
            f"/sessions/{session_id}/refine", json={"include": [0]}
        ).status_code == 409


class TestEvaluate:
    def test_report_for_latest_version(self, client, session_id):
        advance(client, session_id, "analyze", "summarize")
        response = client.post(f"/sessions/{session_id}/evaluate", json={})
        assert response.status_code == 200
        report = response.json()
        assert report["consistency"] == 2 / 3
        assert report["flagged_sentences"] == [1]
        assert {f["verdict"] for f in report["facts"]} == {"verified", "unverified"}

    def test_cache_returns_identical_bytes(self, client, session_id):
        advance(client, session_id, "analyze", "summarize")
        first = client.post(f"/sessions/{session_id}/evaluate", json={})
        second = client.post(f"/sessions/{session_id}/evaluate", json={})
        assert first.content == second.content

    def test_unknown_version_is_404(self, client, session_id):
        advance(client, session_id, "analyze", "summarize")
        response = client.post(f"/sessions/{session_id}/evaluate", json={"version": 99})
        assert response.status_code == 404

    def test_explicit_version_selects_summary(self, client, session_id):
        advance(client, session_id, "analyze", "summarize")
        client.post(f"/sessions/{session_id}/refine", json={"exclude": [0]})
        v0 = client.post(f"/sessions/{session_id}/evaluate", json={"version": 0}).json()
        v1 = client.post(f"/sessions/{session_id}/evaluate", json={"version": 1}).json()
        assert v0 != v1

    def test_requires_a_summary(self, client, session_id):
        advance(client, session_id, "analyze")
        assert client.post(f"/sessions/{session_id}/evaluate", json={}).status_code == 409


class TestPersistence:
    def full_flow(self, client, articles):
        sid = client.post(
            "/sessions", json={"documents": [{"body": b} for b in articles]}
        ).json()["session_id"]
        advance(client, sid, "analyze", "summarize")
        client.post(f"/sessions/{sid}/refine", json={"exclude": [0]})
        client.post(f"/sessions/{sid}/evaluate", json={})
        return sid

    def test_restart_reproduces_identical_snapshot(self, make_app, tmp_path,
                                                   tomjane_articles):
        data_dir = tmp_path / "persist"
        client = TestClient(make_app(data_dir=data_dir))
        sid = self.full_flow(client, tomjane_articles)
        before = client.get(f"/sessions/{sid}").content

        restarted = TestClient(make_app(data_dir=data_dir))
        after = restarted.get(f"/sessions/{sid}").content
        assert before == after

    def test_refinement_works_after_restart(self, make_app, tmp_path, tomjane_articles):
        data_dir = tmp_path / "persist2"
        client = TestClient(make_app(data_dir=data_dir))
        sid = self.full_flow(client, tomjane_articles)

        restarted = TestClient(make_app(data_dir=data_dir))
        response = restarted.post(f"/sessions/{sid}/refine", json={"include": [1]})
        assert response.status_code == 200
        assert response.json()["summary"]["version"] == 2

    def test_corrupt_snapshot_skipped_with_warning(self, make_app, tmp_path,
                                                   tomjane_articles, caplog):
        data_dir = tmp_path / "mixed"
        client = TestClient(make_app(data_dir=data_dir))
        sid = self.full_flow(client, tomjane_articles)
        (data_dir / "zz-corrupt.json").write_text("{not json", encoding="utf-8")

        with caplog.at_level("WARNING"):
            restarted = TestClient(make_app(data_dir=data_dir))
        assert any("corrupt" in r.message for r in caplog.records)
        assert restarted.get(f"/sessions/{sid}").status_code == 200

    def test_missing_data_dir_created(self, make_app, tmp_path):
        data_dir = tmp_path / "does" / "not" / "exist"
        TestClient(make_app(data_dir=data_dir))
        assert data_dir.is_dir()

    def test_snapshot_written_per_mutation(self, make_app, tmp_path, tomjane_articles):
        data_dir = tmp_path / "watch"
        client = TestClient(make_app(data_dir=data_dir))
        sid = client.post(
            "/sessions", json={"documents": [{"body": b} for b in tomjane_articles]}
        ).json()["session_id"]
        snapshot_path = data_dir / f"{sid}.json"
        assert snapshot_path.exists()
        assert json.loads(snapshot_path.read_text())["phase"] == "created"
        advance(client, sid, "analyze")
        assert json.loads(snapshot_path.read_text())["phase"] == "analyzed"


class TestUiMount:
    def test_static_ui_served_alongside_api(self, tmp_path, playbook_path,
                                            tomjane_articles):
        ui = tmp_path / "ui"
        ui.mkdir()
        (ui / "index.html").write_text("<html><body>shell</body></html>")
        config = ServiceConfig(
            data_dir=tmp_path / "data",
            provider=ProviderConfig(kind="scripted", playbook_path=str(playbook_path)),
            ui_dir=ui,
        )
        client = TestClient(create_app(config))
        assert "shell" in client.get("/").text
        response = client.post(
            "/sessions", json={"documents": [{"body": b} for b in tomjane_articles]}
        )
        assert response.status_code == 201


class TestPhaseMachine:
    def test_get_is_idempotent(self, client, session_id):
        first = client.get(f"/sessions/{session_id}").content
        second = client.get(f"/sessions/{session_id}").content
        assert first == second

    def test_phase_never_regresses(self, client, session_id):
        order = {"created": 0, "analyzed": 1, "summarized": 2}
        last = 0
        for step in ["analyze", "analyze", "summarize", "refine", "evaluate", "analyze"]:
            if step == "refine":
                client.post(f"/sessions/{session_id}/{step}", json={"include": [0]})
            elif step == "evaluate":
                client.post(f"/sessions/{session_id}/{step}", json={})
            else:
                client.post(f"/sessions/{session_id}/{step}")
            phase = client.get(f"/sessions/{session_id}").json()["phase"]
            assert order[phase] >= last
            last = order[phase]
