import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from summpilot.cli import main


@pytest.fixture()
def article_paths(fixtures_dir):
    return [
        str(fixtures_dir / "articles" / "tom_jane_1.txt"),
        str(fixtures_dir / "articles" / "tom_jane_2.txt"),
    ]


def run_cli(args):
    return CliRunner().invoke(main, args, catch_exceptions=False)


class TestRun:
    def test_writes_five_files(self, tmp_path, article_paths, playbook_path):
        out = tmp_path / "out"
        result = run_cli([
            "run", *article_paths,
            "--provider", f"scripted:{playbook_path}", "-o", str(out),
        ])
        assert result.exit_code == 0, result.output
        names = sorted(p.name for p in out.iterdir())
        assert names == [
            "clusters.json", "graph.json", "report.json", "summary.txt", "triples.json"
        ]
        assert (out / "summary.txt").read_text().strip() == (
            "Tom is married to Jane. Jane is aged 30 and sails often."
        )
        report = json.loads((out / "report.json").read_text())
        assert report["flagged_sentences"] == [1]

    def test_missing_input_file_exits_one(self, tmp_path, playbook_path):
        result = run_cli([
            "run", str(tmp_path / "missing.txt"),
            "--provider", f"scripted:{playbook_path}", "-o", str(tmp_path / "out"),
        ])
        assert result.exit_code == 1
        assert "not found" in result.stderr

    def test_unknown_provider_scheme_exits_one(self, tmp_path, article_paths):
        result = run_cli([
            "run", *article_paths, "--provider", "carrier-pigeon", "-o", str(tmp_path),
        ])
        assert result.exit_code == 1

    def test_provider_failure_exits_two(self, tmp_path, article_paths):
        empty_playbook = tmp_path / "empty.json"
        empty_playbook.write_text("[]", encoding="utf-8")
        result = run_cli([
            "run", *article_paths,
            "--provider", f"scripted:{empty_playbook}", "-o", str(tmp_path / "out"),
        ])
        assert result.exit_code == 2
        assert "provider error" in result.stderr

    def test_refine_spec_writes_v1(self, tmp_path, article_paths, playbook_path):
        refine = tmp_path / "refine.json"
        refine.write_text(json.dumps({"exclude": [0]}), encoding="utf-8")
        out = tmp_path / "out"
        result = run_cli([
            "run", *article_paths,
            "--provider", f"scripted:{playbook_path}",
            "-o", str(out), "--refine-spec", str(refine),
        ])
        assert result.exit_code == 0, result.output
        assert (out / "summary.v1.txt").read_text().strip() == (
            "Jane is aged 30 and enjoys the harbor."
        )
        # base summary still version 0
        assert "Tom is married" in (out / "summary.txt").read_text()

    def test_conflicting_refine_spec_exits_one(self, tmp_path, article_paths, playbook_path):
        refine = tmp_path / "refine.json"
        refine.write_text(json.dumps({"include": [0], "exclude": [0]}), encoding="utf-8")
        result = run_cli([
            "run", *article_paths,
            "--provider", f"scripted:{playbook_path}",
            "-o", str(tmp_path / "out"), "--refine-spec", str(refine),
        ])
        assert result.exit_code == 1

    def test_emit_dot(self, tmp_path, article_paths, playbook_path):
        out = tmp_path / "out"
        result = run_cli([
            "run", *article_paths,
            "--provider", f"scripted:{playbook_path}", "-o", str(out), "--emit-dot",
        ])
        assert result.exit_code == 0
        dot = (out / "graph.dot").read_text()
        assert dot.startswith("digraph G {")
        assert '"Tom" -> "Jane" [label="is married to"];' in dot

    def test_byte_identical_across_runs(self, tmp_path, article_paths, playbook_path):
        outputs = []
        for name in ("first", "second"):
            out = tmp_path / name
            result = run_cli([
                "run", *article_paths,
                "--provider", f"scripted:{playbook_path}", "-o", str(out), "--emit-dot",
            ])
            assert result.exit_code == 0
            outputs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
        assert outputs[0] == outputs[1]

    def test_graph_json_matches_exporter_schema(self, tmp_path, article_paths, playbook_path):
        out = tmp_path / "out"
        run_cli([
            "run", *article_paths,
            "--provider", f"scripted:{playbook_path}", "-o", str(out),
        ])
        graph = json.loads((out / "graph.json").read_text())
        assert {n["id"] for n in graph["nodes"]} == {"Tom", "Jane", "30"}
        jane = next(n for n in graph["nodes"] if n["id"] == "Jane")
        assert jane["weight"] == 5
        assert jane["size"] == 32


class TestServeConfig:
    def test_bad_config_exits_one(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text("{}", encoding="utf-8")
        result = run_cli(["serve", "--config", str(config)])
        assert result.exit_code == 1
