"""Batch CLI: run the whole pipeline on local files, no service required.

Exit codes: 0 success, 1 input error, 2 provider error. With the scripted
provider, output files are byte-identical across runs.
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from .core import make_document_set
from .errors import (
    ConstraintConflictError,
    EmptySummaryError,
    ExtractionEmptyError,
    InputError,
    ProtocolError,
    ProviderError,
    SummPilotError,
    ValidationError,
)
from .evaluation import evaluate
from .extraction import cluster_entities, extract_triples
from .gateway import HttpChatProvider, LlmGateway, ScriptedProvider
from .graph import build_graph, export_dot, export_graph_json
from .serialize import canonical_json, cluster_to_dict, triple_to_dict
from .summarize import RefinementRequest, refine_summary, summarize_auto

PROVIDER_ERRORS = (ProviderError, ProtocolError, ExtractionEmptyError, EmptySummaryError)


def build_gateway(provider_spec: str, model: str) -> LlmGateway:
    """Parse --provider: 'scripted:<playbook.json>' or an http(s) endpoint URL."""
    if provider_spec.startswith("scripted:"):
        playbook_path = provider_spec[len("scripted:"):]
        return LlmGateway(ScriptedProvider.from_file(playbook_path))
    if provider_spec.startswith(("http://", "https://")):
        return LlmGateway(HttpChatProvider(endpoint=provider_spec, model=model))
    raise InputError(
        f"unrecognized provider {provider_spec!r}; use scripted:<playbook.json> or an http(s) URL"
    )


def _load_refine_spec(path: Path) -> RefinementRequest:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot load refine spec {path}: {exc}") from exc
    return RefinementRequest(
        id=1,
        include=frozenset(data.get("include", [])),
        exclude=frozenset(data.get("exclude", [])),
        freeform=data.get("freeform"),
    )


@click.group()
def main():
    """Interactive multi-document summarization, batch edition."""
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr)


@main.command()
@click.argument("inputs", nargs=-1, required=True,
                type=click.Path(exists=False, path_type=Path))
@click.option("-o", "--output-dir", type=click.Path(path_type=Path), default=Path("out"),
              show_default=True, help="Directory for the emitted artifacts.")
@click.option("--provider", "provider_spec", required=True,
              help="scripted:<playbook.json> or an http(s) chat-completion endpoint.")
@click.option("--model", default="gpt-4o", show_default=True,
              help="Model name sent to an HTTP provider.")
@click.option("--emit-dot", is_flag=True, help="Also write graph.dot.")
@click.option("--refine-spec", type=click.Path(path_type=Path), default=None,
              help="JSON file {include[], exclude[], freeform?}; writes summary.v1.txt.")
@click.option("--verify-parallelism", default=4, show_default=True,
              help="Concurrent fact-verification calls.")
def run(inputs, output_dir: Path, provider_spec: str, model: str, emit_dot: bool,
        refine_spec, verify_parallelism: int):
    """Summarize INPUTS (text files) and write summary, triples, clusters,
    graph, and evaluation report into the output directory."""
    try:
        missing = [str(p) for p in inputs if not Path(p).is_file()]
        if missing:
            raise InputError(f"input files not found: {', '.join(missing)}")
        bodies = [Path(p).read_text(encoding="utf-8") for p in inputs]
        docset = make_document_set(bodies, titles=[Path(p).name for p in inputs])
        gateway = build_gateway(provider_spec, model)
        request = _load_refine_spec(Path(refine_spec)) if refine_spec else None
    except (InputError, ConstraintConflictError, ValidationError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    try:
        triples, warnings = extract_triples(gateway, docset)
        triples, clusters, cluster_warnings = cluster_entities(gateway, docset, triples)
        warnings += cluster_warnings
        graph = build_graph(triples, clusters, docset)
        dialogue, summary, summary_warnings = summarize_auto(gateway, docset)
        warnings += summary_warnings
        summaries = [summary]
        if request is not None:
            refined, refine_warnings = refine_summary(gateway, dialogue, request, triples, 1)
            warnings += refine_warnings
            summaries.append(refined)
        report, report_warnings = evaluate(
            gateway, docset, summaries[-1], parallelism=verify_parallelism
        )
        warnings += report_warnings
    except PROVIDER_ERRORS as exc:
        click.echo(f"provider error: {exc}", err=True)
        sys.exit(2)
    except SummPilotError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    output_dir.mkdir(parents=True, exist_ok=True)
    (output_dir / "summary.txt").write_text(summaries[0].text + "\n", encoding="utf-8")
    for extra in summaries[1:]:
        (output_dir / f"summary.v{extra.version}.txt").write_text(
            extra.text + "\n", encoding="utf-8"
        )
    (output_dir / "triples.json").write_text(
        canonical_json([triple_to_dict(t, index=i) for i, t in enumerate(triples)], indent=2),
        encoding="utf-8",
    )
    (output_dir / "clusters.json").write_text(
        canonical_json([cluster_to_dict(c) for c in clusters], indent=2), encoding="utf-8"
    )
    (output_dir / "graph.json").write_text(export_graph_json(graph), encoding="utf-8")
    if emit_dot:
        (output_dir / "graph.dot").write_text(export_dot(graph), encoding="utf-8")
    (output_dir / "report.json").write_text(
        canonical_json(report.to_dict(), indent=2), encoding="utf-8"
    )
    for warning in warnings:
        click.echo(f"warning: {warning.reason}: {warning.line}", err=True)
    click.echo(f"wrote {output_dir}/")


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, path_type=Path),
              help="Service config JSON: host, port, data_dir, provider{...}.")
def serve(config_path: Path):
    """Start the session REST service."""
    import uvicorn

    from .service import create_app, load_config

    try:
        config = load_config(config_path)
        app = create_app(config)
    except (InputError, OSError, KeyError, json.JSONDecodeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")


if __name__ == "__main__":
    main()
