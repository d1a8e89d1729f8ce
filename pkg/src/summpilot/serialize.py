"""JSON mappings for domain values plus a canonical serializer.

Everything the service persists or returns goes through canonical_json so
snapshots and responses stay byte-stable across runs and restarts.
"""

from __future__ import annotations

import json

from .core import Document, Provenance, Sentence, Summary
from .extraction import EntityCluster, Mention, Triple


def canonical_json(payload, indent: int | None = None) -> str:
    if indent is None:
        return json.dumps(payload, sort_keys=True, ensure_ascii=False,
                          separators=(",", ":"))
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=indent) + "\n"


def cluster_to_dict(cluster: EntityCluster) -> dict:
    ordered = [cluster.representative] + sorted(
        (m.surface for m in cluster.mentions if m.surface != cluster.representative)
    )
    by_surface = {m.surface: m for m in cluster.mentions}
    return {
        "representative": cluster.representative,
        "mentions": [
            {"surface": s, "frequency": by_surface[s].frequency} for s in ordered
        ],
    }


def cluster_from_dict(data: dict) -> EntityCluster:
    return EntityCluster(
        mentions=tuple(Mention(m["surface"], m["frequency"]) for m in data["mentions"]),
        representative=data["representative"],
    )


def triple_to_dict(triple: Triple, index: int | None = None) -> dict:
    data = {
        "subject": cluster_to_dict(triple.subject),
        "relation": triple.relation,
        "object": cluster_to_dict(triple.object),
        "source_line": triple.source_line,
    }
    if index is not None:
        data["index"] = index
    return data


def triple_from_dict(data: dict) -> Triple:
    return Triple(
        subject=cluster_from_dict(data["subject"]),
        relation=data["relation"],
        object=cluster_from_dict(data["object"]),
        source_line=data.get("source_line", ""),
    )


def document_to_dict(document: Document) -> dict:
    return {"id": document.id, "title": document.title, "body": document.body}


def summary_to_dict(summary: Summary) -> dict:
    return {
        "version": summary.version,
        "text": summary.text,
        "provenance": summary.provenance.value,
        "request_id": summary.request_id,
        "sentences": [
            {"index": s.index, "text": s.text, "start": s.start, "end": s.end}
            for s in summary.sentences
        ],
    }


def summary_from_dict(data: dict) -> Summary:
    return Summary(
        version=data["version"],
        text=data["text"],
        provenance=Provenance(data["provenance"]),
        request_id=data.get("request_id"),
        sentences=tuple(
            Sentence(index=s["index"], text=s["text"], start=s["start"], end=s["end"])
            for s in data["sentences"]
        ),
    )
