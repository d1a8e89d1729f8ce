"""Semantic graph over representative entities, plus JSON and DOT exports."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .core import DocumentSet
from .extraction import EntityCluster, Triple


@dataclass(frozen=True)
class GraphNode:
    id: str  # the cluster's representative surface
    cluster: EntityCluster
    weight: int  # sum of mention frequencies, floor 1
    degree: int  # incident deduplicated edge endpoints (a self-loop counts 2)


@dataclass(frozen=True)
class GraphEdge:
    source: str
    target: str
    label: str
    triple_ref: int  # index into the session triple list


@dataclass(frozen=True)
class SemanticGraph:
    nodes: tuple[GraphNode, ...]
    edges: tuple[GraphEdge, ...]


def node_size(weight: int) -> int:
    """Log-scaled display size so hub nodes stay readable."""
    return round(16 + 10 * math.log(weight))


def build_graph(triples: list[Triple], clusters: list[EntityCluster],
                docset: DocumentSet) -> SemanticGraph:
    """One node per cluster that appears in at least one triple; directed
    subject→object edges deduplicated on (source, casefolded label, target),
    first occurrence keeping its label and triple index."""
    del docset  # frequencies already live on the mentions
    cluster_by_rep = {c.representative: c for c in clusters}
    for triple in triples:
        for cluster in (triple.subject, triple.object):
            cluster_by_rep.setdefault(cluster.representative, cluster)

    edges: list[GraphEdge] = []
    seen_edges = set()
    used_reps: dict[str, None] = {}
    for index, triple in enumerate(triples):
        source = triple.subject.representative
        target = triple.object.representative
        used_reps.setdefault(source)
        used_reps.setdefault(target)
        key = (source, triple.relation.casefold(), target)
        if key in seen_edges:
            continue
        seen_edges.add(key)
        edges.append(GraphEdge(source=source, target=target,
                               label=triple.relation, triple_ref=index))

    degree: dict[str, int] = {rep: 0 for rep in used_reps}
    for edge in edges:
        degree[edge.source] += 1
        degree[edge.target] += 1

    nodes = []
    for rep in used_reps:
        cluster = cluster_by_rep[rep]
        weight = max(1, sum(m.frequency for m in cluster.mentions))
        nodes.append(GraphNode(id=rep, cluster=cluster, weight=weight, degree=degree[rep]))
    return SemanticGraph(nodes=tuple(nodes), edges=tuple(edges))


def _ordered_mentions(cluster: EntityCluster) -> list[str]:
    """Representative first, then by descending frequency and surface."""
    rest = [m for m in cluster.mentions if m.surface != cluster.representative]
    rest.sort(key=lambda m: (-m.frequency, m.surface))
    return [cluster.representative] + [m.surface for m in rest]


def graph_to_dict(graph: SemanticGraph) -> dict:
    return {
        "nodes": [
            {
                "id": node.id,
                "label": node.id,
                "weight": node.weight,
                "size": node_size(node.weight),
                "mentions": _ordered_mentions(node.cluster),
            }
            for node in sorted(graph.nodes, key=lambda n: n.id)
        ],
        "edges": [
            {"source": edge.source, "target": edge.target, "label": edge.label}
            for edge in sorted(graph.edges, key=lambda e: (e.source, e.target, e.label))
        ],
    }


def export_graph_json(graph: SemanticGraph) -> str:
    """Byte-stable JSON document for the UI: sorted keys, sorted elements."""
    return json.dumps(graph_to_dict(graph), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def export_dot(graph: SemanticGraph) -> str:
    """Deterministic DOT digraph for offline inspection."""
    lines = ["digraph G {"]
    for node in sorted(graph.nodes, key=lambda n: n.id):
        lines.append(f'  "{_dot_escape(node.id)}" [weight={node.weight}];')
    for edge in sorted(graph.edges, key=lambda e: (e.source, e.target, e.label)):
        lines.append(
            f'  "{_dot_escape(edge.source)}" -> "{_dot_escape(edge.target)}"'
            f' [label="{_dot_escape(edge.label)}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
