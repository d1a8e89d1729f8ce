import json

import pytest

from summpilot import (
    EntityCluster,
    LlmGateway,
    Mention,
    ScriptedProvider,
    Triple,
    build_graph,
    cluster_entities,
    export_dot,
    export_graph_json,
    extract_triples,
    graph_to_dict,
    make_document_set,
    node_size,
    singleton_cluster,
)


def triple(subject, relation, object_):
    return Triple(subject=subject, relation=relation, object=object_)


@pytest.fixture()
def tomjane_graph(tomjane_gateway, tomjane_docset):
    triples, _ = extract_triples(tomjane_gateway, tomjane_docset)
    merged, clusters, _ = cluster_entities(tomjane_gateway, tomjane_docset, triples)
    return build_graph(merged, clusters, tomjane_docset)


class TestBuildGraph:
    def test_worked_example_nodes_and_edges(self, tomjane_graph):
        node_ids = {n.id for n in tomjane_graph.nodes}
        assert node_ids == {"Tom", "Jane", "30"}
        edges = {(e.source, e.label, e.target) for e in tomjane_graph.edges}
        assert edges == {("Tom", "is married to", "Jane"), ("Jane", "aged", "30")}

    def test_empty_triples_give_empty_graph(self, tomjane_docset):
        graph = build_graph([], [], tomjane_docset)
        assert graph.nodes == ()
        assert graph.edges == ()

    def test_identical_triples_dedup_to_one_edge(self, tomjane_docset):
        a, b = singleton_cluster("A", 1), singleton_cluster("B", 1)
        graph = build_graph(
            [triple(a, "knows", b), triple(a, "KNOWS", b)], [a, b], tomjane_docset
        )
        assert len(graph.edges) == 1
        assert graph.edges[0].label == "knows"
        assert graph.edges[0].triple_ref == 0

    def test_parallel_edges_with_different_labels_kept(self, tomjane_docset):
        a, b = singleton_cluster("A", 1), singleton_cluster("B", 1)
        graph = build_graph(
            [triple(a, "knows", b), triple(a, "likes", b)], [a, b], tomjane_docset
        )
        assert len(graph.edges) == 2

    def test_self_loops_allowed(self, tomjane_docset):
        a = singleton_cluster("A", 1)
        graph = build_graph([triple(a, "references", a)], [a], tomjane_docset)
        assert len(graph.edges) == 1
        assert graph.nodes[0].degree == 2

    def test_no_orphan_nodes(self, tomjane_docset):
        a, b = singleton_cluster("A", 1), singleton_cluster("B", 1)
        unused = singleton_cluster("Unused", 9)
        graph = build_graph([triple(a, "knows", b)], [a, b, unused], tomjane_docset)
        assert {n.id for n in graph.nodes} == {"A", "B"}

    def test_weight_is_sum_of_mention_frequencies(self, tomjane_graph):
        jane = next(n for n in tomjane_graph.nodes if n.id == "Jane")
        # Jane appears 4 times, Tom's wife once
        assert jane.weight == 5

    def test_weight_floor_is_one(self, tomjane_docset):
        a = singleton_cluster("Quux", 0)
        b = singleton_cluster("Zap", 0)
        graph = build_graph([triple(a, "meets", b)], [a, b], tomjane_docset)
        assert all(n.weight == 1 for n in graph.nodes)

    def test_degree_counts_deduplicated_edges(self, tomjane_graph):
        degrees = {n.id: n.degree for n in tomjane_graph.nodes}
        assert degrees == {"Tom": 1, "Jane": 2, "30": 1}


class TestNodeSize:
    def test_golden_sizes(self, fixtures_dir):
        golden = json.loads((fixtures_dir / "node_sizes.json").read_text())["sizes"]
        for weight, size in golden.items():
            assert node_size(int(weight)) == size

    def test_weight_one_is_sixteen(self):
        assert node_size(1) == 16

    def test_weight_five_is_thirty_two(self):
        assert node_size(5) == 32

    def test_monotone_and_argmax_preserving(self):
        sizes = [node_size(w) for w in range(1, 200)]
        assert sizes == sorted(sizes)
        # the heaviest weight always carries the largest size
        assert node_size(199) == max(sizes)


class TestExportJson:
    def test_schema(self, tomjane_graph):
        data = json.loads(export_graph_json(tomjane_graph))
        assert set(data.keys()) == {"nodes", "edges"}
        for node in data["nodes"]:
            assert set(node.keys()) == {"id", "label", "weight", "size", "mentions"}
        for edge in data["edges"]:
            assert set(edge.keys()) == {"source", "target", "label"}

    def test_mentions_listed_representative_first(self, tomjane_graph):
        data = graph_to_dict(tomjane_graph)
        jane = next(n for n in data["nodes"] if n["id"] == "Jane")
        assert jane["mentions"][0] == "Jane"
        assert set(jane["mentions"]) == {"Jane", "Tom's wife"}

    def test_byte_stable(self, tomjane_graph):
        assert export_graph_json(tomjane_graph) == export_graph_json(tomjane_graph)

    def test_round_trip_isomorphic(self, tomjane_graph):
        data = json.loads(export_graph_json(tomjane_graph))
        node_ids = {n["id"] for n in data["nodes"]}
        assert node_ids == {n.id for n in tomjane_graph.nodes}
        edges = {(e["source"], e["label"], e["target"]) for e in data["edges"]}
        assert edges == {(e.source, e.label, e.target) for e in tomjane_graph.edges}
        for node in data["nodes"]:
            original = next(n for n in tomjane_graph.nodes if n.id == node["id"])
            assert node["weight"] == original.weight
            assert set(node["mentions"]) == set(original.cluster.surfaces())


class TestExportDot:
    def test_empty_graph(self, tomjane_docset):
        graph = build_graph([], [], tomjane_docset)
        assert export_dot(graph) == "digraph G {\n}\n"

    def test_edge_line(self, tomjane_graph):
        dot = export_dot(tomjane_graph)
        assert '"Tom" -> "Jane" [label="is married to"];' in dot

    def test_quote_escaping(self, tomjane_docset):
        a = singleton_cluster('The "Big" One', 1)
        b = singleton_cluster("B", 1)
        graph = build_graph([triple(a, "says", b)], [a, b], tomjane_docset)
        dot = export_dot(graph)
        assert '"The \\"Big\\" One"' in dot

    def test_deterministic(self, tomjane_graph):
        assert export_dot(tomjane_graph) == export_dot(tomjane_graph)
