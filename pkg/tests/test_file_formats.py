import random

import pytest
from conftest import loop_graph, random_morse_graph, random_multigraph

from reeb_vineyard import (
    ExtendedDiagram,
    FileFormatError,
    InvalidGraphError,
    PersistencePair,
    ReebGraph,
    TransportParams,
    Vineyard,
    extended_diagram,
    format_value,
    parse_diagram,
    parse_graph,
    parse_vineyard,
    serialize_diagram,
    serialize_graph,
    serialize_vineyard,
    transport,
)
from reeb_vineyard.persistence import KIND_ORDER


def test_format_value():
    assert format_value(4.0) == "4"
    assert format_value(-0.5) == "-0.5"
    assert format_value(0.1 + 0.2) == "0.30000000000000004"


def test_parse_edge_graph():
    graph = parse_graph("v a 0\nv b 1\ne a b")
    assert graph == ReebGraph({"a": 0, "b": 1}, [("a", "b")])


def test_parse_loop_graph_with_comments():
    text = "# loop\nv a 0\nv b 1\nv c 3  # fork\nv d 4\n\ne a b\ne b c\ne b c\ne c d\n"
    assert parse_graph(text) == loop_graph()


def test_parse_graph_unknown_endpoint_has_line_number():
    with pytest.raises(FileFormatError) as excinfo:
        parse_graph("e a b")
    assert excinfo.value.line == 1
    assert "unknown endpoint" in str(excinfo.value)


@pytest.mark.parametrize(
    "text, line, message",
    [
        ("v a 0\nx a b", 2, "unknown line tag"),
        ("v a 0 1", 1, "expected"),
        ("v a 0\nv a 1", 2, "duplicate vertex"),
        ("v a zero", 1, "invalid number"),
        ("v a inf", 1, "non-finite"),
        ("v a 0\nv b 0\ne a b", 3, "equal adjacent values"),
        ("v a 0\ne a a", 2, "self-loop"),
    ],
)
def test_parse_graph_errors(text, line, message):
    with pytest.raises(FileFormatError) as excinfo:
        parse_graph(text)
    assert excinfo.value.line == line
    assert message in str(excinfo.value)


def test_parse_graph_rejects_isolated_vertex():
    with pytest.raises(InvalidGraphError):
        parse_graph("v a 0\nv b 1\nv c 2\ne a b")


def test_lenient_parse_keeps_invalid_graph():
    graph = parse_graph("v a 0\ne a b", strict=False)
    assert graph.edges == (("a", "b"),)


def test_serialize_graph_orders_lines():
    text = serialize_graph(ReebGraph({"top": 4, "bottom": 0.5}, [("top", "bottom")]))
    assert text == "v bottom 0.5\nv top 4\ne bottom top\n"


def test_serialize_empty_graph():
    assert serialize_graph(ReebGraph()) == ""


def test_parse_diagram():
    d = parse_diagram("# G2\next0 0 4\next1 1 3\n")
    assert d == ExtendedDiagram.from_tuples([("ext0", 0, 4), ("ext1", 1, 3)])


@pytest.mark.parametrize(
    "text, message",
    [
        ("ext2 0 1", "unknown pair kind"),
        ("ext0 1 1", "low must be below high"),
        ("ext0 1", "expected"),
    ],
)
def test_parse_diagram_errors(text, message):
    with pytest.raises(FileFormatError, match=message):
        parse_diagram(text)


def test_serialize_loop_diagram(g2):
    assert serialize_diagram(extended_diagram(g2)) == "ext0 0 4\next1 1 3\n"


def test_parse_vineyard_blocks():
    vineyard = parse_vineyard("ext0 0 4\next1 1 3\n---\next0 -0.5 4.5\n  ---  \next0 0 1\n")
    assert len(vineyard.diagrams) == 3
    assert vineyard.diagrams[1].points(KIND_ORDER[0]) == [(-0.5, 4.5)]


def test_parse_vineyard_error_line_is_global():
    with pytest.raises(FileFormatError) as excinfo:
        parse_vineyard("ext0 0 4\n---\nord0 3 2\n")
    assert excinfo.value.line == 3


def test_graph_round_trip_on_random_graphs():
    rng = random.Random(23)
    for i in range(100):
        graph = random_morse_graph(rng) if i % 2 else random_multigraph(rng)
        assert parse_graph(serialize_graph(graph)) == graph


def test_diagram_round_trip_on_random_diagrams():
    rng = random.Random(29)
    for _ in range(100):
        pairs = []
        for _ in range(rng.randint(0, 8)):
            low = rng.uniform(-10, 10)
            pairs.append(PersistencePair(rng.choice(KIND_ORDER), low, low + rng.uniform(1e-6, 5)))
        d = ExtendedDiagram(tuple(pairs))
        assert parse_diagram(serialize_diagram(d)) == d


def test_vineyard_round_trip(g5):
    first = extended_diagram(g5)
    second = transport(first, TransportParams(0.3, 0.2))
    vineyard = Vineyard((first, second, ExtendedDiagram()))
    assert parse_vineyard(serialize_vineyard(vineyard)) == vineyard
