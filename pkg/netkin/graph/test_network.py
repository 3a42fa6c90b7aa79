import json

import numpy as np
import pytest

from netkin.base import NetworkFormatError, UnknownNodeError
from netkin.graph import node_local_frame, parse_network, serialize_network


TRIPOD = json.dumps(
    {
        "nodes": [{"id": 0}, {"id": 1}, {"id": 2}, {"id": 3}],
        "edges": [
            {"id": 0, "from": 0, "to": 1, "length": 1.0, "cells": 50},
            {"id": 1, "from": 0, "to": 2, "length": 1.0, "cells": 50},
            {"id": 2, "from": 0, "to": 3, "length": 1.0, "cells": 50},
        ],
    }
)

PATH = json.dumps(
    {
        "nodes": [{"id": 0}, {"id": 1}, {"id": 2}],
        "edges": [
            {"id": 0, "from": 0, "to": 1, "length": 1.0, "cells": 10},
            {"id": 1, "from": 1, "to": 2, "length": 2.0, "cells": 20},
        ],
    }
)


# =============================================================================
# parse_network
# =============================================================================


def test_tripod_has_degree_three_junction():
    net = parse_network(TRIPOD)
    assert net.degree(0) == 3
    assert net.junctions == [0]
    assert net.boundary_nodes == [1, 2, 3]


def test_single_edge_is_valid():
    net = parse_network(
        '{"nodes": [{"id": 0}, {"id": 1}], "edges": [{"id": 0, "from": 0, "to": 1, "length": 2, "cells": 4}]}'
    )
    assert len(net.edges) == 1
    assert net.edge(0).dx == pytest.approx(0.5)
    assert net.boundary_nodes == [0, 1]


def test_whitespace_insensitive():
    compact = json.dumps(json.loads(TRIPOD), separators=(",", ":"))
    assert parse_network(compact) == parse_network(TRIPOD)


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda doc: doc["edges"][0].update({"to": 7}), "unknown node"),
        (lambda doc: doc["edges"][0].update({"length": 0.0}), "invalid"),
        (lambda doc: doc["edges"][0].update({"length": -1.0}), "invalid"),
        (lambda doc: doc["edges"][0].update({"cells": 1}), "invalid"),
        (lambda doc: doc["nodes"].append({"id": 0}), "duplicate node"),
        (lambda doc: doc["edges"][1].update({"id": 0}), "duplicate edge"),
        (lambda doc: doc["edges"][0].update({"to": 0}), "self-loop"),
        (lambda doc: doc["nodes"][3].update({"id": 5}), "node ids must be dense"),
        (lambda doc: doc["edges"][2].update({"id": 3}), "edge ids must be dense"),
    ],
)
def test_invalid_documents(mutate, message):
    doc = json.loads(TRIPOD)
    mutate(doc)
    with pytest.raises(NetworkFormatError, match=message):
        parse_network(json.dumps(doc))


def test_syntax_error():
    with pytest.raises(NetworkFormatError, match="syntax"):
        parse_network('{"nodes": [}')


def test_missing_top_level_keys():
    with pytest.raises(NetworkFormatError):
        parse_network('{"nodes": []}')


def test_serialize_round_trip():
    for text in (TRIPOD, PATH):
        net = parse_network(text)
        assert parse_network(serialize_network(net)) == net


def test_edges_sorted_by_id():
    doc = json.loads(PATH)
    doc["edges"].reverse()
    net = parse_network(json.dumps(doc))
    assert net.edge_ids == [0, 1]


def test_graph_view():
    graph = parse_network(TRIPOD).to_graph()
    assert graph.number_of_nodes() == 4
    assert graph.number_of_edges() == 3
    assert graph.out_degree(0) == 3


# =============================================================================
# node_local_frame
# =============================================================================


def test_outgoing_edges_have_positive_signs():
    frame = node_local_frame(parse_network(TRIPOD), 0)
    assert frame.edges == (0, 1, 2)
    assert frame.signs == (1, 1, 1)


def test_in_and_out_edge():
    frame = node_local_frame(parse_network(PATH), 1)
    assert frame.edges == (0, 1)
    assert frame.signs == (-1, 1)


def test_unknown_node():
    with pytest.raises(UnknownNodeError):
        node_local_frame(parse_network(PATH), 42)


def test_reflection_flips_odd_components_of_incoming_edges():
    frame = node_local_frame(parse_network(PATH), 1)
    traces = np.array([[1.0, 0.5], [2.0, -0.25]])
    local = frame.to_local(traces, np.array([1, -1]))
    np.testing.assert_array_equal(local, [[1.0, -0.5], [2.0, -0.25]])


def test_reflection_is_an_involution():
    frame = node_local_frame(parse_network(PATH), 1)
    rng = np.random.default_rng(0)
    traces = rng.normal(size=(2, 5, 4))
    parity = np.array([1, -1, -1, 1])
    np.testing.assert_array_equal(frame.from_local(frame.to_local(traces, parity), parity), traces)
