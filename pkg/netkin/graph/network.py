"""Network topology, orientation conventions and the network description format.

A network description is a JSON document::

    {
      "nodes": [{"id": 0}, {"id": 1}],
      "edges": [{"id": 0, "from": 0, "to": 1, "length": 1.0, "cells": 50}]
    }

Edges are oriented from `from` to `to`. Seen from a node, an edge is outgoing (sign +1) when the node is
its start and incoming (sign -1) when the node is its end.
"""

import json
from functools import cached_property
from os import path as osp
from typing import Literal

import networkx as nx
import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from netkin.base import NetworkFormatError, UnknownNodeError, find_duplicates


class NodeRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int = Field(description="Node id (non-negative integer)", ge=0)


class EdgeRecord(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    id: int = Field(description="Edge id (non-negative integer)", ge=0)
    start: int = Field(description="Id of the node the edge points out of", alias="from", ge=0)
    end: int = Field(description="Id of the node the edge points into", alias="to", ge=0)
    length: float = Field(description="Edge length in space units", gt=0)
    cells: int = Field(description="Number of finite-volume cells on the edge", ge=2)

    @property
    def dx(self) -> float:
        return self.length / self.cells


class Incidence(BaseModel):
    model_config = ConfigDict(frozen=True)

    edge: int
    sign: Literal[-1, 1]


class Network(BaseModel):
    """Immutable directed network of 1-D edges. Nodes and edges are kept sorted by id."""

    model_config = ConfigDict(frozen=True)

    nodes: list[NodeRecord]
    edges: list[EdgeRecord]

    @model_validator(mode="after")
    def _check_consistency(self) -> "Network":
        node_ids = [node.id for node in self.nodes]
        edge_ids = [edge.id for edge in self.edges]
        if duplicates := find_duplicates(node_ids):
            raise ValueError(f"duplicate node ids: {duplicates}")
        if duplicates := find_duplicates(edge_ids):
            raise ValueError(f"duplicate edge ids: {duplicates}")
        for kind, ids in (("node", node_ids), ("edge", edge_ids)):
            if sorted(ids) != list(range(len(ids))):
                raise ValueError(f"{kind} ids must be dense from 0, got {sorted(ids)}")

        known = set(node_ids)
        for edge in self.edges:
            for endpoint in (edge.start, edge.end):
                if endpoint not in known:
                    raise ValueError(f"edge {edge.id} references unknown node {endpoint}")
            if edge.start == edge.end:
                raise ValueError(f"edge {edge.id} is a self-loop at node {edge.start}")

        self.nodes.sort(key=lambda node: node.id)
        self.edges.sort(key=lambda edge: edge.id)
        return self

    @cached_property
    def incidences(self) -> dict[int, tuple[Incidence, ...]]:
        table: dict[int, list[Incidence]] = {node.id: [] for node in self.nodes}
        for edge in self.edges:
            table[edge.start].append(Incidence(edge=edge.id, sign=1))
            table[edge.end].append(Incidence(edge=edge.id, sign=-1))
        return {node_id: tuple(items) for node_id, items in table.items()}

    @cached_property
    def edges_by_id(self) -> dict[int, EdgeRecord]:
        return {edge.id: edge for edge in self.edges}

    @property
    def node_ids(self) -> list[int]:
        return [node.id for node in self.nodes]

    @property
    def edge_ids(self) -> list[int]:
        return [edge.id for edge in self.edges]

    def edge(self, edge_id: int) -> EdgeRecord:
        try:
            return self.edges_by_id[edge_id]
        except KeyError:
            raise NetworkFormatError(f"unknown edge {edge_id}") from None

    def degree(self, node_id: int) -> int:
        if node_id not in self.incidences:
            raise UnknownNodeError(node_id)
        return len(self.incidences[node_id])

    @property
    def boundary_nodes(self) -> list[int]:
        return [node_id for node_id, items in self.incidences.items() if len(items) == 1]

    @property
    def junctions(self) -> list[int]:
        return [node_id for node_id, items in self.incidences.items() if len(items) >= 2]

    def to_graph(self) -> nx.MultiDiGraph:
        """A networkx view of the topology, edge attributes `id`, `length` and `cells`."""
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.node_ids)
        for edge in self.edges:
            graph.add_edge(edge.start, edge.end, key=edge.id, id=edge.id, length=edge.length, cells=edge.cells)
        return graph

    def is_connected(self) -> bool:
        graph = self.to_graph()
        return graph.number_of_nodes() > 0 and nx.is_weakly_connected(graph)


class NodeLocalFrame(BaseModel):
    """A node seen with all incident edges oriented away from it.

    Traces of incoming edges are reflected (`x -> -x`), which flips the sign of the odd state components.
    Reflection is an involution, so `to_local` is its own inverse.
    """

    model_config = ConfigDict(frozen=True)

    node: int
    edges: tuple[int, ...]
    signs: tuple[Literal[-1, 1], ...]

    @property
    def degree(self) -> int:
        return len(self.edges)

    def to_local(self, traces: np.ndarray, parity: np.ndarray) -> np.ndarray:
        """Reflect per-edge traces of shape `(degree, ..., n)` given the component parity of shape `(n,)`."""
        traces = np.asarray(traces, dtype=float)
        parity = np.asarray(parity, dtype=float)
        if traces.shape[0] != self.degree:
            raise ValueError(f"expected traces for {self.degree} edges at node {self.node}, got {traces.shape[0]}")
        signs = np.asarray(self.signs)
        factors = np.where(signs[:, None] < 0, parity[None, :], 1.0)
        factors = factors.reshape((self.degree,) + (1,) * (traces.ndim - 2) + (parity.shape[0],))
        return traces * factors

    from_local = to_local


def node_local_frame(net: Network, node: int) -> NodeLocalFrame:
    if node not in net.incidences:
        raise UnknownNodeError(node)
    items = net.incidences[node]
    return NodeLocalFrame(node=node, edges=tuple(i.edge for i in items), signs=tuple(i.sign for i in items))


def parse_network(text: str) -> Network:
    """Parse and validate a network description document."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise NetworkFormatError(f"syntax error in network description: {e}") from e
    if not isinstance(document, dict) or "nodes" not in document or "edges" not in document:
        raise NetworkFormatError("network description needs top-level keys 'nodes' and 'edges'")

    try:
        net = Network.model_validate(document)
    except ValidationError as e:
        raise NetworkFormatError(f"invalid network description: {e}") from e

    if not net.is_connected():
        logger.warning(f"Network with {len(net.nodes)} nodes and {len(net.edges)} edges is not connected")
    return net


def serialize_network(net: Network) -> str:
    return json.dumps(
        {
            "nodes": [node.model_dump() for node in net.nodes],
            "edges": [edge.model_dump(by_alias=True) for edge in net.edges],
        },
        indent=2,
    )


def load_network(file_path: str) -> Network:
    if not osp.exists(file_path):
        raise FileNotFoundError(f"Network file not found: {file_path}")
    with open(file_path, "r") as f:
        return parse_network(f.read())
