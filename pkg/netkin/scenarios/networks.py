"""Built-in networks, addressable by name from a scenario config."""

import math
from pathlib import Path
from typing import Callable

from netkin.base import NetworkFormatError
from netkin.graph import EdgeRecord, Network, NodeRecord, load_network


DATA_DIR = Path(__file__).parent / "data"


def interval_network(length: float = 2.0, cells: int = 400) -> Network:
    return Network(
        nodes=[NodeRecord(id=0), NodeRecord(id=1)],
        edges=[EdgeRecord(id=0, start=0, end=1, length=length, cells=cells)],
    )


def one_to_one_network(cells: int = 200) -> Network:
    """Two unit edges in a row; together they cover the interval `[0, 2]`."""
    return Network(
        nodes=[NodeRecord(id=i) for i in range(3)],
        edges=[
            EdgeRecord(id=0, start=0, end=1, length=1.0, cells=cells),
            EdgeRecord(id=1, start=1, end=2, length=1.0, cells=cells),
        ],
    )


def tripod_network(cells: int = 50) -> Network:
    """A junction (node 0) with three outgoing unit edges."""
    return Network(
        nodes=[NodeRecord(id=i) for i in range(4)],
        edges=[EdgeRecord(id=i, start=0, end=i + 1, length=1.0, cells=cells) for i in range(3)],
    )


def large_network() -> Network:
    """23 nodes and 31 edges of lengths 0.5, 1 and sqrt(2); a reconstruction from a drawing.

    Nodes 0-11 form a 4x3 grid (`id = 4 y + x`) joined by unit edges and three diagonals. Nodes 12-22 are
    the open ends of the short inflow edges pointing into the grid.
    """
    return load_network(str(DATA_DIR / "large_network.json"))


BUILTIN_NETWORKS: dict[str, Callable[[], Network]] = {
    "interval": interval_network,
    "one_to_one": one_to_one_network,
    "tripod": tripod_network,
    "large": large_network,
}


def resolve_network(source: str) -> Network:
    """A built-in network by name, otherwise a network description file."""
    if source in BUILTIN_NETWORKS:
        return BUILTIN_NETWORKS[source]()
    return load_network(source)


def remesh(net: Network, dx: float) -> Network:
    """The same topology with about `length / dx` cells per edge (at least two)."""
    if dx <= 0:
        raise NetworkFormatError(f"cell size must be positive, got {dx}")
    edges = [edge.model_copy(update={"cells": max(2, math.floor(edge.length / dx + 0.5))}) for edge in net.edges]
    return Network(nodes=list(net.nodes), edges=edges)
