from netkin.graph.network import (
    EdgeRecord,
    Incidence,
    Network,
    NodeLocalFrame,
    NodeRecord,
    load_network,
    node_local_frame,
    parse_network,
    serialize_network,
)


__all__ = [
    "EdgeRecord",
    "Incidence",
    "Network",
    "NodeLocalFrame",
    "NodeRecord",
    "load_network",
    "node_local_frame",
    "parse_network",
    "serialize_network",
]
