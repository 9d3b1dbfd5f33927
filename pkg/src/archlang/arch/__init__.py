from archlang.arch.elaborate import (
    Elaborator,
    LocalConnector,
    autoconnect,
    build_instance_tree,
    collect_explicit,
    elaborate,
    validate_connectors,
)
from archlang.arch.export import export_graph
from archlang.arch.flatten import flatten
from archlang.arch.model import (
    ChannelEnd,
    Connector,
    Destination,
    ElaboratedArchitecture,
    Endpoint,
    InstanceNode,
    InstancePath,
    LocalEnd,
    Origin,
    RoutingTable,
    Side,
)

__all__ = [
    "ChannelEnd", "Connector", "Destination", "ElaboratedArchitecture",
    "Elaborator", "Endpoint", "InstanceNode", "InstancePath", "LocalConnector",
    "LocalEnd", "Origin", "RoutingTable", "Side", "autoconnect",
    "build_instance_tree", "collect_explicit", "elaborate", "export_graph",
    "flatten", "validate_connectors",
]
