from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from archlang.diagnostics import NOWHERE, SourcePos
from archlang.sema import ComponentKind, MsgType, ResolvedComponent

InstancePath = tuple[str, ...]


class Side(enum.Enum):
    PARENT = "parent"
    CHILD = "child"


class Origin(enum.IntEnum):
    EXPLICIT = 0
    INLINE = 1
    AUTO = 2

    @property
    def label(self) -> str:
        return self.name.lower()


class LocalEnd(NamedTuple):
    """A connector end as seen from the declaring level; ``instance`` None = own port."""

    instance: Optional[str]
    port: str

    def __str__(self) -> str:
        return self.port if self.instance is None else f"{self.instance}.{self.port}"


@dataclass(frozen=True)
class ChannelEnd:
    owner: InstancePath
    port: str
    side: Side

    @property
    def endpoint(self) -> "Endpoint":
        return Endpoint(self.owner, self.port)


@dataclass(frozen=True)
class Connector:
    level: InstancePath
    source: ChannelEnd
    target: ChannelEnd
    origin: Origin
    type: Optional[MsgType]
    pos: SourcePos = field(default=NOWHERE, compare=False)

    def describe(self) -> str:
        def end(e: ChannelEnd) -> str:
            return e.port if e.side is Side.PARENT else f"{e.owner[-1]}.{e.port}"
        return f"{end(self.source)} -> {end(self.target)}"


@dataclass
class InstanceNode:
    path: InstancePath
    type_name: str
    kind: ComponentKind
    children: list["InstanceNode"] = field(default_factory=list)


class Endpoint(NamedTuple):
    path: InstancePath
    port: str


class Destination(NamedTuple):
    path: InstancePath
    port: str
    boundary: bool  # True for a root out-port, False for a behavioral in-port


@dataclass
class ElaboratedArchitecture:
    root_type: str
    root: InstanceNode
    connectors: tuple[Connector, ...]
    components: dict[str, ResolvedComponent]

    def nodes(self) -> list[InstanceNode]:
        out: list[InstanceNode] = []

        def walk(n: InstanceNode) -> None:
            out.append(n)
            for c in n.children:
                walk(c)
        walk(self.root)
        return out

    def node(self, path: InstancePath) -> InstanceNode:
        n = self.root
        for seg in path:
            n = next(c for c in n.children if c.path[-1] == seg)
        return n

    def component_at(self, path: InstancePath) -> ResolvedComponent:
        return self.components[self.node(path).type_name]


@dataclass
class RoutingTable:
    routes: dict[Endpoint, tuple[Destination, ...]]

    def destinations(self, origin: Endpoint) -> tuple[Destination, ...]:
        return self.routes.get(origin, ())
