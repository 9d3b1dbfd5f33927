from __future__ import annotations

from archlang.arch.model import (
    Destination,
    ElaboratedArchitecture,
    Endpoint,
    RoutingTable,
)
from archlang.diagnostics import Reporter, SourcePos, run_phase
from archlang.sema import ComponentKind
from archlang.syntax.ast import Direction


def _flatten(ea: ElaboratedArchitecture, reporter: Reporter) -> RoutingTable:
    edges: dict[Endpoint, list[tuple[Endpoint, SourcePos]]] = {}
    for c in ea.connectors:
        edges.setdefault(c.source.endpoint, []).append((c.target.endpoint, c.pos))

    nodes = {n.path: n for n in ea.nodes()}
    root_rc = ea.components[ea.root_type]
    root_behavioral = ea.root.kind is ComponentKind.BEHAVIORAL

    def terminal(ep: Endpoint):
        if nodes[ep.path].kind is ComponentKind.BEHAVIORAL:
            return Destination(ep.path, ep.port, False)
        if ep.path == () and root_rc.port(ep.port).direction is Direction.OUT:
            return Destination((), ep.port, True)
        return None

    def walk(ep: Endpoint, on_path: set[Endpoint], out: list[Destination]) -> None:
        for nxt, pos in edges.get(ep, ()):
            dest = terminal(nxt)
            if dest is not None:
                if dest not in out:
                    out.append(dest)
                continue
            if nxt in on_path:
                continue  # reported by find_cycles
            on_path.add(nxt)
            walk(nxt, on_path, out)
            on_path.discard(nxt)

    # colour-marking DFS over structural ports; each back edge is one cycle
    colour: dict[Endpoint, int] = {}

    def find_cycles(ep: Endpoint) -> None:
        colour[ep] = 1
        for nxt, pos in edges.get(ep, ()):
            if terminal(nxt) is not None:
                continue
            if colour.get(nxt) == 1:
                where = "/".join(nxt.path) or ea.root_type
                reporter.error(
                    "E0308", pos,
                    f"messages on '{where}.{nxt.port}' circulate through structural ports only")
            elif nxt not in colour:
                find_cycles(nxt)
        colour[ep] = 2

    for ep in list(edges):
        if ep not in colour:
            find_cycles(ep)

    routes: dict[Endpoint, tuple[Destination, ...]] = {}
    origins: list[Endpoint] = [
        Endpoint((), p.name) for p in root_rc.ports if p.direction is Direction.IN]
    for node in ea.nodes():
        if node.kind is ComponentKind.BEHAVIORAL:
            rc = ea.components[node.type_name]
            origins += [Endpoint(node.path, p.name) for p in rc.ports
                        if p.direction is Direction.OUT]

    for origin in origins:
        if root_behavioral:
            in_port = root_rc.port(origin.port).direction is Direction.IN
            routes[origin] = (Destination((), origin.port, not in_port),)
            continue
        out: list[Destination] = []
        walk(origin, {origin}, out)
        routes[origin] = tuple(out)
    return RoutingTable(routes)


def flatten(ea: ElaboratedArchitecture, reporter: Reporter | None = None) -> RoutingTable:
    """Route every message origin straight to behavioral in-ports and root out-ports."""
    return run_phase(_flatten, ea, reporter=reporter)
