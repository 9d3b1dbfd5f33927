from __future__ import annotations

import json

from archlang.arch.model import ChannelEnd, Connector, ElaboratedArchitecture, Side
from archlang.sema import ComponentKind


def _end_json(end: ChannelEnd) -> dict:
    return {
        "instance": None if end.side is Side.PARENT else end.owner[-1],
        "port": end.port,
    }


def connector_json(c: Connector) -> dict:
    return {
        "level": list(c.level),
        "source": _end_json(c.source),
        "target": _end_json(c.target),
        "origin": c.origin.label,
        "type": str(c.type) if c.type is not None else None,
    }


def to_json(ea: ElaboratedArchitecture) -> str:
    doc = {
        "root": ea.root_type,
        "instances": [
            {"path": list(n.path), "type": n.type_name, "kind": n.kind.value}
            for n in ea.nodes()
        ],
        "connectors": [connector_json(c) for c in ea.connectors],
    }
    return json.dumps(doc, indent=2) + "\n"


def node_id(path) -> str:
    return "/" + "/".join(path)


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(ea: ElaboratedArchitecture) -> str:
    lines = [f'digraph "{_dot_escape(ea.root_type)}" {{', "  rankdir=LR;", "  compound=true;"]

    def emit(node, indent: str) -> None:
        nid = node_id(node.path)
        if node.kind is ComponentKind.STRUCTURAL:
            label = f"{node.path[-1]} : {node.type_name}" if node.path else node.type_name
            lines.append(f'{indent}subgraph "cluster_{nid}" {{')
            lines.append(f'{indent}  label="{_dot_escape(label)}";')
            # structural ports hang off a boundary point inside the cluster
            lines.append(f'{indent}  "{nid}" [shape=point, label=""];')
            for child in node.children:
                emit(child, indent + "  ")
            lines.append(f"{indent}}}")
        else:
            label = f"{node.path[-1]} : {node.type_name}" if node.path else node.type_name
            lines.append(f'{indent}"{nid}" [shape=box, label="{_dot_escape(label)}"];')

    emit(ea.root, "  ")
    for c in ea.connectors:
        label = f"{c.source.port} -> {c.target.port}\\n{c.type}"
        lines.append(
            f'  "{node_id(c.source.owner)}" -> "{node_id(c.target.owner)}" '
            f'[label="{label}", style={"dashed" if c.origin.label == "auto" else "solid"}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_graph(ea: ElaboratedArchitecture, fmt: str = "dot") -> str:
    """Render the architecture as Graphviz DOT or JSON; output is byte-stable."""
    if fmt == "dot":
        return to_dot(ea)
    if fmt == "json":
        return to_json(ea)
    raise ValueError(f"unknown graph format {fmt!r}")
