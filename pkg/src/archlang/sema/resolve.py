"""Default naming, structural/behavioral classification and handler binding."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from archlang.diagnostics import Reporter, run_phase
from archlang.sema.symbols import SymbolTable
from archlang.sema.types import MsgType
from archlang.syntax import ast
from archlang.syntax.ast import Direction


class ComponentKind(enum.Enum):
    STRUCTURAL = "structural"
    BEHAVIORAL = "behavioral"


@dataclass(frozen=True)
class ResolvedPort:
    name: str
    direction: Direction
    type: Optional[MsgType]  # None when the type name is unknown
    decl: ast.PortDecl


@dataclass(frozen=True)
class ResolvedInstance:
    name: str
    type_name: str
    decl: ast.SubcomponentDecl


@dataclass
class ResolvedComponent:
    decl: ast.ComponentDecl
    ports: tuple[ResolvedPort, ...]
    subcomponents: tuple[ResolvedInstance, ...]
    state_types: dict[str, Optional[MsgType]] = field(default_factory=dict)
    kind: Optional[ComponentKind] = None
    # in-port name -> handler, filled by check_handlers
    handlers: dict[str, ast.HandlerDecl] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.decl.name

    def port(self, name: str) -> Optional[ResolvedPort]:
        for p in self.ports:
            if p.name == name:
                return p
        return None

    def instance(self, name: str) -> Optional[ResolvedInstance]:
        for s in self.subcomponents:
            if s.name == name:
                return s
        return None


def lower_first(name: str) -> str:
    return name[:1].lower() + name[1:]


def _resolve(decl: ast.ComponentDecl, table: SymbolTable, reporter: Reporter) -> ResolvedComponent:
    ports: list[ResolvedPort] = []
    taken: dict[str, ast.PortDecl] = {}
    explicit = {p.name for p in decl.ports if p.name is not None}
    for p in decl.ports:
        mtype = table.lookup_type(p.type_name)
        if mtype is None:
            reporter.error("E0213", p.pos, f"unknown type '{p.type_name}' for port")
        if p.name is None:
            name = p.type_name
            clash = name in explicit or any(
                q is not p and q.name is None and q.type_name == p.type_name for q in decl.ports)
            if clash:
                reporter.error(
                    "E0203", p.pos,
                    f"unnamed port of type '{p.type_name}' cannot default to '{name}': "
                    "the name is not unique in this component")
                continue
        else:
            name = p.name
            if name in taken:
                reporter.error("E0203", p.pos, f"duplicate port name '{name}'")
                continue
        taken[name] = p
        ports.append(ResolvedPort(name, p.direction, mtype, p))

    subs: list[ResolvedInstance] = []
    names: set[str] = set()
    for s in decl.subcomponents:
        if s.instance_name is None:
            same_type = [o for o in decl.subcomponents if o is not s and o.type_name == s.type_name]
            if same_type:
                reporter.error(
                    "E0204", s.pos,
                    f"instance of '{s.type_name}' needs a name: the type is used more than once")
                continue
            name = lower_first(s.type_name)
        else:
            name = s.instance_name
        if name in names:
            reporter.error("E0204", s.pos, f"duplicate instance name '{name}'")
            continue
        names.add(name)
        subs.append(ResolvedInstance(name, s.type_name, s))

    state_types: dict[str, Optional[MsgType]] = {}
    for v in decl.state_vars:
        if v.name in state_types:
            reporter.error("E0215", v.pos, f"duplicate state variable '{v.name}'")
            continue
        mtype = table.lookup_type(v.type_name)
        if mtype is None:
            reporter.error("E0213", v.pos, f"unknown type '{v.type_name}' for state variable")
        state_types[v.name] = mtype

    return ResolvedComponent(decl, tuple(ports), tuple(subs), state_types)


def resolve_defaults(decl: ast.ComponentDecl, table: SymbolTable,
                     reporter: Reporter | None = None) -> ResolvedComponent:
    return run_phase(_resolve, decl, table, reporter=reporter)


def _classify(rc: ResolvedComponent, reporter: Reporter) -> ComponentKind:
    d = rc.decl
    structural = bool(d.subcomponents or d.connects or d.autoconnect)
    behavioral = bool(d.handlers or d.state_vars)
    if structural and behavioral:
        reporter.error(
            "E0205", d.pos,
            f"component '{d.name}' mixes structure (subcomponents/connectors) "
            "with behavior (handlers/state)")
    kind = ComponentKind.STRUCTURAL if structural else ComponentKind.BEHAVIORAL
    rc.kind = kind
    return kind


def classify(rc: ResolvedComponent, reporter: Reporter | None = None) -> ComponentKind:
    """STRUCTURAL if the component has any structure, else BEHAVIORAL (possibly a stub)."""
    return run_phase(_classify, rc, reporter=reporter)


def _check_handlers(rc: ResolvedComponent, table: SymbolTable,
                    reporter: Reporter) -> list[tuple[ast.HandlerDecl, str]]:
    bound: list[tuple[ast.HandlerDecl, str]] = []
    for h in rc.decl.handlers:
        suffix = h.port_suffix
        if suffix is None:
            reporter.error(
                "E0206", h.pos, f"handler '{h.method_name}' does not follow on<Port>Received")
            continue
        port_name = lower_first(suffix)
        port = rc.port(port_name)
        if port is None or port.direction is not Direction.IN:
            what = "an outgoing port" if port is not None else "no such port"
            reporter.error(
                "E0206", h.pos,
                f"handler '{h.method_name}' has no incoming port '{port_name}' ({what})")
            continue
        ptype = table.lookup_type(h.param_type)
        if ptype is None:
            reporter.error("E0213", h.pos, f"unknown parameter type '{h.param_type}'")
        elif port.type is not None and ptype != port.type:
            reporter.error(
                "E0207", h.pos,
                f"handler '{h.method_name}' takes {ptype} but port '{port_name}' carries {port.type}")
        if port_name in rc.handlers:
            reporter.error("E0208", h.pos, f"second handler for port '{port_name}'")
            continue
        if h.param_name in rc.state_types:
            reporter.error(
                "E0215", h.pos, f"parameter '{h.param_name}' shadows a state variable")
        rc.handlers[port_name] = h
        bound.append((h, port_name))
    return bound


def check_handlers(rc: ResolvedComponent, table: SymbolTable,
                   reporter: Reporter | None = None) -> list[tuple[ast.HandlerDecl, str]]:
    """Bind every ``on<X>Received`` handler to the incoming port ``x``."""
    return run_phase(_check_handlers, rc, table, reporter=reporter)
