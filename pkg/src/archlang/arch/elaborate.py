"""Instance trees and connector elaboration at every structural level."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from archlang.arch.model import (
    ChannelEnd,
    Connector,
    ElaboratedArchitecture,
    InstanceNode,
    InstancePath,
    LocalEnd,
    Origin,
    Side,
)
from archlang.diagnostics import Reporter, SourcePos, run_phase
from archlang.sema import Analysis, ComponentKind, ResolvedComponent, ResolvedPort, is_subtype
from archlang.syntax import ast
from archlang.syntax.ast import Direction


@dataclass(frozen=True)
class LocalConnector:
    source: LocalEnd
    target: LocalEnd
    origin: Origin
    pos: SourcePos = field(compare=False)


def _build_tree(root_type: str, analysis: Analysis, reporter: Reporter) -> Optional[InstanceNode]:
    comps = analysis.components
    if root_type not in comps:
        return None

    def expand(path: InstancePath, type_name: str, stack: tuple[str, ...]) -> InstanceNode:
        rc = comps[type_name]
        node = InstanceNode(path, type_name, rc.kind or ComponentKind.BEHAVIORAL)
        for inst in rc.subcomponents:
            if inst.type_name not in comps:
                reporter.error(
                    "E0301", inst.decl.pos,
                    f"unknown component type '{inst.type_name}' for instance '{inst.name}'")
                continue
            if inst.type_name in stack:
                cycle = " -> ".join((*stack[stack.index(inst.type_name):], inst.type_name))
                reporter.error(
                    "E0302", inst.decl.pos, f"component type contains itself: {cycle}")
                continue
            node.children.append(
                expand(path + (inst.name,), inst.type_name, stack + (inst.type_name,)))
        return node

    return expand((), root_type, (root_type,))


def build_instance_tree(root_type: str, analysis: Analysis,
                        reporter: Reporter | None = None) -> Optional[InstanceNode]:
    """Expand ``root_type`` depth-first in declaration order; None if unknown."""
    return run_phase(_build_tree, root_type, analysis, reporter=reporter)


def lookup_end(rc: ResolvedComponent, end: LocalEnd, analysis: Analysis) -> Optional[ResolvedPort]:
    if end.instance is None:
        return rc.port(end.port)
    inst = rc.instance(end.instance)
    if inst is None or inst.type_name not in analysis.components:
        return None
    return analysis.components[inst.type_name].port(end.port)


def _ref_end(rc: ResolvedComponent, ref: ast.PortRef, analysis: Analysis,
             reporter: Reporter) -> Optional[LocalEnd]:
    if len(ref.parts) > 2:
        return None  # E0221, reported by the integrity check
    end = LocalEnd(ref.owner, ref.port)
    if end.instance is not None:
        inst = rc.instance(end.instance)
        if inst is None:
            reporter.error("E0303", ref.pos, f"no subcomponent '{end.instance}' in '{rc.name}'")
            return None
        if inst.type_name not in analysis.components:
            return None  # E0301
    if lookup_end(rc, end, analysis) is None:
        owner = f"instance '{end.instance}'" if end.instance else f"'{rc.name}'"
        reporter.error("E0303", ref.pos, f"{owner} has no port '{end.port}'")
        return None
    return end


def _collect_explicit(rc: ResolvedComponent, analysis: Analysis,
                      reporter: Reporter) -> list[LocalConnector]:
    out: list[LocalConnector] = []
    for c in rc.decl.connects:
        src = _ref_end(rc, c.source, analysis, reporter)
        for t in c.targets:
            tgt = _ref_end(rc, t, analysis, reporter)
            if src is not None and tgt is not None:
                out.append(LocalConnector(src, tgt, Origin.EXPLICIT, c.pos))
    for inst in rc.subcomponents:
        for ic in inst.decl.inline_connects:
            src_ref = ast.PortRef((inst.name, ic.source_port), ic.pos)
            src = _ref_end(rc, src_ref, analysis, reporter)
            tgt = _ref_end(rc, ic.target, analysis, reporter)
            if src is not None and tgt is not None:
                out.append(LocalConnector(src, tgt, Origin.INLINE, ic.pos))
    return out


def collect_explicit(rc: ResolvedComponent, analysis: Analysis,
                     reporter: Reporter | None = None) -> list[LocalConnector]:
    """Connectors from ``connect`` statements and inline ``[p -> q]`` short forms."""
    return run_phase(_collect_explicit, rc, analysis, reporter=reporter)


def _level_ends(rc: ResolvedComponent, analysis: Analysis):
    """Yield (end, port, is_source_role, is_target_role) for every port at a level."""
    for p in rc.ports:
        yield LocalEnd(None, p.name), p, p.direction is Direction.IN, p.direction is Direction.OUT
    for inst in rc.subcomponents:
        child = analysis.components.get(inst.type_name)
        if child is None:
            continue
        for p in child.ports:
            yield (LocalEnd(inst.name, p.name), p,
                   p.direction is Direction.OUT, p.direction is Direction.IN)


def _autoconnect(rc: ResolvedComponent, existing: list[LocalConnector], analysis: Analysis,
                 reporter: Reporter) -> list[LocalConnector]:
    if not rc.decl.autoconnect:
        return []
    fed = {c.target for c in existing}
    ends = list(_level_ends(rc, analysis))
    sources = [(e, p) for e, p, is_src, _ in ends if is_src]
    child_targets = [(e, p) for e, p, _, is_tgt in ends if is_tgt and e.instance is not None]
    parent_targets = [(e, p) for e, p, _, is_tgt in ends if is_tgt and e.instance is None]
    out: list[LocalConnector] = []
    pos = rc.decl.autoconnect_pos
    for tgt, tport in child_targets + parent_targets:
        if tgt in fed or tport.type is None:
            continue
        candidates = [
            src for src, sport in sources
            if sport.name == tport.name and sport.type is not None
            and is_subtype(sport.type, tport.type)
        ]
        if len(candidates) == 1:
            out.append(LocalConnector(candidates[0], tgt, Origin.AUTO, pos))
        elif len(candidates) > 1:
            listing = ", ".join(str(c) for c in candidates)
            reporter.error(
                "E0304", pos, f"ambiguous autoconnect for '{tgt}': candidates {listing}")
    return out


def autoconnect(rc: ResolvedComponent, existing: list[LocalConnector], analysis: Analysis,
                reporter: Reporter | None = None) -> list[LocalConnector]:
    """Derive connectors by equal port names for targets not already fed."""
    return run_phase(_autoconnect, rc, existing, analysis, reporter=reporter)


def _validate(rc: ResolvedComponent, conns: list[LocalConnector], analysis: Analysis,
              reporter: Reporter) -> None:
    fed: dict[LocalEnd, LocalConnector] = {}
    touched: set[LocalEnd] = set()
    for c in conns:
        touched.update((c.source, c.target))
        sport = lookup_end(rc, c.source, analysis)
        tport = lookup_end(rc, c.target, analysis)
        if sport is None or tport is None:
            continue
        src_ok = (sport.direction is Direction.IN) == (c.source.instance is None)
        tgt_ok = (tport.direction is Direction.OUT) == (c.target.instance is None)
        if not (src_ok and tgt_ok):
            reporter.error(
                "E0305", c.pos,
                f"illegal connector direction {c.source} ({_role(c.source, sport)}) -> "
                f"{c.target} ({_role(c.target, tport)})")
            continue
        if sport.type is not None and tport.type is not None and not is_subtype(sport.type, tport.type):
            reporter.error(
                "E0306", c.pos,
                f"connector {c.source} -> {c.target}: {sport.type} is not a subtype of {tport.type}")
        if c.target in fed:
            reporter.error(
                "E0307", c.pos,
                f"'{c.target}' is fed by both {fed[c.target].source} and {c.source}")
        else:
            fed[c.target] = c

    for end, port, _, _ in _level_ends(rc, analysis):
        if end not in touched:
            if end.instance is None:
                pos = port.decl.pos
            else:
                pos = rc.instance(end.instance).decl.pos
            reporter.warning("W0301", pos, f"port '{end}' in '{rc.name}' is not connected")


def _role(end: LocalEnd, port: ResolvedPort) -> str:
    side = "own" if end.instance is None else "child"
    return f"{side} {port.direction.value}"


def validate_connectors(rc: ResolvedComponent, conns: list[LocalConnector], analysis: Analysis,
                        reporter: Reporter | None = None) -> None:
    """Check direction, type and single-source rules; warn on unconnected ports."""
    return run_phase(_validate, rc, conns, analysis, reporter=reporter)


class Elaborator:
    """Elaborates roots over one analysis, computing each type's level only once."""

    def __init__(self, analysis: Analysis, reporter: Reporter):
        self.analysis = analysis
        self.reporter = reporter
        self._levels: dict[str, list[LocalConnector]] = {}

    def level(self, type_name: str) -> list[LocalConnector]:
        if type_name not in self._levels:
            rc = self.analysis.components[type_name]
            conns = _collect_explicit(rc, self.analysis, self.reporter)
            conns = conns + _autoconnect(rc, conns, self.analysis, self.reporter)
            _validate(rc, conns, self.analysis, self.reporter)
            self._levels[type_name] = conns
        return self._levels[type_name]

    def elaborate(self, root_type: str) -> Optional[ElaboratedArchitecture]:
        root = _build_tree(root_type, self.analysis, self.reporter)
        if root is None:
            return None
        connectors: list[Connector] = []

        def visit(node: InstanceNode) -> None:
            if node.kind is ComponentKind.STRUCTURAL:
                rc = self.analysis.components[node.type_name]
                local = sorted(enumerate(self.level(node.type_name)),
                               key=lambda ic: (ic[1].origin, ic[0]))
                for _, lc in local:
                    sport = lookup_end(rc, lc.source, self.analysis)
                    connectors.append(Connector(
                        level=node.path,
                        source=_abs(node.path, lc.source),
                        target=_abs(node.path, lc.target),
                        origin=lc.origin,
                        type=sport.type if sport else None,
                        pos=lc.pos,
                    ))
            for child in node.children:
                visit(child)

        visit(root)
        return ElaboratedArchitecture(root_type, root, tuple(connectors), self.analysis.components)


def _abs(level: InstancePath, end: LocalEnd) -> ChannelEnd:
    if end.instance is None:
        return ChannelEnd(level, end.port, Side.PARENT)
    return ChannelEnd(level + (end.instance,), end.port, Side.CHILD)


def elaborate(root_type: str, analysis: Analysis,
              reporter: Reporter | None = None) -> Optional[ElaboratedArchitecture]:
    """Instance tree plus the validated connector set of every structural level."""
    def run(rt, an, rep):
        return Elaborator(an, rep).elaborate(rt)
    return run_phase(run, root_type, analysis, reporter=reporter)
