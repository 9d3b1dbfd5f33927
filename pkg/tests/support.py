"""Shared fixtures, a random architecture generator and a routing oracle."""

from __future__ import annotations

import random
from pathlib import Path

from archlang.arch import Destination, ElaboratedArchitecture, Endpoint
from archlang.diagnostics import Reporter
from archlang.pipeline import compile_sources
from archlang.sema import ComponentKind
from archlang.syntax.ast import Direction

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

COFFEE_FILES = [
    FIXTURES / "coffee_machine.arc",
    FIXTURES / "coffee_processing_unit.arc",
    FIXTURES / "coffee_stubs.arc",
]


def coffee_sources() -> list[tuple[str, str]]:
    return [(p.read_text(), p.name) for p in COFFEE_FILES]


def compile_text(*texts: str, roots=None):
    """Compile in-memory sources named a.arc, b.arc, ..."""
    sources = [(t, f"{chr(ord('a') + i)}.arc") for i, t in enumerate(texts)]
    return compile_sources(sources, roots, Reporter())


def error_codes(comp) -> list[str]:
    return [d.code for d in comp.reporter.sorted() if d.is_error]


# -- hop-by-hop routing oracle ----------------------------------------------

def hop_routes(ea: ElaboratedArchitecture, origin: Endpoint, max_hops: int = 10_000) -> tuple[Destination, ...]:
    """Route a message one connector and one hierarchy level at a time.

    Works from port directions and connector levels alone; shares nothing
    with the flattening code beyond the elaborated connector list.
    """
    kinds = {n.path: n.kind for n in ea.nodes()}

    def direction(ep: Endpoint) -> Direction:
        return ea.component_at(ep.path).port(ep.port).direction

    if kinds[()] is ComponentKind.BEHAVIORAL:
        return (Destination((), origin.port, direction(origin) is Direction.OUT),)

    found: list[Destination] = []
    hops = 0

    def forward(ep: Endpoint) -> None:
        nonlocal hops
        hops += 1
        if hops > max_hops:
            raise RecursionError("routing did not terminate")
        # an out-port is a connector source one level up; an in-port of a
        # structural instance is a source inside that instance
        if direction(ep) is Direction.OUT:
            level, side_child = ep.path[:-1], True
        else:
            level, side_child = ep.path, False
        for c in ea.connectors:
            if c.level != level or c.source.port != ep.port:
                continue
            if side_child and c.source.owner != ep.path:
                continue
            if not side_child and c.source.owner != level:
                continue
            if (c.source.side.value == "child") != side_child:
                continue
            tgt = Endpoint(c.target.owner, c.target.port)
            if c.target.side.value == "child":
                if kinds[tgt.path] is ComponentKind.BEHAVIORAL:
                    dest = Destination(tgt.path, tgt.port, False)
                    if dest not in found:
                        found.append(dest)
                else:
                    forward(tgt)
            elif level == ():
                dest = Destination((), tgt.port, True)
                if dest not in found:
                    found.append(dest)
            else:
                forward(tgt)

    forward(origin)
    return tuple(found)


def all_origins(ea: ElaboratedArchitecture) -> list[Endpoint]:
    root = ea.components[ea.root_type]
    origins = [Endpoint((), p.name) for p in root.ports if p.direction is Direction.IN]
    for n in ea.nodes():
        if n.kind is ComponentKind.BEHAVIORAL:
            rc = ea.components[n.type_name]
            origins += [Endpoint(n.path, p.name) for p in rc.ports if p.direction is Direction.OUT]
    return origins


# -- random well-formed architectures ----------------------------------------

TYPES = ("Boolean", "Integer")


class ArchGenerator:
    """Emits source text for random hierarchies (depth <= 3, <= 6 instances
    per level, <= 4 ports per component)."""

    def __init__(self, seed: int, max_depth: int = 3):
        self.rng = random.Random(seed)
        self.max_depth = max_depth
        self.decls: list[str] = []
        self.count = 0

    def generate(self) -> tuple[str, str]:
        root = self.component(1)
        return "\n\n".join(self.decls) + "\n", root

    def ports(self):
        rng = self.rng
        n = rng.randint(1, 4)
        ports = [(rng.choice(("in", "out")), rng.choice(TYPES), f"p{i}") for i in range(n)]
        if not any(d == "in" for d, _, _ in ports):
            ports[0] = ("in",) + ports[0][1:]
        return ports

    def component(self, depth: int) -> str:
        rng = self.rng
        self.count += 1
        name = f"C{self.count}"
        ports = self.ports()
        port_text = ", ".join(f"{d} {t} {n}" for d, t, n in ports)
        if depth == 1 or (depth < self.max_depth and rng.random() < 0.6):
            body = self.structural_body(depth, ports)
        else:
            body = self.behavioral_body(ports)
        self.decls.append(f"component {name} {{\n  port {port_text};\n{body}}}")
        return name

    def structural_body(self, depth: int, ports) -> str:
        rng = self.rng
        children = []
        for i in range(rng.randint(1, 6)):
            tname = self.component(depth + 1)
            cports = self._ports_of(tname)
            children.append((f"i{i}", tname, cports))
        sources = [((None, n), t) for d, t, n in ports if d == "in"]
        targets = [((None, n), t) for d, t, n in ports if d == "out"]
        for inst, _, cports in children:
            sources += [((inst, n), t) for d, t, n in cports if d == "out"]
            targets += [((inst, n), t) for d, t, n in cports if d == "in"]
        rng.shuffle(targets)
        inline: dict[str, list[str]] = {}
        fanout: dict[tuple, list[str]] = {}
        for (tinst, tport), ttype in targets:
            if rng.random() > 0.85:
                continue
            compatible = [s for s, st in sources if st == ttype]
            if not compatible:
                continue
            src = rng.choice(compatible)
            tref = tport if tinst is None else f"{tinst}.{tport}"
            if src[0] is not None and rng.random() < 0.3:
                inline.setdefault(src[0], []).append(f"{src[1]} -> {tref}")
            else:
                fanout.setdefault(src, []).append(tref)
        lines = []
        for inst, tname, _ in children:
            extra = f" [{', '.join(inline[inst])}]" if inst in inline else ""
            lines.append(f"  component {tname} {inst}{extra};")
        for (sinst, sport), trefs in fanout.items():
            sref = sport if sinst is None else f"{sinst}.{sport}"
            lines.append(f"  connect {sref} -> {', '.join(trefs)};")
        return "".join(line + "\n" for line in lines)

    def behavioral_body(self, ports) -> str:
        rng = self.rng
        lines = []
        outs = [(t, n) for d, t, n in ports if d == "out"]
        for d, t, n in ports:
            if d != "in" or rng.random() < 0.2:
                continue
            same = [o for ot, o in outs if ot == t]
            stmts = ""
            if same:
                target = rng.choice(same)
                value = "!v" if t == "Boolean" else "v + 1"
                stmts = f" {target}.send({value}); "
            cap = n[:1].upper() + n[1:]
            lines.append(f"  handler on{cap}Received({t} v) {{{stmts}}}")
        return "".join(line + "\n" for line in lines)

    def _ports_of(self, tname: str):
        decl = next(d for d in self.decls if d.startswith(f"component {tname} {{"))
        port_line = decl.split("port ", 1)[1].split(";", 1)[0]
        return [tuple(item.split()) for item in port_line.split(", ")]


def random_architectures(count: int, seed: int = 0):
    """Yield ``count`` clean (text, root, compilation) triples plus how many were rejected."""
    made, rejected, s = [], 0, seed
    while len(made) < count:
        text, root = ArchGenerator(s).generate()
        s += 1
        comp = compile_text(text, roots=[root])
        if not comp.ok:
            rejected += 1
            continue
        made.append((text, root, comp))
    return made, rejected
