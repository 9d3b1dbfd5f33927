from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from archlang.diagnostics import Reporter, run_phase
from archlang.sema.types import BUILTIN_TYPES, MsgType
from archlang.syntax import ast


@dataclass
class SymbolTable:
    components: dict[str, ast.ComponentDecl] = field(default_factory=dict)
    enums: dict[str, ast.EnumDecl] = field(default_factory=dict)

    def lookup_type(self, name: str) -> Optional[MsgType]:
        if name in BUILTIN_TYPES:
            return BUILTIN_TYPES[name]
        if name in self.enums:
            return MsgType.enum(name)
        return None

    def all_types(self) -> list[MsgType]:
        builtins = list(dict.fromkeys(BUILTIN_TYPES.values()))
        return builtins + [MsgType.enum(n) for n in self.enums]


def _build(units: list[ast.ModelUnit], reporter: Reporter) -> SymbolTable:
    table = SymbolTable()
    for unit in units:
        for comp in unit.components:
            first = table.components.get(comp.name)
            if first is not None:
                reporter.error(
                    "E0201", comp.pos,
                    f"duplicate component '{comp.name}' (first declared at {first.pos})")
                continue
            table.components[comp.name] = comp
            for en in comp.enums:
                if en.name in BUILTIN_TYPES:
                    reporter.error(
                        "E0202", en.pos, f"enum '{en.name}' redefines a built-in type")
                    continue
                prev = table.enums.get(en.name)
                if prev is not None:
                    reporter.error(
                        "E0202", en.pos,
                        f"duplicate enum '{en.name}' (first declared at {prev.pos})")
                    continue
                table.enums[en.name] = en
                seen: set[str] = set()
                for m in en.members:
                    if m in seen:
                        reporter.error(
                            "E0216", en.pos, f"enum '{en.name}' lists member '{m}' twice")
                    seen.add(m)
    return table


def build_symbols(units: list[ast.ModelUnit], reporter: Reporter | None = None) -> SymbolTable:
    """Collect every component and enum; type references are not resolved here."""
    return run_phase(_build, units, reporter=reporter)
