"""Semantic analysis: symbols, naming defaults, classification and checks."""

from __future__ import annotations

from dataclasses import dataclass, field

from archlang.diagnostics import Reporter, run_phase
from archlang.sema.checks import check_integrity, typecheck_behavior
from archlang.sema.resolve import (
    ComponentKind,
    ResolvedComponent,
    ResolvedInstance,
    ResolvedPort,
    check_handlers,
    classify,
    lower_first,
    resolve_defaults,
)
from archlang.sema.symbols import SymbolTable, build_symbols
from archlang.sema.types import (
    BOOLEAN,
    INTEGER,
    OBJECT,
    STRING,
    MsgType,
    TypeKind,
    is_subtype,
)
from archlang.syntax import ast


@dataclass
class Analysis:
    table: SymbolTable
    components: dict[str, ResolvedComponent] = field(default_factory=dict)


def _analyze(units: list[ast.ModelUnit], reporter: Reporter) -> Analysis:
    table = build_symbols(units, reporter=reporter)
    result = Analysis(table)
    for name, decl in table.components.items():
        rc = resolve_defaults(decl, table, reporter=reporter)
        kind = classify(rc, reporter=reporter)
        check_integrity(rc, table, reporter=reporter)
        if kind is ComponentKind.BEHAVIORAL:
            check_handlers(rc, table, reporter=reporter)
            typecheck_behavior(rc, table, reporter=reporter)
        result.components[name] = rc
    return result


def analyze(units: list[ast.ModelUnit], reporter: Reporter | None = None) -> Analysis:
    """Run every semantic phase over the parsed units."""
    return run_phase(_analyze, units, reporter=reporter)


__all__ = [
    "Analysis", "BOOLEAN", "ComponentKind", "INTEGER", "MsgType", "OBJECT",
    "ResolvedComponent", "ResolvedInstance", "ResolvedPort", "STRING",
    "SymbolTable", "TypeKind", "analyze", "build_symbols", "check_handlers",
    "check_integrity", "classify", "is_subtype", "lower_first",
    "resolve_defaults", "typecheck_behavior",
]
