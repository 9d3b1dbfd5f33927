"""Source-to-architecture driver shared by the CLI and the tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from archlang.arch import ElaboratedArchitecture, Elaborator, RoutingTable, flatten
from archlang.diagnostics import CompileError, Reporter
from archlang.sema import Analysis, ComponentKind, analyze
from archlang.syntax import ast, parse_model


@dataclass
class Compilation:
    reporter: Reporter
    units: list[ast.ModelUnit] = field(default_factory=list)
    analysis: Optional[Analysis] = None
    elaborations: dict[str, tuple[ElaboratedArchitecture, RoutingTable]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.reporter.has_errors

    def system(self, root: str) -> tuple[ElaboratedArchitecture, RoutingTable]:
        return self.elaborations[root]


class UnknownRoot(LookupError):
    pass


def compile_sources(sources: Iterable[tuple[str, str]], roots: Optional[list[str]] = None,
                    reporter: Reporter | None = None) -> Compilation:
    """Parse, analyze and elaborate ``(text, filename)`` pairs.

    ``roots`` selects the components to elaborate; None elaborates every
    structural component. Stops after the first phase that reports errors.
    """
    rep = reporter or Reporter()
    comp = Compilation(rep)
    for text, name in sources:
        comp.units.append(parse_model(text, name, reporter=rep))
    if rep.has_errors:
        return comp
    comp.analysis = analyze(comp.units, reporter=rep)
    if roots is not None:
        missing = [r for r in roots if r not in comp.analysis.components]
        if missing:
            raise UnknownRoot(missing[0])
    if rep.has_errors:
        return comp
    if roots is None:
        roots = [name for name, rc in comp.analysis.components.items()
                 if rc.kind is ComponentKind.STRUCTURAL]
    elab = Elaborator(comp.analysis, rep)
    for root in roots:
        before = rep.error_count()
        ea = elab.elaborate(root)
        if ea is None or rep.error_count() > before:
            continue
        rt = flatten(ea, reporter=rep)
        if rep.error_count() == before:
            comp.elaborations[root] = (ea, rt)
    return comp


def compile_files(paths: Iterable[str | Path], roots: Optional[list[str]] = None,
                  reporter: Reporter | None = None) -> Compilation:
    sources = [(Path(p).read_text(encoding="utf-8"), str(p)) for p in paths]
    return compile_sources(sources, roots, reporter)


def build_system(sources: Iterable[tuple[str, str]], root: str) -> tuple[ElaboratedArchitecture, RoutingTable]:
    """Compile and return the elaborated system for ``root``, raising on any error."""
    comp = compile_sources(sources, [root])
    if not comp.ok:
        raise CompileError(comp.reporter.diagnostics)
    return comp.system(root)
