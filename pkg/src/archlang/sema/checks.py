"""Behavior type checking and communication-integrity checks."""

from __future__ import annotations

from typing import Optional

from archlang.diagnostics import Reporter, run_phase
from archlang.sema.resolve import ResolvedComponent
from archlang.sema.symbols import SymbolTable
from archlang.sema.types import BOOLEAN, INTEGER, STRING, MsgType, TypeKind, is_subtype
from archlang.syntax import ast
from archlang.syntax.ast import BinaryOp, Direction, UnaryOp

_ARITH = {BinaryOp.SUB, BinaryOp.MUL, BinaryOp.DIV}
_RELATIONAL = {BinaryOp.LT, BinaryOp.LE, BinaryOp.GT, BinaryOp.GE}
_LOGICAL = {BinaryOp.AND, BinaryOp.OR}


class ExprChecker:
    """Infers expression types; ``None`` marks an already-reported error."""

    def __init__(self, table: SymbolTable, names: dict[str, Optional[MsgType]], reporter: Reporter):
        self.table = table
        self.names = names
        self.reporter = reporter

    def error(self, node, msg: str, code: str = "E0209") -> None:
        self.reporter.error(code, node.pos, msg)

    def infer(self, e: ast.Expr) -> Optional[MsgType]:
        if isinstance(e, ast.BoolLit):
            return BOOLEAN
        if isinstance(e, ast.IntLit):
            return INTEGER
        if isinstance(e, ast.StringLit):
            return STRING
        if isinstance(e, ast.EnumLit):
            en = self.table.enums.get(e.type_name)
            if en is None:
                # foreign dotted access; reported by the integrity check
                return None
            if e.member not in en.members:
                self.error(e, f"enum '{e.type_name}' has no member '{e.member}'", "E0214")
                return None
            return MsgType.enum(e.type_name)
        if isinstance(e, ast.VarRef):
            if e.name not in self.names:
                self.error(e, f"undeclared name '{e.name}'", "E0210")
                return None
            return self.names[e.name]
        if isinstance(e, ast.Unary):
            t = self.infer(e.operand)
            want = BOOLEAN if e.op is UnaryOp.NOT else INTEGER
            if t is not None and t != want:
                self.error(e, f"operator '{e.op.value}' needs {want}, got {t}")
                return None
            return want if t is not None else None
        if isinstance(e, ast.Binary):
            lt, rt = self.infer(e.left), self.infer(e.right)
            if lt is None or rt is None:
                return None
            op = e.op
            if op in _LOGICAL:
                if lt == BOOLEAN and rt == BOOLEAN:
                    return BOOLEAN
            elif op in _ARITH:
                if lt == INTEGER and rt == INTEGER:
                    return INTEGER
            elif op in _RELATIONAL:
                if lt == INTEGER and rt == INTEGER:
                    return BOOLEAN
            elif op is BinaryOp.ADD:
                if lt == rt and lt in (INTEGER, STRING):
                    return lt
            elif op in (BinaryOp.EQ, BinaryOp.NEQ):
                if lt == rt:
                    return BOOLEAN
            self.error(e, f"operator '{op.value}' not defined on {lt} and {rt}")
            return None
        raise TypeError(f"not an expression: {e!r}")


def _typecheck(rc: ResolvedComponent, table: SymbolTable, reporter: Reporter) -> None:
    for v in rc.decl.state_vars:
        vtype = rc.state_types.get(v.name)
        if v.initializer is None:
            if vtype is not None and vtype.kind in (TypeKind.ENUM, TypeKind.OBJECT):
                reporter.error(
                    "E0212", v.pos,
                    f"state variable '{v.name}' of type {vtype} needs an initializer")
            continue
        itype = ExprChecker(table, {}, reporter).infer(v.initializer)
        if vtype is not None and itype is not None and not is_subtype(itype, vtype):
            reporter.error(
                "E0209", v.initializer.pos,
                f"cannot initialize {vtype} variable '{v.name}' with {itype}")

    for port_name, h in rc.handlers.items():
        port = rc.port(port_name)
        names = dict(rc.state_types)
        names[h.param_name] = port.type
        checker = ExprChecker(table, names, reporter)
        _check_block(h.body, rc, checker)


def _check_block(stmts, rc: ResolvedComponent, checker: ExprChecker) -> None:
    rep = checker.reporter
    for s in stmts:
        if isinstance(s, ast.Send):
            vtype = checker.infer(s.value)
            if s.owner:
                continue
            port = rc.port(s.port)
            if port is None or port.direction is not Direction.OUT:
                why = "an incoming port" if port is not None else "not a port of this component"
                rep.error("E0211", s.pos, f"cannot send on '{s.port}': {why}")
                continue
            if vtype is not None and port.type is not None and not is_subtype(vtype, port.type):
                rep.error("E0209", s.pos, f"port '{s.port}' carries {port.type}, not {vtype}")
        elif isinstance(s, ast.Assign):
            vtype = checker.infer(s.value)
            if s.owner:
                continue
            if s.name not in rc.state_types:
                rep.error("E0210", s.pos, f"'{s.name}' is not a state variable")
                continue
            target = rc.state_types[s.name]
            if vtype is not None and target is not None and not is_subtype(vtype, target):
                rep.error("E0209", s.pos, f"cannot assign {vtype} to {target} variable '{s.name}'")
        elif isinstance(s, ast.If):
            ctype = checker.infer(s.cond)
            if ctype is not None and ctype != BOOLEAN:
                rep.error("E0209", s.cond.pos, f"condition must be Boolean, got {ctype}")
            _check_block(s.then, rc, checker)
            _check_block(s.orelse, rc, checker)


def typecheck_behavior(rc: ResolvedComponent, table: SymbolTable,
                       reporter: Reporter | None = None) -> None:
    """Statically type every handler body and state initializer of ``rc``."""
    return run_phase(_typecheck, rc, table, reporter=reporter)


def _walk_exprs(e: ast.Expr):
    yield e
    if isinstance(e, ast.Unary):
        yield from _walk_exprs(e.operand)
    elif isinstance(e, ast.Binary):
        yield from _walk_exprs(e.left)
        yield from _walk_exprs(e.right)


def _walk_stmts(stmts):
    for s in stmts:
        yield s
        if isinstance(s, ast.If):
            yield from _walk_stmts(s.then)
            yield from _walk_stmts(s.orelse)


def _stmt_exprs(s):
    if isinstance(s, ast.If):
        return _walk_exprs(s.cond)
    return _walk_exprs(s.value)


def _integrity(rc: ResolvedComponent, table: SymbolTable, reporter: Reporter) -> None:
    d = rc.decl
    for h in d.handlers:
        for s in _walk_stmts(h.body):
            if isinstance(s, ast.Send) and s.owner:
                target = ".".join((*s.owner, s.port))
                reporter.error(
                    "E0220", s.pos,
                    f"send on '{target}' reaches outside the component; only own out-ports may send")
            elif isinstance(s, ast.Assign) and s.owner:
                target = ".".join((*s.owner, s.name))
                reporter.error("E0220", s.pos, f"assignment to foreign element '{target}'")
            for e in _stmt_exprs(s):
                if isinstance(e, ast.EnumLit) and e.type_name not in table.enums:
                    reporter.error(
                        "E0220", e.pos,
                        f"'{e.type_name}.{e.member}' reads a foreign element")
    for v in d.state_vars:
        if isinstance(v.initializer, ast.EnumLit) and v.initializer.type_name not in table.enums:
            reporter.error(
                "E0220", v.initializer.pos,
                f"'{v.initializer.type_name}.{v.initializer.member}' is not an enum member")

    refs = [r for c in d.connects for r in (c.source, *c.targets)]
    refs += [ic.target for s in d.subcomponents for ic in s.inline_connects]
    for r in refs:
        if len(r.parts) > 2:
            reporter.error(
                "E0221", r.pos,
                f"port reference '{r}' reaches below a direct subcomponent")


def check_integrity(rc: ResolvedComponent, table: SymbolTable,
                    reporter: Reporter | None = None) -> None:
    """Reject handler code and connectors that bypass declared interfaces."""
    return run_phase(_integrity, rc, table, reporter=reporter)
