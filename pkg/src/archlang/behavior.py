"""Interpreter for handler bodies.

Values are plain immutable Python objects (``bool``, ``int``, ``str`` and
:class:`EnumValue`), so sending one never shares state between instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from archlang.diagnostics import NOWHERE, SourcePos
from archlang.sema.types import MsgType, TypeKind
from archlang.syntax import ast
from archlang.syntax.ast import BinaryOp, UnaryOp

INT_MIN = -(2**63)


@dataclass(frozen=True)
class EnumValue:
    type_name: str
    member: str

    def __str__(self) -> str:
        return f"{self.type_name}.{self.member}"


RuntimeValue = Union[bool, int, str, EnumValue]


@dataclass(frozen=True)
class Emission:
    port: str
    value: RuntimeValue
    seq: int


class RuntimeFault(Exception):
    """A reachable runtime failure in handler code (division by zero)."""

    def __init__(self, message: str, pos: SourcePos = NOWHERE, handler: str = "",
                 path: tuple[str, ...] = ()):
        super().__init__(message)
        self.message = message
        self.pos = pos
        self.handler = handler
        self.path = path


class TypeConfusion(RuntimeError):
    """Raised if an operand has the wrong runtime type; typechecked code never gets here."""


def wrap(n: int) -> int:
    return (n - INT_MIN) % 2**64 + INT_MIN


def runtime_type_name(v: RuntimeValue) -> str:
    if isinstance(v, bool):
        return "Boolean"
    if isinstance(v, int):
        return "Integer"
    if isinstance(v, str):
        return "String"
    if isinstance(v, EnumValue):
        return v.type_name
    raise TypeConfusion(f"not a runtime value: {v!r}")


def conforms(v: RuntimeValue, t: MsgType) -> bool:
    """True if ``v`` is a legal value for a port or variable of type ``t``."""
    if t.kind is TypeKind.OBJECT:
        return isinstance(v, (bool, int, str, EnumValue))
    return runtime_type_name(v) == str(t)


def values_equal(a: RuntimeValue, b: RuntimeValue) -> bool:
    # True == 1 in Python; the language keeps Boolean and Integer apart
    return type(a) is type(b) and a == b


def default_value(t: MsgType) -> RuntimeValue:
    if t.kind is TypeKind.BOOLEAN:
        return False
    if t.kind is TypeKind.INTEGER:
        return 0
    if t.kind is TypeKind.STRING:
        return ""
    raise ValueError(f"type {t} has no default value; an initializer is required")


def literal_value(e: ast.Expr) -> RuntimeValue:
    """Evaluate a constant literal (as used by initializers and stimuli)."""
    return eval_expr(e, None, {})


def _bool(v) -> bool:
    if type(v) is not bool:
        raise TypeConfusion(f"expected Boolean, got {v!r}")
    return v


def _int(v) -> int:
    if type(v) is not int:
        raise TypeConfusion(f"expected Integer, got {v!r}")
    return v


def eval_expr(e: ast.Expr, param: tuple[str, RuntimeValue] | None,
              state: Mapping[str, RuntimeValue]) -> RuntimeValue:
    if isinstance(e, ast.BoolLit):
        return e.value
    if isinstance(e, ast.IntLit):
        return wrap(e.value)
    if isinstance(e, ast.StringLit):
        return e.value
    if isinstance(e, ast.EnumLit):
        return EnumValue(e.type_name, e.member)
    if isinstance(e, ast.VarRef):
        if param is not None and e.name == param[0]:
            return param[1]
        if e.name in state:
            return state[e.name]
        raise TypeConfusion(f"unbound name {e.name!r}")
    if isinstance(e, ast.Unary):
        v = eval_expr(e.operand, param, state)
        if e.op is UnaryOp.NOT:
            return not _bool(v)
        return wrap(-_int(v))
    if isinstance(e, ast.Binary):
        return _binary(e, param, state)
    raise TypeConfusion(f"not an expression: {e!r}")


def _binary(e: ast.Binary, param, state) -> RuntimeValue:
    op = e.op
    left = eval_expr(e.left, param, state)
    if op is BinaryOp.AND:
        return _bool(left) and _bool(eval_expr(e.right, param, state))
    if op is BinaryOp.OR:
        return _bool(left) or _bool(eval_expr(e.right, param, state))
    right = eval_expr(e.right, param, state)
    if op is BinaryOp.EQ:
        return values_equal(left, right)
    if op is BinaryOp.NEQ:
        return not values_equal(left, right)
    if op is BinaryOp.ADD and type(left) is str:
        if type(right) is not str:
            raise TypeConfusion(f"cannot add {right!r} to a String")
        return left + right
    a, b = _int(left), _int(right)
    if op is BinaryOp.ADD:
        return wrap(a + b)
    if op is BinaryOp.SUB:
        return wrap(a - b)
    if op is BinaryOp.MUL:
        return wrap(a * b)
    if op is BinaryOp.DIV:
        if b == 0:
            raise RuntimeFault("division by zero", e.pos)
        q = abs(a) // abs(b)
        return wrap(q if (a < 0) == (b < 0) else -q)
    if op is BinaryOp.LT:
        return a < b
    if op is BinaryOp.LE:
        return a <= b
    if op is BinaryOp.GT:
        return a > b
    if op is BinaryOp.GE:
        return a >= b
    raise TypeConfusion(f"unknown operator {op}")


def exec_handler(h: ast.HandlerDecl, msg: RuntimeValue,
                 state: Mapping[str, RuntimeValue]) -> tuple[dict[str, RuntimeValue], list[Emission]]:
    """Run one handler invocation as a pure transition ``(state, msg) -> (state', sends)``."""
    new_state = dict(state)
    emissions: list[Emission] = []
    param = (h.param_name, msg)

    def run(stmts) -> None:
        for s in stmts:
            if isinstance(s, ast.Send):
                emissions.append(Emission(s.port, eval_expr(s.value, param, new_state), len(emissions)))
            elif isinstance(s, ast.Assign):
                if s.name not in new_state:
                    raise TypeConfusion(f"assignment to undeclared {s.name!r}")
                new_state[s.name] = eval_expr(s.value, param, new_state)
            elif isinstance(s, ast.If):
                run(s.then if _bool(eval_expr(s.cond, param, new_state)) else s.orelse)

    try:
        run(h.body)
    except RuntimeFault as fault:
        fault.handler = h.method_name
        raise
    return new_state, emissions
