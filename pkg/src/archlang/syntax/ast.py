"""Abstract syntax of architecture source files.

Every node carries a ``pos``; positions are excluded from equality so two
trees compare equal when they differ only in layout.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

from archlang.diagnostics import NOWHERE, SourcePos


def _pos():
    return field(default=NOWHERE, compare=False, repr=False)


class Direction(enum.Enum):
    IN = "in"
    OUT = "out"


class UnaryOp(enum.Enum):
    NOT = "!"
    NEG = "-"


class BinaryOp(enum.Enum):
    OR = "||"
    AND = "&&"
    EQ = "=="
    NEQ = "!="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"


# -- expressions -----------------------------------------------------------

@dataclass(frozen=True)
class BoolLit:
    value: bool
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class IntLit:
    value: int
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class StringLit:
    value: str
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class EnumLit:
    type_name: str
    member: str
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class VarRef:
    name: str
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class Unary:
    op: UnaryOp
    operand: "Expr"
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class Binary:
    op: BinaryOp
    left: "Expr"
    right: "Expr"
    pos: SourcePos = _pos()


Expr = Union[BoolLit, IntLit, StringLit, EnumLit, VarRef, Unary, Binary]
Literal = Union[BoolLit, IntLit, StringLit, EnumLit]


# -- statements ------------------------------------------------------------

@dataclass(frozen=True)
class Send:
    port: str
    value: Expr
    # set only for a qualified target such as ``cpu.message.send(...)``,
    # which communication integrity rejects
    owner: Optional[tuple[str, ...]] = None
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class Assign:
    name: str
    value: Expr
    owner: Optional[tuple[str, ...]] = None
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple["Stmt", ...]
    orelse: tuple["Stmt", ...] = ()
    pos: SourcePos = _pos()


Stmt = Union[Send, Assign, If]


# -- declarations ----------------------------------------------------------

@dataclass(frozen=True)
class PortRef:
    """``port`` or ``instance.port``; longer paths are kept for diagnostics."""

    parts: tuple[str, ...]
    pos: SourcePos = _pos()

    @property
    def owner(self) -> Optional[str]:
        return self.parts[0] if len(self.parts) > 1 else None

    @property
    def port(self) -> str:
        return self.parts[-1]

    def __str__(self) -> str:
        return ".".join(self.parts)


@dataclass(frozen=True)
class PortDecl:
    direction: Direction
    type_name: str
    name: Optional[str] = None
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class InlineConnect:
    source_port: str
    target: PortRef
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class SubcomponentDecl:
    type_name: str
    instance_name: Optional[str] = None
    inline_connects: tuple[InlineConnect, ...] = ()
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class ConnectDecl:
    source: PortRef
    targets: tuple[PortRef, ...]
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class EnumDecl:
    name: str
    members: tuple[str, ...]
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class StateVarDecl:
    name: str
    type_name: str
    initializer: Optional[Expr] = None
    pos: SourcePos = _pos()


@dataclass(frozen=True)
class HandlerDecl:
    method_name: str
    param_name: str
    param_type: str
    body: tuple[Stmt, ...] = ()
    pos: SourcePos = _pos()

    @property
    def port_suffix(self) -> Optional[str]:
        """The ``X`` in ``on<X>Received``, or None when the name does not fit."""
        name = self.method_name
        if name.startswith("on") and name.endswith("Received") and len(name) > 10:
            return name[2:-8]
        return None


@dataclass(frozen=True)
class ComponentDecl:
    name: str
    autoconnect: bool = False
    ports: tuple[PortDecl, ...] = ()
    enums: tuple[EnumDecl, ...] = ()
    subcomponents: tuple[SubcomponentDecl, ...] = ()
    connects: tuple[ConnectDecl, ...] = ()
    state_vars: tuple[StateVarDecl, ...] = ()
    handlers: tuple[HandlerDecl, ...] = ()
    pos: SourcePos = _pos()
    autoconnect_pos: SourcePos = _pos()


@dataclass(frozen=True)
class ModelUnit:
    file: str
    components: tuple[ComponentDecl, ...] = ()
