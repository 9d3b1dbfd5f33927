"""The message type universe and its subtype relation."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional


class TypeKind(enum.Enum):
    BOOLEAN = "Boolean"
    INTEGER = "Integer"
    STRING = "String"
    OBJECT = "Object"
    ENUM = "enum"


@dataclass(frozen=True)
class MsgType:
    kind: TypeKind
    enum_name: Optional[str] = None

    def __str__(self) -> str:
        return self.enum_name if self.kind is TypeKind.ENUM else self.kind.value

    @classmethod
    def enum(cls, name: str) -> "MsgType":
        return cls(TypeKind.ENUM, name)


BOOLEAN = MsgType(TypeKind.BOOLEAN)
INTEGER = MsgType(TypeKind.INTEGER)
STRING = MsgType(TypeKind.STRING)
OBJECT = MsgType(TypeKind.OBJECT)

# lowercase spellings let Java-style declarations such as ``state boolean x;``
# through unchanged
BUILTIN_TYPES: dict[str, MsgType] = {
    "Boolean": BOOLEAN,
    "boolean": BOOLEAN,
    "Integer": INTEGER,
    "int": INTEGER,
    "String": STRING,
    "Object": OBJECT,
}


def is_subtype(a: MsgType, b: MsgType) -> bool:
    """True iff a value of type ``a`` may flow where ``b`` is expected."""
    return a == b or b == OBJECT
