"""Canonical pretty-printer; its output re-parses to an equal tree."""

from __future__ import annotations

from archlang.syntax import ast

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t"}


def quote(text: str) -> str:
    return '"' + "".join(_ESCAPES.get(c, c) for c in text) + '"'


def format_expr(e: ast.Expr) -> str:
    if isinstance(e, ast.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, ast.IntLit):
        return str(e.value)
    if isinstance(e, ast.StringLit):
        return quote(e.value)
    if isinstance(e, ast.EnumLit):
        return f"{e.type_name}.{e.member}"
    if isinstance(e, ast.VarRef):
        return e.name
    if isinstance(e, ast.Unary):
        return e.op.value + _operand(e.operand)
    if isinstance(e, ast.Binary):
        return f"{_operand(e.left)} {e.op.value} {_operand(e.right)}"
    raise TypeError(f"not an expression: {e!r}")


def _operand(e: ast.Expr) -> str:
    text = format_expr(e)
    if isinstance(e, (ast.Binary, ast.Unary)):
        return f"({text})"
    return text


def _format_init(e: ast.Expr) -> str:
    # initializers go through the literal rule, which takes -INT but not -(INT)
    if isinstance(e, ast.Unary) and isinstance(e.operand, ast.IntLit):
        return f"-{e.operand.value}"
    return format_expr(e)


def _stmts(stmts, indent: str) -> list[str]:
    lines = []
    for s in stmts:
        if isinstance(s, ast.Send):
            target = ".".join((*(s.owner or ()), s.port))
            lines.append(f"{indent}{target}.send({format_expr(s.value)});")
        elif isinstance(s, ast.Assign):
            target = ".".join((*(s.owner or ()), s.name))
            lines.append(f"{indent}{target} = {format_expr(s.value)};")
        elif isinstance(s, ast.If):
            lines.append(f"{indent}if ({format_expr(s.cond)}) {{")
            lines.extend(_stmts(s.then, indent + "  "))
            if s.orelse:
                lines.append(f"{indent}}} else {{")
                lines.extend(_stmts(s.orelse, indent + "  "))
            lines.append(f"{indent}}}")
        else:
            raise TypeError(f"not a statement: {s!r}")
    return lines


def format_component(c: ast.ComponentDecl) -> str:
    out = [f"component {c.name} {{"]
    if c.autoconnect:
        out.append("  autoconnect port;")
    if c.ports:
        items = []
        for p in c.ports:
            item = f"{p.direction.value} {p.type_name}"
            if p.name is not None:
                item += f" {p.name}"
            items.append(item)
        out.append("  port\n    " + ",\n    ".join(items) + ";")
    for e in c.enums:
        out.append(f"  enum {e.name} {{ {', '.join(e.members)} }}")
    for s in c.subcomponents:
        line = f"  component {s.type_name}"
        if s.instance_name is not None:
            line += f" {s.instance_name}"
        if s.inline_connects:
            inner = ", ".join(f"{ic.source_port} -> {ic.target}" for ic in s.inline_connects)
            line += f" [{inner}]"
        out.append(line + ";")
    for k in c.connects:
        out.append(f"  connect {k.source} -> {', '.join(str(t) for t in k.targets)};")
    for v in c.state_vars:
        line = f"  state {v.type_name} {v.name}"
        if v.initializer is not None:
            line += f" = {_format_init(v.initializer)}"
        out.append(line + ";")
    for h in c.handlers:
        out.append(f"  handler {h.method_name}({h.param_type} {h.param_name}) {{")
        out.extend(_stmts(h.body, "    "))
        out.append("  }")
    out.append("}")
    return "\n".join(out)


def format_model(unit: ast.ModelUnit) -> str:
    return "\n\n".join(format_component(c) for c in unit.components) + "\n"
