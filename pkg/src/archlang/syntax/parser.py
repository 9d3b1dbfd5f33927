"""Recursive descent parser for ``.arc`` architecture sources."""

from __future__ import annotations

from contextlib import contextmanager

from archlang.diagnostics import Reporter, SourcePos, run_phase
from archlang.syntax import ast
from archlang.syntax.lexer import Kind, Token, lex

_BINARY_LEVELS: tuple[dict[str, ast.BinaryOp], ...] = (
    {"||": ast.BinaryOp.OR},
    {"&&": ast.BinaryOp.AND},
    {"==": ast.BinaryOp.EQ, "!=": ast.BinaryOp.NEQ},
    {"<": ast.BinaryOp.LT, "<=": ast.BinaryOp.LE,
     ">": ast.BinaryOp.GT, ">=": ast.BinaryOp.GE},
    {"+": ast.BinaryOp.ADD, "-": ast.BinaryOp.SUB},
    {"*": ast.BinaryOp.MUL, "/": ast.BinaryOp.DIV},
)

MODIFIERS = ("public", "private")

# each nesting level costs about nine interpreter frames
MAX_NESTING = 64


class ParseError(Exception):
    pass


class Parser:
    def __init__(self, tokens: list[Token], reporter: Reporter):
        self.tokens = tokens
        self.i = 0
        self.reporter = reporter
        self.depth = 0

    # -- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        if t.kind is not Kind.EOF:
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.is_(text)

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def fail(self, expected: str):
        self.reporter.error(
            "E0103", self.tok.pos, f"expected {expected}, found {self.tok.describe()}")
        raise ParseError

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind is not Kind.IDENT:
            self.fail(what)
        return self.advance()

    def skip_modifiers(self) -> None:
        while self.tok.kind is Kind.KEYWORD and self.tok.text in MODIFIERS:
            self.advance()

    def sync(self, start: int) -> None:
        """Skip past the next ``;`` or up to the next ``}``."""
        while self.tok.kind is not Kind.EOF:
            if self.at(";"):
                self.advance()
                return
            if self.at("}"):
                if self.i == start:
                    self.advance()
                return
            self.advance()

    @contextmanager
    def nested(self):
        if self.depth >= MAX_NESTING:
            self.reporter.error("E0105", self.tok.pos, "nesting too deep")
            raise ParseError
        self.depth += 1
        try:
            yield
        finally:
            self.depth -= 1

    # -- model -------------------------------------------------------------

    def model(self, file: str) -> ast.ModelUnit:
        components = []
        while self.tok.kind is not Kind.EOF:
            start = self.i
            try:
                components.append(self.component())
            except ParseError:
                while self.tok.kind is not Kind.EOF and not (
                        self.at("component") and self.i > start):
                    self.advance()
        return ast.ModelUnit(file, tuple(components))

    def component(self) -> ast.ComponentDecl:
        pos = self.expect("component").pos
        name = self.ident("component name").text
        self.expect("{")
        parts: dict[str, list] = {k: [] for k in
                                  ("ports", "enums", "subs", "connects", "states", "handlers")}
        autoconnect = False
        auto_pos = pos
        while not self.at("}"):
            if self.tok.kind is Kind.EOF:
                self.fail("'}'")
            start = self.i
            try:
                if self.at("autoconnect"):
                    auto_pos = self.advance().pos
                    self.expect("port")
                    self.expect(";")
                    autoconnect = True
                else:
                    self.element(parts)
            except ParseError:
                self.sync(start)
        self.expect("}")
        return ast.ComponentDecl(
            name=name,
            autoconnect=autoconnect,
            ports=tuple(parts["ports"]),
            enums=tuple(parts["enums"]),
            subcomponents=tuple(parts["subs"]),
            connects=tuple(parts["connects"]),
            state_vars=tuple(parts["states"]),
            handlers=tuple(parts["handlers"]),
            pos=pos,
            autoconnect_pos=auto_pos,
        )

    def element(self, parts: dict[str, list]) -> None:
        self.skip_modifiers()
        t = self.tok
        if t.is_("port"):
            parts["ports"].extend(self.port_section())
        elif t.is_("enum"):
            parts["enums"].append(self.enum_decl())
        elif t.is_("component"):
            parts["subs"].extend(self.subcomponent_decl())
        elif t.is_("connect"):
            parts["connects"].append(self.connect_decl())
        elif t.is_("state"):
            parts["states"].append(self.state_decl())
        elif t.is_("handler"):
            parts["handlers"].append(self.handler_decl())
        else:
            self.fail("a component element")

    def port_section(self) -> list[ast.PortDecl]:
        self.expect("port")
        ports = [self.port_item()]
        while self.accept(","):
            ports.append(self.port_item())
        self.expect(";")
        return ports

    def port_item(self) -> ast.PortDecl:
        t = self.tok
        if t.is_("in"):
            direction = ast.Direction.IN
        elif t.is_("out"):
            direction = ast.Direction.OUT
        else:
            self.fail("'in' or 'out'")
        self.advance()
        type_name = self.ident("port type").text
        name = self.advance().text if self.tok.kind is Kind.IDENT else None
        return ast.PortDecl(direction, type_name, name, t.pos)

    def enum_decl(self) -> ast.EnumDecl:
        pos = self.expect("enum").pos
        name = self.ident("enum name").text
        self.expect("{")
        members = [self.ident("enum member").text]
        while self.accept(","):
            members.append(self.ident("enum member").text)
        self.expect("}")
        self.accept(";")
        return ast.EnumDecl(name, tuple(members), pos)

    def subcomponent_decl(self) -> list[ast.SubcomponentDecl]:
        pos = self.expect("component").pos
        type_name = self.ident("component type").text
        subs = [self.instance(type_name, pos)]
        while self.accept(","):
            subs.append(self.instance(type_name, self.tok.pos))
        self.expect(";")
        return subs

    def instance(self, type_name: str, pos: SourcePos) -> ast.SubcomponentDecl:
        name = None
        if self.tok.kind is Kind.IDENT:
            t = self.advance()
            name, pos = t.text, t.pos
        inline = []
        if self.accept("["):
            inline.append(self.inline_connect())
            while self.accept(","):
                inline.append(self.inline_connect())
            self.expect("]")
        return ast.SubcomponentDecl(type_name, name, tuple(inline), pos)

    def inline_connect(self) -> ast.InlineConnect:
        src = self.ident("port name")
        self.expect("->")
        return ast.InlineConnect(src.text, self.port_ref(), src.pos)

    def port_ref(self) -> ast.PortRef:
        first = self.ident("port reference")
        parts = [first.text]
        while self.accept("."):
            # keywords are never port names, but `a.b.port` should still reach
            # the depth check rather than die as a syntax error
            if self.tok.kind is Kind.KEYWORD:
                parts.append(self.advance().text)
            else:
                parts.append(self.ident("port name").text)
        return ast.PortRef(tuple(parts), first.pos)

    def connect_decl(self) -> ast.ConnectDecl:
        pos = self.expect("connect").pos
        source = self.port_ref()
        self.expect("->")
        targets = [self.port_ref()]
        while self.accept(","):
            targets.append(self.port_ref())
        self.expect(";")
        return ast.ConnectDecl(source, tuple(targets), pos)

    def state_decl(self) -> ast.StateVarDecl:
        self.expect("state")
        type_name = self.ident("state variable type").text
        name = self.ident("state variable name")
        init = None
        if self.accept("="):
            init = self.literal()
        self.expect(";")
        return ast.StateVarDecl(name.text, type_name, init, name.pos)

    def handler_decl(self) -> ast.HandlerDecl:
        self.expect("handler")
        name = self.ident("handler name")
        self.expect("(")
        ptype = self.ident("parameter type").text
        pname = self.ident("parameter name").text
        self.expect(")")
        body = self.block()
        return ast.HandlerDecl(name.text, pname, ptype, body, name.pos)

    # -- statements --------------------------------------------------------

    def block(self) -> tuple[ast.Stmt, ...]:
        self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.tok.kind is Kind.EOF:
                self.fail("'}'")
            start = self.i
            try:
                stmts.append(self.statement())
            except ParseError:
                self.sync(start)
                if self.tok.kind is Kind.EOF:
                    raise
        self.expect("}")
        return tuple(stmts)

    def statement(self) -> ast.Stmt:
        if self.at("if"):
            pos = self.advance().pos
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            orelse: tuple[ast.Stmt, ...] = ()
            with self.nested():
                then = self.block()
                if self.accept("else"):
                    orelse = self.block()
            return ast.If(cond, then, orelse, pos)

        pos = self.tok.pos
        if self.accept("this"):
            self.expect(".")
        parts = [self.ident("statement").text]
        while self.accept("."):
            parts.append(self.ident("member name").text)

        if self.at("(") and len(parts) >= 2 and parts[-1] == "send":
            self.advance()
            value = self.expr()
            self.expect(")")
            self.expect(";")
            owner = tuple(parts[:-2]) or None
            return ast.Send(parts[-2], value, owner, pos)
        if self.accept("="):
            value = self.expr()
            self.expect(";")
            return ast.Assign(parts[-1], value, tuple(parts[:-1]) or None, pos)
        self.fail("'=' or '.send('")

    # -- expressions -------------------------------------------------------

    def expr(self, level: int = 0) -> ast.Expr:
        if level == len(_BINARY_LEVELS):
            return self.unary()
        ops = _BINARY_LEVELS[level]
        left = self.expr(level + 1)
        while self.tok.kind is Kind.PUNCT and self.tok.text in ops:
            op_tok = self.advance()
            right = self.expr(level + 1)
            left = ast.Binary(ops[op_tok.text], left, right, op_tok.pos)
        return left

    def unary(self) -> ast.Expr:
        if self.at("!") or self.at("-"):
            t = self.advance()
            op = ast.UnaryOp.NOT if t.text == "!" else ast.UnaryOp.NEG
            with self.nested():
                operand = self.unary()
            return ast.Unary(op, operand, t.pos)
        return self.primary()

    def primary(self) -> ast.Expr:
        t = self.tok
        if self.at("("):
            self.advance()
            with self.nested():
                e = self.expr()
            self.expect(")")
            return e
        if self.at("this"):
            self.advance()
            self.expect(".")
            name = self.ident()
            return ast.VarRef(name.text, t.pos)
        if t.kind is Kind.IDENT:
            self.advance()
            if self.accept("."):
                member = self.ident("enum member")
                return ast.EnumLit(t.text, member.text, t.pos)
            return ast.VarRef(t.text, t.pos)
        return self.literal()

    def literal(self) -> ast.Literal:
        t = self.tok
        if t.is_("true") or t.is_("false"):
            self.advance()
            return ast.BoolLit(t.text == "true", t.pos)
        if t.kind is Kind.INT:
            self.advance()
            return ast.IntLit(t.value, t.pos)
        if t.kind is Kind.STRING:
            self.advance()
            return ast.StringLit(t.value, t.pos)
        if t.kind is Kind.IDENT and self.peek().is_("."):
            self.advance()
            self.advance()
            member = self.ident("enum member")
            return ast.EnumLit(t.text, member.text, t.pos)
        if self.at("-") and self.peek().kind is Kind.INT:
            self.advance()
            lit = self.advance()
            return ast.Unary(ast.UnaryOp.NEG, ast.IntLit(lit.value, lit.pos), t.pos)
        self.fail("a literal")


def _parse(source: str, file: str, reporter: Reporter) -> ast.ModelUnit:
    tokens = lex(source, file, reporter)
    return Parser(tokens, reporter).model(file)


def parse_model(source: str, file: str = "<input>", reporter: Reporter | None = None) -> ast.ModelUnit:
    """Parse one source file.

    Without a ``reporter`` any error raises :class:`CompileError`; with one,
    errors are recorded and the recovered partial tree is returned.
    """
    return run_phase(_parse, source, file, reporter=reporter)
