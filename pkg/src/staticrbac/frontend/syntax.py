"""Recursive-descent parser for the supported Java subset.

Covered: a package declaration, imports, one top-level class or interface
per file with ``extends``/``implements`` clauses, fields, constructors,
methods, initializer blocks; statements (local declarations, expression
statements, ``return``, ``if``, ``while``, ``do``, ``for`` and for-each,
blocks, ``break``/``continue``, ``throw``, ``try``/``catch``/``finally``,
``synchronized``); expressions with the usual Java precedence, casts, object
and array creation, field access, indexing and method invocation.

Marker annotations are accepted and ignored. Generics, lambdas, method
references, nested/anonymous classes, ``switch``, enums and records are
rejected with a :class:`SourceParseError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from staticrbac.errors import SourceParseError
from staticrbac.frontend.lexer import PRIMITIVES, Token, tokenize

# ---------------------------------------------------------------------------
# Expression nodes


@dataclass(slots=True)
class Lit:
    type: str


@dataclass(slots=True)
class Name:
    id: str


@dataclass(slots=True)
class FieldAccess:
    target: object
    name: str


@dataclass(slots=True)
class Call:
    target: Optional[object]      # None for an unqualified call
    name: str
    args: list
    line: int
    column: int


@dataclass(slots=True)
class CtorCall:
    """Explicit ``this(...)`` / ``super(...)`` constructor invocation."""
    kind: str
    args: list
    line: int
    column: int


@dataclass(slots=True)
class New:
    type: str
    args: list
    line: int
    column: int


@dataclass(slots=True)
class NewArray:
    type: str
    exprs: list


@dataclass(slots=True)
class ArrayInit:
    elems: list


@dataclass(slots=True)
class Index:
    target: object
    index: object


@dataclass(slots=True)
class Cast:
    type: str
    expr: object


@dataclass(slots=True)
class Paren:
    expr: object


@dataclass(slots=True)
class Unary:
    op: str
    expr: object


@dataclass(slots=True)
class Binary:
    op: str
    left: object
    right: object


@dataclass(slots=True)
class InstanceOf:
    expr: object
    type: str


@dataclass(slots=True)
class Conditional:
    cond: object
    then: object
    other: object


@dataclass(slots=True)
class Assign:
    target: object
    op: str
    value: object


@dataclass(slots=True)
class This:
    pass


@dataclass(slots=True)
class Super:
    pass


@dataclass(slots=True)
class ClassLit:
    type: str


# ---------------------------------------------------------------------------
# Statement nodes


@dataclass(slots=True)
class LocalVar:
    type: str
    decls: list          # [(name, type, init-or-None)]


@dataclass(slots=True)
class ExprStmt:
    expr: object


@dataclass(slots=True)
class Return:
    expr: Optional[object]


@dataclass(slots=True)
class Throw:
    expr: object


@dataclass(slots=True)
class If:
    cond: object
    then: object
    other: Optional[object]


@dataclass(slots=True)
class While:
    cond: object
    body: object


@dataclass(slots=True)
class DoWhile:
    body: object
    cond: object


@dataclass(slots=True)
class For:
    init: list
    cond: Optional[object]
    update: list
    body: object


@dataclass(slots=True)
class ForEach:
    type: str
    name: str
    iterable: object
    body: object


@dataclass(slots=True)
class Block:
    stmts: list


@dataclass(slots=True)
class Try:
    body: Block
    catches: list        # [(type, name, Block)]
    final: Optional[Block]


@dataclass(slots=True)
class Synchronized:
    lock: object
    body: Block


@dataclass(slots=True)
class Jump:
    kind: str


# ---------------------------------------------------------------------------
# Declarations


@dataclass
class FieldSyntax:
    name: str
    type: str
    modifier: str
    is_static: bool
    init: Optional[object]
    line: int
    end_line: int


@dataclass
class MethodSyntax:
    name: str
    modifier: str
    return_type: str
    params: list         # [(name, type)]
    body: Optional[Block]
    is_static: bool
    line: int
    end_line: int


@dataclass
class InitializerSyntax:
    body: Block
    is_static: bool
    line: int
    end_line: int


@dataclass
class ClassSyntax:
    name: str
    kind: str
    modifier: str
    package: str
    imports: list
    extends: list
    implements: list
    fields: list = field(default_factory=list)
    methods: list = field(default_factory=list)
    initializers: list = field(default_factory=list)
    line: int = 1


_VISIBILITY = ("public", "private", "protected")
_MODIFIERS = frozenset(["public", "private", "protected", "static", "final",
                        "abstract", "synchronized", "native", "transient",
                        "volatile", "strictfp", "default"])

_BINARY_PREC = {
    "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7, "instanceof": 7,
    "<<": 8, ">>": 8, ">>>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}
_ASSIGN_OPS = frozenset(["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
                         "<<=", ">>=", ">>>="])
_LITERAL_KINDS = {"int": "int", "float": "double", "str": "String",
                  "char": "char"}
# tokens that may follow ``(Type)`` when it is a reference-type cast
_CAST_FOLLOW_KW = frozenset(["this", "super", "new", "true", "false", "null"])

_UNSUPPORTED = {
    "->": "lambda expressions are not supported",
    "::": "method references are not supported",
    "switch": "switch statements are not supported",
    "enum": "enums are not supported",
}


def simple_name(qualified: str) -> str:
    return qualified.rsplit(".", 1)[-1]


class Parser:
    def __init__(self, text: str, path: str = "<string>"):
        self.path = path
        self.toks = tokenize(text, path)
        self.pos = 0

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        i = self.pos + k
        return self.toks[i] if i < len(self.toks) else self.toks[-1]

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise SourceParseError(message, self.path, tok.line, tok.column)

    def unexpected(self, what: str = ""):
        tok = self.tok
        if tok.value in _UNSUPPORTED:
            self.error(_UNSUPPORTED[tok.value])
        shown = "end of file" if tok.kind == "eof" else repr(tok.value)
        self.error(f"unexpected {shown}" + (f", expected {what}" if what
                                            else ""))

    def at(self, value: str) -> bool:
        t = self.tok
        return t.value == value and t.kind in ("op", "kw")

    def accept(self, value: str) -> bool:
        if self.at(value):
            self.pos += 1
            return True
        return False

    def expect(self, value: str) -> Token:
        if not self.at(value):
            self.unexpected(f"'{value}'")
        tok = self.tok
        self.pos += 1
        return tok

    def ident(self) -> str:
        tok = self.tok
        if tok.kind != "id":
            self.unexpected("identifier")
        self.pos += 1
        return tok.value

    def qualified(self) -> str:
        parts = [self.ident()]
        while self.at(".") and self.peek().kind == "id":
            self.pos += 1
            parts.append(self.ident())
        return ".".join(parts)

    # -- compilation unit ---------------------------------------------------

    def compilation_unit(self) -> ClassSyntax:
        self.skip_annotations()
        package = ""
        if self.accept("package"):
            package = self.qualified()
            self.expect(";")
        imports = []
        while self.accept("import"):
            static = self.accept("static")
            name = self.qualified()
            if self.accept("."):
                self.expect("*")
                name += ".*"
            self.expect(";")
            imports.append(("static " if static else "") + name)
        while self.accept(";"):
            pass
        cls = self.type_declaration(package, imports)
        while self.accept(";"):
            pass
        if self.tok.kind != "eof":
            self.error("only one top-level class per file is supported")
        return cls

    def skip_annotations(self):
        while self.at("@") and self.peek().value != "interface":
            self.pos += 1
            self.qualified()
            if self.at("("):
                depth = 0
                while True:
                    t = self.tok
                    if t.kind == "eof":
                        self.unexpected("')'")
                    self.pos += 1
                    if t.value == "(" and t.kind == "op":
                        depth += 1
                    elif t.value == ")" and t.kind == "op":
                        depth -= 1
                        if depth == 0:
                            break

    def modifiers(self) -> tuple[str, bool]:
        visibility = "package"
        is_static = False
        while True:
            self.skip_annotations()
            t = self.tok
            if t.kind != "kw" or t.value not in _MODIFIERS:
                break
            if t.value == "default" and self.peek().value == ":":
                break
            self.pos += 1
            if t.value in _VISIBILITY:
                visibility = t.value
            elif t.value == "static":
                is_static = True
        return visibility, is_static

    def type_declaration(self, package: str, imports: list) -> ClassSyntax:
        modifier, _ = self.modifiers()
        start = self.tok
        if self.at("class"):
            kind = "class"
        elif self.at("interface"):
            kind = "interface"
        elif start.kind == "eof":
            self.error("no class declaration found")
        elif start.value == "record":
            self.error("records are not supported")
        elif start.value == "@":
            self.error("annotation types are not supported")
        else:
            self.unexpected("'class' or 'interface'")
        self.pos += 1
        name = self.ident()
        if self.at("<"):
            self.error("generic classes are not supported")
        extends, implements = [], []
        if self.accept("extends"):
            extends = self.type_list()
        if self.accept("implements"):
            implements = self.type_list()
        cls = ClassSyntax(name, kind, modifier, package, imports, extends,
                          implements, line=start.line)
        self.class_body(cls)
        return cls

    def type_list(self) -> list[str]:
        names = [simple_name(self.class_type())]
        while self.accept(","):
            names.append(simple_name(self.class_type()))
        return names

    def class_type(self) -> str:
        name = self.qualified()
        if self.at("<"):
            self.error("generic types are not supported")
        return name

    def class_body(self, cls: ClassSyntax):
        self.expect("{")
        while not self.accept("}"):
            if self.tok.kind == "eof":
                self.unexpected("'}'")
            self.member(cls)

    def member(self, cls: ClassSyntax):
        if self.accept(";"):
            return
        first = self.tok
        if self.at("{") or (self.at("static") and self.peek().value == "{"):
            is_static = self.accept("static")
            body = self.block()
            cls.initializers.append(InitializerSyntax(
                body, is_static, first.line, self.toks[self.pos - 1].line))
            return
        modifier, is_static = self.modifiers()
        if cls.kind == "interface" and modifier == "package":
            modifier = "public"
        t = self.tok
        if t.value in ("class", "interface", "enum") and t.kind == "kw" \
                or t.value == "@":
            self.error("nested types are not supported")
        if self.at("<"):
            self.error("generic methods are not supported")
        # constructor
        if t.kind == "id" and t.value == cls.name and self.peek().value == "(":
            self.pos += 1
            params = self.parameters()
            self.throws_clause()
            body = self.block()
            cls.methods.append(MethodSyntax(
                "<init>", modifier, "void", params, body, False, t.line,
                self.toks[self.pos - 1].line))
            return
        type_ = self.type_()
        name_tok = self.tok
        name = self.ident()
        if self.at("("):
            params = self.parameters()
            while self.accept("["):
                self.expect("]")
                type_ += "[]"
            self.throws_clause()
            if self.accept(";"):
                body = None
            else:
                body = self.block()
            cls.methods.append(MethodSyntax(
                name, modifier, type_, params, body, is_static, name_tok.line,
                self.toks[self.pos - 1].line))
            return
        # field declarators
        while True:
            ftype = type_ + self.dims()
            init = None
            if self.accept("="):
                init = self.var_init()
            end = self.tok
            cls.fields.append(FieldSyntax(name, ftype, modifier, is_static,
                                          init, name_tok.line, end.line))
            if not self.accept(","):
                break
            name_tok = self.tok
            name = self.ident()
        self.expect(";")

    def dims(self) -> str:
        out = ""
        while self.at("[") and self.peek().value == "]":
            self.pos += 2
            out += "[]"
        return out

    def parameters(self) -> list[tuple[str, str]]:
        self.expect("(")
        params = []
        if not self.accept(")"):
            while True:
                self.modifiers()
                ptype = self.type_()
                if self.accept("..."):
                    ptype += "[]"
                pname = self.ident()
                ptype += self.dims()
                params.append((pname, ptype))
                if not self.accept(","):
                    break
            self.expect(")")
        return params

    def throws_clause(self):
        if self.accept("throws"):
            self.type_list()

    # -- types --------------------------------------------------------------

    def type_(self) -> str:
        t = self.tok
        if t.kind == "kw" and t.value in PRIMITIVES:
            self.pos += 1
            base = t.value
        elif t.kind == "id":
            base = simple_name(self.class_type())
        else:
            self.unexpected("a type")
        return base + self.dims()

    def try_type(self) -> Optional[str]:
        """Speculatively read a type; restores position on failure."""
        start = self.pos
        t = self.tok
        if t.kind == "kw" and t.value in PRIMITIVES:
            self.pos += 1
            base = t.value
        elif t.kind == "id":
            parts = [t.value]
            self.pos += 1
            while self.at(".") and self.peek().kind == "id":
                self.pos += 1
                parts.append(self.tok.value)
                self.pos += 1
            base = parts[-1]
        else:
            return None
        base += self.dims()
        if self.at("[") or self.at("<"):
            self.pos = start
            return None
        return base

    # -- statements ---------------------------------------------------------

    def block(self) -> Block:
        self.expect("{")
        stmts = []
        while not self.accept("}"):
            if self.tok.kind == "eof":
                self.unexpected("'}'")
            stmts.append(self.statement())
        return Block(stmts)

    def statement(self):
        t = self.tok
        v = t.value
        if t.kind == "op":
            if v == "{":
                return self.block()
            if v == ";":
                self.pos += 1
                return Block([])
            if v == "@":
                self.skip_annotations()
                return self.statement()
        elif t.kind == "kw":
            handler = _STATEMENT_KEYWORDS.get(v)
            if handler is not None:
                return handler(self)
            if v == "final":
                self.pos += 1
                return self.statement()
            if v in ("class", "interface", "enum"):
                self.error("local classes are not supported")
        elif t.kind == "id" and self.peek().value == ":" and \
                self.peek().kind == "op":
            self.pos += 2
            return self.statement()
        decl = self.local_var_decl()
        if decl is not None:
            self.expect(";")
            return decl
        expr = self.expression()
        self.expect(";")
        return ExprStmt(expr)

    def local_var_decl(self) -> Optional[LocalVar]:
        t = self.tok
        if t.kind == "id":
            # ``Name<`` can only open a generic type at statement level
            j = self.pos + 1
            while self.toks[j].value == "." and self.toks[j + 1].kind == "id":
                j += 2
            if self.toks[j].value == "<" and self.toks[j + 1].kind == "id" \
                    and self.toks[j + 2].value in (">", ",", "<", "."):
                self.error("generic types are not supported",
                           self.toks[j])
        elif not (t.kind == "kw" and t.value in PRIMITIVES):
            return None
        start = self.pos
        type_ = self.try_type()
        if type_ is None or self.tok.kind != "id" or \
                self.peek().value not in ("=", ";", ",", "[", ":"):
            self.pos = start
            return None
        return LocalVar(type_, self.declarators(type_))

    def declarators(self, type_: str) -> list:
        decls = []
        while True:
            name = self.ident()
            vtype = type_ + self.dims()
            init = self.var_init() if self.accept("=") else None
            decls.append((name, vtype, init))
            if not self.accept(","):
                return decls

    def var_init(self):
        if self.at("{"):
            return self.array_init()
        return self.expression()

    def array_init(self) -> ArrayInit:
        self.expect("{")
        elems = []
        while not self.accept("}"):
            elems.append(self.var_init())
            if not self.accept(","):
                self.expect("}")
                break
        return ArrayInit(elems)

    def _if(self):
        self.pos += 1
        cond = self.paren_expr()
        then = self.statement()
        other = self.statement() if self.accept("else") else None
        return If(cond, then, other)

    def _while(self):
        self.pos += 1
        return While(self.paren_expr(), self.statement())

    def _do(self):
        self.pos += 1
        body = self.statement()
        self.expect("while")
        cond = self.paren_expr()
        self.expect(";")
        return DoWhile(body, cond)

    def _for(self):
        self.pos += 1
        self.expect("(")
        self.modifiers()
        start = self.pos
        type_ = self.try_type()
        if type_ is not None and self.tok.kind == "id" and \
                self.peek().value == ":":
            name = self.ident()
            self.expect(":")
            iterable = self.expression()
            self.expect(")")
            return ForEach(type_, name, iterable, self.statement())
        self.pos = start
        init = []
        if not self.at(";"):
            decl = self.local_var_decl()
            if decl is not None:
                init.append(decl)
            else:
                init.append(ExprStmt(self.expression()))
                while self.accept(","):
                    init.append(ExprStmt(self.expression()))
        self.expect(";")
        cond = None if self.at(";") else self.expression()
        self.expect(";")
        update = []
        if not self.at(")"):
            update.append(self.expression())
            while self.accept(","):
                update.append(self.expression())
        self.expect(")")
        return For(init, cond, update, self.statement())

    def _return(self):
        self.pos += 1
        expr = None if self.at(";") else self.expression()
        self.expect(";")
        return Return(expr)

    def _throw(self):
        self.pos += 1
        expr = self.expression()
        self.expect(";")
        return Throw(expr)

    def _jump(self):
        kind = self.tok.value
        self.pos += 1
        if self.tok.kind == "id":
            self.pos += 1
        self.expect(";")
        return Jump(kind)

    def _try(self):
        self.pos += 1
        if self.at("("):
            self.error("try-with-resources is not supported")
        body = self.block()
        catches = []
        while self.accept("catch"):
            self.expect("(")
            self.modifiers()
            types = [simple_name(self.class_type())]
            while self.accept("|"):
                types.append(simple_name(self.class_type()))
            name = self.ident()
            self.expect(")")
            catches.append((types[0] if len(types) == 1 else "Throwable",
                            name, self.block()))
        final = self.block() if self.accept("finally") else None
        if not catches and final is None:
            self.unexpected("'catch' or 'finally'")
        return Try(body, catches, final)

    def _synchronized(self):
        self.pos += 1
        lock = self.paren_expr()
        return Synchronized(lock, self.block())

    def _switch(self):
        self.error("switch statements are not supported")

    def _assert(self):
        self.pos += 1
        cond = self.expression()
        msg = self.expression() if self.accept(":") else None
        self.expect(";")
        return ExprStmt(Binary(",", cond, msg) if msg is not None else cond)

    def paren_expr(self):
        self.expect("(")
        e = self.expression()
        self.expect(")")
        return e

    # -- expressions --------------------------------------------------------

    def expression(self):
        left = self.conditional()
        t = self.tok
        if t.kind == "op" and t.value in _ASSIGN_OPS:
            self.pos += 1
            return Assign(left, t.value, self.expression())
        if t.value == "->":
            self.unexpected()
        return left

    def conditional(self):
        cond = self.binary(1)
        if self.accept("?"):
            then = self.expression()
            self.expect(":")
            other = self.conditional()
            return Conditional(cond, then, other)
        return cond

    def binary(self, min_prec: int):
        left = self.unary()
        while True:
            t = self.tok
            prec = _BINARY_PREC.get(t.value)
            if prec is None or prec < min_prec or t.kind not in ("op", "kw"):
                return left
            self.pos += 1
            if t.value == "instanceof":
                self.accept("final")
                left = InstanceOf(left, self.type_())
                if self.tok.kind == "id":
                    self.error("pattern matching is not supported")
                continue
            right = self.binary(prec + 1)
            left = Binary(t.value, left, right)

    def unary(self):
        t = self.tok
        if t.kind == "op":
            if t.value in ("+", "-", "++", "--", "!", "~"):
                self.pos += 1
                return Unary(t.value, self.unary())
            if t.value == "(":
                cast = self.try_cast()
                if cast is not None:
                    return cast
        e = self.postfix(self.primary())
        while self.tok.value in ("++", "--") and self.tok.kind == "op":
            self.pos += 1
            e = Unary("post" + self.toks[self.pos - 1].value, e)
        return e

    def try_cast(self):
        start = self.pos
        self.pos += 1
        type_ = self.try_type()
        if type_ is not None and self.at(")"):
            self.pos += 1
            nxt = self.tok
            if type_.rstrip("[]") in PRIMITIVES:
                return Cast(type_, self.unary())
            if nxt.kind in ("id", "int", "float", "str", "char") or \
                    (nxt.kind == "kw" and nxt.value in _CAST_FOLLOW_KW) or \
                    (nxt.kind == "op" and nxt.value in ("(", "!", "~")):
                return Cast(type_, self.unary())
        self.pos = start
        return None

    def arguments(self) -> list:
        self.expect("(")
        args = []
        if not self.accept(")"):
            args.append(self.expression())
            while self.accept(","):
                args.append(self.expression())
            self.expect(")")
        return args

    def primary(self):
        t = self.tok
        k = t.kind
        if k == "id":
            self.pos += 1
            if self.at("("):
                paren = self.tok
                return Call(None, t.value, self.arguments(), paren.line,
                            paren.column)
            return Name(t.value)
        if k in _LITERAL_KINDS:
            self.pos += 1
            if k == "int" and t.value[-1] in "lL":
                return Lit("long")
            if k == "float" and t.value[-1] in "fF":
                return Lit("float")
            return Lit(_LITERAL_KINDS[k])
        if k == "op":
            if t.value == "(":
                self.pos += 1
                e = self.expression()
                self.expect(")")
                return Paren(e)
            if t.value == "@":
                self.error("annotations are not supported in expressions")
            self.unexpected("an expression")
        if k == "kw":
            v = t.value
            if v in ("true", "false"):
                self.pos += 1
                return Lit("boolean")
            if v == "null":
                self.pos += 1
                return Lit("null")
            if v in ("this", "super"):
                self.pos += 1
                if self.at("("):
                    paren = self.tok
                    return CtorCall(v, self.arguments(), paren.line,
                                    paren.column)
                return This() if v == "this" else Super()
            if v == "new":
                return self.creation()
            if v in PRIMITIVES:
                # int.class, int[].class
                type_ = self.type_()
                self.expect(".")
                self.expect("class")
                return ClassLit(type_)
        self.unexpected("an expression")

    def creation(self):
        self.pos += 1
        t = self.tok
        if t.kind == "kw" and t.value in PRIMITIVES:
            self.pos += 1
            base = t.value
        else:
            base = simple_name(self.class_type())
        if self.at("["):
            exprs = []
            dims = ""
            while self.at("["):
                self.pos += 1
                if self.accept("]"):
                    dims += "[]"
                    continue
                exprs.append(self.expression())
                self.expect("]")
                dims += "[]"
            if self.at("{"):
                exprs.append(self.array_init())
            return NewArray(base + dims, exprs)
        paren = self.tok
        args = self.arguments()
        if self.at("{"):
            self.error("anonymous classes are not supported")
        return New(base, args, paren.line, paren.column)

    def postfix(self, e):
        while True:
            t = self.tok
            if t.kind != "op":
                return e
            if t.value == ".":
                self.pos += 1
                n = self.tok
                if n.kind == "id":
                    self.pos += 1
                    if self.at("("):
                        paren = self.tok
                        e = Call(e, n.value, self.arguments(), paren.line,
                                 paren.column)
                    else:
                        e = FieldAccess(e, n.value)
                elif n.value == "class":
                    self.pos += 1
                    e = ClassLit("Class")
                elif n.value == "this":
                    self.pos += 1
                    e = This()
                elif n.value == "<":
                    self.error("explicit type arguments are not supported")
                elif n.value == "new":
                    self.error("inner class creation is not supported")
                else:
                    self.unexpected("member name")
            elif t.value == "[":
                if self.peek().value == "]":
                    # Type[].class
                    self.pos += 2
                    continue
                self.pos += 1
                idx = self.expression()
                self.expect("]")
                e = Index(e, idx)
            elif t.value == "::":
                self.unexpected()
            else:
                return e


_STATEMENT_KEYWORDS = {
    "if": Parser._if,
    "while": Parser._while,
    "do": Parser._do,
    "for": Parser._for,
    "return": Parser._return,
    "throw": Parser._throw,
    "break": Parser._jump,
    "continue": Parser._jump,
    "try": Parser._try,
    "synchronized": Parser._synchronized,
    "switch": Parser._switch,
    "assert": Parser._assert,
}


def parse_compilation_unit(text: str, path: str = "<string>") -> ClassSyntax:
    return Parser(text, path).compilation_unit()
