"""JPol: a small Java-flavoured language for hierarchical RBAC policies.

A policy declares resources with their actions and roles with their
permissions. Roles may subsume one other role and inherit its permissions::

    Resource nhspatient = new Resource('Nhspatient');
    nhspatient.addAction('getFirstName');
    Role nhsdoctor = new Role('NHSDoctor');
    nhsdoctor.addPermission('Nhspatient', 'getFirstName');
    Role admin = new Role('Admin') subsumes nhsdoctor;

Parsing (:func:`parse_policy`) is purely syntactic. Every reference and
duplicate check happens in :func:`build_tables`, which produces the
``Resources`` and ``Roles`` tables consumed by the verifier. Anything not
granted is denied.

String literals may be written with straight quotes (``'X'``, ``"X"``), with
the typographic pairs ``‘X’`` or `````X'``, or left bare. ``//`` starts a line
comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, NamedTuple, Optional, Union

from staticrbac.errors import PolicyParseError, PolicySemanticError, UnknownRole

__all__ = [
    "DecRole", "DecRoleSubsume", "DecRes", "AddActRes", "AddPermRole",
    "PolicyAst", "Permission", "Resource", "Role", "Policy",
    "parse_policy", "format_policy", "build_tables", "load_policy",
    "is_permitted", "effective_permissions",
]

ID_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*\Z")

KEYWORDS = frozenset(["Role", "Resource", "new", "subsumes",
                      "addAction", "addPermission"])

_QUOTE_PAIRS = {"'": "'", '"': '"', "`": "'’", "‘": "’'"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<id>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<str>[`'"‘][^`'"‘’\n]*[’'"])
  | (?P<punct>[=.(),;])
""", re.VERBOSE)


# ---------------------------------------------------------------------------
# Abstract syntax

@dataclass(frozen=True)
class DecRole:
    var: str
    name: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class DecRoleSubsume:
    var: str
    name: str
    parent: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class DecRes:
    var: str
    name: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AddActRes:
    var: str
    action: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AddPermRole:
    var: str
    resource: str
    action: str
    line: int = field(default=0, compare=False)


Statement = Union[DecRole, DecRoleSubsume, DecRes, AddActRes, AddPermRole]


@dataclass(frozen=True)
class PolicyAst:
    statements: tuple[Statement, ...]

    def __iter__(self) -> Iterator[Statement]:
        return iter(self.statements)

    def __len__(self) -> int:
        return len(self.statements)


# ---------------------------------------------------------------------------
# Lexing and parsing

class _Token(NamedTuple):
    kind: str      # "id", "kw", "str", "punct", "eof"
    value: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if m is None:
            raise PolicyParseError("unexpected character", line, column,
                                   text[pos])
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "id":
            tokens.append(_Token("kw" if value in KEYWORDS else "id",
                                 value, line, column))
        elif kind == "str":
            if value[-1] not in _QUOTE_PAIRS[value[0]]:
                raise PolicyParseError("mismatched quotes", line, column,
                                       value)
            tokens.append(_Token("str", value[1:-1], line, column))
        elif kind == "punct":
            tokens.append(_Token("punct", value, line, column))
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Optional[_Token] = None):
        tok = tok or self.tok
        shown = "end of input" if tok.kind == "eof" else tok.value
        raise PolicyParseError(message, tok.line, tok.column, shown)

    def advance(self) -> _Token:
        tok = self.tok
        self.pos += 1
        return tok

    def expect_punct(self, value: str) -> _Token:
        if self.tok.kind != "punct" or self.tok.value != value:
            self.error(f"expected '{value}'")
        return self.advance()

    def expect_kw(self, value: str) -> _Token:
        if self.tok.kind != "kw" or self.tok.value != value:
            self.error(f"expected '{value}'")
        return self.advance()

    def expect_id(self) -> str:
        if self.tok.kind != "id":
            self.error("expected identifier")
        return self.advance().value

    def literal(self) -> str:
        # quoted or bare ID inside name/permission parentheses
        tok = self.tok
        if tok.kind not in ("str", "id"):
            self.error("expected a name")
        if not ID_RE.match(tok.value):
            self.error("name is not a valid identifier")
        self.advance()
        return tok.value

    def parse(self) -> PolicyAst:
        statements = []
        while True:
            statements.append(self.statement())
            self.expect_punct(";")
            if self.tok.kind == "eof":
                break
        return PolicyAst(tuple(statements))

    def statement(self) -> Statement:
        tok = self.tok
        if tok.kind == "eof":
            self.error("expected a statement")
        if tok.kind == "kw" and tok.value in ("Role", "Resource"):
            return self.declaration()
        if tok.kind == "id":
            return self.method_statement()
        self.error("expected 'Role', 'Resource' or an identifier")

    def declaration(self) -> Statement:
        head = self.advance()
        var = self.expect_id()
        self.expect_punct("=")
        self.expect_kw("new")
        self.expect_kw(head.value)
        self.expect_punct("(")
        name = self.literal()
        self.expect_punct(")")
        if head.value == "Resource":
            return DecRes(var, name, line=head.line)
        if self.tok.kind == "kw" and self.tok.value == "subsumes":
            self.advance()
            return DecRoleSubsume(var, name, self.expect_id(), line=head.line)
        return DecRole(var, name, line=head.line)

    def method_statement(self) -> Statement:
        var_tok = self.advance()
        self.expect_punct(".")
        method = self.tok
        if method.kind != "kw" or method.value not in ("addAction",
                                                       "addPermission"):
            self.error("expected 'addAction' or 'addPermission'")
        self.advance()
        self.expect_punct("(")
        first = self.literal()
        if method.value == "addAction":
            self.expect_punct(")")
            return AddActRes(var_tok.value, first, line=var_tok.line)
        self.expect_punct(",")
        second = self.literal()
        self.expect_punct(")")
        return AddPermRole(var_tok.value, first, second, line=var_tok.line)


def parse_policy(text: str) -> PolicyAst:
    """Parse JPol source into its statement list.

    Raises :class:`PolicyParseError` carrying line, column and the offending
    token on any deviation from the grammar, including empty input.
    """
    return _Parser(text).parse()


def format_policy(ast: PolicyAst) -> str:
    lines = []
    for st in ast:
        if isinstance(st, DecRes):
            lines.append(f"Resource {st.var} = new Resource('{st.name}');")
        elif isinstance(st, DecRoleSubsume):
            lines.append(f"Role {st.var} = new Role('{st.name}') "
                         f"subsumes {st.parent};")
        elif isinstance(st, DecRole):
            lines.append(f"Role {st.var} = new Role('{st.name}');")
        elif isinstance(st, AddActRes):
            lines.append(f"{st.var}.addAction('{st.action}');")
        else:
            lines.append(f"{st.var}.addPermission('{st.resource}', "
                         f"'{st.action}');")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Tables

class Permission(NamedTuple):
    resource: str
    action: str

    def __str__(self) -> str:
        return f"[{self.resource}, {self.action}]"


@dataclass(frozen=True)
class Resource:
    name: str
    actions: tuple[str, ...]
    line: int = field(default=0, compare=False)

    def has_action(self, action: str) -> bool:
        return action in self.actions


@dataclass(frozen=True)
class Role:
    name: str
    declared: frozenset[Permission]
    subsumes: Optional[str]
    effective: frozenset[Permission]
    line: int = field(default=0, compare=False)

    @property
    def inherited(self) -> frozenset[Permission]:
        return self.effective - self.declared


@dataclass(frozen=True)
class Policy:
    """The ``Resources`` and ``Roles`` tables, keyed by quoted names.

    Both mappings keep declaration order and must be treated as read-only.
    """

    resources: Mapping[str, Resource]
    roles: Mapping[str, Role]

    def is_permitted(self, role: str, resource: str, action: str) -> bool:
        r = self.roles.get(role)
        return r is not None and Permission(resource, action) in r.effective

    def effective_permissions(self, role: str) -> frozenset[Permission]:
        try:
            return self.roles[role].effective
        except KeyError:
            raise UnknownRole(role) from None

    def is_action(self, resource: str, method: str) -> bool:
        res = self.resources.get(resource)
        return res is not None and res.has_action(method)


def build_tables(ast: PolicyAst) -> Policy:
    """Resolve bindings and references and flatten the role hierarchy.

    Declarations are collected first, so statements may refer to roles and
    resources declared further down the file.
    """
    bindings: dict[str, tuple[str, str]] = {}
    res_decl: dict[str, DecRes] = {}
    role_decl: dict[str, Union[DecRole, DecRoleSubsume]] = {}

    for st in ast:
        if not isinstance(st, (DecRes, DecRole, DecRoleSubsume)):
            continue
        if st.var in bindings:
            raise PolicySemanticError(
                f"identifier {st.var!r} is already declared", st.line)
        if st.name in res_decl or st.name in role_decl:
            raise PolicySemanticError(
                f"duplicate declaration of {st.name!r}", st.line)
        if isinstance(st, DecRes):
            bindings[st.var] = ("resource", st.name)
            res_decl[st.name] = st
        else:
            bindings[st.var] = ("role", st.name)
            role_decl[st.name] = st

    def bound(var: str, kind: str, line: int) -> str:
        b = bindings.get(var)
        if b is None:
            raise PolicySemanticError(f"undeclared identifier {var!r}", line)
        if b[0] != kind:
            raise PolicySemanticError(f"{var!r} is a {b[0]}, not a {kind}",
                                      line)
        return b[1]

    actions: dict[str, list[str]] = {name: [] for name in res_decl}
    for st in ast:
        if isinstance(st, AddActRes):
            res = bound(st.var, "resource", st.line)
            if st.action in actions[res]:
                raise PolicySemanticError(
                    f"action {st.action!r} declared twice for {res!r}",
                    st.line)
            actions[res].append(st.action)

    declared: dict[str, set[Permission]] = {name: set() for name in role_decl}
    for st in ast:
        if isinstance(st, AddPermRole):
            role = bound(st.var, "role", st.line)
            if st.resource not in actions:
                raise PolicySemanticError(
                    f"permission names unknown resource {st.resource!r}",
                    st.line)
            if st.action not in actions[st.resource]:
                raise PolicySemanticError(
                    f"{st.action!r} is not an action of {st.resource!r}",
                    st.line)
            declared[role].add(Permission(st.resource, st.action))

    parent: dict[str, Optional[str]] = {}
    for name, st in role_decl.items():
        if isinstance(st, DecRoleSubsume):
            b = bindings.get(st.parent)
            if b is not None and b[0] == "role":
                parent[name] = b[1]
            elif st.parent in role_decl:
                parent[name] = st.parent
            else:
                raise PolicySemanticError(
                    f"{name!r} subsumes undeclared role {st.parent!r}",
                    st.line)
        else:
            parent[name] = None

    effective: dict[str, frozenset[Permission]] = {}
    for name in role_decl:
        chain = []
        cur: Optional[str] = name
        while cur is not None and cur not in effective:
            if cur in chain:
                cycle = " -> ".join(chain[chain.index(cur):] + [cur])
                raise PolicySemanticError(f"subsumption cycle: {cycle}",
                                          role_decl[cur].line)
            chain.append(cur)
            cur = parent[cur]
        acc = effective[cur] if cur is not None else frozenset()
        for r in reversed(chain):
            acc = acc | declared[r]
            effective[r] = acc

    resources = {name: Resource(name, tuple(actions[name]), line=st.line)
                 for name, st in res_decl.items()}
    roles = {name: Role(name, frozenset(declared[name]), parent[name],
                        effective[name], line=st.line)
             for name, st in role_decl.items()}
    return Policy(resources, roles)


def load_policy(text: str) -> Policy:
    return build_tables(parse_policy(text))


def is_permitted(policy: Policy, role: str, resource: str,
                 action: str) -> bool:
    """Closed-world permission query; unknown names are simply denied."""
    return policy.is_permitted(role, resource, action)


def effective_permissions(policy: Policy, role: str) -> frozenset[Permission]:
    return policy.effective_permissions(role)
