"""Static receiver resolution.

Every invocation and object creation in a method body becomes a
:class:`CallSite`. The called class is found from the receiver's static
type: the class literally named (static calls and ``new``), the declared
type of a variable (parameters and locals shadow fields), or the declared
return type of the previous call in a chain. Inheritance is never
traversed; a member that is not declared on the statically known class
yields :data:`UNRESOLVED`.
"""

from __future__ import annotations

from typing import Callable, Optional

from staticrbac.frontend import syntax as S
from staticrbac.frontend.lexer import PRIMITIVES
from staticrbac.frontend.model import (
    CONSTRUCTOR, EXTERNAL, UNRESOLVED, CallSite, ClassModel, ReceiverForm,
)

# evaluation results: (kind, payload) with kind in
#   "value"   payload = static type name
#   "class"   payload = class name (expression names a type)
#   "package" payload = dotted prefix of a qualified name
VALUE, CLASS, PACKAGE = "value", "class", "package"

_OPAQUE = (UNRESOLVED, EXTERNAL)


def _is_reference(type_: str) -> bool:
    return type_ not in PRIMITIVES and type_ not in _OPAQUE and \
        type_ != "null" and not type_.endswith("[]")


class CallCollector:
    """Collect the call sites of one class.

    ``lookup`` maps a class name to its :class:`ClassModel` (or ``None``);
    the enclosing class is always visible.
    """

    def __init__(self, cls: ClassModel,
                 lookup: Callable[[str], Optional[ClassModel]]):
        self.cls = cls
        self._lookup = lookup
        self.scopes: list[dict[str, str]] = []
        self.calls: list[CallSite] = []

    # -- program queries ----------------------------------------------------

    def lookup(self, name: str) -> Optional[ClassModel]:
        if name == self.cls.name:
            return self.cls
        return self._lookup(name)

    def is_class_name(self, name: str) -> bool:
        # types outside the program follow the Java capitalisation convention
        return self.lookup(name) is not None or name[:1].isupper()

    def field_of(self, type_: str, name: str) -> str:
        if type_.endswith("[]"):
            return "int" if name == "length" else EXTERNAL
        if type_ == UNRESOLVED:
            return UNRESOLVED
        c = self.lookup(type_)
        if c is None:
            return EXTERNAL
        return c.field_type(name) or UNRESOLVED

    def return_type(self, class_name: str, method: str) -> str:
        if class_name == UNRESOLVED:
            return UNRESOLVED
        c = self.lookup(class_name)
        if c is None:
            return EXTERNAL
        types = {m.return_type for m in c.methods_named(method)}
        return types.pop() if len(types) == 1 else UNRESOLVED

    # -- scopes -------------------------------------------------------------

    def declare(self, name: str, type_: str):
        self.scopes[-1][name] = type_

    def variable(self, name: str) -> Optional[str]:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return self.cls.field_type(name)

    # -- entry points -------------------------------------------------------

    def collect_method(self, params, body) -> tuple[CallSite, ...]:
        self.calls = []
        self.scopes = [dict(params)]
        if body is not None:
            self.stmt(body)
        return tuple(self.calls)

    def collect_initializers(self, items) -> tuple[CallSite, ...]:
        """``items`` are field initializer expressions and blocks."""
        self.calls = []
        for item in items:
            self.scopes = [{}]
            if isinstance(item, S.Block):
                self.stmt(item)
            else:
                self.expr(item)
        return tuple(self.calls)

    # -- statements ---------------------------------------------------------

    def stmt(self, s):
        handler = self._STMT.get(type(s))
        if handler is None:
            raise TypeError(f"unhandled statement {type(s).__name__}")
        handler(self, s)

    def _block(self, s: S.Block):
        self.scopes.append({})
        for st in s.stmts:
            self.stmt(st)
        self.scopes.pop()

    def _local(self, s: S.LocalVar):
        for name, type_, init in s.decls:
            if init is not None:
                t = self.expr(init)
                if type_ == "var":
                    type_ = t
            self.declare(name, type_)

    def _expr_stmt(self, s):
        self.expr(s.expr)

    def _return(self, s: S.Return):
        if s.expr is not None:
            self.expr(s.expr)

    def _if(self, s: S.If):
        self.expr(s.cond)
        self.scoped(s.then)
        if s.other is not None:
            self.scoped(s.other)

    def _while(self, s: S.While):
        self.expr(s.cond)
        self.scoped(s.body)

    def _do(self, s: S.DoWhile):
        self.scoped(s.body)
        self.expr(s.cond)

    def _for(self, s: S.For):
        self.scopes.append({})
        for st in s.init:
            self.stmt(st)
        if s.cond is not None:
            self.expr(s.cond)
        self.scoped(s.body)
        for e in s.update:
            self.expr(e)
        self.scopes.pop()

    def _foreach(self, s: S.ForEach):
        t = self.expr(s.iterable)
        self.scopes.append({})
        type_ = s.type
        if type_ == "var":
            type_ = t[:-2] if t.endswith("[]") else EXTERNAL
        self.declare(s.name, type_)
        self.stmt(s.body)
        self.scopes.pop()

    def _try(self, s: S.Try):
        self.stmt(s.body)
        for type_, name, block in s.catches:
            self.scopes.append({name: type_})
            self.stmt(block)
            self.scopes.pop()
        if s.final is not None:
            self.stmt(s.final)

    def _sync(self, s: S.Synchronized):
        self.expr(s.lock)
        self.stmt(s.body)

    def _nothing(self, s):
        pass

    def scoped(self, s):
        # a lone declaration as a branch body must not leak
        self.scopes.append({})
        self.stmt(s)
        self.scopes.pop()

    _STMT = {
        S.Block: _block, S.LocalVar: _local, S.ExprStmt: _expr_stmt,
        S.Return: _return, S.Throw: _expr_stmt, S.If: _if, S.While: _while,
        S.DoWhile: _do, S.For: _for, S.ForEach: _foreach, S.Try: _try,
        S.Synchronized: _sync, S.Jump: _nothing,
    }

    # -- expressions --------------------------------------------------------

    def expr(self, e) -> str:
        """Visit ``e`` and return its static type."""
        kind, payload = self.eval(e)
        if kind == VALUE:
            return payload
        return UNRESOLVED if kind == PACKAGE else "Class"

    def eval(self, e) -> tuple[str, str]:
        t = type(e)
        if t is S.Name:
            found = self.variable(e.id)
            if found is not None:
                return VALUE, found
            if self.is_class_name(e.id):
                return CLASS, e.id
            return PACKAGE, e.id
        if t is S.Call:
            return VALUE, self.call(e)
        if t is S.FieldAccess:
            kind, payload = self.eval(e.target)
            if kind == PACKAGE:
                if self.is_class_name(e.name):
                    return CLASS, e.name
                return PACKAGE, f"{payload}.{e.name}"
            return VALUE, self.field_of(payload, e.name)
        if t is S.New:
            self.calls.append(CallSite(e.type, CONSTRUCTOR, e.line,
                                       ReceiverForm.NEW, e.column))
            for a in e.args:
                self.expr(a)
            return VALUE, e.type
        if t is S.Lit:
            return VALUE, e.type
        if t is S.This:
            return VALUE, self.cls.name
        if t is S.Super:
            return VALUE, self.superclass()
        if t is S.Paren:
            return VALUE, self.expr(e.expr)
        if t is S.Cast:
            self.expr(e.expr)
            return VALUE, e.type
        if t is S.Assign:
            target = self.expr(e.target)
            value = self.expr(e.value)
            return VALUE, target if e.op != "=" or target != UNRESOLVED \
                else value
        if t is S.Binary:
            left = self.expr(e.left)
            right = self.expr(e.right) if e.right is not None else None
            if e.op == "+" and "String" in (left, right):
                return VALUE, "String"
            if e.op in ("==", "!=", "<", ">", "<=", ">=", "&&", "||"):
                return VALUE, "boolean"
            return VALUE, left
        if t is S.Unary:
            return VALUE, self.expr(e.expr)
        if t is S.Conditional:
            self.expr(e.cond)
            a = self.expr(e.then)
            b = self.expr(e.other)
            if a == b or b == "null":
                return VALUE, a
            if a == "null":
                return VALUE, b
            return VALUE, UNRESOLVED
        if t is S.Index:
            arr = self.expr(e.target)
            self.expr(e.index)
            if arr.endswith("[]"):
                return VALUE, arr[:-2]
            return VALUE, arr if arr in _OPAQUE else UNRESOLVED
        if t is S.InstanceOf:
            self.expr(e.expr)
            return VALUE, "boolean"
        if t is S.CtorCall:
            if e.kind == "this":
                site = CallSite(self.cls.name, CONSTRUCTOR, e.line,
                                ReceiverForm.SELF, e.column)
            else:
                site = CallSite(self.superclass(), CONSTRUCTOR, e.line,
                                ReceiverForm.STATIC_CLASS, e.column)
            self.calls.append(site)
            for a in e.args:
                self.expr(a)
            return VALUE, "void"
        if t is S.NewArray:
            for x in e.exprs:
                self.expr(x)
            return VALUE, e.type
        if t is S.ArrayInit:
            for x in e.elems:
                self.expr(x)
            return VALUE, UNRESOLVED
        if t is S.ClassLit:
            return VALUE, "Class"
        raise TypeError(f"unhandled expression {t.__name__}")

    def superclass(self) -> str:
        return self.cls.extends[0] if self.cls.extends else "Object"

    def call(self, e: S.Call) -> str:
        target = e.target
        if target is None or type(target) is S.This:
            called, form = self.cls.name, ReceiverForm.SELF
        elif type(target) is S.Super:
            called, form = self.superclass(), ReceiverForm.STATIC_CLASS
        else:
            kind, payload = self.eval(target)
            if kind == CLASS:
                called, form = payload, ReceiverForm.STATIC_CLASS
            else:
                if type(target) in (S.Name, S.FieldAccess):
                    form = ReceiverForm.VARIABLE
                else:
                    form = ReceiverForm.CHAINED
                if kind == PACKAGE or payload == UNRESOLVED:
                    called = UNRESOLVED
                elif _is_reference(payload):
                    called = payload
                else:
                    called = EXTERNAL
        self.calls.append(CallSite(called, e.name, e.line, form, e.column))
        for a in e.args:
            self.expr(a)
        return self.return_type(called, e.name)
