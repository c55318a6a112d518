"""Parsed program representation: classes, methods and call sites."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Mapping, Optional

#: ``called_class`` when the receiver's type could not be determined.
UNRESOLVED = "<unresolved>"
#: ``called_class`` for receivers whose static type is known to lie outside
#: the program (for example the result of a library call).
EXTERNAL = "<external>"
#: ``called_method`` of an object creation, and the name of constructors.
CONSTRUCTOR = "<init>"
#: Synthetic method holding the calls made by field initializers and
#: initializer blocks.
FIELD_INIT = "<fieldinit>"

SYNTHETIC_METHODS = frozenset([CONSTRUCTOR, FIELD_INIT])


class ReceiverForm(str, enum.Enum):
    STATIC_CLASS = "StaticClass"
    VARIABLE = "Variable"
    CHAINED = "Chained"
    NEW = "New"
    SELF = "Self"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class CallSite:
    called_class: str
    called_method: str
    line: int
    receiver_form: ReceiverForm
    column: int = field(default=0, compare=False)

    @property
    def is_constructor(self) -> bool:
        return self.called_method == CONSTRUCTOR


@dataclass(frozen=True)
class FieldDecl:
    name: str
    type: str
    modifier: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MethodModel:
    name: str
    modifier: str
    return_type: str
    params: tuple[tuple[str, str], ...] = ()
    calls: tuple[CallSite, ...] = ()
    line: int = field(default=0, compare=False)
    end_line: int = field(default=0, compare=False)
    is_static: bool = field(default=False, compare=False)
    # statement tree, kept so calls can be re-resolved against a program
    body: Any = field(default=None, compare=False, repr=False)

    @property
    def synthetic(self) -> bool:
        return self.name in SYNTHETIC_METHODS


@dataclass(frozen=True)
class ClassModel:
    name: str
    package: str = ""
    modifier: str = "public"
    fields: tuple[FieldDecl, ...] = ()
    methods: tuple[MethodModel, ...] = ()
    kind: str = "class"
    extends: tuple[str, ...] = ()
    implements: tuple[str, ...] = ()
    imports: tuple[str, ...] = field(default=(), compare=False)
    path: str = field(default="", compare=False)
    line: int = field(default=1, compare=False)

    @cached_property
    def _methods_by_name(self) -> dict[str, tuple[MethodModel, ...]]:
        index: dict[str, list[MethodModel]] = {}
        for m in self.methods:
            index.setdefault(m.name, []).append(m)
        return {k: tuple(v) for k, v in index.items()}

    @cached_property
    def _field_types(self) -> dict[str, str]:
        return {f.name: f.type for f in self.fields}

    def methods_named(self, name: str) -> tuple[MethodModel, ...]:
        return self._methods_by_name.get(name, ())

    def field_type(self, name: str) -> Optional[str]:
        return self._field_types.get(name)

    def iter_calls(self):
        """Yield ``(method, call)`` for every call site in the class."""
        for m in self.methods:
            for c in m.calls:
                yield m, c


@dataclass(frozen=True)
class ProgramModel:
    """All classes of a program in one global namespace (read-only)."""

    classes: Mapping[str, ClassModel] = field(default_factory=dict)
    source_index: Mapping[str, str] = field(default_factory=dict)

    def __contains__(self, name: object) -> bool:
        return name in self.classes

    def __len__(self) -> int:
        return len(self.classes)

    def get(self, name: str) -> Optional[ClassModel]:
        return self.classes.get(name)

    def path_of(self, name: str) -> str:
        return self.source_index.get(name, "")

    @property
    def call_count(self) -> int:
        return sum(len(m.calls) for c in self.classes.values()
                   for m in c.methods)

    @classmethod
    def from_classes(cls, classes) -> "ProgramModel":
        table = {c.name: c for c in classes}
        return cls(table, {c.name: c.path for c in table.values()})
