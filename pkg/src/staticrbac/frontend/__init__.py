"""Source front end: Java-subset files to :class:`ClassModel` objects."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable, Mapping, Union

from staticrbac.errors import DuplicateClassError, SourceErrors, SourceParseError
from staticrbac.frontend.model import (
    CONSTRUCTOR, EXTERNAL, FIELD_INIT, UNRESOLVED, CallSite, ClassModel,
    FieldDecl, MethodModel, ProgramModel, ReceiverForm,
)
from staticrbac.frontend.resolve import CallCollector
from staticrbac.frontend.syntax import ClassSyntax, parse_compilation_unit

__all__ = [
    "CONSTRUCTOR", "EXTERNAL", "FIELD_INIT", "UNRESOLVED",
    "CallSite", "ClassModel", "FieldDecl", "MethodModel", "ProgramModel",
    "ReceiverForm", "SOURCE_SUFFIX",
    "parse_class", "resolve_calls", "parse_sources", "parse_program",
    "find_sources",
]

SOURCE_SUFFIX = ".java"

PathLike = Union[str, os.PathLike]


def _shell(syntax: ClassSyntax, path: str) -> ClassModel:
    """Build the class model with call lists still empty."""
    seen = {}
    methods = []
    for m in syntax.methods:
        key = (m.name, len(m.params))
        if key in seen:
            shown = syntax.name if m.name == CONSTRUCTOR else m.name
            raise SourceParseError(
                f"duplicate method {shown!r} with {key[1]} parameter(s)",
                path, m.line, 1)
        seen[key] = m
        methods.append(MethodModel(
            m.name, m.modifier, m.return_type, tuple(m.params), (),
            line=m.line, end_line=m.end_line, is_static=m.is_static,
            body=m.body))

    inits = [(f.line, f.end_line, f.init) for f in syntax.fields
             if f.init is not None]
    inits += [(i.line, i.end_line, i.body) for i in syntax.initializers]
    if inits:
        inits.sort(key=lambda item: item[0])
        methods.append(MethodModel(
            FIELD_INIT, "private", "void", (), (),
            line=inits[0][0], end_line=max(end for _, end, _ in inits),
            body=[item for _, _, item in inits]))

    fields = tuple(FieldDecl(f.name, f.type, f.modifier, line=f.line)
                   for f in syntax.fields)
    return ClassModel(
        name=syntax.name, package=syntax.package, modifier=syntax.modifier,
        fields=fields, methods=tuple(methods), kind=syntax.kind,
        extends=tuple(syntax.extends), implements=tuple(syntax.implements),
        imports=tuple(syntax.imports), path=path, line=syntax.line)


def _with_calls(cls: ClassModel, lookup) -> ClassModel:
    collector = CallCollector(cls, lookup)
    methods = []
    for m in cls.methods:
        if m.name == FIELD_INIT:
            calls = collector.collect_initializers(m.body)
        else:
            calls = collector.collect_method(m.params, m.body)
        methods.append(MethodModel(
            m.name, m.modifier, m.return_type, m.params, calls,
            line=m.line, end_line=m.end_line, is_static=m.is_static,
            body=m.body))
    return ClassModel(
        name=cls.name, package=cls.package, modifier=cls.modifier,
        fields=cls.fields, methods=tuple(methods), kind=cls.kind,
        extends=cls.extends, implements=cls.implements, imports=cls.imports,
        path=cls.path, line=cls.line)


def _parse_shell(text: str, path: str) -> ClassModel:
    syntax = parse_compilation_unit(text, path)
    if path.endswith(SOURCE_SUFFIX):
        stem = os.path.basename(path)[:-len(SOURCE_SUFFIX)]
        if stem != syntax.name:
            raise SourceParseError(
                f"class {syntax.name!r} must be declared in "
                f"{syntax.name}{SOURCE_SUFFIX}", path, syntax.line, 1)
    return _shell(syntax, path)


def parse_class(text: str, path: PathLike = "<string>") -> ClassModel:
    """Parse one source file into a :class:`ClassModel`.

    Receivers are resolved against the class itself only; use
    :func:`resolve_calls` (or :func:`parse_program`) to resolve against the
    whole program.
    """
    return _with_calls(_parse_shell(text, str(path)), lambda name: None)


def resolve_calls(cls: ClassModel, program: ProgramModel) -> ClassModel:
    return _with_calls(cls, program.classes.get)


def parse_sources(sources: Mapping[PathLike, str]) -> ProgramModel:
    """Parse and resolve a program given as ``{path: text}``.

    All parse failures are reported together as :class:`SourceErrors`.
    """
    errors = []
    shells: dict[str, ClassModel] = {}
    for path, text in sources.items():
        path = str(path)
        try:
            cls = _parse_shell(text, path)
        except SourceParseError as exc:
            errors.append(exc)
            continue
        if cls.name in shells:
            raise DuplicateClassError(cls.name, [shells[cls.name].path, path])
        shells[cls.name] = cls
    if errors:
        raise SourceErrors(errors)
    lookup = shells.get
    classes = {name: _with_calls(cls, lookup) for name, cls in shells.items()}
    return ProgramModel(classes, {n: c.path for n, c in classes.items()})


def parse_program(paths: Iterable[PathLike]) -> ProgramModel:
    sources = {}
    for p in paths:
        try:
            sources[str(p)] = Path(p).read_text(encoding="utf-8")
        except UnicodeDecodeError as exc:
            raise SourceErrors([SourceParseError(
                f"not valid UTF-8 ({exc.reason})", str(p), 1, 1)]) from exc
    return parse_sources(sources)


def find_sources(root: PathLike) -> list[Path]:
    """All source files below ``root``, in a stable order."""
    return sorted(p for p in Path(root).rglob("*" + SOURCE_SUFFIX)
                  if p.is_file())
