"""Per-group check suites and the program verdict.

A program is accepted when no check reports an error. Each call site is
judged once, by the suite of the group its enclosing class belongs to, and
produces at most one diagnostic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

from staticrbac.classify import (
    Group, GroupTables, classify, package_layout_violations,
)
from staticrbac.errors import ClassificationError
from staticrbac.frontend.model import (
    UNRESOLVED, CallSite, ClassModel, ProgramModel,
)
from staticrbac.jpol import Permission, Policy

PERMISSION_DENIED_TEXT = "Invocation not permitted"


class Kind(str, enum.Enum):
    NON_PUBLIC_ACTION = "NonPublicAction"
    NON_PRIVATE_AUXILIARY = "NonPrivateAuxiliary"
    FORBIDDEN_CALLEE_GROUP = "ForbiddenCalleeGroup"
    CROSS_ROLE_CALL = "CrossRoleCall"
    PERMISSION_DENIED = "PermissionDenied"
    RESOURCE_INSTANTIATION = "ResourceInstantiationOutsideRoleModel"
    UNRESOLVED_RECEIVER = "UnresolvedReceiver"
    CLASSIFICATION_ERROR = "ClassificationError"
    UNIMPLEMENTED_ROLE = "UnimplementedRole"
    PACKAGE_LAYOUT = "PackageLayout"

    def __str__(self) -> str:
        return self.value


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Diagnostic:
    class_name: str
    line: int
    kind: Kind
    message: str
    callee: Optional[tuple[str, str]] = None
    severity: Severity = Severity.ERROR
    path: Optional[str] = None

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def to_dict(self) -> dict:
        return {
            "className": self.class_name,
            "path": self.path,
            "line": self.line,
            "kind": self.kind.value,
            "severity": self.severity.value,
            "message": self.message,
            "callee": None if self.callee is None else {
                "class": self.callee[0], "method": self.callee[1]},
        }


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    diagnostics: tuple[Diagnostic, ...] = ()
    examined_calls: int = field(default=0, compare=False)

    @property
    def errors(self) -> tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.is_error)

    @property
    def warnings(self) -> tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if not d.is_error)

    def __bool__(self) -> bool:
        return self.accepted


# ---------------------------------------------------------------------------
# helpers shared by the suites


def _calls(c: ClassModel, stats: Optional[dict]):
    for _, call in c.iter_calls():
        if stats is not None:
            stats["calls"] = stats.get("calls", 0) + 1
        yield call


def _diag(c: ClassModel, call: CallSite, kind: Kind, message: str,
          severity: Severity = Severity.ERROR) -> Diagnostic:
    return Diagnostic(c.name, call.line, kind, message,
                      (call.called_class, call.called_method), severity,
                      c.path or None)


def _unresolved(c: ClassModel, call: CallSite,
                severity: Severity = Severity.ERROR) -> Diagnostic:
    return _diag(c, call, Kind.UNRESOLVED_RECEIVER,
                 f"cannot resolve the receiver of '{call.called_method}'; "
                 "an unresolved call may hide a protected invocation",
                 severity)


def _forbidden(c: ClassModel, call: CallSite, caller: Group,
               callee: Group) -> Diagnostic:
    return _diag(c, call, Kind.FORBIDDEN_CALLEE_GROUP,
                 f"{caller} class may not invoke {callee} class "
                 f"'{call.called_class}'")


def _cross_role(c: ClassModel, call: CallSite, role: str,
                other: str) -> Diagnostic:
    return _diag(c, call, Kind.CROSS_ROLE_CALL,
                 f"class of role '{role}' may not invoke "
                 f"'{call.called_class}', which belongs to role '{other}'")


def _instantiation(c: ClassModel, call: CallSite) -> Diagnostic:
    return _diag(c, call, Kind.RESOURCE_INSTANTIATION,
                 f"resource '{call.called_class}' may only be instantiated "
                 "in role model or resource classes")


def _action_check(c: ClassModel, call: CallSite, role: str,
                  policy: Policy) -> Optional[Diagnostic]:
    """Permission check for a call whose callee is a resource class."""
    res, method = call.called_class, call.called_method
    if policy.is_action(res, method) and \
            not policy.is_permitted(role, res, method):
        return _diag(c, call, Kind.PERMISSION_DENIED,
                     f"{PERMISSION_DENIED_TEXT}: role '{role}' does not hold "
                     f"permission {Permission(res, method)}")
    return None


# ---------------------------------------------------------------------------
# suites


def check_resource_class(c: ClassModel, policy: Policy, groups: GroupTables,
                         stats: Optional[dict] = None) -> list[Diagnostic]:
    out = []
    resource = policy.resources[c.name]
    for m in c.methods:
        if m.synthetic:
            continue
        if resource.has_action(m.name):
            if m.modifier != "public":
                out.append(Diagnostic(
                    c.name, m.line, Kind.NON_PUBLIC_ACTION,
                    f"action '{m.name}' of resource '{c.name}' must be "
                    f"public, not {m.modifier}", None, Severity.ERROR,
                    c.path or None))
        elif m.modifier != "private":
            out.append(Diagnostic(
                c.name, m.line, Kind.NON_PRIVATE_AUXILIARY,
                f"auxiliary method '{m.name}' of resource '{c.name}' must "
                f"be private, not {m.modifier}", None, Severity.ERROR,
                c.path or None))
    for call in _calls(c, stats):
        if call.called_class == UNRESOLVED:
            out.append(_unresolved(c, call))
            continue
        callee = groups.group_of(call.called_class)
        if callee is not None and (callee.is_role or callee is Group.SESSION):
            out.append(_forbidden(c, call, Group.RESOURCE, callee))
    return out


def check_role_model_class(c: ClassModel, policy: Policy,
                           groups: GroupTables,
                           stats: Optional[dict] = None) -> list[Diagnostic]:
    out = []
    role = groups.role_model_classes[c.name]
    for call in _calls(c, stats):
        d = None
        k = call.called_class
        callee = groups.group_of(k)
        if k == UNRESOLVED:
            d = _unresolved(c, call)
        elif callee is Group.RESOURCE:
            if not call.is_constructor:
                d = _action_check(c, call, role, policy)
        elif callee is Group.ROLE_MODEL:
            if k != c.name:
                d = _cross_role(c, call, role, groups.role_of(k))
        elif callee in (Group.ROLE_CONTROLLER, Group.ROLE_VIEW,
                        Group.SESSION):
            d = _forbidden(c, call, Group.ROLE_MODEL, callee)
        if d is not None:
            out.append(d)
    return out


def _controller_or_view(c: ClassModel, policy: Policy, groups: GroupTables,
                        caller: Group, role: str,
                        stats: Optional[dict]) -> list[Diagnostic]:
    out = []
    for call in _calls(c, stats):
        d = None
        k = call.called_class
        callee = groups.group_of(k)
        if k == UNRESOLVED:
            d = _unresolved(c, call)
        elif callee is Group.RESOURCE:
            if call.is_constructor:
                d = _instantiation(c, call)
            else:
                d = _action_check(c, call, role, policy)
        elif callee is Group.SESSION:
            d = _forbidden(c, call, caller, callee)
        elif callee is Group.ROLE_MODEL and caller is Group.ROLE_VIEW:
            d = _forbidden(c, call, caller, callee)
        elif callee is not None and callee.is_role:
            owner = groups.role_of(k)
            if owner != role:
                d = _cross_role(c, call, role, owner)
        if d is not None:
            out.append(d)
    return out


def check_role_controller_class(c: ClassModel, policy: Policy,
                                groups: GroupTables,
                                stats: Optional[dict] = None
                                ) -> list[Diagnostic]:
    role = groups.role_controller_classes[c.name]
    return _controller_or_view(c, policy, groups, Group.ROLE_CONTROLLER,
                               role, stats)


def check_role_view_class(c: ClassModel, policy: Policy, groups: GroupTables,
                          stats: Optional[dict] = None) -> list[Diagnostic]:
    role = groups.role_view_classes[c.name]
    return _controller_or_view(c, policy, groups, Group.ROLE_VIEW, role,
                               stats)


def check_session_class(c: ClassModel, policy: Policy, groups: GroupTables,
                        stats: Optional[dict] = None) -> list[Diagnostic]:
    out = []
    for call in _calls(c, stats):
        callee = groups.group_of(call.called_class)
        if call.called_class == UNRESOLVED:
            out.append(_unresolved(c, call))
        elif callee is Group.RESOURCE and call.is_constructor:
            out.append(_instantiation(c, call))
        elif callee in (Group.RESOURCE, Group.ROLE_MODEL):
            out.append(_forbidden(c, call, Group.SESSION, callee))
    return out


def check_other_class(c: ClassModel, policy: Policy, groups: GroupTables,
                      stats: Optional[dict] = None) -> list[Diagnostic]:
    out = []
    for call in _calls(c, stats):
        callee = groups.group_of(call.called_class)
        if call.called_class == UNRESOLVED:
            out.append(_unresolved(c, call, Severity.WARNING))
        elif callee is Group.RESOURCE and call.is_constructor:
            out.append(_instantiation(c, call))
        elif callee is not None and callee is not Group.OTHER:
            out.append(_forbidden(c, call, Group.OTHER, callee))
    return out


SUITES: dict[Group, Callable[..., list[Diagnostic]]] = {
    Group.RESOURCE: check_resource_class,
    Group.ROLE_MODEL: check_role_model_class,
    Group.ROLE_CONTROLLER: check_role_controller_class,
    Group.ROLE_VIEW: check_role_view_class,
    Group.SESSION: check_session_class,
    Group.OTHER: check_other_class,
}


def check_class(c: ClassModel, policy: Policy, groups: GroupTables,
                stats: Optional[dict] = None) -> list[Diagnostic]:
    """Run the suite matching the class's group."""
    return SUITES[groups.group_of(c.name)](c, policy, groups, stats)


def sort_key(d: Diagnostic):
    return (d.path or "", d.line)


def verify_program(policy: Policy, program: ProgramModel,
                   strict_packages: bool = False) -> Verdict:
    """Classify every class, run its suite and collect the verdict."""
    try:
        groups = classify(program, policy)
    except ClassificationError as exc:
        return Verdict(False, (Diagnostic(
            "", 0, Kind.CLASSIFICATION_ERROR, str(exc)),))

    stats = {"calls": 0}
    found: list[Diagnostic] = []
    for name in program.classes:
        found.extend(check_class(program.classes[name], policy, groups,
                                 stats))

    for role in groups.unimplemented_roles:
        found.append(Diagnostic(
            role, policy.roles[role].line, Kind.UNIMPLEMENTED_ROLE,
            f"role '{role}' is declared in the policy but has no role model "
            "and role controller class", None, Severity.WARNING))

    if strict_packages:
        for name, group, word in package_layout_violations(program, groups):
            c = program.classes[name]
            found.append(Diagnostic(
                name, c.line, Kind.PACKAGE_LAYOUT,
                f"{group} class '{name}' should live in a package whose "
                f"name contains '{word}' (found '{c.package or '<default>'}')",
                None, Severity.ERROR, c.path or None))

    found.sort(key=sort_key)
    accepted = not any(d.is_error for d in found)
    return Verdict(accepted, tuple(found), stats["calls"])
