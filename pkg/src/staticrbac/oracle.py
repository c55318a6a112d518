"""Independent semantic oracles for the verifier.

:func:`naive_ok` re-decides program acceptance by enumerating every clause
of the OK-program predicate directly over classes and calls. It shares no
code with :mod:`staticrbac.classify` or :mod:`staticrbac.checker`, so the
two can be run against each other.

:func:`simulate_sessions` over-approximates what each active role can
reach: starting from the role's controller and views it follows every
resolved call through the program and records each action invocation it
lands on. :func:`check_satisfaction` then asks whether all of those are
granted by the policy.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from staticrbac.classify import Group, classify
from staticrbac.frontend.model import (
    CONSTRUCTOR, FIELD_INIT, UNRESOLVED, ProgramModel,
)
from staticrbac.jpol import Policy

# ---------------------------------------------------------------------------
# Naive OK(P)

_RES, _SES, _MODEL, _CTRL, _VIEW, _OTHER = (
    "resource", "session", "model", "controller", "view", "other")
_ROLE_KINDS = (_MODEL, _CTRL, _VIEW)


def _label(name: str, policy: Policy) -> tuple[str, Optional[str]]:
    candidates = []
    if name in policy.resources:
        candidates.append((0, 0, _RES, None))
    if name[:7] == "Session":
        candidates.append((1, 0, _SES, None))
    for role in policy.roles:
        if name == role + "Model":
            candidates.append((2, 0, _MODEL, role))
        if name == role + "Controller":
            candidates.append((3, 0, _CTRL, role))
        if name[:len(role) + 4] == role + "View":
            candidates.append((4, -len(role), _VIEW, role))
    if not candidates:
        return _OTHER, None
    _, _, kind, role = min(candidates)
    return kind, role


def _permissions(policy: Policy, role: str) -> set[tuple[str, str]]:
    out: set[tuple[str, str]] = set()
    seen = set()
    cur: Optional[str] = role
    while cur is not None and cur not in seen:
        seen.add(cur)
        out |= {(p.resource, p.action) for p in policy.roles[cur].declared}
        cur = policy.roles[cur].subsumes
    return out


def naive_ok(policy: Policy, program: ProgramModel) -> bool:
    labels = {name: _label(name, policy) for name in program.classes}
    perms = {role: _permissions(policy, role) for role in policy.roles}

    def is_action(res: str, method: str) -> bool:
        return method in policy.resources[res].actions

    # actions are public and auxiliary methods are private
    for name, (kind, _) in labels.items():
        if kind != _RES:
            continue
        for m in program.classes[name].methods:
            if m.name in (CONSTRUCTOR, FIELD_INIT):
                continue
            wanted = "public" if is_action(name, m.name) else "private"
            if m.modifier != wanted:
                return False

    for name, (kind, role) in labels.items():
        for m in program.classes[name].methods:
            for call in m.calls:
                target = call.called_class
                if target == UNRESOLVED:
                    if kind != _OTHER:
                        return False
                    continue
                if target not in labels:
                    continue
                t_kind, t_role = labels[target]
                method = call.called_method
                ctor = method == CONSTRUCTOR

                if kind == _RES:
                    ok = t_kind not in (_MODEL, _CTRL, _VIEW, _SES)
                elif kind == _MODEL:
                    ok = t_kind not in (_SES, _CTRL, _VIEW) and \
                        (t_kind != _MODEL or target == name) and \
                        (t_kind != _RES or not is_action(target, method)
                         or (target, method) in perms[role])
                elif kind in (_CTRL, _VIEW):
                    ok = t_kind != _SES and \
                        not (kind == _VIEW and t_kind == _MODEL) and \
                        (t_kind not in _ROLE_KINDS or t_role == role) and \
                        not (t_kind == _RES and ctor) and \
                        (t_kind != _RES or not is_action(target, method)
                         or (target, method) in perms[role])
                elif kind == _SES:
                    ok = t_kind not in (_RES, _MODEL)
                else:
                    ok = t_kind == _OTHER
                if not ok:
                    return False
    return True


# ---------------------------------------------------------------------------
# Session simulation


@dataclass(frozen=True)
class SessionState:
    retrieved_roles: tuple[str, ...] = ()
    active_role: Optional[str] = None

    def __post_init__(self):
        if self.active_role is not None and \
                self.active_role not in self.retrieved_roles:
            raise ValueError(f"active role {self.active_role!r} was not "
                             "retrieved for this user")

    def activate(self, role: str) -> "SessionState":
        return SessionState(self.retrieved_roles, role)


@dataclass(frozen=True)
class ReachableAccess:
    role: str
    resource: str
    action: str
    path: tuple[tuple[str, str], ...] = field(default=(), compare=False)

    def describe(self) -> str:
        hops = " -> ".join(f"{c}.{m}" for c, m in self.path)
        return f"role '{self.role}' reaches {self.resource}.{self.action} " \
               f"via {hops}"


def _entry_methods(program: ProgramModel, class_name: str):
    seen = set()
    for m in program.classes[class_name].methods:
        if m.modifier == "public" or m.synthetic:
            if m.name not in seen:
                seen.add(m.name)
                yield m.name


def simulate_sessions(policy: Policy, program: ProgramModel,
                      gaps: Optional[list] = None) -> set[ReachableAccess]:
    """Reachable action invocations per role.

    Resource and session classes are not entered: action bodies and
    session classes are trusted. Unresolved calls are appended to ``gaps``
    (as ``(role, class, method, line)``) when a list is given.
    """
    groups = classify(program, policy)
    found: set[ReachableAccess] = set()
    for role in policy.roles:
        entries = [c for c in groups.classes_of_role(role)
                   if groups.group_of(c) in (Group.ROLE_CONTROLLER,
                                             Group.ROLE_VIEW)]
        parent: dict[tuple[str, str], Optional[tuple[str, str]]] = {}
        queue: deque = deque()
        for c in sorted(entries):
            for m in _entry_methods(program, c):
                node = (c, m)
                if node not in parent:
                    parent[node] = None
                    queue.append(node)
        best: dict[tuple[str, str], ReachableAccess] = {}
        while queue:
            node = queue.popleft()
            cls = program.classes[node[0]]
            for m in cls.methods_named(node[1]):
                for call in m.calls:
                    target = call.called_class
                    if target == UNRESOLVED:
                        if gaps is not None:
                            gaps.append((role, node[0], node[1], call.line))
                        continue
                    group = groups.group_of(target)
                    if group is None or group is Group.SESSION:
                        continue
                    if group is Group.RESOURCE:
                        key = (target, call.called_method)
                        if policy.is_action(*key) and key not in best:
                            path = [key]
                            cur: Optional[tuple[str, str]] = node
                            while cur is not None:
                                path.append(cur)
                                cur = parent[cur]
                            best[key] = ReachableAccess(
                                role, target, call.called_method,
                                tuple(reversed(path)))
                        continue
                    callee = program.classes[target]
                    if call.called_method == CONSTRUCTOR:
                        names = (CONSTRUCTOR, FIELD_INIT)
                    else:
                        names = (call.called_method,)
                    for name in names:
                        nxt = (target, name)
                        if nxt not in parent and callee.methods_named(name):
                            parent[nxt] = node
                            queue.append(nxt)
        found.update(best.values())
    return found


def unauthorized(policy: Policy, reachable) -> list[ReachableAccess]:
    return sorted((a for a in reachable
                   if not policy.is_permitted(a.role, a.resource, a.action)),
                  key=lambda a: (a.role, a.resource, a.action))


def check_satisfaction(policy: Policy, reachable) -> bool:
    """True when every reachable action is granted to the reaching role."""
    return not unauthorized(policy, reachable)
