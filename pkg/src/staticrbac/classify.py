"""Group program classes by the naming rules of the RBAC MVC patterns.

Each class lands in exactly one group, taking the first rule that matches:

1. its name is a resource name                        -> Resource
2. it starts with ``Session``                         -> Session
3. it is ``<Role>Model``                              -> RoleModel(Role)
4. it is ``<Role>Controller``                         -> RoleController(Role)
5. it is ``<Role>View`` followed by any identifier    -> RoleView(Role)
6. anything else                                      -> Other

When several roles prefix a view name, the longest role name wins.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional

from staticrbac.errors import NoSuchRole
from staticrbac.frontend.model import ProgramModel
from staticrbac.jpol import Policy

SESSION_PREFIX = "Session"
MODEL_SUFFIX = "Model"
CONTROLLER_SUFFIX = "Controller"
VIEW_MARKER = "View"


class Group(str, enum.Enum):
    RESOURCE = "Resource"
    SESSION = "Session"
    ROLE_MODEL = "RoleModel"
    ROLE_CONTROLLER = "RoleController"
    ROLE_VIEW = "RoleView"
    OTHER = "Other"

    def __str__(self) -> str:
        return self.value

    @property
    def is_role(self) -> bool:
        return self in (Group.ROLE_MODEL, Group.ROLE_CONTROLLER,
                        Group.ROLE_VIEW)


@dataclass(frozen=True)
class GroupTables:
    resource_classes: frozenset[str] = frozenset()
    role_model_classes: Mapping[str, str] = field(default_factory=dict)
    role_controller_classes: Mapping[str, str] = field(default_factory=dict)
    role_view_classes: Mapping[str, str] = field(default_factory=dict)
    session_classes: frozenset[str] = frozenset()
    other_classes: frozenset[str] = frozenset()
    #: roles declared in the policy that have no model or no controller
    unimplemented_roles: tuple[str, ...] = ()

    def group_of(self, name: str) -> Optional[Group]:
        """Group of a program class, or ``None`` for names outside it."""
        if name in self.resource_classes:
            return Group.RESOURCE
        if name in self.role_model_classes:
            return Group.ROLE_MODEL
        if name in self.role_controller_classes:
            return Group.ROLE_CONTROLLER
        if name in self.role_view_classes:
            return Group.ROLE_VIEW
        if name in self.session_classes:
            return Group.SESSION
        if name in self.other_classes:
            return Group.OTHER
        return None

    def role_of(self, name: str) -> Optional[str]:
        return (self.role_model_classes.get(name)
                or self.role_controller_classes.get(name)
                or self.role_view_classes.get(name))

    def classes_of_role(self, role: str) -> list[str]:
        return [c for table in (self.role_model_classes,
                                self.role_controller_classes,
                                self.role_view_classes)
                for c, r in table.items() if r == role]

    def __len__(self) -> int:
        return (len(self.resource_classes) + len(self.role_model_classes)
                + len(self.role_controller_classes)
                + len(self.role_view_classes) + len(self.session_classes)
                + len(self.other_classes))


def _view_owner(name: str, roles) -> Optional[str]:
    best = None
    for role in roles:
        if name.startswith(role + VIEW_MARKER) and (
                best is None or len(role) > len(best)):
            best = role
    return best


def classify_name(name: str, policy: Policy) -> tuple[Group, Optional[str]]:
    if name in policy.resources:
        return Group.RESOURCE, None
    if name.startswith(SESSION_PREFIX):
        return Group.SESSION, None
    if name.endswith(MODEL_SUFFIX) and \
            name[:-len(MODEL_SUFFIX)] in policy.roles:
        return Group.ROLE_MODEL, name[:-len(MODEL_SUFFIX)]
    if name.endswith(CONTROLLER_SUFFIX) and \
            name[:-len(CONTROLLER_SUFFIX)] in policy.roles:
        return Group.ROLE_CONTROLLER, name[:-len(CONTROLLER_SUFFIX)]
    owner = _view_owner(name, policy.roles)
    if owner is not None:
        return Group.ROLE_VIEW, owner
    return Group.OTHER, None


def classify(program: ProgramModel, policy: Policy) -> GroupTables:
    resources, sessions, others = set(), set(), set()
    models, controllers, views = {}, {}, {}
    for name in program.classes:
        group, role = classify_name(name, policy)
        if group is Group.RESOURCE:
            resources.add(name)
        elif group is Group.SESSION:
            sessions.add(name)
        elif group is Group.ROLE_MODEL:
            models[name] = role
        elif group is Group.ROLE_CONTROLLER:
            controllers[name] = role
        elif group is Group.ROLE_VIEW:
            views[name] = role
        else:
            others.add(name)
    with_model = set(models.values())
    with_controller = set(controllers.values())
    missing = tuple(r for r in policy.roles
                    if r not in with_model or r not in with_controller)
    return GroupTables(frozenset(resources), models, controllers, views,
                       frozenset(sessions), frozenset(others), missing)


def owning_role(class_name: str, group: Group, policy: Policy) -> str:
    """Role owning a role class, recovered from its name alone."""
    role = None
    if group is Group.ROLE_MODEL and class_name.endswith(MODEL_SUFFIX):
        role = class_name[:-len(MODEL_SUFFIX)]
    elif group is Group.ROLE_CONTROLLER and \
            class_name.endswith(CONTROLLER_SUFFIX):
        role = class_name[:-len(CONTROLLER_SUFFIX)]
    elif group is Group.ROLE_VIEW:
        role = _view_owner(class_name, policy.roles)
    if role is None or role not in policy.roles:
        raise NoSuchRole(f"{class_name!r} does not name a declared role "
                         f"as a {group}")
    return role


# Package layout expected by the optional strict lint: each group's classes
# live in a package whose dotted name contains the given word.
PACKAGE_WORDS = {
    Group.RESOURCE: "model",
    Group.ROLE_MODEL: "model",
    Group.ROLE_CONTROLLER: "controller",
    Group.ROLE_VIEW: "view",
    Group.SESSION: "session",
    Group.OTHER: "other",
}


# the empty interface grouping every role controller
ROLE_CONTROLLER_INTERFACE = "RoleController"


def package_layout_violations(program: ProgramModel, tables: GroupTables):
    """Yield ``(class_name, group, expected_word)`` for misplaced classes."""
    for name in sorted(program.classes):
        group = tables.group_of(name)
        word = PACKAGE_WORDS[group]
        if name == ROLE_CONTROLLER_INTERFACE:
            word = "controller"
        parts = program.classes[name].package.split(".")
        if not any(word in part for part in parts):
            yield name, group, word
