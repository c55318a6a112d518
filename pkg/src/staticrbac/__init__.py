"""Static enforcement of role-based access control policies.

A JPol policy names resources, their actions and the roles permitted to
invoke them. :func:`verify_program` checks that a Java program organised
along the RBAC MVC patterns only invokes actions its role classes hold
permission for.
"""

from staticrbac.checker import (
    Diagnostic, Kind, Severity, Verdict, check_class, verify_program,
)
from staticrbac.classify import Group, GroupTables, classify, owning_role
from staticrbac.errors import (
    AmbiguousClassification, ClassificationError, DuplicateClassError,
    NoSuchRole, PolicyError, PolicyParseError, PolicySemanticError,
    SourceError, SourceErrors, SourceParseError, StaticRBACError, UnknownRole,
)
from staticrbac.frontend import (
    CallSite, ClassModel, ProgramModel, ReceiverForm, find_sources,
    parse_class, parse_program, parse_sources, resolve_calls,
)
from staticrbac.jpol import (
    Permission, Policy, PolicyAst, build_tables, effective_permissions,
    is_permitted, load_policy, parse_policy,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousClassification", "CallSite", "ClassModel",
    "ClassificationError", "Diagnostic", "DuplicateClassError", "Group",
    "GroupTables", "Kind", "NoSuchRole", "Permission", "Policy", "PolicyAst",
    "PolicyError", "PolicyParseError", "PolicySemanticError", "ProgramModel",
    "ReceiverForm", "Severity", "SourceError", "SourceErrors",
    "SourceParseError", "StaticRBACError", "UnknownRole", "Verdict",
    "build_tables", "check_class", "classify", "effective_permissions",
    "find_sources", "is_permitted", "load_policy", "owning_role",
    "parse_class", "parse_policy", "parse_program", "parse_sources",
    "resolve_calls", "verify_program",
]
