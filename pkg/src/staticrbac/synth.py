"""Random policies and programs for differential and scale testing.

Programs are built directly as :class:`ProgramModel` values in one of three
modes:

``positive``
    follows the RBAC MVC patterns, so the verifier must accept it;
``negative``
    a positive program with one injected candidate violation;
``random``
    a few arbitrary call edges and visibility changes, optionally on top
    of a positive program.

:func:`render_java` turns a generated model back into source files that the
front end parses to the same call lists.
"""

from __future__ import annotations

import random
from typing import Optional

from staticrbac.frontend.model import (
    CONSTRUCTOR, UNRESOLVED, CallSite, ClassModel, MethodModel,
    ProgramModel, ReceiverForm,
)
from staticrbac.jpol import Policy, load_policy

ROLE_POOL = ("Admin", "AdminSenior", "Doctor", "DoctorView", "Nurse",
             "Clerk", "Auditor", "Manager")
RESOURCE_POOL = ("Patient", "Record", "Invoice", "Schedule")
ACTION_POOL = ("read", "write", "list", "delete", "approve")
VIEW_SUFFIXES = ("Main", "Patients", "Records", "")
SESSION_CLASSES = ("SessionModel", "SessionController", "SessionViewLogin")
OTHER_POOL = ("Helper", "Formatter", "Clock")
EXTERNAL_CALLS = (("Math", "abs"), ("String", "valueOf"), ("System", "exit"))

MODES = ("positive", "negative", "random")
MAX_CLASSES = 30


def random_policy_text(rng: random.Random, roles=None, resources=None,
                       max_roles: int = 6, max_resources: int = 4,
                       max_actions: int = 4) -> str:
    if roles is None:
        roles = rng.sample(ROLE_POOL, rng.randint(1, max_roles))
    if resources is None:
        resources = rng.sample(RESOURCE_POOL, rng.randint(1, max_resources))
    lines = []
    actions = {}
    for res in resources:
        var = "res_" + res.lower()
        lines.append(f"Resource {var} = new Resource('{res}');")
        acts = rng.sample(ACTION_POOL, rng.randint(1, min(max_actions,
                                                           len(ACTION_POOL))))
        actions[res] = acts
        lines.extend(f"{var}.addAction('{a}');" for a in acts)
    declared = []
    for role in roles:
        var = "role_" + role.lower()
        if declared and rng.random() < 0.3:
            parent = "role_" + rng.choice(declared).lower()
            lines.append(f"Role {var} = new Role('{role}') subsumes {parent};")
        else:
            lines.append(f"Role {var} = new Role('{role}');")
        declared.append(role)
        for res in resources:
            for act in actions[res]:
                if rng.random() < 0.35:
                    lines.append(f"{var}.addPermission('{res}', '{act}');")
    return "\n".join(lines) + "\n"


def random_policy(rng: random.Random, **kwargs) -> Policy:
    return load_policy(random_policy_text(rng, **kwargs))


class _Builder:
    """Mutable scaffolding for one program; frozen by :meth:`build`."""

    def __init__(self, rng: random.Random, policy: Policy):
        self.rng = rng
        self.policy = policy
        self.methods: dict[str, dict[str, str]] = {}   # class -> name -> mod
        self.calls: dict[str, dict[str, list]] = {}
        self.package: dict[str, str] = {}
        self.role_classes: dict[str, dict[str, list[str]]] = {}

    def add_class(self, name: str, package: str, methods: dict[str, str]):
        self.methods[name] = dict(methods)
        self.calls[name] = {m: [] for m in methods}
        self.package[name] = package

    def add_call(self, caller: str, target: str, method: str,
                 in_method: Optional[str] = None):
        if in_method is None:
            in_method = self.rng.choice(sorted(self.calls[caller]))
        self.calls[caller][in_method].append((target, method))

    def pick_method(self, target: str) -> str:
        if target not in self.methods:
            return self.rng.choice(ACTION_POOL)
        names = sorted(self.methods[target])
        return self.rng.choice(names)

    def build(self) -> ProgramModel:
        classes = []
        for name in self.methods:
            methods = []
            line = 3
            for mname, mod in self.methods[name].items():
                start = line
                sites = []
                for target, called in self.calls[name][mname]:
                    line += 1
                    if target == UNRESOLVED:
                        form = ReceiverForm.VARIABLE
                    elif called == CONSTRUCTOR:
                        form = ReceiverForm.NEW
                    elif target == name:
                        form = ReceiverForm.SELF
                    elif target in self.methods:
                        form = ReceiverForm.VARIABLE
                    else:
                        form = ReceiverForm.STATIC_CLASS
                    sites.append(CallSite(target, called, line, form))
                line += 2
                methods.append(MethodModel(
                    mname, mod, "void", (), tuple(sites), line=start,
                    end_line=line - 1))
            classes.append(ClassModel(
                name, self.package[name], "public", (), tuple(methods),
                path=f"{name}.java"))
        return ProgramModel.from_classes(classes)


def _scaffold(rng: random.Random, policy: Policy,
              max_classes: Optional[int] = MAX_CLASSES) -> _Builder:
    b = _Builder(rng, policy)
    # every role needs a model, a controller and one view
    spare = None if max_classes is None else max_classes - (
        len(policy.resources) + 3 * len(policy.roles) + len(SESSION_CLASSES))

    def take(wanted: int) -> int:
        nonlocal spare
        if spare is None:
            return wanted
        got = max(0, min(wanted, spare))
        spare -= got
        return got

    for res in policy.resources.values():
        methods = {CONSTRUCTOR: "public"}
        methods.update({a: "public" for a in res.actions})
        for i in range(rng.randint(0, 2)):
            methods[f"aux{i}"] = "private"
        b.add_class(res.name, "app.model", methods)
    for role in policy.roles:
        pkg = role.lower()
        model = role + "Model"
        ctrl = role + "Controller"
        b.add_class(model, "app.model",
                    {f"task{i}": "public" for i in range(rng.randint(1, 3))})
        b.add_class(ctrl, "app.controller",
                    {"enter": "public", "handle": "public"})
        views = []
        count = 1 + take(rng.randint(0, 2))
        for suffix in rng.sample(VIEW_SUFFIXES, count):
            view = role + "View" + suffix
            b.add_class(view, f"app.view.{pkg}", {"show": "public"})
            views.append(view)
        b.role_classes[role] = {"model": [model], "controller": [ctrl],
                                "view": views}
    for s in SESSION_CLASSES:
        b.add_class(s, "app.session", {"run": "public"})
    for o in rng.sample(OTHER_POOL, take(rng.randint(0, len(OTHER_POOL)))):
        b.add_class(o, "app.other", {"help": "public"})
    return b


def _others(b: _Builder) -> list[str]:
    return [c for c in b.methods if c in OTHER_POOL]


def _positive_calls(b: _Builder):
    rng = b.rng
    policy = b.policy
    others = _others(b)
    resources = list(policy.resources)

    def sprinkle(caller: str, targets: list, k: int):
        for _ in range(k):
            if not targets:
                return
            target, method = rng.choice(targets)
            b.add_call(caller, target, method)

    for res in resources:
        targets = [(r, b.pick_method(r)) for r in resources]
        targets += [(r, CONSTRUCTOR) for r in resources]
        targets += [(o, "help") for o in others]
        targets += list(EXTERNAL_CALLS)
        sprinkle(res, targets, rng.randint(0, 3))

    for role, parts in b.role_classes.items():
        granted = [(p.resource, p.action)
                   for p in sorted(policy.effective_permissions(role))]
        model = parts["model"][0]
        ctrl = parts["controller"][0]
        views = parts["view"]
        common = [(o, "help") for o in others] + list(EXTERNAL_CALLS)

        targets = granted * 3 + [(r, CONSTRUCTOR) for r in resources]
        targets += [(model, m) for m in b.methods[model]] + common
        sprinkle(model, targets, rng.randint(1, 5))

        targets = granted + [(model, m) for m in b.methods[model]]
        targets += [(model, CONSTRUCTOR)]
        targets += [(v, "show") for v in views] + [(v, CONSTRUCTOR)
                                                   for v in views]
        targets += [(ctrl, "handle")] + common
        sprinkle(ctrl, targets, rng.randint(1, 5))

        for view in views:
            targets = granted + [(ctrl, "enter"), (ctrl, "handle")]
            targets += [(v, "show") for v in views] + common
            sprinkle(view, targets, rng.randint(1, 4))

    controllers = [p["controller"][0] for p in b.role_classes.values()]
    views = [v for p in b.role_classes.values() for v in p["view"]]
    for s in SESSION_CLASSES:
        targets = [(c, CONSTRUCTOR) for c in controllers]
        targets += [(c, "enter") for c in controllers]
        targets += [(v, "show") for v in views]
        targets += [(t, "run") for t in SESSION_CLASSES]
        targets += [(o, "help") for o in others] + list(EXTERNAL_CALLS)
        sprinkle(s, targets, rng.randint(1, 4))

    for o in others:
        targets = [(x, "help") for x in others] + list(EXTERNAL_CALLS)
        sprinkle(o, targets, rng.randint(0, 3))


def _inject_violation(b: _Builder):
    """Add one call or visibility change that is likely to be rejected."""
    rng = b.rng
    policy = b.policy
    roles = list(b.role_classes)
    role = rng.choice(roles)
    other = rng.choice(roles)
    parts = b.role_classes[role]
    oparts = b.role_classes[other]
    resources = list(policy.resources)
    res = rng.choice(resources)
    denied = [(r.name, a) for r in policy.resources.values()
              for a in r.actions if not policy.is_permitted(role, r.name, a)]
    choice = rng.randrange(12)
    model, ctrl = parts["model"][0], parts["controller"][0]
    view = rng.choice(parts["view"])
    if choice == 0 and denied:
        b.add_call(rng.choice([model, ctrl, view]), *rng.choice(denied))
    elif choice == 1:
        b.add_call(model, oparts["model"][0], "task0")
    elif choice == 2:
        b.add_call(model, oparts["controller"][0], "enter")
    elif choice == 3:
        b.add_call(ctrl, oparts["model"][0], "task0")
    elif choice == 4:
        b.add_call(ctrl, rng.choice(SESSION_CLASSES), "run")
    elif choice == 5:
        b.add_call(rng.choice([ctrl, view]), res, CONSTRUCTOR)
    elif choice == 6:
        b.add_call(view, rng.choice([model, oparts["model"][0]]), "task0")
    elif choice == 7:
        b.add_call(view, oparts["controller"][0], "handle")
    elif choice == 8:
        b.add_call(rng.choice(SESSION_CLASSES), res,
                   rng.choice(policy.resources[res].actions))
    elif choice == 9:
        b.add_call(rng.choice(SESSION_CLASSES), model, "task0")
    elif choice == 10:
        method = rng.choice(sorted(m for m in b.methods[res]
                                   if m != CONSTRUCTOR))
        current = b.methods[res][method]
        b.methods[res][method] = rng.choice(
            [v for v in ("public", "private", "protected", "package")
             if v != current])
    else:
        caller = rng.choice([model, ctrl, view, res,
                             rng.choice(SESSION_CLASSES)])
        b.add_call(caller, UNRESOLVED, "m")


def _random_calls(b: _Builder, edges: int):
    rng = b.rng
    names = list(b.methods)
    for res in b.policy.resources:
        for m in b.methods[res]:
            if m != CONSTRUCTOR and rng.random() < 0.05:
                b.methods[res][m] = rng.choice(["private", "protected",
                                                "package", "public"])
    for _ in range(edges):
        caller = rng.choice(names)
        r = rng.random()
        if r < 0.05:
            b.add_call(caller, UNRESOLVED, "m")
        elif r < 0.12:
            b.add_call(caller, *rng.choice(EXTERNAL_CALLS))
        else:
            target = rng.choice(names)
            method = CONSTRUCTOR if rng.random() < 0.15 else \
                b.pick_method(target)
            b.add_call(caller, target, method)


def random_program(rng: random.Random, policy: Policy,
                   mode: str = "positive") -> ProgramModel:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    b = _scaffold(rng, policy)
    if mode == "random":
        if rng.random() < 0.5:
            _positive_calls(b)
        _random_calls(b, rng.randint(0, 4))
    else:
        _positive_calls(b)
        if mode == "negative":
            _inject_violation(b)
    return b.build()


def random_case(seed: int, mode: Optional[str] = None):
    """``(policy, program, mode)`` for one reproducible seed."""
    rng = random.Random(seed)
    if mode is None:
        mode = MODES[seed % len(MODES)]
    policy = random_policy(rng)
    return policy, random_program(rng, policy, mode), mode


def large_case(n_classes: int = 500, seed: int = 0):
    """A pattern-conforming program with about ``n_classes`` classes."""
    rng = random.Random(seed)
    # resources + 3 session + others + per role (model, controller, views)
    n_roles = max(1, (n_classes - 10) // 4)
    roles = [f"R{i:04d}" for i in range(n_roles)]
    text = random_policy_text(rng, roles=roles, resources=list(RESOURCE_POOL))
    policy = load_policy(text)
    b = _scaffold(rng, policy, max_classes=None)
    _positive_calls(b)
    program = b.build()
    return text, policy, program


# ---------------------------------------------------------------------------
# rendering


def render_java(program: ProgramModel) -> dict[str, str]:
    """Source text for each class, keyed by ``<package path>/<Name>.java``."""
    out = {}
    for cls in program.classes.values():
        referenced = sorted({
            c.called_class for _, c in cls.iter_calls()
            if c.called_class in program and c.called_class != cls.name
            and c.called_method != CONSTRUCTOR})
        lines = [f"package {cls.package};" if cls.package else "", "",
                 f"public class {cls.name} {{"]
        for ref in referenced:
            lines.append(f"    private {ref} ref{ref};")
        for m in cls.methods:
            mod = "" if m.modifier == "package" else m.modifier + " "
            if m.name == CONSTRUCTOR:
                lines.append(f"    {mod}{cls.name}() {{")
            else:
                lines.append(f"    {mod}void {m.name}() {{")
            for c in m.calls:
                lines.append("        " + _render_call(cls.name, c, program))
            lines.append("    }")
        lines.append("}")
        directory = cls.package.replace(".", "/")
        path = f"{directory}/{cls.name}.java" if directory else \
            f"{cls.name}.java"
        out[path] = "\n".join(lines) + "\n"
    return out


def _render_call(owner: str, c: CallSite, program: ProgramModel) -> str:
    if c.called_class == UNRESOLVED:
        return f"ghost.{c.called_method}();"
    if c.called_method == CONSTRUCTOR:
        return f"new {c.called_class}();"
    if c.called_class == owner:
        return f"{c.called_method}();"
    if c.called_class in program:
        return f"ref{c.called_class}.{c.called_method}();"
    return f"{c.called_class}.{c.called_method}(0);"
