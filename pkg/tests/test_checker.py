import random

import pytest

from conftest import INJECTED, GP_POLICY_TEXT, gp_sources, line_of
from staticrbac import synth
from staticrbac.checker import (
    PERMISSION_DENIED_TEXT, Diagnostic, Kind, Severity, check_class,
    verify_program,
)
from staticrbac.classify import classify
from staticrbac.frontend import (
    UNRESOLVED, CallSite, ClassModel, MethodModel, ProgramModel,
    ReceiverForm, parse_sources,
)
from staticrbac.jpol import load_policy

POLICY = load_policy(GP_POLICY_TEXT)

BASE = {
    "Nhspatient": """class Nhspatient {
        public Nhspatient() { }
        public String getFirstName() { return ""; }
    }""",
    "Privatepatient": """class Privatepatient {
        public String getFirstName() { return ""; }
    }""",
    "AdminModel": "class AdminModel { public void registerPatient() { } }",
    "AdminController": "class AdminController { public void submit() { } }",
    "AdminViewPatients": "class AdminViewPatients { public void show() { } }",
    "AdminViewAppointments":
        "class AdminViewAppointments { public void show() { } }",
    "NHSDoctorModel": "class NHSDoctorModel { public void task() { } }",
    "NHSDoctorController":
        "class NHSDoctorController { public void enter() { } }",
    "NHSDoctorViewMain": "class NHSDoctorViewMain { public void show() { } }",
    "SessionModel": "class SessionModel { public void logout() { } }",
    "SessionController": "class SessionController { public void m() { } }",
    "SessionView": "class SessionView { public void m() { } }",
    "Helper": "class Helper { public void help() { } }",
    "StringUtils": "class StringUtils { public static void pad() { } }",
}


def run_suite(name, text):
    sources = {f"{k}.java": v for k, v in BASE.items()}
    sources[f"{name}.java"] = text
    program = parse_sources(sources)
    groups = classify(program, POLICY)
    return check_class(program.get(name), POLICY, groups)


def method_class(name, body, fields=""):
    return f"""class {name} {{
    {fields}
    public void run() {{
        {body}
    }}
}}"""


# Every lettered check gets one case that passes and one that fails. The
# failing statement carries a ``// here`` marker; its line is the expected
# diagnostic line.
CASES = [
    # resources: (a) actions public, (b) auxiliaries private,
    # (2a-2d) no calls to role models, controllers, views or sessions
    ("resource-a", "Nhspatient",
     "class Nhspatient { public String getFirstName() { return \"\"; } }",
     "class Nhspatient {\n private String getFirstName() { return \"\"; } // here\n}",
     Kind.NON_PUBLIC_ACTION),
    ("resource-b", "Nhspatient",
     "class Nhspatient { private String internalFormat() { return \"\"; } }",
     "class Nhspatient {\n public String internalFormat() { return \"\"; } // here\n}",
     Kind.NON_PRIVATE_AUXILIARY),
    ("resource-b-protected", "Nhspatient",
     "class Nhspatient { private void aux() { } }",
     "class Nhspatient {\n protected void aux() { } // here\n}",
     Kind.NON_PRIVATE_AUXILIARY),
    ("resource-2a", "Nhspatient",
     method_class("Nhspatient", "Privatepatient.getFirstName();").replace(
         "public void run", "private void run"),
     method_class("Nhspatient", "AdminModel.registerPatient(); // here")
     .replace("public void run", "private void run"),
     Kind.FORBIDDEN_CALLEE_GROUP),
    ("resource-2b", "Nhspatient",
     method_class("Nhspatient", "new Privatepatient();").replace(
         "public void run", "private void run"),
     method_class("Nhspatient", "AdminController.submit(); // here")
     .replace("public void run", "private void run"),
     Kind.FORBIDDEN_CALLEE_GROUP),
    ("resource-2c", "Nhspatient",
     method_class("Nhspatient", "Helper.help();").replace(
         "public void run", "private void run"),
     method_class("Nhspatient", "AdminViewPatients.show(); // here")
     .replace("public void run", "private void run"),
     Kind.FORBIDDEN_CALLEE_GROUP),
    ("resource-2d", "Nhspatient",
     method_class("Nhspatient", "System.out.println(1);").replace(
         "public void run", "private void run"),
     method_class("Nhspatient", "SessionModel.logout(); // here")
     .replace("public void run", "private void run"),
     Kind.FORBIDDEN_CALLEE_GROUP),

    # role models
    ("model-a", "NHSDoctorModel",
     method_class("NHSDoctorModel", "p.getFirstName();", "Nhspatient p;"),
     method_class("NHSDoctorModel", "p.getFirstName(); // here",
                  "Privatepatient p;"),
     Kind.PERMISSION_DENIED),
    ("model-b", "AdminModel",
     method_class("AdminModel", "registerPatient();"),
     method_class("AdminModel", "NHSDoctorModel.task(); // here"),
     Kind.CROSS_ROLE_CALL),
    ("model-c", "AdminModel",
     method_class("AdminModel", "Helper.help();"),
     method_class("AdminModel", "AdminController.submit(); // here"),
     Kind.FORBIDDEN_CALLEE_GROUP),
    ("model-d", "AdminModel",
     method_class("AdminModel", "Nhspatient p = new Nhspatient();"),
     method_class("AdminModel", "SessionModel.logout(); // here"),
     Kind.FORBIDDEN_CALLEE_GROUP),

    # role controllers
    ("controller-a", "AdminController",
     method_class("AdminController", "p.getFirstName();", "Privatepatient p;"),
     method_class("NHSDoctorController", "p.getFirstName(); // here",
                  "Privatepatient p;"),
     Kind.PERMISSION_DENIED),
    ("controller-b", "AdminController",
     method_class("AdminController", "m.registerPatient();", "AdminModel m;"),
     method_class("AdminController", "m.task(); // here",
                  "NHSDoctorModel m;"),
     Kind.CROSS_ROLE_CALL),
    ("controller-c", "AdminController",
     method_class("AdminController", "submit();"),
     method_class("AdminController", "NHSDoctorController.enter(); // here"),
     Kind.CROSS_ROLE_CALL),
    ("controller-d", "AdminController",
     method_class("AdminController", "new AdminViewPatients().show();"),
     method_class("AdminController", "NHSDoctorViewMain.show(); // here"),
     Kind.CROSS_ROLE_CALL),
    ("controller-e", "AdminController",
     method_class("AdminController", "Helper.help();"),
     method_class("AdminController", "s.logout(); // here",
                  "SessionModel s;"),
     Kind.FORBIDDEN_CALLEE_GROUP),
    ("controller-new", "AdminController",
     method_class("AdminController", "new AdminModel();"),
     method_class("AdminController", "new Nhspatient(); // here"),
     Kind.RESOURCE_INSTANTIATION),

    # role views
    ("view-a", "NHSDoctorViewMain",
     method_class("NHSDoctorViewMain", "p.getFirstName();", "Nhspatient p;"),
     method_class("NHSDoctorViewMain", "p.getFirstName(); // here",
                  "Privatepatient p;"),
     Kind.PERMISSION_DENIED),
    ("view-b", "AdminViewPatients",
     method_class("AdminViewPatients", "AdminController.submit();"),
     method_class("AdminViewPatients", "AdminModel.registerPatient(); // here"),
     Kind.FORBIDDEN_CALLEE_GROUP),
    ("view-c", "AdminViewPatients",
     method_class("AdminViewPatients", "c.submit();", "AdminController c;"),
     method_class("AdminViewPatients", "c.enter(); // here",
                  "NHSDoctorController c;"),
     Kind.CROSS_ROLE_CALL),
    ("view-d", "AdminViewPatients",
     method_class("AdminViewPatients", "AdminViewAppointments.show();"),
     method_class("AdminViewPatients", "NHSDoctorViewMain.show(); // here"),
     Kind.CROSS_ROLE_CALL),
    ("view-e", "AdminViewPatients",
     method_class("AdminViewPatients", "show2();\n    }\n    void show2() {"),
     method_class("AdminViewPatients", "SessionController.m(); // here"),
     Kind.FORBIDDEN_CALLEE_GROUP),

    # session and other classes
    ("session", "SessionModel",
     method_class("SessionModel",
                  "new AdminController().submit(); AdminViewPatients.show();"
                  " SessionController.m();"),
     method_class("SessionModel", "p.getFirstName(); // here",
                  "Nhspatient p;"),
     Kind.FORBIDDEN_CALLEE_GROUP),
    ("session-model", "SessionView",
     method_class("SessionView", "SessionController.m();"),
     method_class("SessionView", "AdminModel.registerPatient(); // here"),
     Kind.FORBIDDEN_CALLEE_GROUP),
    ("other", "Helper",
     method_class("Helper", "StringUtils.pad();"),
     method_class("Helper", "p.getFirstName(); // here", "Nhspatient p;"),
     Kind.FORBIDDEN_CALLEE_GROUP),
    ("other-session", "Helper",
     method_class("Helper", "Math.abs(1);"),
     method_class("Helper", "SessionModel.logout(); // here"),
     Kind.FORBIDDEN_CALLEE_GROUP),
    ("other-view", "Helper",
     method_class("Helper", "help();"),
     method_class("Helper", "AdminViewPatients.show(); // here"),
     Kind.FORBIDDEN_CALLEE_GROUP),
    ("unresolved", "AdminModel",
     method_class("AdminModel", "Nhspatient.getFirstName();"),
     method_class("AdminModel", "ghost.registerPatient(); // here"),
     Kind.UNRESOLVED_RECEIVER),
]

# the controller case exercising a wrong-role view lives in a differently
# named class, so compute the subject from the failing text
for i, case in enumerate(CASES):
    failing_name = case[3].split("class ", 1)[1].split()[0]
    if failing_name != case[1]:
        CASES[i] = case + (failing_name,)


@pytest.mark.parametrize("case", CASES, ids=[c[0] for c in CASES])
def test_check_passes(case):
    _, name, good, *_ = case
    assert run_suite(name, good) == []


@pytest.mark.parametrize("case", CASES, ids=[c[0] for c in CASES])
def test_check_fails(case):
    _, name, _, bad, kind, *rest = case
    name = rest[0] if rest else name
    (d,) = run_suite(name, bad)
    assert (d.kind, d.line, d.class_name) == (kind, line_of(bad, "// here"),
                                              name)
    assert d.severity is Severity.ERROR


def test_at_least_sixteen_lettered_pairs():
    assert len(CASES) >= 16


# --- messages and diagnostics --------------------------------------------

def test_permission_denied_message_and_callee():
    bad = CASES[7][3]
    (d,) = run_suite("NHSDoctorModel", bad)
    assert PERMISSION_DENIED_TEXT in d.message
    assert "NHSDoctor" in d.message
    assert d.callee == ("Privatepatient", "getFirstName")
    assert not POLICY.is_permitted("NHSDoctor", *d.callee)


def test_one_diagnostic_per_call():
    text = method_class("NHSDoctorViewMain", "p.getFirstName(); m.task();",
                        "Privatepatient p; NHSDoctorModel m;")
    kinds = [d.kind for d in run_suite("NHSDoctorViewMain", text)]
    assert kinds == [Kind.PERMISSION_DENIED, Kind.FORBIDDEN_CALLEE_GROUP]


def test_unresolved_in_other_is_warning():
    (d,) = run_suite("Helper", method_class("Helper", "ghost.m();"))
    assert (d.kind, d.severity) == (Kind.UNRESOLVED_RECEIVER,
                                    Severity.WARNING)


def test_resource_constructor_in_other_class():
    (d,) = run_suite("Helper", method_class("Helper", "new Nhspatient();"))
    assert d.kind is Kind.RESOURCE_INSTANTIATION


def test_resource_constructors_exempt_from_visibility():
    text = """class Nhspatient {
        private Nhspatient() { }
        private static Nhspatient make() { return new Nhspatient(); }
        public String getFirstName() { return ""; }
    }"""
    assert run_suite("Nhspatient", text) == []


def test_diagnostic_to_dict():
    d = Diagnostic("C", 3, Kind.CROSS_ROLE_CALL, "msg", ("D", "m"),
                   Severity.ERROR, "C.java")
    assert d.to_dict() == {
        "className": "C", "path": "C.java", "line": 3,
        "kind": "CrossRoleCall", "severity": "error", "message": "msg",
        "callee": {"class": "D", "method": "m"}}


# --- verify_program ------------------------------------------------------

def test_empty_program_is_accepted():
    v = verify_program(POLICY, ProgramModel({}, {}))
    assert v.accepted
    assert [d.kind for d in v.diagnostics] == [Kind.UNIMPLEMENTED_ROLE] * 3
    assert all(d.severity is Severity.WARNING for d in v.diagnostics)


def test_gp_fixture_is_accepted(gp_program):
    v = verify_program(POLICY, gp_program, strict_packages=True)
    assert v.accepted and v.diagnostics == ()
    assert v.examined_calls == gp_program.call_count


def test_gp_with_illegal_call():
    sources = gp_sources()
    sources["model/NHSDoctorModel.java"] = INJECTED
    v = verify_program(POLICY, parse_sources(sources))
    assert not v.accepted
    (d,) = v.diagnostics
    assert d.kind is Kind.PERMISSION_DENIED
    assert (d.class_name, d.line) == ("NHSDoctorModel", 15)
    assert d.path == "model/NHSDoctorModel.java"


def test_diagnostics_sorted_by_path_then_line():
    sources = {f"{k}.java": v for k, v in BASE.items()}
    sources["Helper.java"] = method_class(
        "Helper", "SessionModel.logout();\n AdminModel.registerPatient();")
    sources["AdminModel.java"] = method_class(
        "AdminModel", "NHSDoctorModel.task();")
    v = verify_program(POLICY, parse_sources(sources))
    keys = [(d.path or "", d.line) for d in v.diagnostics]
    assert keys == sorted(keys)
    assert [d.class_name for d in v.errors] == ["AdminModel", "Helper",
                                                "Helper"]


def test_strict_packages():
    sources = {f"{k}.java": v for k, v in BASE.items()}
    prog = parse_sources(sources)
    assert verify_program(POLICY, prog).accepted
    v = verify_program(POLICY, prog, strict_packages=True)
    assert not v.accepted
    assert {d.kind for d in v.errors} == {Kind.PACKAGE_LAYOUT}


def test_unimplemented_role_warning():
    sources = {f"{k}.java": v for k, v in BASE.items()}
    v = verify_program(POLICY, parse_sources(sources))
    (d,) = [d for d in v.warnings if d.kind is Kind.UNIMPLEMENTED_ROLE]
    assert d.class_name == "PrivateDoctor"
    assert d.line == line_of(GP_POLICY_TEXT, "new Role(`PrivateDoctor')")


def test_every_call_examined_once():
    for seed in range(50):
        policy, program, _ = synth.random_case(seed)
        v = verify_program(policy, program)
        assert v.examined_calls == program.call_count


# --- properties over generated programs ----------------------------------

def _with_extra_permission(policy_text, rng):
    policy = load_policy(policy_text)
    role = rng.choice(sorted(policy.roles))
    res = rng.choice(sorted(policy.resources))
    act = rng.choice(policy.resources[res].actions)
    var = "role_" + role.lower()
    return load_policy(policy_text
                       + f"{var}.addPermission('{res}', '{act}');\n")


def test_adding_permission_never_rejects():
    for seed in range(150):
        rng = random.Random(seed)
        text = synth.random_policy_text(rng)
        policy = load_policy(text)
        program = synth.random_program(rng, policy,
                                       synth.MODES[seed % 3])
        wider = _with_extra_permission(text, rng)
        if verify_program(policy, program).accepted:
            assert verify_program(wider, program).accepted


def test_locality():
    for seed in range(60):
        policy, program, _ = synth.random_case(seed)
        full = verify_program(policy, program)
        groups = classify(program, policy)
        for name, cls in program.classes.items():
            alone = sorted(check_class(cls, policy, groups),
                           key=lambda d: d.line)
            mine = sorted((d for d in full.diagnostics
                           if d.class_name == name and d.kind not in
                           (Kind.UNIMPLEMENTED_ROLE, Kind.PACKAGE_LAYOUT)),
                          key=lambda d: d.line)
            assert alone == mine


def test_hand_built_model_without_parser():
    model = ClassModel("AdminModel", methods=(MethodModel(
        "m", "public", "void", (), (
            CallSite(UNRESOLVED, "x", 4, ReceiverForm.VARIABLE),
            CallSite("Nhspatient", "getFirstName", 5,
                     ReceiverForm.VARIABLE))),))
    res = ClassModel("Nhspatient", methods=(MethodModel(
        "getFirstName", "public", "String"),))
    v = verify_program(POLICY, ProgramModel.from_classes([model, res]))
    assert [(d.kind, d.line) for d in v.errors] == [
        (Kind.UNRESOLVED_RECEIVER, 4)]
