import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import GP_POLICY, GP_SRC, INJECTED
from staticrbac.cli import main

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def tree(tmp_path):
    """A private copy of the fixture: ``(policy path, source root)``."""
    src = tmp_path / "src"
    shutil.copytree(GP_SRC, src)
    policy = tmp_path / "policy.jpol"
    shutil.copy(GP_POLICY, policy)
    return policy, src


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def inject(src):
    (src / "model" / "NHSDoctorModel.java").write_text(INJECTED)


def test_accepted(capsys, tree):
    policy, src = tree
    code, out, err = run_cli(capsys, "verify", "--policy", policy,
                             "--src", src, "--strict-packages")
    assert code == 0
    assert out == ""
    assert "accepted: 17 classes" in err


def test_rejected_text_golden(capsys, tree):
    policy, src = tree
    inject(src)
    code, out, _ = run_cli(capsys, "verify", "--policy", policy,
                           "--src", src)
    assert code == 1
    assert out.replace(str(src), "<src>") == \
        (GOLDEN / "injected.txt").read_text()
    assert out.count("\n") == 1 and "Invocation not permitted" in out


def test_rejected_json(capsys, tree):
    policy, src = tree
    inject(src)
    code, out, _ = run_cli(capsys, "verify", "--policy", policy,
                           "--src", src, "--format", "json", "--explain")
    assert code == 1
    doc = json.loads(out)
    assert doc["schemaVersion"] == 1 and doc["accepted"] is False
    (d,) = doc["diagnostics"]
    assert (d["kind"], d["className"], d["line"]) == (
        "PermissionDenied", "NHSDoctorModel", 15)
    assert d["callee"] == {"class": "Privatepatient",
                           "method": "getFirstName"}
    (u,) = doc["unauthorizedAccesses"]
    assert (u["role"], u["resource"]) == ("NHSDoctor", "Privatepatient")
    assert u["path"][0] == {"class": "NHSDoctorController",
                            "method": "greet"}


def test_explain_text(capsys, tree):
    policy, src = tree
    inject(src)
    _, out, _ = run_cli(capsys, "verify", "--policy", policy, "--src", src,
                        "--explain")
    assert out.splitlines()[-1] == (
        "explain: role 'NHSDoctor' reaches Privatepatient.getFirstName via "
        "NHSDoctorController.greet -> NHSDoctorModel.greetPatient -> "
        "Privatepatient.getFirstName")


def test_output_is_deterministic(capsys, tree):
    policy, src = tree
    inject(src)
    args = ("verify", "--policy", policy, "--src", src, "--format", "json")
    assert run_cli(capsys, *args)[1] == run_cli(capsys, *args)[1]


def test_warnings_and_policy_path(capsys, tree):
    policy, src = tree
    shutil.rmtree(src / "view" / "privatedoctor")
    (src / "controller" / "PrivateDoctorController.java").unlink()
    code, out, _ = run_cli(capsys, "verify", "--policy", policy,
                           "--src", src)
    assert code == 0
    assert out == (f"{policy}:7: UnimplementedRole: warning: role "
                   "'PrivateDoctor' is declared in the policy but has no "
                   "role model and role controller class\n")


def test_missing_policy(capsys, tree):
    _, src = tree
    code, out, err = run_cli(capsys, "verify", "--policy", "nope.jpol",
                             "--src", src)
    assert (code, out) == (4, "")
    assert "policy file not found" in err


def test_missing_source_dir(capsys, tree):
    policy, src = tree
    assert run_cli(capsys, "verify", "--policy", policy,
                   "--src", src / "nothing")[0] == 4


def test_usage_error(capsys):
    assert run_cli(capsys, "verify")[0] == 4
    assert run_cli(capsys, "frobnicate")[0] == 4


def test_policy_errors(capsys, tree):
    policy, src = tree
    policy.write_text("Role a = new Role('A')")
    code, _, err = run_cli(capsys, "verify", "--policy", policy,
                           "--src", src)
    assert code == 2 and "1:23" in err
    policy.write_text("a.addPermission('R', 'x');")
    assert run_cli(capsys, "tables", "--policy", policy)[0] == 2
    policy.write_bytes(b"Role a = new Role('\xff');")
    assert run_cli(capsys, "tables", "--policy", policy)[0] == 2


def test_source_errors(capsys, tree):
    policy, src = tree
    (src / "other" / "Broken.java").write_text("class Broken { int x = ; }")
    code, out, err = run_cli(capsys, "verify", "--policy", policy,
                             "--src", src)
    assert code == 3 and out == ""
    assert "Broken.java:1:" in err
    (src / "other" / "Broken.java").write_text("class Formatter { }")
    assert run_cli(capsys, "verify", "--policy", policy,
                   "--src", src)[0] == 3


def test_tables_golden(capsys):
    code, out, _ = run_cli(capsys, "tables", "--policy", GP_POLICY)
    assert code == 0
    assert out == (GOLDEN / "gp_tables.txt").read_text()


def test_tables_inherited(capsys, tmp_path):
    p = tmp_path / "p.jpol"
    p.write_text("""Resource r = new Resource('Record');
r.addAction('read'); r.addAction('write');
Role clerk = new Role('Clerk'); clerk.addPermission('Record', 'read');
Role boss = new Role('Boss') subsumes clerk;
boss.addPermission('Record', 'write');
""")
    assert run_cli(capsys, "tables", "--policy", p)[1] == """Resources
  Record: read, write
Roles
  Clerk
    [Record, read]
  Boss subsumes Clerk
    [Record, read] (inherited)
    [Record, write]
"""


def test_tables_single_resource(capsys, tmp_path):
    p = tmp_path / "p.jpol"
    p.write_text("Resource r = new Resource('R'); r.addAction('a');")
    assert run_cli(capsys, "tables", "--policy", p)[1] == \
        "Resources\n  R: a\nRoles\n  (none)\n"


def test_tables_missing_file(capsys, tmp_path):
    assert run_cli(capsys, "tables", "--policy", tmp_path / "x")[0] == 4


def test_module_entry_point(tree):
    policy, src = tree
    proc = subprocess.run(
        [sys.executable, "-m", "staticrbac.cli", "verify", "--policy",
         str(policy), "--src", str(src)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
