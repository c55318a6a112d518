from pathlib import Path

import pytest

from staticrbac.frontend import find_sources, parse_sources
from staticrbac.jpol import load_policy

FIXTURES = Path(__file__).parent / "fixtures"
GP = FIXTURES / "gp_surgery"
GP_POLICY = GP / "policy.jpol"
GP_SRC = GP / "src"

GP_POLICY_TEXT = GP_POLICY.read_text(encoding="utf-8")

# NHSDoctorModel with one extra call to Privatepatient.getFirstName on line 15
INJECTED = """package surgery.model;

import surgery.other.Formatter;

public class NHSDoctorModel {
    private Nhspatient current;
    private Privatepatient other;

    public NHSDoctorModel() {
        current = new Nhspatient("alice", "943 476 5919");
    }

    public String greetPatient() {
        String name = current.getFirstName();
        String stolen = other.getFirstName();
        return Formatter.greeting(name + stolen);
    }
}
"""


def gp_sources() -> dict[str, str]:
    """The GP surgery program as ``{relative path: text}``."""
    return {p.relative_to(GP_SRC).as_posix(): p.read_text(encoding="utf-8")
            for p in find_sources(GP_SRC)}


def program_of(*classes: str, **named: str):
    """Parse inline classes; positional texts get a path from their name."""
    sources = dict(named)
    for text in classes:
        name = text.split("class ", 1)[1].split()[0] \
            if "class " in text else text.split("interface ", 1)[1].split()[0]
        sources[f"{name}.java"] = text
    return parse_sources(sources)


def line_of(text: str, needle: str) -> int:
    """1-based line of the first line containing ``needle``."""
    for n, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return n
    raise AssertionError(f"{needle!r} not in text")


@pytest.fixture(scope="session")
def gp_policy():
    return load_policy(GP_POLICY_TEXT)


@pytest.fixture
def gp_program():
    return parse_sources(gp_sources())
