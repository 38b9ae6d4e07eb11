import os
from pathlib import Path

import pytest
from hypothesis import settings

from dkbplan.kb import Concept, ConceptInclusion, Exists, Functionality, Role, validate_tbox
from dkbplan.parser import load_kb

settings.register_profile("default", deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

KB_DIR = Path(__file__).resolve().parent.parent / "kb"

# acceptance results, filled in by test_acceptance and printed at the end
AC_RESULTS = {}
AC_REPORTS = []


def _ci(a, b, neg=False):
    return ConceptInclusion(Concept(a), Concept(b), neg)


@pytest.fixture
def t_ex1():
    return validate_tbox([
        _ci("Technician", "Employee"),
        _ci("Manager", "Employee"),
        _ci("Technician", "Manager", True),
    ])


@pytest.fixture
def t_prime(t_ex1):
    return validate_tbox(list(t_ex1.dl) + [
        ConceptInclusion(Exists(Role("assignedTo")), Concept("Document")),
        ConceptInclusion(Exists(Role("assignedTo", True)), Concept("Employee")),
        Functionality(Role("assignedTo")),
    ])


@pytest.fixture
def two_tech():
    return load_kb(KB_DIR / "two_technicians.kb")


@pytest.fixture
def greeting():
    return load_kb(KB_DIR / "greeting.kb").problem("greeting")


@pytest.fixture
def appendix_kb():
    return KB_DIR / "appendix.kb"


def pytest_terminal_summary(terminalreporter):
    if not AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(AC_RESULTS, key=lambda k: int(k[2:])):
        ok, detail = AC_RESULTS[key]
        terminalreporter.write_line(f"{key}: {'PASS' if ok else 'FAIL'}  {detail}")
    for text in AC_REPORTS:
        terminalreporter.write_line("")
        for line in text.splitlines():
            terminalreporter.write_line(line)
