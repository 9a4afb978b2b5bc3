import pytest

from termident.environment import load_env
from termident.terms import QualifiedPath

FIXTURE_ENV_TEXT = """\
# shared test environment
inductive Coq.Init.Datatypes.option := Some | None
inductive Coq.Init.Datatypes.nat := O | S
inductive Coq.Init.Datatypes.list := nil | cons
inductive Coq.Init.Specif.sig := exist
inductive Top.Shapes.shape := point | segment | triangle | square | pentagon
definition Coq.Init.Nat.mul
definition Coq.Init.Nat.add
"""

# (inductive path, constructor count) pairs matching FIXTURE_ENV_TEXT.
FIXTURE_INDUCTIVES = [
    (QualifiedPath(("Coq", "Init", "Datatypes"), "option"), 2),
    (QualifiedPath(("Coq", "Init", "Datatypes"), "nat"), 2),
    (QualifiedPath(("Coq", "Init", "Datatypes"), "list"), 2),
    (QualifiedPath(("Coq", "Init", "Specif"), "sig"), 1),
    (QualifiedPath(("Top", "Shapes"), "shape"), 5),
]


@pytest.fixture(scope="session")
def fixture_env():
    return load_env(FIXTURE_ENV_TEXT)


# Filled by test_acceptance.py; echoed after the run so the per-criterion
# verdicts are visible even when pytest captures stdout.
ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
