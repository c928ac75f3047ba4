import sys

import pytest

from trapmodes.potential import ModeParams
from trapmodes.structure import synthesize

# the four two-body structure types for m = 1 with H = 0.1 where heaving
M1_TYPES = {
    "motionless": (0.0, 0.0),
    "heaving": (0.1, 0.1),
    "heave-still": (0.1, 0.0),
    "still-heave": (0.0, 0.1),
}

_CACHE = {}


def structure_for(m, amps):
    key = (m, tuple(amps))
    if key not in _CACHE:
        _CACHE[key] = synthesize(ModeParams(m), list(amps))
    return _CACHE[key]


@pytest.fixture(scope="session")
def mode1():
    return ModeParams(1)


@pytest.fixture(scope="session")
def m1_structures():
    return {name: structure_for(1, amps) for name, amps in M1_TYPES.items()}


@pytest.fixture(scope="session")
def motionless(m1_structures):
    return m1_structures["motionless"]


@pytest.fixture(scope="session")
def m6_structure():
    return structure_for(6, (0.0, 0.05, 0.0))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.summary_lines():
            terminalreporter.write_line(line)
