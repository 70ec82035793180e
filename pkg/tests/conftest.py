import os

import pytest
from hypothesis import HealthCheck, settings

from clutterplan.geometry import Role, Scene, SceneObject, Slot, Workspace

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("quick", max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DESK = Workspace(90.0, 45.0, 45.0)


def obj(oid, x, y, r=3.5, role=Role.OBSTACLE):
    return SceneObject(oid, x, y, r, role)


def target(x, y, r=3.5):
    return SceneObject("ot", x, y, r, Role.TARGET)


def slot(sid, x, y, r=3.5):
    return Slot(sid, x, y, r)


@pytest.fixture
def desk():
    return DESK


@pytest.fixture
def lone_target_scene():
    return Scene(DESK, [target(45.0, 22.5)])


def pytest_terminal_summary(terminalreporter):
    import sys

    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "_results", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for _, _, line in sorted(results):
        terminalreporter.write_line(line)
