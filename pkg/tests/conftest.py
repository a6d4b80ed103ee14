from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def fr(*xs):
    return [Fraction(x) for x in xs]


@pytest.fixture(scope="session")
def tritronquee_published():
    """Solutions of f_k^{0,0} for k = 0..5, computed once per session."""
    from belyi.poles import tritronquee_maps
    return dict(tritronquee_maps(0, 0, list(range(6)), 256, "published", {}))


def pytest_configure(config):
    config._acceptance = {}


@pytest.fixture
def record(request):
    """Store one pass/fail line per acceptance criterion for the terminal summary."""
    def _record(number, ok, detail=""):
        line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        request.config._acceptance[number] = line
        print(line)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance", {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
