import os

import pytest
from hypothesis import HealthCheck, settings

from tandisp.catalog import EXAMPLES, load_example, tangent_examples

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# name -> (passed, summary line), filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture(params=tangent_examples())
def example(request):
    """(name, category, tangent structure) for every bundled tangent example."""
    cat, ts = load_example(request.param)
    return request.param, cat, ts


@pytest.fixture(params=sorted(EXAMPLES))
def any_example(request):
    cat, ts = load_example(request.param)
    return request.param, cat, ts


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n][1])
