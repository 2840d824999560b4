import math

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

SHOWCASE_ALPHA_PRIME = 3 / math.sqrt(2)


@pytest.fixture
def showcase_alpha_prime():
    return SHOWCASE_ALPHA_PRIME


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
