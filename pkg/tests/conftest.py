import numpy as np
import pytest

from opuc import gallery

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=sorted(gallery.MEASURES))
def preset(request):
    return gallery.measure(request.param)


def disk_points(rng, n, rmin=0.0, rmax=0.95):
    r = np.sqrt(rng.uniform(rmin ** 2, rmax ** 2, n))
    return r * np.exp(2j * np.pi * rng.random(n))
