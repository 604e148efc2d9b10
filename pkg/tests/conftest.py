import numpy as np
import pytest

from nssqa.cli import make_reference
from nssqa.image import ImagePlane, RgbImage

# One human-readable pass/fail line per acceptance criterion, filled in by
# tests/test_acceptance.py and echoed after the run (the summary hook writes
# to the terminal, outside pytest's output capture).
CRITERION_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_reference() -> RgbImage:
    """A 96x96 procedural natural-scene-like image (fast tests)."""
    return make_reference(96, 96, seed=7)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def flat_image(height=64, width=64, value=128.0) -> RgbImage:
    plane = ImagePlane(np.full((height, width), value))
    return RgbImage(r=plane, g=plane, b=plane)
