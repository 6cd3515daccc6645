import hashlib

import numpy as np
import pytest

from chaoscipher import ChaoticKey
from chaoscipher.cipher import ImageBuffer
from chaoscipher.samples import COLOR_SAMPLES, GRAY_SAMPLES, load_sample


def pinned_key(name: str) -> ChaoticKey:
    """Fixed test key: sha256 of a label. Never re-pick these to make a test pass."""
    return ChaoticKey(hashlib.sha256(name.encode()).hexdigest())


@pytest.fixture(scope="session")
def gray_images():
    return {name: load_sample(name) for name in GRAY_SAMPLES}


@pytest.fixture(scope="session")
def color_images():
    return {name: load_sample(name, color=True) for name in COLOR_SAMPLES}


@pytest.fixture
def key():
    return pinned_key("unit-tests")


def random_buffer(rng: np.random.Generator, w: int, h: int, c: int) -> ImageBuffer:
    return ImageBuffer(w, h, c, rng.integers(0, 256, w * h * c, dtype=np.uint8))


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
