import sys
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from congruence import FieldConfig  # noqa: E402

_LINES: list[str] = []


@pytest.fixture
def F5():
    return FieldConfig.tower(5)


@pytest.fixture
def Q():
    return FieldConfig.rational()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion():
    """Context manager recording one PASS/FAIL line per acceptance criterion."""

    @contextmanager
    def run(number, title, limit_s):
        info = {}
        start = time.perf_counter()
        try:
            yield info
        except BaseException as exc:
            elapsed = time.perf_counter() - start
            line = f"criterion {number} [{title}]: FAIL ({type(exc).__name__}: {exc}; {elapsed:.2f}s)"
            _LINES.append(line)
            print(line)
            raise
        elapsed = time.perf_counter() - start
        detail = ", ".join(f"{k}={v}" for k, v in info.items())
        ok = elapsed < limit_s
        verdict = "PASS" if ok else "FAIL"
        line = f"criterion {number} [{title}]: {verdict} ({detail}; {elapsed:.2f}s, limit {limit_s}s)"
        _LINES.append(line)
        print(line)
        assert ok, f"took {elapsed:.2f}s, limit {limit_s}s"

    return run


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
