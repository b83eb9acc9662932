import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from truncquant.measure import canonicalize  # noqa: E402

positions = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False, allow_infinity=False)
weights = st.floats(min_value=1e-3, max_value=1.0, allow_nan=False, allow_infinity=False)


@st.composite
def measures(draw, min_atoms=1, max_atoms=8):
    raw = draw(st.lists(st.tuples(positions, weights), min_size=min_atoms, max_size=max_atoms))
    total = sum(w for _, w in raw)
    return canonicalize([(x, w / total) for x, w in raw])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def two_atom():
    return canonicalize([(1.0, 0.5), (3.0, 0.5)])


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def record(label: str, passed: bool, detail: str = "") -> bool:
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {label}" + (f"  ({detail})" if detail else ""))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
