from __future__ import annotations

import numpy as np
import pytest

from graphqss.graph_core import Graph
from graphqss.schemes import build_nghzm, build_ring


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def star4() -> Graph:
    """Four-qubit GHZ star, centre 0."""
    return build_nghzm(4)


@pytest.fixture
def ring4() -> Graph:
    return build_ring(4)


@pytest.fixture
def ring5() -> Graph:
    return build_ring(5)


@pytest.fixture
def square_centre3() -> Graph:
    """Three vertices, edges 0-1 and 0-2, vertex 0 carries the phase gate."""
    return Graph.from_edges(3, [(0, 1), (0, 2)], [0])


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line; the lines are repeated in the terminal summary."""

    def record(name: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
