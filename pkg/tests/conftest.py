import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mptile.graph import Graph, MultipartiteGraph  # noqa: E402


@pytest.fixture
def K3():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def C5():
    return Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])


@pytest.fixture
def K113():
    # two adjacent apexes joined to an independent triple
    return Graph.from_edges(5, [(0, 1)] + [(u, v) for u in (0, 1) for v in (2, 3, 4)])


@pytest.fixture
def complete():
    return MultipartiteGraph.complete


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS.values():
        terminalreporter.write_line(line)
