import random
from pathlib import Path

import pytest

from copbound.graph import build_graph, read_graph6_file

DATA = Path(__file__).parent / "data"
CORPUS_LE7 = DATA / "connected_le7.g6"


def random_connected(rng, n, extra):
    """Random spanning tree plus ``extra`` random edges, randomly relabelled."""
    edges = [(i, rng.randrange(i)) for i in range(1, n)]
    for _ in range(extra):
        x, y = rng.sample(range(n), 2)
        edges.append((x, y))
    perm = list(range(n))
    rng.shuffle(perm)
    return build_graph(n, [(perm[a], perm[b]) for a, b in edges])


def random_graph(rng, n, p):
    return build_graph(n, [(x, y) for x in range(n) for y in range(x + 1, n) if rng.random() < p])


@pytest.fixture(scope="session")
def corpus_le7():
    return [g for _, g, _ in read_graph6_file(CORPUS_LE7)]


@pytest.fixture(scope="session")
def sample_n8():
    """3000 random connected graphs on 8 vertices of varied density."""
    rng = random.Random(8)
    out = []
    while len(out) < 3000:
        out.append(random_connected(rng, 8, rng.randint(0, 20)))
    return out


@pytest.fixture
def rng():
    return random.Random(12345)


_acceptance_lines = []


@pytest.fixture
def acceptance_report():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
