import random

import pytest

from reggraph.corpus import random_regression_graph
from reggraph.textio import parse

TWO_BLOCK_TEXT = "context:\n1 ~~ 2\n3 -> 1\n5 -> 2\n4 ~~ 3\n4 ~~ 5\n"
DASHED_PATH4_TEXT = "1 ~~ 2\n2 ~~ 3\n3 ~~ 4\n"

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def two_block():
    return parse(TWO_BLOCK_TEXT)


@pytest.fixture
def dashed_path4():
    return parse(DASHED_PATH4_TEXT)


def small_corpus(count: int, seed: int, n_max: int = 7):
    rng = random.Random(seed)
    return [
        random_regression_graph(rng.randint(1, n_max), rng, p_edge=rng.choice([0.3, 0.5, 0.7]))
        for _ in range(count)
    ]


def ids(g, *labels):
    return frozenset(g.index(lab) for lab in labels)
