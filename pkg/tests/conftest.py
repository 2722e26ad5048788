import random
from itertools import combinations

import pytest
from hypothesis import strategies as st

from kanon.graph import BlockSequence, Graph

# name -> (passed, detail); filled by the acceptance tests, printed at the end of the run
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        passed, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {name}: {detail}")


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(n, [e for e in combinations(range(n), 2) if rng.random() < p])


@st.composite
def graphs(draw, max_n: int = 8, min_n: int = 0):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, keep in zip(pairs, mask) if keep])


@st.composite
def block_sequences(draw, max_n: int = 12, max_delta: int = 6):
    degrees = draw(st.lists(st.integers(0, max_delta), max_size=max_n))
    return BlockSequence.from_degrees(degrees)


@pytest.fixture
def rng():
    return random.Random(12345)
