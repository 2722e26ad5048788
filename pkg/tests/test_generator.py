from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kanon.generator import barabasi_albert


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 300), st.integers(1, 5), st.integers(0, 10**6))
def test_counts(steps, m0, seed):
    g = barabasi_albert(steps, m0, seed)
    assert g.n == m0 + 1 + steps
    assert g.m == comb(m0 + 1, 2) + m0 * steps
    assert min(g.degrees()) >= m0


def test_new_vertices_start_with_m0_edges():
    g = barabasi_albert(200, 3, 5)
    last = g.n - 1
    assert g.degree(last) == 3
    assert all(u < last for u in g.neighbors(last))


def test_deterministic():
    assert barabasi_albert(500, 3, 9) == barabasi_albert(500, 3, 9)
    assert barabasi_albert(500, 3, 9) != barabasi_albert(500, 3, 10)


def test_heavy_tail():
    hubs = [barabasi_albert(5000, 3, seed).delta for seed in range(30)]
    assert all(h > 30 for h in hubs)


@pytest.mark.parametrize("steps, m0", [(0, 3), (5, 0)])
def test_rejects(steps, m0):
    with pytest.raises(ValueError):
        barabasi_albert(steps, m0, 0)
