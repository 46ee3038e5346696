import numpy as np
import pytest
from hypothesis import strategies as st

from wbag import Bag


@st.composite
def bags(draw, max_nodes=8, min_nodes=0):
    n = draw(st.integers(min_nodes, max_nodes))
    names = [f"x{i}" for i in range(n)]
    weights = draw(st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n))
    pairs = [(i, j) for i in range(n) for j in range(n)]
    if pairs:
        attacks = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3 * n))
        supports = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3 * n))
    else:
        attacks = supports = []
    return Bag(names, weights, attacks, supports)


@st.composite
def bags_with_state(draw, max_nodes=8):
    bag = draw(bags(max_nodes=max_nodes))
    s = draw(st.lists(st.floats(0.0, 1.0), min_size=len(bag), max_size=len(bag)))
    return bag, np.array(s, dtype=float)


@pytest.fixture
def rng():
    return np.random.default_rng(20181018)
