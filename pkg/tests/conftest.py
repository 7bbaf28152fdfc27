import numpy as np
import pytest

from socialhk.graphs import Graph


def philox(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def random_connected_graph(rng: np.random.Generator, n: int, extra_edge_prob: float = 0.3) -> Graph:
    """Random spanning tree plus independent extra edges; always connected."""
    edges = set()
    order = rng.permutation(n)
    for idx in range(1, n):
        attach = order[rng.integers(0, idx)]
        edges.add((int(order[idx]), int(attach)))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < extra_edge_prob:
                edges.add((i, j))
    return Graph(n, frozenset(edges))


@pytest.fixture
def rng():
    return philox(12345)
