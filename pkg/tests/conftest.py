import networkx as nx
import numpy as np
import pytest

import qwalk as q


def random_connected_graphs(count, n_max, seed, n_min=2):
    """Seeded corpus of random connected graphs."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(n_min, n_max + 1))
        a = np.triu((rng.random((n, n)) < 0.45).astype(int), 1)
        a = a + a.T
        g = q.Graph(a)
        if g.is_connected():
            out.append(g)
    return out


def random_graphs(count, n_max, seed, n_min=1):
    """Seeded corpus of random graphs, connected or not."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        a = np.triu((rng.random((n, n)) < 0.4).astype(int), 1)
        out.append(q.Graph(a + a.T))
    return out


@pytest.fixture(scope="session")
def atlas_connected():
    """All connected graphs on 1..7 vertices, from the networkx graph atlas."""
    by_n = {n: [] for n in range(1, 8)}
    for G in nx.graph_atlas_g():
        n = G.number_of_nodes()
        if 1 <= n <= 7 and nx.is_connected(G):
            by_n[n].append(q.Graph(nx.to_numpy_array(G, dtype=int)))
    return by_n
