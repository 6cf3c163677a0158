import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from netcover.graph import Network, path_graph  # noqa: E402


def random_net(rng: random.Random, n: int, extra: int = 3, lo: float = 0.5,
               hi: float = 1.5) -> Network:
    """Random spanning tree plus ``extra`` chords (parallel edges allowed)."""
    triples = []
    for v in range(1, n):
        triples.append((rng.randrange(v), v, rng.uniform(lo, hi)))
    for _ in range(extra):
        a, b = rng.sample(range(n), 2) if n > 1 else (0, 0)
        triples.append((a, b, rng.uniform(lo, hi)))
    return Network.from_edges(n, triples)


@pytest.fixture
def k3():
    return Network.from_edges(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)])


@pytest.fixture
def path8():
    return path_graph(8)


@pytest.fixture
def star3():
    return Network.from_edges(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)])


def single(length: float) -> Network:
    return Network.from_edges(2, [(0, 1, length)])
