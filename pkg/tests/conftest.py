import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gridgame.grid import GridNetwork, make_network

P3_TEXT = """\
# path: source - transmission - load
node 0 S
node 1 T
node 2 L
edge 0 1
edge 1 2
"""

V2_TEXT = """\
# two sources feeding one load
node 0 S
node 1 S
node 2 L
edge 0 2
edge 1 2
"""

K22_TEXT = """\
node 0 S
node 1 S
node 2 L
node 3 L
edge 0 2
edge 0 3
edge 1 2
edge 1 3
"""


@pytest.fixture
def p3() -> GridNetwork:
    return make_network([0, 1, 2], [(0, 1), (1, 2)], sources=[0], loads=[2])


@pytest.fixture
def v2() -> GridNetwork:
    return make_network([0, 1, 2], [(0, 2), (1, 2)], sources=[0, 1], loads=[2])


@pytest.fixture
def k22() -> GridNetwork:
    return make_network(
        [0, 1, 2, 3], [(0, 2), (0, 3), (1, 2), (1, 3)], sources=[0, 1], loads=[2, 3]
    )


@pytest.fixture
def sc1() -> GridNetwork:
    # set-cover embedding: h1 covers {s1, s2}, h2 covers {s2, s3}
    return make_network(
        [0, 1, 2, 3, 4],
        [(0, 2), (0, 3), (1, 3), (1, 4)],
        sources=[0, 1],
        loads=[2, 3, 4],
    )


def random_network(rng: random.Random, n: int, extra_edges: int = 0) -> GridNetwork:
    """Random connected network with seeded random roles (overlap allowed)."""
    nodes = list(range(n))
    edges = set()
    order = nodes[:]
    rng.shuffle(order)
    for k in range(1, n):
        a, b = order[k], order[rng.randrange(k)]
        edges.add((min(a, b), max(a, b)))
    candidates = [
        (a, b) for a in nodes for b in nodes if a < b and (a, b) not in edges
    ]
    rng.shuffle(candidates)
    edges.update(candidates[:extra_edges])
    sources, loads = set(), set()
    for i in nodes:
        roll = rng.random()
        if roll < 0.3:
            sources.add(i)
        elif roll < 0.6:
            loads.add(i)
        elif roll < 0.7:
            sources.add(i)
            loads.add(i)
    if not sources:
        sources.add(rng.choice(nodes))
    if not loads:
        loads.add(rng.choice([i for i in nodes if i not in sources] or nodes))
    return make_network(nodes, edges, sources=sources, loads=loads)
