from __future__ import annotations

import random

import pytest

from feynmint.graph import FeynmanGraph

ORACLE_GRAPHS = ("theta", "dumbbell", "caterpillar2", "caterpillar3", "star")


def random_connected_graph(rng: random.Random, max_vertices: int = 6) -> FeynmanGraph:
    """Random connected multigraph: a spanning tree plus extra edges/loops."""
    n = rng.randint(1, max_vertices)
    edges = [(rng.randint(1, v - 1), v) for v in range(2, n + 1)]
    for _ in range(rng.randint(0, 4)):
        u, v = rng.randint(1, n), rng.randint(1, n)
        edges.append((u, v))
    if not edges:
        edges.append((1, 1))
    rng.shuffle(edges)
    return FeynmanGraph(n, tuple(edges))


def random_branch_type(rng: random.Random, g: FeynmanGraph, max_part: int = 3):
    return tuple(rng.randint(0, max_part) for _ in range(g.edge_count))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260810)
