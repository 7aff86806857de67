from __future__ import annotations

import random

import pytest

from feynmint.errors import InputError, LimitError
from feynmint.graph import (
    FeynmanGraph,
    catalog_automorphisms,
    catalog_graph,
    catalog_names,
    count_automorphisms,
    first_betti,
    nonloop_valence,
    total_genus,
    validate,
)
from conftest import random_connected_graph

THETA = FeynmanGraph(2, ((1, 2), (1, 2), (1, 2)))
DUMBBELL = FeynmanGraph(2, ((1, 1), (1, 2), (2, 2)))
LOOP_VERTEX = FeynmanGraph(1, ((1, 1),))


def relabeled(g: FeynmanGraph, rng: random.Random) -> FeynmanGraph:
    perm = list(range(1, g.vertex_count + 1))
    rng.shuffle(perm)
    mapping = {old: new for old, new in zip(range(1, g.vertex_count + 1), perm)}
    edges = [(mapping[u], mapping[v]) for u, v in g.edges]
    rng.shuffle(edges)
    return FeynmanGraph(g.vertex_count, tuple(edges))


def test_validate_accepts_theta():
    validate(THETA)


def test_validate_rejects_disconnected():
    with pytest.raises(InputError, match="connected"):
        validate(FeynmanGraph(3, ((1, 2),)))


def test_validate_rejects_out_of_range():
    with pytest.raises(InputError, match="out of range"):
        validate(FeynmanGraph(2, ((1, 3),)))


def test_validate_rejects_empty_vertex_set():
    with pytest.raises(InputError):
        validate(FeynmanGraph(0, ()))


def test_first_betti():
    assert first_betti(THETA) == 2
    assert first_betti(DUMBBELL) == 2
    assert first_betti(LOOP_VERTEX) == 1


def test_total_genus():
    assert total_genus(THETA, (0, 0)) == 2
    assert total_genus(THETA, (1, 0)) == 3
    assert total_genus(DUMBBELL, (0, 0)) == 2
    with pytest.raises(InputError):
        total_genus(THETA, (0, 0, 0))


def test_count_automorphisms_fixtures():
    assert count_automorphisms(THETA) == 12
    assert count_automorphisms(DUMBBELL) == 8
    assert count_automorphisms(LOOP_VERTEX) == 2


def test_automorphism_size_guard():
    path = FeynmanGraph(13, tuple((v, v + 1) for v in range(1, 13)))
    with pytest.raises(LimitError):
        count_automorphisms(path)


def test_nonloop_valence():
    assert nonloop_valence(THETA) == (3, 3)
    assert nonloop_valence(DUMBBELL) == (1, 1)
    assert nonloop_valence(LOOP_VERTEX) == (0,)


def test_catalog_matches_brute_force():
    for name in catalog_names():
        g = catalog_graph(name)
        assert count_automorphisms(g) == catalog_automorphisms(name), name


def test_unknown_catalog_name():
    with pytest.raises(InputError):
        catalog_graph("unknown")


def test_relabeling_invariance(rng):
    for _ in range(15):
        g = random_connected_graph(rng)
        h = relabeled(g, rng)
        assert first_betti(h) == first_betti(g)
        assert count_automorphisms(h) == count_automorphisms(g)


def test_trivalent_edge_vertex_counts():
    # every trivalent graph satisfies |E| = 3b - 3 and |V| = 2b - 2
    for name in ("theta", "dumbbell", "caterpillar2", "caterpillar3", "caterpillar4"):
        g = catalog_graph(name)
        assert all(g.valence(v) == 3 for v in range(1, g.vertex_count + 1)), name
        b = first_betti(g)
        assert g.edge_count == 3 * b - 3
        assert g.vertex_count == 2 * b - 2
