"""Feynman graphs: labeled multigraphs with loops, plus genus bookkeeping
and brute-force automorphism counting.

Vertices are 1-based; the edge list order is significant because edge k
carries the formal variable q_k.  Loops (u = u) and parallel edges are
allowed.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from itertools import permutations
from math import factorial
from typing import Sequence

from .errors import InputError, LimitError

AUTOMORPHISM_VERTEX_LIMIT = 12


@dataclass(frozen=True)
class FeynmanGraph:
    """Connected labeled multigraph; call :func:`validate` before use."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "edges", tuple((int(u), int(v)) for u, v in self.edges)
        )

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def is_loop(self, k: int) -> bool:
        u, v = self.edges[k]
        return u == v

    def loop_indices(self) -> tuple[int, ...]:
        return tuple(k for k in range(len(self.edges)) if self.is_loop(k))

    def nonloop_indices(self) -> tuple[int, ...]:
        return tuple(k for k in range(len(self.edges)) if not self.is_loop(k))

    def valence(self, vertex: int) -> int:
        """Number of edge endpoints at the vertex; a loop counts twice."""
        return sum((u == vertex) + (v == vertex) for u, v in self.edges)


def validate(g: FeynmanGraph) -> None:
    """Check all graph invariants; raises InputError on the first failure."""
    n = g.vertex_count
    if n <= 0:
        raise InputError("graph must have at least one vertex")
    for k, (u, v) in enumerate(g.edges):
        if not (1 <= u <= n and 1 <= v <= n):
            raise InputError(
                f"edge {k + 1} endpoint out of range: ({u}, {v}) with {n} vertices"
            )
    if not _connected(g):
        raise InputError("graph is not connected")


def _connected(g: FeynmanGraph) -> bool:
    if g.vertex_count == 1:
        return True
    adjacency: dict[int, set[int]] = {v: set() for v in range(1, g.vertex_count + 1)}
    for u, v in g.edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    seen = {1}
    stack = [1]
    while stack:
        for w in adjacency[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.vertex_count


def first_betti(g: FeynmanGraph) -> int:
    """Genus of the graph itself: |edges| - |vertices| + 1."""
    validate(g)
    return len(g.edges) - g.vertex_count + 1


def check_genus_function(g: FeynmanGraph, gf: Sequence[int]) -> tuple[int, ...]:
    gf = tuple(int(x) for x in gf)
    if len(gf) != g.vertex_count:
        raise InputError(
            f"genus function has {len(gf)} entries, graph has {g.vertex_count} vertices"
        )
    if any(x < 0 for x in gf):
        raise InputError("vertex genera must be nonnegative")
    return gf


def total_genus(g: FeynmanGraph, gf: Sequence[int]) -> int:
    """First Betti number plus the sum of the vertex genera."""
    gf = check_genus_function(g, gf)
    return first_betti(g) + sum(gf)


def check_branch_type(g: FeynmanGraph, a: Sequence[int]) -> tuple[int, ...]:
    a = tuple(int(x) for x in a)
    if len(a) != len(g.edges):
        raise InputError(
            f"branch type has {len(a)} entries, graph has {len(g.edges)} edges"
        )
    if any(x < 0 for x in a):
        raise InputError("branch degrees must be nonnegative")
    return a


def nonloop_valence(g: FeynmanGraph) -> tuple[int, ...]:
    """Per-vertex count of non-loop edge endpoints (entry i-1 is vertex i)."""
    counts = [0] * g.vertex_count
    for u, v in g.edges:
        if u != v:
            counts[u - 1] += 1
            counts[v - 1] += 1
    return tuple(counts)


def count_automorphisms(g: FeynmanGraph) -> int:
    """Order of the automorphism group acting on half-edges.

    Brute force over vertex permutations; for each one compatible with the
    edge multiplicities, parallel edges within a class may be matched in any
    order and every loop may additionally be flipped, so a valid vertex map
    contributes prod(m!) over non-loop classes times prod(L! * 2^L) over loop
    classes.
    """
    validate(g)
    n = g.vertex_count
    if n > AUTOMORPHISM_VERTEX_LIMIT:
        raise LimitError(
            f"automorphism counting is brute force and limited to "
            f"{AUTOMORPHISM_VERTEX_LIMIT} vertices (got {n})"
        )
    nonloop_classes = Counter(
        (min(u, v), max(u, v)) for u, v in g.edges if u != v
    )
    loop_classes = Counter(u for u, v in g.edges if u == v)

    per_map = 1
    for m in nonloop_classes.values():
        per_map *= factorial(m)
    for L in loop_classes.values():
        per_map *= factorial(L) * 2**L

    total = 0
    for perm in permutations(range(1, n + 1)):
        image = (None, *perm)  # 1-based lookup
        ok = all(
            loop_classes[image[u]] == L for u, L in loop_classes.items()
        ) and all(
            nonloop_classes[
                (min(image[u], image[v]), max(image[u], image[v]))
            ]
            == m
            for (u, v), m in nonloop_classes.items()
        )
        if ok:
            total += per_map
    return total


# -- built-in catalog --------------------------------------------------------


def _load_catalog() -> dict[str, dict]:
    data = resources.files("feynmint.data").joinpath("catalog.json").read_text()
    return json.loads(data)


_CATALOG = _load_catalog()


def catalog_names() -> tuple[str, ...]:
    return tuple(sorted(_CATALOG))


def catalog_entry(name: str) -> dict:
    try:
        return _CATALOG[name]
    except KeyError:
        raise InputError(
            f"unknown catalog graph {name!r}; available: {', '.join(catalog_names())}"
        ) from None


def catalog_graph(name: str) -> FeynmanGraph:
    entry = catalog_entry(name)
    g = FeynmanGraph(entry["vertices"], tuple(map(tuple, entry["edges"])))
    validate(g)
    return g


def catalog_automorphisms(name: str) -> int:
    return catalog_entry(name)["aut"]
