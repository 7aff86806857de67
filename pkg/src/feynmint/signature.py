"""Flip signatures: grouping vertex orders whose integrals coincide.

A vertex order only influences the integral through the expansion direction
of each zero-degree non-loop edge (positive-degree factors are symmetric in
their endpoints, loops carry no x-variables).  The signature records per edge

    -2                loop,
    -1                zero-degree edge, first-listed endpoint earlier,
     0                zero-degree edge, first-listed endpoint later,
    a_k (> 0)         positive-degree edge,

so the (vertex count)! orders collapse into at most 2^(#zero-degree non-loop
edges) classes, tallied with exact multiplicities.
"""

from __future__ import annotations

from itertools import permutations
from math import factorial
from typing import Sequence

from .errors import InputError, LimitError
from .graph import FeynmanGraph, check_branch_type, validate

Signature = tuple[int, ...]

SIGNATURE_VERTEX_LIMIT = 10

LOOP = -2


def flip_signature(
    g: FeynmanGraph, omega: Sequence[int], a: Sequence[int]
) -> Signature:
    """Signature of the vertex order omega for branch type a.

    omega must cover every vertex incident to a zero-degree non-loop edge;
    it may omit the rest (their position never matters).
    """
    a = check_branch_type(g, a)
    position = {v: p for p, v in enumerate(omega)}
    if len(position) != len(tuple(omega)):
        raise InputError("omega repeats a vertex")
    entries = []
    for k, (u, v) in enumerate(g.edges):
        if u == v:
            entries.append(LOOP)
        elif a[k] > 0:
            entries.append(a[k])
        else:
            try:
                entries.append(-1 if position[u] < position[v] else 0)
            except KeyError as missing:
                raise InputError(
                    f"omega does not cover vertex {missing.args[0]} "
                    f"(incident to zero-degree edge {k + 1})"
                ) from None
    return tuple(entries)


def signature_and_multiplicities(
    g: FeynmanGraph, a: Sequence[int]
) -> dict[Signature, int]:
    """Tally signatures over vertex orders; multiplicities sum to n!.

    Only the vertices incident to zero-degree non-loop edges are permuted;
    every tally is then scaled by n!/|V|! to account for the free positions
    of the remaining vertices.
    """
    validate(g)
    a = check_branch_type(g, a)
    involved = sorted(
        {
            w
            for k, (u, v) in enumerate(g.edges)
            if u != v and a[k] == 0
            for w in (u, v)
        }
    )
    if len(involved) > SIGNATURE_VERTEX_LIMIT:
        raise LimitError(
            f"signature enumeration permutes {len(involved)} vertices; "
            f"limit is {SIGNATURE_VERTEX_LIMIT}"
        )
    table: dict[Signature, int] = {}
    for omega in permutations(involved):
        sig = flip_signature(g, omega, a)
        table[sig] = table.get(sig, 0) + 1
    scale = factorial(g.vertex_count) // factorial(len(involved))
    return {sig: count * scale for sig, count in table.items()}
