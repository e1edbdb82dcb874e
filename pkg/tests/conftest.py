"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the library's search paths: matchings are
filtered from full subset enumeration, permanents come from the n! definition.
"""

from __future__ import annotations

import itertools
import random

import pytest

from kas3.core import TriangularConfiguration


def brute_force_matchings(config, allowed):
    """All matchings with defect inside `allowed`, by filtering every subset."""
    allowed = set(allowed)
    tri_ids = config.triangle_ids
    assert len(tri_ids) <= 20, "oracle only works at desk scale"
    all_edges = set(config.edge_ids)
    out = []
    for r in range(len(tri_ids) + 1):
        for subset in itertools.combinations(tri_ids, r):
            covered: set[str] = set()
            ok = True
            for t in subset:
                edges = set(config.triangle_edges(t))
                if covered & edges:
                    ok = False
                    break
                covered |= edges
            if ok and (all_edges - covered) <= allowed:
                out.append(tuple(sorted(subset)))
    return sorted(out)


def brute_force_strong_matchings(config):
    tri_ids = config.triangle_ids
    assert len(tri_ids) <= 20
    out = []
    for r in range(len(tri_ids) + 1):
        for subset in itertools.combinations(tri_ids, r):
            covered: set[str] = set()
            ok = True
            for t in subset:
                verts = config.triangle_vertices(t)
                assert verts is not None
                if covered & verts:
                    ok = False
                    break
                covered |= verts
            if ok and covered == config.vertices:
                out.append(tuple(sorted(subset)))
    return sorted(out)


def permanent2_bruteforce(matrix):
    n = len(matrix)
    total = 0
    for perm in itertools.permutations(range(n)):
        product = 1
        for i in range(n):
            product *= matrix[i][perm[i]]
        total += product
    return total


def tetrahedron_boundary() -> TriangularConfiguration:
    """All four faces of a tetrahedron on vertices 1..4."""
    edges = {
        f"e{a}{b}": (str(a), str(b))
        for a, b in itertools.combinations(range(1, 5), 2)
    }
    triangles = {
        f"f{a}{b}{c}": (f"e{a}{b}", f"e{a}{c}", f"e{b}{c}")
        for a, b, c in itertools.combinations(range(1, 5), 3)
    }
    return TriangularConfiguration(edges, triangles)


def random_config(rng: random.Random, max_triangles: int = 6) -> TriangularConfiguration:
    """Valid random configuration, biased toward ones with perfect matchings.

    Mixes three families: two interleaved exact covers on nine edges (two
    perfect matchings), disjoint base triangles plus noise (at least one),
    and fully uniform triangles (usually none).
    """
    style = rng.random()
    triangles: dict[str, tuple[str, str, str]] = {}
    if style < 0.25:
        names = [f"e{i}" for i in range(9)]
        rng.shuffle(names)
        for b in range(3):
            triangles[f"t{b}"] = tuple(sorted(names[3 * b : 3 * b + 3]))  # type: ignore[assignment]
        for i in range(3):
            triangles[f"t{3 + i}"] = tuple(sorted([names[i], names[3 + i], names[6 + i]]))  # type: ignore[assignment]
        for t in rng.sample(sorted(triangles), rng.randint(0, 2)):
            del triangles[t]
        return TriangularConfiguration(names, triangles)
    if style < 0.6:
        k = rng.randint(1, 2)
        edges = [f"e{i}" for i in range(3 * k + rng.randint(0, 3))]
        for b in range(k):
            triangles[f"t{b}"] = (f"e{3 * b}", f"e{3 * b + 1}", f"e{3 * b + 2}")
    else:
        edges = [f"e{i}" for i in range(rng.randint(3, 10))]
    target = rng.randint(len(triangles), max_triangles)
    attempts = 0
    while len(triangles) < target and attempts < 60:
        attempts += 1
        tri = tuple(sorted(rng.sample(edges, 3)))
        if tri in triangles.values():
            continue
        if any(len(set(tri) & set(prev)) >= 2 for prev in triangles.values()):
            continue
        triangles[f"t{len(triangles)}"] = tri  # type: ignore[assignment]
    return TriangularConfiguration(edges, triangles)


@pytest.fixture
def tetrahedron():
    return tetrahedron_boundary()
