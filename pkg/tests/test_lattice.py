"""Cubic lattices, dimer pipelines and the geometric realization."""

import itertools
from fractions import Fraction

import pytest

from conftest import permanent2_bruteforce
from kas3.algebra import Polynomial
from kas3.errors import GuardExceeded, ToolkitError
from kas3.lattice import (
    check_embedding,
    cubic_lattice,
    dimer_count,
    dimer_polynomial,
    embed_T,
)
from kas3.tensor3 import permanent3
from kas3.kasteleyn_construct import build_T


class TestLatticeConstruction:
    def test_two_one_one_is_single_edge(self):
        q = cubic_lattice(2, 1, 1)
        assert q.vertex_count == 2
        assert q.edge_count == 1

    def test_two_two_one_is_four_cycle(self):
        q = cubic_lattice(2, 2, 1)
        assert q.vertex_count == 4
        assert q.edge_count == 4

    def test_cube_counts(self):
        q = cubic_lattice(2, 2, 2)
        assert q.vertex_count == 8
        assert q.edge_count == 12

    def test_bipartition_by_parity(self):
        q = cubic_lattice(3, 2, 1)
        assert all(sum(p) % 2 == 0 for p in q.graph.left)
        assert all(sum(p) % 2 == 1 for p in q.graph.right)

    def test_rejects_empty_box(self):
        with pytest.raises(ToolkitError):
            cubic_lattice(0, 2, 2)


class TestDimerCounts:
    def test_known_counts(self):
        assert dimer_count(cubic_lattice(2, 1, 1)) == 1
        assert dimer_count(cubic_lattice(2, 2, 1)) == 2
        assert dimer_count(cubic_lattice(2, 2, 2)) == 9

    def test_cube_count_against_bruteforce_permanent(self):
        q = cubic_lattice(2, 2, 2)
        assert permanent2_bruteforce(q.graph.biadjacency()) == 9

    def test_odd_boxes_have_no_matchings(self):
        assert dimer_polynomial(cubic_lattice(3, 1, 1)).is_zero
        assert dimer_polynomial(cubic_lattice(3, 3, 1)).is_zero

    def test_polynomial_form(self):
        assert dimer_polynomial(cubic_lattice(2, 2, 1)) == Polynomial({2: 2})

    def test_weighted_polynomial(self):
        q = cubic_lattice(2, 2, 1)
        heavy = next(iter(sorted(q.graph.edges)))
        weights = {heavy: 3}
        poly = dimer_polynomial(q, edge_weights=weights)
        # one matching uses the heavy edge (3 + 1), the other does not (1 + 1)
        assert poly == Polynomial({4: 1, 2: 1})

    def test_symmetry_under_axis_permutation(self):
        for dims in [(2, 2, 1), (2, 2, 2), (2, 3, 1), (2, 2, 3)]:
            counts = {
                dimer_count(cubic_lattice(*perm))
                for perm in itertools.permutations(dims)
            }
            assert len(counts) == 1

    def test_pipeline_agreement_small_boxes(self):
        for dims in [(2, 1, 1), (2, 2, 1), (3, 2, 1), (2, 2, 2), (2, 3, 2)]:
            q = cubic_lattice(*dims)
            direct = dimer_count(q, cross_check=False)
            tc = build_T(q.graph.biadjacency())
            assert permanent3(tc.tensor) == direct

    def test_two_by_two_by_four(self):
        from kas3.tensor3 import permanent2

        q = cubic_lattice(2, 2, 4)
        direct = dimer_count(q, cross_check=False)
        assert direct == 121
        assert permanent2(q.graph.biadjacency()) == 121
        assert permanent3(build_T(q.graph.biadjacency()).tensor) == 121

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            dimer_polynomial(cubic_lattice(3, 3, 3))


class TestEmbedding:
    def test_lattice_points_preserved(self):
        q = cubic_lattice(2, 1, 1)
        emb = embed_T(q)
        assert emb.coordinates["v(1,0)"] == (Fraction(0), Fraction(0), Fraction(0))
        assert emb.coordinates["v(2,0)"] == (Fraction(1), Fraction(0), Fraction(0))

    def test_edge_vertices_cluster_at_midpoints(self):
        q = cubic_lattice(2, 2, 1)
        emb = embed_T(q)
        for ei, (i, j) in enumerate(emb.construction.edge_list):
            p = emb.lattice.graph.left[i]
            r = emb.lattice.graph.right[j]
            midpoint = tuple(Fraction(p[k] + r[k], 2) for k in range(3))
            for prefix in ("w(0,e", "w(1,e", "w(2,e"):
                point = emb.coordinates[f"{prefix}{ei})"]
                dist_sq = sum((point[k] - midpoint[k]) ** 2 for k in range(3))
                assert dist_sq < Fraction(1, 16)

    def test_audit_is_clean(self):
        emb = embed_T(cubic_lattice(2, 2, 2))
        assert check_embedding(emb) == []

    def test_off_export_shape(self):
        emb = embed_T(cubic_lattice(2, 1, 1))
        text = emb.to_off()
        lines = text.strip().split("\n")
        assert lines[0] == "OFF"
        nv, nf, ne = map(int, lines[1].split())
        assert nv == len(emb.coordinates)
        assert nf == len(emb.construction.config.triangle_ids)
        assert len(lines) == 2 + nv + nf
        for face_line in lines[2 + nv :]:
            parts = face_line.split()
            assert parts[0] == "3"
            assert all(0 <= int(p) < nv for p in parts[1:])

    def test_off_coordinates_are_exact_decimals(self):
        emb = embed_T(cubic_lattice(2, 1, 1))
        for line in emb.to_off().strip().split("\n")[2 : 2 + len(emb.coordinates)]:
            for token in line.split():
                assert float(token) is not None  # parses
                if "." in token:
                    assert not token.endswith(".")
