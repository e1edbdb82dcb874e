"""Matrix-to-configuration construction and its two certifications."""

import random

import pytest

from conftest import brute_force_strong_matchings, permanent2_bruteforce
from kas3.core import (
    check_vertex_tripartition,
    enumerate_perfect_strong_matchings,
    find_vertex_tripartition,
    validate,
)
from kas3.errors import ToolkitError
from kas3.kasteleyn_construct import (
    build_T,
    certify_trivial_signing,
    matrix_from_doc,
    strong_matching_bijection_check,
)
from kas3.tensor3 import determinant3, permanent2, permanent3, projection_graphs


class TestBuild:
    def test_single_entry(self):
        tc = build_T([[5]])
        assert tc.m == 3 == 1 * 1 + 2 * 1
        assert len(tc.edge_list) == 1
        assert validate(tc.config) == []
        assert permanent3(tc.tensor) == 5

    def test_identity_two(self):
        tc = build_T([[1, 0], [0, 1]])
        assert tc.m == 6
        assert permanent3(tc.tensor) == 1 == permanent2([[1, 0], [0, 1]])

    def test_all_ones_two(self):
        tc = build_T([[1, 1], [1, 1]])
        assert tc.m == 8
        assert permanent3(tc.tensor) == 2

    def test_m_bound_equality_iff_dense(self):
        dense = build_T([[1, 2], [3, 4]])
        assert dense.m == 2 * 2 + 4 == 2 * 2 + 2 * 2  # n^2 + 2n
        sparse = build_T([[1, 0], [0, 1]])
        assert sparse.m < 2 * 2 + 2 * 2

    def test_rejects_non_square(self):
        with pytest.raises(ToolkitError):
            build_T([[1, 2, 3], [4, 5, 6]])

    def test_entry_placement(self):
        m = [[2, 0], [3, -4]]
        tc = build_T(m)
        placed = 0
        for (i, j, k), value in tc.tensor.entries.items():
            if value != 1:
                placed += 1
        # entries 2, 3, -4 are non-unit; every other triangle carries 1
        assert placed == 3
        assert len(tc.tensor.entries) == len(tc.config.triangle_ids)

    def test_nonnegative_matrix_gives_nonnegative_tensor(self):
        tc = build_T([[1, 2], [0, 3]])
        assert all(
            (v >= 0) if isinstance(v, int) else False for v in tc.tensor.entries.values()
        )

    def test_vertex_classes_are_a_tripartition(self):
        tc = build_T([[1, 1], [1, 0]])
        assert check_vertex_tripartition(tc.config, tc.vertex_classes) == []

    def test_pinned_search_recovers_a_tripartition(self):
        tc = build_T([[1]])
        pins = {tc.w0[0]: 1, tc.w1[0]: 2, tc.w2[0]: 3}
        classes = find_vertex_tripartition(tc.config, pins=pins)
        assert classes is not None
        assert check_vertex_tripartition(tc.config, classes) == []


class TestProjectionStructure:
    def test_g1_components(self):
        tc = build_T([[1, 1], [1, 1]])
        graphs = projection_graphs(tc.tensor)
        w0_pos = {name: i for i, name in enumerate(tc.w0)}
        w1_pos = {name: i for i, name in enumerate(tc.w1)}
        edges = graphs.g1.edges
        # copy pairs: v'(1,j) joined to w(0,2,j) only, via one support edge
        for j in range(2):
            incident = [e for e in edges if e[0] == w0_pos[f"w(0,2,{j})"]]
            assert incident == [(w0_pos[f"w(0,2,{j})"], w1_pos[f"v'(1,{j})"])]
        # each left vertex reaches its anchor through deg(v) paths of length 3
        for i in range(2):
            mids = [ei for ei, (a, _b) in enumerate(tc.edge_list) if a == i]
            assert len(mids) == 2
            for ei in mids:
                assert (w0_pos[f"w(0,e{ei})"], w1_pos[f"v(1,{i})"]) in edges
                assert (w0_pos[f"w(0,e{ei})"], w1_pos[f"w(1,e{ei})"]) in edges
                assert (w0_pos[f"w(0,1,{i})"], w1_pos[f"w(1,e{ei})"]) in edges


class TestCertifications:
    def test_trivial_signing_small_cases(self):
        for matrix in ([[3]], [[1, 0], [0, 1]], [[1, 1], [1, 1]], [[1, -2], [3, 4]]):
            tc = build_T(matrix)
            cert = certify_trivial_signing(tc)
            assert cert.passed, cert
            assert cert.contributing_pairs == abs_permanent_support(matrix)

    def test_rewired_triangle_breaks_signing(self):
        from dataclasses import replace

        from kas3.tensor3 import Tensor3

        tc = build_T([[1]])
        entries = dict(tc.tensor.entries)
        row1 = next(key for key in entries if key[0] == 1)
        row2 = next(key for key in entries if key[0] == 2)
        moved = dict(entries)
        del moved[row1], moved[row2]
        moved[(1, row2[1], row1[2])] = entries[row1]
        moved[(2, row1[1], row2[2])] = entries[row2]
        bad_tc = replace(tc, tensor=Tensor3(tc.tensor.dims, moved))
        cert = certify_trivial_signing(bad_tc)
        assert cert.contributing_pairs == 1
        assert not cert.passed
        assert cert.witness is not None

    def test_bijection_single_edge(self):
        tc = build_T([[1]])
        report = strong_matching_bijection_check(tc)
        assert report.passed
        assert report.graph_matchings == report.strong_matchings == 1

    def test_bijection_four_cycle(self):
        # support of a 2x2 all-ones matrix is the 4-cycle
        tc = build_T([[1, 1], [1, 1]])
        report = strong_matching_bijection_check(tc)
        assert report.passed
        assert report.graph_matchings == report.strong_matchings == 2

    def test_bijection_isolated_vertex(self):
        tc = build_T([[1, 1], [0, 0]])
        report = strong_matching_bijection_check(tc)
        assert report.passed
        assert report.graph_matchings == report.strong_matchings == 0

    def test_strong_matchings_match_brute_force(self):
        tc = build_T([[1, 1], [0, 1]])
        assert enumerate_perfect_strong_matchings(tc.config) == \
            brute_force_strong_matchings(tc.config)


def abs_permanent_support(matrix) -> int:
    support = [[1 if v else 0 for v in row] for row in matrix]
    return permanent2_bruteforce(support)


class TestRandomSweep:
    def test_permanents_and_determinants_agree(self):
        rng = random.Random(51)
        for trial in range(40):
            n = rng.randint(1, 4)
            if trial % 2:
                matrix = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
            else:
                matrix = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
            tc = build_T(matrix)
            value = permanent2_bruteforce(matrix)
            assert permanent2(matrix) == value
            assert permanent3(tc.tensor) == value
            assert determinant3(tc.tensor) == value
            assert tc.m == 2 * n + len(tc.edge_list) <= n * n + 2 * n


class TestSignViaProjections:
    def test_built_tensor_certifies_with_trivial_signing(self):
        from kas3.tensor3 import kasteleyn_sign_via_k1

        tc = build_T([[1, 1], [1, 1]])
        outcome = kasteleyn_sign_via_k1(tc.tensor)
        assert outcome is not None
        signed, s1, s2 = outcome
        assert determinant3(signed) == permanent3(tc.tensor) == 2
        assert all(v == 1 for v in s1.values())
        assert all(v == 1 for v in s2.values())


class TestMatrixDoc:
    def test_parse(self):
        assert matrix_from_doc({"n": 2, "rows": [[1, 0], [0, 1]]}) == [[1, 0], [0, 1]]

    def test_rejects_ragged(self):
        from kas3.errors import SchemaError

        with pytest.raises(SchemaError):
            matrix_from_doc({"n": 2, "rows": [[1, 0, 0], [0, 1, 0]]})
