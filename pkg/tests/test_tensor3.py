"""3-matrix permanents/determinants, builders, signings and Binet-Cauchy."""

import random
from fractions import Fraction

import pytest

from kas3.algebra import Polynomial
from kas3.core import TriangularConfiguration
from kas3.errors import GuardExceeded, SchemaError, ToolkitError
from kas3.gadgets import make_matching_triangular_triangle, make_tunnel
from kas3.tensor3 import (
    BipartiteGraph,
    RectMatrixTriple,
    Tensor3,
    apply_signing,
    binet_cauchy_C,
    binet_cauchy_rhs,
    determinant2,
    determinant3,
    determinant3_dense,
    enumerate_graph_perfect_matchings,
    find_pfaffian_signing,
    kasteleyn_sign_via_k1,
    permanent2,
    permanent3,
    permanent3_dense,
    projection_graphs,
    triadjacency,
    vertex_adjacency,
)
from conftest import permanent2_bruteforce


def random_tensor(rng: random.Random, n: int, density: float = 0.5, lo=-3, hi=3) -> Tensor3:
    entries = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if rng.random() < density:
                    v = rng.randint(lo, hi)
                    if v:
                        entries[(i, j, k)] = v
    return Tensor3((n, n, n), entries)


class TestPermanentDeterminant:
    def test_one_by_one(self):
        t = Tensor3((1, 1, 1), {(0, 0, 0): 7})
        assert permanent3(t) == 7
        assert determinant3(t) == 7

    def test_all_ones_two(self):
        t = Tensor3((2, 2, 2), {(i, j, k): 1 for i in range(2) for j in range(2) for k in range(2)})
        assert permanent3(t) == 4
        assert determinant3(t) == 0
        assert permanent3_dense(t) == 4
        assert determinant3_dense(t) == 0

    def test_diagonal(self):
        t = Tensor3((3, 3, 3), {(i, i, i): v for i, v in enumerate([2, 3, 5])})
        assert permanent3(t) == 30
        assert determinant3(t) == 30

    def test_empty_row_gives_zero(self):
        t = Tensor3((2, 2, 2), {(0, 0, 0): 5})
        assert permanent3(t) == 0

    def test_sparse_and_dense_agree(self):
        rng = random.Random(31)
        for _ in range(40):
            n = rng.randint(1, 4)
            t = random_tensor(rng, n)
            assert permanent3(t) == permanent3_dense(t)
            assert determinant3(t) == determinant3_dense(t)

    def test_threads_do_not_change_value(self):
        rng = random.Random(32)
        for _ in range(10):
            t = random_tensor(rng, 4)
            assert permanent3(t, threads=3) == permanent3(t)
            assert determinant3(t, threads=3) == determinant3(t)

    def test_polynomial_entries(self):
        x = Polynomial.monomial(1)
        t = Tensor3((2, 2, 2), {(0, 0, 0): x, (1, 1, 1): x, (0, 1, 1): x, (1, 0, 0): x})
        # two diagonals: (0,0,0)(1,1,1) and (0,1,1)(1,0,0)
        assert permanent3(t) == Polynomial({2: 2})
        assert permanent3(t) == permanent3_dense(t)
        assert determinant3(t) == determinant3_dense(t)

    def test_relabeling_invariance(self):
        rng = random.Random(33)
        for _ in range(20):
            n = rng.randint(2, 4)
            t = random_tensor(rng, n)
            perms = [list(range(n)) for _ in range(3)]
            for p in perms:
                rng.shuffle(p)
            moved = Tensor3(
                t.dims,
                {
                    (perms[0][i], perms[1][j], perms[2][k]): v
                    for (i, j, k), v in t.entries.items()
                },
            )
            assert permanent3(moved) == permanent3(t)

    def test_determinant_sign_flips_on_axis_transposition(self):
        rng = random.Random(34)
        for axis in (1, 2):
            for _ in range(10):
                n = rng.randint(2, 4)
                t = random_tensor(rng, n)
                a, b = rng.sample(range(n), 2)
                swap = {a: b, b: a}

                def move(key):
                    i, j, k = key
                    if axis == 1:
                        return (i, swap.get(j, j), k)
                    return (i, j, swap.get(k, k))

                swapped = Tensor3(t.dims, {move(key): v for key, v in t.entries.items()})
                assert determinant3(swapped) == -determinant3(t)

    def test_determinant_invariant_under_even_permutations(self):
        rng = random.Random(35)
        cycle = {0: 1, 1: 2, 2: 0}  # 3-cycle is even
        for _ in range(10):
            t = random_tensor(rng, 3)
            moved = Tensor3(
                t.dims,
                {(i, cycle[j], cycle[k]): v for (i, j, k), v in t.entries.items()},
            )
            assert determinant3(moved) == determinant3(t)

    def test_dense_guard(self):
        t = Tensor3((5, 5, 5), {(0, 0, 0): 1})
        with pytest.raises(GuardExceeded):
            permanent3_dense(t)


class TestBuilders:
    def test_single_rainbow_triangle(self):
        config = TriangularConfiguration(["a", "b", "c"], {"t": ("a", "b", "c")})
        tensor, axes = triadjacency(config, {"a": 1, "b": 2, "c": 3}, {"t": 2})
        assert tensor.dims == (1, 1, 1)
        assert tensor[(0, 0, 0)] == Polynomial.monomial(2)
        assert axes == (("a",), ("b",), ("c",))

    def test_mtt_tensor_has_one_entry_per_triangle(self):
        gadget = make_matching_triangular_triangle(certify=False)
        tensor, _ = triadjacency(gadget.config, gadget.edge_classes)
        assert len(tensor.entries) == len(gadget.config.triangle_ids)

    def test_unbalanced_classes_pad_to_zero_permanent(self):
        gadget = make_tunnel(certify=False)
        tensor, _ = triadjacency(gadget.config, gadget.edge_classes)
        assert tensor.dims == (6, 6, 6)
        assert permanent3(tensor) == 0

    def test_invalid_tripartition_refused(self):
        config = TriangularConfiguration(["a", "b", "c"], {"t": ("a", "b", "c")})
        with pytest.raises(ToolkitError):
            triadjacency(config, {"a": 1, "b": 1, "c": 3})

    def test_vertex_adjacency_single_triangle(self):
        config = TriangularConfiguration(
            {"ab": ("u", "v"), "bc": ("v", "w"), "ca": ("w", "u")},
            {"t": ("ab", "bc", "ca")},
        )
        tensor, _ = vertex_adjacency(config, {"u": 1, "v": 2, "w": 3}, {"t": 9})
        assert tensor.dims == (1, 1, 1)
        assert tensor[(0, 0, 0)] == 9

    def test_vertex_adjacency_refuses_bad_classes(self):
        config = TriangularConfiguration(
            {"ab": ("u", "v"), "bc": ("v", "w"), "ca": ("w", "u")},
            {"t": ("ab", "bc", "ca")},
        )
        with pytest.raises(ToolkitError):
            vertex_adjacency(config, {"u": 1, "v": 1, "w": 3}, {})


class TestProjectionsAndSignings:
    def test_diagonal_projections_are_matchings(self):
        t = Tensor3((3, 3, 3), {(i, i, i): 1 for i in range(3)})
        graphs = projection_graphs(t)
        assert graphs.g1.edges == frozenset((i, i) for i in range(3))
        assert graphs.g2.edges == frozenset((i, i) for i in range(3))

    def test_all_ones_projections_complete(self):
        t = Tensor3((2, 2, 2), {(i, j, k): 1 for i in range(2) for j in range(2) for k in range(2)})
        graphs = projection_graphs(t)
        assert len(graphs.g1.edges) == 4
        assert len(graphs.g2.edges) == 4

    def test_apply_signing_identity(self):
        t = Tensor3((2, 2, 2), {(0, 0, 0): 3, (1, 1, 1): -2})
        ones = {(i, j): 1 for i in range(2) for j in range(2)}
        assert apply_signing(t, ones, ones) == t

    def test_apply_signing_flips_slice(self):
        t = Tensor3((2, 2, 2), {(0, 0, 0): 3, (0, 1, 1): 2, (1, 0, 0): 1, (1, 1, 1): 1})
        s1 = {(i, j): 1 for i in range(2) for j in range(2)}
        s1[(0, 0)] = -1
        s2 = {(i, k): 1 for i in range(2) for k in range(2)}
        signed = apply_signing(t, s1, s2)
        assert signed[(0, 0, 0)] == -3
        assert signed[(0, 1, 1)] == 2
        assert signed[(1, 0, 0)] == 1

    def test_apply_signing_missing_sign(self):
        t = Tensor3((1, 1, 1), {(0, 0, 0): 1})
        with pytest.raises(ToolkitError):
            apply_signing(t, {}, {(0, 0): 1})

    def test_forest_gets_all_plus_one(self):
        g = BipartiteGraph((0, 1), (0, 1), frozenset([(0, 0), (1, 0), (1, 1)]))
        signing = find_pfaffian_signing(g)
        assert signing is not None
        assert all(s == 1 for s in signing.values())

    def test_four_cycle_needs_one_minus(self):
        g = BipartiteGraph((0, 1), (0, 1), frozenset([(0, 0), (0, 1), (1, 0), (1, 1)]))
        signing = find_pfaffian_signing(g)
        assert signing is not None
        mat = [[signing[(i, j)] for j in range(2)] for i in range(2)]
        assert determinant2(mat) == permanent2([[1, 1], [1, 1]])

    def test_zero_permanent_takes_trivial_signing(self):
        g = BipartiteGraph((0, 1), (0, 1), frozenset([(0, 0), (1, 0)]))
        signing = find_pfaffian_signing(g)
        assert signing == {(0, 0): 1, (1, 0): 1}

    def test_signing_guard(self):
        edges = frozenset((i, j) for i in range(5) for j in range(5))
        g = BipartiteGraph(tuple(range(5)), tuple(range(5)), edges)
        with pytest.raises(GuardExceeded):
            find_pfaffian_signing(g)

    def test_sign_via_projections_all_ones(self):
        t = Tensor3((2, 2, 2), {(i, j, k): 1 for i in range(2) for j in range(2) for k in range(2)})
        out = kasteleyn_sign_via_k1(t)
        assert out is not None
        signed, _, _ = out
        assert determinant3(signed) == permanent3(t) == 4

    def test_sign_via_projections_random(self):
        rng = random.Random(41)
        certified = 0
        for _ in range(40):
            t = random_tensor(rng, 3, density=0.35, lo=1, hi=3)
            out = kasteleyn_sign_via_k1(t)
            if out is None:
                continue
            certified += 1
            signed, s1, s2 = out
            assert determinant3(signed) == permanent3(t)
            assert {abs(v) for v in signed.entries.values()} <= {
                abs(v) for v in t.entries.values()
            }
        assert certified >= 20


class TestTwoMatrixKernels:
    def test_permanent2_identity(self):
        assert permanent2([[1, 0], [0, 1]]) == 1

    def test_permanent2_all_ones(self):
        assert permanent2([[1] * 3 for _ in range(3)]) == 6

    def test_permanent2_matches_bruteforce(self):
        rng = random.Random(42)
        for _ in range(25):
            n = rng.randint(1, 4)
            m = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
            assert permanent2(m) == permanent2_bruteforce(m)

    def test_permanent2_guard(self):
        with pytest.raises(GuardExceeded):
            permanent2([[1] * 21 for _ in range(21)])

    def test_determinant2_matches_fraction_elimination(self):
        rng = random.Random(43)
        for _ in range(25):
            n = rng.randint(1, 4)
            m = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
            frac = [[Fraction(v) for v in row] for row in m]
            # cofactor-free oracle: permutation sum with signs
            total = 0
            import itertools

            for perm in itertools.permutations(range(n)):
                sign = 1
                seen = list(perm)
                for a in range(n):
                    for b in range(a + 1, n):
                        if seen[a] > seen[b]:
                            sign = -sign
                product = 1
                for i in range(n):
                    product *= m[i][perm[i]]
                total += sign * product
            assert determinant2(m) == total
            assert determinant2(frac) == total

    def test_graph_matching_enumeration(self):
        g = BipartiteGraph(("a", "b"), ("x", "y"), frozenset([("a", "x"), ("a", "y"), ("b", "x"), ("b", "y")]))
        assert len(enumerate_graph_perfect_matchings(g)) == 2
        unbalanced = BipartiteGraph(("a",), ("x", "y"), frozenset([("a", "x")]))
        assert enumerate_graph_perfect_matchings(unbalanced) == []


class TestBinetCauchy:
    def test_one_by_one(self):
        t = RectMatrixTriple.from_rows([[2]], [[3]], [[5]])
        assert binet_cauchy_C(t)[(0, 0, 0)] == 30
        assert binet_cauchy_rhs(t) == 30

    def test_row_of_ones(self):
        t = RectMatrixTriple.from_rows([[1, 1]], [[1, 1]], [[1, 1]])
        assert binet_cauchy_C(t)[(0, 0, 0)] == 2

    def test_full_square_case(self):
        a1, a2, a3 = [[1, 2], [3, 4]], [[0, 1], [1, 0]], [[2, 0], [0, 3]]
        t = RectMatrixTriple.from_rows(a1, a2, a3)
        assert binet_cauchy_rhs(t) == permanent2(a1) * determinant2(a2) * determinant2(a3)

    def test_entries_match_direct_summation(self):
        rng = random.Random(44)
        rows = lambda r, n: [[rng.randint(-3, 3) for _ in range(n)] for _ in range(r)]
        for _ in range(10):
            r, n = 2, 3
            a1, a2, a3 = rows(r, n), rows(r, n), rows(r, n)
            t = RectMatrixTriple.from_rows(a1, a2, a3)
            c = binet_cauchy_C(t)
            for i1 in range(r):
                for i2 in range(r):
                    for i3 in range(r):
                        direct = sum(a1[i1][j] * a2[i2][j] * a3[i3][j] for j in range(n))
                        assert c[(i1, i2, i3)] == direct

    def test_rank_deficient_middle_matrix_gives_zero(self):
        # every column pair of a2 is dependent, so each subset contributes 0
        a2 = [[1, 1, 1], [2, 2, 2]]
        a1 = [[1, 2, 3], [4, 5, 6]]
        a3 = [[7, 0, 1], [2, 2, 5]]
        t = RectMatrixTriple.from_rows(a1, a2, a3)
        assert binet_cauchy_rhs(t) == 0
        assert determinant3(binet_cauchy_C(t)) == 0

    def test_identity_on_random_triples(self):
        rng = random.Random(45)
        rows = lambda r, n: [[rng.randint(-3, 3) for _ in range(n)] for _ in range(r)]
        for _ in range(60):
            r = rng.randint(1, 3)
            n = rng.randint(r, 5)
            t = RectMatrixTriple.from_rows(rows(r, n), rows(r, n), rows(r, n))
            assert determinant3(binet_cauchy_C(t)) == binet_cauchy_rhs(t)

    def test_shape_validation(self):
        with pytest.raises(ToolkitError):
            RectMatrixTriple.from_rows([[1, 2]], [[1]], [[1, 2]])
        with pytest.raises(ToolkitError):
            RectMatrixTriple.from_rows([[1], [2]], [[1], [2]], [[1], [2]])


class TestTensorJson:
    def test_round_trip(self):
        t = Tensor3(
            (2, 2, 2),
            {(0, 0, 0): 3, (1, 1, 1): Polynomial({2: 1, 0: -1}), (0, 1, 0): 10**20},
        )
        doc = t.to_doc()
        again = Tensor3.from_doc(doc)
        assert again == t
        big = [row for row in doc["entries"] if row[:3] == [0, 1, 0]][0]
        assert isinstance(big[3], str)  # big integers serialize as strings

    def test_bad_docs_rejected(self):
        with pytest.raises(SchemaError):
            Tensor3.from_doc({"dims": [1, 1]})
        with pytest.raises(SchemaError):
            Tensor3.from_doc({"dims": [1, 1, 1], "entries": [[0, 0, 0]]})
        with pytest.raises(SchemaError):
            Tensor3.from_doc({"dims": [1, 1, 1], "entries": [[0, 0, 0, 1.5]]})
