"""Sparse exact 3-matrices: permanents, determinants, adjacency builders, signings.

Entry values are exact ring elements: Python ints, fractions, or Polynomial.
Cubic permanents and determinants walk the nonzero support with used-index
bitmasks; the n <= 4 dense double-permutation loop stays available as an
independent oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from ._util import ordered_parallel_map
from .algebra import Polynomial
from .core import TriangularConfiguration, check_edge_tripartition, check_vertex_tripartition
from .errors import GuardExceeded, SchemaError, ToolkitError

DENSE_MAX_SIDE = 4
PERMANENT2_MAX_SIDE = 20
SIGNING_MAX_EDGES = 20
BINET_CAUCHY_MAX_SUBSETS = 100_000

RingValue = int | Fraction | Polynomial


def _is_zero(value: RingValue) -> bool:
    return value == 0


class Tensor3:
    """Sparse n1 x n2 x n3 array over exact ring values; absent entries are zero."""

    __slots__ = ("dims", "entries")

    def __init__(self, dims: Sequence[int], entries: Mapping[tuple[int, int, int], RingValue]):
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != 3 or any(d < 0 for d in self.dims):
            raise ToolkitError(f"bad tensor dims {dims}")
        clean: dict[tuple[int, int, int], RingValue] = {}
        for (i, j, k), value in entries.items():
            if not (0 <= i < self.dims[0] and 0 <= j < self.dims[1] and 0 <= k < self.dims[2]):
                raise ToolkitError(f"entry index ({i},{j},{k}) outside dims {self.dims}")
            if not _is_zero(value):
                clean[(int(i), int(j), int(k))] = value
        self.entries = clean

    @property
    def cube_side(self) -> int:
        """Side of the zero-padded cube the permanent and determinant act on."""
        return max(self.dims) if self.dims else 0

    def __getitem__(self, key: tuple[int, int, int]) -> RingValue:
        return self.entries.get(key, 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.dims == other.dims and self.entries == other.entries

    def __repr__(self) -> str:
        return f"Tensor3(dims={self.dims}, nnz={len(self.entries)})"

    def to_doc(self) -> dict:
        rows = []
        for (i, j, k) in sorted(self.entries):
            rows.append([i, j, k, encode_ring_value(self.entries[(i, j, k)])])
        return {"dims": list(self.dims), "entries": rows}

    @classmethod
    def from_doc(cls, doc: Mapping) -> "Tensor3":
        try:
            dims = [int(d) for d in doc["dims"]]
            raw = doc["entries"]
            entries: dict[tuple[int, int, int], RingValue] = {}
            for row in raw:
                if len(row) != 4:
                    raise SchemaError(f"tensor entry {row!r} must be [i, j, k, value]")
                i, j, k, value = row
                key = (int(i), int(j), int(k))
                if key in entries:
                    raise SchemaError(f"duplicate tensor entry at {key}")
                entries[key] = decode_ring_value(value)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(f"bad tensor document: {exc}") from exc
        return cls(dims, entries)


_JSON_SAFE_INT = 1 << 53


def encode_ring_value(value: RingValue):
    if isinstance(value, bool):
        raise SchemaError("boolean is not a ring value")
    if isinstance(value, int):
        return value if abs(value) < _JSON_SAFE_INT else str(value)
    if isinstance(value, Polynomial):
        return {"poly": {str(e): encode_ring_value(c) for e, c in value.terms()}}
    raise SchemaError(f"cannot serialize ring value of type {type(value).__name__}")


def decode_ring_value(value) -> RingValue:
    if isinstance(value, bool):
        raise SchemaError("boolean is not a ring value")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError as exc:
            raise SchemaError(f"bad big-integer string {value!r}") from exc
    if isinstance(value, dict) and set(value) == {"poly"}:
        if not isinstance(value["poly"], dict):
            raise SchemaError("poly value must map exponents to coefficients")
        coeffs = {}
        for e, c in value["poly"].items():
            coeffs[int(e)] = decode_ring_value(c)
            if not isinstance(coeffs[int(e)], int):
                raise SchemaError("polynomial coefficients must be integers")
        return Polynomial(coeffs)
    raise SchemaError(f"cannot parse ring value {value!r}")


# -- permanent / determinant ---------------------------------------------------


def walk_support_diagonals(
    tensor: Tensor3,
    leaf: Callable[[list[int], list[int], RingValue], None],
    threads: int = 1,
) -> None:
    """Visit every (sigma1, sigma2) pair with a nonzero entry product.

    Rows (axis-0 indices) are processed in ascending order of nonzero count;
    `leaf` receives sigma1/sigma2 as row-indexed assignment arrays plus the
    entry product along the pair.
    """
    n = tensor.cube_side
    row_entries: list[list[tuple[int, int, RingValue]]] = [[] for _ in range(n)]
    for (i, j, k), value in sorted(tensor.entries.items()):
        row_entries[i].append((j, k, value))
    if any(not row for row in row_entries):
        return
    order = sorted(range(n), key=lambda i: (len(row_entries[i]), i))
    sigma1 = [-1] * n
    sigma2 = [-1] * n

    def recurse(depth: int, used_j: int, used_k: int, product: RingValue) -> None:
        if depth == n:
            leaf(sigma1[:], sigma2[:], product)
            return
        row = order[depth]
        for j, k, value in row_entries[row]:
            bj, bk = 1 << j, 1 << k
            if used_j & bj or used_k & bk:
                continue
            sigma1[row], sigma2[row] = j, k
            recurse(depth + 1, used_j | bj, used_k | bk, product * value)
        sigma1[row] = sigma2[row] = -1

    if threads > 1 and n > 0 and len(row_entries[order[0]]) > 1:
        first = order[0]

        def run_branch(cand: tuple[int, int, RingValue]) -> list[tuple[list[int], list[int], RingValue]]:
            j, k, value = cand
            collected: list[tuple[list[int], list[int], RingValue]] = []
            s1, s2 = [-1] * n, [-1] * n

            def local(depth: int, used_j: int, used_k: int, product: RingValue) -> None:
                if depth == n:
                    collected.append((s1[:], s2[:], product))
                    return
                row = order[depth]
                for jj, kk, vv in row_entries[row]:
                    bj, bk = 1 << jj, 1 << kk
                    if used_j & bj or used_k & bk:
                        continue
                    s1[row], s2[row] = jj, kk
                    local(depth + 1, used_j | bj, used_k | bk, product * vv)
                s1[row] = s2[row] = -1

            s1[first], s2[first] = j, k
            local(1, 1 << j, 1 << k, value)
            return collected

        branches = ordered_parallel_map(run_branch, row_entries[first], threads)
        for branch in branches:
            for s1, s2, product in branch:
                leaf(s1, s2, product)
    else:
        recurse(0, 0, 0, 1)


def permutation_parity(perm: Sequence[int]) -> int:
    """+1 for even, -1 for odd, by inversion counting."""
    inversions = 0
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                inversions += 1
    return -1 if inversions & 1 else 1


def permanent3(tensor: Tensor3, threads: int = 1) -> RingValue:
    """Exact double-permutation sum over the zero-padded cube (sparse path)."""
    total: list[RingValue] = [0]

    def leaf(_s1: list[int], _s2: list[int], product: RingValue) -> None:
        total[0] = total[0] + product

    walk_support_diagonals(tensor, leaf, threads=threads)
    return total[0]


def determinant3(tensor: Tensor3, threads: int = 1) -> RingValue:
    """Like `permanent3` but each term carries sign(sigma1) * sign(sigma2)."""
    total: list[RingValue] = [0]

    def leaf(s1: list[int], s2: list[int], product: RingValue) -> None:
        sign = permutation_parity(s1) * permutation_parity(s2)
        total[0] = total[0] + (product if sign > 0 else -product)

    walk_support_diagonals(tensor, leaf, threads=threads)
    return total[0]


def permanent3_dense(tensor: Tensor3) -> RingValue:
    """Direct loop over S_n x S_n; independent oracle, guarded to n <= 4."""
    n = tensor.cube_side
    if n > DENSE_MAX_SIDE:
        raise GuardExceeded(f"dense oracle limited to side {DENSE_MAX_SIDE}, got {n}")
    total: RingValue = 0
    for s1 in itertools.permutations(range(n)):
        for s2 in itertools.permutations(range(n)):
            product: RingValue = 1
            for i in range(n):
                product = product * tensor[(i, s1[i], s2[i])]
                if _is_zero(product):
                    break
            total = total + product
    return total


def determinant3_dense(tensor: Tensor3) -> RingValue:
    n = tensor.cube_side
    if n > DENSE_MAX_SIDE:
        raise GuardExceeded(f"dense oracle limited to side {DENSE_MAX_SIDE}, got {n}")
    total: RingValue = 0
    for s1 in itertools.permutations(range(n)):
        sign1 = permutation_parity(s1)
        for s2 in itertools.permutations(range(n)):
            product: RingValue = 1
            for i in range(n):
                product = product * tensor[(i, s1[i], s2[i])]
                if _is_zero(product):
                    break
            sign = sign1 * permutation_parity(s2)
            total = total + (product if sign > 0 else -product)
    return total


# -- adjacency builders ----------------------------------------------------------


def triadjacency(
    config: TriangularConfiguration,
    edge_classes: Mapping[str, int],
    weighting: Mapping[str, int] | None = None,
) -> tuple[Tensor3, tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]]:
    """Edge-level adjacency tensor with x^weight entries, one per triangle.

    Returns the tensor (zero-padded to a cube) and the three canonical edge
    orders indexing its axes.
    """
    problems = check_edge_tripartition(config, edge_classes)
    if problems:
        raise ToolkitError("invalid edge tripartition: " + "; ".join(problems))
    by_class: dict[int, list[str]] = {1: [], 2: [], 3: []}
    for e in config.edge_ids:
        by_class[edge_classes[e]].append(e)
    orders = (tuple(by_class[1]), tuple(by_class[2]), tuple(by_class[3]))
    pos = [{e: i for i, e in enumerate(axis)} for axis in orders]
    side = max((len(axis) for axis in orders), default=0)
    entries: dict[tuple[int, int, int], RingValue] = {}
    for t in config.triangle_ids:
        index: list[int] = [0, 0, 0]
        for e in config.triangle_edges(t):
            cls = edge_classes[e]
            index[cls - 1] = pos[cls - 1][e]
        key = (index[0], index[1], index[2])
        if key in entries:
            raise ToolkitError(f"two triangles map to tensor cell {key}")
        w = int(weighting.get(t, 1)) if weighting is not None else 1
        entries[key] = Polynomial.monomial(w)
    return Tensor3((side, side, side), entries), orders


def vertex_adjacency(
    config: TriangularConfiguration,
    vertex_classes: Mapping[str, int],
    entry_values: Mapping[str, RingValue],
    class_orders: tuple[Sequence[str], Sequence[str], Sequence[str]] | None = None,
) -> tuple[Tensor3, tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]]:
    """Vertex-level adjacency tensor; entry values are supplied per triangle."""
    problems = check_vertex_tripartition(config, vertex_classes)
    if problems:
        raise ToolkitError("invalid vertex tripartition: " + "; ".join(problems))
    if class_orders is None:
        by_class: dict[int, list[str]] = {1: [], 2: [], 3: []}
        for v in sorted(config.vertices):
            by_class[vertex_classes[v]].append(v)
        orders = (tuple(by_class[1]), tuple(by_class[2]), tuple(by_class[3]))
    else:
        orders = tuple(tuple(axis) for axis in class_orders)  # type: ignore[assignment]
        for axis_index, axis in enumerate(orders, start=1):
            for v in axis:
                if vertex_classes.get(v) != axis_index:
                    raise ToolkitError(f"vertex {v!r} not in class {axis_index}")
    pos = [{v: i for i, v in enumerate(axis)} for axis in orders]
    side = max((len(axis) for axis in orders), default=0)
    entries: dict[tuple[int, int, int], RingValue] = {}
    for t in config.triangle_ids:
        verts = config.triangle_vertices(t)
        if verts is None:
            raise ToolkitError(f"triangle {t!r} lacks vertex data")
        index: list[int] = [0, 0, 0]
        for v in verts:
            cls = vertex_classes[v]
            index[cls - 1] = pos[cls - 1][v]
        key = (index[0], index[1], index[2])
        if key in entries:
            raise ToolkitError(f"two triangles map to tensor cell {key}")
        value = entry_values.get(t, 1)
        entries[key] = value
    return Tensor3((side, side, side), entries), orders


# -- bipartite graphs and 2-matrix kernels ---------------------------------------


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite graph with ordered sides; edges are (left id, right id) pairs."""

    left: tuple
    right: tuple
    edges: frozenset

    def __post_init__(self):
        lset, rset = set(self.left), set(self.right)
        for u, v in self.edges:
            if u not in lset or v not in rset:
                raise ToolkitError(f"edge ({u!r}, {v!r}) leaves the bipartition")

    def biadjacency(self) -> list[list[int]]:
        lpos = {u: i for i, u in enumerate(self.left)}
        rpos = {v: j for j, v in enumerate(self.right)}
        mat = [[0] * len(self.right) for _ in self.left]
        for u, v in self.edges:
            mat[lpos[u]][rpos[v]] = 1
        return mat

    def degree(self, vertex) -> int:
        return sum(1 for u, v in self.edges if u == vertex or v == vertex)


def enumerate_graph_perfect_matchings(graph: BipartiteGraph) -> list[tuple]:
    """All perfect matchings as sorted edge tuples, deterministically ordered."""
    if len(graph.left) != len(graph.right):
        return []
    adjacency: dict = {u: [] for u in graph.left}
    for u, v in sorted(graph.edges):
        adjacency[u].append(v)
    left = sorted(graph.left)
    out: list[tuple] = []
    used: set = set()
    chosen: list = []

    def search(i: int) -> None:
        if i == len(left):
            out.append(tuple(sorted(chosen)))
            return
        u = left[i]
        for v in adjacency[u]:
            if v in used:
                continue
            used.add(v)
            chosen.append((u, v))
            search(i + 1)
            chosen.pop()
            used.remove(v)

    search(0)
    out.sort()
    return out


def permanent2(matrix: Sequence[Sequence[RingValue]]) -> RingValue:
    """Ryser inclusion-exclusion with Gray-code column updates; n <= 20."""
    n = len(matrix)
    if n == 0:
        return 1
    if any(len(row) != n for row in matrix):
        raise ToolkitError("permanent needs a square matrix")
    if n > PERMANENT2_MAX_SIDE:
        raise GuardExceeded(f"Ryser guard is n <= {PERMANENT2_MAX_SIDE}, got {n}")
    row_sums: list[RingValue] = [0] * n
    total: RingValue = 0
    prev_gray = 0
    for counter in range(1, 1 << n):
        gray = counter ^ (counter >> 1)
        diff = gray ^ prev_gray
        col = diff.bit_length() - 1
        if gray & diff:
            for i in range(n):
                row_sums[i] = row_sums[i] + matrix[i][col]
        else:
            for i in range(n):
                row_sums[i] = row_sums[i] - matrix[i][col]
        prev_gray = gray
        product: RingValue = 1
        for value in row_sums:
            product = product * value
            if _is_zero(product):
                break
        if gray.bit_count() & 1:
            total = total - product
        else:
            total = total + product
    return total if n % 2 == 0 else -total


def determinant2(matrix: Sequence[Sequence[RingValue]]) -> RingValue:
    """Bareiss fraction-free elimination; exact over ints and fractions."""
    n = len(matrix)
    if n == 0:
        return 1
    if any(len(row) != n for row in matrix):
        raise ToolkitError("determinant needs a square matrix")
    a = [list(row) for row in matrix]
    sign = 1
    prev: RingValue = 1
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            pivot = next((r for r in range(k + 1, n) if not _is_zero(a[r][k])), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                numerator = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = _exact_div(numerator, prev)
            a[i][k] = 0
        prev = a[k][k]
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]


def _exact_div(x: RingValue, y: RingValue) -> RingValue:
    if isinstance(x, int) and isinstance(y, int):
        q, r = divmod(x, y)
        if r:
            raise ToolkitError("non-exact division in fraction-free elimination")
        return q
    return x / y  # fractions divide exactly


# -- projections and signings ------------------------------------------------------


@dataclass(frozen=True)
class ProjectionGraphs:
    """Supports of a 3-matrix along axes (0,1) and (0,2)."""

    g1: BipartiteGraph
    g2: BipartiteGraph


def projection_graphs(tensor: Tensor3) -> ProjectionGraphs:
    n = tensor.cube_side
    side = tuple(range(n))
    e1 = frozenset((i, j) for (i, j, _k) in tensor.entries)
    e2 = frozenset((i, k) for (i, _j, k) in tensor.entries)
    return ProjectionGraphs(
        g1=BipartiteGraph(side, side, e1),
        g2=BipartiteGraph(side, side, e2),
    )


EdgeSigning = dict


def apply_signing(tensor: Tensor3, sign1: Mapping, sign2: Mapping) -> Tensor3:
    """Entrywise resigning A'[a,b,c] = sign1[(a,b)] * sign2[(a,c)] * A[a,b,c]."""
    entries: dict[tuple[int, int, int], RingValue] = {}
    for (a, b, c), value in tensor.entries.items():
        if (a, b) not in sign1:
            raise ToolkitError(f"missing sign for projection edge ({a}, {b})")
        if (a, c) not in sign2:
            raise ToolkitError(f"missing sign for projection edge ({a}, {c})")
        s = sign1[(a, b)] * sign2[(a, c)]
        if s not in (1, -1):
            raise ToolkitError(f"signs must be +1 or -1, got {s}")
        entries[(a, b, c)] = value if s == 1 else -value
    return Tensor3(tensor.dims, entries)


def _spanning_forest(graph: BipartiteGraph) -> set:
    """Edges of a DFS spanning forest, deterministic in sorted order."""
    adjacency: dict = {}
    for u, v in sorted(graph.edges):
        adjacency.setdefault(("L", u), []).append((("R", v), (u, v)))
        adjacency.setdefault(("R", v), []).append((("L", u), (u, v)))
    seen: set = set()
    forest: set = set()
    for node in sorted(adjacency):
        if node in seen:
            continue
        stack = [node]
        seen.add(node)
        while stack:
            cur = stack.pop()
            for nxt, edge in adjacency[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    forest.add(edge)
                    stack.append(nxt)
    return forest


def find_pfaffian_signing(graph: BipartiteGraph) -> EdgeSigning | None:
    """A +-1 edge signing making det(signed biadjacency) equal the permanent.

    Exhaustive search over sign patterns, reduced by the vertex-flip gauge: a
    spanning forest is pinned to +1, only the remaining edges are enumerated,
    and an off-by-minus-one result is repaired by flipping one row.
    """
    edges = sorted(graph.edges)
    if len(edges) > SIGNING_MAX_EDGES:
        raise GuardExceeded(
            f"signing search guard is {SIGNING_MAX_EDGES} edges, got {len(edges)}"
        )
    nl, nr = len(graph.left), len(graph.right)
    side = max(nl, nr)
    base = [[0] * side for _ in range(side)]
    lpos = {u: i for i, u in enumerate(graph.left)}
    rpos = {v: j for j, v in enumerate(graph.right)}
    for u, v in edges:
        base[lpos[u]][rpos[v]] = 1
    target = permanent2(base)

    def det_with(signs: Mapping) -> RingValue:
        mat = [row[:] for row in base]
        for (u, v), s in signs.items():
            if s < 0:
                mat[lpos[u]][rpos[v]] = -1
        return determinant2(mat)

    if target == 0:
        signing = {e: 1 for e in edges}
        return signing  # every signing has determinant 0 as well

    forest = _spanning_forest(graph)
    free = [e for e in edges if e not in forest]
    for pattern in range(1 << len(free)):
        signing = {e: 1 for e in edges}
        for bit, e in enumerate(free):
            if (pattern >> bit) & 1:
                signing[e] = -1
        det = det_with(signing)
        if det == target:
            return signing
        if det == -target and graph.left:
            flip_row = graph.left[0]
            flipped = {
                e: (-s if e[0] == flip_row else s) for e, s in signing.items()
            }
            if det_with(flipped) == target:
                return flipped
    return None


def kasteleyn_sign_via_k1(
    tensor: Tensor3, threads: int = 1
) -> tuple[Tensor3, EdgeSigning, EdgeSigning] | None:
    """Resign via Pfaffian signings of both projection graphs, verified exactly.

    Returns None when either search fails; that is *not* a proof that no
    resigning exists, only that this sufficient condition did not apply.
    """
    graphs = projection_graphs(tensor)
    sign1 = find_pfaffian_signing(graphs.g1)
    if sign1 is None:
        return None
    sign2 = find_pfaffian_signing(graphs.g2)
    if sign2 is None:
        return None
    signed = apply_signing(tensor, sign1, sign2)
    if determinant3(signed, threads=threads) != permanent3(tensor, threads=threads):
        raise ToolkitError("resigning verification failed; this should be impossible")
    return signed, sign1, sign2


# -- Binet-Cauchy ------------------------------------------------------------------


@dataclass(frozen=True)
class RectMatrixTriple:
    """Three r x n exact matrices sharing a shape, r <= n."""

    a1: tuple[tuple[RingValue, ...], ...]
    a2: tuple[tuple[RingValue, ...], ...]
    a3: tuple[tuple[RingValue, ...], ...]

    def __post_init__(self):
        shapes = {(len(m), len(m[0]) if m else 0) for m in (self.a1, self.a2, self.a3)}
        if len(shapes) != 1:
            raise ToolkitError("matrices must share one shape")
        r, n = next(iter(shapes))
        for m in (self.a1, self.a2, self.a3):
            if any(len(row) != n for row in m):
                raise ToolkitError("ragged matrix")
        if r > n:
            raise ToolkitError(f"need r <= n, got {r} x {n}")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.a1), len(self.a1[0]) if self.a1 else 0

    @classmethod
    def from_rows(
        cls,
        a1: Sequence[Sequence[RingValue]],
        a2: Sequence[Sequence[RingValue]],
        a3: Sequence[Sequence[RingValue]],
    ) -> "RectMatrixTriple":
        freeze = lambda m: tuple(tuple(row) for row in m)
        return cls(freeze(a1), freeze(a2), freeze(a3))


def binet_cauchy_C(triple: RectMatrixTriple) -> Tensor3:
    """r x r x r tensor C[i1,i2,i3] = sum_j A1[i1,j] A2[i2,j] A3[i3,j]."""
    r, n = triple.shape
    entries: dict[tuple[int, int, int], RingValue] = {}
    for i1 in range(r):
        for i2 in range(r):
            for i3 in range(r):
                total: RingValue = 0
                for j in range(n):
                    total = total + triple.a1[i1][j] * triple.a2[i2][j] * triple.a3[i3][j]
                if not _is_zero(total):
                    entries[(i1, i2, i3)] = total
    return Tensor3((r, r, r), entries)


def binet_cauchy_rhs(triple: RectMatrixTriple) -> RingValue:
    """Sum over r-subsets I of Per(A1_I) * det(A2_I) * det(A3_I)."""
    r, n = triple.shape
    subsets = 1
    for i in range(r):
        subsets = subsets * (n - i) // (i + 1)
    if subsets > BINET_CAUCHY_MAX_SUBSETS:
        raise GuardExceeded(f"{subsets} column subsets exceed the guard")
    total: RingValue = 0
    for cols in itertools.combinations(range(n), r):
        sub = lambda m: [[m[i][j] for j in cols] for i in range(r)]
        total = total + permanent2(sub(triple.a1)) * determinant2(sub(triple.a2)) * determinant2(
            sub(triple.a3)
        )
    return total
