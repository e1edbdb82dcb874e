"""Triangular configurations: data model, validation and exact matching enumeration.

A configuration is a 2-complex whose maximal simplices are triangles or edges.
Edges are first-class opaque ids; vertex endpoints are optional per edge, so
purely combinatorial gadgets need no artificial vertices while vertex-level
constructions keep full incidence data.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from ._util import ordered_parallel_map
from .algebra import Polynomial, gf_p_nullspace, is_prime
from .errors import GuardExceeded, NotAMatching, SchemaError, ToolkitError

KERNEL_ENUM_MAX_CODEWORDS = 1 << 24


class TriangularConfiguration:
    """Immutable triangular configuration.

    `edges` maps edge id -> (u, v) endpoint pair or None; `triangles` maps
    triangle id -> triple of edge ids. Construction never rejects bad data;
    `validate` reports violations instead, so invalid inputs stay inspectable.
    """

    __slots__ = ("_vertices", "_edges", "_triangles", "_search_cache")

    def __init__(
        self,
        edges: Mapping[str, tuple[str, str] | None] | Iterable[str],
        triangles: Mapping[str, Sequence[str]] | None = None,
        vertices: Iterable[str] = (),
    ):
        if isinstance(edges, Mapping):
            edge_map = {
                str(e): (None if ends is None else tuple(sorted(str(x) for x in ends)))
                for e, ends in edges.items()
            }
        else:
            edge_map = {str(e): None for e in edges}
        for e, ends in edge_map.items():
            if ends is not None and len(ends) != 2:
                raise ToolkitError(f"edge {e!r} must have exactly two endpoints")
        tri_map = {
            str(t): tuple(sorted(str(e) for e in tri))
            for t, tri in (triangles or {}).items()
        }
        verts = set(str(v) for v in vertices)
        for ends in edge_map.values():
            if ends is not None:
                verts.update(ends)
        self._vertices = frozenset(verts)
        self._edges = edge_map
        self._triangles = tri_map
        self._search_cache: dict | None = None

    @property
    def vertices(self) -> frozenset[str]:
        return self._vertices

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._edges))

    @property
    def triangle_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._triangles))

    def edge_ends(self, edge: str) -> tuple[str, str] | None:
        return self._edges[edge]

    def has_edge(self, edge: str) -> bool:
        return edge in self._edges

    def has_triangle(self, triangle: str) -> bool:
        return triangle in self._triangles

    def triangle_edges(self, triangle: str) -> tuple[str, ...]:
        return self._triangles[triangle]

    def triangle_vertices(self, triangle: str) -> frozenset[str] | None:
        """Vertex triple of a triangle, or None when endpoint data is missing."""
        ends = [self._edges.get(e) for e in self._triangles[triangle]]
        if any(x is None for x in ends) or len(ends) != 3:
            return None
        verts: set[str] = set()
        for pair in ends:
            verts.update(pair)
        return frozenset(verts)

    @property
    def has_full_vertex_data(self) -> bool:
        return all(ends is not None for ends in self._edges.values())

    def relabeled(
        self,
        edge_map: Mapping[str, str] | None = None,
        triangle_map: Mapping[str, str] | None = None,
        vertex_map: Mapping[str, str] | None = None,
    ) -> "TriangularConfiguration":
        em = edge_map or {}
        tm = triangle_map or {}
        vm = vertex_map or {}
        edges = {
            em.get(e, e): (None if ends is None else (vm.get(ends[0], ends[0]), vm.get(ends[1], ends[1])))
            for e, ends in self._edges.items()
        }
        triangles = {
            tm.get(t, t): tuple(em.get(e, e) for e in tri)
            for t, tri in self._triangles.items()
        }
        vertices = {vm.get(v, v) for v in self._vertices}
        return TriangularConfiguration(edges, triangles, vertices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriangularConfiguration):
            return NotImplemented
        return (
            self._vertices == other._vertices
            and self._edges == other._edges
            and self._triangles == other._triangles
        )

    def __repr__(self) -> str:
        return (
            f"TriangularConfiguration(|V|={len(self._vertices)}, "
            f"|E|={len(self._edges)}, |T|={len(self._triangles)})"
        )

    # -- JSON document form -------------------------------------------------

    def to_doc(self) -> dict:
        edges = []
        for e in self.edge_ids:
            ends = self._edges[e]
            entry: dict = {"id": e}
            if ends is not None:
                entry["ends"] = list(ends)
            edges.append(entry)
        return {
            "vertices": sorted(self._vertices),
            "edges": edges,
            "triangles": [
                {"id": t, "edges": list(self._triangles[t])} for t in self.triangle_ids
            ],
        }

    @classmethod
    def from_doc(cls, doc: Mapping) -> "TriangularConfiguration":
        config, _, _, _ = parse_config_doc(doc)
        return config


def parse_config_doc(
    doc: Mapping,
) -> tuple[TriangularConfiguration, dict[str, int] | None, dict[str, int] | None, dict[str, int] | None]:
    """Parse the shared JSON document form.

    Returns (config, weights, edge_classes, vertex_classes); the last three are
    None when the corresponding optional key is absent.
    """
    if not isinstance(doc, Mapping):
        raise SchemaError("configuration document must be an object")
    try:
        edges: dict[str, tuple[str, str] | None] = {}
        for entry in doc.get("edges", []):
            eid = str(entry["id"])
            if eid in edges:
                raise SchemaError(f"duplicate edge id {eid!r}")
            ends = entry.get("ends")
            edges[eid] = None if ends is None else (str(ends[0]), str(ends[1]))
        triangles: dict[str, Sequence[str]] = {}
        for entry in doc.get("triangles", []):
            tid = str(entry["id"])
            if tid in triangles:
                raise SchemaError(f"duplicate triangle id {tid!r}")
            triangles[tid] = [str(e) for e in entry["edges"]]
        vertices = [str(v) for v in doc.get("vertices", [])]
    except (KeyError, TypeError, IndexError) as exc:
        raise SchemaError(f"bad configuration document: {exc}") from exc
    config = TriangularConfiguration(edges, triangles, vertices)

    def _class_map(key: str) -> dict[str, int] | None:
        if key not in doc:
            return None
        if not isinstance(doc[key], Mapping):
            raise SchemaError(f"{key} must be an object")
        out = {}
        for k, v in doc[key].items():
            v = int(v)
            if v not in (1, 2, 3):
                raise SchemaError(f"{key}[{k!r}] must be 1, 2 or 3")
            out[str(k)] = v
        return out

    weights = None
    if "weights" in doc:
        if not isinstance(doc["weights"], Mapping):
            raise SchemaError("weights must be an object")
        weights = {str(k): int(v) for k, v in doc["weights"].items()}
    return config, weights, _class_map("edge_classes"), _class_map("vertex_classes")


def build_config_doc(
    config: TriangularConfiguration,
    weights: Mapping[str, int] | None = None,
    edge_classes: Mapping[str, int] | None = None,
    vertex_classes: Mapping[str, int] | None = None,
) -> dict:
    doc = config.to_doc()
    if weights is not None:
        doc["weights"] = {k: int(weights[k]) for k in sorted(weights)}
    if edge_classes is not None:
        doc["edge_classes"] = {k: int(edge_classes[k]) for k in sorted(edge_classes)}
    if vertex_classes is not None:
        doc["vertex_classes"] = {k: int(vertex_classes[k]) for k in sorted(vertex_classes)}
    return doc


# -- validation --------------------------------------------------------------


def validate(config: TriangularConfiguration) -> list[str]:
    """Invariant violations as human-readable strings; empty iff the complex is valid."""
    violations: list[str] = []
    seen_triples: dict[tuple[str, ...], str] = {}
    tri_ids = config.triangle_ids
    for t in tri_ids:
        tri = config.triangle_edges(t)
        if len(set(tri)) != len(tri) or len(tri) != 3:
            violations.append(f"triangle {t!r} has repeated or missing edges {tri}")
            continue
        for e in tri:
            if not config.has_edge(e):
                violations.append(f"triangle {t!r} references dangling edge {e!r}")
        if tri in seen_triples:
            violations.append(
                f"triangles {seen_triples[tri]!r} and {t!r} share the edge triple {tri}"
            )
        else:
            seen_triples[tri] = t
    # two triangles sharing two edges cannot intersect in a single face
    for i, t1 in enumerate(tri_ids):
        e1 = set(config.triangle_edges(t1))
        for t2 in tri_ids[i + 1 :]:
            common = e1.intersection(config.triangle_edges(t2))
            if len(common) == 2:
                violations.append(
                    f"triangles {t1!r} and {t2!r} share two edges {sorted(common)}"
                )
    for e in config.edge_ids:
        ends = config.edge_ends(e)
        if ends is None:
            continue
        if ends[0] == ends[1]:
            violations.append(f"edge {e!r} is a loop on vertex {ends[0]!r}")
        for v in ends:
            if v not in config.vertices:
                violations.append(f"edge {e!r} references dangling vertex {v!r}")
    # vertex-level simplicial condition, checked per triangle when data exists
    for t in tri_ids:
        tri = config.triangle_edges(t)
        if len(set(tri)) != 3:
            continue
        pairs = [config.edge_ends(e) for e in tri if config.has_edge(e)]
        if len(pairs) != 3 or any(p is None for p in pairs):
            continue
        shared = []
        ok = True
        for a in range(3):
            for b in range(a + 1, 3):
                common = set(pairs[a]) & set(pairs[b])
                if len(common) != 1:
                    violations.append(
                        f"triangle {t!r}: edges {tri[a]!r}, {tri[b]!r} share "
                        f"{len(common)} vertices (expected 1)"
                    )
                    ok = False
                else:
                    shared.extend(common)
        if ok and len(set(shared)) != 3:
            violations.append(f"triangle {t!r} does not span three distinct vertices")
    return violations


# -- matchings and defects ----------------------------------------------------


class _SearchIndex:
    """Bitmask indexes shared by the enumeration routines (built once per config)."""

    def __init__(self, config: TriangularConfiguration):
        self.edge_ids = config.edge_ids
        self.edge_pos = {e: i for i, e in enumerate(self.edge_ids)}
        self.tri_ids = config.triangle_ids
        self.tri_pos = {t: i for i, t in enumerate(self.tri_ids)}
        self.tri_masks: list[int] = []
        self.edge_tris: list[list[int]] = [[] for _ in self.edge_ids]
        for ti, t in enumerate(self.tri_ids):
            mask = 0
            for e in config.triangle_edges(t):
                pos = self.edge_pos[e]
                mask |= 1 << pos
                self.edge_tris[pos].append(ti)
            self.tri_masks.append(mask)
        self.full_mask = (1 << len(self.edge_ids)) - 1

        self.vertex_ids = tuple(sorted(config.vertices))
        self.vertex_pos = {v: i for i, v in enumerate(self.vertex_ids)}
        self.tri_vertex_masks: list[int] | None
        if config.has_full_vertex_data:
            masks = []
            for t in self.tri_ids:
                verts = config.triangle_vertices(t)
                mask = 0
                for v in verts or ():
                    mask |= 1 << self.vertex_pos[v]
                masks.append(mask)
            self.tri_vertex_masks = masks
        else:
            self.tri_vertex_masks = None
        self.full_vertex_mask = (1 << len(self.vertex_ids)) - 1

    def edges_of_mask(self, mask: int) -> frozenset[str]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.edge_ids[low.bit_length() - 1])
            mask ^= low
        return frozenset(out)


def _index(config: TriangularConfiguration) -> _SearchIndex:
    if config._search_cache is None:
        config._search_cache = {"index": _SearchIndex(config)}
    return config._search_cache["index"]


def is_matching(config: TriangularConfiguration, triangles: Iterable[str]) -> bool:
    idx = _index(config)
    used = 0
    for t in triangles:
        if t not in idx.tri_pos:
            raise ToolkitError(f"unknown triangle {t!r}")
        mask = idx.tri_masks[idx.tri_pos[t]]
        if used & mask:
            return False
        used |= mask
    return True


def defect(config: TriangularConfiguration, matching: Iterable[str]) -> frozenset[str]:
    """Edges of the configuration covered by no triangle of the matching."""
    idx = _index(config)
    covered = 0
    for t in matching:
        if t not in idx.tri_pos:
            raise ToolkitError(f"unknown triangle {t!r}")
        mask = idx.tri_masks[idx.tri_pos[t]]
        if covered & mask:
            raise NotAMatching(f"triangle {t!r} shares an edge with the rest")
        covered |= mask
    return idx.edges_of_mask(idx.full_mask & ~covered)


def enumerate_matchings_with_defect_within(
    config: TriangularConfiguration,
    allowed: Iterable[str],
    threads: int = 1,
) -> list[tuple[str, ...]]:
    """All matchings whose defect is contained in `allowed`, canonically ordered.

    Every edge outside `allowed` must be covered; edges inside it may or may
    not be. Perfect matchings are the special case `allowed = ()`. Branching
    picks the uncovered required edge with the fewest usable triangles.
    """
    idx = _index(config)
    allowed_mask = 0
    for e in allowed:
        if e not in idx.edge_pos:
            raise ToolkitError(f"unknown edge {e!r}")
        allowed_mask |= 1 << idx.edge_pos[e]
    required = idx.full_mask & ~allowed_mask
    masks = idx.tri_masks
    edge_tris = idx.edge_tris
    ntri = len(masks)
    results: list[tuple[int, ...]] = []

    def optional_extend(start: int, covered: int, chosen: list[int], out: list) -> None:
        out.append(tuple(chosen))
        for ti in range(start, ntri):
            if masks[ti] & covered == 0:
                chosen.append(ti)
                optional_extend(ti + 1, covered | masks[ti], chosen, out)
                chosen.pop()

    def pick_required_edge(covered: int) -> tuple[int, list[int]] | None:
        remaining = required & ~covered
        if remaining == 0:
            return None
        best: tuple[int, list[int]] | None = None
        while remaining:
            low = remaining & -remaining
            pos = low.bit_length() - 1
            remaining ^= low
            cands = [ti for ti in edge_tris[pos] if masks[ti] & covered == 0]
            if best is None or len(cands) < len(best[1]):
                best = (pos, cands)
                if len(cands) <= 1:
                    break
        return best

    def cover_required(covered: int, chosen: list[int], out: list) -> None:
        pick = pick_required_edge(covered)
        if pick is None:
            optional_extend(0, covered, chosen, out)
            return
        _, cands = pick
        for ti in cands:
            chosen.append(ti)
            cover_required(covered | masks[ti], chosen, out)
            chosen.pop()

    root_pick = pick_required_edge(0)
    if threads > 1 and root_pick is not None and len(root_pick[1]) > 1:
        def run_branch(ti: int) -> list[tuple[int, ...]]:
            out: list[tuple[int, ...]] = []
            cover_required(masks[ti], [ti], out)
            return out

        for branch in ordered_parallel_map(run_branch, root_pick[1], threads):
            results.extend(branch)
    else:
        cover_required(0, [], results)

    named = [tuple(sorted(idx.tri_ids[ti] for ti in match)) for match in results]
    named.sort()
    return named


def perfect_matchings(config: TriangularConfiguration, threads: int = 1) -> list[tuple[str, ...]]:
    return enumerate_matchings_with_defect_within(config, (), threads=threads)


def matching_weight(matching: Iterable[str], weighting: Mapping[str, int] | None) -> int:
    if weighting is None:
        return sum(1 for _ in matching)
    return sum(int(weighting.get(t, 1)) for t in matching)


def perfect_matching_polynomial(
    config: TriangularConfiguration,
    weighting: Mapping[str, int] | None = None,
    threads: int = 1,
) -> Polynomial:
    """Generating polynomial sum of x^(total weight) over perfect matchings."""
    coeffs: dict[int, int] = {}
    for matching in perfect_matchings(config, threads=threads):
        w = matching_weight(matching, weighting)
        coeffs[w] = coeffs.get(w, 0) + 1
    return Polynomial(coeffs)


def enumerate_perfect_strong_matchings(
    config: TriangularConfiguration, threads: int = 1
) -> list[tuple[str, ...]]:
    """All sets of pairwise vertex-disjoint triangles covering every vertex."""
    if not config.has_full_vertex_data:
        raise ToolkitError("perfect strong matchings need vertex data on every edge")
    idx = _index(config)
    vmasks = idx.tri_vertex_masks
    assert vmasks is not None
    nverts = len(idx.vertex_ids)
    vertex_tris: list[list[int]] = [[] for _ in range(nverts)]
    for ti, mask in enumerate(vmasks):
        m = mask
        while m:
            low = m & -m
            vertex_tris[low.bit_length() - 1].append(ti)
            m ^= low
    full = idx.full_vertex_mask
    results: list[tuple[int, ...]] = []

    def pick_vertex(covered: int) -> tuple[int, list[int]] | None:
        remaining = full & ~covered
        if remaining == 0:
            return None
        best: tuple[int, list[int]] | None = None
        while remaining:
            low = remaining & -remaining
            pos = low.bit_length() - 1
            remaining ^= low
            cands = [ti for ti in vertex_tris[pos] if vmasks[ti] & covered == 0]
            if best is None or len(cands) < len(best[1]):
                best = (pos, cands)
                if len(cands) <= 1:
                    break
        return best

    def search(covered: int, chosen: list[int], out: list) -> None:
        pick = pick_vertex(covered)
        if pick is None:
            out.append(tuple(chosen))
            return
        for ti in pick[1]:
            chosen.append(ti)
            search(covered | vmasks[ti], chosen, out)
            chosen.pop()

    root = pick_vertex(0)
    if threads > 1 and root is not None and len(root[1]) > 1:
        def run_branch(ti: int) -> list[tuple[int, ...]]:
            out: list[tuple[int, ...]] = []
            search(vmasks[ti], [ti], out)
            return out

        for branch in ordered_parallel_map(run_branch, root[1], threads):
            results.extend(branch)
    else:
        search(0, [], results)

    named = [tuple(sorted(idx.tri_ids[ti] for ti in match)) for match in results]
    named.sort()
    return named


# -- tripartitions -------------------------------------------------------------


def _rainbow_csp(
    items: Sequence[str],
    triples: Sequence[tuple[str, str, str]],
    pins: Mapping[str, int] | None,
) -> dict[str, int] | None:
    """Exhaustive 3-coloring where each triple must see all three classes.

    Unit propagation (two assigned members force the third) plus
    smallest-domain-first branching; deterministic, complete search.
    """
    order = {item: i for i, item in enumerate(items)}
    mates: dict[str, list[tuple[str, str]]] = {item: [] for item in items}
    for a, b, c in triples:
        mates[a].append((b, c))
        mates[b].append((a, c))
        mates[c].append((a, b))
    domains: dict[str, set[int]] = {item: {1, 2, 3} for item in items}
    for item, cls in (pins or {}).items():
        if item not in domains:
            raise ToolkitError(f"pin on unknown item {item!r}")
        if cls not in (1, 2, 3):
            raise ToolkitError(f"pin class {cls} must be 1, 2 or 3")
        domains[item] = {cls}

    assignment: dict[str, int] = {}
    # trail entries: (item, previous domain, whether this step assigned the item)
    Trail = list[tuple[str, set[int], bool]]

    def assign(item: str, cls: int, trail: Trail) -> bool:
        """Set item=cls and propagate pairwise-distinctness; False on wipeout."""
        queue = [(item, cls)]
        while queue:
            cur, val = queue.pop()
            if cur in assignment:
                if assignment[cur] != val:
                    return False
                continue
            if val not in domains[cur]:
                return False
            trail.append((cur, domains[cur], True))
            domains[cur] = {val}
            assignment[cur] = val
            for x, y in mates[cur]:
                for other in (x, y):
                    if other in assignment:
                        if assignment[other] == val:
                            return False
                    elif val in domains[other]:
                        trail.append((other, set(domains[other]), False))
                        domains[other] = domains[other] - {val}
                        if not domains[other]:
                            return False
                        if len(domains[other]) == 1:
                            queue.append((other, next(iter(domains[other]))))
        return True

    def undo(trail: Trail, mark: int) -> None:
        while len(trail) > mark:
            item, dom, was_assigned = trail.pop()
            if was_assigned:
                assignment.pop(item, None)
            domains[item] = dom

    def pick() -> str | None:
        best = None
        for item in items:
            if item in assignment:
                continue
            size = len(domains[item])
            if best is None or size < best[0]:
                best = (size, order[item], item)
                if size == 1:
                    break
        return best[2] if best else None

    trail: Trail = []
    # seed pinned singletons through propagation
    for item in items:
        if len(domains[item]) == 1 and item not in assignment:
            if not assign(item, next(iter(domains[item])), trail):
                return None

    def search() -> bool:
        item = pick()
        if item is None:
            return True
        for cls in sorted(domains[item]):
            mark = len(trail)
            if assign(item, cls, trail) and search():
                return True
            undo(trail, mark)
        return False

    if not search():
        return None
    return {item: assignment[item] for item in items}


def find_edge_tripartition(
    config: TriangularConfiguration, pins: Mapping[str, int] | None = None
) -> dict[str, int] | None:
    """Total edge 3-classing with every triangle rainbow, or None if impossible."""
    triples = []
    for t in config.triangle_ids:
        tri = config.triangle_edges(t)
        if len(set(tri)) != 3:
            return None
        triples.append(tuple(tri))
    return _rainbow_csp(config.edge_ids, triples, pins)  # type: ignore[arg-type]


def find_vertex_tripartition(
    config: TriangularConfiguration, pins: Mapping[str, int] | None = None
) -> dict[str, int] | None:
    """Total vertex 3-classing with every triangle rainbow, or None if impossible."""
    items = tuple(sorted(config.vertices))
    triples = []
    for t in config.triangle_ids:
        verts = config.triangle_vertices(t)
        if verts is None or len(verts) != 3:
            raise ToolkitError(f"triangle {t!r} lacks vertex data")
        triples.append(tuple(sorted(verts)))
    return _rainbow_csp(items, triples, pins)  # type: ignore[arg-type]


def check_edge_tripartition(
    config: TriangularConfiguration, classes: Mapping[str, int]
) -> list[str]:
    """Violations of the edge-tripartition invariant (total + rainbow)."""
    problems = []
    for e in config.edge_ids:
        if classes.get(e) not in (1, 2, 3):
            problems.append(f"edge {e!r} has no class")
    for t in config.triangle_ids:
        seen = sorted(classes.get(e, 0) for e in config.triangle_edges(t))
        if seen != [1, 2, 3]:
            problems.append(f"triangle {t!r} has classes {seen}")
    return problems


def check_vertex_tripartition(
    config: TriangularConfiguration, classes: Mapping[str, int]
) -> list[str]:
    problems = []
    for v in sorted(config.vertices):
        if classes.get(v) not in (1, 2, 3):
            problems.append(f"vertex {v!r} has no class")
    for t in config.triangle_ids:
        verts = config.triangle_vertices(t)
        if verts is None:
            problems.append(f"triangle {t!r} lacks vertex data")
            continue
        seen = sorted(classes.get(v, 0) for v in verts)
        if seen != [1, 2, 3]:
            problems.append(f"triangle {t!r} has vertex classes {seen}")
    return problems


# -- composition ---------------------------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def add(self, x: str) -> None:
        self.parent.setdefault(x, x)

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the lexicographically smallest id as representative
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def compose(
    configs: Sequence[TriangularConfiguration],
    identifications: Iterable[tuple[str, str]] = (),
) -> TriangularConfiguration:
    """Disjoint union followed by a quotient on identified edges.

    Component ids are namespaced as `"{index}:{id}"`; identification pairs
    reference those namespaced edge ids and may chain (equivalence closure).
    Endpoint pairs of identified edges, when present, are unified greedily
    (existing unions choose the orientation, otherwise sorted order).
    The result must pass `validate`, otherwise this raises.
    """
    edges: dict[str, tuple[str, str] | None] = {}
    triangles: dict[str, tuple[str, ...]] = {}
    vertices: set[str] = set()
    for i, cfg in enumerate(configs):
        for e in cfg.edge_ids:
            ends = cfg.edge_ends(e)
            edges[f"{i}:{e}"] = None if ends is None else (f"{i}:{ends[0]}", f"{i}:{ends[1]}")
        for t in cfg.triangle_ids:
            triangles[f"{i}:{t}"] = tuple(f"{i}:{e}" for e in cfg.triangle_edges(t))
        vertices.update(f"{i}:{v}" for v in cfg.vertices)

    euf = _UnionFind()
    vuf = _UnionFind()
    for e in edges:
        euf.add(e)
    for v in vertices:
        vuf.add(v)

    for a, b in identifications:
        if a not in edges or b not in edges:
            raise ToolkitError(f"identification references unknown edge: {a!r} or {b!r}")
        if a == b:
            raise ToolkitError(f"cannot identify edge {a!r} with itself")
        euf.union(a, b)
        ea, eb = edges[a], edges[b]
        if ea is not None and eb is not None:
            u1, u2 = ea
            w1, w2 = eb
            ru1, ru2 = vuf.find(u1), vuf.find(u2)
            rw1, rw2 = vuf.find(w1), vuf.find(w2)
            if ru1 == rw2 or ru2 == rw1:
                vuf.union(u1, w2)
                vuf.union(u2, w1)
            else:
                vuf.union(u1, w1)
                vuf.union(u2, w2)

    new_edges: dict[str, tuple[str, str] | None] = {}
    for e, ends in edges.items():
        rep = euf.find(e)
        mapped = None
        if ends is not None:
            va, vb = vuf.find(ends[0]), vuf.find(ends[1])
            if va == vb:
                raise ToolkitError(
                    f"inconsistent vertex unification collapses edge {e!r}"
                )
            mapped = (va, vb)
        if rep in new_edges:
            prev = new_edges[rep]
            if prev is None:
                new_edges[rep] = mapped
            elif mapped is not None and set(prev) != set(mapped):
                raise ToolkitError(
                    f"inconsistent vertex unification on identified edge {rep!r}"
                )
        else:
            new_edges[rep] = mapped

    new_triangles: dict[str, tuple[str, ...]] = {}
    for t, tri in triangles.items():
        mapped_tri = tuple(sorted(euf.find(e) for e in tri))
        if len(set(mapped_tri)) != 3:
            raise ToolkitError(
                f"identification creates triangle {t!r} with repeated edges"
            )
        new_triangles[t] = mapped_tri

    new_vertices = {vuf.find(v) for v in vertices}
    result = TriangularConfiguration(new_edges, new_triangles, new_vertices)
    problems = validate(result)
    if problems:
        raise ToolkitError("composition is not a valid configuration: " + "; ".join(problems))
    return result


# -- cycle space ---------------------------------------------------------------


def incidence_matrix(config: TriangularConfiguration) -> tuple[list[list[int]], tuple[str, ...], tuple[str, ...]]:
    """0/1 incidence of edges (rows) against triangles (columns), both sorted."""
    edge_ids = config.edge_ids
    tri_ids = config.triangle_ids
    pos = {e: i for i, e in enumerate(edge_ids)}
    rows = [[0] * len(tri_ids) for _ in edge_ids]
    for j, t in enumerate(tri_ids):
        for e in config.triangle_edges(t):
            rows[pos[e]][j] = 1
    return rows, edge_ids, tri_ids


def cycle_space_weight_enumerator(config: TriangularConfiguration, p: int) -> Polynomial:
    """Weight enumerator of the GF(p) kernel of the incidence matrix.

    Computed by nullspace basis then full enumeration of all p^dim codewords;
    guarded, not truncated, when that count is too large.
    """
    if not is_prime(p):
        raise ToolkitError(f"{p} is not prime")
    rows, _, tri_ids = incidence_matrix(config)
    ncols = len(tri_ids)
    basis = gf_p_nullspace(rows, ncols, p)
    dim = len(basis)
    if p**dim > KERNEL_ENUM_MAX_CODEWORDS:
        raise GuardExceeded(
            f"kernel has {p}^{dim} codewords, beyond the enumeration guard"
        )
    if dim == 0:
        return Polynomial({0: 1})
    counts: dict[int, int] = {}
    if p == 2:
        masks = []
        for vec in basis:
            mask = 0
            for j, v in enumerate(vec):
                if v:
                    mask |= 1 << j
            masks.append(mask)
        word = 0
        counts[0] = 1
        for i in range(1, 1 << dim):
            flip = (i & -i).bit_length() - 1
            word ^= masks[flip]
            w = word.bit_count()
            counts[w] = counts.get(w, 0) + 1
    else:
        coeffs = [0] * dim
        vec = [0] * ncols
        counts[0] = 1
        total = p**dim
        for _ in range(1, total):
            # odometer increment over coefficient vectors
            k = 0
            while True:
                coeffs[k] += 1
                for j in range(ncols):
                    vec[j] = (vec[j] + basis[k][j]) % p
                if coeffs[k] < p:
                    break
                coeffs[k] = 0
                k += 1
            w = sum(1 for v in vec if v)
            counts[w] = counts.get(w, 0) + 1
    return Polynomial(counts)
