"""Certified building blocks for the matching-preserving tripartite reduction.

The three shipped constructions (tunnel band, five-triangle sphere piece,
and their composition into the triangle-linking block) are octahedron-based
candidates defined purely at the edge level. Nothing downstream relies on
their particular shape: each carries a certification suite that re-proves
the required matching and tripartition properties by exhaustive enumeration,
and any construction passing the suite would do.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .algebra import Polynomial
from .core import (
    TriangularConfiguration,
    build_config_doc,
    check_edge_tripartition,
    compose,
    defect,
    enumerate_matchings_with_defect_within,
    find_edge_tripartition,
    perfect_matchings,
    validate,
)
from .errors import CertificationError, ToolkitError


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_doc(self) -> dict:
        doc = {"name": self.name, "passed": self.passed}
        if self.detail:
            doc["detail"] = self.detail
        return doc


@dataclass(frozen=True)
class Gadget:
    """A configuration with labeled end triples and a re-runnable certificate.

    `matchings` holds the distinguished matchings the suite pins down (for the
    tunnel: one per end-triple defect; for the others: the unique perfect
    matching and the unique all-ends-defect matching). `edge_classes` is a
    tripartition with every end triple monochromatic.
    """

    config: TriangularConfiguration
    ends: tuple[tuple[str, str, str], ...]
    matchings: dict[str, tuple[str, ...]] = field(default_factory=dict)
    edge_classes: dict[str, int] = field(default_factory=dict)
    certificate: tuple[CheckResult, ...] = ()

    def end_edge_union(self) -> tuple[str, ...]:
        return tuple(sorted(e for triple in self.ends for e in triple))

    def to_doc(self) -> dict:
        doc = build_config_doc(self.config, edge_classes=self.edge_classes or None)
        doc["ends"] = [list(triple) for triple in self.ends]
        return doc

    def certificate_doc(self) -> list[dict]:
        return [check.to_doc() for check in self.certificate]


def _end_structure_checks(gadget: Gadget) -> list[CheckResult]:
    problems = []
    seen: set[str] = set()
    triples = {
        tuple(sorted(gadget.config.triangle_edges(t)))
        for t in gadget.config.triangle_ids
    }
    for triple in gadget.ends:
        if len(set(triple)) != 3:
            problems.append(f"end {triple} has repeated edges")
        for e in triple:
            if not gadget.config.has_edge(e):
                problems.append(f"end edge {e!r} missing from configuration")
            if e in seen:
                problems.append(f"end edge {e!r} appears in two end triples")
            seen.add(e)
        if tuple(sorted(triple)) in triples:
            problems.append(f"end {triple} is filled by a triangle")
    ok = not problems
    return [CheckResult("ends_are_disjoint_empty_triangles", ok, "; ".join(problems))]


def _tripartition_checks(
    gadget: Gadget, pins: Mapping[str, int], name: str, expect_sizes: tuple[int, ...] | None = None
) -> list[CheckResult]:
    checks = []
    stored_problems = check_edge_tripartition(gadget.config, gadget.edge_classes)
    checks.append(
        CheckResult("stored_tripartition_valid", not stored_problems, "; ".join(stored_problems))
    )
    found = find_edge_tripartition(gadget.config, pins=pins)
    detail = ""
    ok = found is not None
    if found is not None:
        leftover = check_edge_tripartition(gadget.config, found)
        if leftover:
            ok = False
            detail = "; ".join(leftover)
        elif expect_sizes is not None:
            sizes = tuple(sorted(sum(1 for v in found.values() if v == cls) for cls in (1, 2, 3)))
            if sizes != tuple(sorted(expect_sizes)):
                ok = False
                detail = f"class sizes {sizes} != expected {tuple(sorted(expect_sizes))}"
    else:
        detail = "no tripartition extends the pins"
    checks.append(CheckResult(name, ok, detail))
    return checks


def _finish(kind: str, gadget: Gadget, checks: list[CheckResult]) -> Gadget:
    failed = [c for c in checks if not c.passed]
    if failed:
        raise CertificationError(
            f"{kind} failed certification: "
            + "; ".join(f"{c.name}: {c.detail}" for c in failed)
        )
    return Gadget(
        config=gadget.config,
        ends=gadget.ends,
        matchings=gadget.matchings,
        edge_classes=gadget.edge_classes,
        certificate=tuple(checks),
    )


# -- tunnel ---------------------------------------------------------------------


def _tunnel_uncertified() -> Gadget:
    """Antiprism band: an octahedron surface minus two opposite faces."""
    edges = ["a1", "b1", "c1", "a2", "b2", "c2"] + [f"d{i}" for i in range(1, 7)]
    triangles = {
        "up1": ("a1", "d1", "d2"),
        "dn1": ("a2", "d2", "d3"),
        "up2": ("b1", "d3", "d4"),
        "dn2": ("b2", "d4", "d5"),
        "up3": ("c1", "d5", "d6"),
        "dn3": ("c2", "d6", "d1"),
    }
    config = TriangularConfiguration(edges, triangles)
    classes = {e: 1 for e in ("a1", "b1", "c1", "a2", "b2", "c2")}
    classes.update({f"d{i}": (2 if i % 2 else 3) for i in range(1, 7)})
    return Gadget(
        config=config,
        ends=(("a1", "b1", "c1"), ("a2", "b2", "c2")),
        matchings={
            "defect_end1": ("dn1", "dn2", "dn3"),
            "defect_end2": ("up1", "up2", "up3"),
        },
        edge_classes=classes,
    )


def certify_tunnel(gadget: Gadget, threads: int = 1) -> list[CheckResult]:
    checks = _end_structure_checks(gadget)
    found = enumerate_matchings_with_defect_within(
        gadget.config, gadget.end_edge_union(), threads=threads
    )
    expected = sorted(
        [tuple(sorted(gadget.matchings["defect_end1"])), tuple(sorted(gadget.matchings["defect_end2"]))]
    )
    checks.append(
        CheckResult(
            "exactly_two_matchings_within_ends",
            found == expected,
            f"found {len(found)} matchings with defect inside the end edges",
        )
    )
    defects_ok = all(
        defect(gadget.config, gadget.matchings[f"defect_end{i}"]) == frozenset(gadget.ends[i - 1])
        for i in (1, 2)
    )
    checks.append(
        CheckResult(
            "defects_are_exactly_the_end_triples",
            defects_ok,
            "each distinguished matching leaves exactly one full end uncovered",
        )
    )
    pins = {e: 1 for triple in gadget.ends for e in triple}
    checks.extend(
        _tripartition_checks(
            gadget, pins, "tripartite_with_monochromatic_ends", expect_sizes=(6, 3, 3)
        )
    )
    return checks


def make_tunnel(certify: bool = True, threads: int = 1) -> Gadget:
    gadget = _tunnel_uncertified()
    if not certify:
        return gadget
    return _finish("tunnel", gadget, certify_tunnel(gadget, threads=threads))


# -- five-triangle sphere piece ----------------------------------------------------


def _s5_uncertified() -> Gadget:
    """Octahedron surface with five faces filled and three left as ends."""
    edges = ["a", "b", "c", "ap", "bp", "cp"] + [f"d{i}" for i in range(1, 7)]
    triangles = {
        "t1": ("a", "d1", "d2"),
        "t2": ("b", "d3", "d4"),
        "t3": ("a", "b", "c"),
        "t4": ("c", "d5", "d6"),
        "t5": ("ap", "bp", "cp"),
    }
    config = TriangularConfiguration(edges, triangles)
    classes = {
        "a": 2, "b": 3, "c": 1,
        "ap": 1, "d2": 1, "d3": 1,
        "bp": 2, "d4": 2, "d5": 2,
        "cp": 3, "d1": 3, "d6": 3,
    }
    return Gadget(
        config=config,
        ends=(("ap", "d2", "d3"), ("bp", "d4", "d5"), ("cp", "d1", "d6")),
        matchings={
            "perfect": ("t1", "t2", "t4", "t5"),
            "all_ends_defect": ("t3",),
        },
        edge_classes=classes,
    )


def certify_s5(gadget: Gadget, threads: int = 1) -> list[CheckResult]:
    checks = _end_structure_checks(gadget)
    perfect = perfect_matchings(gadget.config, threads=threads)
    checks.append(
        CheckResult(
            "unique_perfect_matching_of_size_4",
            perfect == [tuple(sorted(gadget.matchings["perfect"]))]
            and len(gadget.matchings["perfect"]) == 4,
            f"found {len(perfect)} perfect matchings",
        )
    )
    end_union = frozenset(gadget.end_edge_union())
    within = enumerate_matchings_with_defect_within(
        gadget.config, end_union, threads=threads
    )
    full_defect = [m for m in within if defect(gadget.config, m) == end_union]
    checks.append(
        CheckResult(
            "unique_matching_with_defect_on_all_ends",
            full_defect == [tuple(sorted(gadget.matchings["all_ends_defect"]))]
            and len(gadget.matchings["all_ends_defect"]) == 1,
            f"found {len(full_defect)} matchings with defect on all nine end edges",
        )
    )
    pins: dict[str, int] = {}
    for cls, triple in enumerate(gadget.ends, start=1):
        for e in triple:
            pins[e] = cls
    checks.extend(
        _tripartition_checks(gadget, pins, "tripartite_with_ends_in_distinct_classes")
    )
    return checks


def make_s5(certify: bool = True, threads: int = 1) -> Gadget:
    gadget = _s5_uncertified()
    if not certify:
        return gadget
    return _finish("s5", gadget, certify_s5(gadget, threads=threads))


# -- matching triangular triangle ---------------------------------------------------


def _mtt_uncertified() -> Gadget:
    """Compose the sphere piece with three tunnels, one per end."""
    s5 = _s5_uncertified()
    tunnels = [_tunnel_uncertified() for _ in range(3)]
    components = [s5.config] + [t.config for t in tunnels]
    identifications = []
    for i, end in enumerate(s5.ends, start=1):
        inner = sorted(tunnels[i - 1].ends[0])
        for s5_edge, tunnel_edge in zip(sorted(end), inner):
            identifications.append((f"0:{s5_edge}", f"{i}:{tunnel_edge}"))
    composed = compose(components, identifications)

    edge_map: dict[str, str] = {}
    for e in s5.config.edge_ids:
        edge_map[f"0:{e}"] = f"s5:{e}"
    outer = {"a2": "a", "b2": "b", "c2": "c"}
    for i in (1, 2, 3):
        for k in range(1, 7):
            edge_map[f"{i}:d{k}"] = f"t{i}:d{k}"
        for old, new in outer.items():
            edge_map[f"{i}:{old}"] = f"end{i}:{new}"
    triangle_map = {f"0:{t}": f"s5:{t}" for t in s5.config.triangle_ids}
    for i in (1, 2, 3):
        for t in tunnels[i - 1].config.triangle_ids:
            triangle_map[f"{i}:{t}"] = f"t{i}:{t}"
    config = composed.relabeled(edge_map, triangle_map)

    m1 = tuple(sorted(
        [f"s5:{t}" for t in ("t1", "t2", "t4", "t5")]
        + [f"t{i}:dn{j}" for i in (1, 2, 3) for j in (1, 2, 3)]
    ))
    m0 = tuple(sorted(
        ["s5:t3"] + [f"t{i}:up{j}" for i in (1, 2, 3) for j in (1, 2, 3)]
    ))
    classes = {f"s5:{e}": cls for e, cls in s5.edge_classes.items()}
    for i in (1, 2, 3):
        lo, hi = sorted({1, 2, 3} - {i})
        for k in range(1, 7):
            classes[f"t{i}:d{k}"] = lo if k % 2 else hi
        for name in ("a", "b", "c"):
            classes[f"end{i}:{name}"] = i
    ends = tuple(
        (f"end{i}:a", f"end{i}:b", f"end{i}:c") for i in (1, 2, 3)
    )
    return Gadget(
        config=config,
        ends=ends,  # type: ignore[arg-type]
        matchings={"perfect": m1, "all_ends_defect": m0},
        edge_classes=classes,
    )


def certify_mtt(gadget: Gadget, threads: int = 1) -> list[CheckResult]:
    checks = _end_structure_checks(gadget)
    end_union = frozenset(gadget.end_edge_union())
    within = enumerate_matchings_with_defect_within(gadget.config, end_union, threads=threads)
    expected = sorted(
        [tuple(sorted(gadget.matchings["perfect"])), tuple(sorted(gadget.matchings["all_ends_defect"]))]
    )
    checks.append(
        CheckResult(
            "exactly_two_matchings_within_outer_ends",
            within == expected,
            f"found {len(within)} matchings with defect inside the nine outer edges",
        )
    )
    defects = sorted(
        (sorted(defect(gadget.config, m)) for m in within), key=len
    )
    checks.append(
        CheckResult(
            "no_proper_nonempty_defect",
            len(defects) == 2 and defects[0] == [] and frozenset(defects[1]) == end_union,
            "defects inside the outer edges are exactly the empty set and all nine",
        )
    )
    pins: dict[str, int] = {}
    for cls, triple in enumerate(gadget.ends, start=1):
        for e in triple:
            pins[e] = cls
    checks.extend(
        _tripartition_checks(gadget, pins, "tripartite_with_pinned_end_classes")
    )
    return checks


def make_matching_triangular_triangle(certify: bool = True, threads: int = 1) -> Gadget:
    gadget = _mtt_uncertified()
    if not certify:
        return gadget
    return _finish("matching triangular triangle", gadget, certify_mtt(gadget, threads=threads))


_REFERENCE_MTT: Gadget | None = None


def _reference_mtt() -> Gadget:
    global _REFERENCE_MTT
    if _REFERENCE_MTT is None:
        _REFERENCE_MTT = _mtt_uncertified()
    return _REFERENCE_MTT


# -- linking and reduction ------------------------------------------------------------


@dataclass(frozen=True)
class MttBlock:
    """One linking block instance inside a larger configuration."""

    prefix: str
    triangles: tuple[str, ...]
    m1: tuple[str, ...]
    m0: tuple[str, ...]
    interior_edge_classes: dict[str, int]


def _link_block(
    config: TriangularConfiguration, t1: str, t2: str, t3: str
) -> tuple[TriangularConfiguration, MttBlock]:
    targets = (t1, t2, t3)
    if len(set(targets)) != 3:
        raise ToolkitError(f"link targets must be three distinct triangles, got {targets}")
    triples = []
    for t in targets:
        if not config.has_triangle(t):
            raise ToolkitError(f"unknown triangle {t!r}")
        triples.append(tuple(sorted(config.triangle_edges(t))))
    for i in range(3):
        for j in range(i + 1, 3):
            if set(triples[i]) & set(triples[j]):
                raise ToolkitError(
                    f"link targets {targets[i]!r} and {targets[j]!r} share an edge"
                )
    ref = _reference_mtt()
    prefix = f"mtt[{t1}|{t2}|{t3}]"
    edge_map: dict[str, str] = {}
    for i, end in enumerate(ref.ends):
        for ref_edge, target_edge in zip(sorted(end), triples[i]):
            edge_map[ref_edge] = target_edge
    for e in ref.config.edge_ids:
        if e not in edge_map:
            edge_map[e] = f"{prefix}:{e}"
    triangle_map = {t: f"{prefix}:{t}" for t in ref.config.triangle_ids}
    block_config = ref.config.relabeled(edge_map, triangle_map)

    edges: dict[str, tuple[str, str] | None] = {
        e: config.edge_ends(e) for e in config.edge_ids
    }
    for e in block_config.edge_ids:
        if e not in edges:
            edges[e] = None
    triangles = {t: config.triangle_edges(t) for t in config.triangle_ids}
    for t in block_config.triangle_ids:
        if t in triangles:
            raise ToolkitError(f"block triangle id {t!r} collides; already linked here?")
        triangles[t] = block_config.triangle_edges(t)
    merged = TriangularConfiguration(edges, triangles, config.vertices)

    block = MttBlock(
        prefix=prefix,
        triangles=tuple(sorted(triangle_map.values())),
        m1=tuple(sorted(triangle_map[t] for t in ref.matchings["perfect"])),
        m0=tuple(sorted(triangle_map[t] for t in ref.matchings["all_ends_defect"])),
        interior_edge_classes={
            edge_map[e]: cls
            for e, cls in ref.edge_classes.items()
            if edge_map[e].startswith(prefix + ":")
        },
    )
    return merged, block


def link_by_mtt(
    config: TriangularConfiguration, t1: str, t2: str, t3: str
) -> TriangularConfiguration:
    """Attach a fresh linking block whose end triples are the three target triangles."""
    merged, _ = _link_block(config, t1, t2, t3)
    return merged


def remove_triangles(
    config: TriangularConfiguration, triangle_ids: Iterable[str]
) -> TriangularConfiguration:
    drop = set(triangle_ids)
    for t in drop:
        if not config.has_triangle(t):
            raise ToolkitError(f"unknown triangle {t!r}")
    edges = {e: config.edge_ends(e) for e in config.edge_ids}
    triangles = {
        t: config.triangle_edges(t) for t in config.triangle_ids if t not in drop
    }
    return TriangularConfiguration(edges, triangles, config.vertices)


@dataclass(frozen=True)
class ReductionResult:
    """Tripartite rewrite of a configuration with matchings preserved.

    `blocks` maps each source triangle to its linking block; the forward map
    sends a triangle subset S to the union of the perfect block matchings for
    members of S and the all-ends-defect block matchings for non-members.
    """

    source: TriangularConfiguration
    config: TriangularConfiguration
    weighting: dict[str, int]
    edge_classes: dict[str, int]
    blocks: dict[str, MttBlock]

    def forward(self, triangle_subset: Iterable[str]) -> tuple[str, ...]:
        chosen = set(triangle_subset)
        unknown = chosen - set(self.blocks)
        if unknown:
            raise ToolkitError(f"unknown source triangles {sorted(unknown)}")
        out: list[str] = []
        for t, block in self.blocks.items():
            out.extend(block.m1 if t in chosen else block.m0)
        return tuple(sorted(out))

    def to_doc(self) -> dict:
        doc = {
            "config": build_config_doc(
                self.config, weights=self.weighting, edge_classes=self.edge_classes
            ),
            "blocks": {
                t: {"m1": list(block.m1), "m0": list(block.m0)}
                for t, block in sorted(self.blocks.items())
            },
        }
        return doc


def tripartite_reduction(
    config: TriangularConfiguration,
    weighting: Mapping[str, int] | None = None,
) -> ReductionResult:
    """Three disjoint copies, one linking block per source triangle, copies deleted.

    The designated triangle of each block (lowest id in its perfect matching)
    inherits the source triangle's weight; every other block triangle weighs 0.
    Copy-i edges land in class i, so the result is tripartite by construction.
    """
    problems = validate(config)
    if problems:
        raise ToolkitError("reduction input is invalid: " + "; ".join(problems))
    edges: dict[str, tuple[str, str] | None] = {}
    triangles: dict[str, tuple[str, ...]] = {}
    for i in (1, 2, 3):
        for e in config.edge_ids:
            edges[f"c{i}:{e}"] = None
        for t in config.triangle_ids:
            triangles[f"c{i}:{t}"] = tuple(f"c{i}:{e}" for e in config.triangle_edges(t))
    work = TriangularConfiguration(edges, triangles)

    blocks: dict[str, MttBlock] = {}
    for t in config.triangle_ids:
        work, block = _link_block(work, f"c1:{t}", f"c2:{t}", f"c3:{t}")
        blocks[t] = block
    work = remove_triangles(
        work, [f"c{i}:{t}" for i in (1, 2, 3) for t in config.triangle_ids]
    )

    weights: dict[str, int] = {}
    for t in config.triangle_ids:
        block = blocks[t]
        designated = min(block.m1)
        for bt in block.triangles:
            weights[bt] = 0
        weights[designated] = int(weighting.get(t, 1)) if weighting is not None else 1

    classes: dict[str, int] = {}
    for i in (1, 2, 3):
        for e in config.edge_ids:
            classes[f"c{i}:{e}"] = i
    for block in blocks.values():
        classes.update(block.interior_edge_classes)

    leftover = check_edge_tripartition(work, classes)
    if leftover:
        raise ToolkitError(
            "constructed tripartition is invalid (internal error): " + "; ".join(leftover)
        )
    return ReductionResult(
        source=config,
        config=work,
        weighting=weights,
        edge_classes=classes,
        blocks=blocks,
    )


def reduced_matching_polynomial(result: ReductionResult, threads: int = 1) -> Polynomial:
    """Perfect-matching polynomial of the reduced configuration under its weights."""
    from .core import perfect_matching_polynomial

    return perfect_matching_polynomial(result.config, result.weighting, threads=threads)
