"""Cones, orthogonality of digraphs, and checkers for the coreness criteria
of products of cones."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Any, Sequence

from .digraph import CapacityError, Digraph, VertexMap, product, tensor_product
from .report import Verdict, decide, jsonable
from .search import (
    Budget,
    SearchBudgetExceeded,
    SurjectivityResult,
    _as_budget,
    check_surjectivity,
    find_homomorphism,
    is_core,
    minimal_target_subgraph,
)

__all__ = [
    "APEX_LABEL",
    "DIRECT_CORE_CAP",
    "ConedDigraph",
    "FamilyReport",
    "OrthogonalPair",
    "OrthogonalityResult",
    "TwoConeReport",
    "are_orthogonal",
    "check_cone_commute",
    "check_orthogonality",
    "cone",
    "cone_product_parts",
    "decode_product_vertex",
    "orthogonalize_pair",
    "verify_two_cone_theorem",
    "verify_vsc_conditions",
]

APEX_LABEL = "apex"
# largest product of cones on which coreness is also checked directly
DIRECT_CORE_CAP = 400


@dataclass(frozen=True)
class ConedDigraph:
    """``base`` plus one apex (index ``len(base)``) joined to every base
    vertex by a digon."""

    base: Digraph
    digraph: Digraph

    @property
    def apex(self) -> int:
        return self.base.n

    def __len__(self) -> int:
        return self.digraph.n


def cone(g: Digraph) -> ConedDigraph:
    a = g.n
    arcs = list(g.sorted_arcs())
    for v in range(a):
        arcs += [(a, v), (v, a)]
    labels = [g.label(v) for v in range(a)] + [APEX_LABEL]
    return ConedDigraph(g, Digraph(a + 1, arcs, labels))


def decode_product_vertex(index: int, sizes: Sequence[int]) -> tuple[int, ...]:
    """Coordinates of a vertex of an iterated product (row-major order)."""
    out = []
    for s in reversed(sizes):
        index, r = divmod(index, s)
        out.append(r)
    return tuple(reversed(out))


def _encode(coords: Sequence[int], sizes: Sequence[int]) -> int:
    idx = 0
    for c, s in zip(coords, sizes):
        idx = idx * s + c
    return idx


def cone_product_parts(g: ConedDigraph, h: ConedDigraph) -> dict[str, list[int]]:
    """Split the vertices of ``cone(G) x cone(H)`` by which coordinates are apexes."""
    parts: dict[str, list[int]] = {"apex": [], "g_x_apex": [], "apex_x_h": [], "base": []}
    sizes = (len(g), len(h))
    for i in range(prod(sizes)):
        u, x = decode_product_vertex(i, sizes)
        key = {
            (True, True): "apex",
            (False, True): "g_x_apex",
            (True, False): "apex_x_h",
            (False, False): "base",
        }[(u == g.apex, x == h.apex)]
        parts[key].append(i)
    return parts


def check_cone_commute(cones: Sequence[ConedDigraph], phi: VertexMap) -> bool:
    """For a retract ``phi`` of a product of cones of oriented digraphs: the
    all-apex vertex is fixed and the product of the bases maps into itself."""
    sizes = [len(c) for c in cones]
    apexes = [c.apex for c in cones]
    top = _encode(apexes, sizes)
    if phi[top] != top:
        return False
    for i in range(phi.source.n):
        coords = decode_product_vertex(i, sizes)
        if any(c == a for c, a in zip(coords, apexes)):
            continue
        img = decode_product_vertex(phi[i], sizes)
        if any(c == a for c, a in zip(img, apexes)):
            return False
    return True


@dataclass(frozen=True)
class OrthogonalityResult:
    to_g: SurjectivityResult
    to_h: SurjectivityResult

    def __bool__(self) -> bool:
        return bool(self.to_g) and bool(self.to_h)


def check_orthogonality(
    g: Digraph, h: Digraph, budget: Budget | int | None = None
) -> OrthogonalityResult:
    """Every hom from ``G x H`` to ``G`` and to ``H`` is surjective.

    A failing side carries a non-surjective hom (or none at all, which only
    happens when a factor is empty).
    """
    budget = _as_budget(budget)
    p = tensor_product(g, h)[0]
    return OrthogonalityResult(
        check_surjectivity(p, g, budget), check_surjectivity(p, h, budget)
    )


def are_orthogonal(g: Digraph, h: Digraph, budget: Budget | int | None = None) -> bool:
    return bool(check_orthogonality(g, h, budget))


@dataclass(frozen=True)
class OrthogonalPair:
    g: Digraph
    g_vertices: tuple[int, ...]
    h: Digraph
    h_vertices: tuple[int, ...]
    to_g: VertexMap
    to_h: VertexMap


def orthogonalize_pair(
    g: Digraph, h: Digraph, budget: Budget | int | None = None
) -> OrthogonalPair:
    """Inclusion-minimal induced subgraphs ``G'`` of ``G`` and ``H'`` of ``H``
    that still receive a hom from ``G x H``.

    ``to_g`` and ``to_h`` are homs from the product into ``G`` and ``H``
    with images inside the chosen vertex sets. Every hom from the product to
    ``G'`` or ``H'`` is onto, by minimality.
    """
    budget = _as_budget(budget)
    p = tensor_product(g, h)[0]
    out = []
    for target in (g, h):
        res = minimal_target_subgraph(p, target, budget)
        if res is None:
            # only when one factor has no vertices
            raise ValueError("the product does not map to a factor")
        vs, m = res
        sub, _ = target.induced_subgraph(vs)
        out.append((sub, tuple(vs), m))
    (gs, gv, gm), (hs, hv, hm) = out
    return OrthogonalPair(gs, gv, hs, hv, gm, hm)


@dataclass
class TwoConeReport:
    oriented: Verdict
    orthogonal: Verdict
    incomparable: Verdict
    conclusion: Verdict
    product_vertices: int
    notes: list[str] = field(default_factory=list)

    @property
    def hypotheses(self) -> Verdict:
        return self.oriented & self.orthogonal & self.incomparable

    def to_json(self) -> dict[str, Any]:
        return {
            "oriented": self.oriented.value,
            "orthogonal": self.orthogonal.value,
            "incomparable": self.incomparable.value,
            "hypotheses": self.hypotheses.value,
            "conclusion": self.conclusion.value,
            "product_vertices": self.product_vertices,
            "notes": list(self.notes),
        }


def verify_two_cone_theorem(
    g: Digraph, h: Digraph, budget: Budget | int | None = None
) -> TwoConeReport:
    """Check the hypotheses (oriented, orthogonal, incomparable) and the
    conclusion that ``cone(G) x cone(H)`` is a core; each is reported on its
    own, so an unmet hypothesis does not hide the conclusion."""
    budget = _as_budget(budget)
    notes: list[str] = []
    oriented = Verdict.of(g.is_antisymmetric and h.is_antisymmetric)
    orth, _, why = decide(lambda: are_orthogonal(g, h, budget))
    if why:
        notes.append(f"orthogonality: {why}")
    incomp, _, why = decide(
        lambda: find_homomorphism(g, h, budget=budget) is None
        and find_homomorphism(h, g, budget=budget) is None
    )
    if why:
        notes.append(f"incomparability: {why}")
    p = tensor_product(cone(g).digraph, cone(h).digraph)[0]
    concl, _, why = decide(lambda: is_core(p, budget))
    if why:
        notes.append(f"conclusion: {why}")
    return TwoConeReport(oriented, orth, incomp, concl, p.n, notes)


@dataclass
class MemberReport:
    index: int
    vertices: int
    oriented: Verdict
    core: Verdict
    incomparable: Verdict
    a1: Verdict
    a2: Verdict
    b: Verdict
    witnesses: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def preconditions(self) -> Verdict:
        return self.oriented & self.core & self.incomparable

    @property
    def conditions(self) -> Verdict:
        return self.a1 & self.a2 & self.b

    @property
    def verdict(self) -> Verdict:
        return self.preconditions & self.conditions

    def to_json(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "vertices": self.vertices,
            "oriented": self.oriented.value,
            "core": self.core.value,
            "incomparable": self.incomparable.value,
            "a1_product_not_to_member": self.a1.value,
            "a2_product_to_cone": self.a2.value,
            "b_all_onto": self.b.value,
            "verdict": self.verdict.value,
            "witnesses": jsonable(self.witnesses),
            "notes": list(self.notes),
        }


@dataclass
class FamilyReport:
    """Per-member verdicts for the coreness criterion of a product of cones.

    ``direct_core`` is the result of running :func:`is_core` on the product
    of the cones, or None when that product is above the cap.
    """

    members: list[MemberReport]
    degenerate: bool
    cone_product_vertices: int
    direct_core: Verdict | None
    search_nodes: int
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        v = Verdict.TRUE
        for m in self.members:
            v = v & m.verdict
        return v

    def to_json(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "degenerate": self.degenerate,
            "cone_product_vertices": self.cone_product_vertices,
            "direct_core": None if self.direct_core is None else self.direct_core.value,
            "search_nodes": self.search_nodes,
            "members": [m.to_json() for m in self.members],
            "notes": list(self.notes),
        }


def _maps_to_digon(g: Digraph, budget: Budget) -> VertexMap | None:
    return find_homomorphism(g, Digraph(2, [(0, 1), (1, 0)]), budget=budget)


def verify_vsc_conditions(
    family: Sequence[Digraph],
    budget: Budget | int | None = None,
    *,
    max_vertices: int | None = None,
    direct_cap: int = DIRECT_CORE_CAP,
    digon_shortcut: bool = False,
) -> FamilyReport:
    """Check, for each member ``G``, with ``P`` the product of the others:

    * (a1) ``P`` does not map to ``G``;
    * (a2) ``P`` maps to ``cone(G)``;
    * (b) the product of the whole family maps onto ``G`` by every hom;

    together with the preconditions (oriented, core, pairwise incomparable).
    A one-member family has the one-vertex looped digraph as ``P``; then
    (a1) holds, (a2) fails since cones have no loops, and (b) is coreness.
    """
    budget = _as_budget(budget)
    family = list(family)
    if not family:
        raise ValueError("empty family")
    n = len(family)
    degenerate = n == 1
    notes: list[str] = []
    if degenerate:
        notes.append("one-member family: the product of the others is a looped vertex")

    def build(graphs: Sequence[Digraph]) -> Digraph:
        return product(graphs, max_vertices)

    whole: Digraph | None
    try:
        whole = build(family)
    except CapacityError as exc:
        whole = None
        notes.append(f"product of the family: {exc}")

    members = []
    for i, g in enumerate(family):
        w: dict[str, Any] = {}
        mnotes: list[str] = []
        oriented = Verdict.of(g.is_antisymmetric)
        core_v, _, why = decide(lambda: is_core(g, budget))
        if why:
            mnotes.append(f"core: {why}")
        incomp = Verdict.TRUE
        for j, other in enumerate(family):
            if j == i:
                continue
            v, m, why = decide(lambda: find_homomorphism(g, other, budget=budget))
            if v is Verdict.TRUE:
                incomp = Verdict.FALSE
                w[f"maps_to_{j}"] = m
            elif v is Verdict.INCONCLUSIVE:
                incomp = incomp & Verdict.INCONCLUSIVE
                mnotes.append(f"incomparability with {j}: {why}")

        cg = cone(g).digraph
        if degenerate:
            a1, a2 = Verdict.TRUE, Verdict.FALSE
        else:
            try:
                rest = build([h for j, h in enumerate(family) if j != i])
            except CapacityError as exc:
                rest = None
                mnotes.append(f"product of the others: {exc}")
            if rest is None:
                a1 = a2 = Verdict.INCONCLUSIVE
            else:
                v, m, why = decide(lambda: find_homomorphism(rest, g, budget=budget))
                a1 = ~v
                if m is not None:
                    w["a1_refutation"] = m
                if why:
                    mnotes.append(f"a1: {why}")
                if digon_shortcut and g.n >= 1:
                    a2, m = _a2_by_digon(family, i, rest, cg, budget)
                else:
                    a2, m, why = decide(lambda: find_homomorphism(rest, cg, budget=budget))
                    if why:
                        mnotes.append(f"a2: {why}")
                if m is not None:
                    w["a2_witness"] = m

        if whole is None:
            b = Verdict.INCONCLUSIVE
        else:
            b, res, why = decide(lambda: check_surjectivity(whole, g, budget))
            if why:
                mnotes.append(f"b: {why}")
            elif res.witness is not None:
                w["b_witness"] = res.witness
        members.append(
            MemberReport(i, g.n, oriented, core_v, incomp, a1, a2, b, w, mnotes)
        )

    cone_sizes = [g.n + 1 for g in family]
    total = prod(cone_sizes)
    direct: Verdict | None = None
    if total <= direct_cap:
        pc = product([cone(g).digraph for g in family])
        direct, _, why = decide(lambda: is_core(pc, budget))
        if why:
            notes.append(f"direct coreness check: {why}")
    return FamilyReport(members, degenerate, total, direct, budget.nodes, notes)


def _a2_by_digon(
    family: Sequence[Digraph], i: int, rest: Digraph, cg: Digraph, budget: Budget
) -> tuple[Verdict, VertexMap | None]:
    """(a2) via a digon: if some other member maps to a digon, so does the
    product, and the digon sits in the cone on (vertex 0, apex)."""
    try:
        for j, h in enumerate(family):
            if j == i:
                continue
            if _maps_to_digon(h, budget) is not None:
                m = _maps_to_digon(rest, budget)
                if m is None:
                    break
                apex = cg.n - 1
                return Verdict.TRUE, VertexMap(rest, cg, tuple(apex if x else 0 for x in m.images))
        m = find_homomorphism(rest, cg, budget=budget)
    except SearchBudgetExceeded:
        return Verdict.INCONCLUSIVE, None
    return Verdict.of(m is not None), m
