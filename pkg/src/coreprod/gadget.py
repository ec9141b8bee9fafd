"""Replacing every arc of a digraph by a copy of K2 joined with C5, and the
checks that this turns digraph homomorphisms into graph homomorphisms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence

from .digraph import Digraph, VertexMap, complete_graph, product, tensor_product
from .report import Verdict, decide
from .search import (
    Budget,
    _as_budget,
    compute_core,
    find_homomorphism,
    is_isomorphic,
)

__all__ = [
    "GadgetBlock",
    "GadgetGraph",
    "GadgetReport",
    "build_gadget_graph",
    "cone_gadget_size",
    "diagonal_embedding",
    "gadget_core_inequality",
    "gadget_unit",
    "gadget_vertex_count",
    "homomorphic_images",
    "is_4_colorable",
    "verify_gadget_equivalence",
]


def _edges_to_digraph(n: int, edges: Sequence[tuple[int, int]], labels=None) -> Digraph:
    arcs = [(a, b) for a, b in edges] + [(b, a) for a, b in edges]
    return Digraph(n, arcs, labels)


@dataclass(frozen=True)
class GadgetBlock:
    """Gadget copy for the arc ``tail -> head``.

    The K2 part is ``(head, k2)``; the C5 part is the cycle
    ``tail, c5[0], c5[1], c5[2], c5[3]``.
    """

    tail: int
    head: int
    k2: int
    c5: tuple[int, int, int, int]

    @property
    def fresh(self) -> tuple[int, ...]:
        return (self.k2, *self.c5)

    def to_json(self) -> dict[str, Any]:
        return {
            "arc": [self.tail, self.head],
            "k2_part": [self.head, self.k2],
            "c5_part": [self.tail, *self.c5],
        }


@dataclass(frozen=True)
class GadgetGraph:
    graph: Digraph
    origin: Digraph
    blocks: tuple[GadgetBlock, ...]

    def collapse(self) -> tuple[int, ...]:
        """Vertex of the origin each vertex stands for: originals map to
        themselves, the K2 part of a block to its head, the C5 part to its
        tail."""
        out = list(range(self.origin.n)) + [0] * (self.graph.n - self.origin.n)
        for b in self.blocks:
            out[b.k2] = b.head
            for c in b.c5:
                out[c] = b.tail
        return tuple(out)

    def sidecar(self) -> dict[str, Any]:
        return {
            "origin_vertices": self.origin.n,
            "vertices": self.graph.n,
            "blocks": [b.to_json() for b in self.blocks],
        }


def gadget_vertex_count(d: Digraph) -> int:
    return d.n + 5 * d.arc_count


def cone_gadget_size(n: int) -> int:
    """Vertices of the gadget graph of the cone over an ``n``-vertex path
    (``n + 1`` vertices and ``3n - 1`` arcs)."""
    return n + 1 + 5 * (3 * n - 1)


def build_gadget_graph(d: Digraph) -> GadgetGraph:
    n = d.n
    edges: list[tuple[int, int]] = []
    labels = [d.label(v) for v in range(n)]
    blocks = []
    nxt = n
    for u, v in d.sorted_arcs():
        k2 = nxt
        c5 = (nxt + 1, nxt + 2, nxt + 3, nxt + 4)
        nxt += 5
        labels.append(f"{u}>{v}:k")
        labels += [f"{u}>{v}:c{i}" for i in range(1, 5)]
        cyc = (u, *c5)
        edges.append((v, k2))
        edges += [(cyc[i], cyc[(i + 1) % 5]) for i in range(5)]
        edges += [(a, c) for a in (v, k2) for c in cyc]
        blocks.append(GadgetBlock(u, v, k2, c5))
    return GadgetGraph(_edges_to_digraph(nxt, edges, labels), d, tuple(blocks))


def gadget_unit() -> Digraph:
    """K2 joined with C5 (vertices 0, 1 form the K2)."""
    return build_gadget_graph(Digraph(2, [(0, 1)])).graph


def is_4_colorable(g: Digraph, budget: Budget | int | None = None) -> bool:
    if not g.is_symmetric:
        raise ValueError("4-colourability is defined here for symmetric digraphs")
    return find_homomorphism(g, complete_graph(4), budget=budget) is not None


@dataclass
class GadgetReport:
    hypothesis: Verdict
    digraph_hom: Verdict
    graph_hom: Verdict
    equivalent: Verdict
    restriction: Verdict
    raw_restriction: Verdict
    digraph_witness: VertexMap | None = None
    graph_witness: VertexMap | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        return self.hypothesis & self.equivalent & self.restriction

    def to_json(self) -> dict[str, Any]:
        def m(x):
            return None if x is None else list(x.images)

        return {
            "hypothesis_4_colorable": self.hypothesis.value,
            "digraph_hom": self.digraph_hom.value,
            "graph_hom": self.graph_hom.value,
            "equivalent": self.equivalent.value,
            "restriction_collapsed": self.restriction.value,
            "restriction_raw": self.raw_restriction.value,
            "digraph_witness": m(self.digraph_witness),
            "graph_witness": m(self.graph_witness),
            "verdict": self.verdict.value,
            "notes": list(self.notes),
        }


def verify_gadget_equivalence(
    d1: Digraph, d2: Digraph, budget: Budget | int | None = None
) -> GadgetReport:
    """Decide ``D1 -> D2`` and ``G[D1] -> G[D2]`` independently and compare.

    For a graph hom ``psi`` two restriction checks are made on the original
    vertices of ``D1``: ``raw`` asks whether ``psi`` itself lands on original
    vertices of ``D2`` as a digraph hom; ``collapsed`` first sends each
    gadget vertex to the endpoint it is attached to. Gadget automorphisms
    (swapping the K2, rotating the C5) can move originals off originals, so
    only the collapsed form is required to hold.
    """
    budget = _as_budget(budget)
    inc = Verdict.INCONCLUSIVE
    hyp, _, why = decide(lambda: is_4_colorable(d2.underlying_graph(), budget))
    if hyp is not Verdict.TRUE:
        note = "hypothesis unmet" if hyp is Verdict.FALSE else f"hypothesis: {why}"
        return GadgetReport(hyp, inc, inc, inc, inc, inc, notes=[note])
    notes = []
    dv, dm, why = decide(lambda: find_homomorphism(d1, d2, budget=budget))
    if why:
        notes.append(f"digraph side: {why}")
    g1, g2 = build_gadget_graph(d1), build_gadget_graph(d2)
    gv, gm, why = decide(lambda: find_homomorphism(g1.graph, g2.graph, budget=budget))
    if why:
        notes.append(f"graph side: {why}")
    if inc in (dv, gv):
        eq = inc
    else:
        eq = Verdict.of(dv == gv)
    rest = raw = Verdict.TRUE
    if gm is not None:
        col = g2.collapse()
        imgs = tuple(col[gm[v]] for v in range(d1.n))
        rest = Verdict.of(VertexMap(d1, d2, imgs).is_homomorphism())
        raw_ok = all(gm[v] < d2.n for v in range(d1.n)) and VertexMap(
            d1, d2, tuple(gm[v] if gm[v] < d2.n else 0 for v in range(d1.n))
        ).is_homomorphism()
        raw = Verdict.of(raw_ok)
    return GadgetReport(hyp, dv, gv, eq, rest, raw, dm, gm, notes)


def _independent_partitions(g: Digraph) -> Iterator[list[int]]:
    """Restricted-growth labellings whose classes contain no arc."""
    n = g.n
    nb = [g.out_mask[v] | g.in_mask[v] for v in range(n)]
    cls: list[int] = []
    members: list[int] = []  # bitmask per class

    def rec(v: int) -> Iterator[list[int]]:
        if v == n:
            yield list(cls)
            return
        for c in range(len(members) + 1):
            if c < len(members) and members[c] & nb[v]:
                continue
            if c == len(members):
                members.append(0)
            members[c] |= 1 << v
            cls.append(c)
            yield from rec(v + 1)
            cls.pop()
            members[c] &= ~(1 << v)
            if members[c] == 0:
                members.pop()

    yield from rec(0)


def homomorphic_images(g: Digraph, budget: Budget | int | None = None) -> list[Digraph]:
    """Loop-free homomorphic images of ``g`` up to isomorphism, as quotients
    by partitions into independent sets (exponential; for small ``g``)."""
    budget = _as_budget(budget)
    found: list[Digraph] = []
    for lab in _independent_partitions(g):
        m = max(lab) + 1 if lab else 0
        q = Digraph(m, {(lab[u], lab[v]) for u, v in g.sorted_arcs()})
        if any(
            h.n == q.n and h.arc_count == q.arc_count and is_isomorphic(h, q, budget)
            for h in found
        ):
            continue
        found.append(q)
    found.sort(key=lambda h: (-h.n, -h.arc_count))
    return found


def diagonal_embedding(d1: Digraph, d2: Digraph) -> VertexMap:
    """Injective hom from ``G[D1 x D2]`` into ``G[D1] x G[D2]``.

    An original vertex ``(u1, u2)`` goes to ``(u1, u2)``; the ``j``-th fresh
    vertex of the block of ``(u1,u2) -> (v1,v2)`` goes to the pair of ``j``-th
    fresh vertices of the blocks of ``u1 -> v1`` and ``u2 -> v2``.
    """
    dp = tensor_product(d1, d2)[0]
    gp = build_gadget_graph(dp)
    g1, g2 = build_gadget_graph(d1), build_gadget_graph(d2)
    target = tensor_product(g1.graph, g2.graph)[0]
    w = g2.graph.n
    b1 = {(b.tail, b.head): b for b in g1.blocks}
    b2 = {(b.tail, b.head): b for b in g2.blocks}
    n2 = d2.n
    img = [0] * gp.graph.n
    for x in range(dp.n):
        img[x] = (x // n2) * w + x % n2
    for b in gp.blocks:
        (u1, u2), (v1, v2) = divmod(b.tail, n2), divmod(b.head, n2)
        p, q = b1[(u1, v1)], b2[(u2, v2)]
        for f, f1, f2 in zip(b.fresh, p.fresh, q.fresh):
            img[f] = f1 * w + f2
    return VertexMap(gp.graph, target, tuple(img))


def gadget_core_inequality(
    family: Sequence[Digraph], budget: Budget | int | None = None
) -> dict[str, Any]:
    """Compare the gadget graph of the core of the product of ``family`` with
    the core of the product of the gadget graphs."""
    budget = _as_budget(budget)
    dcore = compute_core(product(family), budget).core
    lhs = gadget_vertex_count(dcore)
    gcore = compute_core(product([build_gadget_graph(d).graph for d in family]), budget)
    return {"lhs": lhs, "rhs": gcore.core.n, "holds": lhs <= gcore.core.n}
