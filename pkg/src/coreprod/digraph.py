"""Digraphs on indexed vertex sets, vertex maps, and the tensor product.

Vertices are the integers ``0..n-1``. Adjacency is kept twice: as a frozen
arc set and as per-vertex out/in bitmasks (Python ints), which is what the
homomorphism search consumes.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "CapacityError",
    "Digraph",
    "DigraphParseError",
    "VertexMap",
    "complete_graph",
    "cycle_graph",
    "directed_cycle",
    "directed_path",
    "disjoint_union",
    "format_digraph",
    "parse_digraph",
    "product",
    "tensor_product",
    "to_dot",
]

DEFAULT_MAX_VERTICES = int(os.environ.get("COREPROD_MAX_VERTICES", "200000"))


class DigraphParseError(ValueError):
    """Raised for malformed digraph text; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapacityError(ValueError):
    """A construction would exceed the configured vertex budget."""


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Digraph:
    """Loopless digraph on vertices ``0..n-1``.

    Digons (``u -> v`` and ``v -> u``) are allowed, so graphs are the
    symmetric special case. Instances are immutable and hashable.
    """

    __slots__ = ("n", "arcs", "labels", "out_mask", "in_mask", "_hash")

    def __init__(
        self,
        n: int,
        arcs: Iterable[tuple[int, int]] = (),
        labels: Sequence[str] | None = None,
    ):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        arcset = frozenset((int(u), int(v)) for u, v in arcs)
        out_mask = [0] * n
        in_mask = [0] * n
        for u, v in arcset:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            out_mask[u] |= 1 << v
            in_mask[v] |= 1 << u
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != n:
                raise ValueError("labels must have one entry per vertex")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arcs", arcset)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "out_mask", tuple(out_mask))
        object.__setattr__(self, "in_mask", tuple(in_mask))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Digraph is immutable")

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.arcs == other.arcs

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.n, self.arcs)))
        return self._hash

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, arcs={len(self.arcs)})"

    # -- structure -------------------------------------------------------

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    @property
    def is_symmetric(self) -> bool:
        """True when every arc has its reverse, i.e. the digraph is a graph."""
        return all((v, u) in self.arcs for u, v in self.arcs)

    @property
    def is_antisymmetric(self) -> bool:
        """True when there is no digon (an oriented graph)."""
        return not any((v, u) in self.arcs for u, v in self.arcs)

    def has_arc(self, u: int, v: int) -> bool:
        return (self.out_mask[u] >> v) & 1 == 1

    def out_neighbors(self, v: int) -> list[int]:
        return list(_bits(self.out_mask[v]))

    def in_neighbors(self, v: int) -> list[int]:
        return list(_bits(self.in_mask[v]))

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.out_mask[v] | self.in_mask[v]))

    def degree(self, v: int) -> int:
        return self.out_mask[v].bit_count() + self.in_mask[v].bit_count()

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def components(self) -> list[list[int]]:
        """Weakly connected components, each sorted, ordered by least vertex."""
        seen = 0
        comps = []
        for s in range(self.n):
            if (seen >> s) & 1:
                continue
            comp = 1 << s
            frontier = 1 << s
            while frontier:
                nxt = 0
                for v in _bits(frontier):
                    nxt |= self.out_mask[v] | self.in_mask[v]
                frontier = nxt & ~comp
                comp |= nxt
            seen |= comp
            comps.append(list(_bits(comp)))
        return comps

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Digraph", list[int]]:
        """Induced subgraph on ``vertices`` (kept in increasing order).

        Returns the subgraph and the list mapping new indices to old ones.
        """
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        arcs = [(index[u], index[v]) for u, v in self.arcs if u in index and v in index]
        labels = [self.label(v) for v in keep] if self.labels is not None else None
        return Digraph(len(keep), arcs, labels), keep

    def delete_vertex(self, v: int) -> tuple["Digraph", list[int]]:
        return self.induced_subgraph(u for u in range(self.n) if u != v)

    def underlying_graph(self) -> "Digraph":
        """Symmetric closure: every arc becomes a digon."""
        return Digraph(self.n, self.arcs | {(v, u) for u, v in self.arcs}, self.labels)

    def relabel(self, labels: Sequence[str] | None) -> "Digraph":
        return Digraph(self.n, self.arcs, labels)


@dataclass(frozen=True)
class VertexMap:
    """A total map ``source -> target`` on vertex indices.

    Construction checks totality and range; :meth:`is_homomorphism` checks
    arc preservation.
    """

    source: Digraph = field(repr=False)
    target: Digraph = field(repr=False)
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.source.n:
            raise ValueError("vertex map must be total on the source")
        if any(not 0 <= x < self.target.n for x in images):
            raise ValueError("vertex map image out of range")

    def __getitem__(self, v: int) -> int:
        return self.images[v]

    def __len__(self) -> int:
        return len(self.images)

    def is_homomorphism(self) -> bool:
        t = self.target.out_mask
        f = self.images
        return all((t[f[u]] >> f[v]) & 1 for u, v in self.source.arcs)

    def image(self) -> frozenset[int]:
        return frozenset(self.images)

    def is_surjective(self) -> bool:
        return len(self.image()) == self.target.n

    def is_injective(self) -> bool:
        return len(self.image()) == len(self.images)

    def is_retract(self) -> bool:
        """Idempotent endomorphism: ``f(f(v)) == f(v)`` for all v."""
        if self.source != self.target:
            return False
        f = self.images
        return self.is_homomorphism() and all(f[x] == x for x in f)

    def compose(self, after: "VertexMap") -> "VertexMap":
        """Return ``after ∘ self``."""
        if after.source != self.target:
            raise ValueError("maps do not compose")
        return VertexMap(self.source, after.target, tuple(after.images[x] for x in self.images))

    @classmethod
    def identity(cls, g: Digraph) -> "VertexMap":
        return cls(g, g, tuple(range(g.n)))


# -- text format -----------------------------------------------------------

_ARC_RE = re.compile(r"^(\d+)\s*(->|<->)\s*(\d+)$")


def parse_digraph(text: str) -> Digraph:
    """Parse the line format: vertex count, then ``u -> v`` / ``u <-> v`` lines.

    ``#`` starts a comment. Loops and repeated arcs are rejected.
    """
    n = None
    arcs: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            if not line.isdigit():
                raise DigraphParseError(f"expected vertex count, got {line!r}", lineno)
            n = int(line)
            continue
        m = _ARC_RE.match(line)
        if m is None:
            raise DigraphParseError(f"cannot parse {line!r}", lineno)
        u, op, v = int(m.group(1)), m.group(2), int(m.group(3))
        for x in (u, v):
            if x >= n:
                raise DigraphParseError(f"vertex {x} out of range 0..{n - 1}", lineno)
        if u == v:
            raise DigraphParseError(f"loop declared at vertex {u}", lineno)
        new = [(u, v), (v, u)] if op == "<->" else [(u, v)]
        for a in new:
            if a in arcs:
                raise DigraphParseError(f"duplicate arc {a[0]} -> {a[1]}", lineno)
            arcs.add(a)
    if n is None:
        raise DigraphParseError("empty input: missing vertex count")
    return Digraph(n, arcs)


def format_digraph(g: Digraph) -> str:
    """Serialize in the line format; digons are written once as ``u <-> v``."""
    lines = [str(g.n)]
    for u, v in g.sorted_arcs():
        if (v, u) in g.arcs:
            if u < v:
                lines.append(f"{u} <-> {v}")
        else:
            lines.append(f"{u} -> {v}")
    return "\n".join(lines) + "\n"


def to_dot(g: Digraph, name: str = "G") -> str:
    """Graphviz export; digons become undirected edges."""
    lines = [f"digraph {name} {{"]
    for v in range(g.n):
        lines.append(f'  {v} [label="{g.label(v)}"];')
    for u, v in g.sorted_arcs():
        if (v, u) in g.arcs:
            if u < v:
                lines.append(f"  {u} -> {v} [dir=none];")
        else:
            lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- constructions ---------------------------------------------------------


def directed_cycle(n: int) -> Digraph:
    """Directed cycle C_n; C_2 is a single digon."""
    if n < 2:
        raise ValueError("directed cycles need at least 2 vertices")
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


def directed_path(n: int) -> Digraph:
    """Directed path on ``n`` vertices (``n - 1`` arcs)."""
    return Digraph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Digraph:
    return Digraph(n, [(i, j) for i in range(n) for j in range(n) if i != j])


def cycle_graph(n: int) -> Digraph:
    """Undirected cycle (symmetric digraph)."""
    arcs = []
    for i in range(n):
        j = (i + 1) % n
        arcs += [(i, j), (j, i)]
    return Digraph(n, arcs)


def disjoint_union(*graphs: Digraph) -> Digraph:
    arcs = []
    labels = []
    offset = 0
    for g in graphs:
        arcs += [(u + offset, v + offset) for u, v in g.arcs]
        labels += [g.label(v) for v in range(g.n)]
        offset += g.n
    return Digraph(offset, arcs, labels)


def tensor_product(
    g: Digraph, h: Digraph, max_vertices: int | None = None
) -> tuple[Digraph, VertexMap, VertexMap]:
    """Tensor product with its two projections.

    Vertex ``(u, x)`` gets index ``u * |h| + x``; ``(u1,x1) -> (u2,x2)`` is an
    arc iff ``u1 -> u2`` in ``g`` and ``x1 -> x2`` in ``h``.
    """
    limit = DEFAULT_MAX_VERTICES if max_vertices is None else max_vertices
    size = g.n * h.n
    if size > limit:
        raise CapacityError(f"product would have {size} vertices (limit {limit})")
    m = h.n
    arcs = [
        (u1 * m + x1, u2 * m + x2)
        for u1, u2 in g.arcs
        for x1, x2 in h.arcs
    ]
    labels = [f"({g.label(u)},{h.label(x)})" for u in range(g.n) for x in range(m)]
    prod = Digraph(size, arcs, labels)
    pi_g = VertexMap(prod, g, tuple(i // m for i in range(size))) if m else VertexMap(prod, g, ())
    pi_h = VertexMap(prod, h, tuple(i % m for i in range(size))) if m else VertexMap(prod, h, ())
    return prod, pi_g, pi_h


def product(graphs: Sequence[Digraph], max_vertices: int | None = None) -> Digraph:
    """Iterated binary tensor product in input order."""
    if not graphs:
        raise ValueError("the empty product is the looped vertex, which is not representable")
    acc = graphs[0]
    for g in graphs[1:]:
        acc = tensor_product(acc, g, max_vertices)[0]
    return acc
