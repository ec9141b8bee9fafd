"""Homomorphism search and everything reduced to it: cores, surjectivity, equivalence.

The engine is a backtracking CSP solver. Variables are source vertices in a
static order, domains are bitmasks over target vertices, and arc consistency
is maintained after every assignment (arcs, reversed arcs and digons are
separate relations). Values are tried in increasing order, so the first
witness is the lexicographically least one for the solver's variable order.
Weakly connected components of the source are solved independently.

A node budget separates "no homomorphism" (``None`` / ``False``) from
"gave up" (:class:`SearchBudgetExceeded`).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .digraph import Digraph, VertexMap, _bits

__all__ = [
    "Budget",
    "CoreResult",
    "DEFAULT_MAX_NODES",
    "SearchBudgetExceeded",
    "SurjectivityResult",
    "all_homs_to_target_surjective",
    "are_hom_equivalent",
    "check_surjectivity",
    "compute_core",
    "dominated_pair",
    "find_homomorphism",
    "has_homomorphism",
    "is_core",
    "is_isomorphic",
    "iter_homomorphisms",
    "minimal_target_subgraph",
]

DEFAULT_MAX_NODES = int(os.environ.get("COREPROD_BUDGET_NODES", str(10**8)))

# node allowance for the endomorphism pass of is_core(method="auto")
AUTO_PROBE_NODES = 200_000

_OUT, _IN, _SYM = 0, 1, 2


class SearchBudgetExceeded(RuntimeError):
    """The node budget ran out before the search could decide.

    ``partial`` holds the best intermediate result when the caller has one
    (for instance the smallest image reached by :func:`compute_core`).
    """

    def __init__(self, message: str = "search budget exceeded", partial=None):
        super().__init__(message)
        self.partial = partial


class Budget:
    """Search-node counter shared by every search made under one call."""

    def __init__(self, max_nodes: int | None = None):
        self.max_nodes = DEFAULT_MAX_NODES if max_nodes is None else int(max_nodes)
        self.nodes = 0

    def charge(self, k: int = 1) -> None:
        self.nodes += k
        if self.nodes > self.max_nodes:
            raise SearchBudgetExceeded(f"search budget of {self.max_nodes} nodes exceeded")

    def __repr__(self) -> str:
        return f"Budget(nodes={self.nodes}, max_nodes={self.max_nodes})"


def _as_budget(budget: Budget | int | None) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(budget)


class _Problem:
    """One search instance ``g -> h`` restricted to ``allowed`` target vertices."""

    def __init__(self, g: Digraph, h: Digraph, injective: bool, budget: Budget):
        self.g = g
        self.h = h
        self.injective = injective
        self.budget = budget
        sym_h = tuple(o & i for o, i in zip(h.out_mask, h.in_mask))
        self.tables = (h.out_mask, h.in_mask, sym_h)
        self.cache: tuple[dict, dict, dict] = ({}, {}, {})
        nbrs = []
        for x in range(g.n):
            out, inn = g.out_mask[x], g.in_mask[x]
            sym = out & inn
            rel = [(y, _SYM) for y in _bits(sym)]
            rel += [(y, _OUT) for y in _bits(out & ~sym)]
            rel += [(y, _IN) for y in _bits(inn & ~sym)]
            nbrs.append(rel)
        self.nbrs = nbrs

    def support(self, rel: int, dom: int) -> int:
        """Union of the ``rel``-neighbourhoods of the target vertices in ``dom``."""
        cache = self.cache[rel]
        hit = cache.get(dom)
        if hit is not None:
            return hit
        table = self.tables[rel]
        acc = 0
        for a in _bits(dom):
            acc |= table[a]
        if len(cache) > 200_000:
            cache.clear()
        cache[dom] = acc
        return acc

    def propagate(self, dom: list[int], queue: list[int]) -> bool:
        """AC-3 from the variables in ``queue``; False on a wipe-out."""
        pending = set(queue)
        nbrs = self.nbrs
        support = self.support
        while queue:
            x = queue.pop()
            pending.discard(x)
            dx = dom[x]
            for y, rel in nbrs[x]:
                dy = dom[y]
                nd = dy & support(rel, dx)
                if nd != dy:
                    if not nd:
                        return False
                    dom[y] = nd
                    if y not in pending:
                        pending.add(y)
                        queue.append(y)
        return True

    def order(self, verts: list[int], dom: list[int]) -> list[int]:
        """Static variable order: pinned vertices first, then greedily the vertex
        with most arcs into the already ordered set (ties: degree, then index)."""
        g = self.g
        if not verts:
            return []
        adj = {v: g.out_mask[v] | g.in_mask[v] for v in verts}
        deg = {v: g.degree(v) for v in verts}
        pinned = [v for v in verts if dom[v] & (dom[v] - 1) == 0]
        placed_mask = 0
        order = []
        for v in pinned:
            order.append(v)
            placed_mask |= 1 << v
        rest = [v for v in verts if not (placed_mask >> v) & 1]
        score = {v: (adj[v] & placed_mask).bit_count() for v in rest}
        remaining = set(rest)
        while remaining:
            v = max(remaining, key=lambda u: (score[u], deg[u], -u))
            remaining.discard(v)
            order.append(v)
            for u in _bits(adj[v]):
                if u in remaining:
                    score[u] += 1
        return order

    def search(self, order: list[int], dom: list[int]) -> Iterator[list[int]]:
        """Depth-first search over ``order``; yields complete domain states."""
        depth_max = len(order)
        doms = [dom]
        cands = [dom[order[0]]] if order else []
        depth = 0
        charge = self.budget.charge
        injective = self.injective
        if not order:
            yield dom
            return
        while depth >= 0:
            if depth == depth_max:
                yield doms[depth]
                doms.pop()
                depth -= 1
                continue
            c = cands[depth]
            if not c:
                cands.pop()
                doms.pop()
                depth -= 1
                continue
            low = c & -c
            cands[depth] = c ^ low
            charge()
            x = order[depth]
            cur = doms[depth]
            if cur[x] == low and not injective:
                nd = cur
                ok = True
            else:
                nd = list(cur)
                nd[x] = low
                queue = [x]
                ok = True
                if injective:
                    for pos in range(depth + 1, depth_max):
                        y = order[pos]
                        if nd[y] & low:
                            nd[y] &= ~low
                            if not nd[y]:
                                ok = False
                                break
                            queue.append(y)
                if ok:
                    ok = self.propagate(nd, queue)
            if not ok:
                continue
            depth += 1
            doms.append(nd)
            if depth < depth_max:
                cands.append(nd[order[depth]])


def _initial_domains(
    g: Digraph,
    h: Digraph,
    constraints: Mapping[int, int] | None,
    allowed: Iterable[int] | None,
) -> list[int] | None:
    full = (1 << h.n) - 1
    if allowed is not None:
        mask = 0
        for a in allowed:
            mask |= 1 << a
        full &= mask
    dom = [full] * g.n
    for x, a in (constraints or {}).items():
        if not 0 <= x < g.n or not 0 <= a < h.n:
            raise ValueError(f"constraint {x} -> {a} out of range")
        dom[x] &= 1 << a
    if any(d == 0 for d in dom):
        return None
    return dom


def _run(
    g: Digraph,
    h: Digraph,
    constraints,
    allowed,
    injective: bool,
    budget: Budget,
    first_only: bool,
) -> Iterator[tuple[int, ...]]:
    if injective and g.n > h.n:
        return
    dom = _initial_domains(g, h, constraints, allowed)
    if dom is None:
        return
    if g.n == 0:
        yield ()
        return
    prob = _Problem(g, h, injective, budget)
    if not prob.propagate(dom, list(range(g.n))):
        return
    if injective:
        groups = [list(range(g.n))]
    else:
        groups = g.components()
    orders = [prob.order(comp, dom) for comp in groups]

    def assemble(states: list[list[int]]) -> tuple[int, ...]:
        images = [0] * g.n
        for order, state in zip(orders, states):
            for x in order:
                images[x] = state[x].bit_length() - 1
        return tuple(images)

    # Components are independent; refute any infeasible one before enumerating
    # combinations, then enumerate the cartesian product lazily.
    firsts = []
    for order in orders:
        state = next(prob.search(order, dom), None)
        if state is None:
            return
        firsts.append(state)
    yield assemble(firsts)
    if first_only:
        return

    def rec(i: int, acc: list[list[int]]) -> Iterator[tuple[int, ...]]:
        if i == len(orders):
            yield assemble(acc)
            return
        for state in prob.search(orders[i], dom):
            yield from rec(i + 1, acc + [state])

    it = rec(0, [])
    next(it)
    yield from it


def find_homomorphism(
    g: Digraph,
    h: Digraph,
    constraints: Mapping[int, int] | None = None,
    *,
    allowed: Iterable[int] | None = None,
    injective: bool = False,
    budget: Budget | int | None = None,
) -> VertexMap | None:
    """Return a homomorphism ``g -> h`` extending ``constraints``, or None.

    ``allowed`` restricts the image to a subset of target vertices (a hom
    into the induced subgraph on that set). Raises
    :class:`SearchBudgetExceeded` when the node budget runs out.
    """
    budget = _as_budget(budget)
    for images in _run(g, h, constraints, allowed, injective, budget, True):
        return VertexMap(g, h, images)
    return None


def iter_homomorphisms(
    g: Digraph,
    h: Digraph,
    constraints: Mapping[int, int] | None = None,
    *,
    allowed: Iterable[int] | None = None,
    injective: bool = False,
    budget: Budget | int | None = None,
) -> Iterator[VertexMap]:
    """Enumerate all homomorphisms ``g -> h`` (deterministic order)."""
    budget = _as_budget(budget)
    for images in _run(g, h, constraints, allowed, injective, budget, False):
        yield VertexMap(g, h, images)


def has_homomorphism(g: Digraph, h: Digraph, **kwargs) -> bool:
    return find_homomorphism(g, h, **kwargs) is not None


def are_hom_equivalent(g: Digraph, h: Digraph, budget: Budget | int | None = None) -> bool:
    budget = _as_budget(budget)
    return (
        find_homomorphism(g, h, budget=budget) is not None
        and find_homomorphism(h, g, budget=budget) is not None
    )


def is_isomorphic(g: Digraph, h: Digraph, budget: Budget | int | None = None) -> VertexMap | None:
    """Isomorphism witness for small digraphs, via an injective homomorphism.

    An injective hom between digraphs with equal vertex and arc counts is a
    bijection that maps the arc set onto the arc set.
    """
    if g.n != h.n or g.arc_count != h.arc_count:
        return None
    return find_homomorphism(g, h, injective=True, budget=budget)


@dataclass(frozen=True)
class SurjectivityResult:
    """Outcome of checking ``g ->> h``."""

    has_hom: bool
    all_surjective: bool
    witness: VertexMap | None = None
    missed_vertex: int | None = None

    def __bool__(self) -> bool:
        return self.all_surjective


def check_surjectivity(
    g: Digraph, h: Digraph, budget: Budget | int | None = None
) -> SurjectivityResult:
    """Decide whether ``g -> h`` holds and every such hom is onto.

    A non-surjective hom misses some vertex ``v``, i.e. it is a hom into
    ``h - v``; so the check is one search per target vertex.
    """
    budget = _as_budget(budget)
    first = find_homomorphism(g, h, budget=budget)
    if first is None:
        return SurjectivityResult(False, False)
    missed = sorted(set(range(h.n)) - first.image())
    if missed:
        return SurjectivityResult(True, False, first, missed[0])
    for v in range(h.n):
        m = find_homomorphism(g, h, allowed=[a for a in range(h.n) if a != v], budget=budget)
        if m is not None:
            return SurjectivityResult(True, False, m, v)
    return SurjectivityResult(True, True, first)


def all_homs_to_target_surjective(
    g: Digraph, h: Digraph, budget: Budget | int | None = None
) -> bool:
    """``g ->> h``: a hom exists and every hom is surjective."""
    return check_surjectivity(g, h, budget).all_surjective


def dominated_pair(g: Digraph) -> tuple[int, int] | None:
    """A pair ``(u, w)`` with ``u != w`` whose neighbourhoods satisfy
    ``N+(u) ⊆ N+(w)`` and ``N-(u) ⊆ N-(w)``; folding ``u`` onto ``w`` is a
    retract, so such a digraph is not a core."""
    out, inn = g.out_mask, g.in_mask
    for u in range(g.n):
        ou, iu = out[u], inn[u]
        for w in range(g.n):
            if w != u and ou & ~out[w] == 0 and iu & ~inn[w] == 0:
                return u, w
    return None


def _endomorphisms_all_bijective(g: Digraph, budget: Budget) -> VertexMap | None:
    """Return a non-surjective endomorphism if there is one, else None."""
    for m in iter_homomorphisms(g, g, budget=budget):
        if not m.is_injective():
            return m
    return None


def is_core(
    g: Digraph,
    budget: Budget | int | None = None,
    method: str = "auto",
) -> bool:
    """True iff no homomorphism ``g -> g - v`` exists for any vertex ``v``.

    ``method`` selects how the negative searches are organised:
    ``"deletion"`` runs one search per vertex, ``"endomorphisms"`` enumerates
    endomorphisms once and stops at the first non-bijective one. ``"auto"``
    first tries the enumeration with a small probe budget (cheap when the
    digraph has few endomorphisms) and falls back to the deletion searches.
    All methods start with a domination pre-check.
    """
    budget = _as_budget(budget)
    if g.n <= 1:
        return True
    if dominated_pair(g) is not None:
        return False
    if method == "endomorphisms":
        return _endomorphisms_all_bijective(g, budget) is None
    if method not in ("auto", "deletion"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        room = budget.max_nodes - budget.nodes
        probe = Budget(min(AUTO_PROBE_NODES, room))
        try:
            return _endomorphisms_all_bijective(g, probe) is None
        except SearchBudgetExceeded:
            pass
        finally:
            budget.charge(probe.nodes)
    for v in range(g.n):
        if find_homomorphism(g, g, allowed=[a for a in range(g.n) if a != v], budget=budget):
            return False
    return True


@dataclass(frozen=True)
class CoreResult:
    """A core of ``graph`` as an induced subgraph plus a retract onto it.

    ``vertices[i]`` is the original index of core vertex ``i``; ``retraction``
    is an idempotent endomorphism of ``graph`` whose image is ``vertices``.
    ``certified`` is False only on the partial result attached to a
    :class:`SearchBudgetExceeded`.
    """

    graph: Digraph
    core: Digraph
    vertices: tuple[int, ...]
    retraction: VertexMap
    certified: bool = True

    @property
    def projection(self) -> VertexMap:
        """The retraction viewed as a map ``graph -> core``."""
        index = {v: i for i, v in enumerate(self.vertices)}
        return VertexMap(self.graph, self.core, tuple(index[x] for x in self.retraction.images))

    def __len__(self) -> int:
        return self.core.n


def _fold_to(g: Digraph, phi: list[int], cur: list[int]) -> CoreResult:
    """Turn a map ``g -> g`` with image ``cur`` into a retract onto ``cur``."""
    cur = sorted(cur)
    curset = set(cur)
    # phi restricted to cur is a permutation of cur when cur induces a core;
    # in the uncertified case it may not be, so fall back to idempotent repair.
    restricted = {v: phi[v] for v in cur}
    if set(restricted.values()) == curset:
        inverse = {b: a for a, b in restricted.items()}
        images = tuple(inverse[phi[v]] for v in range(g.n))
    else:
        images = tuple(phi[v] if phi[v] in curset else v for v in range(g.n))
    core, keep = g.induced_subgraph(cur)
    return CoreResult(g, core, tuple(keep), VertexMap(g, g, images))


def compute_core(g: Digraph, budget: Budget | int | None = None) -> CoreResult:
    """Compute a core of ``g`` with a retraction witness.

    Dominated vertices are folded first; then each remaining vertex ``v`` is
    tested for a hom of the current image into itself minus ``v``, jumping
    to the image of every hom found. A vertex that cannot be avoided stays
    unavoidable in every smaller hom-equivalent image, so each vertex is
    tested at most once.
    """
    budget = _as_budget(budget)
    phi = list(range(g.n))
    cur = list(range(g.n))

    def apply(m_images, keep):
        nonlocal phi, cur
        index = {v: i for i, v in enumerate(keep)}
        phi = [keep[m_images[index[x]]] for x in phi]
        cur = sorted(set(phi))

    while True:
        sub, keep = g.induced_subgraph(cur)
        pair = dominated_pair(sub)
        if pair is None:
            break
        u, w = pair
        images = list(range(sub.n))
        images[u] = w
        apply(images, keep)

    checked: set[int] = set()
    try:
        while True:
            progress = False
            for v in cur:
                if v in checked:
                    continue
                sub, keep = g.induced_subgraph(cur)
                iv = keep.index(v)
                m = find_homomorphism(
                    sub, sub, allowed=[a for a in range(sub.n) if a != iv], budget=budget
                )
                if m is None:
                    checked.add(v)
                    continue
                apply(m.images, keep)
                progress = True
                break
            if not progress:
                break
    except SearchBudgetExceeded as exc:
        partial = _fold_to(g, phi, cur)
        partial = CoreResult(partial.graph, partial.core, partial.vertices, partial.retraction, False)
        raise SearchBudgetExceeded(str(exc), partial) from None
    return _fold_to(g, phi, cur)


def minimal_target_subgraph(
    source: Digraph, target: Digraph, budget: Budget | int | None = None
) -> tuple[list[int], VertexMap] | None:
    """Inclusion-minimal vertex set ``S`` of ``target`` with ``source -> target[S]``.

    Returns ``(S, hom)`` where ``hom: source -> target`` has image inside
    ``S``, or None when ``source`` does not map to ``target`` at all.
    Removing a single vertex is enough to test minimality: if a smaller set
    worked, so would ``S - v`` for any ``v`` outside it.
    """
    budget = _as_budget(budget)
    m = find_homomorphism(source, target, budget=budget)
    if m is None:
        return None
    cur = set(m.images)
    checked: set[int] = set()
    while True:
        for v in sorted(cur):
            if v in checked:
                continue
            trial = find_homomorphism(source, target, allowed=sorted(cur - {v}), budget=budget)
            if trial is None:
                checked.add(v)
                continue
            m = trial
            cur = set(trial.images)
            break
        else:
            return sorted(cur), m
