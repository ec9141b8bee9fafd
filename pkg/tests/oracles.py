"""Brute-force reference implementations used as test oracles.

Nothing here calls the search engine: every answer comes from plain
enumeration of maps, permutations or step sequences.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from coreprod.digraph import Digraph


def arcs_of(g: Digraph) -> set[tuple[int, int]]:
    return set(g.arcs)


def brute_homs(g: Digraph, h: Digraph):
    """Every homomorphism ``g -> h`` as a tuple of images."""
    ga, ha = sorted(g.arcs), arcs_of(h)
    for imgs in itertools.product(range(h.n), repeat=g.n):
        if all((imgs[u], imgs[v]) in ha for u, v in ga):
            yield imgs


def brute_has_hom(g: Digraph, h: Digraph) -> bool:
    return next(brute_homs(g, h), None) is not None


def brute_core_size(g: Digraph) -> int:
    """Smallest image of an endomorphism."""
    return min(len(set(m)) for m in brute_homs(g, g)) if g.n else 0


def brute_is_core(g: Digraph) -> bool:
    return all(len(set(m)) == g.n for m in brute_homs(g, g))


def brute_all_onto(g: Digraph, h: Digraph) -> bool:
    """A hom exists and each one is surjective."""
    homs = list(brute_homs(g, h))
    return bool(homs) and all(len(set(m)) == h.n for m in homs)


def brute_isomorphic(g: Digraph, h: Digraph) -> bool:
    if g.n != h.n or g.arc_count != h.arc_count:
        return False
    ha = arcs_of(h)
    return any(
        all((p[u], p[v]) in ha for u, v in g.arcs)
        for p in itertools.permutations(range(h.n))
    )


def canonical_form(g: Digraph) -> tuple:
    return min(
        tuple(sorted((p[u], p[v]) for u, v in g.arcs))
        for p in itertools.permutations(range(g.n))
    )


@lru_cache(maxsize=None)
def all_digraphs(n: int) -> tuple[Digraph, ...]:
    """Every loopless labelled digraph on ``n`` vertices."""
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    out = []
    for mask in range(1 << len(pairs)):
        out.append(Digraph(n, [p for i, p in enumerate(pairs) if mask >> i & 1]))
    return tuple(out)


@lru_cache(maxsize=None)
def digraph_classes(n: int) -> tuple[Digraph, ...]:
    """One representative per isomorphism class on ``n`` vertices."""
    seen = {}
    for g in all_digraphs(n):
        seen.setdefault(canonical_form(g), g)
    return tuple(seen.values())


def brute_kb_step_words(k: int, max_vertices: int) -> set[tuple[int, ...]]:
    """Full step sequences (+1 forward, -1 backward) of every k-b-path with at
    most ``max_vertices`` vertices, from the definition: net height ``k``,
    heights in ``[0, k]``, height 0 only at the start and ``k`` only at the end."""
    out = set()
    for arcs in range(1, max_vertices):
        for steps in itertools.product((1, -1), repeat=arcs):
            hs = list(itertools.accumulate(steps, initial=0))
            if hs[-1] != k or min(hs) < 0 or max(hs) > k:
                continue
            if hs.count(0) == 1 and hs.count(k) == 1:
                out.add(steps)
    return out


def mountain_steps(peaks, k: int) -> tuple[int, ...]:
    """Steps of the mountain with the given peaks: an up step, then each
    peak up and down, then ``k + 1`` up steps."""
    steps = [1]
    for x in peaks:
        steps += [1] * x + [-1] * x
    steps += [1] * (k + 1)
    return tuple(steps)


def path_digraph(steps) -> Digraph:
    arcs = [(i, i + 1) if s > 0 else (i + 1, i) for i, s in enumerate(steps)]
    return Digraph(len(steps) + 1, arcs)


def independent_partitions(g: Digraph):
    """Every set partition of the vertices into arc-free classes."""
    n = g.n
    adj = {(u, v) for u, v in g.arcs} | {(v, u) for u, v in g.arcs}

    def rec(i, blocks):
        if i == n:
            yield [list(b) for b in blocks]
            return
        for b in blocks:
            if all((i, x) not in adj for x in b):
                b.append(i)
                yield from rec(i + 1, blocks)
                b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


def path_hom_exists(steps, h: Digraph) -> bool:
    """Whether the oriented path with ``steps`` maps to ``h``.

    Sweep along the path keeping the set of possible images of the current
    vertex; exact because a path has no cycles.
    """
    ha = arcs_of(h)
    cur = set(range(h.n))
    for s in steps:
        if s > 0:
            cur = {y for x in cur for y in range(h.n) if (x, y) in ha}
        else:
            cur = {y for x in cur for y in range(h.n) if (y, x) in ha}
        if not cur:
            return False
    return True
