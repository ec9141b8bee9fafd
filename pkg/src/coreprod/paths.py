"""Bounded paths, their words, heights, and the lattice of sums of paths.

A k-b-path is an oriented path of height ``k`` whose beginning is its only
vertex at height 0 and whose end is its only vertex at height ``k``. Its
word drops the first and last arcs (both forward) and lists the remaining
arcs as ``U``/``D`` steps; internal heights stay in ``[1, k-1]``. The single
arc (``k = 1``) has the empty word.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .digraph import Digraph, VertexMap, directed_path, disjoint_union, tensor_product
from .search import Budget, SearchBudgetExceeded, find_homomorphism

__all__ = [
    "DOWN",
    "PathWord",
    "SumOfPaths",
    "UP",
    "duality_witness",
    "enumerate_kb_paths",
    "height_profile",
    "kb_hom_exists",
    "kb_homomorphism",
    "lattice_laws",
    "maps_to_directed_path",
    "min_order",
    "path_from_word",
    "path_meet",
    "path_order",
    "random_sum",
    "sum_hom_exists",
    "sum_join",
    "sum_meet",
    "sum_normalize",
    "word_from_path",
]

UP, DOWN = 1, -1

DEFAULT_MEET_PATH_CAP = 200_000

_TOKEN_RE = re.compile(r"^([ud])(\d*)$")


@dataclass(frozen=True, order=True)
class PathWord:
    """Word of a k-b-path: ``steps`` over ``{UP, DOWN}`` and the height ``k``."""

    k: int
    steps: tuple[int, ...] = ()

    def __post_init__(self):
        steps = tuple(int(s) for s in self.steps)
        object.__setattr__(self, "steps", steps)
        if any(s not in (UP, DOWN) for s in steps):
            raise ValueError("steps must be +1 (up) or -1 (down)")
        if self.k < 1:
            raise ValueError("height must be at least 1")
        if self.k == 1:
            if steps:
                raise ValueError("the only 1-b-path is a single arc (empty word)")
            return
        if steps and steps[0] != UP:
            raise ValueError("first letter must be up")
        if steps and steps[-1] != UP:
            raise ValueError("last letter must be up")
        h = 1
        for i, s in enumerate(steps):
            h += s
            if not 1 <= h <= self.k - 1:
                raise ValueError(
                    f"height {h} after letter {i} leaves the window [1, {self.k - 1}]"
                )
        if h != self.k - 1:
            raise ValueError(f"word reaches height {h + 1}, not {self.k}")

    @classmethod
    def parse(cls, text: str, k: int) -> "PathWord":
        """Parse ``"U D U U"`` or the compressed ``"u1 d1 u2"`` form."""
        steps: list[int] = []
        for tok in text.replace(",", " ").split():
            t = tok.lower()
            if t in ("u", "↗"):
                steps.append(UP)
                continue
            if t in ("d", "↘"):
                steps.append(DOWN)
                continue
            m = _TOKEN_RE.match(t)
            if m is None or not m.group(2):
                raise ValueError(f"bad word token {tok!r}")
            steps += [UP if m.group(1) == "u" else DOWN] * int(m.group(2))
        return cls(k, tuple(steps))

    @classmethod
    def one(cls, k: int) -> "PathWord":
        """The directed path of height ``k``."""
        return cls(k, () if k == 1 else (UP,) * (k - 2))

    @property
    def full_steps(self) -> tuple[int, ...]:
        if self.k == 1:
            return (UP,)
        return (UP,) + self.steps + (UP,)

    @property
    def n_vertices(self) -> int:
        return len(self.full_steps) + 1

    def heights(self) -> list[int]:
        h = [0]
        for s in self.full_steps:
            h.append(h[-1] + s)
        return h

    def to_digraph(self) -> Digraph:
        return _digraph_of(self)

    def compressed(self) -> str:
        out = []
        for s in self.steps:
            c = "u" if s == UP else "d"
            if out and out[-1][0] == c:
                out[-1] = (c, out[-1][1] + 1)
            else:
                out.append((c, 1))
        return " ".join(f"{c}{n}" for c, n in out)

    def __str__(self) -> str:
        letters = " ".join("U" if s == UP else "D" for s in self.steps)
        return f"{letters or '()'} @k={self.k}"


@lru_cache(maxsize=4096)
def _digraph_of(w: PathWord) -> Digraph:
    arcs = []
    for i, s in enumerate(w.full_steps):
        arcs.append((i, i + 1) if s == UP else (i + 1, i))
    return Digraph(len(w.full_steps) + 1, arcs)


def path_from_word(w: PathWord) -> Digraph:
    """Oriented path of ``w``: vertex 0 is the beginning, the last vertex the end."""
    return w.to_digraph()


def path_order(p: Digraph, anchor: int) -> list[int]:
    """Vertices of an oriented path listed from ``anchor`` (an endpoint)."""
    if p.n == 0:
        raise ValueError("empty digraph is not a path")
    if not p.is_antisymmetric:
        raise ValueError("not an oriented path: contains a digon")
    if p.arc_count != p.n - 1 or len(p.components()) != 1:
        raise ValueError("not a path: underlying graph is not a tree on all vertices")
    if any(p.degree(v) > 2 for v in range(p.n)):
        raise ValueError("not a path: a vertex has degree above 2")
    if p.n > 1 and p.degree(anchor) != 1:
        raise ValueError(f"anchor {anchor} is not an endpoint")
    order = [anchor]
    prev = None
    cur = anchor
    while len(order) < p.n:
        nxt = [v for v in p.neighbors(cur) if v != prev]
        prev, cur = cur, nxt[0]
        order.append(cur)
    return order


def height_profile(p: Digraph, anchor: int) -> list[int]:
    """Heights along the path from ``anchor``: +1 per forward arc, -1 per backward arc."""
    order = path_order(p, anchor)
    prof = [0]
    for a, b in zip(order, order[1:]):
        prof.append(prof[-1] + (1 if p.has_arc(a, b) else -1))
    return prof


def word_from_path(p: Digraph, anchor: int | None = None) -> PathWord:
    """Recover the word of a k-b-path given as a digraph.

    Without an ``anchor`` both endpoints are tried; a k-b-path is never one
    read backwards, since that reading has negative height.
    """
    if anchor is None:
        ends = [v for v in range(p.n) if p.degree(v) <= 1]
        errors = []
        for e in ends:
            try:
                return word_from_path(p, e)
            except ValueError as exc:
                errors.append(str(exc))
        raise ValueError("not a k-b-path from either end: " + "; ".join(errors))
    order = path_order(p, anchor)
    full = [UP if p.has_arc(a, b) else DOWN for a, b in zip(order, order[1:])]
    k = sum(full)
    if not full or full[0] != UP or full[-1] != UP:
        raise ValueError("a k-b-path starts and ends with a forward arc")
    if k == 1:
        if len(full) != 1:
            raise ValueError("not a k-b-path")
        return PathWord(1, ())
    return PathWord(k, tuple(full[1:-1]))


def enumerate_kb_paths(k: int, max_vertices: int) -> Iterator[PathWord]:
    """All k-b-paths with at most ``max_vertices`` vertices, shortest first."""
    if k == 1:
        if max_vertices >= 2:
            yield PathWord(1, ())
        return
    # word length L gives L + 3 vertices; L has the parity of k - 2
    for length in range(k - 2, max_vertices - 2, 2):
        yield from _words(k, length)


def _words(k: int, length: int) -> Iterator[PathWord]:
    def rec(h: int, left: int, acc: list[int]):
        if left == 0:
            if h == k - 1:
                yield PathWord(k, tuple(acc))
            return
        if abs((k - 1) - h) > left:
            return
        for s in (DOWN, UP):
            nh = h + s
            if 1 <= nh <= k - 1:
                acc.append(s)
                yield from rec(nh, left - 1, acc)
                acc.pop()

    yield from rec(1, length, [])


@lru_cache(maxsize=65536)
def _kb_hom(p: PathWord, q: PathWord) -> tuple[int, ...] | None:
    if p.k != q.k:
        raise ValueError("paths must have the same height")
    if p.n_vertices < q.n_vertices:
        return None
    if p == q:
        return tuple(range(p.n_vertices))
    gp, gq = p.to_digraph(), q.to_digraph()
    m = find_homomorphism(gp, gq, {0: 0, gp.n - 1: gq.n - 1})
    return None if m is None else m.images


def kb_homomorphism(p: PathWord, q: PathWord) -> VertexMap | None:
    """A homomorphism ``p -> q``; beginnings and ends are pinned, which loses
    nothing because every such hom preserves heights."""
    images = _kb_hom(p, q)
    if images is None:
        return None
    return VertexMap(p.to_digraph(), q.to_digraph(), images)


def kb_hom_exists(p: PathWord, q: PathWord) -> bool:
    """``p -> q`` for k-b-paths of the same height (``|p| < |q|`` fails at once)."""
    return _kb_hom(p, q) is not None


# -- sums ------------------------------------------------------------------


def _normalize(k: int, paths: Iterable[PathWord]) -> tuple[PathWord, ...]:
    uniq = sorted(set(paths), key=lambda w: (w.n_vertices, w.steps))
    for w in uniq:
        if w.k != k:
            raise ValueError(f"path {w} does not have height {k}")
    kept = []
    for q in uniq:
        if any(kb_hom_exists(q, p) for p in uniq if p != q):
            continue
        kept.append(q)
    return tuple(kept)


@dataclass(frozen=True)
class SumOfPaths:
    """Disjoint union of pairwise incomparable k-b-paths.

    Construction normalizes: paths that map into another listed path are
    dropped, duplicates collapse. The empty sum is the lattice zero.
    """

    k: int
    elements: tuple[PathWord, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "elements", _normalize(self.k, self.elements))

    @classmethod
    def zero(cls, k: int) -> "SumOfPaths":
        return cls(k, ())

    @classmethod
    def one(cls, k: int) -> "SumOfPaths":
        return cls(k, (PathWord.one(k),))

    @property
    def is_zero(self) -> bool:
        return not self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def digraph(self) -> Digraph:
        return disjoint_union(*(w.to_digraph() for w in self.elements))

    def __or__(self, other: "SumOfPaths") -> "SumOfPaths":
        return sum_join(self, other)

    def __and__(self, other: "SumOfPaths") -> "SumOfPaths":
        return sum_meet(self, other)

    def __str__(self) -> str:
        if not self.elements:
            return f"0 @k={self.k}"
        return " + ".join(f"[{w}]" for w in self.elements)


def sum_normalize(paths: Sequence[PathWord], k: int | None = None) -> SumOfPaths:
    """Normalize a list of same-height paths into a sum (empty list gives 0)."""
    if k is None:
        if not paths:
            raise ValueError("height is needed to normalize an empty list")
        k = paths[0].k
    return SumOfPaths(k, tuple(paths))


def _check_k(a: SumOfPaths, b: SumOfPaths) -> None:
    if a.k != b.k:
        raise ValueError(f"heights differ: {a.k} vs {b.k}")


def sum_join(a: SumOfPaths, b: SumOfPaths) -> SumOfPaths:
    """The join: normalized union of the two element lists."""
    _check_k(a, b)
    return SumOfPaths(a.k, a.elements + b.elements)


def sum_hom_exists(a: SumOfPaths, b: SumOfPaths) -> bool:
    """``a -> b``: every element of ``a`` maps into some element of ``b``."""
    _check_k(a, b)
    return all(any(kb_hom_exists(p, q) for q in b.elements) for p in a.elements)


@lru_cache(maxsize=4096)
def _path_meet_words(p: PathWord, q: PathWord, cap: int) -> tuple[PathWord, ...]:
    gp, gq = p.to_digraph(), q.to_digraph()
    hp, hq = p.heights(), q.heights()
    prod, _, _ = tensor_product(gp, gq)
    m = gq.n
    # only pairs at equal height can lie on a path from (b, b)
    alive = [hp[i // m] == hq[i % m] for i in range(prod.n)]
    start, goal = 0, prod.n - 1
    nbrs = []
    for v in range(prod.n):
        if not alive[v]:
            nbrs.append(())
            continue
        row = [(w, UP) for w in prod.out_neighbors(v) if alive[w]]
        row += [(w, DOWN) for w in prod.in_neighbors(v) if alive[w]]
        nbrs.append(tuple(sorted(row)))
    found: set[tuple[int, ...]] = set()
    count = 0
    visited = [False] * prod.n
    visited[start] = True
    steps: list[int] = []
    stack = [(start, iter(nbrs[start]))]
    while stack:
        v, it = stack[-1]
        advanced = False
        for w, s in it:
            if visited[w]:
                continue
            if w == goal:
                count += 1
                if count > cap:
                    raise SearchBudgetExceeded(f"meet enumeration exceeded {cap} paths")
                found.add(tuple(steps + [s]))
                continue
            if w == start:
                continue
            visited[w] = True
            steps.append(s)
            stack.append((w, iter(nbrs[w])))
            advanced = True
            break
        if not advanced:
            stack.pop()
            visited[v] = False
            if steps and stack:
                steps.pop()
    k = p.k
    words = []
    for full in sorted(found):
        words.append(PathWord(k, () if k == 1 else full[1:-1]))
    return tuple(words)


def path_meet(p: PathWord, q: PathWord, cap: int = DEFAULT_MEET_PATH_CAP) -> SumOfPaths:
    """Meet of two k-b-paths: the normalized set of k-b-paths running inside
    ``p x q`` from ``(b_p, b_q)`` to ``(e_p, e_q)``."""
    if p.k != q.k:
        raise ValueError("paths must have the same height")
    return SumOfPaths(p.k, _path_meet_words(p, q, cap))


def sum_meet(a: SumOfPaths, b: SumOfPaths, cap: int = DEFAULT_MEET_PATH_CAP) -> SumOfPaths:
    """The meet: join over all element pairs of their path meets."""
    _check_k(a, b)
    words: list[PathWord] = []
    for p in a.elements:
        for q in b.elements:
            words += _path_meet_words(p, q, cap)
    return SumOfPaths(a.k, tuple(words))


def min_order(a: SumOfPaths) -> int:
    """Smallest vertex count among the elements; undefined for 0."""
    if a.is_zero:
        raise ValueError("min-order of the zero sum is undefined")
    return min(w.n_vertices for w in a.elements)


def duality_witness(
    g: Digraph, k: int, max_vertices: int, budget: Budget | int | None = None
) -> PathWord | None:
    """Smallest k-b-path (up to ``max_vertices``) mapping to ``g``.

    Such a path exists iff ``g`` does not map to the directed path on ``k``
    vertices; None here only means none was found within the size cap.
    """
    for w in enumerate_kb_paths(k, max_vertices):
        if find_homomorphism(w.to_digraph(), g, budget=budget) is not None:
            return w
    return None


def maps_to_directed_path(g: Digraph, k: int, budget: Budget | int | None = None) -> bool:
    """``g ->`` the directed path on ``k`` vertices."""
    return find_homomorphism(g, directed_path(k), budget=budget) is not None


def random_sum(rng: random.Random, k: int, max_vertices: int, max_elements: int = 3) -> SumOfPaths:
    """A sum of up to ``max_elements`` random k-b-paths of bounded size
    (after normalisation it may have fewer)."""
    pool = list(enumerate_kb_paths(k, max_vertices))
    size = rng.randint(0, min(max_elements, len(pool)))
    return SumOfPaths(k, tuple(rng.sample(pool, size)))


def lattice_laws(a: SumOfPaths, b: SumOfPaths, c: SumOfPaths) -> dict[str, bool]:
    """Evaluate the distributive-lattice identities on one triple."""
    _check_k(a, b)
    _check_k(b, c)
    zero, one = SumOfPaths.zero(a.k), SumOfPaths.one(a.k)
    return {
        "join_commutative": (a | b) == (b | a),
        "meet_commutative": (a & b) == (b & a),
        "join_associative": ((a | b) | c) == (a | (b | c)),
        "meet_associative": ((a & b) & c) == (a & (b & c)),
        "absorption_meet_join": (a & (a | b)) == a,
        "absorption_join_meet": (a | (a & b)) == a,
        "meet_distributes": (a & (b | c)) == ((a & b) | (a & c)),
        "join_distributes": (a | (b & c)) == ((a | b) & (a | c)),
        "zero_identity": (a | zero) == a and (a & zero) == zero,
        "one_identity": (a & one) == a and (a | one) == one,
    }
