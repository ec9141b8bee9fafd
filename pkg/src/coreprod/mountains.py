"""Mountains, the sequence criterion for mountain homomorphisms, decreasing
mountain families and their separating sequences."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

from .digraph import Digraph, product
from .paths import DOWN, UP, PathWord
from .search import Budget, find_homomorphism

__all__ = [
    "MountainSeq",
    "count_decreasing_mountains",
    "family_product_without",
    "family_size_report",
    "gen_decreasing_mountains",
    "mountain_from_sequence",
    "omega_sequence",
    "seq_homomorphic",
    "separator_report",
]

_LITERAL_RE = re.compile(r"^\s*\(?\s*([\d,\s]*?)\s*\)?\s*@\s*k\s*=\s*(\d+)\s*$")


@dataclass(frozen=True)
class MountainSeq:
    """Peak sequence ``(l_1, ..., l_r)`` with ``1 <= l_i <= k``.

    The mountain is the (k+2)-b-path whose word is each peak ``U^l D^l`` in
    turn followed by ``U^k``; it has ``2 * sum(peaks) + k + 3`` vertices.
    """

    peaks: tuple[int, ...]
    k: int

    def __post_init__(self):
        peaks = tuple(int(x) for x in self.peaks)
        object.__setattr__(self, "peaks", peaks)
        if self.k < 0:
            raise ValueError("k must be non-negative")
        for x in peaks:
            if not 1 <= x <= self.k:
                raise ValueError(f"peak {x} outside [1, {self.k}]")

    @classmethod
    def parse(cls, text: str) -> "MountainSeq":
        """Parse ``"3,1@k=3"`` (``"@k=3"`` alone is the peakless mountain)."""
        m = _LITERAL_RE.match(text)
        if m is None:
            raise ValueError(f"bad mountain literal {text!r}; expected e.g. '3,1@k=3'")
        body = m.group(1).strip().strip(",")
        peaks = tuple(int(t) for t in re.split(r"[,\s]+", body) if t) if body else ()
        return cls(peaks, int(m.group(2)))

    @property
    def height(self) -> int:
        return self.k + 2

    @property
    def is_decreasing(self) -> bool:
        return all(a > b for a, b in zip(self.peaks, self.peaks[1:]))

    @property
    def n_vertices(self) -> int:
        return 2 * sum(self.peaks) + self.k + 3

    def word(self) -> PathWord:
        return mountain_from_sequence(self)

    def to_digraph(self) -> Digraph:
        return self.word().to_digraph()

    def __str__(self) -> str:
        return ",".join(map(str, self.peaks)) + f"@k={self.k}"


def mountain_from_sequence(s: MountainSeq) -> PathWord:
    steps: list[int] = []
    for x in s.peaks:
        steps += [UP] * x + [DOWN] * x
    steps += [UP] * s.k
    return PathWord(s.k + 2, tuple(steps))


def _peaks(x: MountainSeq | Sequence[int]) -> tuple[int, ...]:
    return x.peaks if isinstance(x, MountainSeq) else tuple(x)


def seq_homomorphic(
    ell: MountainSeq | Sequence[int], r: MountainSeq | Sequence[int]
) -> bool:
    """Whether ``ell`` is homomorphic to ``r``.

    ``r`` must embed as a subsequence ``ell[j_1], ..., ell[j_q]`` such that
    everything up to ``j_1`` is at most ``r_1`` and everything between
    ``j_i`` and ``j_{i+1}`` is at most ``max(r_i, r_{i+1})``. After the last
    match there is no constraint (the final ascent absorbs any peak). All
    admissible embeddings are explored, not only the greedy one.
    """
    if isinstance(ell, MountainSeq) and isinstance(r, MountainSeq) and ell.k != r.k:
        raise ValueError("mountains must share k")
    a, b = _peaks(ell), _peaks(r)
    if not b:
        return True
    p = len(a)
    # reach: positions j where b[:i+1] is matched with the i-th match at j
    reach = []
    running = 0
    for j, x in enumerate(a):
        running = max(running, x)
        if running > b[0]:
            break
        if x == b[0]:
            reach.append(j)
    for i in range(1, len(b)):
        bound = max(b[i - 1], b[i])
        nxt = set()
        for j in reach:
            for j2 in range(j + 1, p):
                if a[j2] == b[i]:
                    nxt.add(j2)
                if a[j2] > bound:
                    break
        if not nxt:
            return False
        reach = sorted(nxt)
    return bool(reach)


def gen_decreasing_mountains(h: int, ell: int, anchored: bool = True) -> list[MountainSeq]:
    """Strictly decreasing ``ell``-peak sequences over ``[1, h-2]``.

    With ``anchored`` (the family definition) the first peak is ``h - 2``;
    otherwise every ``ell``-subset of ``[h-2]`` is listed.
    """
    if ell < 0:
        raise ValueError("peak count must be non-negative")
    if not h > ell + 2:
        raise ValueError(f"need h > l + 2, got h={h}, l={ell}")
    k = h - 2
    if ell == 0:
        return [MountainSeq((), k)]
    out = []
    for c in combinations(range(k, 0, -1), ell):
        if anchored and c[0] != k:
            continue
        out.append(MountainSeq(c, k))
    return out


def count_decreasing_mountains(h: int, ell: int) -> dict[str, int]:
    """Enumerated family sizes in both modes next to the two closed forms."""
    return {
        "anchored": len(gen_decreasing_mountains(h, ell, anchored=True)),
        "anchored_formula": comb(h - 3, ell - 1) if ell >= 1 else 1,
        "all_subsets": len(gen_decreasing_mountains(h, ell, anchored=False)),
        "stated_formula": comb(h - 2, ell),
    }


def omega_sequence(d: MountainSeq) -> MountainSeq:
    """Separating sequence for a decreasing mountain ``d``.

    It is ``d_1, ([d_1 - 1] minus d_2), d_2, ([d_2 - 1] minus d_3), ...,
    d_{l-1}, ([d_{l-1} - 1] minus d_l)`` where ``[m] minus x`` lists
    ``m, m-1, ..., 1`` without ``x``. A single-peak ``d`` has no blocks and
    yields just ``(d_1)``, which does not separate anything.
    """
    if not d.is_decreasing:
        raise ValueError(f"{d} is not strictly decreasing")
    p = d.peaks
    if not p:
        raise ValueError("the peakless mountain has no separator")
    if len(p) == 1:
        return MountainSeq(p, d.k)
    out: list[int] = []
    for i in range(len(p) - 1):
        out.append(p[i])
        out += [x for x in range(p[i] - 1, 0, -1) if x != p[i + 1]]
    return MountainSeq(tuple(out), d.k)


def family_product_without(
    family: Sequence[MountainSeq], d: MountainSeq, max_vertices: int | None = None
) -> Digraph:
    """Tensor product of every mountain of ``family`` except ``d``."""
    others = [m.to_digraph() for m in family if m != d]
    return product(others, max_vertices)


@dataclass(frozen=True)
class SeparatorReport:
    d: MountainSeq
    omega: MountainSeq
    omega_to_d_seq: bool
    omega_to_d_hom: bool
    omega_to_others_seq: dict[str, bool]
    omega_to_others_hom: dict[str, bool]
    product_to_d: bool | None

    @property
    def separates(self) -> bool:
        return (
            not self.omega_to_d_seq
            and not self.omega_to_d_hom
            and all(self.omega_to_others_seq.values())
            and all(self.omega_to_others_hom.values())
        )

    @property
    def independent(self) -> bool:
        return self.product_to_d is False


def separator_report(
    d: MountainSeq,
    family: Sequence[MountainSeq],
    check_product: bool = True,
    budget: Budget | int | None = None,
) -> SeparatorReport:
    """Check the separator of ``d`` both by the sequence criterion and by
    homomorphism search, and optionally that the other members' product
    does not map to ``d``."""
    om = omega_sequence(d)
    gom = om.to_digraph()

    def hom(a: Digraph, b: Digraph) -> bool:
        return find_homomorphism(a, b, budget=budget) is not None

    others = [m for m in family if m != d]
    prod_to_d = None
    if check_product and others:
        prod_to_d = hom(family_product_without(family, d), d.to_digraph())
    return SeparatorReport(
        d=d,
        omega=om,
        omega_to_d_seq=seq_homomorphic(om, d),
        omega_to_d_hom=hom(gom, d.to_digraph()),
        omega_to_others_seq={str(m): seq_homomorphic(om, m) for m in others},
        omega_to_others_hom={str(m): hom(gom, m.to_digraph()) for m in others},
        product_to_d=prod_to_d,
    )


def family_size_report(k: int) -> dict[str, object]:
    """Vertex-count extremes of the family with ``h = 2k + 2`` and ``k`` peaks.

    Counts come from the actual words (``2 * sum + (h - 2) + 3`` vertices)
    and are listed next to the quadratic forms quoted for this family.
    """
    h = 2 * k + 2
    fam = gen_decreasing_mountains(h, k)
    sizes = [m.n_vertices for m in fam]
    return {
        "k": k,
        "h": h,
        "members": len(fam),
        "min_vertices": min(sizes),
        "max_vertices": max(sizes),
        "min_formula": k * k + 5 * k + 3,
        "max_formula": 3 * k * k + 3 * k + 3,
        "quoted_min": k * k + 5 * k + 2,
        "quoted_max": 3 * k * k + 3 * k + 2,
        "quoted_members": comb(2 * k, k),
        "cone_gadget_min": 16 * min(sizes) - 4,
        "cone_gadget_max": 16 * max(sizes) - 4,
        "quoted_gadget_min": 16 * k * k + 80 * k + 12,
        "quoted_gadget_max": 48 * k * k + 48 * k + 12,
    }
