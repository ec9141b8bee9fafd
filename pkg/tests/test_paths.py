import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coreprod.digraph import Digraph, directed_path, disjoint_union, tensor_product
from coreprod.paths import (
    PathWord,
    SumOfPaths,
    duality_witness,
    enumerate_kb_paths,
    height_profile,
    kb_hom_exists,
    kb_homomorphism,
    lattice_laws,
    maps_to_directed_path,
    min_order,
    path_meet,
    random_sum,
    sum_hom_exists,
    sum_normalize,
    word_from_path,
)
from coreprod.search import find_homomorphism, is_core
from oracles import brute_has_hom, brute_is_core, brute_kb_step_words, path_digraph
from strategies import digraphs


def equivalent(g, h):
    return find_homomorphism(g, h) is not None and find_homomorphism(h, g) is not None


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_enumeration_matches_definition(k):
    got = {w.full_steps for w in enumerate_kb_paths(k, 10)}
    assert got == brute_kb_step_words(k, 10)


def test_word_validation():
    with pytest.raises(ValueError):
        PathWord(3, (-1, 1, 1))
    with pytest.raises(ValueError):
        PathWord(3, (1, 1, 1))
    with pytest.raises(ValueError):
        PathWord(1, (1,))
    assert PathWord.parse("u2 d1 u1", 4) == PathWord.parse("U U D U", 4)
    assert PathWord.parse("U U D U", 4).compressed() == "u2 d1 u1"
    assert PathWord.one(4).n_vertices == 5


def test_small_paths_are_cores_by_brute_force():
    for k in range(1, 5):
        for w in enumerate_kb_paths(k, 7):
            assert brute_is_core(w.to_digraph()), w


def test_paths_are_cores():
    for k in range(1, 6):
        for w in enumerate_kb_paths(k, 11):
            assert is_core(w.to_digraph()), w


def test_hom_matches_brute_force_small():
    words = [w for k in (2, 3) for w in enumerate_kb_paths(k, 7)]
    for p in words:
        for q in words:
            if p.k != q.k:
                continue
            assert kb_hom_exists(p, q) == brute_has_hom(p.to_digraph(), q.to_digraph())


@st.composite
def path_pairs(draw):
    k = draw(st.integers(2, 5))
    pool = list(enumerate_kb_paths(k, 12))
    return draw(st.sampled_from(pool)), draw(st.sampled_from(pool))


@given(path_pairs())
@settings(max_examples=150)
def test_hom_preserves_height_and_ends(pair):
    p, q = pair
    m = find_homomorphism(p.to_digraph(), q.to_digraph())
    if m is None:
        assert kb_homomorphism(p, q) is None
        return
    hp, hq = p.heights(), q.heights()
    assert all(hq[m[v]] == hp[v] for v in range(p.n_vertices))
    assert m[0] == 0 and m[p.n_vertices - 1] == q.n_vertices - 1
    assert m.is_surjective()


@given(path_pairs(), st.randoms(use_true_random=False))
def test_word_round_trip_under_relabelling(pair, rnd):
    w = pair[0]
    g = w.to_digraph()
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = Digraph(g.n, [(perm[a], perm[b]) for a, b in g.arcs])
    assert word_from_path(h) == w
    assert height_profile(g, 0) == w.heights()


def test_word_from_path_rejects_non_paths():
    with pytest.raises(ValueError):
        word_from_path(Digraph(3, [(0, 1), (0, 2), (1, 2)]))
    with pytest.raises(ValueError):
        word_from_path(path_digraph((1, -1, 1)))


@st.composite
def sums(draw, k=None):
    k = k or draw(st.integers(1, 4))
    pool = list(enumerate_kb_paths(k, 10))
    elems = draw(st.lists(st.sampled_from(pool), max_size=3))
    return SumOfPaths(k, tuple(elems))


@st.composite
def triples(draw):
    k = draw(st.integers(1, 4))
    return tuple(draw(sums(k)) for _ in range(3))


@given(triples())
@settings(max_examples=100)
def test_lattice_laws(t):
    laws = lattice_laws(*t)
    assert all(laws.values()), laws


@given(triples())
def test_normal_form_is_an_antichain(t):
    a = t[0]
    for p in a.elements:
        for q in a.elements:
            if p != q:
                assert not kb_hom_exists(p, q)


@given(triples())
@settings(max_examples=40)
def test_meet_is_the_product_and_join_the_union(t):
    a, b, _ = t
    if a.is_zero or b.is_zero:
        assert (a & b).is_zero
        return
    prod = tensor_product(a.digraph(), b.digraph())[0]
    assert equivalent((a & b).digraph(), prod)
    assert equivalent((a | b).digraph(), disjoint_union(a.digraph(), b.digraph()))


@given(triples())
def test_order_agrees_with_lattice_operations(t):
    a, b, _ = t
    le = sum_hom_exists(a, b)
    assert le == ((a | b) == b) == ((a & b) == a)


def test_meet_example_and_min_order():
    p = PathWord.parse("U D U U", 4)
    q = PathWord.parse("U U D U", 4)
    m = path_meet(p, q)
    assert not m.is_zero
    assert all(kb_hom_exists(w, p) and kb_hom_exists(w, q) for w in m.elements)
    assert min_order(sum_normalize([p, q])) == 7
    with pytest.raises(ValueError):
        min_order(SumOfPaths.zero(3))


def test_random_sum_is_reproducible():
    a = random_sum(random.Random(5), 3, 9)
    b = random_sum(random.Random(5), 3, 9)
    assert a == b


@given(digraphs(max_n=4), st.integers(1, 3))
def test_duality(g, k):
    w = duality_witness(g, k, 10)
    maps = maps_to_directed_path(g, k)
    if w is not None:
        # easy direction: a k-b-path into g rules out g -> P_k
        assert not maps
        assert find_homomorphism(w.to_digraph(), g) is not None
    if not maps:
        # converse, within the size cap
        assert w is not None
