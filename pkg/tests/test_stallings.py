import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equalisers.morphisms import Homomorphism, apply, image
from equalisers.stallings import (
    NotAMember,
    UnsupportedPreimage,
    equal,
    fold,
    includes,
    intersect,
    preimage,
    to_dot,
    trivial_subgroup,
    whole_group,
)
from equalisers.words import Alphabet, iter_reduced_words, parse_word
from oracles import NaiveGraph, all_reduced, brute_subgroup_ball, naive_reduce

AB = Alphabet("ab")


def F(*gens, alphabet=AB):
    return fold([parse_word(alphabet, g) for g in gens], alphabet)


def w(s):
    return parse_word(AB, s)


gen_sets = st.lists(st.text(alphabet="aAbB", min_size=1, max_size=8).map(naive_reduce), min_size=1, max_size=4)


def test_fold_examples():
    G = F("ab", "abb")
    assert G.is_whole() and G.n_vertices == 1 and len(G.edges) == 2
    assert G.member(w("a")) and G.member(w("b"))
    T = fold([], AB)
    assert T.rank() == 0 and T.is_trivial() and T.n_vertices == 1
    G = F("aa", "b")
    assert (G.n_vertices, len(G.edges), G.rank()) == (2, 3, 2)


def test_member_examples():
    assert not F("aa", "bb").member(w("ab"))
    assert F("aa").member(AB.identity())
    assert F("ab", "abb").member(w("a"))
    assert w("a") in F("ab", "abb")


def test_express_examples():
    G = F("ab", "abb")
    e = G.express(w("b"))
    assert str(e) == "g1^-1 g2"
    assert G.express(AB.identity()).is_identity()
    assert str(F("aa", "b").express(w("aab"))) == "g1 g2"
    with pytest.raises(NotAMember):
        F("aa", "bb").express(w("ab"))


def test_rank_examples():
    assert F("aa", "bb", "ab").rank() == 3
    assert trivial_subgroup(AB).rank() == 0
    assert F("aa", "b").rank() == 2


def test_intersect_examples():
    I = intersect(F("aa", "b"), F("a", "bb"))
    assert I == F("aa", "bb")
    assert I.rank() == 2 and I.n_vertices == 3 and len(I.edges) == 4
    assert I.member(w("aa")) and I.member(w("bb")) and not I.member(w("ab"))
    G = F("ab", "aBa")
    assert intersect(G, G) == G
    assert intersect(F("ab"), F("aa", "bb")).is_trivial()


def test_includes_equal_examples():
    assert equal(F("a", "b"), F("ab", "abb"))
    assert includes(F("aab"), trivial_subgroup(AB))
    assert not includes(F("aa", "bb"), F("a", "b"))
    assert includes(F("a", "b"), F("aa", "bb"))


def test_preimage_examples():
    X = Alphabet("xy")
    g = Homomorphism.from_strings(X, AB, ["aa", "b"])
    P = preimage(g, F("aa", "bb"))
    assert P == fold([parse_word(X, "x"), parse_word(X, "yy")], X)
    assert preimage(g, fold(g.images, AB)).is_whole()
    ABC = Alphabet("abc")
    g2 = Homomorphism.from_strings(X, ABC, ["a", "b"])
    assert preimage(g2, F("a", alphabet=ABC)) == fold([parse_word(X, "x")], X)
    with pytest.raises(UnsupportedPreimage):
        preimage(Homomorphism.from_strings(X, AB, ["ab", "1"]), F("a"))


def test_to_dot_examples():
    d = to_dot(trivial_subgroup(AB))
    assert d.count("->") == 0 and "0 [shape=doublecircle" in d
    G = F("aa", "b")
    d = to_dot(G)
    assert d.count("->") == 3 and d.count('label="a"') == 2 and d.count('label="b"') == 1
    assert to_dot(G) == to_dot(F("b", "aa")) == d


@settings(max_examples=60, deadline=None)
@given(gen_sets)
def test_fold_agrees_with_naive_folding(gens):
    G = fold([w(g) for g in gens], AB)
    N = NaiveGraph(gens)
    assert G.rank() == N.rank()
    assert G.n_vertices == len(N.vertices)
    assert len(G.edges) == len(N.edges)
    for s in all_reduced("ab", 4):
        assert G.member(w(s)) == N.accepts(s)


@settings(max_examples=50, deadline=None)
@given(gen_sets, st.randoms(use_true_random=False))
def test_fold_confluence(gens, rnd):
    words = [w(g) for g in gens]
    shuffled = words[:]
    rnd.shuffle(shuffled)
    A = fold(words, AB, rng=random.Random(rnd.random()))
    B = fold(shuffled, AB, rng=random.Random(rnd.random()))
    assert A == B == fold(words, AB)
    assert hash(A) == hash(B)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.text(alphabet="aAbB", min_size=1, max_size=4).map(naive_reduce), min_size=1, max_size=3))
def test_membership_against_brute_force(gens):
    gens = [g for g in gens if g] or ["a"]
    G = fold([w(g) for g in gens], AB)
    brute = brute_subgroup_ball(gens, 6 if len(gens) == 3 else 8, 6)
    for s in all_reduced("ab", 6):
        m = G.member(w(s))
        if s in brute:
            assert m, s
        if m:
            e = G.express(w(s))
            # substitute the generator word back by hand
            out = ""
            for c in e.codes:
                piece = gens[abs(c) - 1]
                out += piece if c > 0 else "".join(ch.swapcase() for ch in reversed(piece))
            assert naive_reduce(out) == s


@settings(max_examples=40, deadline=None)
@given(gen_sets, gen_sets)
def test_intersection_membership(g1, g2):
    G = fold([w(g) for g in g1], AB)
    H = fold([w(g) for g in g2], AB)
    I = intersect(G, H)
    for u in iter_reduced_words(AB, 5):
        assert I.member(u) == (G.member(u) and H.member(u))
    assert includes(G, I) and includes(H, I)


def _rr(G):
    return max(G.rank() - 1, 0)


@settings(max_examples=200, deadline=None)
@given(gen_sets, gen_sets)
def test_strengthened_hanna_neumann(g1, g2):
    G = fold([w(g) for g in g1], AB)
    H = fold([w(g) for g in g2], AB)
    assert _rr(intersect(G, H)) <= _rr(G) * _rr(H)


@settings(max_examples=100, deadline=None)
@given(st.tuples(st.text("aAbB", min_size=1, max_size=6), st.text("aAbB", min_size=1, max_size=6)), gen_sets)
def test_rank_two_subgroups_are_inert(pair, other):
    G = fold([w(naive_reduce(s)) for s in pair], AB)
    if G.rank() != 2:
        return
    K = fold([w(g) for g in other], AB)
    assert intersect(G, K).rank() <= K.rank()


def test_known_inert_example():
    H = F("a", "bb")
    assert intersect(H, F("ab")).rank() <= 1
    assert intersect(H, trivial_subgroup(AB)).rank() == 0


@settings(max_examples=60, deadline=None)
@given(gen_sets)
def test_basis_round_trip(gens):
    G = fold([w(g) for g in gens], AB)
    B = G.basis()
    assert len(B) == G.rank() == len(G.edges) - G.n_vertices + 1
    assert fold(B.words, AB) == G
    assert len(B.via) == len(B)
    subst = Homomorphism(G.gen_alphabet, AB, list(G.generators))
    for word in B.words:
        assert G.member(word)
        assert apply(subst, G.express(word)) == word


@settings(max_examples=60, deadline=None)
@given(st.lists(st.text("aAbB", min_size=1, max_size=4).map(naive_reduce), min_size=2, max_size=2), gen_sets)
def test_preimage_contract(imgs, target):
    X = Alphabet("xy")
    g = Homomorphism(X, AB, [w(s) for s in imgs])
    A = fold([w(s) for s in target], AB)
    if image(g).rank() != 2:
        with pytest.raises(UnsupportedPreimage):
            preimage(g, A)
        return
    P = preimage(g, A)
    assert image(g, P) == intersect(A, image(g))
    for u in iter_reduced_words(X, 4):
        assert P.member(u) == A.member(apply(g, u))


def test_whole_group_and_trivial():
    assert whole_group(AB).is_whole() and whole_group(AB).rank() == 2
    assert trivial_subgroup(AB).member(AB.identity())
    assert not trivial_subgroup(AB).member(w("a"))
