import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equalisers.equaliser import enumerate_equaliser
from equalisers.morphisms import (
    Homomorphism,
    MapSet,
    apply,
    basis_map,
    compose,
    identity_map,
    image,
    is_injective,
    restrict,
)
from equalisers.stallings import fold, trivial_subgroup, whole_group
from equalisers.words import Alphabet, AlphabetMismatch, iter_reduced_words, parse_word
from oracles import all_reduced, naive_reduce, naive_substitute

AB = Alphabet("ab")
XY = Alphabet("xy")

short = st.text(alphabet="aAbB", max_size=4).map(naive_reduce)
image_pairs = st.tuples(short, short)


def hom(dom, cod, images):
    return Homomorphism.from_strings(dom, cod, images)


def test_apply_examples():
    g = hom(AB, XY, ["xy", "y"])
    assert str(apply(g, parse_word(AB, "abA"))) == "xyX"
    assert apply(g, AB.identity()).is_identity()
    g = hom(XY, AB, ["aa", "b"])
    assert str(g(parse_word(XY, "xy"))) == "aab"


@settings(max_examples=300)
@given(image_pairs, st.text("aAbB", max_size=10), st.text("aAbB", max_size=10))
def test_apply_is_a_homomorphism_and_matches_substitution(imgs, u, v):
    f = hom(AB, AB, list(imgs))
    wu, wv = parse_word(AB, u), parse_word(AB, v)
    assert apply(f, wu * wv) == apply(f, wu) * apply(f, wv)
    assert str(apply(f, wu)).replace("1", "") == naive_substitute({"a": imgs[0], "b": imgs[1]}, naive_reduce(u))


def test_compose_examples():
    g = hom(XY, AB, ["aa", "b"])
    assert compose(identity_map(AB), g) == g
    X1 = Alphabet(["x'", "y'"])
    XYZ = Alphabet("xyz")
    iota = hom(XYZ, X1, {"x": "x' x'", "y": "y' y'", "z": "x' y'"})
    g2 = hom(X1, AB, ["aa", "Aba"])
    assert str(compose(g2, iota)(parse_word(XYZ, "x"))) == "aaaa"
    swap = hom(AB, AB, ["b", "a"])
    assert compose(swap, swap) == identity_map(AB)


@settings(max_examples=100)
@given(image_pairs, image_pairs, image_pairs)
def test_compose_associative(p, q, r):
    f, g, h = (hom(AB, AB, list(t)) for t in (p, q, r))
    assert compose(f, compose(g, h)) == compose(compose(f, g), h)


def test_compose_rejects_mismatch():
    with pytest.raises(AlphabetMismatch):
        compose(hom(AB, XY, ["x", "y"]), hom(AB, XY, ["x", "y"]))


def test_is_injective_examples():
    assert is_injective(hom(AB, XY, ["x", "y"]))
    assert not is_injective(hom(XY, AB, ["aa", "aaa"]))
    assert not is_injective(hom(XY, AB, ["ab", "1"]))


def _kernel_witness(f, radius):
    for u in iter_reduced_words(f.domain, radius):
        if not u.is_identity() and apply(f, u).is_identity():
            return u
    return None


@settings(max_examples=80, deadline=None)
@given(image_pairs)
def test_is_injective_against_kernel_search(imgs):
    f = hom(XY, AB, list(imgs))
    witness = _kernel_witness(f, 6)
    if witness is not None:
        assert not is_injective(f)
    if is_injective(f):
        assert witness is None


def test_restrict_examples():
    g = hom(AB, XY, ["x", "y"])
    gK, basis = restrict(g, whole_group(AB))
    assert sorted(map(str, basis)) == ["a", "b"]
    K = fold([parse_word(AB, "aa"), parse_word(AB, "b")], AB)
    gK, basis = restrict(g, K)
    assert sorted(zip(map(str, basis), map(str, gK.images))) == [("aa", "xx"), ("b", "y")]
    assert list(gK.domain) == ["u1", "u2"]
    g0, b0 = restrict(g, trivial_subgroup(AB))
    assert len(g0.domain) == 0 and b0 == []


@settings(max_examples=40, deadline=None)
@given(image_pairs, image_pairs, st.lists(short.filter(bool), min_size=1, max_size=3))
def test_restriction_identity(gi, hi, kgens):
    to_xy = str.maketrans("aAbB", "xXyY")
    g = hom(AB, XY, [s.translate(to_xy) for s in gi])
    h = hom(AB, XY, [s.translate(to_xy) for s in hi])
    K = fold([parse_word(AB, s) for s in kgens], AB)
    r = 5
    lhs = {u for u in iter_reduced_words(AB, r) if K.member(u) and g(u) == h(u)}
    gK, basis = restrict(g, K)
    hK, _ = restrict(h, K)
    back = basis_map(basis, AB)
    # a path of length r in K's graph crosses at most r non-tree edges
    rhs = {back(u) for u in enumerate_equaliser(gK, hK, r)}
    rhs = {u for u in rhs if len(u) <= r}
    assert lhs == rhs


def test_image_and_identity():
    g = hom(XY, AB, ["ab", "abb"])
    assert image(g).is_whole()
    assert identity_map(AB).is_identity()
    assert not g.is_identity()


def test_mapset_validation():
    f = hom(AB, XY, ["x", "y"])
    with pytest.raises(ValueError):
        MapSet([f])
    with pytest.raises(ValueError):
        MapSet([f, hom(AB, XY, ["x", "y"])])
    with pytest.raises(AlphabetMismatch):
        MapSet([f, hom(AB, AB, ["a", "b"])])
    assert len(MapSet([f, hom(AB, XY, ["y", "x"])])) == 2


def test_from_strings_mapping_needs_every_generator():
    with pytest.raises(ValueError):
        hom(AB, XY, {"a": "x"})
    assert hom(AB, XY, {"b": "y", "a": "x"}) == hom(AB, XY, ["x", "y"])


def test_brute_oracle_sanity():
    assert len(all_reduced("ab", 2)) == 17
