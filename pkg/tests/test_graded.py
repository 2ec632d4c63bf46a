from itertools import permutations
from math import comb

import pytest
from hypothesis import given, strategies as st

from linfcourant.dgla import SmallG
from linfcourant.errors import InvalidInputError
from linfcourant.forms import partial
from linfcourant.graded import (
    MultiMap, koszul_sign, nr_associator, nr_associator_closed, nr_bracket, nr_product,
    ordered_unshuffles, unshuffle_apply, unshuffles,
)
from linfcourant.sampling import Sampler


def test_koszul_sign_examples():
    assert koszul_sign((0, 1), [3, 7]) == 1
    assert koszul_sign((1, 0), [1, 1]) == 1
    assert koszul_sign((1, 0), [1, 2]) == -1
    assert koszul_sign((1, 0), [1, 1], skew=False) == -1


def test_koszul_sign_length_mismatch():
    with pytest.raises(InvalidInputError):
        koszul_sign((0, 1), [1])
    with pytest.raises(InvalidInputError):
        koszul_sign((0, 0), [1, 1])


degree_lists = st.lists(st.integers(-3, 3), min_size=1, max_size=5)


@given(degree_lists, st.data())
def test_koszul_sign_multiplicative(degs, data):
    n = len(degs)
    p = data.draw(st.permutations(range(n)))
    q = data.draw(st.permutations(range(n)))
    moved = [degs[i] for i in p]
    composite = tuple(p[i] for i in q)
    assert koszul_sign(composite, degs) == koszul_sign(p, degs) * koszul_sign(q, moved)


def test_unshuffles_examples():
    assert unshuffles(1, 1) == ((0, 1), (1, 0))
    assert len(unshuffles(2, 1)) == 3
    assert unshuffles(0, 3) == ((0, 1, 2),)


@pytest.mark.parametrize("j,k", [(1, 1), (2, 1), (1, 3), (2, 2), (3, 2), (0, 2)])
def test_unshuffles_partition_cosets(j, k):
    perms = unshuffles(j, k)
    assert len(perms) == comb(j + k, j) == len(set(perms))
    assert list(perms) == sorted(perms)
    # every permutation of S_{j+k} reduces to exactly one unshuffle
    reps = {tuple(sorted(p[:j])) + tuple(sorted(p[j:])) for p in permutations(range(j + k))}
    assert reps == set(perms)


def test_unshuffle_apply_examples():
    terms = unshuffle_apply(1, 1, ("a", "b"), [1, 1])
    assert [(t.permutation, t.sign, xs) for t, xs in terms] == [
        ((0, 1), 1, ("a", "b")), ((1, 0), 1, ("b", "a"))]
    ordered = unshuffle_apply(1, 1, ("a", "b"), [1, 1], ordered=True)
    assert [(t.permutation, xs) for t, xs in ordered] == [((0, 1), ("a", "b"))]
    assert len(unshuffle_apply(2, 1, "abc", [0, 0, 0])) == 3


def test_ordered_unshuffles_cases():
    assert ordered_unshuffles(1, 2) == unshuffles(1, 2)
    assert ordered_unshuffles(2, 2) == ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2))


@given(degree_lists)
def test_unshuffle_signs_match_koszul(degs):
    n = len(degs)
    for j in range(n + 1):
        for t, _ in unshuffle_apply(j, n - j, list(range(n)), degs):
            assert t.sign == koszul_sign(t.permutation, degs)


# Nijenhuis-Richardson calculus on maps of the semidirect product --------------

def sgn(e):
    return -1 if e % 2 else 1


G = SmallG(3, 2)
SP = G.space


def ad(x, deg):
    return MultiMap(1, deg, lambda y: G.bracket(x, y), SP, name="ad")


def maps():
    s = Sampler(77, 3)
    br = G.bracket_map
    d = G.differential
    ad0 = ad(G.element(lie=s.field()), 0)
    ad_m1 = ad(G.element(iota=partial(3, 1) + s.field()), -1)
    ad1 = ad(G.element(form=s.form(3)), 1)
    return {"d": d, "br": br, "ad0": ad0, "ad-1": ad_m1, "ad1": ad1,
            "br<|ad0": nr_product(br, ad0), "br<|ad-1": nr_product(br, ad_m1)}


MAPS = maps()
DEGS = [-2, -1, 0, 1]


def args_for(k, seed):
    s = Sampler(seed, 3)
    return [G.sample(s, s.choice(DEGS)) for _ in range(k)]


def test_arity_one_product_is_composition():
    f, g = MAPS["ad0"], MAPS["ad-1"]
    for seed in range(10):
        (x,) = args_for(1, seed)
        assert nr_product(f, g)(x) == f(g(x))


def test_d_square_and_bracket():
    d = MAPS["d"]
    dd = nr_product(d, d)
    bb = nr_bracket(d, d)
    for seed in range(20):
        (x,) = args_for(1, seed)
        assert not dd(x)
        assert not bb(x)


def test_jacobiator_vanishes():
    br = MAPS["br"]
    jac = nr_product(br, br)
    s = Sampler(5, 3)
    for _ in range(20):
        xs = [G.element(lie=s.field()) for _ in range(3)]
        assert not jac(*xs)


def test_dgla_mc_cross_term():
    d, br = MAPS["d"], MAPS["br"]
    cross = nr_bracket(d, br)
    for seed in range(20):
        xs = args_for(2, seed)
        assert not cross(*xs)
        assert cross(*xs) == nr_product(d, br)(*xs) + nr_product(br, d)(*xs)


def test_self_bracket_even_nr_degree_vanishes():
    f = MAPS["ad0"]  # arity 1, degree 0: NR degree 0
    for seed in range(10):
        (x,) = args_for(1, seed)
        assert not nr_bracket(f, f)(x)


def test_nr_product_space_mismatch():
    other = SmallG(3, 1).differential
    with pytest.raises(InvalidInputError):
        nr_product(MAPS["d"], other)


def test_multimap_skew_symmetry():
    br = MAPS["br<|ad0"]
    for seed in range(20):
        x, y = args_for(2, seed)
        p, q = G.degree(x), G.degree(y)
        assert br(y, x) == -sgn(p * q) * br(x, y)




def _nrdeg(f):
    return f.arity + f.degree - 1


@pytest.mark.parametrize("a", ["br", "br<|ad0", "br<|ad-1", "ad0", "d"])
@pytest.mark.parametrize("b", ["ad0", "ad-1", "br", "ad1"])
@pytest.mark.parametrize("c", ["ad-1", "d", "br"])
def test_associator_closed_form(a, b, c):
    A, B, C = MAPS[a], MAPS[b], MAPS[c]
    lhs, rhs = nr_associator(A, B, C), nr_associator_closed(A, B, C)
    k = lhs.arity
    for seed in range(4):
        xs = args_for(k, 100 * seed + k)
        assert lhs(*xs) == rhs(*xs)


def test_associator_zero_for_unary_outer():
    A, B, C = MAPS["ad0"], MAPS["br"], MAPS["ad-1"]
    assoc = nr_associator(A, B, C)
    for seed in range(10):
        xs = args_for(assoc.arity, seed)
        assert not assoc(*xs)


def test_associator_nonvanishing_case():
    # two ad maps inserted side by side into the bracket
    A, B, C = MAPS["br"], MAPS["ad0"], MAPS["ad-1"]
    assoc = nr_associator(A, B, C)
    vals = [assoc(*args_for(2, seed)) for seed in range(30)]
    assert any(vals)


@pytest.mark.parametrize("b,c", [("ad0", "ad-1"), ("ad-1", "ad1"), ("ad0", "ad1"), ("d", "ad-1")])
def test_associator_right_symmetry(b, c):
    A, B, C = MAPS["br"], MAPS[b], MAPS[c]
    s = sgn(_nrdeg(B) * _nrdeg(C))
    left, right = nr_associator(A, B, C), nr_associator(A, C, B)
    for seed in range(10):
        xs = args_for(2, seed)
        assert left(*xs) == s * right(*xs)


@pytest.mark.parametrize("f,g,h", [("ad0", "ad-1", "ad1"), ("br", "ad0", "d"), ("br", "br", "ad-1"),
                                   ("d", "br", "ad1")])
def test_nr_bracket_jacobi(f, g, h):
    F, Gm, H = MAPS[f], MAPS[g], MAPS[h]
    df, dg, dh = _nrdeg(F), _nrdeg(Gm), _nrdeg(H)
    lhs = nr_bracket(F, nr_bracket(Gm, H))
    r1 = nr_bracket(nr_bracket(F, Gm), H)
    r2 = nr_bracket(Gm, nr_bracket(F, H))
    sign = sgn(df * dg)
    for seed in range(3):
        xs = args_for(lhs.arity, seed)
        assert lhs(*xs) == r1(*xs) + sign * r2(*xs)


@pytest.mark.parametrize("f,g", [("ad0", "ad-1"), ("br", "d"), ("br<|ad-1", "ad1")])
def test_nr_bracket_antisymmetry(f, g):
    F, Gm = MAPS[f], MAPS[g]
    sign = -sgn(_nrdeg(F) * _nrdeg(Gm))
    for seed in range(5):
        xs = args_for(F.arity + Gm.arity - 1, seed)
        assert nr_bracket(F, Gm)(*xs) == sign * nr_bracket(Gm, F)(*xs)
