import pytest

from linfcourant.checks import dgla_axioms_check, embedding_check
from linfcourant.cotangent import (
    CoordinateSystem, canonical_S, embed_small, getzler_source_check, large_g, poisson_bracket,
    pullback_form, restrict_to_small,
)
from linfcourant.dgla import SmallG
from linfcourant.errors import InvalidInputError
from linfcourant.forms import partial, vol
from linfcourant.parser import parse_field, parse_form
from linfcourant.sampling import Sampler


def sgn(e):
    return -1 if e % 2 else 1


@pytest.fixture(params=[1, 2, 3])
def sys3(request):
    return CoordinateSystem(3, request.param)


def test_darboux_relations(sys3):
    s = sys3
    assert poisson_bracket(s.P(1), s.x(1)) == s.one()
    assert poisson_bracket(s.x(1), s.P(2)) == s.zero()
    assert poisson_bracket(s.v(1), s.p(1)) == sgn(s.r) * s.one()
    assert poisson_bracket(s.p(1), s.v(1)) == s.one()
    assert poisson_bracket(s.x(1) * s.x(2), s.P(1)) == -s.x(2)


def test_darboux_sign_frozen():
    # the adopted table gives {x1, P1} = -1; the opposite reading is +1
    s = CoordinateSystem(3, 2)
    assert poisson_bracket(s.x(1), s.P(1)) == -s.one()
    assert poisson_bracket(s.x(1), s.P(1)) != s.one()


def test_odd_variables_square_to_zero():
    s = CoordinateSystem(3, 2)  # v and p odd
    assert not s.v(1) * s.v(1) and not s.p(2) * s.p(2)
    assert s.v(1) * s.v(2) == -(s.v(2) * s.v(1))
    assert s.P(1) * s.P(1)
    s1 = CoordinateSystem(3, 1)  # p even, P odd
    assert s1.p(1) * s1.p(1) and not s1.P(1) * s1.P(1)


def test_canonical_S(sys3):
    s = sys3
    S = canonical_S(s)
    assert not poisson_bracket(S, S)
    x1 = pullback_form(parse_form("x1", 3), s)
    assert poisson_bracket(S, x1) == s.v(1)
    assert not poisson_bracket(S, pullback_form(parse_form("dx1", 3), s))
    smp = Sampler(s.r, 3)
    for _ in range(20):
        w = smp.form(smp.rng.randint(0, 3))
        assert poisson_bracket(S, pullback_form(w, s)) == pullback_form(w.d(), s)


def test_pullback_examples():
    s = CoordinateSystem(3, 2)
    assert pullback_form(parse_form("x1*dx2", 3), s) == s.x(1) * s.v(2)
    assert pullback_form(parse_form("dx1^dx2", 3), s) == s.v(1) * s.v(2)
    assert pullback_form(parse_form("1", 3), s) == s.one()
    assert pullback_form(vol(3), s).degree == 1
    with pytest.raises(InvalidInputError):
        pullback_form(vol(2), s)


def test_embed_examples():
    s = CoordinateSystem(3, 2)
    g = SmallG(3, 2)
    assert embed_small(g.element(iota=partial(3, 1)), s) == s.p(1)
    Y = parse_field("x1*d1", 3)
    assert embed_small(g.element(lie=Y), s) == s.x(1) * s.P(1) + s.v(1) * s.p(1)
    assert embed_small(g.element(form=parse_form("dx1^dx2", 3)), s) == s.v(1) * s.v(2)


def test_restrict_inverts_embedding():
    g = SmallG(3, 2)
    s = CoordinateSystem(3, 2)
    smp = Sampler(1, 3)
    for _ in range(30):
        e = g.sample(smp, smp.choice([-2, -1]))
        assert restrict_to_small(embed_small(e, s), s) == e


@pytest.mark.parametrize("r", [1, 2, 3])
def test_large_model_axioms(r):
    n = 4 if r == 3 else 3
    smp = Sampler(30 + r, n)
    sigma = smp.closed_form(r + 1)
    assert sigma
    for g in (large_g(n, r), large_g(n, r, sigma)):
        rep = dgla_axioms_check(g, smp, 25)
        assert rep.passed, rep.failures[:1]


def test_poisson_leibniz():
    s = CoordinateSystem(3, 2)
    G = large_g(3, 2)
    smp = Sampler(3, 3)
    for _ in range(30):
        f, g, h = (G.sample(smp, smp.choice([-2, -1, 0, 1])) for _ in range(3))
        wf, wg = f.degree + 2, g.degree + 2
        lhs = poisson_bracket(f, g * h)
        rhs = poisson_bracket(f, g) * h + sgn((wf - s.r) * wg) * (g * poisson_bracket(f, h))
        assert lhs == rhs


@pytest.mark.parametrize("r", [1, 2, 3])
def test_embedding_intertwines(r):
    n = 4 if r == 3 else 3
    smp = Sampler(40 + r, n)
    rep = embedding_check(n, r, smp.closed_form(r + 1), smp, 40)
    assert rep.passed, rep.failures[:1]


def test_getzler_source_r2():
    rep = getzler_source_check(3, 2, vol(3), Sampler(0, 3))
    assert rep["injective_on_samples"]
    assert rep["fiber_linear_parts_agree"]
    assert not rep["missing_fiber_linear"][-1] and not rep["missing_fiber_linear"][-2]


def test_getzler_source_r1_pure_momentum_monomials():
    rep = getzler_source_check(3, 1, vol(3), Sampler(0, 3))
    assert rep["fiber_linear_parts_agree"]
    assert not rep["negative_parts_agree"]
    assert "p1**2" in rep["missing"][-1]


def test_getzler_source_rejects_open_sigma():
    with pytest.raises(InvalidInputError):
        getzler_source_check(4, 1, parse_form("x4*dx1^dx2", 4))


def test_mixed_systems_rejected():
    a, b = CoordinateSystem(3, 1), CoordinateSystem(3, 2)
    with pytest.raises(InvalidInputError):
        poisson_bracket(a.x(1), b.P(1))
