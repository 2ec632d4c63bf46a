import pytest

from linfcourant.checks import (
    chi_beta_check, dgla_axioms_check, mc_twist_check, truncation_closure_check,
)
from linfcourant.dgla import (
    CartanDgla, CartanElement, SmallG, cartan_operator, chi_beta, chi_beta_series, gauge_action,
    mc_check, twisted_differential_table,
)
from linfcourant.errors import InvalidInputError, UnsupportedInputError
from linfcourant.forms import partial, vol
from linfcourant.parser import parse_field, parse_form
from linfcourant.sampling import Sampler


def F(src, n=3):
    return parse_form(src, n)


def test_small_g_bracket_table():
    g = SmallG(3, 2)
    X1 = g.element(iota=partial(3, 1))
    w = g.element(form=F("dx1^dx2"))
    assert g.bracket(X1, w) == g.element(form=F("dx2"))
    assert not g.bracket(X1, g.element(iota=partial(3, 2)))
    assert g.d(X1) == g.element(lie=partial(3, 1))
    Y = g.element(lie=parse_field("x1*d2", 3))
    assert g.bracket(Y, g.element(form=F("dx2"))) == g.element(form=F("dx1"))
    assert g.bracket(Y, g.element(lie=partial(3, 1))) == g.element(lie=-partial(3, 2))
    assert g.bracket(Y, X1) == g.element(iota=-partial(3, 2))


def test_small_g_reversed_form_iota_sign():
    # {alpha, X_(1)} = -(-1)^{|alpha|} {X_(1), alpha}
    g = SmallG(3, 2)
    X1 = g.element(iota=partial(3, 1))
    for src, deg in [("dx1^dx2", 0), ("dx1^dx2^dx3", 1), ("x2*dx1", -1)]:
        a = g.element(form=F(src))
        assert g.degree(a) == deg
        assert g.bracket(a, X1) == -(-1 if deg % 2 else 1) * g.bracket(X1, a)


def test_mc_examples():
    g2, g1 = SmallG(3, 2), SmallG(3, 1)
    assert mc_check(g2, g2.element(form=vol(3)))
    assert not mc_check(g1, g1.element(form=F("x3*dx1^dx2")))
    assert mc_check(g2, g2.zero())
    with pytest.raises(InvalidInputError):
        mc_check(g2, g2.element(form=F("dx1")))


def test_twist_examples():
    g = SmallG(3, 2)
    gs = g.twist(g.element(form=vol(3)))
    assert gs.d(g.element(iota=partial(3, 1))) == g.element(form=F("dx2^dx3"), lie=partial(3, 1))
    assert not gs.d(g.element(lie=partial(3, 1)))
    assert gs.d(g.element(form=F("x1*dx2"))) == g.element(form=F("dx1^dx2"))
    with pytest.raises(InvalidInputError):
        SmallG(4, 2).twist(SmallG(4, 2).element(form=F("x4*dx1^dx2^dx3", 4)))


def test_twist_by_zero_is_pointwise_equal():
    g = SmallG(3, 2)
    gz = g.twist(g.zero())
    s = Sampler(2, 3)
    for _ in range(30):
        x = g.sample(s, s.choice(list(g.degrees)))
        y = g.sample(s, s.choice(list(g.degrees)))
        assert gz.d(x) == g.d(x) and gz.bracket(x, y) == g.bracket(x, y)


def test_twisted_table_matches_definition():
    s = Sampler(5, 4)
    rep = mc_twist_check(4, 2, s, 20)
    assert rep.passed and rep.checks_run == 60


def test_truncation_examples():
    g = SmallG(3, 2)
    t = g.twist(g.element(form=vol(3))).truncate_nonneg()
    assert not t.contains(g.element(iota=partial(3, 1)))
    assert -1 not in t.degrees
    y = g.element(lie=parse_field("x1*d1", 3))
    assert t.d(y) == g.element(form=-vol(3)) and t.degree(t.d(y)) == 1
    z = g.element(lie=parse_field("x1*d2", 3))
    assert t.degree(t.bracket(y, z)) == 0
    s = Sampler(3, 3)
    with pytest.raises(InvalidInputError):
        t.sample(s, -1)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_axioms_small_and_twisted(r):
    n = max(3, r + 1)
    s = Sampler(10 + r, n)
    g = SmallG(n, r)
    sigma = s.closed_form(r + 1)
    for m in (g, g.twist(g.element(form=sigma))):
        for x in (m, m.truncate_nonneg()):
            rep = dgla_axioms_check(x, s, 40)
            assert rep.passed, rep.failures[:1]
            assert rep.info["nonzero_brackets"] > 0
        assert truncation_closure_check(m, s, 30).passed


def test_axioms_cartan():
    s = Sampler(1, 3)
    assert dgla_axioms_check(CartanDgla(3), s, 60).passed


def test_cartan_operator_presentation():
    # the operator i_X + L_Y respects brackets as graded commutators
    c = CartanDgla(3)
    s = Sampler(8, 3)
    for _ in range(30):
        da, db = s.choice([-1, 0]), s.choice([-1, 0])
        a, b = c.sample(s, da), c.sample(s, db)
        w = s.form(s.rng.randint(0, 3))
        sign = -1 if da * db % 2 else 1
        lhs = cartan_operator(c.bracket(a, b), w)
        rhs = cartan_operator(a, cartan_operator(b, w)) - sign * cartan_operator(b, cartan_operator(a, w))
        assert lhs == rhs
        # d_c corresponds to the commutator with d
        assert cartan_operator(c.d(a), w) == cartan_operator(a, w).d() - (-1 if da % 2 else 1) * cartan_operator(a, w.d())


def test_gauge_action_examples():
    n, r = 3, 2
    g = SmallG(n, r)
    s = Sampler(4, n)
    sigma = vol(n)
    beta = s.form(r)
    x = g.element(form=sigma)
    assert gauge_action(g, g.element(form=-beta), x) == g.element(form=sigma + beta.d())
    assert gauge_action(g, g.zero(), x) == x
    closed = g.element(form=F("dx1^dx2"))
    assert gauge_action(g, closed, x) == x


def test_gauge_action_preserves_mc():
    g = SmallG(4, 2)
    s = Sampler(6, 4)
    for _ in range(20):
        sigma = g.element(form=s.closed_form(3))
        a = g.element(form=s.form(2), lie=s.field() if s.rng.random() < 0.3 else None)
        try:
            out = gauge_action(g, a, sigma)
        except UnsupportedInputError:
            continue
        assert mc_check(g, out)


def test_gauge_action_nonterminating():
    g = SmallG(3, 1)
    a = g.element(lie=parse_field("x1*d1", 3))
    x = g.element(form=F("x1*dx2^dx3"))
    with pytest.raises(UnsupportedInputError):
        gauge_action(g, a, x)


def test_chi_beta_examples():
    s = Sampler(7, 3)
    beta = s.form(2)
    chi = chi_beta(beta, vol(3))
    g = SmallG(3, 2)
    assert chi(g.element(iota=partial(3, 1))) == g.element(iota=partial(3, 1), form=beta.contract(partial(3, 1)))
    w = g.element(form=F("x1*dx2"))
    assert chi(w) == w
    src = chi.source
    for _ in range(50):
        x = src.sample(s, s.choice(list(src.degrees)))
        assert chi.inverse(chi(x)) == x
        assert chi_beta_series(beta, 2)(x) == chi(x)


def test_chi_beta_wrong_degree():
    with pytest.raises(InvalidInputError):
        chi_beta(F("dx1"), vol(3), 3, 2)


@pytest.mark.parametrize("r", [1, 2])
def test_chi_beta_check(r):
    s = Sampler(20 + r, 3)
    assert chi_beta_check(s.form(r), s.closed_form(r + 1), s, 50).passed


def test_twisted_differential_table_formula():
    s = Sampler(9, 3)
    g = SmallG(3, 1)
    sigma = F("x1*dx1^dx2") + F("dx2^dx3")
    gs = g.twist(g.element(form=sigma))
    for _ in range(30):
        x = g.sample(s, s.choice(list(g.degrees)))
        assert gs.d(x) == twisted_differential_table(x, sigma)
