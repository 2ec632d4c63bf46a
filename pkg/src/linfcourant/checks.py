"""Sampled identity checks for the Cartan calculus and the DGLA models."""

from .dgla import CartanDgla, SmallG, chi_beta, chi_beta_series, gauge_action, mc_check
from .errors import InvalidInputError
from .forms import lie_derivative_leibniz
from .report import CheckReport


def _sgn(e):
    return -1 if e & 1 else 1


def cartan_check(n, sampler, samples=100):
    """The six Cartan identities on sampled (X, Y, omega), operators applied to omega.

    Lie derivatives come from the Leibniz rule, so the formula
    d i_X + i_X d = L_X is a genuine comparison.
    """
    rep = CheckReport(f"cartan(n={n})")
    lie = lie_derivative_leibniz
    for _ in range(samples):
        X, Y = sampler.field(), sampler.field()
        w = sampler.form(sampler.rng.randint(0, n))
        ins = [X, Y, w]
        zero = type(w)(n)
        rep.compare("d-squared", w.d().d(), zero, inputs=ins)
        rep.compare("lie-vs-d", lie(X, w.d()), lie(X, w).d(), inputs=ins)
        rep.compare("d-vs-iota", w.contract(X).d() + w.d().contract(X), lie(X, w), inputs=ins)
        rep.compare("lie-squared", lie(X, lie(Y, w)) - lie(Y, lie(X, w)), lie(X.bracket(Y), w), inputs=ins)
        rep.compare("lie-vs-iota", lie(X, w.contract(Y)) - lie(X, w).contract(Y),
                    w.contract(X.bracket(Y)), inputs=ins)
        rep.compare("iota-squared", w.contract(Y).contract(X) + w.contract(X).contract(Y), zero, inputs=ins)
    return rep


def dgla_axioms_check(g, sampler, samples=100, degrees=None, name=None):
    """d^2 = 0, derivation, antisymmetry and Jacobi on sampled homogeneous triples."""
    rep = CheckReport(name or f"axioms[{g.name}]")
    degrees = list(degrees or g.degrees)
    zero = g.zero()
    nonzero = 0
    for _ in range(samples):
        da, db, dc = (sampler.choice(degrees) for _ in range(3))
        a, b, c = g.sample(sampler, da), g.sample(sampler, db), g.sample(sampler, dc)
        rep.compare("d-squared", g.d(g.d(a)), zero, arity=1, inputs=[a])
        ab = g.bracket(a, b)
        rep.compare("derivation", g.d(ab), g.bracket(g.d(a), b) + _sgn(da) * g.bracket(a, g.d(b)),
                    arity=2, inputs=[a, b])
        rep.compare("antisymmetry", ab, -_sgn(da * db) * g.bracket(b, a), arity=2, inputs=[a, b])
        rep.compare("jacobi", g.bracket(a, g.bracket(b, c)),
                    g.bracket(ab, c) + _sgn(da * db) * g.bracket(b, g.bracket(a, c)),
                    arity=3, inputs=[a, b, c])
        nonzero += bool(ab)
    rep.info["nonzero_brackets"] = nonzero
    return rep


def truncation_closure_check(g, sampler, samples=50):
    """d and the bracket keep the non-negative part inside itself."""
    t = g.truncate_nonneg()
    rep = CheckReport(f"truncation[{g.name}]")
    degs = list(t.degrees)
    for _ in range(samples):
        a = g.sample(sampler, sampler.choice(degs))
        b = g.sample(sampler, sampler.choice(degs))
        rep.record("closed-d", t.contains(g.d(a)), inputs=[a])
        rep.record("closed-bracket", t.contains(g.bracket(a, b)), inputs=[a, b])
    return rep


def mc_twist_check(n, r, sampler, count=20):
    """mc_check(sigma) agrees with closedness; the twisted differential table holds."""
    from .dgla import twisted_differential_table

    rep = CheckReport(f"mc-twist(n={n},r={r})")
    g = SmallG(n, r)
    k = r + 1
    if k > n:
        raise InvalidInputError("need r + 1 <= n")
    for closed in (True, False):
        for _ in range(count):
            if closed:
                s = sampler.closed_form(k)
            elif k < n:
                s = sampler.nonclosed_form(k)
            else:
                break
            rep.record("mc-iff-closed", mc_check(g, g.element(form=s)) == s.is_closed()
                       and s.is_closed() == closed, inputs=[s])
    for _ in range(count):
        s = sampler.closed_form(k)
        gs = g.twist(g.element(form=s))
        x = g.sample(sampler, sampler.choice(list(g.degrees)))
        rep.compare("twisted-table", gs.d(x), twisted_differential_table(x, s), inputs=[s, x])
    return rep


def embedding_check(n, r, sigma, sampler, samples=100):
    """The map g_{r,sigma} -> ghat_{r,sigma} intertwines differentials and brackets."""
    from .cotangent import embed_small, large_g

    g = SmallG(n, r)
    gs = g.twist(g.element(form=sigma))
    big = large_g(n, r, sigma)
    sys = big.sys
    rep = CheckReport(f"embedding(n={n},r={r})")
    for _ in range(samples):
        a = g.sample(sampler, sampler.choice(list(g.degrees)))
        b = g.sample(sampler, sampler.choice(list(g.degrees)))
        ea, eb = embed_small(a, sys), embed_small(b, sys)
        rep.compare("differential", embed_small(gs.d(a), sys), big.d(ea), arity=1, inputs=[a])
        rep.compare("bracket", embed_small(g.bracket(a, b), sys), big.bracket(ea, eb), arity=2,
                    inputs=[a, b])
    return rep


def getzler_agreement_check(n, r, sigma, sampler, tuples=50, K=None):
    """Derived brackets of the small and large models agree through the embedding."""
    from .cotangent import embed_small, large_g
    from .linfty import getzler_brackets

    K = K or r + 2
    g = SmallG(n, r)
    gs = g.twist(g.element(form=sigma))
    big = large_g(n, r, sigma)
    sys = big.sys
    small = getzler_brackets(gs, K)
    large = getzler_brackets(big, K)
    rep = CheckReport(f"getzler-agreement(n={n},r={r})")
    nonzero = {}
    for k in range(1, K + 1):
        nonzero[k] = 0
        for _ in range(tuples):
            args = [gs.sample(sampler, sampler.choice(list(range(-r, 0)))) for _ in range(k)]
            lhs = embed_small(small.bracket(k)(*args), sys)
            rhs = large.bracket(k)(*[embed_small(a, sys) for a in args])
            rep.compare("small-vs-large", lhs, rhs, arity=k, inputs=args)
            nonzero[k] += bool(lhs)
    rep.info["nonzero_values"] = nonzero
    return rep


def chi_beta_check(beta, sigma, sampler, samples=50):
    """chi_beta intertwines d and brackets, has two-sided inverse, and e^{-beta} * sigma = sigma + d beta."""
    r = beta.form_degree
    n = beta.n
    chi = chi_beta(beta, sigma, n, r)
    src, tgt = chi.source, chi.target
    inv = chi.inverse
    series = chi_beta_series(beta, r)
    rep = CheckReport(f"chi-beta(r={r})")
    degs = list(src.degrees)
    for _ in range(samples):
        a = src.sample(sampler, sampler.choice(degs))
        b = src.sample(sampler, sampler.choice(degs))
        rep.compare("intertwine-d", chi(src.d(a)), tgt.d(chi(a)), arity=1, inputs=[a])
        rep.compare("intertwine-bracket", chi(src.bracket(a, b)), tgt.bracket(chi(a), chi(b)),
                    arity=2, inputs=[a, b])
        rep.compare("left-inverse", inv(chi(a)), a, arity=1, inputs=[a])
        c = tgt.sample(sampler, sampler.choice(degs))
        rep.compare("right-inverse", chi(inv(c)), c, arity=1, inputs=[c])
        rep.compare("series", series(a), chi(a), arity=1, inputs=[a])
    g = SmallG(n, r)
    moved = gauge_action(g, g.element(form=-beta), g.element(form=sigma))
    rep.compare("gauge-moves-sigma", moved, g.element(form=sigma + beta.d()), inputs=[beta, sigma])
    return rep


def cartan_dgla(n):
    return CartanDgla(n)
