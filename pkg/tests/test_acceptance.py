"""Acceptance criteria: exact checks with wall-clock bounds, one line per criterion."""

import time

import pytest

from linfcourant.checks import (
    cartan_check, chi_beta_check, dgla_axioms_check, embedding_check, getzler_agreement_check,
    mc_twist_check,
)
from linfcourant.cotangent import large_g
from linfcourant.dgla import CartanDgla, SmallG
from linfcourant.forms import PolyForm, partial, vol
from linfcourant.harness import Scenario, run
from linfcourant.linfty import (
    alternating_bernoulli_coefficient, ce_bidgla_check, comomentum_check, courant_binary_check,
    courant_linfty, courant_sampler, gauge_morphism_check, linfty_identity_check,
    morphism_cross_check, phi_morphism, rogers_linfty, rogers_sampler, solve_comomentum,
)
from linfcourant.parser import parse_form
from linfcourant.sampling import Sampler


def F(src, n=3):
    return parse_form(src, n)


def sigma_for(n, r):
    """(1 + 2 x1) dx1^...^dx_{r+1}: closed and non-constant; zero when r + 1 > n."""
    if r + 1 > n:
        return PolyForm(n)
    tail = "^".join(f"dx{i}" for i in range(1, r + 2))
    return F(f"{tail} + 2*x1*{tail}", n)


@pytest.fixture
def criterion(capsys):
    def check(number, limit, body):
        t0 = time.perf_counter()
        failures = body()
        wall = time.perf_counter() - t0
        ok = not failures and wall < limit
        with capsys.disabled():
            verdict = "PASS" if ok else "FAIL"
            print(f"\n[criterion {number:2d}] {verdict}  {wall:6.2f}s (limit {limit}s)"
                  + (f"  {failures[:3]}" if failures else ""))
        assert not failures, failures
        assert wall < limit, f"took {wall:.2f}s, limit {limit}s"
    return check


def _collect(*reports):
    return [(rep.name, rep.failures[:1]) for rep in reports if not rep.passed]


def test_criterion_01_cartan(criterion):
    def body():
        reps = []
        for n in (2, 3, 4):
            rep = cartan_check(n, Sampler(100 + n, n, max_poly_degree=2), 100)
            assert rep.checks_run == 600
            reps.append(rep)
        return _collect(*reps)
    criterion(1, 5, body)


def test_criterion_02_dgla_axioms(criterion):
    def body():
        reps = []
        s = Sampler(2, 3)
        c = CartanDgla(3)
        reps += [dgla_axioms_check(c, s, 100), dgla_axioms_check(c.truncate_nonneg(), s, 100)]
        for r in (1, 2, 3):
            n = 4 if r == 3 else 3
            s = Sampler(20 + r, n)
            sigma = sigma_for(n, r)
            assert sigma and sigma.is_closed()
            g = SmallG(n, r)
            for m in (g, g.twist(g.element(form=sigma)), large_g(n, r), large_g(n, r, sigma)):
                for x in (m, m.truncate_nonneg()):
                    reps.append(dgla_axioms_check(x, s, 100))
        return _collect(*reps)
    criterion(2, 30, body)


def test_criterion_03_mc_characterization(criterion):
    def body():
        reps = []
        for n, r in ((3, 1), (4, 2)):
            rep = mc_twist_check(n, r, Sampler(30 + r, n), 20)
            assert rep.checks_run == 60
            reps.append(rep)
        return _collect(*reps)
    criterion(3, 5, body)


def test_criterion_04_embedding(criterion):
    def body():
        reps = []
        for r in (1, 2, 3):
            n = 4 if r == 3 else 3
            s = Sampler(40 + r, n)
            reps.append(embedding_check(n, r, sigma_for(n, r), s, 100))
        return _collect(*reps)
    criterion(4, 20, body)


def test_criterion_05_small_large_agreement(criterion):
    def body():
        reps = []
        for r in (1, 2):
            s = Sampler(50 + r, 3)
            rep = getzler_agreement_check(3, r, sigma_for(3, r), s, 50, r + 2)
            assert rep.checks_run == 50 * (r + 2)
            reps.append(rep)
        return _collect(*reps)
    criterion(5, 60, body)


def test_criterion_06_courant_linfty(criterion):
    def body():
        reps = []
        for r in (1, 2, 3):
            s = Sampler(60 + r, 3)
            sigma = sigma_for(3, r)
            L = courant_linfty(3, r, sigma)
            reps.append(linfty_identity_check(L, r + 2, s, 50, courant_sampler(L, 3, r)))
            reps.append(courant_binary_check(3, r, sigma, s, 50))
        return _collect(*reps)
    criterion(6, 60, body)


def test_criterion_07_rogers(criterion):
    def body():
        s = Sampler(70, 3)
        sigma = vol(3)
        L = rogers_linfty(3, 2, sigma)
        draw = rogers_sampler(sigma, 3, 2, 1)
        rep = linfty_identity_check(L, 4, s, 50, draw)
        for k in (2, 3):
            for _ in range(25):
                args = []
                while len(args) < k:
                    x = draw(s)
                    if x.degree == 0:
                        args.append(x)
                out = L.bracket(k)(*args)
                rep.record("codomain", not out.form or out.form.degrees() == {3 - k}, arity=k,
                           inputs=args, lhs=out)
        return _collect(rep)
    criterion(7, 30, body)


def test_criterion_08_phi_morphisms(criterion):
    def body():
        out = run(Scenario(dim=3, r=2, sigma="dx1^dx2^dx3", samples=60, seed=8,
                           suites=["phi-morphism", "phi-twisted", "courant-chain-map"]))
        out1 = run(Scenario(dim=3, r=1, sigma="dx1^dx2 + x3*dx1^dx3", samples=60, seed=8,
                            suites=["phi-morphism", "phi-twisted", "courant-chain-map"]))
        return [(s["name"], s["failures"][:1]) for o in (out, out1) for s in o["suites"] if not s["passed"]]
    criterion(8, 30, body)


def test_criterion_09_gauge_identity(criterion):
    def body():
        s = Sampler(90, 3)
        as_written = F("x1*dx2^dx3").d() + vol(3)
        non_constant = F("x1*x1*dx2^dx3").d() + vol(3)
        assert non_constant == F("2*x1*dx1^dx2^dx3 + dx1^dx2^dx3")
        reps = [gauge_morphism_check(sig, s, 10, K=4) for sig in (vol(3), as_written, non_constant)]
        for rep in reps:
            # series at k = 1..4, [iota, L], [iota, iota], [iota, (iota_inf)_k] at k = 1..3
            assert rep.checks_run == 4 * 10 + 10 + 10 + 3 * 10
        return _collect(*reps)
    criterion(9, 30, body)


def test_criterion_10_chi_beta(criterion):
    def body():
        reps = []
        for n, r in ((3, 1), (3, 2)):
            s = Sampler(100 + r, n)
            reps.append(chi_beta_check(s.form(r), sigma_for(n, r), s, 50))
        return _collect(*reps)
    criterion(10, 10, body)


def test_criterion_11_ce_bidgla(criterion):
    def body():
        reps = []
        for r in (1, 2):
            s = Sampler(110 + r, 3)
            reps.append(ce_bidgla_check(3, r, s, pairs=12, samples=5))
        s = Sampler(113, 3)
        degs = [-1, -1, 0, 0, -2, 1]
        good = morphism_cross_check(phi_morphism(3, 2), 3, s, 20, degs)
        bad = morphism_cross_check(phi_morphism(3, 2, phi2_sign=-1), 3, s, 20, degs)
        reps += [good, bad]
        out = _collect(*reps)
        if good.info["direct_failed_arities"] or good.info["ce_failed_arities"]:
            out.append(("phi verdict", good.info))
        if not bad.info["direct_failed_arities"] or bad.info["direct_failed_arities"] != bad.info["ce_failed_arities"]:
            out.append(("mutant verdict", bad.info))
        return out
    criterion(11, 30, body)


def test_criterion_12_comomentum(criterion):
    def body():
        sigma = vol(3)
        rho = [partial(3, 1), partial(3, 2)]
        h = solve_comomentum(rho, {}, sigma)
        out = _collect(comomentum_check(rho, {}, h, sigma))
        bad1 = {k: dict(v) for k, v in h.items()}
        bad1[1][(0,)] = bad1[1][(0,)] + F("x1*dx2")  # not closed
        bad2 = {k: dict(v) for k, v in h.items()}
        bad2[2][(0, 1)] = bad2[2].get((0, 1), PolyForm(3)) + F("x1")
        for name, table, arity in (("h1", bad1, 1), ("h2", bad2, 2)):
            rep = comomentum_check(rho, {}, table, sigma)
            if rep.failed_arities() != [arity]:
                out.append((name, rep.failed_arities()))
        return out
    criterion(12, 10, body)


def test_criterion_13_negative_controls(criterion):
    def body():
        out = []
        s = Sampler(130, 3)
        alt = courant_linfty(3, 2, vol(3), coefficients=alternating_bernoulli_coefficient)
        rep = linfty_identity_check(alt, 4, s, 30, courant_sampler(alt, 3, 2))
        if rep.passed:
            out.append("Getzler coefficient corruption undetected")
        draw = rogers_sampler(vol(3), 3, 2, 1)
        for k in (2, 3):
            rep = linfty_identity_check(rogers_linfty(3, 2, vol(3), flip_arity=k), 4, s, 30, draw)
            if rep.passed:
                out.append(f"Rogers sign flip at arity {k} undetected")
        bad = morphism_cross_check(phi_morphism(3, 2, phi2_sign=-1), 3, s, 20, [-1, -1, 0, 0, -2, 1])
        if not bad.info["direct_failed_arities"]:
            out.append("Phi_2 sign corruption undetected")
        return out
    criterion(13, 30, body)
