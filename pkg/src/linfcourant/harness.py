"""Scenario files, suite orchestration and JSON reports."""

import configparser
import time
import zlib
from dataclasses import asdict, dataclass, field
from typing import List, Optional

from .errors import InvalidInputError, ParseError
from .parser import parse_form
from .report import CheckReport
from .sampling import Sampler

SUITES = (
    "cartan", "dgla-axioms", "mc-twist", "embedding", "getzler-agreement", "courant-linfty",
    "rogers-linfty", "phi-morphism", "phi-twisted", "gauge-identity", "chi-beta", "ce-bidgla",
    "comomentum", "courant-chain-map",
)


@dataclass
class Scenario:
    dim: int = 3
    r: int = 2
    sigma: str = ""
    beta: Optional[str] = None
    max_poly_degree: int = 2
    samples: int = 100
    seed: int = 0
    suites: List[str] = field(default_factory=lambda: list(SUITES))
    arity_bound: Optional[int] = None

    def validate(self):
        if self.dim < 1:
            raise InvalidInputError("dim must be at least 1")
        if self.r < 1:
            raise InvalidInputError("r must be at least 1")
        if self.r + 1 > self.dim:
            raise InvalidInputError("need r + 1 <= dim for a nonzero sigma")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidInputError("seed must be an unsigned 64-bit integer")
        if self.samples < 1:
            raise InvalidInputError("samples must be positive")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise InvalidInputError(f"unknown suite(s): {', '.join(unknown)}")
        if not self.sigma:
            self.sigma = "^".join(f"dx{i}" for i in range(1, self.r + 2))
        sigma = parse_form(self.sigma, self.dim, degree=self.r + 1)
        if not sigma.is_closed():
            raise InvalidInputError("sigma is not closed")
        if self.beta is not None:
            parse_form(self.beta, self.dim, degree=self.r)
        return self

    def sigma_form(self):
        return parse_form(self.sigma, self.dim, degree=self.r + 1)

    def beta_form(self):
        return parse_form(self.beta, self.dim, degree=self.r) if self.beta is not None else None


def _int(section, key, default):
    raw = section.get(key)
    if raw is None:
        return default
    try:
        return int(raw.strip())
    except ValueError:
        raise ParseError(f"{key} must be an integer, got {raw!r}")


def parse_scenario(text):
    """Scenario from INI text with a ``[scenario]`` section."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ParseError(f"malformed scenario file: {exc}")
    if "scenario" not in cp:
        raise ParseError("missing [scenario] section")
    sec = cp["scenario"]
    known = {f for f in Scenario.__dataclass_fields__}
    extra = [k for k in sec if k not in known]
    if extra:
        raise ParseError(f"unknown key(s): {', '.join(extra)}")
    suites = sec.get("suites")
    sc = Scenario(
        dim=_int(sec, "dim", 3),
        r=_int(sec, "r", 2),
        sigma=sec.get("sigma", "").strip(),
        beta=sec.get("beta").strip() if sec.get("beta") else None,
        max_poly_degree=_int(sec, "max_poly_degree", 2),
        samples=_int(sec, "samples", 100),
        seed=_int(sec, "seed", 0),
        suites=[s.strip() for s in suites.split(",") if s.strip()] if suites else list(SUITES),
        arity_bound=_int(sec, "arity_bound", None),
    )
    return sc


def load_scenario(path):
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def suite_seed(seed, name):
    """Independent deterministic seed per suite."""
    return (seed << 32) ^ zlib.crc32(name.encode())


# Suites ---------------------------------------------------------------------

def _suite_cartan(sc, sampler):
    from .checks import cartan_check
    return cartan_check(sc.dim, sampler, sc.samples)


def _suite_dgla_axioms(sc, sampler):
    from .checks import dgla_axioms_check, truncation_closure_check
    from .cotangent import large_g
    from .dgla import CartanDgla, SmallG

    sigma = sc.sigma_form()
    g = SmallG(sc.dim, sc.r)
    models = [CartanDgla(sc.dim), g, g.twist(g.element(form=sigma)),
              large_g(sc.dim, sc.r), large_g(sc.dim, sc.r, sigma)]
    rep = CheckReport("dgla-axioms")
    for m in models:
        for x in (m, m.truncate_nonneg()):
            sub = dgla_axioms_check(x, sampler, sc.samples)
            rep.merge(sub)
            rep.info[sub.name] = sub.failure_count
        if not hasattr(m, "sys") and not isinstance(m, CartanDgla):
            rep.merge(truncation_closure_check(m, sampler, min(sc.samples, 50)))
    return rep


def _suite_mc_twist(sc, sampler):
    from .checks import mc_twist_check
    return mc_twist_check(sc.dim, sc.r, sampler, 20)


def _suite_embedding(sc, sampler):
    from .checks import embedding_check
    return embedding_check(sc.dim, sc.r, sc.sigma_form(), sampler, sc.samples)


def _suite_getzler_agreement(sc, sampler):
    from .checks import getzler_agreement_check
    return getzler_agreement_check(sc.dim, sc.r, sc.sigma_form(), sampler, max(50, sc.samples // 2),
                                   sc.arity_bound or sc.r + 2)


def _suite_courant_linfty(sc, sampler):
    from .linfty import courant_binary_check, courant_linfty, courant_sampler, linfty_identity_check

    sigma = sc.sigma_form()
    K = sc.arity_bound or sc.r + 2
    L = courant_linfty(sc.dim, sc.r, sigma, K=K)
    rep = linfty_identity_check(L, K, sampler, max(50, sc.samples // 2),
                                courant_sampler(L, sc.dim, sc.r), name="courant-linfty")
    rep.merge(courant_binary_check(sc.dim, sc.r, sigma, sampler, 50))
    return rep


def _suite_rogers_linfty(sc, sampler):
    from .linfty import linfty_identity_check, rogers_linfty, rogers_sampler

    sigma = sc.sigma_form()
    L = rogers_linfty(sc.dim, sc.r, sigma)
    K = sc.arity_bound or sc.r + 2
    draw = rogers_sampler(sigma, sc.dim, sc.r, 1)
    rep = linfty_identity_check(L, K, sampler, max(30, sc.samples // 3), draw, name="rogers-linfty")
    for _ in range(20):
        k = sampler.rng.randint(2, sc.r + 1)
        args = []
        while len(args) < k:
            x = draw(sampler)
            if x.degree == 0:
                args.append(x)
        out = L.bracket(k)(*args)
        ok = not out.form or out.form.degrees() == {sc.r + 1 - k}
        if k == 2:
            ok = ok and not (sigma.contract(out.vf) + out.form.d())
        rep.record("codomain", ok, arity=k, inputs=args, lhs=out)
    return rep


def _phi_degrees(r, dim):
    return [-1, -1, 0, 0] + list(range(-r, dim - r + 1))


def _suite_phi_morphism(sc, sampler):
    from .dgla import SmallG
    from .linfty import morphism_cross_check, morphism_identity_check, morphism_value_on, phi_morphism

    phi = phi_morphism(sc.dim, sc.r)
    degs = _phi_degrees(sc.r, sc.dim)
    rep = morphism_identity_check(phi, 3, sampler, max(30, sc.samples // 3), degs, name="phi-morphism")
    rep.merge(morphism_cross_check(phi, 3, sampler, 20, degs))
    _truncation_restriction(rep, phi, sampler, SmallG(sc.dim, sc.r))
    sigma = sc.sigma_form()
    g = SmallG(sc.dim, sc.r)
    rep.compare("phi-of-sigma", morphism_value_on(phi, g.element(form=sigma)),
                SmallG(sc.dim, sc.r + 1).zero(), inputs=[sigma])
    rep.compare("phi2-sigma-sigma", phi.component(2)(g.element(form=sigma), g.element(form=sigma)),
                SmallG(sc.dim, sc.r + 1).zero(), inputs=[sigma])
    return rep


def _truncation_restriction(rep, phi, sampler, g, samples=30):
    pos = [d for d in g.degrees if d >= 0]
    tgt = phi.target.truncate_nonneg()
    for _ in range(samples):
        v = g.sample(sampler, sampler.choice(pos))
        w = g.sample(sampler, sampler.choice(pos))
        rep.record("restricts-unary", tgt.contains(phi.component(1)(v)), arity=1, inputs=[v])
        rep.record("restricts-binary", tgt.contains(phi.component(2)(v, w)), arity=2, inputs=[v, w])


def _suite_phi_twisted(sc, sampler):
    from .dgla import SmallG
    from .linfty import morphism_cross_check, morphism_identity_check, phi_morphism, twist_morphism

    sigma = sc.sigma_form()
    g = SmallG(sc.dim, sc.r)
    phi = phi_morphism(sc.dim, sc.r)
    ps = twist_morphism(phi, g.element(form=sigma))
    degs = _phi_degrees(sc.r, sc.dim)
    rep = morphism_identity_check(ps, 3, sampler, max(30, sc.samples // 3), degs, name="phi-twisted")
    rep.merge(morphism_cross_check(ps, 3, sampler, 20, degs))
    rep.record("target-untwisted", not ps.image, lhs=ps.image)
    _truncation_restriction(rep, ps, sampler, g)
    for _ in range(20):
        v = g.sample(sampler, sampler.choice(degs))
        want = phi.component(1)(v) + phi.component(2)(g.element(form=sigma), v)
        rep.compare("first-component", ps.component(1)(v), want, arity=1, inputs=[v])
    return rep


def _suite_gauge_identity(sc, sampler):
    from .linfty import gauge_morphism_check
    return gauge_morphism_check(sc.sigma_form(), sampler, max(10, sc.samples // 10),
                                K=sc.arity_bound or sc.r + 2)


def _suite_chi_beta(sc, sampler):
    from .checks import chi_beta_check

    beta = sc.beta_form()
    if beta is None:
        beta = sampler.form(sc.r)
    return chi_beta_check(beta, sc.sigma_form(), sampler, 50)


def _suite_ce_bidgla(sc, sampler):
    from .linfty import ce_bidgla_check, morphism_cross_check, phi_morphism

    rep = ce_bidgla_check(sc.dim, sc.r, sampler, pairs=12, samples=5)
    degs = _phi_degrees(sc.r, sc.dim)
    good = morphism_cross_check(phi_morphism(sc.dim, sc.r), 3, sampler, 20, degs)
    bad = morphism_cross_check(phi_morphism(sc.dim, sc.r, phi2_sign=-1), 3, sampler, 20, degs)
    rep.merge(good).merge(bad)
    rep.record("mutant-detected", bool(bad.info["direct_failed_arities"]), lhs=bad.info)
    rep.info["mutant_failed_arities"] = bad.info["direct_failed_arities"]
    return rep


def _suite_comomentum(sc, sampler):
    from .forms import partial
    from .linfty import comomentum_check, solve_comomentum

    sigma = sc.sigma_form()
    # translations that preserve sigma act abelianly by Hamiltonian fields; at
    # most r of them, since r + 1 commuting fields obstruct a comomentum
    rho = [partial(sc.dim, i) for i in range(1, sc.dim + 1)
           if not sigma.lie(partial(sc.dim, i))][:min(2, sc.r)]
    h = solve_comomentum(rho, {}, sigma)
    rep = comomentum_check(rho, {}, h, sigma)
    rep.info["action"] = [str(X) for X in rho]
    if rho and sc.r < sc.dim:
        from .forms import coordinate

        bad = {k: dict(v) for k, v in h.items()}
        key = (0,)
        base = bad[1].get(key, type(sigma)(sc.dim))
        bump = sampler.nonclosed_form(sc.r - 1) if sc.r >= 2 else type(sigma).from_scalar(coordinate(sc.dim, 1))
        bad[1][key] = base + bump
        neg = comomentum_check(rho, {}, bad, sigma)
        rep.record("negative-control-h1", neg.failed_arities()[:1] == [1], lhs=neg.failed_arities())
    return rep


def _suite_courant_chain_map(sc, sampler):
    from .linfty import courant_chain_map_check

    sigma = sc.sigma_form()
    rep = courant_chain_map_check(sc.dim, sc.r, sigma, sampler, max(30, sc.samples // 3))
    neg = courant_chain_map_check(sc.dim, sc.r, sigma, sampler, 30, drop_d_at=sc.r - 1)
    rep.record("perturbed-ladder-detected", not neg.passed, lhs=neg.failure_count)
    return rep


_RUNNERS = {
    "cartan": _suite_cartan,
    "dgla-axioms": _suite_dgla_axioms,
    "mc-twist": _suite_mc_twist,
    "embedding": _suite_embedding,
    "getzler-agreement": _suite_getzler_agreement,
    "courant-linfty": _suite_courant_linfty,
    "rogers-linfty": _suite_rogers_linfty,
    "phi-morphism": _suite_phi_morphism,
    "phi-twisted": _suite_phi_twisted,
    "gauge-identity": _suite_gauge_identity,
    "chi-beta": _suite_chi_beta,
    "ce-bidgla": _suite_ce_bidgla,
    "comomentum": _suite_comomentum,
    "courant-chain-map": _suite_courant_chain_map,
}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in (sorted(x) if isinstance(x, (set, frozenset)) else x)]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


def run(scenario):
    """Run the scenario's suites in canonical order; returns the report dict."""
    scenario.validate()
    suites = []
    for name in SUITES:
        if name not in scenario.suites:
            continue
        sampler = Sampler(suite_seed(scenario.seed, name), scenario.dim, scenario.max_poly_degree)
        t0 = time.perf_counter()
        rep = _RUNNERS[name](scenario, sampler)
        wall = time.perf_counter() - t0
        entry = rep.to_dict()
        entry["name"] = name
        for f in entry["failures"]:
            f["suite"] = name
        entry["passed"] = rep.passed
        entry["wall_time"] = round(wall, 6)
        suites.append(_jsonable(entry))
    return {
        "scenario": _jsonable(asdict(scenario)),
        "suites": suites,
        "checks_run": sum(s["checks_run"] for s in suites),
        "failure_count": sum(s["failure_count"] for s in suites),
        "passed": all(s["passed"] for s in suites),
    }
