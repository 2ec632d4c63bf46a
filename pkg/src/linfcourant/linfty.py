"""L-infinity structures and morphisms as values, with identity checkers."""

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import InvalidInputError
from .graded import (GradedSpace, MultiMap, _unshuffle_sign, nr_product, ordered_unshuffles, scale,
                     unshuffles)

SYMMETRIC = "symmetric"  # degree +1 graded-symmetric brackets (L-infinity[1])
SKEW = "skew"            # degree 2-k graded skew-symmetric brackets


@lru_cache(maxsize=None)
def bernoulli(n):
    """Bernoulli numbers with B_1 = -1/2."""
    if n == 0:
        return Fraction(1)
    return -sum(Fraction(factorial(n + 1), factorial(k) * factorial(n + 1 - k)) * bernoulli(k)
                for k in range(n)) / (n + 1)


def getzler_coefficient(n):
    """Coefficient of the arity n+1 derived bracket: -B_n / n! for n >= 1.

    Gives 1/2, -1/12, 0, 1/720, ...; the sign pattern is the one for which
    the homotopy Jacobi identities hold (see tests).
    """
    if n == 0:
        return Fraction(1)
    return -bernoulli(n) / factorial(n)


def alternating_bernoulli_coefficient(n):
    """(-1)^n B_n / n!: differs from :func:`getzler_coefficient` for even n."""
    b = bernoulli(n) / factorial(n)
    return -b if n & 1 else b


class LInftyStructure:
    """Multibrackets ``{k: MultiMap}`` on one carrier space; missing arities are zero."""

    def __init__(self, space, brackets, convention=SKEW, name=""):
        self.space = space
        self.brackets = dict(brackets)
        self.convention = convention
        self.name = name
        want = (lambda k: 1) if convention == SYMMETRIC else (lambda k: 2 - k)
        for k, m in self.brackets.items():
            if m.arity != k or m.degree != want(k):
                raise InvalidInputError(f"bracket of arity {k} has bidegree ({m.arity},{m.degree})")

    def bracket(self, k):
        m = self.brackets.get(k)
        if m is None:
            sp = self.space
            deg = 1 if self.convention == SYMMETRIC else 2 - k
            return MultiMap(k, deg, lambda *xs: sp.zero(), sp, name="0")
        return m

    def __call__(self, *args):
        return self.bracket(len(args))(*args)

    @property
    def max_arity(self):
        return max(self.brackets, default=0)

    def identity_terms(self, args):
        """The arity-n homotopy Jacobi sum on ``args`` (should vanish)."""
        n = len(args)
        sp = self.space
        degs = [sp.degree(a) for a in args]
        total = sp.zero()
        if self.convention == SKEW:
            for i in range(1, n + 1):
                j = n + 1 - i
                if i in self.brackets and j in self.brackets:
                    total = total + nr_product(self.brackets[j], self.brackets[i])(*args)
            return total
        for i in range(1, n + 1):
            j = n + 1 - i
            if i not in self.brackets or j not in self.brackets:
                continue
            inner, outer = self.brackets[i], self.brackets[j]
            for p in unshuffles(i, n - i):
                s = _koszul_only_unshuffle(p, i, degs)
                u = inner(*[args[t] for t in p[:i]])
                if u:
                    total = total + scale(s, outer(u, *[args[t] for t in p[i:]]))
        return total


def _koszul_only_unshuffle(perm, j, degrees):
    sign = 1
    for a in perm[:j]:
        if degrees[a] & 1:
            for b in perm[j:]:
                if a > b and degrees[b] & 1:
                    sign = -sign
    return sign


def _negative_space(g):
    lo = min(g.degrees)
    return GradedSpace(g.name + "<0", g.degree_of, g.zero, g.split, degree_range=(lo, -1))


def getzler_brackets(g, K, d_mode="degree0", coefficients=None):
    """Derived brackets on the negative truncation of a DGLA ``g``.

    Symmetric convention: ``l_1 a = d a`` for ``|a| < -1`` and zero otherwise;
    for ``k >= 2``::

        l_k(a_1..a_k) = b_{k-1} sum_{s in S_k} eps(s) [..[[D a_s1, a_s2], a_s3].., a_sk]

    with ``eps`` the Koszul sign.  ``D`` is ``d`` followed by projection to
    degree 0 (``d_mode="degree0"``) or ``d`` on every negative degree
    (``d_mode="negative"``).
    """
    coefficients = coefficients or getzler_coefficient
    sp = _negative_space(g)

    def D(a, da):
        if d_mode == "degree0":
            return g.d(a) if da == -1 else None
        if d_mode == "negative":
            return g.d(a)
        raise InvalidInputError(f"unknown d_mode {d_mode!r}")

    def unary(a):
        return g.d(a) if g.degree_of(a) < -1 else g.zero()

    def make(k):
        coef = coefficients(k - 1)

        def ev(*args):
            degs = [g.degree_of(a) for a in args]
            total = g.zero()
            idx = range(k)
            for first in idx:
                start = D(args[first], degs[first])
                if start is None or not start:
                    continue
                # sign of moving args[first] to the front
                s0 = 1
                for t in range(first):
                    if degs[t] & 1 and degs[first] & 1:
                        s0 = -s0
                rest = [t for t in idx if t != first]
                total = total + scale(s0, _nested_sum(g, start, args, degs, rest))
            return scale(coef, total) if coef != 1 else total

        return MultiMap(k, 1, ev, sp, name=f"l{k}")

    brackets = {1: MultiMap(1, 1, unary, sp, name="l1")}
    for k in range(2, K + 1):
        if coefficients(k - 1):
            brackets[k] = make(k)
    return LInftyStructure(sp, brackets, SYMMETRIC, name=f"getzler[{g.name}]")


def _nested_sum(g, value, args, degs, remaining):
    """Sum over orderings of ``remaining`` of signed nested right brackets."""
    if not remaining:
        return value
    total = g.zero()
    for pos, t in enumerate(remaining):
        s = 1
        if degs[t] & 1:
            for u in remaining[:pos]:
                if degs[u] & 1:
                    s = -s
        nxt = g.bracket(value, args[t])
        if not nxt:
            continue
        total = total + scale(s, _nested_sum(g, nxt, args, degs, remaining[:pos] + remaining[pos + 1:]))
    return total


def decalage_sign(degrees_L):
    """Sign of s^{(x)k} on L-degrees: (-1)^{sum_i (k-i)|x_i|}."""
    k = len(degrees_L)
    e = sum((k - 1 - i) * d for i, d in enumerate(degrees_L))
    return -1 if e & 1 else 1


def desuspend(sym, arity_sign=None):
    """Skew brackets on L = V[-1] from symmetric ones on V.

    ``mu_k = s^{-1} l_k s^{(x)k}``; ``arity_sign(k)`` is an optional extra
    global sign per arity.
    """
    if sym.convention != SYMMETRIC:
        raise InvalidInputError("expected symmetric brackets")
    L = sym.space.shifted(-1)
    out = {}
    for k, lk in sym.brackets.items():
        extra = arity_sign(k) if arity_sign else 1

        def ev(*xs, _l=lk, _e=extra):
            s = decalage_sign([L.degree(x) for x in xs]) * _e
            return scale(s, _l(*xs))

        out[k] = MultiMap(k, 2 - k, ev, L, name=f"mu{k}")
    return LInftyStructure(L, out, SKEW, name=f"dec[{sym.name}]")


def suspend(skew, arity_sign=None):
    """Inverse of :func:`desuspend`."""
    if skew.convention != SKEW:
        raise InvalidInputError("expected skew brackets")
    V = skew.space.shifted(1)
    out = {}
    for k, mk in skew.brackets.items():
        extra = arity_sign(k) if arity_sign else 1

        def ev(*xs, _m=mk, _e=extra):
            s = decalage_sign([V.degree(x) + 1 for x in xs]) * _e
            return scale(s, _m(*xs))

        out[k] = MultiMap(k, 1, ev, V, name=f"l{k}")
    return LInftyStructure(V, out, SYMMETRIC, name=f"susp[{skew.name}]")


# Identity checks --------------------------------------------------------

def linfty_identity_check(L, K, sampler, samples=50, sample_fn=None, name=None):
    """Homotopy Jacobi identities of ``L`` at arities 1..K on sampled tuples.

    ``sample_fn(sampler)`` draws one homogeneous carrier element.
    """
    from .report import CheckReport

    rep = CheckReport(name or f"linfty[{L.name}]")
    zero = L.space.zero()
    for k in range(1, K + 1):
        nonzero = 0
        for _ in range(samples):
            args = [sample_fn(sampler) for _ in range(k)]
            val = L.identity_terms(args)
            rep.compare("homotopy-jacobi", val, zero, arity=k, inputs=args)
            nonzero += any(bool(L.bracket(j)(*args[:j])) for j in range(1, k + 1) if j in L.brackets)
        rep.info.setdefault("nonvanishing_inputs", {})[k] = nonzero
    return rep


# Courant L-infinity algebras ----------------------------------------------

def courant_linfty(n, r, sigma, K=None, coefficients=None, d_mode="degree0", arity_sign=None):
    """Skew L-infinity algebra on the negative part of g_{r,sigma}, shifted by one.

    Carrier degree 0 is X_(1) + alpha with alpha an (r-1)-form; Omega^k sits
    in degree k - r + 1.
    """
    from .dgla import SmallG

    if r < 1:
        raise InvalidInputError("Courant algebras need r >= 1")
    if sigma and sigma.degrees() != {r + 1}:
        raise InvalidInputError(f"twisting form must have degree {r + 1}")
    if not sigma.is_closed():
        raise InvalidInputError("twisting form is not closed")
    g = SmallG(n, r)
    gs = g.twist(g.element(form=sigma))
    sym = getzler_brackets(gs, K or r + 2, d_mode=d_mode, coefficients=coefficients)
    out = desuspend(sym, arity_sign=arity_sign)
    out.dgla = gs
    out.r = r
    return out


def section_to_element(s, r):
    """(X, alpha) with alpha of degree r-1  ->  X_(1) + alpha in g_r."""
    from .dgla import SmallGElement

    if s.r != r - 1:
        raise InvalidInputError(f"sections must have form degree {r - 1}")
    return SmallGElement(s.form, s.vf, type(s.vf).zero(s.n), r)


def element_to_section(x):
    from .forms import CourantSection

    if x.lie or (x.form and x.form.degrees() != {x.r - 1}):
        raise InvalidInputError("element is not in the degree-0 Courant slot")
    return CourantSection(x.iota, x.form, x.r - 1)


def courant_sampler(L, n, r):
    """Sampler of homogeneous carrier elements of the Courant algebra."""
    g = L.dgla

    def draw(sampler):
        return g.sample(sampler, sampler.choice(list(range(-r, 0))))
    return draw


# Rogers observables -------------------------------------------------------

class ObservableElement:
    """Observable: a form of degree <= r-2, a Hamiltonian pair (X, alpha), or a sum.

    Form degree k sits in degree k - r + 1; the vector field part in degree 0.
    """

    __slots__ = ("form", "vf", "r")

    def __init__(self, form, vf, r):
        self.form, self.vf, self.r = form, vf, r

    @property
    def n(self):
        return self.form.n

    def __bool__(self):
        return bool(self.form) or bool(self.vf)

    def __eq__(self, other):
        return (isinstance(other, ObservableElement) and self.r == other.r
                and self.form == other.form and self.vf == other.vf)

    def __hash__(self):
        return hash((self.form, self.vf, self.r))

    def __add__(self, o):
        if isinstance(o, int) and o == 0:
            return self
        return ObservableElement(self.form + o.form, self.vf + o.vf, self.r)

    __radd__ = __add__

    def __sub__(self, o):
        return ObservableElement(self.form - o.form, self.vf - o.vf, self.r)

    def __neg__(self):
        return ObservableElement(-self.form, -self.vf, self.r)

    def __rmul__(self, c):
        return ObservableElement(c * self.form, c * self.vf, self.r)

    @property
    def degree(self):
        ds = {k - self.r + 1 for k in self.form.degrees()}
        if self.vf:
            ds.add(0)
        return next(iter(ds)) if len(ds) == 1 else None

    def parts(self):
        out = {}
        for k in sorted(self.form.degrees()):
            out[k - self.r + 1] = ObservableElement(self.form.part(k), type(self.vf).zero(self.n), self.r)
        if self.vf:
            cur = out.get(0, ObservableElement(type(self.form).zero(self.n), self.vf, self.r))
            out[0] = ObservableElement(cur.form, self.vf, self.r)
        return [out[k] for k in sorted(out)]

    def key(self):
        return (self.form.key(), self.vf.key())

    def render(self):
        return {"form": str(self.form), "vf": str(self.vf)}

    def __repr__(self):
        return f"Observable({self.vf}, {self.form})"


def multicontract(sigma, fields):
    """i_{x_1} i_{x_2} ... i_{x_k} sigma."""
    out = sigma
    for X in reversed(fields):
        out = out.contract(X)
        if not out:
            break
    return out


def _observable_space(n, r):
    from .forms import PolyForm, PolyVectorField

    return GradedSpace(f"obs(n={n},r={r})", lambda x: x.degree,
                       lambda: ObservableElement(PolyForm(n), PolyVectorField(n), r),
                       lambda x: x.parts(), degree_range=(1 - r, 0))


def _check_closed(sigma, degree):
    if sigma and sigma.degrees() != {degree}:
        raise InvalidInputError(f"form must have degree {degree}")
    if not sigma.is_closed():
        raise InvalidInputError("form is not closed")


def rogers_linfty(n, r, sigma, flip_arity=None):
    """Rogers' algebra of observables of the closed (r+1)-form ``sigma``.

    ``mu_1`` is d on forms of degree <= r-2 (landing in (0, d f) for
    ``r-2``-forms); ``mu_k`` on Hamiltonian pairs is
    ``((-1)^{k+1} i_{x_1}..i_{x_k} sigma)`` together with ``[X_1, X_2]`` for
    ``k = 2``.  ``flip_arity`` negates one bracket (negative control).
    """
    from .forms import PolyVectorField

    _check_closed(sigma, r + 1)
    sp = _observable_space(n, r)
    zvf = PolyVectorField(n)

    def mu1(x):
        if x.degree >= 0:
            return sp.zero()
        return ObservableElement(x.form.d(), zvf, r)

    def make(k):
        base = -1 if k % 2 == 0 else 1
        sign = -base if k == flip_arity else base

        def ev(*xs):
            if any(x.degree != 0 for x in xs):
                return sp.zero()
            fields = [x.vf for x in xs]
            form = sign * multicontract(sigma, fields)
            vf = fields[0].bracket(fields[1]) if k == 2 else zvf
            return ObservableElement(form, vf, r)
        return MultiMap(k, 2 - k, ev, sp, name=f"rogers{k}")

    mu1_sign = -1 if flip_arity == 1 else 1
    brackets = {1: mu1_sign * MultiMap(1, 1, mu1, sp, name="rogers1")}
    for k in range(2, r + 2):
        brackets[k] = make(k)
    out = LInftyStructure(sp, brackets, SKEW, name=f"rogers(n={n},r={r})")
    out.sigma, out.r = sigma, r
    return out


def rogers_sampler(sigma, n, r, max_degree=None):
    def draw(sampler):
        from .forms import PolyVectorField

        while True:
            deg = sampler.choice(list(range(1 - r, 1)))
            if deg == 0:
                X, alpha = sampler.hamiltonian_pair(sigma, max_degree)
                out = ObservableElement(alpha, X, r)
            else:
                out = ObservableElement(sampler.form(deg + r - 1), PolyVectorField(n), r)
            if out:
                return out
    return draw


# Auxiliary DGLAs ----------------------------------------------------------

class HamFields:
    """Lie algebra of fields X with d(i_X sigma) = 0, concentrated in degree 0."""

    degrees = (0,)

    def __init__(self, n, sigma, max_degree=None):
        self.n, self.sigma, self.max_degree = n, sigma, max_degree
        self.name = f"ham(n={n})"
        self._space = GradedSpace(self.name, lambda x: 0, self.zero, degree_range=(0, 0))

    @property
    def space(self):
        return self._space

    def zero(self):
        from .forms import PolyVectorField
        return PolyVectorField(self.n)

    def degree_of(self, x):
        return 0

    def split(self, x):
        return [x]

    def d(self, x):
        return self.zero()

    def bracket(self, x, y):
        return x.bracket(y)

    @property
    def differential(self):
        return MultiMap(1, 1, self.d, self.space, name="0")

    @property
    def bracket_map(self):
        return MultiMap(2, 0, self.bracket, self.space, name="[,]")

    def sample(self, sampler, degree=0):
        if degree != 0:
            raise InvalidInputError("Hamiltonian fields sit in degree 0")
        while True:
            X, _ = sampler.hamiltonian_pair(self.sigma, self.max_degree)
            if X:
                return X


class TruncatedForms:
    """Abelian DGLA: Omega^k in degree k - r for k < r, exact r-forms in degree 0."""

    def __init__(self, n, r):
        self.n, self.r = n, r
        self.name = f"trunc(n={n},r={r})"
        self.degrees = tuple(range(-r, 1))
        self._space = GradedSpace(self.name, self.degree_of, self.zero, self.split,
                                  degree_range=(-r, 0))

    @property
    def space(self):
        return self._space

    def zero(self):
        from .forms import PolyForm
        return PolyForm(self.n)

    def degree_of(self, x):
        ds = x.degrees()
        if not ds:
            return 0
        return next(iter(ds)) - self.r if len(ds) == 1 else None

    def split(self, x):
        return x.homogeneous_parts()

    def d(self, x):
        out = self.zero()
        for part in x.homogeneous_parts():
            if part.form_degree < self.r:
                out = out + part.d()
        return out

    def bracket(self, x, y):
        return self.zero()

    def contains(self, x):
        return all(k <= self.r for k in x.degrees()) and x.part(self.r).is_closed()

    @property
    def differential(self):
        return MultiMap(1, 1, self.d, self.space, name="d")

    @property
    def bracket_map(self):
        return MultiMap(2, 0, self.bracket, self.space, name="0")

    def sample(self, sampler, degree):
        if degree == 0:
            while True:
                out = sampler.form(self.r - 1).d()
                if out:
                    return out
        while True:
            out = sampler.form(degree + self.r)
            if out:
                return out


def iota_infty(sigma, n=None, K=None, max_degree=None):
    """(iota_infty sigma)_k(X_1..X_k) = -i_{X_1}..i_{X_k} sigma."""
    n = n or sigma.n
    r = sigma.form_degree - 1
    _check_closed(sigma, r + 1)
    src = HamFields(n, sigma, max_degree)
    tgt = TruncatedForms(n, r)
    comps = {}
    for k in range(1, (K or r + 1) + 1):
        def ev(*xs):
            return -multicontract(sigma, list(xs))
        comps[k] = MultiMap(k, 1 - k, ev, src.space, tgt.space, name=f"iota_inf{k}")
    return LInftyMorphism(src, tgt, comps, name="iota_infty")


# Morphisms ----------------------------------------------------------------

class LInftyMorphism:
    """Components ``{k: MultiMap}`` of arity k and degree 1-k between DGLAs."""

    def __init__(self, source, target, components, name=""):
        self.source, self.target, self.name = source, target, name
        self.components = dict(components)
        for k, m in self.components.items():
            if m.arity != k or m.degree != 1 - k:
                raise InvalidInputError(f"component {k} has bidegree ({m.arity},{m.degree})")

    def component(self, k):
        m = self.components.get(k)
        if m is None:
            return MultiMap(k, 1 - k, lambda *xs: self.target.zero(), self.source.space,
                            self.target.space, name="0")
        return m

    def __call__(self, *args):
        return self.component(len(args))(*args)

    @property
    def max_arity(self):
        return max(self.components, default=0)


def _phi_evaluators(n, r, phi2_sign=1):
    from .dgla import SmallGElement
    from .forms import PolyForm, PolyVectorField

    z = PolyVectorField(n)

    def phi1(x):
        return SmallGElement(x.form.d(), x.iota, x.lie, r + 1)

    def phi2(a, b):
        form = b.form.contract(a.iota)
        for k in a.form.degrees():
            part = a.form.part(k).contract(b.iota)
            # -(-1)^{|omega|} i_X omega with |omega| = k - r
            form = form + (part if (k - r) & 1 else -part)
        if phi2_sign != 1:
            form = form - 2 * b.form.contract(a.iota)
        return SmallGElement(form, z, z, r + 1)

    return phi1, phi2


def phi_morphism(n, r, phi2_sign=1):
    """The L-infinity morphism g_r -> g_{r+1} with components (Phi_1, Phi_2).

    Phi_1 is d on forms and the identity on fields; Phi_2(X_(1), omega) =
    i_X omega, completed antisymmetrically.  ``phi2_sign=-1`` flips the first
    term of Phi_2 (negative control).
    """
    from .dgla import SmallG

    g, h = SmallG(n, r), SmallG(n, r + 1)
    phi1, phi2 = _phi_evaluators(n, r, phi2_sign)
    comps = {1: MultiMap(1, 0, phi1, g.space, h.space, name="Phi1"),
             2: MultiMap(2, -1, phi2, g.space, h.space, name="Phi2")}
    return LInftyMorphism(g, h, comps, name=f"Phi(r={r})")


def morphism_value_on(phi, mu, cap=8):
    """Phi(mu) = sum_k 1/k! Phi_k(mu, .., mu)."""
    total = phi.target.zero()
    for k in range(1, min(phi.max_arity, cap) + 1):
        total = total + Fraction(1, factorial(k)) * phi.component(k)(*([mu] * k))
    return total


def twist_morphism(phi, mu, source=None):
    """Phi_mu with (Phi_mu)_k(v) = sum_j 1/j! Phi_{j+k}(mu^j, v), between twisted DGLAs."""
    src = source if source is not None else phi.source.twist(mu)
    image = morphism_value_on(phi, mu)
    tgt = phi.target.twist(image) if image else phi.target
    K = phi.max_arity
    comps = {}
    for k in range(1, K + 1):
        terms = [(Fraction(1, factorial(j)), phi.component(j + k), j) for j in range(0, K - k + 1)]

        def ev(*xs, _terms=terms):
            total = tgt.zero()
            for c, m, j in _terms:
                total = total + scale(c, m(*([mu] * j), *xs))
            return total
        comps[k] = MultiMap(k, 1 - k, ev, src.space, tgt.space, name=f"{phi.name}_mu{k}")
    out = LInftyMorphism(src, tgt, comps, name=f"{phi.name}_mu")
    out.image = image
    return out


def _s2k(phi, k, args, degs, hb, zero):
    """[,]_h o S_{2,k}(Phi) on ``args``."""
    total = zero
    for i in range(1, k // 2 + 1):
        fi, fj = phi.component(i), phi.component(k - i)
        pref = -1 if (1 - i) & 1 else 1
        for p in (ordered_unshuffles(i, k - i) if i == k - i else unshuffles(i, k - i)):
            s = _unshuffle_sign(p, i, degs)
            first = [args[t] for t in p[:i]]
            u = fi(*first)
            if not u:
                continue
            w = fj(*[args[t] for t in p[i:]])
            if not w:
                continue
            koz = -1 if (fj.degree * sum(degs[t] for t in p[:i])) & 1 else 1
            total = total + scale(pref * s * koz, hb(u, w))
    return total


def morphism_sides(phi, k):
    """The two sides of the arity-k morphism identity as evaluators."""
    g, h = phi.source, phi.target
    left = nr_product(phi.component(k), g.differential)
    if k >= 2:
        left = left + nr_product(phi.component(k - 1), g.bracket_map)
    dh_phi = nr_product(h.differential, phi.component(k))
    dom = g.space

    def lhs(*args):
        return left(*args)

    def rhs(*args):
        degs = [dom.degree(a) for a in args]
        return dh_phi(*args) + _s2k(phi, k, args, degs, h.bracket, h.zero())

    return lhs, rhs


def morphism_identity_check(phi, K, sampler, samples=30, degrees=None, name=None, sample_fn=None):
    """Check the arity-k morphism identities for k = 1..K on sampled tuples."""
    from .report import CheckReport

    rep = CheckReport(name or f"morphism[{phi.name}]")
    draw = sample_fn or (lambda s: phi.source.sample(s, s.choice(list(degrees or phi.source.degrees))))
    for k in range(1, K + 1):
        lhs, rhs = morphism_sides(phi, k)
        nonzero = 0
        for _ in range(samples):
            args = [draw(sampler) for _ in range(k)]
            a, b = lhs(*args), rhs(*args)
            rep.compare("morphism-identity", a, b, arity=k, inputs=args)
            nonzero += bool(a) or bool(b)
        rep.info.setdefault("nonvanishing_sides", {})[k] = nonzero
    return rep


# Chevalley-Eilenberg type DGLA of multilinear maps ------------------------

def _sgn(e):
    return -1 if e & 1 else 1


class CeDgla:
    """Multilinear maps g -> h with the convolution bracket, truncated at arity K.

    Elements are lists of MultiMaps (formal sums); the bidegree of a summand
    is (arity, degree) and its total degree is their sum.
    """

    def __init__(self, g, h, K):
        self.g, self.h, self.K = g, h, K

    def _keep(self, maps):
        return [m for m in maps if m.arity <= self.K]

    def bracket_maps(self, f, q):
        a1, d1, a2, d2 = f.arity, f.degree, q.arity, q.degree
        pref = -_sgn(d1 * (a2 + d2))
        dom = self.g.space
        perms = unshuffles(a1, a2)
        hb = self.h.bracket
        zero = self.h.zero

        def ev(*xs):
            degs = [dom.degree(x) for x in xs]
            total = zero()
            for p in perms:
                first = [xs[i] for i in p[:a1]]
                u = f(*first)
                if not u:
                    continue
                w = q(*[xs[i] for i in p[a1:]])
                if not w:
                    continue
                s = _unshuffle_sign(p, a1, degs) * _sgn(d2 * sum(degs[i] for i in p[:a1]))
                total = total + scale(pref * s, hb(u, w))
            return total

        return MultiMap(a1 + a2, d1 + d2, ev, dom, self.h.space, name=f"[{f.name},{q.name}]")

    def bracket(self, F, G):
        return [self.bracket_maps(f, q) for f in F for q in G if f.arity + q.arity <= self.K]

    def d10(self, F):
        return self._keep([nr_product(f, self.g.bracket_map) for f in F])

    def d01(self, F):
        out = []
        for f in F:
            a, d = f.arity, f.degree
            term = nr_product(f, self.g.differential)
            other = nr_product(self.h.differential, f)
            out.append(term - other if (a + d - 1) % 2 == 0 else term + other)
        return out

    def d(self, F):
        return self.d10(F) + self.d01(F)

    def evaluate(self, F, args):
        total = self.h.zero()
        for f in F:
            if f.arity == len(args):
                total = total + f(*args)
        return total

    def scale(self, c, F):
        return [c * f for f in F]

    def gauge(self, A, X):
        """e^A * X = X + sum_n ad_A^n/(n+1)! ([A, X] - d A), truncated at arity K."""
        term = self.bracket(A, X) + self.scale(-1, self.d(A))
        out = list(X)
        n = 0
        while term:
            out += self.scale(Fraction(1, factorial(n + 1)), term)
            term = self.bracket(A, term)
            n += 1
        return out

    def maurer_cartan(self, F):
        """d F + 1/2 [F, F]."""
        return self.d(F) + self.scale(Fraction(1, 2), self.bracket(F, F))


def morphism_as_ce(phi, K):
    return [phi.component(k) for k in range(1, K + 1) if k in phi.components]


def ce_mc_check(phi, K, sampler, samples=30, degrees=None, name=None, sample_fn=None):
    """Morphism test through the Maurer-Cartan equation in the CE DGLA."""
    from .report import CheckReport

    rep = CheckReport(name or f"ce-mc[{phi.name}]")
    ce = CeDgla(phi.source, phi.target, K)
    mc = ce.maurer_cartan(morphism_as_ce(phi, K))
    draw = sample_fn or (lambda s: phi.source.sample(s, s.choice(list(degrees or phi.source.degrees))))
    zero = phi.target.zero()
    for k in range(1, K + 1):
        for _ in range(samples):
            args = [draw(sampler) for _ in range(k)]
            rep.compare("ce-maurer-cartan", ce.evaluate(mc, args), zero, arity=k, inputs=args)
    return rep


def morphism_cross_check(phi, K, sampler, samples=30, degrees=None, sample_fn=None):
    """Both routes on the same tuples: the CE Maurer-Cartan value must equal
    the defect lhs - rhs of the direct identity, and verdicts must agree."""
    from .report import CheckReport

    rep = CheckReport(f"cross[{phi.name}]")
    ce = CeDgla(phi.source, phi.target, K)
    mc = ce.maurer_cartan(morphism_as_ce(phi, K))
    draw = sample_fn or (lambda s: phi.source.sample(s, s.choice(list(degrees or phi.source.degrees))))
    direct_fail, ce_fail = set(), set()
    for k in range(1, K + 1):
        lhs, rhs = morphism_sides(phi, k)
        for _ in range(samples):
            args = [draw(sampler) for _ in range(k)]
            defect = lhs(*args) - rhs(*args)
            value = ce.evaluate(mc, args)
            if defect:
                direct_fail.add(k)
            if value:
                ce_fail.add(k)
            rep.compare("mc-equals-defect", value, defect, arity=k, inputs=args)
    rep.info["direct_failed_arities"] = sorted(direct_fail)
    rep.info["ce_failed_arities"] = sorted(ce_fail)
    return rep


# Gauge equivalence of iota_infty and the inclusion -------------------------

def gauge_morphism_check(sigma, sampler, samples=20, K=None, max_degree=1):
    """Compare (e^iota * L)_k with (iota_infty sigma)_k for k = 1..K.

    Here L: X -> X as a degree-0 element and iota: X -> X_(1), both in the CE
    algebra of maps from Hamiltonian fields to g_{r,sigma}, r = deg(sigma) - 1.
    Also checks [iota, L] = 2 iota o [,] and [iota, (iota_inf)_k] = (k+1)(iota_inf)_{k+1}.
    """
    from .dgla import SmallG
    from .report import CheckReport

    r = sigma.form_degree - 1
    n = sigma.n
    _check_closed(sigma, r + 1)
    K = K or r + 2
    g = HamFields(n, sigma, max_degree)
    base = SmallG(n, r)
    h = base.twist(base.element(form=sigma))
    ce = CeDgla(g, h, K)
    iota = MultiMap(1, -1, lambda X: h.element(iota=X), g.space, h.space, name="iota")
    lie = MultiMap(1, 0, lambda X: h.element(lie=X), g.space, h.space, name="L")
    inf = {k: MultiMap(k, 1 - k, lambda *xs: h.element(form=-multicontract(sigma, list(xs))),
                       g.space, h.space, name=f"iota_inf{k}") for k in range(1, K + 2)}
    rep = CheckReport(f"gauge(r={r})")
    G = ce.gauge([iota], [lie])
    rep.info["series_terms"] = len(G)
    for k in range(1, K + 1):
        for _ in range(samples):
            args = [g.sample(sampler) for _ in range(k)]
            rep.compare("gauge-series", ce.evaluate(G, args), inf[k](*args), arity=k, inputs=args)
    il = ce.bracket_maps(iota, lie)
    two_iota = nr_product(iota, g.bracket_map)
    for _ in range(samples):
        args = [g.sample(sampler) for _ in range(2)]
        rep.compare("bracket-iota-L", il(*args), 2 * two_iota(*args), arity=2, inputs=args)
        X = args[0]
        rep.compare("iota-iota", h.bracket(iota(X), iota(args[1])), h.zero(), arity=2, inputs=args)
    for k in range(1, K):
        b = ce.bracket_maps(iota, inf[k])
        for _ in range(samples):
            args = [g.sample(sampler) for _ in range(k + 1)]
            rep.compare("bracket-iota-iota_inf", b(*args), (k + 1) * inf[k + 1](*args),
                        arity=k + 1, inputs=args)
    return rep


# Homotopy comomentum maps --------------------------------------------------

class BasisLieAlgebra:
    """Finite-dimensional Lie algebra from structure constants ``c[i][j] = {k: c}``.

    Elements are coefficient tuples; everything sits in degree 0.
    """

    degrees = (0,)

    def __init__(self, dim, structure):
        self.dim = dim
        self.structure = structure
        self.name = f"lie(dim={dim})"
        self._space = GradedSpace(self.name, lambda x: 0, self.zero, degree_range=(0, 0))

    @property
    def space(self):
        return self._space

    def zero(self):
        return _Vec((0,) * self.dim)

    def basis(self, i):
        return _Vec(tuple(1 if j == i else 0 for j in range(self.dim)))

    def degree_of(self, x):
        return 0

    def d(self, x):
        return self.zero()

    def bracket(self, x, y):
        out = [0] * self.dim
        for i, a in enumerate(x.c):
            if not a:
                continue
            for j, b in enumerate(y.c):
                if b:
                    for k, c in self.structure.get((i, j), {}).items():
                        out[k] += a * b * c
        return _Vec(tuple(out))

    @property
    def differential(self):
        return MultiMap(1, 1, self.d, self.space, name="0")

    @property
    def bracket_map(self):
        return MultiMap(2, 0, self.bracket, self.space, name="[,]")


class _Vec:
    __slots__ = ("c",)

    def __init__(self, c):
        self.c = tuple(c)

    def __bool__(self):
        return any(self.c)

    def __eq__(self, o):
        return isinstance(o, _Vec) and self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, o):
        return _Vec(a + b for a, b in zip(self.c, o.c))

    def __sub__(self, o):
        return _Vec(a - b for a, b in zip(self.c, o.c))

    def __neg__(self):
        return _Vec(-a for a in self.c)

    def __rmul__(self, s):
        return _Vec(s * a for a in self.c)

    def render(self):
        return [str(a) for a in self.c]


def basis_multimap(table, dim, k, degree, domain, codomain):
    """Skew multilinear map on a degree-0 space given on sorted basis tuples."""
    from itertools import permutations

    def ev(*xs):
        total = codomain.zero()
        for idx in permutations(range(dim), k):
            coef = 1
            for x, i in zip(xs, idx):
                coef *= x.c[i]
                if not coef:
                    break
            if not coef:
                continue
            key = tuple(sorted(idx))
            val = table.get(key)
            if not val:
                continue
            inv = sum(1 for a in range(k) for b in range(a + 1, k) if idx[a] > idx[b])
            total = total + scale(-coef if inv & 1 else coef, val)
        return total
    return MultiMap(k, degree, ev, domain, codomain)


def _check_action(rho, lie_alg, sigma):
    n = sigma.n
    for X in rho:
        if sigma.contract(X).d():
            raise InvalidInputError("action field is not Hamiltonian")
    for i in range(lie_alg.dim):
        for j in range(lie_alg.dim):
            want = type(rho[0]).zero(n)
            for k, c in lie_alg.structure.get((i, j), {}).items():
                want = want + c * rho[k]
            if rho[i].bracket(rho[j]) != want:
                raise InvalidInputError("action is not a Lie algebra morphism")


def solve_comomentum(rho, structure, sigma):
    """Tables ``{k: {sorted index tuple: form}}`` solving the comomentum equations.

    Each h_k is a primitive of (iota_inf o rho)_k - h_{k-1} o [,].
    """
    from itertools import combinations

    from .forms import primitive

    r = sigma.form_degree - 1
    dim = len(rho)
    lie_alg = BasisLieAlgebra(dim, structure)
    _check_action(rho, lie_alg, sigma)
    tgt = TruncatedForms(sigma.n, r)
    tables = {}
    prev = None
    for k in range(1, r + 1):
        table = {}
        for idx in combinations(range(dim), k):
            args = [lie_alg.basis(i) for i in idx]
            goal = -multicontract(sigma, [rho[i] for i in idx])
            if prev is not None:
                goal = goal - nr_product(prev, lie_alg.bracket_map)(*args)
            prim = primitive(goal)
            if prim:
                table[idx] = prim
        tables[k] = table
        prev = basis_multimap(table, dim, k, -k, lie_alg.space, tgt.space)
    return tables


def comomentum_check(rho, structure, h_tables, sigma, beta=None, rho_prime=None):
    """Check iota_inf o rho = d o h_k + h_{k-1} o [,] for k = 1..r+1 on all basis tuples.

    ``h_tables[k]`` maps sorted index tuples to forms of degree r - k.  With
    ``beta`` and ``rho_prime`` (elements of g_{r,sigma + d beta}) also checks
    rho'(xi) = rho(xi) + L_{rho(xi)} beta on the basis.
    """
    from itertools import combinations

    from .dgla import SmallG
    from .report import CheckReport

    r = sigma.form_degree - 1
    _check_closed(sigma, r + 1)
    dim = len(rho)
    lie_alg = BasisLieAlgebra(dim, structure)
    if dim:
        _check_action(rho, lie_alg, sigma)
    tgt = TruncatedForms(sigma.n, r)
    maps = {k: basis_multimap(h_tables.get(k, {}), dim, k, -k, lie_alg.space, tgt.space)
            for k in range(1, r + 2)}
    rep = CheckReport(f"comomentum(r={r})")
    for k in range(1, r + 2):
        dh = nr_product(tgt.differential, maps[k]) if k <= r else None
        hb = nr_product(maps[k - 1], lie_alg.bracket_map) if k >= 2 else None
        for idx in combinations(range(dim), k):
            args = [lie_alg.basis(i) for i in idx]
            lhs = -multicontract(sigma, [rho[i] for i in idx])
            rhs = tgt.zero()
            if dh is not None:
                rhs = rhs + dh(*args)
            if hb is not None:
                rhs = rhs + hb(*args)
            rep.compare("comomentum", lhs, rhs, arity=k, inputs=[list(idx)])
    if beta is not None:
        g = SmallG(sigma.n, r)
        for i in range(dim):
            want = g.element(form=beta.lie(rho[i]), lie=rho[i])
            rep.compare("prism-top-face", rho_prime[i], want, arity=1, inputs=[[i]])
    return rep


# Chain map between Courant carriers ----------------------------------------

def courant_chain_map_check(n, r, sigma, sampler, samples=30, drop_d_at=None):
    """The ladder Omega^k -> Omega^{k+1} (d), (X, alpha) -> (X, d alpha) is a chain map.

    Source carrier: Omega^0..Omega^{r-2}, X + Omega^{r-1}; target: one rank up.
    ``drop_d_at=j`` replaces d by the identity on Omega^j (negative control).
    """
    from .dgla import SmallG, SmallGElement
    from .report import CheckReport

    src = courant_linfty(n, r, sigma, K=1)
    tgt = courant_linfty(n, r + 1, type(sigma).zero(n), K=1)

    def ladder(x):
        form = type(x.form).zero(n)
        for k in x.form.degrees():
            part = x.form.part(k)
            form = form + (part if k == drop_d_at else part.d())
        return SmallGElement(form, x.iota, x.lie, r + 1)

    rep = CheckReport(f"courant-chain(r={r})")
    g = SmallG(n, r)
    rep.compare("zero", ladder(g.zero()), SmallG(n, r + 1).zero(), arity=1)
    m1, m1t = src.bracket(1), tgt.bracket(1)
    for _ in range(samples):
        x = g.sample(sampler, sampler.choice(list(range(-r, 0))))
        rep.compare("chain-map", ladder(m1(x)), m1t(ladder(x)), arity=1, inputs=[x])
    return rep


# Bidifferential structure of the CE algebra ---------------------------------

def _natural_maps(n, r, sampler):
    """A small library of multilinear maps g_r -> g_{r+1} with fixed random data."""
    from .dgla import SmallG, SmallGElement
    from .forms import PolyForm, PolyVectorField

    g, h = SmallG(n, r), SmallG(n, r + 1)
    z = PolyVectorField(n)
    out = []

    def el(form=None, iota=None, lie=None):
        return h.element(form, iota, lie)

    phi1, phi2 = _phi_evaluators(n, r)
    out.append(MultiMap(1, 0, phi1, g.space, h.space, name="Phi1"))
    out.append(MultiMap(2, -1, phi2, g.space, h.space, name="Phi2"))

    q = sampler.rng.randint(r + 1, n) if r + 1 <= n else n
    beta = sampler.form(q)
    if beta:
        out.append(MultiMap(1, q - r - 1,
                            lambda x, b=beta: el(form=b.contract(x.iota) + b.lie(x.lie)),
                            g.space, h.space, name="chi"))
    qq = sampler.rng.randint(0, 2)
    gamma = sampler.form(qq)
    if gamma:
        out.append(MultiMap(1, qq - 1, lambda x, c=gamma: el(form=x.form.wedge(c)),
                            g.space, h.space, name="wedge"))
    Z = sampler.field()
    out.append(MultiMap(1, -2, lambda x, Z=Z: el(form=x.form.contract(Z)), g.space, h.space,
                        name="contract"))
    out.append(MultiMap(1, 1, lambda x: el(lie=x.iota), g.space, h.space, name="raise"))
    out.append(MultiMap(1, -1, lambda x: el(iota=x.lie), g.space, h.space, name="lower"))

    def skew(raw, degree, name):
        dom = g.space

        def ev(a, b):
            s = -1 if (dom.degree(a) * dom.degree(b)) & 1 else 1
            return raw(a, b) - scale(s, raw(b, a))
        return MultiMap(2, degree, ev, g.space, h.space, name=name)

    qw = sampler.rng.randint(0, 1)
    gw = sampler.form(qw)
    if gw:
        out.append(skew(lambda a, b, c=gw: el(form=a.form.wedge(b.form).wedge(c)), qw + r - 1, "wedge2"))
    out.append(skew(lambda a, b: el(lie=a.lie.bracket(b.lie)), 0, "lie2"))
    if beta:
        out.append(skew(lambda a, b, c=beta: el(form=c.contract(b.iota).contract(a.iota)), q - r - 1,
                        "contract2"))
    return g, h, out


def ce_bidgla_check(n, r, sampler, pairs=10, samples=6, K=4):
    """d10^2 = 0, d01^2 = 0, d10 d01 = -d01 d10 and the derivation rules, pointwise."""
    from .report import CheckReport

    g, h, lib = _natural_maps(n, r, sampler)
    ce = CeDgla(g, h, K)
    rep = CheckReport(f"ce-bidgla(r={r})")
    rep.info["library"] = [m.name for m in lib]

    def draw():
        return g.sample(sampler, sampler.choice([-1, -1, 0, 0] + list(g.degrees)))

    nonzero = {}

    def agree(check, F, G, arity):
        for _ in range(samples):
            args = [draw() for _ in range(arity)]
            lhs, rhs = ce.evaluate(F, args), ce.evaluate(G, args)
            rep.compare(check, lhs, rhs, arity=arity, inputs=args)
            nonzero[check] = nonzero.get(check, 0) + (bool(lhs) or bool(rhs))

    for f in lib:
        a = f.arity
        if a + 2 <= K:
            agree("d10-squared", ce.d10(ce.d10([f])), [], a + 2)
        agree("d01-squared", ce.d01(ce.d01([f])), [], a)
        if a + 1 <= K:
            agree("anticommute", ce.d10(ce.d01([f])), ce.scale(-1, ce.d01(ce.d10([f]))), a + 1)
    for _ in range(pairs):
        f, q = sampler.choice(lib), sampler.choice(lib)
        a = f.arity + q.arity
        tf = f.arity + f.degree
        sg = -1 if tf & 1 else 1
        tq = q.arity + q.degree
        swap = -1 if (tf * tq) & 1 else 1
        agree("antisymmetry", ce.bracket([f], [q]), ce.scale(-swap, ce.bracket([q], [f])), a)
        agree("derivation-d01", ce.d01(ce.bracket([f], [q])),
              ce.bracket(ce.d01([f]), [q]) + ce.scale(sg, ce.bracket([f], ce.d01([q]))), a)
        if a + 1 <= K:
            agree("derivation-d10", ce.d10(ce.bracket([f], [q])),
                  ce.bracket(ce.d10([f]), [q]) + ce.scale(sg, ce.bracket([f], ce.d10([q]))), a + 1)
    rep.info["nonvanishing"] = dict(sorted(nonzero.items()))
    return rep


def courant_binary_check(n, r, sigma, sampler, samples=50):
    """Binary Courant L-infinity bracket on degree-0 elements against the
    sigma-twisted Courant bracket on sections (X, alpha), alpha of degree r-1."""
    from .forms import courant_bracket
    from .report import CheckReport

    L = courant_linfty(n, r, sigma, K=2)
    mu2 = L.bracket(2)
    rep = CheckReport(f"courant-binary(r={r})")
    g = L.dgla
    for _ in range(samples):
        a, b = g.sample(sampler, -1), g.sample(sampler, -1)
        s1, s2 = element_to_section(a), element_to_section(b)
        want = section_to_element(courant_bracket(s1, s2, sigma), r)
        rep.compare("courant-binary", mu2(a, b), want, arity=2, inputs=[a, b])
    return rep
