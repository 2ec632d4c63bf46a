"""Graded polynomials on T*[r]T[1]R^n, the shifted Poisson bracket and the
embedding of the small model.

Variables are numbered ``x_i -> i``, ``v_i -> n+i``, ``p_i -> 2n+i``,
``P_i -> 3n+i`` (0-based i), with degrees 0, 1, r-1, r.  A monomial is
``(exps, odd)``: exponents of the even-degree variables (odd slots stay 0)
and the sorted tuple of distinct odd-degree variables.  The value of a
monomial is the product of its even part followed by its odd word.

Bracket table on generators (every other pair vanishes)::

    {P_i, x^i} = 1      {x^i, P_i} = -1
    {p_i, v^i} = 1      {v^i, p_i} = (-1)^r

With this table S = sum v^i P_i satisfies {S, f} = df on pulled-back forms.
"""

from itertools import combinations

from .dgla import Dgla, SmallGElement
from .errors import InvalidInputError
from .forms import PolyForm, PolyVectorField
from ._kernels import norm
from .kernels import poly_add, poly_scale

X, V, LP, UP = 0, 1, 2, 3
FAMILY_NAMES = ("x", "v", "p", "P")


class CoordinateSystem:
    """Darboux coordinates x, v, p, P on T*[r]T[1]R^n."""

    def __init__(self, n, r):
        if r < 1:
            raise InvalidInputError("r must be at least 1")
        self.n, self.r = n, r
        self.fam_degree = (0, 1, r - 1, r)
        self.var_degree = tuple(self.fam_degree[v // n] for v in range(4 * n))
        self.odd = tuple(d & 1 for d in self.var_degree)

    def __eq__(self, other):
        return isinstance(other, CoordinateSystem) and (self.n, self.r) == (other.n, other.r)

    def __hash__(self):
        return hash((self.n, self.r))

    def var(self, family, i):
        """Index of a variable; ``i`` is 1-based."""
        return family * self.n + i - 1

    def partner(self, v):
        fam, i = divmod(v, self.n)
        return (3 - fam) * self.n + i

    def structure(self, a, b):
        """{a, b} for generators, assuming b is the partner of a."""
        fam = a // self.n
        if fam == UP:
            return 1
        if fam == X:
            return -1
        if fam == LP:
            return 1
        return -1 if self.r & 1 else 1

    def variable(self, family, i):
        v = self.var(family, i)
        return GradedPoly(self, {self.mono_of_var(v): 1})

    def mono_of_var(self, v):
        exps = [0] * (4 * self.n)
        if self.odd[v]:
            return (tuple(exps), (v,))
        exps[v] = 1
        return (tuple(exps), ())

    def x(self, i):
        return self.variable(X, i)

    def v(self, i):
        return self.variable(V, i)

    def p(self, i):
        return self.variable(LP, i)

    def P(self, i):
        return self.variable(UP, i)

    def one(self):
        return GradedPoly(self, {((0,) * (4 * self.n), ()): 1})

    def zero(self):
        return GradedPoly(self, {})


def _merge_odd(a, b):
    """Sorted concatenation of two odd words with the sign, or (None, 0)."""
    if not a:
        return b, 1
    if not b:
        return a, 1
    inv = 0
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        elif b[j] < a[i]:
            out.append(b[j])
            inv += len(a) - i
            j += 1
        else:
            return None, 0
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out), (-1 if inv & 1 else 1)


def _mono_mul(m1, m2):
    odd, s = _merge_odd(m1[1], m2[1])
    if odd is None:
        return None, 0
    return (tuple([a + b for a, b in zip(m1[0], m2[0])]), odd), s


def _acc(out, key, c):
    w = out.get(key, 0) + c
    if w:
        out[key] = w
    else:
        del out[key]


class GradedPoly:
    """Element of the shifted graded polynomial algebra; degree = weight - r."""

    __slots__ = ("sys", "terms", "_hash")

    def __init__(self, sys, terms=None):
        self.sys = sys
        self.terms = terms if terms is not None else {}
        self._hash = None

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, GradedPoly) and self.sys == other.sys and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def _check(self, other):
        if not isinstance(other, GradedPoly) or other.sys != self.sys:
            raise InvalidInputError("graded polynomials from different coordinate systems")
        return other

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return GradedPoly(self.sys, poly_add(self.terms, self._check(other).terms))

    __radd__ = __add__

    def __sub__(self, other):
        return GradedPoly(self.sys, poly_add(self.terms, self._check(other).terms, -1))

    def __neg__(self):
        return GradedPoly(self.sys, poly_scale(self.terms, -1))

    def __rmul__(self, c):
        return GradedPoly(self.sys, poly_scale(self.terms, c))

    def __mul__(self, other):
        if not isinstance(other, GradedPoly):
            return GradedPoly(self.sys, poly_scale(self.terms, other))
        self._check(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m, s = _mono_mul(m1, m2)
                if m is not None:
                    _acc(out, m, c1 * c2 if s > 0 else -(c1 * c2))
        return GradedPoly(self.sys, {k: norm(v) for k, v in out.items()})

    def weight(self, mono):
        exps, odd = mono
        deg = self.sys.var_degree
        return sum(e * deg[i] for i, e in enumerate(exps) if e) + sum(deg[v] for v in odd)

    def degrees(self):
        return {self.weight(m) - self.sys.r for m in self.terms}

    @property
    def degree(self):
        ds = self.degrees()
        return next(iter(ds)) if len(ds) == 1 else None

    def parts(self):
        by = {}
        for m, c in self.terms.items():
            by.setdefault(self.weight(m) - self.sys.r, {})[m] = c
        return [GradedPoly(self.sys, by[k]) for k in sorted(by)]

    def key(self):
        return tuple(sorted(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        n = self.sys.n
        out = []
        for (exps, odd), c in sorted(self.terms.items()):
            names = []
            for v, e in enumerate(exps):
                if e:
                    fam, i = divmod(v, n)
                    names.append(f"{FAMILY_NAMES[fam]}{i + 1}" + (f"**{e}" if e > 1 else ""))
            for v in odd:
                fam, i = divmod(v, n)
                names.append(f"{FAMILY_NAMES[fam]}{i + 1}")
            mono = "*".join(names)
            out.append(str(c) if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(out)

    __repr__ = __str__


def _remove_even(exps, v):
    return exps[:v] + (exps[v] - 1,) + exps[v + 1:]


def _bracket_monomials(sys, m1, m2, out, c):
    """Accumulate c * {m1, m2} into ``out`` by generator-wise Leibniz expansion."""
    r = sys.r
    odd_flag = sys.odd
    deg = sys.var_degree
    exps1, odd1 = m1
    exps2, odd2 = m2
    # generators of m1: (variable, multiplicity, A-parity sign, remainder)
    left = []
    for v, e in enumerate(exps1):
        if e:
            left.append((v, e, 1, (_remove_even(exps1, v), odd1)))
    for t, v in enumerate(odd1):
        after = len(odd1) - 1 - t
        sign = -1 if (after * deg[v]) & 1 else 1
        left.append((v, 1, sign, (exps1, odd1[:t] + odd1[t + 1:])))
    for v, mult, sa, rest1 in left:
        b = sys.partner(v)
        if odd_flag[b]:
            if b not in odd2:
                continue
            t = odd2.index(b)
            sb = -1 if ((deg[v] - r) * t) & 1 else 1
            rest2 = (exps2, odd2[:t] + odd2[t + 1:])
            multb = 1
        else:
            multb = exps2[b]
            if not multb:
                continue
            sb = 1
            rest2 = (_remove_even(exps2, b), odd2)
        m, s = _mono_mul(rest1, rest2)
        if m is None:
            continue
        coef = c * mult * multb * sa * sb * s * sys.structure(v, b)
        _acc(out, m, coef)


def poisson_bracket(f, g):
    """The degree -r Poisson bracket; a degree 0 Lie bracket after the shift."""
    f._check(g)
    out = {}
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            _bracket_monomials(f.sys, m1, m2, out, c1 * c2)
    return GradedPoly(f.sys, {k: norm(v) for k, v in out.items()})


def canonical_S(sys):
    """S = sum_i v^i P_i."""
    out = sys.zero()
    for i in range(1, sys.n + 1):
        out = out + sys.v(i) * sys.P(i)
    return out


def pullback_form(omega, sys):
    """x^e dx_I  |->  x^e v^I."""
    n = sys.n
    if omega.n != n:
        raise InvalidInputError("dimension mismatch")
    out = {}
    pad = (0,) * (3 * n)
    for (I, e), c in omega.terms.items():
        out[(e + pad, tuple(n + i for i in I))] = c
    return GradedPoly(sys, out)


def _scalar_times_var(f_terms, sys, v):
    # sum c x^e * var
    n = sys.n
    pad = (0,) * (3 * n)
    out = {}
    for e, c in f_terms.items():
        exps = e + pad
        if sys.odd[v]:
            out[(exps, (v,))] = c
        else:
            out[(exps[:v] + (1,) + exps[v + 1:], ())] = c
    return out


def embed_small(e, sys):
    """omega + X_(1) + Y  |->  omega + X^i p_i + Y^i P_i + d_j Y^i v^j p_i."""
    if e.r != sys.r or e.n != sys.n:
        raise InvalidInputError("element and coordinate system disagree on n or r")
    n = sys.n
    out = pullback_form(e.form, sys)
    for i, comp in enumerate(e.iota.comps):
        if comp:
            out = out + GradedPoly(sys, _scalar_times_var(comp, sys, sys.var(LP, i + 1)))
    for i, comp in enumerate(e.lie.comps):
        if not comp:
            continue
        out = out + GradedPoly(sys, _scalar_times_var(comp, sys, sys.var(UP, i + 1)))
        for j in range(n):
            dj = {}
            for ex, c in comp.items():
                if ex[j]:
                    dj[ex[:j] + (ex[j] - 1,) + ex[j + 1:]] = c * ex[j]
            if dj:
                out = out + sys.v(j + 1) * GradedPoly(sys, _scalar_times_var(dj, sys, sys.var(LP, i + 1)))
    return out


def restrict_to_small(f, sys):
    """Inverse of the embedding on negative degrees; raises outside the image."""
    n, r = sys.n, sys.r
    form = {}
    iota = [{} for _ in range(n)]
    for (exps, odd), c in f.terms.items():
        xe = exps[:n]
        rest_even = exps[n:]
        vs = [v for v in odd if n <= v < 2 * n]
        others = [v for v in odd if v >= 2 * n]
        if not any(rest_even) and not others:
            form[(tuple(v - n for v in vs), xe)] = c
            continue
        ps = others + [v for v, k in enumerate(exps) if v >= 2 * n and k for _ in range(k)]
        if not vs and len(ps) == 1 and 2 * n <= ps[0] < 3 * n:
            iota[ps[0] - 2 * n][xe] = c
            continue
        raise InvalidInputError(f"monomial {GradedPoly(sys, {(exps, odd): 1})} is not in the small model")
    return SmallGElement(PolyForm(n, form), PolyVectorField(n, iota), PolyVectorField(n), r)


class LargeG(Dgla):
    """Shifted functions on T*[r]T[1]R^n with differential {S, -}."""

    def __init__(self, n, r, max_momentum=2):
        self.sys = CoordinateSystem(n, r)
        self.n, self.r = n, r
        self.S = canonical_S(self.sys)
        self.max_momentum = max_momentum
        self.name = f"ghat(n={n},r={r})"
        # sampled degrees; the algebra itself is unbounded above
        self.degrees = tuple(d for d in range(-r, 4)
                             if _cached_monomials(self.sys, d, max_momentum))

    def zero(self):
        return self.sys.zero()

    def degree_of(self, x):
        return x.degree

    def split(self, x):
        return x.parts()

    def d(self, x):
        return poisson_bracket(self.S, x)

    def bracket(self, a, b):
        return poisson_bracket(a, b)

    def monomials_of_degree(self, degree, max_momentum=None):
        """x-free monomials of a given shifted degree (momentum powers bounded)."""
        return monomials_of_degree(self.sys, degree, self.max_momentum if max_momentum is None else max_momentum)

    def sample(self, sampler, degree):
        monos = _cached_monomials(self.sys, degree, self.max_momentum)
        if not monos:
            raise InvalidInputError(f"no monomials of degree {degree}")
        while True:
            out = {}
            for _ in range(sampler.rng.randint(1, 3)):
                exps, odd = sampler.choice(monos)
                e = sampler.exponent()
                m = (tuple(a + b for a, b in zip(e + (0,) * (3 * self.n), exps)), odd)
                _acc(out, m, sampler.coeff())
            if out:
                return GradedPoly(self.sys, {k: norm(v) for k, v in out.items()})


_MONO_CACHE = {}


def _cached_monomials(sys, degree, bound):
    key = (sys.n, sys.r, degree, bound)
    if key not in _MONO_CACHE:
        _MONO_CACHE[key] = monomials_of_degree(sys, degree, bound)
    return _MONO_CACHE[key]


def monomials_of_degree(sys, degree, max_momentum=2):
    """All x-free monomials in v, p, P of shifted degree ``degree``.

    Even momentum variables appear with exponent at most ``max_momentum``.
    """
    n, r = sys.n, sys.r
    target = degree + r
    out = []
    vars_ = list(range(n, 4 * n))
    odd_vars = [v for v in vars_ if sys.odd[v]]
    even_vars = [v for v in vars_ if not sys.odd[v]]

    def even_choices(idx, left):
        if idx == len(even_vars):
            yield ()
            return
        d = sys.var_degree[even_vars[idx]]
        top = max_momentum if d == 0 else min(max_momentum, left // d if d else max_momentum)
        for k in range(top + 1):
            if d * k <= left:
                for rest in even_choices(idx + 1, left - d * k):
                    yield (k,) + rest

    for size in range(len(odd_vars) + 1):
        for odd in combinations(odd_vars, size):
            w = sum(sys.var_degree[v] for v in odd)
            if w > target:
                continue
            for ks in even_choices(0, target - w):
                if w + sum(k * sys.var_degree[v] for k, v in zip(ks, even_vars)) != target:
                    continue
                exps = [0] * (4 * n)
                for k, v in zip(ks, even_vars):
                    exps[v] = k
                out.append((tuple(exps), odd))
    return out


def large_g(n, r, sigma=None, max_momentum=2):
    g = LargeG(n, r, max_momentum)
    if sigma is None or not sigma:
        return g
    return g.twist(pullback_form(sigma, g.sys))


def getzler_source_check(n, r, sigma, sampler=None, samples=20, max_momentum=2):
    """Compare negative-degree parts of the small and large models.

    Returns a dict with the injectivity verdict on samples, and for every
    negative degree the monomials of the large model that are not in the
    image of the embedding (both without restriction and for momentum
    degree at most one).
    """
    from .dgla import SmallG
    from .sampling import Sampler

    if not sigma.is_closed():
        raise InvalidInputError("twisting form is not closed")
    sampler = sampler or Sampler(0, n)
    sys = CoordinateSystem(n, r)
    g = SmallG(n, r)
    injective = True
    for _ in range(samples):
        deg = sampler.choice(g.degrees)
        e = g.sample(sampler, deg)
        img = embed_small(e, sys)
        if not img or (deg < 0 and restrict_to_small(img, sys) != e):
            injective = False
    missing = {}
    missing_linear = {}
    momentum = set(range(2 * n, 4 * n))
    for deg in range(-r, 0):
        bad = []
        for exps, odd in monomials_of_degree(sys, deg, max_momentum):
            try:
                restrict_to_small(GradedPoly(sys, {(exps, odd): 1}), sys)
            except InvalidInputError:
                bad.append((exps, odd))
        missing[deg] = [str(GradedPoly(sys, {m: 1})) for m in bad]
        lin = [m for m in bad
               if sum(m[0][v] for v in momentum) + sum(1 for v in m[1] if v in momentum) <= 1]
        missing_linear[deg] = [str(GradedPoly(sys, {m: 1})) for m in lin]
    return {
        "n": n, "r": r,
        "injective_on_samples": injective,
        "missing": missing,
        "missing_fiber_linear": missing_linear,
        "negative_parts_agree": all(not v for v in missing.values()),
        "fiber_linear_parts_agree": all(not v for v in missing_linear.values()),
    }
