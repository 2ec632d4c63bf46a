"""Differential graded Lie algebras: the Cartan algebra, the semidirect
product with shifted forms, twisting, truncation and gauge actions."""

from fractions import Fraction
from math import factorial

from .errors import InvalidInputError, UnsupportedInputError
from .forms import PolyForm, PolyVectorField
from .graded import GradedSpace, MultiMap

HALF = Fraction(1, 2)


class Dgla:
    """Interface: subclasses provide ``d``, ``bracket``, ``degree_of``,
    ``split``, ``zero`` and ``sample``."""

    name = "dgla"
    degrees = ()

    def degree_of(self, x):
        raise NotImplementedError

    def split(self, x):
        return [x]

    def zero(self):
        raise NotImplementedError

    def d(self, x):
        raise NotImplementedError

    def bracket(self, x, y):
        raise NotImplementedError

    def sample(self, sampler, degree):
        raise NotImplementedError

    def contains(self, x):
        return all(self.degree_of(p) in self.degrees for p in self.split(x) if p)

    def degree(self, x):
        d = self.degree_of(x)
        if d is None:
            raise InvalidInputError(f"element of {self.name} is not homogeneous")
        return d

    @property
    def space(self):
        sp = getattr(self, "_space", None)
        if sp is None:
            lo, hi = min(self.degrees), max(self.degrees)
            sp = GradedSpace(self.name, self.degree_of, self.zero, self.split,
                             degree_range=(lo, hi))
            self._space = sp
        return sp

    @property
    def differential(self):
        return MultiMap(1, 1, self.d, self.space, name=f"d[{self.name}]")

    @property
    def bracket_map(self):
        return MultiMap(2, 0, self.bracket, self.space, name=f"[,][{self.name}]")

    def twist(self, mc):
        return TwistedDgla(self, mc)

    def truncate_nonneg(self):
        return Truncation(self)


def mc_check(g, a):
    """Whether d a + 1/2 [a, a] = 0 for a degree-1 element ``a``."""
    if a and g.degree_of(a) != 1:
        raise InvalidInputError("Maurer-Cartan elements have degree 1")
    return not (g.d(a) + HALF * g.bracket(a, a))


class TwistedDgla(Dgla):
    """Same bracket, differential d + [mc, -]."""

    def __init__(self, base, mc):
        if not mc_check(base, mc):
            raise InvalidInputError("twisting element is not Maurer-Cartan")
        self.base = base
        self.mc = mc
        self.name = f"{base.name}_mc"
        self.degrees = base.degrees

    def degree_of(self, x):
        return self.base.degree_of(x)

    def split(self, x):
        return self.base.split(x)

    def zero(self):
        return self.base.zero()

    def d(self, x):
        return self.base.d(x) + self.base.bracket(self.mc, x)

    def bracket(self, x, y):
        return self.base.bracket(x, y)

    def sample(self, sampler, degree):
        return self.base.sample(sampler, degree)

    def __getattr__(self, attr):
        if attr == "base":
            raise AttributeError(attr)
        return getattr(self.base, attr)


class Truncation(Dgla):
    """Sub-DGLA of non-negative degrees."""

    def __init__(self, base):
        self.base = base
        self.name = f"{base.name}>=0"
        self.degrees = tuple(d for d in base.degrees if d >= 0)

    def degree_of(self, x):
        return self.base.degree_of(x)

    def split(self, x):
        return self.base.split(x)

    def zero(self):
        return self.base.zero()

    def d(self, x):
        return self.base.d(x)

    def bracket(self, x, y):
        return self.base.bracket(x, y)

    def sample(self, sampler, degree):
        if degree < 0:
            raise InvalidInputError("truncation has no negative degrees")
        return self.base.sample(sampler, degree)


def gauge_action(g, a, x, cap=32):
    """e^a * x = x + sum_n ad_a^n / (n+1)! ([a, x] - d a)."""
    if a and g.degree_of(a) != 0:
        raise InvalidInputError("gauge parameters have degree 0")
    if x and g.degree_of(x) != 1:
        raise InvalidInputError("gauge action is on degree-1 elements")
    term = g.bracket(a, x) - g.d(a)
    total = x
    n = 0
    while term:
        if n >= cap:
            raise UnsupportedInputError(f"adjoint series did not terminate after {cap} terms")
        total = total + Fraction(1, factorial(n + 1)) * term
        term = g.bracket(a, term)
        n += 1
    return total


# Cartan algebra ----------------------------------------------------------

class CartanElement:
    """X_(1) + Y with X in the degree -1 slot and Y in degree 0."""

    __slots__ = ("iota", "lie")

    def __init__(self, iota, lie):
        self.iota, self.lie = iota, lie

    def __bool__(self):
        return bool(self.iota) or bool(self.lie)

    def __eq__(self, other):
        return isinstance(other, CartanElement) and self.iota == other.iota and self.lie == other.lie

    def __hash__(self):
        return hash((self.iota, self.lie))

    def __add__(self, o):
        return CartanElement(self.iota + o.iota, self.lie + o.lie)

    def __sub__(self, o):
        return CartanElement(self.iota - o.iota, self.lie - o.lie)

    def __neg__(self):
        return CartanElement(-self.iota, -self.lie)

    def __rmul__(self, c):
        return CartanElement(c * self.iota, c * self.lie)

    def key(self):
        return (self.iota.key(), self.lie.key())

    def __repr__(self):
        return f"CartanElement(iota={self.iota}, lie={self.lie})"


class CartanDgla(Dgla):
    def __init__(self, n):
        self.n = n
        self.name = f"cartan(n={n})"
        self.degrees = (-1, 0)

    def zero(self):
        return CartanElement(PolyVectorField(self.n), PolyVectorField(self.n))

    def degree_of(self, x):
        if x.iota and x.lie:
            return None
        return -1 if x.iota else 0

    def split(self, x):
        z = PolyVectorField(self.n)
        return [CartanElement(x.iota, z), CartanElement(z, x.lie)]

    def d(self, x):
        return CartanElement(PolyVectorField(self.n), x.iota)

    def bracket(self, a, b):
        lie = a.lie.bracket(b.lie)
        iota = a.lie.bracket(b.iota) - b.lie.bracket(a.iota)
        return CartanElement(iota, lie)

    def sample(self, sampler, degree):
        z = PolyVectorField(self.n)
        if degree == -1:
            return CartanElement(sampler.field(), z)
        if degree == 0:
            return CartanElement(z, sampler.field())
        raise InvalidInputError(f"no elements of degree {degree}")


def cartan_operator(e, omega):
    """Action of a Cartan element on forms: i_X + L_Y."""
    return omega.contract(e.iota) + omega.lie(e.lie)


# Semidirect product with shifted forms -----------------------------------

class SmallGElement:
    """omega + X_(1) + Y; form degree k sits in internal degree k - r."""

    __slots__ = ("form", "iota", "lie", "r", "_hash")

    def __init__(self, form, iota, lie, r):
        self.form, self.iota, self.lie, self.r = form, iota, lie, r
        self._hash = None

    @property
    def n(self):
        return self.form.n

    @classmethod
    def of_form(cls, form, r):
        z = PolyVectorField(form.n)
        return cls(form, z, z, r)

    @classmethod
    def of_iota(cls, X, r):
        return cls(PolyForm(X.n), X, PolyVectorField(X.n), r)

    @classmethod
    def of_lie(cls, Y, r):
        return cls(PolyForm(Y.n), PolyVectorField(Y.n), Y, r)

    def __bool__(self):
        return bool(self.form) or bool(self.iota) or bool(self.lie)

    def __eq__(self, other):
        return (isinstance(other, SmallGElement) and self.r == other.r and self.form == other.form
                and self.iota == other.iota and self.lie == other.lie)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.form, self.iota, self.lie, self.r))
        return self._hash

    def __add__(self, o):
        if isinstance(o, int) and o == 0:
            return self
        return SmallGElement(self.form + o.form, self.iota + o.iota, self.lie + o.lie, self.r)

    __radd__ = __add__

    def __sub__(self, o):
        return SmallGElement(self.form - o.form, self.iota - o.iota, self.lie - o.lie, self.r)

    def __neg__(self):
        return SmallGElement(-self.form, -self.iota, -self.lie, self.r)

    def __rmul__(self, c):
        return SmallGElement(c * self.form, c * self.iota, c * self.lie, self.r)

    def degrees(self):
        out = {k - self.r for k in self.form.degrees()}
        if self.iota:
            out.add(-1)
        if self.lie:
            out.add(0)
        return out

    @property
    def degree(self):
        ds = self.degrees()
        return next(iter(ds)) if len(ds) == 1 else None

    def parts(self):
        """Homogeneous components in increasing degree."""
        n, r = self.n, self.r
        z = PolyVectorField(n)
        out = {}
        for k in sorted(self.form.degrees()):
            out[k - r] = SmallGElement(self.form.part(k), z, z, r)
        if self.iota:
            cur = out.get(-1, SmallGElement(PolyForm(n), z, z, r))
            out[-1] = SmallGElement(cur.form, self.iota, z, r)
        if self.lie:
            cur = out.get(0, SmallGElement(PolyForm(n), z, z, r))
            out[0] = SmallGElement(cur.form, z, self.lie, r)
        return [out[k] for k in sorted(out)]

    def key(self):
        return (self.form.key(), self.iota.key(), self.lie.key())

    def __repr__(self):
        bits = []
        if self.form:
            bits.append(f"form={self.form}")
        if self.iota:
            bits.append(f"iota={self.iota}")
        if self.lie:
            bits.append(f"lie={self.lie}")
        return "SmallGElement(" + ", ".join(bits or ["0"]) + ")"


def _signed_form_contract(alpha, Z, r):
    # {alpha, Z_(1)} = -(-1)^{|alpha|} i_Z alpha, per form degree
    out = PolyForm(alpha.n)
    for k in alpha.degrees():
        part = alpha.part(k).contract(Z)
        out = out + (part if (k - r) & 1 else -part)
    return out


class SmallG(Dgla):
    """The semidirect product of the Cartan algebra with Omega[r]."""

    def __init__(self, n, r):
        if r < 0:
            raise InvalidInputError("r must be non-negative")
        self.n, self.r = n, r
        self.name = f"g(n={n},r={r})"
        self.degrees = tuple(sorted(set(range(-r, n - r + 1)) | {-1, 0}))

    def zero(self):
        z = PolyVectorField(self.n)
        return SmallGElement(PolyForm(self.n), z, z, self.r)

    def degree_of(self, x):
        return x.degree

    def split(self, x):
        return x.parts()

    def d(self, x):
        return SmallGElement(x.form.d(), PolyVectorField(self.n), x.iota, self.r)

    def bracket(self, a, b):
        r = self.r
        form = b.form.contract(a.iota) + _signed_form_contract(a.form, b.iota, r)
        if a.lie:
            form = form + b.form.lie(a.lie)
        if b.lie:
            form = form - a.form.lie(b.lie)
        lie = a.lie.bracket(b.lie)
        iota = a.lie.bracket(b.iota) - b.lie.bracket(a.iota)
        return SmallGElement(form, iota, lie, r)

    def element(self, form=None, iota=None, lie=None):
        z = PolyVectorField(self.n)
        return SmallGElement(form if form is not None else PolyForm(self.n),
                             iota if iota is not None else z, lie if lie is not None else z, self.r)

    def sample(self, sampler, degree):
        if degree not in self.degrees:
            raise InvalidInputError(f"no elements of degree {degree}")
        while True:
            k = degree + self.r
            form = sampler.form(k) if 0 <= k <= self.n and sampler.rng.random() < 0.8 else PolyForm(self.n)
            iota = sampler.field() if degree == -1 and sampler.rng.random() < 0.7 else None
            lie = sampler.field() if degree == 0 and sampler.rng.random() < 0.7 else None
            x = self.element(form, iota, lie)
            if x:
                return x


def twisted_small_g(n, r, sigma):
    """g_r twisted by a closed (r+1)-form."""
    g = SmallG(n, r)
    return g.twist(g.element(form=sigma))


def twisted_differential_table(x, sigma):
    """Closed formula d_sigma(omega + X_(1) + Y) = d omega + i_X sigma - L_Y sigma + X."""
    form = x.form.d() + sigma.contract(x.iota) - sigma.lie(x.lie)
    return SmallGElement(form, PolyVectorField(x.n), x.iota, x.r)


class StrictMorphism:
    """Degree-preserving linear map between DGLAs, with an optional inverse."""

    def __init__(self, source, target, fn, inverse=None, name=""):
        self.source, self.target, self.fn, self._inverse, self.name = source, target, fn, inverse, name

    def __call__(self, x):
        return self.fn(x)

    @property
    def inverse(self):
        if self._inverse is None:
            raise UnsupportedInputError("no inverse recorded")
        return self._inverse


def chi_beta(beta, sigma, n=None, r=None):
    """The isomorphism g_{r,sigma} -> g_{r,sigma + d beta}.

    omega + X_(1) + Y  |->  omega + i_X beta + X_(1) + Y + L_Y beta.
    """
    if beta and sigma and beta.n != sigma.n:
        raise InvalidInputError("dimension mismatch")
    n = n if n is not None else beta.n
    r = r if r is not None else beta.form_degree
    if beta and beta.degrees() != {r}:
        raise InvalidInputError(f"gauge form must have degree {r}")
    g = SmallG(n, r)
    source = g.twist(g.element(form=sigma))
    target = g.twist(g.element(form=sigma + beta.d()))

    def make(b):
        def fn(x):
            form = x.form + b.contract(x.iota) + b.lie(x.lie)
            return SmallGElement(form, x.iota, x.lie, r)
        return fn

    inv = StrictMorphism(target, source, make(-beta), name="chi(-beta)")
    return StrictMorphism(source, target, make(beta), inverse=inv, name="chi(beta)")


def chi_beta_series(beta, r):
    """The same map as exp(ad_{-beta}), summed until the series stops."""
    n = beta.n
    g = SmallG(n, r)
    b = g.element(form=-beta)

    def fn(x):
        total = x
        term = x
        k = 1
        while True:
            term = Fraction(1, k) * g.bracket(b, term)
            if not term:
                return total
            total = total + term
            k += 1
    return fn
