"""Polynomial differential forms and vector fields on R^n with exact rationals.

Public constructors take 1-based coordinate indices (``x1``, ``dx1``,
``d1``); storage is 0-based.
"""

from fractions import Fraction
from numbers import Rational

from . import kernels as K
from .errors import InvalidInputError

__all__ = [
    "Poly", "PolyForm", "PolyVectorField", "CourantSection",
    "coordinate", "basis_form", "partial", "vol", "constant",
    "wedge", "de_rham", "contract", "lie_derivative", "vf_bracket",
    "pairing", "courant_bracket", "courant_bracket_expanded", "hamiltonian_check",
    "primitive", "euler_field", "lie_derivative_leibniz",
]


def _q(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        return _q(Fraction(c))
    raise InvalidInputError(f"coefficient {c!r} is not an exact rational")


def _exp_str(e):
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"x{i + 1}")
        elif k > 1:
            parts.append(f"x{i + 1}**{k}")
    return "*".join(parts)


def _term_str(c, mono, tail):
    pieces = []
    if c != 1 or not (mono or tail):
        pieces.append(str(c))
    if mono:
        pieces.append(mono)
    if tail:
        pieces.append(tail)
    return "*".join(pieces)


class Poly:
    """Polynomial in n variables with rational coefficients."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = terms if terms is not None else {}
        self._hash = None

    @classmethod
    def const(cls, n, c):
        c = _q(c)
        return cls(n, {(0,) * n: c} if c else {})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.n, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.n != self.n:
                raise InvalidInputError("dimension mismatch")
            return other
        return Poly.const(self.n, other)

    def __add__(self, other):
        return Poly(self.n, K.poly_add(self.terms, self._coerce(other).terms))

    __radd__ = __add__

    def __sub__(self, other):
        return Poly(self.n, K.poly_add(self.terms, self._coerce(other).terms, -1))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Poly(self.n, K.poly_scale(self.terms, -1))

    def __mul__(self, other):
        if isinstance(other, (PolyForm, PolyVectorField)):
            return NotImplemented
        if isinstance(other, Poly):
            return Poly(self.n, K.poly_mul(self.terms, self._coerce(other).terms))
        return Poly(self.n, K.poly_scale(self.terms, _q(other)))

    __rmul__ = __mul__

    def diff(self, i):
        """Partial derivative in the 0-based coordinate ``i``."""
        return Poly(self.n, K.poly_diff(self.terms, i))

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def key(self):
        return tuple(sorted(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(_term_str(c, _exp_str(e), "") for e, c in sorted(self.terms.items()))

    __repr__ = __str__


class PolyForm:
    """Differential form: flat map ``(indices, exponents) -> coefficient``."""

    __slots__ = ("n", "terms", "_hash", "_degrees")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = terms if terms is not None else {}
        self._hash = None
        self._degrees = None

    @classmethod
    def zero(cls, n):
        return cls(n, {})

    @classmethod
    def from_scalar(cls, f):
        return cls(f.n, {((), e): c for e, c in f.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, PolyForm):
            return self.n == other.n and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def _check(self, other):
        if not isinstance(other, PolyForm):
            raise InvalidInputError(f"expected a PolyForm, got {type(other).__name__}")
        if other.n != self.n:
            raise InvalidInputError("dimension mismatch")
        return other

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return PolyForm(self.n, K.poly_add(self.terms, self._check(other).terms))

    __radd__ = __add__

    def __sub__(self, other):
        return PolyForm(self.n, K.poly_add(self.terms, self._check(other).terms, -1))

    def __neg__(self):
        return PolyForm(self.n, K.poly_scale(self.terms, -1))

    def __mul__(self, other):
        if isinstance(other, Poly):
            return PolyForm(self.n, K.form_mul_scalar(self.terms, other.terms))
        if isinstance(other, PolyForm):
            return NotImplemented
        return PolyForm(self.n, K.poly_scale(self.terms, _q(other)))

    __rmul__ = __mul__

    def wedge(self, other):
        return PolyForm(self.n, K.form_wedge(self.terms, self._check(other).terms))

    def d(self):
        return PolyForm(self.n, K.form_d(self.terms, self.n))

    def contract(self, X):
        if not X:
            return PolyForm(self.n)
        return PolyForm(self.n, K.form_contract(X.comps, self.terms))

    def lie(self, X):
        if not X:
            return PolyForm(self.n)
        return self.contract(X).d() + self.d().contract(X)

    def degrees(self):
        if self._degrees is None:
            self._degrees = frozenset(len(I) for I, _ in self.terms)
        return self._degrees

    @property
    def form_degree(self):
        """Form degree of a homogeneous nonzero form, ``None`` for zero."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise InvalidInputError(f"form is not homogeneous (degrees {sorted(ds)})")
        return next(iter(ds))

    def part(self, k):
        return PolyForm(self.n, {key: c for key, c in self.terms.items() if len(key[0]) == k})

    def homogeneous_parts(self):
        return [self.part(k) for k in sorted(self.degrees())]

    def is_closed(self):
        return not self.d()

    @property
    def poly_degree(self):
        return max((sum(e) for _, e in self.terms), default=-1)

    def coefficient(self, *indices):
        """Scalar coefficient of ``dx_{i1}^...`` for sorted 1-based indices."""
        I = tuple(i - 1 for i in indices)
        return Poly(self.n, {e: c for (J, e), c in self.terms.items() if J == I})

    def key(self):
        return tuple(sorted(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for (I, e), c in sorted(self.terms.items(), key=lambda t: (len(t[0][0]), t[0][0], t[0][1])):
            out.append(_term_str(c, _exp_str(e), "^".join(f"dx{i + 1}" for i in I)))
        return " + ".join(out)

    __repr__ = __str__


class PolyVectorField:
    """Vector field with polynomial components (tuple of scalar dicts)."""

    __slots__ = ("n", "comps", "_hash")

    def __init__(self, n, comps=None):
        self.n = n
        self.comps = tuple(comps) if comps is not None else tuple({} for _ in range(n))
        if len(self.comps) != n:
            raise InvalidInputError("wrong number of components")
        self._hash = None

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def from_polys(cls, polys):
        polys = list(polys)
        return cls(len(polys), [p.terms for p in polys])

    def component(self, i):
        """Coefficient of the 1-based partial derivative ``d_i``."""
        return Poly(self.n, dict(self.comps[i - 1]))

    def __bool__(self):
        return any(self.comps)

    def __eq__(self, other):
        if isinstance(other, PolyVectorField):
            return self.n == other.n and self.comps == other.comps
        if other == 0:
            return not self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(frozenset(c.items()) for c in self.comps))
        return self._hash

    def _check(self, other):
        if not isinstance(other, PolyVectorField) or other.n != self.n:
            raise InvalidInputError("expected a vector field of the same dimension")
        return other

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        o = self._check(other)
        return PolyVectorField(self.n, [K.poly_add(a, b) for a, b in zip(self.comps, o.comps)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        return PolyVectorField(self.n, [K.poly_add(a, b, -1) for a, b in zip(self.comps, o.comps)])

    def __neg__(self):
        return PolyVectorField(self.n, [K.poly_scale(a, -1) for a in self.comps])

    def __mul__(self, other):
        if isinstance(other, Poly):
            return PolyVectorField(self.n, [K.poly_mul(a, other.terms) for a in self.comps])
        c = _q(other)
        return PolyVectorField(self.n, [K.poly_scale(a, c) for a in self.comps])

    __rmul__ = __mul__

    def apply(self, f):
        """X(f) for a scalar polynomial ``f``."""
        return Poly(self.n, K.derivation(self.comps, f.terms))

    def bracket(self, other):
        o = self._check(other)
        if not self or not o:
            return PolyVectorField(self.n)
        comps = []
        for a, b in zip(self.comps, o.comps):
            comps.append(K.poly_add(K.derivation(self.comps, b), K.derivation(o.comps, a), -1))
        return PolyVectorField(self.n, comps)

    @property
    def poly_degree(self):
        return max((sum(e) for c in self.comps for e in c), default=-1)

    def key(self):
        return tuple(tuple(sorted(c.items())) for c in self.comps)

    def __str__(self):
        out = []
        for i, comp in enumerate(self.comps):
            for e, c in sorted(comp.items()):
                out.append(_term_str(c, _exp_str(e), f"d{i + 1}"))
        return " + ".join(out) if out else "0"

    __repr__ = __str__


def constant(n, c=1):
    return Poly.const(n, c)


def coordinate(n, i):
    """The coordinate function x_i (1-based)."""
    if not 1 <= i <= n:
        raise InvalidInputError(f"coordinate index {i} out of range 1..{n}")
    e = [0] * n
    e[i - 1] = 1
    return Poly(n, {tuple(e): 1})


def basis_form(n, *indices):
    """dx_{i1} ^ ... ^ dx_{ik} (1-based, any order; repeated indices give 0)."""
    out = PolyForm(n, {((), (0,) * n): 1})
    for i in indices:
        if not 1 <= i <= n:
            raise InvalidInputError(f"form index {i} out of range 1..{n}")
        out = out.wedge(PolyForm(n, {((i - 1,), (0,) * n): 1}))
    return out


def partial(n, i):
    """The coordinate vector field d/dx_i (1-based)."""
    if not 1 <= i <= n:
        raise InvalidInputError(f"field index {i} out of range 1..{n}")
    comps = [{} for _ in range(n)]
    comps[i - 1] = {(0,) * n: 1}
    return PolyVectorField(n, comps)


def vol(n):
    return basis_form(n, *range(1, n + 1))


def euler_field(n):
    return PolyVectorField.from_polys(coordinate(n, i) for i in range(1, n + 1))


def wedge(a, b):
    return a.wedge(b)


def de_rham(a):
    return a.d()


def contract(X, a):
    return a.contract(X)


def lie_derivative(X, a):
    """L_X a = d i_X a + i_X d a."""
    return a.lie(X)


def vf_bracket(X, Y):
    return X.bracket(Y)


def primitive(a):
    """Homotopy-operator primitive on R^n.

    Each term ``x^e dx_I`` maps to ``i_E(x^e dx_I) / (|e| + |I|)`` with E the
    Euler field, so ``d(primitive(a)) = a`` whenever ``a`` is closed of
    positive degree.
    """
    n = a.n
    out = {}
    E = euler_field(n).comps
    for (I, e), c in a.terms.items():
        if not I:
            continue
        w = sum(e) + len(I)
        piece = K.form_contract(E, {(I, e): Fraction(c) / w})
        out = K.poly_add(out, piece)
    return PolyForm(n, out)


class CourantSection:
    """A section (X, alpha) of TM + wedge^r T*M."""

    __slots__ = ("vf", "form", "r")

    def __init__(self, vf, form, r=None):
        if vf.n != form.n:
            raise InvalidInputError("dimension mismatch")
        if r is None:
            r = form.form_degree
            if r is None:
                raise InvalidInputError("cannot infer r from a zero form")
        elif form and form.degrees() != {r}:
            raise InvalidInputError(f"form part must have degree {r}")
        self.vf, self.form, self.r = vf, form, r

    @property
    def n(self):
        return self.vf.n

    def __eq__(self, other):
        return (isinstance(other, CourantSection) and self.r == other.r
                and self.vf == other.vf and self.form == other.form)

    def __hash__(self):
        return hash((self.vf, self.form, self.r))

    def __add__(self, other):
        return CourantSection(self.vf + other.vf, self.form + other.form, self.r)

    def __sub__(self, other):
        return CourantSection(self.vf - other.vf, self.form - other.form, self.r)

    def __neg__(self):
        return CourantSection(-self.vf, -self.form, self.r)

    def __rmul__(self, c):
        return CourantSection(c * self.vf, c * self.form, self.r)

    def __bool__(self):
        return bool(self.vf) or bool(self.form)

    def __repr__(self):
        return f"({self.vf}, {self.form})"


def _same_r(s1, s2):
    if s1.r != s2.r:
        raise InvalidInputError("sections of different rank")


def pairing(s1, s2, kind="minus"):
    """1/2 (i_{x1} a2 +- i_{x2} a1)."""
    _same_r(s1, s2)
    a = s2.form.contract(s1.vf)
    b = s1.form.contract(s2.vf)
    if kind == "plus":
        return Fraction(1, 2) * (a + b)
    if kind == "minus":
        return Fraction(1, 2) * (a - b)
    raise InvalidInputError(f"unknown pairing kind {kind!r}")


def _check_sigma(sigma, r):
    if sigma and sigma.degrees() != {r + 2}:
        raise InvalidInputError(f"twisting form must have degree {r + 2}")
    if not sigma.is_closed():
        raise InvalidInputError("twisting form is not closed")


def courant_bracket(s1, s2, sigma):
    """The sigma-twisted higher Courant bracket."""
    _same_r(s1, s2)
    _check_sigma(sigma, s1.r)
    x1, x2 = s1.vf, s2.vf
    form = (s2.form.lie(x1) - s1.form.lie(x2) - pairing(s1, s2, "minus").d()
            + sigma.contract(x2).contract(x1))
    return CourantSection(x1.bracket(x2), form, s1.r)


def courant_bracket_expanded(s1, s2, sigma):
    """Same bracket via d<,>_- + i_{x1} d a2 - i_{x2} d a1 + i_{x1} i_{x2} sigma."""
    _same_r(s1, s2)
    _check_sigma(sigma, s1.r)
    x1, x2 = s1.vf, s2.vf
    form = (pairing(s1, s2, "minus").d() + s2.form.d().contract(x1)
            - s1.form.d().contract(x2) + sigma.contract(x2).contract(x1))
    return CourantSection(x1.bracket(x2), form, s1.r)


def hamiltonian_check(X, alpha, sigma):
    """Whether i_X sigma + d alpha = 0."""
    return not (sigma.contract(X) + alpha.d())



def lie_derivative_leibniz(X, a):
    """L_X a by the Leibniz rule on f dx_I, independent of the Cartan formula.

    L_X (f dx_i1^...^dx_ik) = X(f) dx_I + f sum_j dx_i1^..^d(X^ij)^..^dx_ik.
    """
    n = a.n
    out = PolyForm(n)
    zero_e = (0,) * n
    for (I, e), c in a.terms.items():
        f = Poly(n, {e: c})
        dxs = [PolyForm(n, {((i,), zero_e): 1}) for i in I]
        head = PolyForm(n, {(I, zero_e): 1})
        out = out + head * X.apply(f)
        for j, i in enumerate(I):
            dX = PolyForm.from_scalar(X.component(i + 1)).d()
            piece = PolyForm.from_scalar(f)
            for t, w in enumerate(dxs):
                piece = piece.wedge(dX if t == j else w)
            out = out + piece
    return out
