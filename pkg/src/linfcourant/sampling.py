"""Seeded samplers for polynomial scalars, forms, fields and Hamiltonian pairs."""

import math
import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import InvalidInputError
from .forms import Poly, PolyForm, PolyVectorField, basis_form, coordinate, partial, primitive, vol


def exponents_upto(n, degree):
    """All exponent tuples of total degree <= ``degree`` in graded-lex order."""
    out = []

    def rec(prefix, left):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for k in range(left + 1):
            rec(prefix + [k], left - k)

    rec([], degree)
    out.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return out


class Sampler:
    """Deterministic random elements; all randomness flows from ``seed``."""

    def __init__(self, seed, n, max_poly_degree=2, max_terms=3):
        self.rng = random.Random(seed)
        self.n = n
        self.max_poly_degree = max_poly_degree
        self.max_terms = max_terms
        self._exps = exponents_upto(n, max_poly_degree)

    def coeff(self):
        num = self.rng.choice([i for i in range(-9, 10) if i])
        den = self.rng.choice((1, 1, 1, 2, 3))
        return Fraction(num, den) if den > 1 else num

    def exponent(self):
        return self.rng.choice(self._exps)

    def poly(self, terms=None):
        terms = terms or self.rng.randint(1, self.max_terms)
        out = Poly(self.n)
        for _ in range(terms):
            out = out + Poly(self.n, {self.exponent(): self.coeff()})
        return out

    def form(self, k, terms=None):
        """Random homogeneous k-form (possibly zero after cancellation only)."""
        if not 0 <= k <= self.n:
            return PolyForm(self.n)
        subsets = list(combinations(range(self.n), k))
        terms = terms or self.rng.randint(1, self.max_terms)
        out = {}
        for _ in range(terms):
            key = (self.rng.choice(subsets), self.exponent())
            c = out.get(key, 0) + self.coeff()
            if c:
                out[key] = c
            else:
                out.pop(key, None)
        return PolyForm(self.n, out)

    def field(self, terms=None):
        comps = [{} for _ in range(self.n)]
        terms = terms or self.rng.randint(1, self.max_terms)
        for _ in range(terms):
            i = self.rng.randrange(self.n)
            e = self.exponent()
            c = comps[i].get(e, 0) + self.coeff()
            if c:
                comps[i][e] = c
            else:
                comps[i].pop(e, None)
        return PolyVectorField(self.n, comps)

    def closed_form(self, k):
        if k == 0:
            return PolyForm.from_scalar(Poly.const(self.n, self.coeff()))
        if k > self.n:
            return PolyForm(self.n)
        out = self.form(k - 1).d()
        if self.rng.random() < 0.5 or not out:
            I = sorted(self.rng.sample(range(1, self.n + 1), k))
            out = out + self.coeff() * basis_form(self.n, *I)
        return out

    def nonclosed_form(self, k):
        if k >= self.n:
            raise InvalidInputError("every top-degree form is closed")
        while True:
            f = self.form(k)
            if f.d():
                return f

    def choice(self, seq):
        return self.rng.choice(seq)

    def hamiltonian_pair(self, sigma, max_degree=None):
        """Random (X, alpha) with i_X sigma + d alpha = 0."""
        D = self.max_poly_degree if max_degree is None else max_degree
        basis = hamiltonian_basis(sigma, D)
        X = PolyVectorField(self.n)
        if basis:
            for _ in range(self.rng.randint(1, 3)):
                X = X + self.coeff() * self.rng.choice(basis)
        r = sigma.form_degree - 1 if sigma else 1
        alpha = -primitive(sigma.contract(X))
        if r >= 2 and self.rng.random() < 0.5:
            alpha = alpha + self.form(r - 2).d()
        elif r == 1 and self.rng.random() < 0.5:
            alpha = alpha + PolyForm.from_scalar(Poly.const(self.n, self.coeff()))
        return X, alpha


def adversarial_forms(n, k):
    """Constant basis forms, coordinate-weighted monomials and the volume form."""
    out = []
    for I in combinations(range(1, n + 1), k):
        out.append(basis_form(n, *I))
        for i in range(1, n + 1):
            out.append(PolyForm.from_scalar(coordinate(n, i)).wedge(basis_form(n, *I)))
    if k == n:
        out.append(vol(n))
    return out


def adversarial_fields(n):
    out = []
    for i in range(1, n + 1):
        out.append(partial(n, i))
        for j in range(1, n + 1):
            out.append(coordinate(n, j) * partial(n, i))
    return out


@lru_cache(maxsize=64)
def hamiltonian_basis(sigma, max_degree):
    """Basis of fields of degree <= max_degree with d(i_X sigma) = 0.

    Solves the linear system exactly via a rational nullspace.
    """
    import sympy

    n = sigma.n
    exps = exponents_upto(n, max_degree)
    unknowns = [(i, e) for i in range(n) for e in exps]
    images = []
    rows = {}
    for i, e in unknowns:
        comps = [{} for _ in range(n)]
        comps[i] = {e: 1}
        X = PolyVectorField(n, comps)
        img = sigma.contract(X).d()
        images.append(img)
        for key in img.terms:
            rows.setdefault(key, len(rows))
    if not rows:
        vecs = [[1 if j == t else 0 for j in range(len(unknowns))] for t in range(len(unknowns))]
    else:
        M = sympy.zeros(len(rows), len(unknowns))
        for col, img in enumerate(images):
            for key, c in img.terms.items():
                M[rows[key], col] = sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else c
        vecs = [list(v) for v in M.nullspace()]
    basis = []
    for v in vecs:
        coeffs = [Fraction(int(sympy.numer(c)), int(sympy.denom(c))) for c in v]
        scale = math.lcm(*(c.denominator for c in coeffs))
        comps = [{} for _ in range(n)]
        for (i, e), c in zip(unknowns, coeffs):
            if c:
                comps[i][e] = int(c * scale)
        basis.append(PolyVectorField(n, comps))
    return tuple(basis)
