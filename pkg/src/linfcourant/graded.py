"""Koszul signs, unshuffles and the Nijenhuis-Richardson calculus.

Permutations are 0-based tuples listing, for each output slot, the index of
the input that lands there: ``perm = (1, 0)`` sends ``(a, b)`` to ``(b, a)``.
Graded skew-symmetric multilinear maps are represented extensionally by
:class:`MultiMap`; every identity in the package is checked pointwise.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Any, Callable, Optional, Sequence

from .errors import InvalidInputError


def koszul_sign(perm: Sequence[int], degrees: Sequence[int], skew: bool = True) -> int:
    """Signature of ``perm`` times the Koszul sign for the given degrees.

    With ``skew=False`` only the Koszul factor is returned.
    """
    n = len(degrees)
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise InvalidInputError(f"{perm!r} is not a permutation of {n} slots")
    sign = 1
    for a in range(n):
        pa = perm[a]
        for b in range(a + 1, n):
            pb = perm[b]
            if pa > pb:
                if skew:
                    sign = -sign
                if degrees[pa] & 1 and degrees[pb] & 1:
                    sign = -sign
    return sign


@dataclass(frozen=True)
class SignedPermutation:
    permutation: tuple
    sign: int


@lru_cache(maxsize=None)
def unshuffles(j: int, k: int) -> tuple:
    """All permutations increasing on the first ``j`` and last ``k`` slots."""
    if j < 0 or k < 0 or j + k < 1:
        raise InvalidInputError("unshuffles needs j, k >= 0 with j + k >= 1")
    n = j + k
    out = []
    for head in combinations(range(n), j):
        chosen = set(head)
        out.append(head + tuple(i for i in range(n) if i not in chosen))
    assert len(out) == comb(n, j)
    return tuple(out)


@lru_cache(maxsize=None)
def ordered_unshuffles(j: int, k: int) -> tuple:
    """Unshuffles for the ordered operator; for ``j == k`` keep those with
    the first block starting before the second (the first slot stays put)."""
    perms = unshuffles(j, k)
    if j != k or j == 0:
        return perms
    return tuple(p for p in perms if p[0] < p[j])


def _unshuffle_sign(perm, j, degrees):
    # inversions only occur between the two blocks
    sign = 1
    for a in perm[:j]:
        da = degrees[a] & 1
        for b in perm[j:]:
            if a > b:
                sign = -sign if not (da and degrees[b] & 1) else sign
    return sign


def unshuffle_apply(j: int, k: int, args: Sequence, degrees, ordered: bool = False):
    """Signed terms of the unshuffle operator applied to ``args``.

    ``degrees`` is either a list of integers or a callable giving the degree
    of one argument.
    """
    if len(args) != j + k:
        raise InvalidInputError("argument count does not match j + k")
    if callable(degrees):
        degrees = [degrees(a) for a in args]
    perms = ordered_unshuffles(j, k) if ordered else unshuffles(j, k)
    return [
        (SignedPermutation(p, _unshuffle_sign(p, j, degrees)), tuple(args[i] for i in p))
        for p in perms
    ]


def scale(c, x):
    if c == 1:
        return x
    if c == -1:
        return -x
    return c * x


class GradedSpace:
    """A graded space of element objects.

    ``degree_of`` returns the unshifted degree of a homogeneous element or
    ``None`` for an inhomogeneous one; ``split`` breaks an element into
    homogeneous parts.  ``degree_range`` optionally bounds the nonzero
    degrees (before the shift) so maps can skip empty targets.
    """

    def __init__(self, name: str, degree_of: Callable, zero: Callable,
                 split: Optional[Callable] = None, shift: int = 0,
                 degree_range: Optional[tuple] = None):
        self.name = name
        self._degree_of = degree_of
        self.zero = zero
        self._split = split
        self.shift = shift
        self.degree_range = degree_range

    @property
    def tag(self):
        return (self.name, self.shift)

    def degree(self, x) -> int:
        d = self._degree_of(x)
        if d is None:
            raise InvalidInputError(f"element of {self.name} is not homogeneous")
        return d - self.shift

    def split(self, x) -> list:
        if self._split is None:
            return [x]
        return self._split(x)

    def has_degree(self, d: int) -> bool:
        if self.degree_range is None:
            return True
        lo, hi = self.degree_range
        return lo <= d + self.shift <= hi

    def shifted(self, k: int) -> "GradedSpace":
        """V[k], whose degree-n part is V^{n+k}."""
        return GradedSpace(self.name, self._degree_of, self.zero, self._split,
                           self.shift + k, self.degree_range)

    def with_range(self, lo, hi) -> "GradedSpace":
        return GradedSpace(self.name + f"<{lo},{hi}>", self._degree_of, self.zero,
                           self._split, self.shift, (lo, hi))

    def __repr__(self):
        s = f"[{-self.shift}]" if self.shift else ""
        return f"GradedSpace({self.name}{s})"


def _homogeneous_expansions(space, args):
    # multilinear expansion of possibly inhomogeneous arguments
    expansions = [()]
    for a in args:
        parts = space.split(a)
        expansions = [e + (p,) for e in expansions for p in parts if p]
    return expansions


class MultiMap:
    """Graded skew-symmetric multilinear map ``V^{x a} -> W`` of degree ``d``.

    Arguments equal to zero short-circuit to zero, inhomogeneous arguments
    are expanded multilinearly, and outputs of a degree the codomain does not
    carry are skipped.  With ``sort_args=True`` the raw evaluator is only
    ever called on canonically ordered arguments and skew-symmetry holds by
    construction.
    """

    def __init__(self, arity: int, degree: int, evaluator: Callable,
                 domain: GradedSpace, codomain: Optional[GradedSpace] = None,
                 name: str = "", sort_args: bool = False, sort_key: Optional[Callable] = None,
                 cache: bool = False):
        if arity < 1:
            raise InvalidInputError("arity must be positive")
        self.arity = arity
        self.degree = degree
        self.evaluator = evaluator
        self.domain = domain
        self.codomain = codomain if codomain is not None else domain
        self.name = name
        self.sort_args = sort_args
        self.sort_key = sort_key or (lambda x: x.key())
        self._cache = {} if cache else None

    @property
    def nr_degree(self):
        return self.arity + self.degree - 1

    def __repr__(self):
        return f"MultiMap({self.name or '?'}, arity={self.arity}, degree={self.degree})"

    def __call__(self, *args):
        if len(args) != self.arity:
            raise InvalidInputError(f"{self!r} takes {self.arity} arguments, got {len(args)}")
        zero = self.codomain.zero
        for a in args:
            if not a:
                return zero()
        dom = self.domain
        degs = []
        for a in args:
            d = dom._degree_of(a)
            if d is None:
                total = zero()
                for hom in _homogeneous_expansions(dom, args):
                    total = total + self(*hom)
                return total
            degs.append(d - dom.shift)
        if not self.codomain.has_degree(sum(degs) + self.degree):
            return zero()
        sign = 1
        if self.sort_args and self.arity > 1:
            keys = [self.sort_key(a) for a in args]
            order = sorted(range(self.arity), key=keys.__getitem__)
            for i in range(self.arity - 1):
                if keys[order[i]] == keys[order[i + 1]] and degs[order[i]] % 2 == 0:
                    return zero()
            sign = koszul_sign(order, degs)
            args = tuple(args[i] for i in order)
        if self._cache is not None:
            hit = self._cache.get(args)
            if hit is None:
                hit = self.evaluator(*args)
                self._cache[args] = hit
            return scale(sign, hit)
        return scale(sign, self.evaluator(*args))

    def _check_compatible(self, other):
        if not isinstance(other, MultiMap):
            return NotImplemented
        if (self.arity, self.degree) != (other.arity, other.degree):
            raise InvalidInputError("can only add maps of equal arity and degree")
        if self.domain.tag != other.domain.tag or self.codomain.tag != other.codomain.tag:
            raise InvalidInputError("can only add maps between the same spaces")

    def __add__(self, other):
        self._check_compatible(other)
        f, g = self, other
        return MultiMap(self.arity, self.degree, lambda *xs: f(*xs) + g(*xs),
                        self.domain, self.codomain, name=f"({f.name}+{g.name})")

    def __sub__(self, other):
        self._check_compatible(other)
        f, g = self, other
        return MultiMap(self.arity, self.degree, lambda *xs: f(*xs) - g(*xs),
                        self.domain, self.codomain, name=f"({f.name}-{g.name})")

    def __neg__(self):
        f = self
        return MultiMap(self.arity, self.degree, lambda *xs: -f(*xs),
                        self.domain, self.codomain, name=f"-{f.name}")

    def __rmul__(self, c):
        f = self
        return MultiMap(self.arity, self.degree, lambda *xs: scale(c, f(*xs)),
                        self.domain, self.codomain, name=f"{c}*{f.name}")

    def cached(self):
        """Same map with memoised evaluation on argument tuples."""
        return MultiMap(self.arity, self.degree, self.evaluator, self.domain, self.codomain,
                        self.name, self.sort_args, self.sort_key, cache=True)


def zero_map(arity, degree, domain, codomain=None):
    codomain = codomain if codomain is not None else domain
    return MultiMap(arity, degree, lambda *xs: codomain.zero(), domain, codomain, name="0")


def nr_product(mu: MultiMap, nu: MultiMap) -> MultiMap:
    """mu <| nu, inserting nu into the first slot of mu over unshuffles."""
    if nu.codomain.tag != mu.domain.tag:
        raise InvalidInputError(f"cannot compose {mu!r} after {nu!r}: space mismatch")
    a1, a2, d2 = mu.arity, nu.arity, nu.degree
    pref = -1 if ((a1 - 1) * d2) & 1 else 1
    dom = nu.domain
    perms = unshuffles(a2, a1 - 1)

    def ev(*xs):
        degs = [dom.degree(x) for x in xs]
        total = mu.codomain.zero()
        for p in perms:
            inner = nu(*[xs[i] for i in p[:a2]])
            if not inner:
                continue
            term = mu(inner, *[xs[i] for i in p[a2:]])
            if term:
                total = total + scale(pref * _unshuffle_sign(p, a2, degs), term)
        return total

    return MultiMap(a1 + a2 - 1, mu.degree + d2, ev, dom, mu.codomain,
                    name=f"({mu.name}<|{nu.name})")


def nr_bracket(mu: MultiMap, nu: MultiMap) -> MultiMap:
    """Graded commutator of the NR product on endomorphic maps."""
    for f in (mu, nu):
        if f.domain.tag != f.codomain.tag:
            raise InvalidInputError("NR bracket needs endomorphic maps")
    if mu.domain.tag != nu.domain.tag:
        raise InvalidInputError("NR bracket needs maps on the same space")
    a = nr_product(mu, nu)
    b = nr_product(nu, mu)
    return a + b if (mu.nr_degree * nu.nr_degree) & 1 else a - b


def nr_associator(mu_a: MultiMap, mu_b: MultiMap, mu_c: MultiMap) -> MultiMap:
    """(mu_a <| mu_b) <| mu_c - mu_a <| (mu_b <| mu_c), by definition."""
    left = nr_product(nr_product(mu_a, mu_b), mu_c)
    right = nr_product(mu_a, nr_product(mu_b, mu_c))
    return left - right


def nr_associator_closed(mu_a: MultiMap, mu_b: MultiMap, mu_c: MultiMap) -> MultiMap:
    """Closed form: both right entries inserted side by side into mu_a."""
    a, b, c = mu_a.arity, mu_b.arity, mu_c.arity
    db, dc = mu_b.degree, mu_c.degree
    out_arity = a + b + c - 2
    dom = mu_c.domain
    if a == 1:
        return zero_map(out_arity, mu_a.degree + db + dc, dom, mu_a.codomain)
    s = dc * (b + a) + db * (a - 1) + b * (c + 1)
    pref = -1 if s & 1 else 1
    outer = unshuffles(b + c, a - 2)
    inner = unshuffles(b, c)

    def ev(*xs):
        degs = [dom.degree(x) for x in xs]
        total = mu_a.codomain.zero()
        for p in outer:
            s1 = _unshuffle_sign(p, b + c, degs)
            ys = [xs[i] for i in p[:b + c]]
            ydeg = [degs[i] for i in p[:b + c]]
            rest = [xs[i] for i in p[b + c:]]
            for q in inner:
                s2 = _unshuffle_sign(q, b, ydeg)
                first = [ys[i] for i in q[:b]]
                # mu_c passes the inputs of mu_b
                s3 = -1 if (dc * sum(ydeg[i] for i in q[:b])) & 1 else 1
                u = mu_b(*first)
                if not u:
                    continue
                w = mu_c(*[ys[i] for i in q[b:]])
                if not w:
                    continue
                term = mu_a(u, w, *rest)
                if term:
                    total = total + scale(pref * s1 * s2 * s3, term)
        return total

    return MultiMap(out_arity, mu_a.degree + db + dc, ev, dom, mu_a.codomain,
                    name=f"assoc({mu_a.name},{mu_b.name},{mu_c.name})")


def tensor_apply(f: MultiMap, g: MultiMap, args: Sequence, degrees: Sequence[int]):
    """(f (x) g)(args) as the pair of outputs with its Koszul sign.

    Returns ``(sign, f_out, g_out)``; ``g`` passes the inputs of ``f``.
    """
    a = f.arity
    s = -1 if (g.degree * sum(degrees[:a])) & 1 else 1
    return s, f(*args[:a]), g(*args[a:])
