"""Sparse polynomial and differential-form kernels (pure Python).

Scalars are dicts ``{exponent_tuple: coeff}``; forms are flat dicts
``{(index_tuple, exponent_tuple): coeff}`` with sorted 0-based indices.
Coefficients are ``int`` or ``Fraction``; zero coefficients are never stored.
The compiled module ``_ckernels`` implements the same functions.
"""

from fractions import Fraction


def norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _acc(out, key, c):
    w = out.get(key, 0) + c
    if w:
        out[key] = w
    else:
        del out[key]


def poly_add(a, b, c=1):
    """a + c*b."""
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) + c * v
        if w:
            out[k] = norm(w)
        else:
            out.pop(k, None)
    return out


def poly_scale(a, c):
    if not c:
        return {}
    return {k: norm(c * v) for k, v in a.items()}


def poly_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple([x + y for x, y in zip(ea, eb)])
            w = out.get(e, 0) + ca * cb
            if w:
                out[e] = w
            else:
                del out[e]
    return {k: norm(v) for k, v in out.items()}


def poly_diff(a, i):
    out = {}
    for e, c in a.items():
        k = e[i]
        if k:
            out[e[:i] + (k - 1,) + e[i + 1:]] = norm(c * k)
    return out


def derivation(X, f):
    """Apply the vector field with component dicts ``X`` to the scalar ``f``."""
    out = {}
    for j, xj in enumerate(X):
        if not xj:
            continue
        for e, c in f.items():
            k = e[j]
            if not k:
                continue
            e1 = e[:j] + (k - 1,) + e[j + 1:]
            ck = c * k
            for ex, cx in xj.items():
                _acc(out, tuple([u + v for u, v in zip(e1, ex)]), ck * cx)
    return {k: norm(v) for k, v in out.items()}


def merge_sign(I, J):
    """Sorted union of disjoint index tuples and the sign of the shuffle, or (None, 0)."""
    if not I:
        return J, 1
    if not J:
        return I, 1
    inv = 0
    out = []
    i = j = 0
    ni, nj = len(I), len(J)
    while i < ni and j < nj:
        a, b = I[i], J[j]
        if a < b:
            out.append(a)
            i += 1
        elif b < a:
            out.append(b)
            inv += ni - i
            j += 1
        else:
            return None, 0
    out.extend(I[i:])
    out.extend(J[j:])
    return tuple(out), (-1 if inv & 1 else 1)


def form_wedge(a, b):
    out = {}
    for (I, ea), ca in a.items():
        for (J, eb), cb in b.items():
            K, s = merge_sign(I, J)
            if K is None:
                continue
            e = tuple([x + y for x, y in zip(ea, eb)])
            _acc(out, (K, e), ca * cb if s > 0 else -(ca * cb))
    return {k: norm(v) for k, v in out.items()}


def form_mul_scalar(a, f):
    """Multiply a form by a scalar polynomial."""
    out = {}
    for (I, ea), ca in a.items():
        for eb, cb in f.items():
            _acc(out, (I, tuple([x + y for x, y in zip(ea, eb)])), ca * cb)
    return {k: norm(v) for k, v in out.items()}


def form_d(a, n):
    out = {}
    for (I, e), c in a.items():
        pos = 0
        for i in range(n):
            while pos < len(I) and I[pos] < i:
                pos += 1
            if pos < len(I) and I[pos] == i:
                continue
            k = e[i]
            if not k:
                continue
            K = I[:pos] + (i,) + I[pos:]
            e1 = e[:i] + (k - 1,) + e[i + 1:]
            _acc(out, (K, e1), c * k if not pos & 1 else -(c * k))
    return {k: norm(v) for k, v in out.items()}


def form_contract(X, a):
    """Interior product by the field with component dicts ``X``."""
    out = {}
    for (I, e), c in a.items():
        for pos, i in enumerate(I):
            xi = X[i]
            if not xi:
                continue
            K = I[:pos] + I[pos + 1:]
            cc = -c if pos & 1 else c
            for ex, cx in xi.items():
                _acc(out, (K, tuple([u + v for u, v in zip(e, ex)])), cc * cx)
    return {k: norm(v) for k, v in out.items()}
