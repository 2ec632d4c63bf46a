# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the kernels in ``_kernels``; same signatures."""

from fractions import Fraction


cdef inline object norm(object c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


cdef inline tuple add_exp(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef list out = [0] * n
    for i in range(n):
        out[i] = <long>a[i] + <long>b[i]
    return tuple(out)


cdef inline void acc(dict out, object key, object c):
    cdef object w = out.get(key, 0) + c
    if w:
        out[key] = w
    else:
        del out[key]


cdef dict normed(dict out):
    cdef dict res = {}
    for k, v in out.items():
        res[k] = norm(v)
    return res


def poly_add(dict a, dict b, c=1):
    cdef dict out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) + c * v
        if w:
            out[k] = norm(w)
        else:
            out.pop(k, None)
    return out


def poly_scale(dict a, c):
    if not c:
        return {}
    cdef dict out = {}
    for k, v in a.items():
        out[k] = norm(c * v)
    return out


def poly_mul(dict a, dict b):
    cdef dict out = {}
    cdef tuple ea, eb
    for ea, ca in a.items():
        for eb, cb in b.items():
            acc(out, add_exp(ea, eb), ca * cb)
    return normed(out)


def poly_diff(dict a, Py_ssize_t i):
    cdef dict out = {}
    cdef tuple e
    cdef long k
    for e, c in a.items():
        k = e[i]
        if k:
            out[e[:i] + (k - 1,) + e[i + 1:]] = norm(c * k)
    return out


def derivation(X, dict f):
    cdef dict out = {}
    cdef Py_ssize_t j
    cdef long k
    cdef tuple e, e1, ex
    cdef dict xj
    for j in range(len(X)):
        xj = X[j]
        if not xj:
            continue
        for e, c in f.items():
            k = e[j]
            if not k:
                continue
            e1 = e[:j] + (k - 1,) + e[j + 1:]
            ck = c * k
            for ex, cx in xj.items():
                acc(out, add_exp(e1, ex), ck * cx)
    return normed(out)


def merge_sign(tuple I, tuple J):
    if not I:
        return J, 1
    if not J:
        return I, 1
    cdef Py_ssize_t i = 0, j = 0, ni = len(I), nj = len(J), inv = 0
    cdef long a, b
    cdef list out = []
    while i < ni and j < nj:
        a = I[i]
        b = J[j]
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


def form_wedge(dict a, dict b):
    cdef dict out = {}
    cdef tuple ka, kb, I, J, ea, eb
    cdef int s
    for ka, ca in a.items():
        I = ka[0]
        ea = ka[1]
        for kb, cb in b.items():
            J = kb[0]
            eb = kb[1]
            K, s = merge_sign(I, J)
            if K is None:
                continue
            acc(out, (K, add_exp(ea, eb)), ca * cb if s > 0 else -(ca * cb))
    return normed(out)


def form_mul_scalar(dict a, dict f):
    cdef dict out = {}
    cdef tuple ka, eb
    for ka, ca in a.items():
        for eb, cb in f.items():
            acc(out, (ka[0], add_exp(ka[1], eb)), ca * cb)
    return normed(out)


def form_d(dict a, Py_ssize_t n):
    cdef dict out = {}
    cdef tuple key, I, e, K, e1
    cdef Py_ssize_t pos, i, m
    cdef long k
    for key, c in a.items():
        I = key[0]
        e = key[1]
        m = len(I)
        pos = 0
        for i in range(n):
            while pos < m and <long>I[pos] < i:
                pos += 1
            if pos < m and <long>I[pos] == i:
                continue
            k = e[i]
            if not k:
                continue
            K = I[:pos] + (i,) + I[pos:]
            e1 = e[:i] + (k - 1,) + e[i + 1:]
            acc(out, (K, e1), c * k if not pos & 1 else -(c * k))
    return normed(out)


def form_contract(X, dict a):
    cdef dict out = {}
    cdef tuple key, I, e, K, ex
    cdef Py_ssize_t pos
    cdef dict xi
    for key, c in a.items():
        I = key[0]
        e = key[1]
        for pos in range(len(I)):
            xi = X[I[pos]]
            if not xi:
                continue
            K = I[:pos] + I[pos + 1:]
            cc = -c if pos & 1 else c
            for ex, cx in xi.items():
                acc(out, (K, add_exp(e, ex)), cc * cx)
    return normed(out)
