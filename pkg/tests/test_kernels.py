import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from linfcourant import _kernels as pure
from linfcourant import kernels
from linfcourant.sampling import Sampler

compiled = pytest.importorskip("linfcourant._ckernels")

seeds = st.integers(0, 2 ** 32)
dims = st.integers(1, 4)


def sample(seed, n):
    s = Sampler(seed, n, max_poly_degree=3, max_terms=4)
    k1, k2 = s.rng.randint(0, n), s.rng.randint(0, n)
    return s, s.poly(), s.poly(), s.form(k1), s.form(k2), s.field()


@given(seeds, dims)
def test_poly_kernels_agree(seed, n):
    _, f, g, *_ = sample(seed, n)
    assert compiled.poly_add(f.terms, g.terms) == pure.poly_add(f.terms, g.terms)
    assert compiled.poly_add(f.terms, g.terms, Fraction(-2, 3)) == pure.poly_add(f.terms, g.terms, Fraction(-2, 3))
    assert compiled.poly_scale(f.terms, 5) == pure.poly_scale(f.terms, 5)
    assert compiled.poly_mul(f.terms, g.terms) == pure.poly_mul(f.terms, g.terms)
    for i in range(n):
        assert compiled.poly_diff(f.terms, i) == pure.poly_diff(f.terms, i)


@given(seeds, dims)
def test_form_kernels_agree(seed, n):
    _, f, _, a, b, X = sample(seed, n)
    assert compiled.derivation(X.comps, f.terms) == pure.derivation(X.comps, f.terms)
    assert compiled.form_wedge(a.terms, b.terms) == pure.form_wedge(a.terms, b.terms)
    assert compiled.form_mul_scalar(a.terms, f.terms) == pure.form_mul_scalar(a.terms, f.terms)
    assert compiled.form_d(a.terms, n) == pure.form_d(a.terms, n)
    assert compiled.form_contract(X.comps, a.terms) == pure.form_contract(X.comps, a.terms)


@given(st.lists(st.integers(0, 5), unique=True, max_size=4),
       st.lists(st.integers(0, 5), unique=True, max_size=4))
def test_merge_sign_agree(I, J):
    I, J = tuple(sorted(I)), tuple(sorted(J))
    assert compiled.merge_sign(I, J) == pure.merge_sign(I, J)


def test_merge_sign_values():
    assert pure.merge_sign((0,), (1,)) == ((0, 1), 1)
    assert pure.merge_sign((1,), (0,)) == ((0, 1), -1)
    assert pure.merge_sign((0,), (0,))[1] == 0


def test_zero_coefficients_dropped():
    f = {(1, 0): 1}
    assert pure.poly_add(f, f, -1) == {} == compiled.poly_add(f, f, -1)


def test_fallback_env_var():
    code = "import linfcourant; print(linfcourant.BACKEND)"
    env = dict(os.environ, LINFCOURANT_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND == "cython"
