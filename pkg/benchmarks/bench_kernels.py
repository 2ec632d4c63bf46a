"""Compare the compiled and pure-Python kernels on sampled forms and fields.

    python benchmarks/bench_kernels.py [--repeat 5] [--n 4]
"""

import argparse
import timeit

from linfcourant import _kernels as pure
from linfcourant.sampling import Sampler

try:
    from linfcourant import _ckernels as compiled
except ImportError:
    compiled = None


def workload(n, seed=0, size=40):
    s = Sampler(seed, n, max_poly_degree=3, max_terms=6)
    forms = [s.form(s.rng.randint(0, n)) for _ in range(size)]
    fields = [s.field() for _ in range(size)]
    polys = [s.poly() for _ in range(size)]
    return forms, fields, polys


def cases(k, forms, fields, polys, n):
    pairs = list(zip(forms, forms[1:]))
    return {
        "poly_mul": lambda: [k.poly_mul(a.terms, b.terms) for a, b in zip(polys, polys[1:])],
        "derivation": lambda: [k.derivation(X.comps, f.terms) for X, f in zip(fields, polys)],
        "form_wedge": lambda: [k.form_wedge(a.terms, b.terms) for a, b in pairs],
        "form_d": lambda: [k.form_d(a.terms, n) for a in forms],
        "form_contract": lambda: [k.form_contract(X.comps, a.terms) for X, a in zip(fields, forms)],
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=20)
    ap.add_argument("--n", type=int, default=4)
    args = ap.parse_args(argv)
    forms, fields, polys = workload(args.n)
    py = cases(pure, forms, fields, polys, args.n)
    cy = cases(compiled, forms, fields, polys, args.n) if compiled else {}
    print(f"{'kernel':<15}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, fn in py.items():
        t_py = min(timeit.repeat(fn, number=args.number, repeat=args.repeat)) / args.number * 1e3
        if name in cy:
            assert cy[name]() == fn(), f"backends disagree on {name}"
            t_cy = min(timeit.repeat(cy[name], number=args.number, repeat=args.repeat)) / args.number * 1e3
            print(f"{name:<15}{t_py:>14.3f}{t_cy:>14.3f}{t_py / t_cy:>9.2f}x")
        else:
            print(f"{name:<15}{t_py:>14.3f}{'n/a':>14}{'':>10}")


if __name__ == "__main__":
    main()
