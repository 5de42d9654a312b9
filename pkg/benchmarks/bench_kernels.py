"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported side by side, so one run compares them on
identical inputs and checks that they agree.
"""

from __future__ import annotations

import argparse
import random
import timeit

from modeq import _pykernels

try:
    from modeq import _ckernels
except ImportError:
    _ckernels = None


def _dense_poly(rng, nvars, deg, nterms):
    out = {}
    for _ in range(nterms):
        e = [0] * nvars
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(nvars)] += 1
        out[tuple(e)] = rng.randint(-10**6, 10**6)
    return {k: v for k, v in out.items() if v}


def cases(seed=0):
    rng = random.Random(seed)
    a = _dense_poly(rng, 3, 12, 120)
    b = _dense_poly(rng, 3, 12, 120)
    prod = _pykernels.poly_mul(a, b)
    s = [1] + [rng.randint(-10**9, 10**9) for _ in range(399)]
    t = [rng.randint(-10**9, 10**9) for _ in range(400)]
    return {
        "poly_mul 3 vars, 120x120 terms": lambda k: k.poly_mul(a, b),
        "poly_divexact exact quotient": lambda k: k.poly_divexact(prod, b),
        "series_mul 400 terms": lambda k: k.series_mul(s, t, 400),
        "series_inverse 400 terms": lambda k: k.series_inverse(s, 400),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; timing the fallback only")
    print(f"{'kernel':<34} {'python (s)':>11} {'cython (s)':>11} {'speedup':>8}")
    for name, fn in cases().items():
        tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        if _ckernels is None:
            print(f"{name:<34} {tp:>11.4f} {'-':>11} {'-':>8}")
            continue
        if fn(_pykernels) != fn(_ckernels):
            raise SystemExit(f"backends disagree on {name}")
        tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        print(f"{name:<34} {tp:>11.4f} {tc:>11.4f} {tp / tc:>7.2f}x")


if __name__ == "__main__":
    main()
