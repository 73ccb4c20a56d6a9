#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python fallback.

Three tiers:
  micro  - raw kernel calls (vector product with reduction, Cauchy coefficient)
  series - generating-series construction for a twisted family
  sweep  - one mid-size bivariate identity instance

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

from twisted_bernoulli import _kernel as K
from twisted_bernoulli import bernoulli as bn
from twisted_bernoulli import identities as idn
from twisted_bernoulli.characters import from_table
from twisted_bernoulli.exact import RootOfUnity, cyclo_field


def _rand_vec(rng, phi, span=10**6):
    return tuple(rng.randint(-span, span) for _ in range(phi)), rng.randint(1, span)


def bench_micro(mod, repeat):
    rng = random.Random(1)
    field = cyclo_field(18)
    red = field.reduction_rows
    phi = field.degree
    pairs = [(_rand_vec(rng, phi), _rand_vec(rng, phi)) for _ in range(256)]
    t0 = time.perf_counter()
    for _ in range(repeat):
        for (a, ad), (b, bd) in pairs:
            mod.vmulmod(a, ad, b, bd, red)
    mul_time = time.perf_counter() - t0

    n = 12
    anums = [_rand_vec(rng, phi)[0] for _ in range(n + 1)]
    adens = [rng.randint(1, 720) for _ in range(n + 1)]
    bnums = [_rand_vec(rng, phi)[0] for _ in range(n + 1)]
    bdens = [rng.randint(1, 720) for _ in range(n + 1)]
    t0 = time.perf_counter()
    for _ in range(repeat * 32):
        for j in range(n + 1):
            mod.cauchy_coeff(anums, adens, bnums, bdens, j, red)
    cauchy_time = time.perf_counter() - t0
    return {"vmulmod(256x)": mul_time, "cauchy(13x)": cauchy_time}


def _clear_caches():
    bn._kernel_series.cache_clear()
    bn.generating_series.cache_clear()
    bn.numbers.cache_clear()
    bn.polynomial.cache_clear()
    bn.power_sum.cache_clear()
    idn._spec_for.cache_clear()
    idn._affine_poly.cache_clear()
    idn._bern_at.cache_clear()


def bench_series(repeat):
    chi = from_table(4, [0, 1, 0, -1])
    xi = RootOfUnity(9, 1)
    t0 = time.perf_counter()
    for _ in range(repeat):
        _clear_caches()
        spec = bn.twist_spec(chi, xi)
        bn.numbers(spec, 3, 12)
    return {"numbers(k=3,n=12)": time.perf_counter() - t0}


def bench_identity(repeat):
    chi = from_table(3, [0, 1, -1])
    xi = RootOfUnity(9, 1)
    t0 = time.perf_counter()
    for _ in range(repeat):
        _clear_caches()
        rep = idn.check_theorem1(6, 3, chi, xi, 2, 3)
        assert rep.holds
    return {"theorem1(n=6,m=3)": time.perf_counter() - t0}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = K.available_backends()
    print(f"backends available: {', '.join(backends)}")
    if "compiled" not in backends:
        print("note: compiled kernel not built; timing the pure backend only")

    results = {}
    for name in backends:
        K.set_backend(name)
        rows = {}
        from twisted_bernoulli._kernel import _pykernel

        mod = _pykernel if name == "pure" else __import__(
            "twisted_bernoulli._kernel._ckernel", fromlist=["_ckernel"]
        )
        rows.update(bench_micro(mod, args.repeat))
        rows.update(bench_series(args.repeat))
        rows.update(bench_identity(args.repeat))
        results[name] = rows
    K.set_backend(K._default_backend())

    labels = list(next(iter(results.values())))
    width = max(len(l) for l in labels)
    header = f"{'benchmark':<{width}}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label in labels:
        row = f"{label:<{width}}"
        for b in backends:
            row += f"{results[b][label]:>11.3f}s"
        if len(backends) == 2:
            ratio = results["pure"][label] / results["compiled"][label]
            row += f"{ratio:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
