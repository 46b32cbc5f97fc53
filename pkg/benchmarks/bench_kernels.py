"""Compare the compiled and pure-Python kernels on kernel-level and end-to-end workloads.

Run: python benchmarks/bench_kernels.py
"""
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

from vflab import _pykernels

try:
    from vflab import _ckernels
except ImportError:
    _ckernels = None


def _poly(rng, nvars, nterms, deg):
    out = {}
    for _ in range(nterms):
        e = tuple(rng.randint(0, deg) for _ in range(nvars))
        out[e] = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 4))
    return out


def _rows(rng, n, width):
    rows = []
    for _ in range(n):
        keys = rng.sample(range(width), width // 3)
        rows.append({(k,): rng.randint(-50, 50) or 1 for k in keys})
    return rows


def kernel_workloads(mod, rng_seed=7):
    rng = random.Random(rng_seed)
    a, b = _poly(rng, 3, 40, 6), _poly(rng, 3, 40, 6)
    rows = _rows(rng, 60, 90)

    def mul():
        mod.poly_mul(a, b)

    def elim():
        for i in range(1, len(rows)):
            r, v = rows[0], rows[i]
            key = next(k for k in r if k in v) if any(k in v for k in r) else None
            if key is not None:
                mod.eliminate(v, r, key)

    return {"poly_mul 40x40 terms": mul, "eliminate 59 rows": elim}


def end_to_end(backend):
    code = (
        "import time; from vflab import *;"
        "f = parse_polynomial('x^2+y^3');"
        "t = time.perf_counter(); find_minimal_b_bounded(f, parse_polynomial('1', f.varset), 3, 3);"
        "check_axioms(VModel.snc((2, 3)), [Fraction(k, 6) for k in range(7)], Truncation(3, 12));"
        "print(time.perf_counter() - t)"
    ).replace("from vflab import *;", "from vflab import *; from fractions import Fraction;")
    env = dict(os.environ, VFLAB_KERNELS=backend)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    print(f"{'workload':28s}" + "".join(f"{name:>12s}" for name, _ in backends))
    names = list(kernel_workloads(_pykernels))
    for w in names:
        cells = []
        for _, mod in backends:
            fn = kernel_workloads(mod)[w]
            n, total = timeit.Timer(fn).autorange()
            cells.append(f"{1e3 * total / n:10.3f}ms")
        print(f"{w:28s}" + "".join(f"{c:>12s}" for c in cells))
    cells = [f"{end_to_end(name):10.2f}s " for name, _ in backends]
    print(f"{'cusp oracle + SNC vcheck':28s}" + "".join(f"{c:>12s}" for c in cells))


if __name__ == "__main__":
    main()
