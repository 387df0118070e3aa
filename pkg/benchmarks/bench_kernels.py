"""Compare the compiled and pure-Python polynomial kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat R]

Runs the raw kernels on random rational polynomials, then an end-to-end
workload (kinematic(chi) at n = 4 plus the curved certificate at n = 2) in a
fresh subprocess per backend, since the backend is fixed at import time.
"""

import argparse
import json
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

from hig import _kernels_py

try:
    from hig import _ckernels
except ImportError:
    _ckernels = None


def rand_poly(rng, deg):
    return tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(deg)) + (Fraction(1),)


def kernel_table(repeat):
    rng = random.Random(0)
    pairs = [(rand_poly(rng, 6), rand_poly(rng, 4)) for _ in range(50)]
    # common factor so gcd does real work
    common = [(_kernels_py.mul(a, b), _kernels_py.mul(a, rand_poly(rng, 3))) for a, b in pairs]
    rows = []
    for name, args in (("mul", pairs), ("divmod_", pairs), ("gcd", common)):
        row = {"kernel": name}
        for label, mod in (("python", _kernels_py), ("cython", _ckernels)):
            if mod is None:
                row[label] = None
                continue
            f = getattr(mod, name)
            row[label] = min(timeit.repeat(lambda: [f(a, b) for a, b in args], number=20, repeat=repeat))
        rows.append(row)
    return rows


WORKLOAD = """
import time
t0 = time.perf_counter()
from hig.kernels import BACKEND
from hig.valuations import kinematic, chi
from hig.curved import certify_lambda_independence
kinematic(chi(4), "prim")
certify_lambda_independence(2)
print(BACKEND, time.perf_counter() - t0)
"""


def workload(pure):
    env = dict(os.environ)
    env.pop("HIG_PURE_PYTHON", None)
    if pure:
        env["HIG_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
    backend, secs = out.stdout.split()
    return backend, float(secs)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows = kernel_table(args.repeat)
    end = [workload(False), workload(True)]
    if args.json:
        print(json.dumps({"kernels": rows, "workload": end}, indent=2))
        return
    print(f"{'kernel':10} {'python (s)':>12} {'cython (s)':>12} {'speedup':>8}")
    for r in rows:
        c = r["cython"]
        sp = f"{r['python'] / c:.2f}x" if c else "n/a"
        print(f"{r['kernel']:10} {r['python']:12.4f} {c if c is None else format(c, '12.4f'):>12} {sp:>8}")
    print("end-to-end workload:")
    for backend, secs in end:
        print(f"  {backend:8} {secs:.3f} s")


if __name__ == "__main__":
    main()
