"""Compare the compiled and pure-Python kernels on representative workloads.

Each backend runs in its own interpreter, since the choice is made at import.

    python bench/benchmark.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, random, time
from realroadmap import kernels
from realroadmap.groebner import groebner
from realroadmap.polycore import Poly
from realroadmap.textio import parse_poly

def best(fn, repeat):
    out = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        out = min(out, time.perf_counter() - t)
    return out

rng = random.Random(7)
def rand_poly(n, deg, terms):
    from gmpy2 import mpq
    d = {}
    for _ in range(terms):
        e = tuple(rng.randint(0, deg) for _ in range(n))
        d[e] = mpq(rng.randint(-50, 50), rng.randint(1, 9))
    return Poly(n, d)

a, b = rand_poly(3, 6, 60), rand_poly(3, 6, 60)
V = ["x", "y", "z"]
torus = [parse_poly(s, V) for s in ["(x^2+y^2+z^2+3)^2-16*(x^2+y^2)", "y", "4*x^3+4*x*y^2+4*x*z^2-20*x"]]
K = ["a", "b", "c", "d", "e"]
katsura = [parse_poly(s, K) for s in [
    "a+2*b+2*c+2*d+2*e-1", "a^2+2*b^2+2*c^2+2*d^2+2*e^2-a", "2*a*b+2*b*c+2*c*d+2*d*e-b",
    "b^2+2*a*c+2*b*d+2*c*e-c", "2*b*c+2*a*d+2*b*e-d"]]
from realroadmap.roadmap import roadmap
quartic = parse_poly("(x^2-1)^2+y^2+z^2-1/4", V)
R = int(__import__("sys").argv[1])
print(json.dumps({
    "backend": kernels.BACKEND,
    "mul_terms 60x60 terms": best(lambda: a * b, R),
    "groebner torus slice": best(lambda: groebner(torus), R),
    "groebner katsura-5": best(lambda: groebner(katsura), R),
    "roadmap two-lobe quartic": best(lambda: roadmap(quartic), R),
}))
"""


def run(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if pure:
        env["REALROADMAP_PURE_PYTHON"] = "1"
    else:
        env.pop("REALROADMAP_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, slow = run(False, args.repeat), run(True, args.repeat)
    if fast["backend"] != "cython":
        print("compiled kernels are not built; run `pip install -e .` with a C compiler")
    print(f"{'workload':28s} {'python [s]':>11s} {fast['backend'] + ' [s]':>11s} {'speedup':>8s}")
    for key in slow:
        if key == "backend":
            continue
        print(f"{key:28s} {slow[key]:11.4f} {fast[key]:11.4f} {slow[key] / fast[key]:7.2f}x")


if __name__ == "__main__":
    main()
