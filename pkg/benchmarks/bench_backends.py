"""Compare the compiled jet kernels with the numpy fallback.

    python3 benchmarks/bench_backends.py [--repeat N]

Times the two kernels in isolation, then a full gallery classification
in a subprocess for each backend (the backend is fixed at import).
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from paralab import _jetcore_py

try:
    from paralab import _jetcore
except ImportError:
    _jetcore = None


def random_jet(rng, n):
    h = rng.normal(size=(n, n))
    t = rng.normal(size=(n, n, n))
    # derivative slots are symmetric
    t = sum(t.transpose(p) for p in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]) / 6
    return float(rng.normal()), rng.normal(size=n), (h + h.T) / 2, t


def kernel_times(module, n, repeat):
    rng = np.random.default_rng(0)
    a, b = random_jet(rng, n), random_jet(rng, n)
    d = rng.normal(size=3)
    t_mul = min(timeit.repeat(lambda: module.mul(*a, *b), number=2000, repeat=repeat)) / 2000
    t_cmp = min(
        timeit.repeat(lambda: module.compose(a[1], a[2], a[3], *d), number=2000, repeat=repeat)
    ) / 2000
    return t_mul, t_cmp


GALLERY_SCRIPT = """
import time
from paralab import BACKEND
from paralab.classify import classify_chart
from paralab.gallery import list_charts
t0 = time.perf_counter()
for name in list_charts():
    classify_chart(name)
print(BACKEND, time.perf_counter() - t0)
"""


def gallery_time(pure):
    env = dict(os.environ)
    if pure:
        env["PARALAB_PURE_PYTHON"] = "1"
    else:
        env.pop("PARALAB_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", GALLERY_SCRIPT], env=env, check=True, capture_output=True, text=True
    ).stdout.split()
    return out[0], float(out[1])


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if _jetcore is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'n':>2} {'kernel':8} {'python (us)':>12} {'cython (us)':>12} {'speedup':>8}")
    for n in (3, 4, 5):
        py = kernel_times(_jetcore_py, n, args.repeat)
        cy = kernel_times(_jetcore, n, args.repeat) if _jetcore else (float("nan"),) * 2
        for name, p, c in zip(("mul", "compose"), py, cy):
            print(f"{n:>2} {name:8} {p * 1e6:12.2f} {c * 1e6:12.2f} {p / c:8.1f}")

    print()
    for pure in (True, False):
        name, seconds = gallery_time(pure)
        print(f"full gallery classification, {name} backend: {seconds:.2f} s")


if __name__ == "__main__":
    main()
