"""Randomized variants of gallery charts for the s-paracontact equivalence check."""

import numpy as np

from paralab.gallery import example_4_1
from paralab.manifest import load_manifest


def _scaled_exponent(lam, eps, name):
    # nabla xi = lam * phi, so paracontact (and s-paracontact) holds only at lam = 1
    return load_manifest({
        "version": 1, "name": name, "epsilon": eps, "coordinates": ["x", "y", "z"],
        "metric": [[f"exp({2 * eps * lam!r}*z)"], ["0", f"exp({-2 * eps * lam!r}*z)"], ["0", "0", str(eps)]],
        "phi": [["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "0"]],
        "xi": ["0", "0", "1"], "eta": ["0", "0", "1"],
    })


def _twisted(a, name):
    # eta = dz - a*y dx is never closed
    return load_manifest({
        "version": 1, "name": name, "epsilon": -1, "coordinates": ["x", "y", "z"],
        "metric": [[f"1 - {a * a!r}*y^2"], ["0", "1"], [f"{a!r}*y", "0", "-1"]],
        "phi": [["-1", "0", "0"], ["0", "-1", "0"], [f"-{a!r}*y", "0", "0"]],
        "xi": ["0", "0", "1"], "eta": [f"-{a!r}*y", "0", "1"],
    })


def perturbed_charts(seed=0, count=20):
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        kind = k % 3
        name = f"perturbed_{k}"
        if kind == 0:
            c = [float(v) for v in rng.uniform(-0.8, 0.8, size=3).round(6)]
            theta = f"{c[0]!r}*x*y + {c[1]!r}*x^2 + {c[2]!r}*sin(y)"
            F = tuple(float(v) for v in rng.uniform(0.5, 2.0, size=2).round(6))
            out.append(example_4_1(1, 1, theta=theta, F=F, name=name))
        elif kind == 1:
            lam = 1.0 if k % 2 else round(float(rng.uniform(0.3, 1.7)), 6)
            out.append(_scaled_exponent(lam, int(rng.choice([-1, 1])), name))
        else:
            out.append(_twisted(round(float(rng.uniform(0.2, 0.9)), 6), name))
    return out
