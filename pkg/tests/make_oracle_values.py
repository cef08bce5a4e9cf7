"""Regenerate tests/data/oracle_values.json from the finite-difference oracles.

    python3 tests/make_oracle_values.py

The file is committed; tests compare against it rather than regenerating.
"""

import json
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).parent))

import oracles  # noqa: E402
from paralab.gallery import get_chart, list_charts  # noqa: E402

OUT = pathlib.Path(__file__).parent / "data" / "oracle_values.json"


def probe_points(chart):
    """The domain centre nudged off-axis, and a second point toward a corner."""
    pts = []
    for frac in (0.13, -0.31):
        pts.append([
            (lo + hi) / 2 + frac * (k + 1) * (hi - lo) / 4 for k, (lo, hi) in enumerate(chart.domain)
        ])
    return pts


def planes(chart, x):
    n = chart.dim
    g = oracles.metric(chart, x)
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            if abs(g[i, i] * g[j, j] - g[i, j] ** 2) > 1e-6:
                out[f"{i},{j}"] = oracles.sectional(chart, x, np.eye(n)[i], np.eye(n)[j])
    return out


def main():
    table = {}
    for name in list_charts():
        chart = get_chart(name).chart
        rows = []
        for x in probe_points(chart):
            rows.append({
                "point": x,
                "index": oracles.negative_eigenvalues(oracles.metric(chart, x)),
                "christoffel": oracles.christoffel(chart, x).tolist(),
                "riemann_up": oracles.riemann_up(chart, x).tolist(),
                "ricci": oracles.ricci(chart, x).tolist(),
                "scalar": oracles.scalar(chart, x),
                "nabla_xi": oracles.nabla_xi(chart, x).tolist(),
                "lie_g_xi": oracles.lie_g_xi(chart, x).tolist(),
                "nijenhuis": oracles.nijenhuis(chart, x).tolist(),
                "sectional": planes(chart, x),
            })
        table[name] = rows
    OUT.parent.mkdir(exist_ok=True)
    OUT.write_text(json.dumps(table, indent=1, sort_keys=True) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
