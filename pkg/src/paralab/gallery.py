"""Built-in charts: the coordinate examples plus derived reference charts.

Components are written as expression strings so that gallery charts and
manifest-authored charts go through the same parser.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .charts import StructuredChart, from_almost_product
from .expr import as_expression
from .jets import Const

PROPERTIES = (
    "almost_paracontact_metric",
    "paracontact",
    "s_paracontact",
    "eta_closed",
    "xi_geodesic",
    "normal",
    "n2_zero",
    "n3_zero",
    "n4_zero",
    "para_sasakian",
    "flat",
    "constant_curvature_minus_eps",
    "symmetric",
    "semi_symmetric",
    "ricci_symmetric",
    "ricci_semisymmetric",
    "einstein_ps",
    "einstein_general",
)

HOLDS, FAILS, MIXED = "holds", "fails", "mixed"


@dataclass(frozen=True)
class GalleryEntry:
    chart: StructuredChart
    expected: tuple
    notes: str = ""

    def __post_init__(self):
        for prop, status in self.expected:
            if prop not in PROPERTIES:
                raise ValueError(f"unknown property {prop!r}")
            if status not in (HOLDS, FAILS, MIXED):
                raise ValueError(f"unknown status {status!r}")

    @property
    def name(self):
        return self.chart.name

    @property
    def description(self):
        return self.chart.description


def _entry(name, eps, coords, g, phi, xi, eta, description, expected, notes="", domain=None):
    n = len(coords)
    chart = StructuredChart(
        name=name,
        epsilon=eps,
        coords=coords,
        domain=domain or ((-1.0, 1.0),) * n,
        g=g,
        phi=phi,
        xi=xi,
        eta=eta,
        description=description,
    )
    return GalleryEntry(chart, tuple(expected.items()), notes)


# Example 2.1: constant structure, two metrics of different index.
_PHI_21 = [["0", "0", "1"], ["0", "0", "0"], ["1", "0", "0"]]


def _ex2_1_g1():
    return _entry(
        "ex2_1_g1", -1, ("x", "y", "z"),
        [["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "1"]],
        _PHI_21, ["0", "1", "0"], ["0", "1", "0"],
        "constant swap structure, g = dx^2 - dy^2 + dz^2 (timelike, index 1)",
        {
            "almost_paracontact_metric": HOLDS,
            "paracontact": FAILS,
            "s_paracontact": FAILS,
            "eta_closed": HOLDS,
            "xi_geodesic": HOLDS,
            "normal": HOLDS,
            "para_sasakian": FAILS,
            "flat": HOLDS,
            "symmetric": HOLDS,
        },
    )


def _ex2_1_g2():
    return _entry(
        "ex2_1_g2", 1, ("x", "y", "z"),
        [["-1", "0", "0"], ["0", "1", "0"], ["0", "0", "-1"]],
        _PHI_21, ["0", "1", "0"], ["0", "1", "0"],
        "constant swap structure, g = -dx^2 + dy^2 - dz^2 (spacelike, index 2)",
        {
            "almost_paracontact_metric": HOLDS,
            "paracontact": FAILS,
            "para_sasakian": FAILS,
            "flat": HOLDS,
        },
    )


# Example 2.2: eta = dz - y dx, xi = d/dz.
_PHI_22 = [["-1", "0", "0"], ["0", "-1", "0"], ["-y", "0", "0"]]
_ETA_22 = ["-y", "0", "1"]
_XI_3Z = ["0", "0", "1"]


def _ex2_2_g1():
    return _entry(
        "ex2_2_g1", -1, ("x", "y", "z"),
        [["1 - y^2", "0", "y"], ["0", "1", "0"], ["y", "0", "-1"]],
        _PHI_22, _XI_3Z, _ETA_22,
        "eta = dz - y dx, g = dx^2 + dy^2 - eta(x)eta (timelike Lorentzian)",
        {
            "almost_paracontact_metric": HOLDS,
            "eta_closed": FAILS,
            "xi_geodesic": HOLDS,
            "s_paracontact": FAILS,
            "para_sasakian": FAILS,
        },
    )


def _ex2_2_g2():
    return _entry(
        "ex2_2_g2", 1, ("x", "y", "z"),
        [["1", "0", "-y"], ["0", "1", "0"], ["-y", "0", "1"]],
        _PHI_22, _XI_3Z, _ETA_22,
        "eta = dz - y dx, g = dx^2 + dy^2 + dz^2 - 2y dx dz (spacelike)",
        {"almost_paracontact_metric": HOLDS, "eta_closed": FAILS},
        notes=(
            "det g = 1 - y^2: the metric is Riemannian for |y| < 1, Lorentzian for "
            "|y| > 1 and degenerate on |y| = 1. The source calls it Lorentzian without "
            "qualification; the domain is widened to y in [-2, 2] and the index is "
            "reported pointwise, so the index histogram is mixed."
        ),
        domain=((-1.0, 1.0), (-2.0, 2.0), (-1.0, 1.0)),
    )


def _ex2_2_g3():
    return _entry(
        "ex2_2_g3", 1, ("x", "y", "z"),
        [["-1", "0", "-y"], ["0", "1", "0"], ["-y", "0", "1"]],
        _PHI_22, _XI_3Z, _ETA_22,
        "eta = dz - y dx, g = -dx^2 + dy^2 + dz^2 - 2y dx dz (spacelike)",
        {"almost_paracontact_metric": HOLDS, "eta_closed": FAILS},
        notes=(
            "Claimed index 2; the eigenvalue count is 1 at every point "
            "(det g = -(1 + y^2) < 0 with the y-block positive). The computed "
            "pointwise index is reported."
        ),
    )


# Example 2.3: five dimensions, eta = ds - y dx - t dz, xi = d/ds.
_COORDS_23 = ("x", "y", "z", "t", "s")
_PHI_23 = [
    ["-1", "0", "0", "0", "0"],
    ["0", "-1", "0", "0", "0"],
    ["0", "0", "-1", "0", "0"],
    ["0", "0", "0", "-1", "0"],
    ["-y", "0", "-t", "0", "0"],
]
_ETA_23 = ["-y", "0", "-t", "0", "1"]
_XI_5S = ["0", "0", "0", "0", "1"]


def _ex2_3_g1():
    return _entry(
        "ex2_3_g1", -1, _COORDS_23,
        [
            ["1 - y^2", "0", "-y*t", "0", "y"],
            ["0", "1", "0", "0", "0"],
            ["-y*t", "0", "1 - t^2", "0", "t"],
            ["0", "0", "0", "1", "0"],
            ["y", "0", "t", "0", "-1"],
        ],
        _PHI_23, _XI_5S, _ETA_23,
        "eta = ds - y dx - t dz, g = dx^2 + dy^2 + dz^2 + dt^2 - eta(x)eta (timelike)",
        {"almost_paracontact_metric": HOLDS, "eta_closed": FAILS, "para_sasakian": FAILS},
    )


def _ex2_3_g2():
    return _entry(
        "ex2_3_g2", 1, _COORDS_23,
        [
            ["-1", "0", "0", "0", "-y"],
            ["0", "-1", "0", "0", "0"],
            ["0", "0", "1", "0", "-t"],
            ["0", "0", "0", "1", "0"],
            ["-y", "0", "-t", "0", "1"],
        ],
        _PHI_23, _XI_5S, _ETA_23,
        "eta = ds - y dx - t dz, g = -dx^2 - dy^2 + dz^2 + dt^2 + ds^2 - 2y dx ds - 2t dz ds",
        {"almost_paracontact_metric": HOLDS, "eta_closed": FAILS},
        notes=(
            "Claimed index 3; the eigenvalue count at the origin is 2 (g = "
            "diag(-1,-1,1,1,1) there). The computed pointwise index is reported."
        ),
    )


# Example 4.1: built from a potential theta on R^p x R^q.


def example_4_1(p=1, q=1, theta="x*y", F=None, coords=None, name=None):
    """The s-paracontact construction from a potential ``θ`` and weights ``F_i > 0``.

    ``n = p + q + 1``; the last coordinate plays the role of ``x^n``.  The
    metric is ``g = Σ_i (f_i - θ_i²)(dx^i)² - η⊗η`` with
    ``f_a = F_a e^{-2x^n} + θ_a²`` and ``f_λ' = F_λ' e^{2x^n} + θ_λ'²``, so
    ``g_ii = F_i e^{∓2x^n} - θ_i²``, ``g_ij = -θ_i θ_j``, ``g_in = -θ_i`` and
    ``g_nn = -1``.
    """
    m = p + q
    n = m + 1
    if p < 0 or q < 0 or m < 1:
        raise ValueError("need p, q >= 0 with p + q >= 1")
    if coords is None:
        coords = ("x", "y", "z") if n == 3 else tuple(f"x{i + 1}" for i in range(n))
    coords = tuple(coords)
    th = as_expression(theta, coords)
    if th.max_coordinate() >= m:
        raise ValueError("theta may only depend on the first p + q coordinates")
    Fs = [as_expression(f, coords) for f in (F or ["1"] * m)]
    if len(Fs) != m:
        raise ValueError(f"need {m} weights F_i")
    if any(f.max_coordinate() >= m for f in Fs):
        raise ValueError("F_i may only depend on the first p + q coordinates")
    last = coords[-1]
    thi = [th.diff(i) for i in range(m)]
    zero, one = Const(0.0), Const(1.0)
    g = np.full((n, n), zero, dtype=object)
    for i in range(m):
        sign = -2.0 if i < p else 2.0
        weight = Fs[i] * as_expression(f"exp({sign:g}*{last})", coords)
        g[i, i] = weight - thi[i] * thi[i]
        for j in range(i + 1, m):
            g[i, j] = g[j, i] = -(thi[i] * thi[j])
        g[i, n - 1] = g[n - 1, i] = -thi[i]
    g[n - 1, n - 1] = Const(-1.0)
    phi = np.full((n, n), zero, dtype=object)
    for a in range(p):
        phi[a, a] = one
        phi[n - 1, a] = -thi[a]
    for lam in range(p, m):
        phi[lam, lam] = Const(-1.0)
        phi[n - 1, lam] = thi[lam]
    xi = np.array([zero] * m + [one], dtype=object)
    eta = np.array(thi + [one], dtype=object)
    return StructuredChart(
        name=name or f"ex4_1_p{p}q{q}",
        epsilon=-1,
        coords=coords,
        domain=((-1.0, 1.0),) * n,
        g=g,
        phi=phi,
        xi=xi,
        eta=eta,
        description=f"s-paracontact construction, p={p}, q={q}, theta={th}",
    )


def _ex4_1_default():
    chart = example_4_1(1, 1, "x*y", name="ex4_1_default")
    return GalleryEntry(
        chart,
        (
            ("almost_paracontact_metric", HOLDS),
            ("s_paracontact", HOLDS),
            ("paracontact", HOLDS),
            ("eta_closed", HOLDS),
            ("xi_geodesic", HOLDS),
            ("para_sasakian", FAILS),
        ),
        notes=(
            "theta = x*y, F = 1. The metric display is read literally as "
            "g = (f_1 - theta_1^2) dx^2 + (f_2 - theta_2^2) dy^2 - eta(x)eta, so "
            "g_11 = exp(-2z) - y^2, g_22 = exp(2z) - x^2, g_12 = -x*y, g_13 = -y, "
            "g_23 = -x, g_33 = -1. Dropping the -theta_i^2 on the diagonal breaks "
            "nabla xi = -phi. s-paracontact but not para-Sasakian."
        ),
    )


# Example 5.1, read with x^3 = z.


def _ex5_1(eps):
    e = "" if eps > 0 else "-"
    name = "ex5_1_spacelike" if eps > 0 else "ex5_1_timelike"
    return _entry(
        name, eps, ("x", "y", "z"),
        [[f"exp({e}2*z)", "0", "0"], ["0", f"exp({'-' if eps > 0 else ''}2*z)", "0"],
         ["0", "0", f"{eps}"]],
        [["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "0"]],
        _XI_3Z, _XI_3Z,
        f"para-Sasakian chart g = exp({2 * eps}z) dx^2 + exp({-2 * eps}z) dy^2 + ({eps}) dz^2",
        {
            "almost_paracontact_metric": HOLDS,
            "paracontact": HOLDS,
            "s_paracontact": HOLDS,
            "eta_closed": HOLDS,
            "xi_geodesic": HOLDS,
            "normal": HOLDS,
            "n2_zero": HOLDS,
            "n3_zero": HOLDS,
            "n4_zero": HOLDS,
            "para_sasakian": HOLDS,
            "flat": FAILS,
            "constant_curvature_minus_eps": FAILS,
            "symmetric": FAILS,
            "semi_symmetric": FAILS,
        },
        notes="The exponent x^3 is read as the third coordinate z.",
    )


_CONSTANT_CURVATURE = {
    "almost_paracontact_metric": HOLDS,
    "paracontact": HOLDS,
    "s_paracontact": HOLDS,
    "normal": HOLDS,
    "para_sasakian": HOLDS,
    "flat": FAILS,
    "constant_curvature_minus_eps": HOLDS,
    "symmetric": HOLDS,
    "semi_symmetric": HOLDS,
    "ricci_symmetric": HOLDS,
    "ricci_semisymmetric": HOLDS,
    "einstein_ps": HOLDS,
    "einstein_general": HOLDS,
}


def _hyperbolic_ps():
    return _entry(
        "hyperbolic_ps", 1, ("x", "y", "z"),
        [["exp(2*z)", "0", "0"], ["0", "exp(2*z)", "0"], ["0", "0", "1"]],
        [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]],
        _XI_3Z, _XI_3Z,
        "hyperbolic space exp(2z)(dx^2 + dy^2) + dz^2 with phi = diag(1,1,0), curvature -1",
        dict(_CONSTANT_CURVATURE),
        notes="Derived reference chart of constant curvature -epsilon = -1.",
    )


def _desitter_ps():
    return _entry(
        "desitter_ps", -1, ("x", "y", "z"),
        [["exp(2*z)", "0", "0"], ["0", "exp(2*z)", "0"], ["0", "0", "-1"]],
        [["-1", "0", "0"], ["0", "-1", "0"], ["0", "0", "0"]],
        _XI_3Z, _XI_3Z,
        "de Sitter chart -dz^2 + exp(2z)(dx^2 + dy^2) with phi = diag(-1,-1,0), curvature +1",
        dict(_CONSTANT_CURVATURE),
        notes="Derived reference chart of constant curvature -epsilon = +1 (Lorentzian).",
    )


def _product_split():
    chart = from_almost_product(
        [["1", "0"], ["0", "-1"]], [["1", "0"], ["0", "1"]], 1, name="product_split"
    )
    return GalleryEntry(
        chart,
        (
            ("almost_paracontact_metric", HOLDS),
            ("normal", HOLDS),
            ("eta_closed", HOLDS),
            ("paracontact", FAILS),
            ("para_sasakian", FAILS),
            ("flat", HOLDS),
        ),
        notes="Product of the plane with J = diag(1,-1) and the line, epsilon = +1.",
    )


_BUILDERS = {
    "ex2_1_g1": _ex2_1_g1,
    "ex2_1_g2": _ex2_1_g2,
    "ex2_2_g1": _ex2_2_g1,
    "ex2_2_g2": _ex2_2_g2,
    "ex2_2_g3": _ex2_2_g3,
    "ex2_3_g1": _ex2_3_g1,
    "ex2_3_g2": _ex2_3_g2,
    "ex4_1_default": _ex4_1_default,
    "ex5_1_spacelike": lambda: _ex5_1(1),
    "ex5_1_timelike": lambda: _ex5_1(-1),
    "hyperbolic_ps": _hyperbolic_ps,
    "desitter_ps": _desitter_ps,
    "product_split": _product_split,
}


def list_charts():
    return list(_BUILDERS)


@lru_cache(maxsize=None)
def get_chart(name):
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown gallery chart {name!r}; known: {', '.join(_BUILDERS)}") from None
    return builder()


def para_sasakian_charts():
    return [n for n in _BUILDERS if dict(get_chart(n).expected).get("para_sasakian") == HOLDS]


__all__ = [
    "PROPERTIES",
    "GalleryEntry",
    "example_4_1",
    "get_chart",
    "list_charts",
    "para_sasakian_charts",
]
