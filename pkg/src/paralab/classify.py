"""Sampling, classification, identity suites and the implication audit."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .charts import AXIOM_RESIDUALS, StructuredChart, axiom_report, residual
from .curvature import (
    classification_residuals,
    corollary_rows,
    curvature_frame,
    lemma5_rows,
    ricci_rows,
)
from .errors import DegenerateMetricError, EvaluationError, SamplingError
from .gallery import FAILS, HOLDS, MIXED, PROPERTIES, get_chart
from .levi_civita import PointGeometry, lemma3_rows, phi_rows

DEFAULT_COUNT = 32
DEFAULT_SEED = 42
DEFAULT_TOL = 1e-8

TIERS = ("axioms", "curvature", "lemma3", "phi", "lemma5", "ricci", "corollary")

# identity-row tolerances by tier; second Bianchi gets its own
_TIER_TOL = {"axioms": 1e-9}
_ROW_TOL = {"second_bianchi": 1e-7}


@dataclass(frozen=True)
class PropertyStatus:
    property: str
    status: str
    max_residual: float
    worst_point: tuple
    tol_used: float
    min_residual: float = 0.0


@dataclass(frozen=True)
class IdentityRow:
    tier: str
    identity: str
    applicable: bool
    max_residual: float | None
    worst_point: tuple | None
    tol_used: float
    passed: bool | None


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str


@dataclass
class ClassificationReport:
    chart: str
    epsilon: int
    count: int
    seed: int
    tol: float
    domain: tuple
    points: list
    index_histogram: dict
    properties: list
    identities: list = field(default_factory=list)
    audit: list = field(default_factory=list)
    attempts: int = 0
    # per-point residuals, kept for pointwise reasoning (not serialized)
    point_residuals: dict = field(default_factory=dict, repr=False)

    def status(self, prop):
        for p in self.properties:
            if p.property == prop:
                return p.status
        raise KeyError(prop)

    def statuses(self):
        return {p.property: p.status for p in self.properties}

    def identity(self, name):
        for row in self.identities:
            if row.identity == name:
                return row
        raise KeyError(name)


def _resolve(chart):
    if isinstance(chart, StructuredChart):
        return chart
    if isinstance(chart, str):
        return get_chart(chart).chart
    return chart.chart  # GalleryEntry


def sample_points(chart, count=DEFAULT_COUNT, seed=DEFAULT_SEED):
    """Seeded uniform points in the domain box where the metric is nondegenerate.

    Returns ``(geometries, attempts)``.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    lo = np.array([a for a, _ in chart.domain])
    hi = np.array([b for _, b in chart.domain])
    geos = []
    attempts = 0
    while len(geos) < count and attempts < 10 * count:
        attempts += 1
        p = rng.uniform(lo, hi)
        try:
            geos.append(PointGeometry(chart, p))
        except (DegenerateMetricError, EvaluationError):
            continue
    if len(geos) < count:
        raise SamplingError(
            f"only {len(geos)} of {count} nondegenerate points found in {attempts} attempts"
        )
    return geos, attempts


# --- pointwise property residuals -------------------------------------------------


def _almost_paracontact_residual(geo):
    rep = axiom_report(geo.chart, geo.frame)
    value = rep.structural_max()
    if rep.rank_phi != geo.n - 1:
        value = max(value, 1.0)
    if not rep.kernel_nondegenerate:
        value = max(value, 1.0)
    return value, rep


def _normality_residuals(geo):
    f = geo.frame
    nt = geo.normality
    two_de_xi = 2.0 * np.einsum("ij,k->kij", nt.dEta, f.xi)
    n2_terms = (np.einsum("li,lj->ij", f.phi, f.deta), np.einsum("k,jki->ij", f.eta, f.dphi))
    n3_terms = (
        np.einsum("l,lij->ij", f.xi, f.dphi),
        np.einsum("lj,li->ij", f.phi, f.dxi),
        np.einsum("il,jl->ij", f.phi, f.dxi),
    )
    n4_terms = (np.einsum("l,lj->j", f.xi, f.deta), np.einsum("l,jl->j", f.eta, f.dxi))
    return {
        "normal": residual(nt.N1, nt.nijPhi, two_de_xi),
        "n2_zero": residual(nt.N2, *n2_terms),
        "n3_zero": residual(nt.N3, *n3_terms),
        "n4_zero": residual(nt.N4, *n4_terms),
    }


def point_residuals(geo):
    """Residual of every classifier property at one point."""
    apm, rep = _almost_paracontact_residual(geo)
    st = geo.structure
    cr = classification_residuals(geo)
    out = {
        "almost_paracontact_metric": apm,
        "paracontact": st["paracontact"],
        "s_paracontact": st["s_paracontact"],
        "eta_closed": st["eta_closed"],
        "xi_geodesic": st["xi_geodesic"],
        "para_sasakian": st["para_sasakian"],
        "flat": cr["flat"],
        "constant_curvature_minus_eps": cr["constant_curv_eps"],
        "symmetric": cr["symmetric"],
        "semi_symmetric": cr["semi_symmetric"],
        "ricci_symmetric": cr["ricci_symmetric"],
        "ricci_semisymmetric": cr["ricci_semisymmetric"],
        "einstein_ps": cr["einstein_ps"],
        "einstein_general": cr["einstein_general"],
    }
    out.update(_normality_residuals(geo))
    return {k: float(out[k]) for k in PROPERTIES}, rep


def _aggregate(name, values, points, tol):
    values = np.asarray(values, dtype=float)
    worst = int(np.argmax(values))  # first index on ties
    ok = values <= tol
    status = HOLDS if ok.all() else FAILS if not ok.any() else MIXED
    return PropertyStatus(
        property=name,
        status=status,
        max_residual=float(values[worst]),
        worst_point=tuple(float(v) for v in points[worst]),
        tol_used=float(tol),
        min_residual=float(values.min()),
    )


# --- identity suite ------------------------------------------------------------------


def _tier_rows(tier, geo):
    if tier == "axioms":
        rep = axiom_report(geo.chart, geo.frame)
        rows = {k: rep.residuals[k] for k in AXIOM_RESIDUALS}
        rows["rank_phi"] = float(abs(rep.rank_phi - (geo.n - 1)))
        rows["kernel_eta_nondegenerate"] = 0.0 if rep.kernel_nondegenerate else 1.0
        return rows
    if tier == "curvature":
        rows = {"metric_compatibility": geo.connection.metric_compatibility}
        G = geo.gamma
        rows["christoffel_symmetric"] = residual(G - np.swapaxes(G, 1, 2), G)
        rows.update(curvature_frame(geo).symmetry_residuals())
        return rows
    if tier == "lemma3":
        return lemma3_rows(geo)
    if tier == "phi":
        return phi_rows(geo)
    if tier == "lemma5":
        return lemma5_rows(geo)
    if tier == "ricci":
        return ricci_rows(geo)
    if tier == "corollary":
        return corollary_rows(geo)
    raise ValueError(f"unknown identity tier {tier!r}")


def identity_suite(chart, points, tiers=TIERS, tol=DEFAULT_TOL, para_sasakian=None,
                   constant_curvature=None):
    """Max residual of each identity over ``points``.

    The para-Sasakian tiers apply only when the para_sasakian residual is
    within ``tol`` at every point (or when ``para_sasakian`` is forced); the
    corollary tier additionally needs constant curvature ``-ε``.
    """
    chart = _resolve(chart) if not isinstance(chart, StructuredChart) else chart
    geos = [p if isinstance(p, PointGeometry) else PointGeometry(chart, p) for p in points]
    if para_sasakian is None:
        para_sasakian = all(g.structure["para_sasakian"] <= tol for g in geos)
    if constant_curvature is None:
        constant_curvature = para_sasakian and all(
            classification_residuals(g)["constant_curv_eps"] <= tol for g in geos
        )
    applicable = {
        "lemma5": para_sasakian,
        "ricci": para_sasakian,
        "corollary": constant_curvature,
    }
    out = []
    for tier in TIERS:
        if tier not in tiers:
            continue
        if not applicable.get(tier, True):
            for name in _tier_rows(tier, geos[0]):
                out.append(IdentityRow(tier, name, False, None, None, _tier_tol(tier, name), None))
            continue
        table = [_tier_rows(tier, g) for g in geos]
        for name in table[0]:
            vals = np.array([t[name] for t in table])
            worst = int(np.argmax(vals))
            t = _tier_tol(tier, name)
            out.append(
                IdentityRow(
                    tier, name, True, float(vals[worst]),
                    tuple(float(v) for v in geos[worst].point), t, bool(vals[worst] < t),
                )
            )
    return out


def _tier_tol(tier, name):
    return _ROW_TOL.get(name, _TIER_TOL.get(tier, DEFAULT_TOL))


# --- implication audit ---------------------------------------------------------------

IMPLICATIONS = (
    ("para_sasakian", "s_paracontact", "para-Sasakian structures are s-paracontact"),
    ("para_sasakian", "paracontact", "para-Sasakian structures are paracontact"),
    ("para_sasakian", "normal", "para-Sasakian structures are normal"),
    ("s_paracontact", "paracontact", "s-paracontact implies paracontact"),
    ("s_paracontact", "eta_closed", "s-paracontact implies eta closed"),
    ("eta_closed", "xi_geodesic", "closed eta makes xi geodesic"),
    ("normal", "n2_zero", "normality (N1 = 0) implies N2 = 0"),
    ("normal", "n3_zero", "normality (N1 = 0) implies N3 = 0"),
    ("normal", "n4_zero", "normality (N1 = 0) implies N4 = 0"),
    ("n2_zero", "n4_zero", "N2 = 0 implies N4 = 0"),
    ("n3_zero", "n4_zero", "N3 = 0 implies N4 = 0"),
    ("symmetric", "semi_symmetric", "symmetric implies semi-symmetric"),
    ("symmetric", "ricci_symmetric", "symmetric implies Ricci-symmetric"),
    ("ricci_symmetric", "ricci_semisymmetric", "Ricci-symmetric implies Ricci-semisymmetric"),
    ("flat", "symmetric", "flat implies symmetric"),
)

PS_EQUIVALENCES = (
    (("symmetric", "constant_curvature_minus_eps", "semi_symmetric"),
     "para-Sasakian: symmetric, constant curvature -eps and semi-symmetric are equivalent"),
    (("einstein_ps", "ricci_symmetric", "ricci_semisymmetric"),
     "para-Sasakian: Einstein, Ricci-symmetric and Ricci-semisymmetric are equivalent"),
)


def _conjunction(a, b):
    if a == HOLDS and b == HOLDS:
        return HOLDS
    if a == FAILS or b == FAILS:
        return FAILS
    return MIXED


def implication_audit(report):
    """Violations of the implication lattice among the report's statuses.

    Accepts a :class:`ClassificationReport` or a plain ``{property: status}``
    mapping.  Normality and para-Sasakian are deliberately not linked in the
    converse direction (that question is open).
    """
    if isinstance(report, ClassificationReport):
        st = report.statuses()
        pointwise = report.point_residuals
        tol = report.tol
    else:
        st = dict(report)
        pointwise, tol = {}, DEFAULT_TOL
    out = []
    for a, b, why in IMPLICATIONS:
        if st.get(a) == HOLDS and st.get(b) not in (None, HOLDS):
            out.append(Violation(why, f"{a}: {st[a]}, {b}: {st[b]}"))

    keys = ("s_paracontact", "paracontact", "eta_closed")
    if all(k in st for k in keys):
        if all(k in pointwise for k in keys):
            sp = np.asarray(pointwise["s_paracontact"]) <= tol
            pc = np.asarray(pointwise["paracontact"]) <= tol
            ec = np.asarray(pointwise["eta_closed"]) <= tol
            bad = np.nonzero(sp != (pc & ec))[0]
            if bad.size:
                out.append(Violation(
                    "s-paracontact iff paracontact with closed eta",
                    f"pointwise disagreement at sample indices {bad.tolist()}",
                ))
        else:
            conj = _conjunction(st["paracontact"], st["eta_closed"])
            if conj != st["s_paracontact"] and HOLDS in (conj, st["s_paracontact"]):
                out.append(Violation(
                    "s-paracontact iff paracontact with closed eta",
                    f"s_paracontact: {st['s_paracontact']}, paracontact: {st['paracontact']}, "
                    f"eta_closed: {st['eta_closed']}",
                ))

    if st.get("para_sasakian") == HOLDS:
        if st.get("flat") == HOLDS:
            out.append(Violation("para-Sasakian manifolds cannot be flat",
                                 "para_sasakian: holds, flat: holds"))
        for group, why in PS_EQUIVALENCES:
            vals = [st.get(k) for k in group]
            if None not in vals and len(set(vals)) > 1:
                out.append(Violation(why, ", ".join(f"{k}: {v}" for k, v in zip(group, vals))))
    return out


# --- orchestration ---------------------------------------------------------------------


def classify_chart(chart, count=DEFAULT_COUNT, seed=DEFAULT_SEED, tol=DEFAULT_TOL,
                   identities=True):
    chart = _resolve(chart)
    geos, attempts = sample_points(chart, count, seed)
    points = [tuple(float(v) for v in g.point) for g in geos]
    per_point = {k: [] for k in PROPERTIES}
    hist = {}
    for g in geos:
        res, rep = point_residuals(g)
        for k, v in res.items():
            per_point[k].append(v)
        hist[rep.index] = hist.get(rep.index, 0) + 1
    props = [_aggregate(k, per_point[k], points, tol) for k in PROPERTIES]
    report = ClassificationReport(
        chart=chart.name,
        epsilon=chart.epsilon,
        count=count,
        seed=seed,
        tol=float(tol),
        domain=chart.domain,
        points=points,
        index_histogram=dict(sorted(hist.items())),
        properties=props,
        attempts=attempts,
        point_residuals=per_point,
    )
    if identities:
        report.identities = identity_suite(
            chart, geos, tol=tol,
            para_sasakian=report.status("para_sasakian") == HOLDS,
            constant_curvature=(
                report.status("para_sasakian") == HOLDS
                and report.status("constant_curvature_minus_eps") == HOLDS
            ),
        )
    report.audit = implication_audit(report)
    return report


def expected_mismatches(report, expected):
    """``(property, expected, actual)`` for every expected status not reproduced."""
    st = report.statuses()
    return [(p, e, st[p]) for p, e in expected if st.get(p) != e]
