import numpy as np
import pytest

from paralab.charts import StructuredChart
from paralab.classify import (
    DEFAULT_COUNT, TIERS, ClassificationReport, classify_chart, identity_suite, implication_audit,
    sample_points,
)
from paralab.errors import SamplingError
from paralab.gallery import FAILS, HOLDS, MIXED, PROPERTIES, get_chart
from perturb import perturbed_charts


def test_report_shape_and_determinism():
    a = classify_chart("ex5_1_spacelike")
    b = classify_chart("ex5_1_spacelike")
    assert isinstance(a, ClassificationReport)
    assert a.count == DEFAULT_COUNT and len(a.points) == DEFAULT_COUNT
    assert [p.property for p in a.properties] == list(PROPERTIES)
    assert a.points == b.points
    assert [p.max_residual for p in a.properties] == [p.max_residual for p in b.properties]
    assert {r.tier for r in a.identities} == set(TIERS)


def test_seed_changes_points():
    a = classify_chart("ex2_1_g1", count=4, seed=1, identities=False)
    b = classify_chart("ex2_1_g1", count=4, seed=2, identities=False)
    assert a.points != b.points


def test_mixed_status_on_index_changing_chart():
    rep = classify_chart("ex2_2_g2", identities=False)
    assert set(rep.index_histogram) == {0, 1}
    assert rep.status("almost_paracontact_metric") == HOLDS


def test_sampling_skips_degenerate_points_and_gives_up():
    ok = StructuredChart(
        name="half", epsilon=1, coords=("x", "y", "z"), domain=((-1, 1),) * 3,
        g=[["1", "0", "0"], ["0", "x", "0"], ["0", "0", "1"]],
        phi=[["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "0"]], xi=["0", "0", "1"], eta=["0", "0", "1"],
    )
    geos, attempts = sample_points(ok, 8, 0)
    assert len(geos) == 8 and attempts >= 8
    dead = StructuredChart(
        name="dead", epsilon=1, coords=("x", "y", "z"), domain=((-1, 1),) * 3,
        g=[["1", "0", "0"], ["0", "0", "0"], ["0", "0", "1"]],
        phi=[["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "0"]], xi=["0", "0", "1"], eta=["0", "0", "1"],
    )
    with pytest.raises(SamplingError):
        classify_chart(dead, count=4)


def test_identity_tiers_gate_on_para_sasakian():
    chart = get_chart("ex2_2_g1").chart
    rows = identity_suite(chart, [[0.1, 0.2, 0.3]])
    gated = [r for r in rows if r.tier in ("lemma5", "ricci", "corollary")]
    assert gated and all(not r.applicable and r.passed is None for r in gated)
    assert all(r.passed for r in rows if r.tier in ("axioms", "lemma3", "phi", "curvature"))


def test_audit_on_status_mappings():
    base = {p: FAILS for p in PROPERTIES}
    assert implication_audit(base) == []
    bad = dict(base, para_sasakian=HOLDS)
    rules = {v.rule for v in implication_audit(bad)}
    assert rules  # para-Sasakian must imply s-paracontact, normality, ...
    flat_ps = {p: HOLDS for p in PROPERTIES}
    assert any("flat" in v.rule for v in implication_audit(flat_ps))
    loose = dict(base, s_paracontact=HOLDS, paracontact=HOLDS, eta_closed=MIXED)
    assert implication_audit(loose)


def test_hyperbolic_equivalences_and_audit():
    rep = classify_chart("hyperbolic_ps")
    for key in ("symmetric", "semi_symmetric", "ricci_symmetric", "ricci_semisymmetric",
                "constant_curvature_minus_eps", "einstein_ps"):
        assert rep.status(key) == HOLDS, key
    assert rep.status("flat") == FAILS
    assert rep.audit == []
    assert rep.identity("constant_curvature_phi_rederived").passed


@pytest.mark.parametrize("chart", perturbed_charts(), ids=lambda c: c.name)
def test_s_paracontact_equivalence_under_perturbation(chart):
    rep = classify_chart(chart, identities=False)
    pc, ec, sp = (np.asarray(rep.point_residuals[k]) <= rep.tol
                  for k in ("paracontact", "eta_closed", "s_paracontact"))
    assert np.array_equal(sp, pc & ec)
    assert rep.audit == []
