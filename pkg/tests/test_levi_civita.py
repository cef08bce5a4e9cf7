import numpy as np
import pytest

import oracles
from paralab.errors import VarianceError
from paralab.gallery import get_chart, list_charts
from paralab.levi_civita import (
    STRUCTURE_KEYS, christoffel, covariant_derivative, exterior_derivative_eta, geometry,
    lemma3_rows, lie_derivative_along_xi, nijenhuis_form_residual, nijenhuis_phi, normality_tensors,
    phi_rows, structure_residuals,
)


def _close(a, b, tol):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b))) <= tol * max(1.0, float(np.max(np.abs(b))))


@pytest.mark.parametrize("name", list_charts())
def test_against_frozen_oracle(name, frozen):
    chart = get_chart(name).chart
    for row in frozen[name]:
        x = row["point"]
        assert _close(christoffel(chart, x).gamma, row["christoffel"], 1e-9)
        assert _close(covariant_derivative(chart, x, "xi").components, row["nabla_xi"], 1e-9)
        assert _close(lie_derivative_along_xi(chart, x, "g").components, row["lie_g_xi"], 1e-9)
        assert _close(nijenhuis_phi(chart, x).components, row["nijenhuis"], 1e-9)


def test_oracle_is_reproducible(frozen):
    chart = get_chart("ex2_3_g2").chart
    row = frozen["ex2_3_g2"][1]
    assert np.allclose(oracles.christoffel(chart, row["point"]), row["christoffel"], rtol=0, atol=1e-13)


def test_example_5_1_connection():
    chart = get_chart("ex5_1_spacelike").chart
    x = [0.2, -0.3, 0.4]
    G = christoffel(chart, x).gamma
    assert G[0, 0, 2] == pytest.approx(1.0) and G[0, 2, 0] == pytest.approx(1.0)
    assert G[1, 1, 2] == pytest.approx(-1.0)
    assert G[2, 0, 0] == pytest.approx(-np.exp(0.8))
    assert G[2, 1, 1] == pytest.approx(np.exp(-0.8))
    assert np.allclose(covariant_derivative(chart, x, "xi").components, np.diag([1.0, -1.0, 0.0]))
    assert np.allclose(lie_derivative_along_xi(chart, x, "g").components,
                       np.diag([2 * np.exp(0.8), -2 * np.exp(-0.8), 0.0]))


@pytest.mark.parametrize("name", list_charts())
def test_metric_compatibility_and_torsion(name):
    chart = get_chart(name).chart
    x = [(lo + hi) / 2 + 0.1 for lo, hi in chart.domain]
    con = christoffel(chart, x)
    assert con.metric_compatibility < 1e-12
    assert np.array_equal(con.gamma, con.gamma.transpose(0, 2, 1))
    assert np.max(np.abs(covariant_derivative(chart, x, "g").components)) < 1e-12
    assert nijenhuis_form_residual(chart, x) < 1e-9


def test_custom_field_covariant_derivative():
    chart = get_chart("hyperbolic_ps").chart
    x = [0.1, 0.2, 0.3]
    a = covariant_derivative(chart, x, ["0", "0", "1"], variances=("up",))
    b = covariant_derivative(chart, x, "xi")
    assert np.allclose(a.components, b.components)
    with pytest.raises(ValueError):
        covariant_derivative(chart, x, ["0", "1"], variances=("up",))
    with pytest.raises(ValueError):
        covariant_derivative(chart, x, "omega")


def test_d_eta_half_convention():
    chart = get_chart("ex2_2_g1").chart  # eta = dz - y dx
    de = exterior_derivative_eta(chart, [0.0, 0.5, 0.0]).components
    assert de[0, 1] == pytest.approx(0.5) and de[1, 0] == pytest.approx(-0.5)


def test_normality_on_non_normal_chart():
    chart = get_chart("ex2_2_g1").chart
    nt = normality_tensors(chart, [0.1, 0.2, 0.3])
    assert np.max(np.abs(nt.N1)) > 0.1


@pytest.mark.parametrize("name", list_charts())
def test_structural_identities_hold_everywhere(name):
    chart = get_chart(name).chart
    rng = np.random.default_rng(11)
    for _ in range(4):
        x = [rng.uniform(lo, hi) for lo, hi in chart.domain]
        geo = geometry(chart, x)
        for key, val in {**lemma3_rows(geo), **phi_rows(geo)}.items():
            assert val < 1e-8, key


def test_structure_residuals_keys():
    res = structure_residuals(get_chart("ex5_1_timelike").chart, [0.0, 0.0, 0.0])
    assert set(res) == set(STRUCTURE_KEYS)
    assert max(res.values()) < 1e-12


def test_unknown_lie_target():
    with pytest.raises(ValueError):
        lie_derivative_along_xi(get_chart("ex2_1_g1").chart, [0, 0, 0], "psi")


def test_variance_error_type_is_exported():
    assert issubclass(VarianceError, Exception)
