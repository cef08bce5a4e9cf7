import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paralab import _backend, _jetcore_py
from paralab.expr import parse_expression
from paralab.gallery import get_chart, list_charts
from paralab.jets import Coord, Jet, eval_jet, eval_jets, fd_derivative, fd_residual

XYZ = ("x", "y", "z")


def test_exp_jet_matches_closed_form():
    f = parse_expression("exp(2*z)", XYZ)
    j = eval_jet(f, [0.1, -0.2, 0.3])
    e = math.exp(0.6)
    assert j.value == pytest.approx(e)
    assert np.allclose(j.grad, [0, 0, 2 * e])
    assert j.hess[2, 2] == pytest.approx(4 * e)
    assert j.third[2, 2, 2] == pytest.approx(8 * e)
    assert np.count_nonzero(j.third) == 1


def test_product_rule_third_order():
    f = parse_expression("x^2*y*sin(z)", XYZ)
    x, y, z = 0.7, -1.3, 0.4
    j = eval_jet(f, [x, y, z])
    # d^3/dx dy dz of x^2 y sin z = 2x cos z
    assert j.third[0, 1, 2] == pytest.approx(2 * x * math.cos(z))
    assert j.third[2, 1, 0] == j.third[0, 1, 2]


def test_derivative_arrays_are_symmetric():
    f = parse_expression("tanh(x*y - z)/(2 + cos(x))", XYZ)
    j = eval_jet(f, [0.3, 0.5, -0.2])
    assert np.array_equal(j.hess, j.hess.T)
    for perm in [(0, 2, 1), (1, 0, 2), (2, 1, 0)]:
        assert np.array_equal(j.third, j.third.transpose(perm))


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        eval_jet(Coord(2, "z"), [0.0, 1.0])


def test_eval_jets_shares_subtrees_and_agrees():
    fs = [parse_expression(s, XYZ) for s in ("exp(x)*y", "exp(x)+z", "y")]
    pt = [0.2, 0.4, 0.6]
    for a, b in zip(eval_jets(fs, pt), [eval_jet(f, pt) for f in fs]):
        assert a.value == b.value
        assert np.array_equal(a.third, b.third)


@pytest.mark.parametrize("name", list_charts())
def test_gallery_components_match_finite_differences(name):
    chart = get_chart(name).chart
    rng = np.random.default_rng(7)
    lo = np.array([a for a, _ in chart.domain])
    hi = np.array([b for _, b in chart.domain])
    for _ in range(3):
        x = lo + (hi - lo) * rng.uniform(0.2, 0.8, size=chart.dim)
        for label, f in chart.components():
            j = eval_jet(f, x)
            for order, step, tol in ((1, 1e-4, 1e-6), (2, 1e-4, 1e-6), (3, 1e-3, 1e-3)):
                scale = max(1.0, float(np.max(np.abs(j.derivative(order)))))
                assert fd_residual(f, x, order, step) < tol * scale, (label, order)


def test_fd_derivative_stencil():
    f = parse_expression("x^3", ("x",))
    assert fd_derivative(f, [1.0], (0,), 1e-4) == pytest.approx(3.0, rel=1e-7)


def _jet(rng, n):
    t = rng.normal(size=(n, n, n))
    t = sum(t.transpose(p) for p in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]) / 6
    h = rng.normal(size=(n, n))
    return float(rng.normal()), rng.normal(size=n), (h + h.T) / 2, t


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10_000))
def test_backends_agree(n, seed):
    if _backend.NAME != "cython":
        pytest.skip("compiled extension not built")
    from paralab import _jetcore

    rng = np.random.default_rng(seed)
    a, b = _jet(rng, n), _jet(rng, n)
    d = rng.normal(size=3)
    for x, y in zip(_jetcore.mul(*a, *b), _jetcore_py.mul(*a, *b)):
        assert np.allclose(x, y, rtol=1e-13, atol=1e-13)
    for x, y in zip(_jetcore.compose(a[1], a[2], a[3], *d), _jetcore_py.compose(a[1], a[2], a[3], *d)):
        assert np.allclose(x, y, rtol=1e-13, atol=1e-13)


def test_jet_type_is_exported():
    assert Jet.constant(2.0, 3).value == 2.0
