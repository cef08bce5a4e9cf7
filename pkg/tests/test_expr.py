import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paralab.errors import EvaluationError, ParseError, UnknownFunctionError, UnknownIdentifierError
from paralab.expr import MAX_DEPTH, parse_expression, tokenize
from paralab.jets import Apply, Const, Coord, Mul, Neg, Pow, ScalarField

XYZ = ("x", "y", "z")


def test_exp_parses_to_expected_tree():
    assert parse_expression("exp(2*z)", XYZ) == Apply("exp", Mul(Const(2.0), Coord(2, "z")))


def test_power_binds_tighter_than_unary_minus():
    t = parse_expression("-y^2", XYZ)
    assert t == Neg(Pow(Coord(1, "y"), Const(2.0)))
    assert t.value([0.0, 3.0, 0.0]) == -9.0


def test_power_is_right_associative():
    assert parse_expression("2^3^2", XYZ).value([0, 0, 0]) == pytest.approx(2.0**9)
    assert parse_expression("2^-1", XYZ).value([0, 0, 0]) == 0.5


@pytest.mark.parametrize(
    "src,expected",
    [("1 - 2 - 3", -4.0), ("8/4/2", 1.0), ("2*3+4", 10.0), ("2*(3+4)", 14.0), ("1.5e1", 15.0),
     (" x  +y* z ", 0.5 + 2.0 * -1.0), ("sqrt(4) + log(1)", 2.0), ("-(-x)", 0.5)],
)
def test_evaluation(src, expected):
    assert parse_expression(src, XYZ).value([0.5, 2.0, -1.0]) == pytest.approx(expected)


def test_differential_notation_is_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as exc:
        parse_expression("dz - y*dx", XYZ)
    assert "(at byte 0)" in str(exc.value)


def test_unknown_function():
    with pytest.raises(UnknownFunctionError):
        parse_expression("sec(x)", XYZ)


def test_function_name_needs_parenthesis():
    with pytest.raises(ParseError):
        parse_expression("exp + 1", XYZ)


@pytest.mark.parametrize("src", ["", "   ", "x +", "(x", "x)", "2..3", "x y", "0x10", "1e999", "*x", "x^"])
def test_syntax_errors(src):
    with pytest.raises(ParseError):
        parse_expression(src, XYZ)


def test_error_offset_points_at_offender():
    with pytest.raises(ParseError) as exc:
        parse_expression("x + é", XYZ)
    assert "(at byte 4)" in str(exc.value)
    with pytest.raises(UnknownIdentifierError) as exc:
        parse_expression("x*(y + w)", XYZ)
    assert "(at byte 7)" in str(exc.value)


def test_deep_nesting_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_expression("(" * (MAX_DEPTH + 5) + "x" + ")" * (MAX_DEPTH + 5), XYZ)
    with pytest.raises(ParseError):
        parse_expression("-" * 5000 + "x", XYZ)


def test_non_string_rejected():
    with pytest.raises(ParseError):
        parse_expression(3.0, XYZ)


def test_tokenize_ends_with_end_token():
    assert tokenize("x+1")[-1][0] == "end"


_atoms = st.sampled_from(["x", "y", "z", "1", "2.5", "0.5e-1"])


def _exprs():
    return st.recursive(
        _atoms,
        lambda inner: st.one_of(
            st.tuples(inner, st.sampled_from(["+", "-", "*", "/", "^"]), inner).map(lambda t: f"({t[0]}){t[1]}({t[2]})"),
            st.tuples(st.sampled_from(["exp", "sin", "cos", "tanh", "sinh", "cosh"]), inner).map(lambda t: f"{t[0]}({t[1]})"),
            inner.map(lambda s: f"-{s}"),
        ),
        max_leaves=12,
    )


@settings(max_examples=300, deadline=None)
@given(_exprs())
def test_print_then_reparse_is_structurally_identical(src):
    tree = parse_expression(src, XYZ)
    again = parse_expression(tree.to_source(), XYZ)
    assert again == tree
    assert again.to_source() == tree.to_source()


def test_fuzz_ten_thousand_inputs_never_crash():
    rng = np.random.default_rng(2024)
    alphabet = list("xyz0123456789.+-*/^() eE") + ["exp", "sin", "sqrt", "log", "dz", "\x00", "é", "∞"]
    parsed = errors = 0
    for k in range(10_000):
        if k % 4 == 0:
            src = bytes(rng.integers(0, 256, size=int(rng.integers(0, 24)), dtype=np.uint8)).decode("latin-1")
        else:
            src = "".join(rng.choice(alphabet, size=int(rng.integers(0, 20))))
        try:
            out = parse_expression(src, XYZ)
        except ParseError:
            errors += 1
        else:
            assert isinstance(out, ScalarField)
            parsed += 1
    assert parsed + errors == 10_000
    assert parsed > 0 and errors > 0


def test_out_of_domain_evaluation_raises():
    with pytest.raises(EvaluationError):
        parse_expression("log(x)", XYZ).value([-1.0, 0.0, 0.0])
