"""Scalar fields on R^n with exact partial derivatives through order 3.

A :class:`ScalarField` is an immutable expression tree.  Evaluating it with
:func:`eval_jet` propagates truncated Taylor coefficients (a :class:`Jet`)
through the tree, so derivatives carry no truncation error.  The plain float
path :meth:`ScalarField.value` never touches jet arithmetic and is what the
finite-difference oracle :func:`fd_residual` is built on.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import EvaluationError

__all__ = [
    "Jet",
    "ScalarField",
    "Const",
    "Coord",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Apply",
    "FUNCTIONS",
    "as_field",
    "coordinates",
    "eval_jet",
    "eval_jets",
    "fd_derivative",
    "fd_residual",
]


def _frozen(a):
    a.flags.writeable = False
    return a


class Jet:
    """Value and partial derivatives through third order at one point."""

    __slots__ = ("value", "grad", "hess", "third")

    def __init__(self, value, grad, hess, third):
        self.value = float(value)
        self.grad = _frozen(np.ascontiguousarray(grad, dtype=float))
        self.hess = _frozen(np.ascontiguousarray(hess, dtype=float))
        self.third = _frozen(np.ascontiguousarray(third, dtype=float))

    @property
    def n(self):
        return self.grad.shape[0]

    @classmethod
    def constant(cls, c, n):
        return cls(c, np.zeros(n), np.zeros((n, n)), np.zeros((n, n, n)))

    @classmethod
    def coordinate(cls, index, x, n):
        g = np.zeros(n)
        g[index] = 1.0
        return cls(x, g, np.zeros((n, n)), np.zeros((n, n, n)))

    def derivative(self, order):
        return (self.value, self.grad, self.hess, self.third)[order]

    def scale(self, c):
        return Jet(c * self.value, c * self.grad, c * self.hess, c * self.third)

    def compose(self, d0, d1, d2, d3):
        g, h, t = _backend.compose(self.grad, self.hess, self.third, d1, d2, d3)
        return Jet(d0, g, h, t)

    def __add__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.value + other, self.grad, self.hess, self.third)
        return Jet(
            self.value + other.value,
            self.grad + other.grad,
            self.hess + other.hess,
            self.third + other.third,
        )

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.value, -self.grad, -self.hess, -self.third)

    def __sub__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.value - other, self.grad, self.hess, self.third)
        return Jet(
            self.value - other.value,
            self.grad - other.grad,
            self.hess - other.hess,
            self.third - other.third,
        )

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return self.scale(other)
        v, g, h, t = _backend.mul(
            self.value, self.grad, self.hess, self.third,
            other.value, other.grad, other.hess, other.third,
        )
        return Jet(v, g, h, t)

    __rmul__ = __mul__

    def reciprocal(self):
        v = self.value
        if v == 0.0:
            raise EvaluationError("division by zero")
        r = 1.0 / v
        return self.compose(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self.scale(1.0 / other)
        return self * other.reciprocal()

    def __repr__(self):
        return f"Jet(value={self.value!r}, n={self.n})"


# --- univariate function library -------------------------------------------
#
# Each entry maps a value to (u, u', u'', u''') and raises ValueError outside
# the function's domain.


def _exp(x):
    e = math.exp(x)
    return e, e, e, e


def _log(x):
    if x <= 0.0:
        raise ValueError("log of non-positive value")
    r = 1.0 / x
    return math.log(x), r, -r * r, 2.0 * r * r * r


def _sin(x):
    s, c = math.sin(x), math.cos(x)
    return s, c, -s, -c


def _cos(x):
    s, c = math.sin(x), math.cos(x)
    return c, -s, -c, s


def _tan(x):
    if math.cos(x) == 0.0:
        raise ValueError("tan at a pole")
    t = math.tan(x)
    s = 1.0 + t * t
    return t, s, 2.0 * t * s, 2.0 * s * s + 4.0 * t * t * s


def _sinh(x):
    s, c = math.sinh(x), math.cosh(x)
    return s, c, s, c


def _cosh(x):
    s, c = math.sinh(x), math.cosh(x)
    return c, s, c, s


def _tanh(x):
    t = math.tanh(x)
    s = 1.0 - t * t
    return t, s, -2.0 * t * s, -2.0 * s * s + 4.0 * t * t * s


def _sqrt(x):
    if x <= 0.0:
        raise ValueError("sqrt of non-positive value")
    r = math.sqrt(x)
    return r, 0.5 / r, -0.25 / (r * r * r), 0.375 / (r * r * r * r * r)


FUNCTIONS = {
    "exp": _exp,
    "log": _log,
    "sin": _sin,
    "cos": _cos,
    "tan": _tan,
    "sinh": _sinh,
    "cosh": _cosh,
    "tanh": _tanh,
    "sqrt": _sqrt,
}


# --- expression trees --------------------------------------------------------

# printing precedence: sums < products < unary minus < powers < atoms
_P_SUM, _P_PROD, _P_NEG, _P_POW, _P_ATOM = 1, 2, 3, 4, 5


def as_field(x):
    if isinstance(x, ScalarField):
        return x
    if isinstance(x, (int, float, np.integer, np.floating)) and not isinstance(x, bool):
        return Const(float(x))
    raise TypeError(f"cannot convert {type(x).__name__} to a scalar field")


class ScalarField:
    """Base class of expression nodes.  Subclasses are frozen dataclasses."""

    precedence = _P_ATOM

    def __add__(self, other):
        return Add(self, as_field(other))

    def __radd__(self, other):
        return Add(as_field(other), self)

    def __sub__(self, other):
        return Sub(self, as_field(other))

    def __rsub__(self, other):
        return Sub(as_field(other), self)

    def __mul__(self, other):
        return Mul(self, as_field(other))

    def __rmul__(self, other):
        return Mul(as_field(other), self)

    def __truediv__(self, other):
        return Div(self, as_field(other))

    def __rtruediv__(self, other):
        return Div(as_field(other), self)

    def __pow__(self, other):
        return Pow(self, as_field(other))

    def __neg__(self):
        return Neg(self)

    # evaluation
    def value(self, point):
        """Plain float evaluation (no derivatives)."""
        return self._value(np.asarray(point, dtype=float))

    def jet(self, point):
        return eval_jet(self, point)

    def max_coordinate(self):
        """Largest coordinate index referenced, or -1 for constants."""
        return max((c.max_coordinate() for c in self.children()), default=-1)

    def children(self):
        return ()

    def is_constant(self):
        return self.max_coordinate() < 0

    def to_source(self):
        return self._src()

    def __str__(self):
        return self._src()

    def _paren(self, min_prec):
        s = self._src()
        return f"({s})" if self.precedence < min_prec else s

    def _fail(self, reason):
        raise EvaluationError(f"{reason} in '{self._src()}'", node=self)


@dataclass(frozen=True, repr=False)
class Const(ScalarField):
    c: float

    def _value(self, x):
        return self.c

    def _jet(self, x, memo):
        return Jet.constant(self.c, len(x))

    def diff(self, i):
        return ZERO

    def _src(self):
        c = self.c
        if c != c or c in (math.inf, -math.inf):
            raise ValueError("non-finite constant cannot be printed")
        if c.is_integer() and abs(c) < 1e15:
            s = str(int(c))
        else:
            s = repr(c)
        return f"({s})" if c < 0 else s

    def __repr__(self):
        return f"Const({self.c!r})"


ZERO = Const(0.0)
ONE = Const(1.0)


@dataclass(frozen=True, repr=False)
class Coord(ScalarField):
    index: int
    name: str

    def max_coordinate(self):
        return self.index

    def _value(self, x):
        return float(x[self.index])

    def _jet(self, x, memo):
        n = len(x)
        if self.index >= n:
            raise ValueError(
                f"coordinate '{self.name}' (index {self.index}) outside a {n}-dimensional point"
            )
        return Jet.coordinate(self.index, x[self.index], n)

    def diff(self, i):
        return ONE if i == self.index else ZERO

    def _src(self):
        return self.name

    def __repr__(self):
        return f"Coord({self.index}, {self.name!r})"


@dataclass(frozen=True, repr=False)
class Neg(ScalarField):
    arg: ScalarField
    precedence = _P_NEG

    def children(self):
        return (self.arg,)

    def _value(self, x):
        return -self.arg._value(x)

    def _jet(self, x, memo):
        return -_eval(self.arg, x, memo)

    def diff(self, i):
        return _neg(self.arg.diff(i))

    def _src(self):
        if isinstance(self.arg, Const):
            return f"-({self.arg._src()})"
        return "-" + self.arg._paren(_P_NEG)

    def __repr__(self):
        return f"Neg({self.arg!r})"


@dataclass(frozen=True, repr=False)
class _Binary(ScalarField):
    left: ScalarField
    right: ScalarField

    op = "?"

    def children(self):
        return (self.left, self.right)

    def _src(self):
        # left-associative: the right operand binds one level tighter
        return f"{self.left._paren(self.precedence)}{self.op}{self.right._paren(self.precedence + 1)}"

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class Add(_Binary):
    op = " + "
    precedence = _P_SUM

    def _value(self, x):
        return self.left._value(x) + self.right._value(x)

    def _jet(self, x, memo):
        return _eval(self.left, x, memo) + _eval(self.right, x, memo)

    def diff(self, i):
        return _add(self.left.diff(i), self.right.diff(i))


class Sub(_Binary):
    op = " - "
    precedence = _P_SUM

    def _value(self, x):
        return self.left._value(x) - self.right._value(x)

    def _jet(self, x, memo):
        return _eval(self.left, x, memo) - _eval(self.right, x, memo)

    def diff(self, i):
        return _sub(self.left.diff(i), self.right.diff(i))


class Mul(_Binary):
    op = "*"
    precedence = _P_PROD

    def _value(self, x):
        return self.left._value(x) * self.right._value(x)

    def _jet(self, x, memo):
        a = _eval(self.left, x, memo)
        b = _eval(self.right, x, memo)
        # constant factors scale exactly, keeping linear combinations exact
        if isinstance(self.left, Const):
            return b.scale(a.value)
        if isinstance(self.right, Const):
            return a.scale(b.value)
        return a * b

    def diff(self, i):
        return _add(_mul(self.left.diff(i), self.right), _mul(self.left, self.right.diff(i)))


class Div(_Binary):
    op = "/"
    precedence = _P_PROD

    def _value(self, x):
        d = self.right._value(x)
        if d == 0.0:
            self._fail("division by zero")
        return self.left._value(x) / d

    def _jet(self, x, memo):
        a = _eval(self.left, x, memo)
        b = _eval(self.right, x, memo)
        if b.value == 0.0:
            self._fail("division by zero")
        if isinstance(self.right, Const):
            return a.scale(1.0 / b.value)
        return a * b.reciprocal()

    def diff(self, i):
        num = _sub(_mul(self.left.diff(i), self.right), _mul(self.left, self.right.diff(i)))
        return _div(num, _pow(self.right, Const(2.0)))


class Pow(_Binary):
    """``base ^ exponent``.

    Integer constant exponents are expanded into repeated multiplication and
    accept any base; other exponents require a positive base.
    """

    precedence = _P_POW

    def _integer_exponent(self):
        if isinstance(self.right, Const) and self.right.c.is_integer() and abs(self.right.c) <= 64:
            return int(self.right.c)
        return None

    def _value(self, x):
        b = self.left._value(x)
        k = self._integer_exponent()
        if k is not None:
            if k < 0 and b == 0.0:
                self._fail("zero to a negative power")
            r = 1.0
            for _ in range(abs(k)):
                r *= b
            return 1.0 / r if k < 0 else r
        if b <= 0.0:
            self._fail("non-positive base with non-integer exponent")
        return math.exp(self.right._value(x) * math.log(b))

    def _jet(self, x, memo):
        b = _eval(self.left, x, memo)
        k = self._integer_exponent()
        if k is not None:
            if k == 0:
                return Jet.constant(1.0, len(x))
            if k < 0 and b.value == 0.0:
                self._fail("zero to a negative power")
            r = b
            for _ in range(abs(k) - 1):
                r = r * b
            return r.reciprocal() if k < 0 else r
        if b.value <= 0.0:
            self._fail("non-positive base with non-integer exponent")
        if isinstance(self.right, Const):
            p = self.right.c
            v = b.value
            u0 = v**p
            return b.compose(
                u0,
                p * v ** (p - 1.0),
                p * (p - 1.0) * v ** (p - 2.0),
                p * (p - 1.0) * (p - 2.0) * v ** (p - 3.0),
            )
        e = _eval(self.right, x, memo)
        w = e * b.compose(*_log(b.value))
        return w.compose(*_exp(w.value))

    def diff(self, i):
        db = self.left.diff(i)
        if isinstance(self.right, Const):
            p = self.right.c
            return _mul(_mul(Const(p), _pow(self.left, Const(p - 1.0))), db)
        de = self.right.diff(i)
        inner = _add(_mul(de, Apply("log", self.left)), _div(_mul(self.right, db), self.left))
        return _mul(self, inner)

    def _src(self):
        # right-associative; the exponent may carry a unary minus
        return f"{self.left._paren(_P_ATOM)}^{self.right._paren(_P_NEG)}"


@dataclass(frozen=True, repr=False)
class Apply(ScalarField):
    func: str
    arg: ScalarField

    def __post_init__(self):
        if self.func not in FUNCTIONS:
            raise ValueError(f"unknown function '{self.func}'")

    def children(self):
        return (self.arg,)

    def _value(self, x):
        try:
            return FUNCTIONS[self.func](self.arg._value(x))[0]
        except (ValueError, OverflowError) as exc:
            self._fail(str(exc))

    def _jet(self, x, memo):
        a = _eval(self.arg, x, memo)
        try:
            d = FUNCTIONS[self.func](a.value)
        except (ValueError, OverflowError) as exc:
            self._fail(str(exc))
        return a.compose(*d)

    def diff(self, i):
        u = self.arg
        du = u.diff(i)
        if du == ZERO:
            return ZERO
        f = self.func
        if f == "exp":
            outer = self
        elif f == "log":
            return _div(du, u)
        elif f == "sin":
            outer = Apply("cos", u)
        elif f == "cos":
            outer = _neg(Apply("sin", u))
        elif f == "tan":
            outer = _add(ONE, _pow(self, Const(2.0)))
        elif f == "sinh":
            outer = Apply("cosh", u)
        elif f == "cosh":
            outer = Apply("sinh", u)
        elif f == "tanh":
            outer = _sub(ONE, _pow(self, Const(2.0)))
        else:  # sqrt
            return _div(du, _mul(Const(2.0), self))
        return _mul(outer, du)

    def _src(self):
        return f"{self.func}({self.arg._src()})"

    def __repr__(self):
        return f"Apply({self.func!r}, {self.arg!r})"


# simplifying constructors used by symbolic differentiation

def _neg(a):
    if isinstance(a, Const):
        return Const(-a.c) if a.c != 0.0 else ZERO
    return Neg(a)


def _add(a, b):
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.c + b.c)
    return Add(a, b)


def _sub(a, b):
    if b == ZERO:
        return a
    if a == ZERO:
        return _neg(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.c - b.c)
    return Sub(a, b)


def _mul(a, b):
    if a == ZERO or b == ZERO:
        return ZERO
    if a == ONE:
        return b
    if b == ONE:
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.c * b.c)
    if isinstance(b, Const):
        a, b = b, a
    return Mul(a, b)


def _div(a, b):
    if a == ZERO:
        return ZERO
    if b == ONE:
        return a
    return Div(a, b)


def _pow(a, b):
    if b == ONE:
        return a
    if b == ZERO:
        return ONE
    return Pow(a, b)


def coordinates(names):
    """Coordinate projection fields for the given names, in order."""
    return tuple(Coord(i, name) for i, name in enumerate(names))


def _eval(node, x, memo):
    key = id(node)
    jet = memo.get(key)
    if jet is None:
        jet = node._jet(x, memo)
        memo[key] = jet
    return jet


def eval_jet(field, point):
    """Evaluate ``field`` and its partial derivatives through order 3."""
    x = np.asarray(point, dtype=float)
    if x.ndim != 1:
        raise ValueError("point must be a 1-d array")
    if field.max_coordinate() >= len(x):
        raise ValueError(
            f"field references coordinate {field.max_coordinate()} but point has dimension {len(x)}"
        )
    return _eval(field, x, {})


def eval_jets(fields, point):
    """Evaluate several fields at one point, sharing common subtrees."""
    x = np.asarray(point, dtype=float)
    if x.ndim != 1:
        raise ValueError("point must be a 1-d array")
    memo = {}
    out = []
    for f in fields:
        if f.max_coordinate() >= len(x):
            raise ValueError(
                f"field references coordinate {f.max_coordinate()} but point has dimension {len(x)}"
            )
        out.append(_eval(f, x, memo))
    return out


# --- finite-difference oracle -----------------------------------------------


def _canonical_tuples(n, order):
    return list(itertools.combinations_with_replacement(range(n), order))


def fd_derivative(field, point, index_tuple, step):
    """Central finite-difference estimate of one partial derivative.

    Uses the tensor-product stencil: one centred difference of width
    ``2*step`` per index, so ``∂_i∂_j`` probes offsets up to ``2*step``.
    """
    x = np.asarray(point, dtype=float)
    k = len(index_tuple)
    total = 0.0
    for signs in itertools.product((1.0, -1.0), repeat=k):
        y = x.copy()
        for s, i in zip(signs, index_tuple):
            y[i] += s * step
        total += math.prod(signs) * field.value(y)
    return total / (2.0 * step) ** k


def fd_residual(field, point, order, step):
    """Max over index tuples of |jet derivative - central difference|."""
    if step <= 0.0:
        raise ValueError("step must be positive")
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    x = np.asarray(point, dtype=float)
    jet = eval_jet(field, x)
    d = jet.derivative(order)
    worst = 0.0
    for idx in _canonical_tuples(len(x), order):
        worst = max(worst, abs(d[idx] - fd_derivative(field, x, idx, step)))
    return worst
