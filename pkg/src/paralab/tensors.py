"""Small dense tensors with explicit index variance.

Zero tests are componentwise (max-abs) throughout: under an indefinite
metric a nonzero tensor can have zero norm.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetricError, VarianceError

UP = "up"
DOWN = "down"


@dataclass(frozen=True)
class LabeledTensor:
    components: np.ndarray
    variances: tuple

    def __post_init__(self):
        c = np.array(self.components, dtype=float)
        v = tuple(self.variances)
        if any(x not in (UP, DOWN) for x in v):
            raise VarianceError(f"variances must be '{UP}' or '{DOWN}', got {v}")
        if c.ndim != len(v):
            raise VarianceError(f"{c.ndim} axes but {len(v)} variances")
        if c.ndim and len(set(c.shape)) != 1:
            raise VarianceError(f"all axes must have equal length, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("tensor components must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "components", c)
        object.__setattr__(self, "variances", v)

    @property
    def dim(self):
        return self.components.shape[0] if self.components.ndim else 0

    @property
    def rank(self):
        return len(self.variances)

    def max_abs(self):
        return float(np.max(np.abs(self.components))) if self.components.size else 0.0

    def is_zero(self, tol=1e-9, scale=1.0):
        return self.max_abs() <= tol * max(1.0, scale)

    def __sub__(self, other):
        if self.variances != other.variances:
            raise VarianceError("variance mismatch")
        return LabeledTensor(self.components - other.components, self.variances)

    def __add__(self, other):
        if self.variances != other.variances:
            raise VarianceError("variance mismatch")
        return LabeledTensor(self.components + other.components, self.variances)


def identity(n):
    return LabeledTensor(np.eye(n), (UP, DOWN))


def _check_slot(t, slot):
    if not 0 <= slot < t.rank:
        raise VarianceError(f"slot {slot} out of range for a rank-{t.rank} tensor")


def contract(t, up_slot, down_slot):
    """Trace the paired slots ``up_slot`` (contravariant) and ``down_slot``."""
    _check_slot(t, up_slot)
    _check_slot(t, down_slot)
    if up_slot == down_slot:
        raise VarianceError("cannot contract a slot with itself")
    if t.variances[up_slot] != UP or t.variances[down_slot] != DOWN:
        raise VarianceError(
            f"slot {up_slot} must be up and slot {down_slot} down, got {t.variances}"
        )
    comps = np.trace(t.components, axis1=up_slot, axis2=down_slot)
    variances = tuple(v for i, v in enumerate(t.variances) if i not in (up_slot, down_slot))
    return LabeledTensor(comps, variances)


def move_index(t, slot, metric, direction):
    """Lower (with ``g_ij``) or raise (with ``g^ij``) one slot of ``t``."""
    _check_slot(t, slot)
    m = metric.components if isinstance(metric, LabeledTensor) else np.asarray(metric, float)
    if direction == "lower":
        if t.variances[slot] != UP:
            raise VarianceError(f"slot {slot} is already covariant")
        if isinstance(metric, LabeledTensor) and metric.variances != (DOWN, DOWN):
            raise VarianceError("lowering needs a (0,2) metric")
        new = DOWN
    elif direction == "raise":
        if t.variances[slot] != DOWN:
            raise VarianceError(f"slot {slot} is already contravariant")
        if isinstance(metric, LabeledTensor) and metric.variances != (UP, UP):
            raise VarianceError("raising needs a (2,0) inverse metric")
        new = UP
    else:
        raise ValueError("direction must be 'raise' or 'lower'")
    n = m.shape[0]
    scale = max(1.0, float(np.max(np.abs(m))))
    if abs(np.linalg.det(m)) < 1e-12 * scale**n:
        raise DegenerateMetricError("singular metric")
    moved = np.tensordot(m, t.components, axes=([1], [slot]))
    moved = np.moveaxis(moved, 0, slot)
    variances = t.variances[:slot] + (new,) + t.variances[slot + 1:]
    return LabeledTensor(moved, variances)


def _default_tol(m, tol):
    return (1e-9 if tol is None else tol) * max(1.0, float(np.max(np.abs(m))) if m.size else 0.0)


def metric_index(m, tol=None):
    """Number of negative eigenvalues of the symmetric matrix ``m``.

    ``tol`` is relative to ``max(1, max|m_ij|)``; an eigenvalue inside
    ``(-tol, tol)`` means the metric is degenerate.
    """
    m = np.asarray(m, dtype=float)
    t = _default_tol(m, tol)
    if np.max(np.abs(m - m.T), initial=0.0) > t:
        raise ValueError("metric is not symmetric")
    ev = np.linalg.eigvalsh(0.5 * (m + m.T))
    if np.any(np.abs(ev) < t):
        raise DegenerateMetricError(f"degenerate metric: eigenvalues {ev}")
    return int(np.sum(ev < 0.0))


def numeric_rank(m, tol=None):
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0
    mx = float(np.max(np.abs(m)))
    if mx == 0.0:
        return 0
    sv = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(sv > (1e-9 if tol is None else tol) * mx))


# --- covariant derivative of a component array ------------------------------

_LETTERS = string.ascii_lowercase.replace("a", "").replace("z", "")


def covariant_derivative(values, partials, variances, gamma):
    """Components of ``∇T`` from ``T``, its partials and Christoffel symbols.

    ``partials[a, ...]`` is ``∂_a T[...]`` and ``gamma[k, i, j]`` is
    ``Γ^k_ij``.  The differentiation index is the first axis of the result.
    """
    values = np.asarray(values, dtype=float)
    out = np.array(partials, dtype=float, copy=True)
    slots = _LETTERS[: values.ndim]
    for s, var in enumerate(variances):
        with_dummy = slots[:s] + "z" + slots[s + 1:]
        if var == UP:
            out += np.einsum(f"{slots[s]}az,{with_dummy}->a{slots}", gamma, values)
        else:
            out -= np.einsum(f"za{slots[s]},{with_dummy}->a{slots}", gamma, values)
    return out
