"""Coordinate charts carrying an indefinite almost paracontact metric structure."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateMetricError, StructureError
from .expr import as_expression
from .jets import Const, Coord, eval_jets
from .tensors import metric_index, numeric_rank

DET_TOL = 1e-12


def residual(diff, *terms):
    """Max-abs of ``diff`` divided by ``max(1, max-abs of the terms)``."""
    scale = 1.0
    for t in terms:
        t = np.asarray(t, dtype=float)
        if t.size:
            scale = max(scale, float(np.max(np.abs(t))))
    diff = np.asarray(diff, dtype=float)
    return float(np.max(np.abs(diff))) / scale if diff.size else 0.0


def _grid(values, shape, coords, what):
    arr = np.empty(shape, dtype=object)
    flat = np.asarray(values, dtype=object)
    if flat.shape != shape:
        raise StructureError(f"{what} must have shape {shape}, got {flat.shape}")
    for idx in np.ndindex(*shape):
        arr[idx] = as_expression(flat[idx], coords)
    return arr


@dataclass(frozen=True, eq=False)
class StructuredChart:
    """Fields ``g_ij``, ``φ^i_j`` (row = upper index), ``ξ^i``, ``η_i`` on a box.

    Components may be given as fields, numbers or expression strings.  The
    metric is symmetrized by identity: ``g[j][i]`` is the very object stored
    at ``g[i][j]`` for ``i <= j``; a lower-triangle entry that differs in
    source text is rejected.
    """

    name: str
    epsilon: int
    coords: tuple
    domain: tuple
    g: np.ndarray
    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    description: str = ""
    _fields: tuple = field(init=False, repr=False)

    def __post_init__(self):
        coords = tuple(str(c) for c in self.coords)
        n = len(coords)
        if n < 1:
            raise StructureError("a chart needs at least one coordinate")
        if len(set(coords)) != n:
            raise StructureError(f"duplicate coordinate names in {coords}")
        if self.epsilon not in (1, -1):
            raise StructureError(f"epsilon must be +1 or -1, got {self.epsilon}")
        domain = tuple((float(lo), float(hi)) for lo, hi in self.domain)
        if len(domain) != n:
            raise StructureError(f"domain has {len(domain)} intervals for {n} coordinates")
        for c, (lo, hi) in zip(coords, domain):
            if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                raise StructureError(f"empty or unbounded domain for {c}: [{lo}, {hi}]")

        g = _grid(self.g, (n, n), coords, "metric")
        for i in range(n):
            for j in range(i):
                if g[i, j] is not g[j, i]:
                    if g[i, j].to_source() != g[j, i].to_source():
                        raise StructureError(
                            f"metric is not symmetric: g[{i}][{j}] = {g[i, j]} "
                            f"but g[{j}][{i}] = {g[j, i]}"
                        )
                    g[i, j] = g[j, i]
        phi = _grid(self.phi, (n, n), coords, "phi")
        xi = _grid(self.xi, (n,), coords, "xi")
        eta = _grid(self.eta, (n,), coords, "eta")
        for arr in (g, phi, xi, eta):
            arr.flags.writeable = False
            for f in arr.flat:
                if f.max_coordinate() >= n:
                    raise StructureError(f"component {f} references an undeclared coordinate")

        set_ = object.__setattr__
        set_(self, "epsilon", int(self.epsilon))
        set_(self, "coords", coords)
        set_(self, "domain", domain)
        set_(self, "g", g)
        set_(self, "phi", phi)
        set_(self, "xi", xi)
        set_(self, "eta", eta)
        set_(self, "_fields", tuple(g.flat) + tuple(phi.flat) + tuple(xi.flat) + tuple(eta.flat))

    @property
    def dim(self):
        return len(self.coords)

    def contains(self, point):
        p = np.asarray(point, dtype=float)
        return p.shape == (self.dim,) and all(lo <= x <= hi for x, (lo, hi) in zip(p, self.domain))

    def components(self):
        """``(label, field)`` pairs for every stored component."""
        n = self.dim
        out = [(f"g[{i}][{j}]", self.g[i, j]) for i in range(n) for j in range(i, n)]
        out += [(f"phi[{i}][{j}]", self.phi[i, j]) for i in range(n) for j in range(n)]
        out += [(f"xi[{i}]", self.xi[i]) for i in range(n)]
        out += [(f"eta[{i}]", self.eta[i]) for i in range(n)]
        return out


@dataclass(frozen=True, eq=False)
class Frame:
    """Component arrays of one chart at one point.

    Derivative indices come first: ``dg[a, i, j] = ∂_a g_ij``,
    ``dddg[a, b, c, i, j] = ∂_a∂_b∂_c g_ij``, ``dphi[a, i, j] = ∂_a φ^i_j``.
    """

    point: np.ndarray
    g: np.ndarray
    dg: np.ndarray
    ddg: np.ndarray
    dddg: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    xi: np.ndarray
    dxi: np.ndarray
    eta: np.ndarray
    deta: np.ndarray
    ginv: np.ndarray
    det: float


def _stack(jets, shape, order):
    n = len(jets[0].grad)
    vals = np.array([j.derivative(order) for j in jets], dtype=float)
    vals = vals.reshape(shape + (n,) * order)
    # move derivative axes to the front
    k = len(shape)
    return np.moveaxis(vals, list(range(k, k + order)), list(range(order)))


def evaluate_frame(chart, point):
    """Jets of every component at ``point`` plus ``g^ij`` and ``|det g|``."""
    x = np.asarray(point, dtype=float)
    n = chart.dim
    if x.shape != (n,):
        raise ValueError(f"point must have {n} coordinates, got shape {x.shape}")
    jets = eval_jets(chart._fields, x)
    ng = n * n
    gj, pj = jets[:ng], jets[ng:2 * ng]
    xj, ej = jets[2 * ng:2 * ng + n], jets[2 * ng + n:]
    g = _stack(gj, (n, n), 0)
    scale = max(1.0, float(np.max(np.abs(g))))
    det = float(np.linalg.det(g))
    if abs(det) < DET_TOL * scale**n:
        raise DegenerateMetricError(f"metric is degenerate at {x.tolist()}: det g = {det:.3e}")
    ginv = np.linalg.inv(g)
    ginv = 0.5 * (ginv + ginv.T)
    arrays = dict(
        g=g,
        dg=_stack(gj, (n, n), 1),
        ddg=_stack(gj, (n, n), 2),
        dddg=_stack(gj, (n, n), 3),
        phi=_stack(pj, (n, n), 0),
        dphi=_stack(pj, (n, n), 1),
        xi=_stack(xj, (n,), 0),
        dxi=_stack(xj, (n,), 1),
        eta=_stack(ej, (n,), 0),
        deta=_stack(ej, (n,), 1),
        ginv=ginv,
    )
    for a in arrays.values():
        a.flags.writeable = False
    x = x.copy()
    x.flags.writeable = False
    return Frame(point=x, det=abs(det), **arrays)


# --- algebraic axioms -----------------------------------------------------------

AXIOM_RESIDUALS = (
    "phi_squared",
    "eta_xi",
    "phi_xi",
    "eta_phi",
    "phi_cubed",
    "compatibility",
    "phi_symmetry",
    "xi_lowering",
    "xi_norm",
)


@dataclass(frozen=True)
class AxiomReport:
    point: tuple
    epsilon: int
    residuals: dict
    rank_phi: int
    index: int
    kernel_gram_min: float
    kernel_nondegenerate: bool

    @property
    def dim(self):
        return len(self.point)

    def structural_max(self):
        return max(self.residuals.values())

    def passes(self, tol=1e-9):
        return (
            self.structural_max() < tol
            and self.rank_phi == self.dim - 1
            and self.kernel_nondegenerate
        )


def kernel_basis(eta):
    """Columns spanning ``ker η``, pivoting on the largest ``|η_p|``."""
    eta = np.asarray(eta, dtype=float)
    n = len(eta)
    p = int(np.argmax(np.abs(eta)))
    if eta[p] == 0.0:
        raise StructureError("eta vanishes; ker eta is not a hyperplane")
    cols = []
    for j in range(n):
        if j == p:
            continue
        v = np.zeros(n)
        v[j] = 1.0
        v[p] = -eta[j] / eta[p]
        cols.append(v)
    return np.array(cols).T.reshape(n, n - 1)


def axiom_residuals(frame, epsilon):
    g, phi, xi, eta = frame.g, frame.phi, frame.xi, frame.eta
    n = len(xi)
    eye = np.eye(n)
    ex = np.outer(xi, eta)  # (η⊗ξ)^i_j = ξ^i η_j
    phi2 = phi @ phi
    gpp = phi.T @ g @ phi
    ee = np.outer(eta, eta)
    return {
        "phi_squared": residual(phi2 - (eye - ex), phi2, eye, ex),
        "eta_xi": residual(eta @ xi - 1.0, eta @ xi, 1.0),
        "phi_xi": residual(phi @ xi, phi, xi),
        "eta_phi": residual(eta @ phi, eta, phi),
        "phi_cubed": residual(phi2 @ phi - phi, phi2 @ phi, phi),
        "compatibility": residual(gpp - g + epsilon * ee, gpp, g, ee),
        "phi_symmetry": residual(g @ phi - (g @ phi).T, g @ phi),
        "xi_lowering": residual(g @ xi - epsilon * eta, g @ xi, eta),
        "xi_norm": residual(xi @ g @ xi - epsilon, xi @ g @ xi, 1.0),
    }


def axiom_report(chart, point, tol=1e-9):
    """Evaluate every algebraic axiom of the structure at ``point``."""
    frame = point if isinstance(point, Frame) else evaluate_frame(chart, point)
    res = axiom_residuals(frame, chart.epsilon)
    g, eta = frame.g, frame.eta
    B = kernel_basis(eta)
    gram = B.T @ g @ B
    ev = np.linalg.eigvalsh(0.5 * (gram + gram.T)) if gram.size else np.array([1.0])
    gmin = float(np.min(np.abs(ev)))
    nondeg = gmin > tol * max(1.0, float(np.max(np.abs(gram))) if gram.size else 1.0)
    return AxiomReport(
        point=tuple(float(v) for v in frame.point),
        epsilon=chart.epsilon,
        residuals=res,
        rank_phi=numeric_rank(frame.phi),
        index=metric_index(g),
        kernel_gram_min=gmin,
        kernel_nondegenerate=bool(nondeg),
    )


# --- product construction -------------------------------------------------------


def _check_product_inputs(J, G, coords, rng, samples=8):
    n = len(coords)
    pts = [np.zeros(n)] + [rng.uniform(-1.0, 1.0, n) for _ in range(samples)]
    for x in pts:
        Jv = np.array([[f.value(x) for f in row] for row in J])
        Gv = np.array([[f.value(x) for f in row] for row in G])
        if residual(Jv @ Jv - np.eye(n), Jv @ Jv, 1.0) > 1e-9:
            raise StructureError(f"J is not an almost product structure at {x.tolist()}: J^2 != I")
        if residual(Gv - Gv.T, Gv) > 1e-12:
            raise StructureError("G is not symmetric")
        scale = max(1.0, float(np.max(np.abs(Gv))))
        if abs(np.linalg.det(Gv)) < DET_TOL * scale**n:
            raise DegenerateMetricError(f"G is degenerate at {x.tolist()}")
        if residual(Jv.T @ Gv @ Jv - Gv, Jv.T @ Gv @ Jv, Gv) > 1e-9:
            raise StructureError(f"G(J., J.) != G at {x.tolist()}")


def from_almost_product(J, G, epsilon, coords=None, name="product", domain=None, seed=0):
    """Structure on ``M × R`` from an almost product structure ``(J, G)`` on ``M``.

    The new coordinate ``t`` is appended; ``ξ = ∂_t``, ``η = dt``,
    ``φ = J ⊕ 0`` and ``g = G + ε dt²``.
    """
    n = len(J)
    if coords is None:
        coords = ("x", "y", "z", "u", "v", "w")[:n] if n <= 6 else tuple(f"x{i}" for i in range(n))
    coords = tuple(coords)
    if "t" in coords:
        raise StructureError("coordinate name 't' is reserved for the product factor")
    Jf = _grid(J, (n, n), coords, "J")
    Gf = _grid(G, (n, n), coords, "G")
    _check_product_inputs(Jf, Gf, coords, np.random.default_rng(seed))
    m = n + 1
    zero, one = Const(0.0), Const(1.0)
    g = np.full((m, m), zero, dtype=object)
    phi = np.full((m, m), zero, dtype=object)
    g[:n, :n] = Gf
    g[n, n] = Const(float(epsilon))
    phi[:n, :n] = Jf
    unit = np.array([zero] * n + [one], dtype=object)
    box = tuple(domain) if domain is not None else ((-1.0, 1.0),) * n
    return StructuredChart(
        name=name,
        epsilon=epsilon,
        coords=coords + ("t",),
        domain=box + ((-1.0, 1.0),),
        g=g,
        phi=phi,
        xi=unit,
        eta=unit.copy(),
        description=f"product of a {n}-dimensional almost product manifold with a line",
    )


def coordinate_fields(chart):
    return tuple(Coord(i, c) for i, c in enumerate(chart.coords))
