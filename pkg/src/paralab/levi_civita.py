"""Levi-Civita connection and the first-order tensors of the structure.

Every public function takes ``(chart, point)``.  A :class:`PointGeometry`
may be passed instead of the chart (with ``point`` omitted) to share the
jet evaluation and connection between several queries at one point.

Array conventions (derivative index first):

* ``gamma[k, i, j] = Γ^k_ij``, ``dgamma[m, k, i, j] = ∂_m Γ^k_ij``;
* ``nabla_xi[a, k] = (∇_a ξ)^k``, ``nabla_eta[a, j] = (∇_a η)_j``,
  ``nabla_phi[a, k, j] = (∇_a φ)^k_j``;
* ``nij[k, i, j] = [φ,φ](∂_i, ∂_j)^k``, ``n3[k, j] = (£_ξ φ)^k_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .charts import Frame, StructuredChart, evaluate_frame, residual
from .expr import as_expression
from .jets import eval_jets
from .tensors import DOWN, UP, LabeledTensor, covariant_derivative as _nabla


def _sym(a):
    """Exact symmetrization in the last two axes."""
    return 0.5 * (a + np.swapaxes(a, -1, -2))


@dataclass(frozen=True)
class ConnectionFrame:
    point: np.ndarray
    gamma: np.ndarray
    dgamma: np.ndarray
    ddgamma: np.ndarray
    metric_compatibility: float


@dataclass(frozen=True)
class NormalityTensors:
    N1: np.ndarray
    N2: np.ndarray
    N3: np.ndarray
    N4: np.ndarray
    dEta: np.ndarray
    nijPhi: np.ndarray


def connection_from_frame(f: Frame) -> ConnectionFrame:
    g, ginv, dg, ddg, dddg = f.g, f.ginv, f.dg, f.ddg, f.dddg
    # C[l, i, j] = ∂_i g_jl + ∂_j g_il - ∂_l g_ij
    C = np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg
    dC = np.einsum("mijl->mlij", ddg) + np.einsum("mjil->mlij", ddg) - ddg
    ddC = np.einsum("pmijl->pmlij", dddg) + np.einsum("pmjil->pmlij", dddg) - dddg

    dginv = -np.einsum("ka,mab,bl->mkl", ginv, dg, ginv)
    ddginv = -(
        np.einsum("pka,mab,bl->pmkl", dginv, dg, ginv)
        + np.einsum("ka,pmab,bl->pmkl", ginv, ddg, ginv)
        + np.einsum("ka,mab,pbl->pmkl", ginv, dg, dginv)
    )

    gamma = _sym(0.5 * np.einsum("kl,lij->kij", ginv, C))
    dgamma = _sym(0.5 * (np.einsum("mkl,lij->mkij", dginv, C) + np.einsum("kl,mlij->mkij", ginv, dC)))
    ddgamma = 0.5 * (
        np.einsum("pmkl,lij->pmkij", ddginv, C)
        + np.einsum("mkl,plij->pmkij", dginv, dC)
        + np.einsum("pkl,mlij->pmkij", dginv, dC)
        + np.einsum("kl,pmlij->pmkij", ginv, ddC)
    )
    ddgamma = _sym(0.5 * (ddgamma + np.swapaxes(ddgamma, 0, 1)))

    ng = _nabla(g, dg, (DOWN, DOWN), gamma)
    compat = residual(ng, dg, np.einsum("kai,kj->aij", gamma, g))
    for a in (gamma, dgamma, ddgamma):
        a.flags.writeable = False
    return ConnectionFrame(f.point, gamma, dgamma, ddgamma, compat)


class PointGeometry:
    """Lazily computed differential data of one chart at one point.

    Instances are confined to the thread that created them.
    """

    def __init__(self, chart: StructuredChart, point):
        self.chart = chart
        self.frame = point if isinstance(point, Frame) else evaluate_frame(chart, point)
        self.n = chart.dim
        self.eps = chart.epsilon
        self._memo = {}

    def memo(self, key, build):
        if key not in self._memo:
            self._memo[key] = build()
        return self._memo[key]

    @property
    def point(self):
        return self.frame.point

    @cached_property
    def connection(self):
        return connection_from_frame(self.frame)

    @property
    def gamma(self):
        return self.connection.gamma

    # covariant derivatives of the structure tensors
    @cached_property
    def nabla_g(self):
        f = self.frame
        return _nabla(f.g, f.dg, (DOWN, DOWN), self.gamma)

    @cached_property
    def nabla_phi(self):
        f = self.frame
        return _nabla(f.phi, f.dphi, (UP, DOWN), self.gamma)

    @cached_property
    def nabla_xi(self):
        f = self.frame
        return _nabla(f.xi, f.dxi, (UP,), self.gamma)

    @cached_property
    def nabla_eta(self):
        f = self.frame
        return _nabla(f.eta, f.deta, (DOWN,), self.gamma)

    @cached_property
    def Phi(self):
        """``Φ_ij = g_ik φ^k_j``, i.e. ``Φ(X, Y) = g(X, φY)``."""
        f = self.frame
        return f.g @ f.phi

    @cached_property
    def dPhi(self):
        f = self.frame
        return np.einsum("aik,kj->aij", f.dg, f.phi) + np.einsum("ik,akj->aij", f.g, f.dphi)

    @cached_property
    def nabla_Phi(self):
        return _nabla(self.Phi, self.dPhi, (DOWN, DOWN), self.gamma)

    @cached_property
    def gpp(self):
        """``g(φ∂_i, φ∂_j)``."""
        f = self.frame
        return f.phi.T @ f.g @ f.phi

    # Lie derivatives along ξ
    @cached_property
    def lie_g(self):
        f = self.frame
        return (
            np.einsum("l,lij->ij", f.xi, f.dg)
            + np.einsum("lj,il->ij", f.g, f.dxi)
            + np.einsum("il,jl->ij", f.g, f.dxi)
        )

    @cached_property
    def lie_phi(self):
        f = self.frame
        return (
            np.einsum("l,lij->ij", f.xi, f.dphi)
            - np.einsum("lj,li->ij", f.phi, f.dxi)
            + np.einsum("il,jl->ij", f.phi, f.dxi)
        )

    @cached_property
    def lie_eta(self):
        f = self.frame
        return np.einsum("l,lj->j", f.xi, f.deta) + np.einsum("l,jl->j", f.eta, f.dxi)

    @cached_property
    def d_eta(self):
        d = self.frame.deta
        return 0.5 * (d - d.T)

    @cached_property
    def xi_phi_bracket(self):
        """``[ξ, φ∂_i]^m`` as ``[m, i]``."""
        f = self.frame
        return np.einsum("l,lmi->mi", f.xi, f.dphi) - np.einsum("li,lm->mi", f.phi, f.dxi)

    def _nijenhuis(self, dphi):
        phi = self.frame.phi
        A = np.einsum("li,lkj->kij", phi, dphi)
        B = np.einsum("kl,jli->kij", phi, dphi)
        return (A - np.swapaxes(A, 1, 2)) + (B - np.swapaxes(B, 1, 2))

    @cached_property
    def nijenhuis(self):
        return self._nijenhuis(self.frame.dphi)

    @cached_property
    def nijenhuis_covariant(self):
        return self._nijenhuis(self.nabla_phi)

    @cached_property
    def normality(self):
        f = self.frame
        nij = self.nijenhuis
        de = self.d_eta
        N1 = nij - 2.0 * np.einsum("ij,k->kij", de, f.xi)
        P = np.einsum("li,lj->ij", f.phi, f.deta) + np.einsum("k,jki->ij", f.eta, f.dphi)
        N2 = P - P.T
        return NormalityTensors(N1=N1, N2=N2, N3=self.lie_phi, N4=self.lie_eta, dEta=de, nijPhi=nij)

    @cached_property
    def structure(self):
        return structure_residuals_from(self)


def geometry(chart, point=None) -> PointGeometry:
    if isinstance(chart, PointGeometry):
        return chart
    if point is None:
        raise TypeError("a point is required")
    return PointGeometry(chart, point)


# --- public operations -----------------------------------------------------------


def christoffel(chart, point=None) -> ConnectionFrame:
    return geometry(chart, point).connection


_NAMED = {
    "g": ("nabla_g", (DOWN, DOWN)),
    "phi": ("nabla_phi", (UP, DOWN)),
    "xi": ("nabla_xi", (UP,)),
    "eta": ("nabla_eta", (DOWN,)),
    "Phi": ("nabla_Phi", (DOWN, DOWN)),
}


def covariant_derivative(chart, point=None, field="xi", variances=None) -> LabeledTensor:
    """``∇T`` with the differentiation slot first.

    ``field`` is one of ``g``, ``phi``, ``xi``, ``eta``, ``Phi`` or an array of
    scalar fields / expression strings whose slot variances are given.
    """
    geo = geometry(chart, point)
    if isinstance(field, str):
        if field not in _NAMED:
            raise ValueError(f"unknown structure tensor {field!r}")
        attr, var = _NAMED[field]
        return LabeledTensor(getattr(geo, attr), (DOWN,) + var)
    if variances is None:
        raise ValueError("variances are required for a custom field")
    arr = np.asarray(field, dtype=object)
    var = tuple(variances)
    if arr.ndim != len(var) or any(s != geo.n for s in arr.shape):
        raise ValueError(f"field of shape {arr.shape} does not match variances {var}")
    fields = [as_expression(f, geo.chart.coords) for f in arr.flat]
    jets = eval_jets(fields, geo.point)
    vals = np.array([j.value for j in jets]).reshape(arr.shape)
    parts = np.array([j.grad for j in jets]).reshape(arr.shape + (geo.n,))
    parts = np.moveaxis(parts, -1, 0)
    return LabeledTensor(_nabla(vals, parts, var, geo.gamma), (DOWN,) + var)


def lie_derivative_along_xi(chart, point=None, which="g") -> LabeledTensor:
    geo = geometry(chart, point)
    if which == "g":
        return LabeledTensor(geo.lie_g, (DOWN, DOWN))
    if which == "phi":
        return LabeledTensor(geo.lie_phi, (UP, DOWN))
    if which == "eta":
        return LabeledTensor(geo.lie_eta, (DOWN,))
    raise ValueError("which must be 'g', 'phi' or 'eta'")


def exterior_derivative_eta(chart, point=None) -> LabeledTensor:
    """``dη_ij = ½(∂_i η_j - ∂_j η_i)``."""
    return LabeledTensor(geometry(chart, point).d_eta, (DOWN, DOWN))


def nijenhuis_phi(chart, point=None) -> LabeledTensor:
    return LabeledTensor(geometry(chart, point).nijenhuis, (UP, DOWN, DOWN))


def nijenhuis_form_residual(chart, point=None) -> float:
    """Coordinate vs covariant evaluation of ``[φ,φ]``; zero for a torsion-free ∇."""
    geo = geometry(chart, point)
    return residual(geo.nijenhuis - geo.nijenhuis_covariant, geo.nijenhuis, geo.nijenhuis_covariant)


def normality_tensors(chart, point=None) -> NormalityTensors:
    return geometry(chart, point).normality


STRUCTURE_KEYS = (
    "paracontact",
    "lie_paracontact",
    "s_paracontact",
    "para_sasakian",
    "eta_closed",
    "xi_geodesic",
)


def structure_residuals_from(geo: PointGeometry) -> dict:
    f, eps = geo.frame, geo.eps
    Phi = geo.Phi
    ne = geo.nabla_eta
    sym_ne = ne + ne.T
    nxi = geo.nabla_xi
    phi2 = f.phi @ f.phi
    ps_rhs = -np.einsum("aj,k->akj", geo.gpp, f.xi) - eps * np.einsum("j,ka->akj", f.eta, phi2)
    lie = eps * geo.lie_g
    return {
        "paracontact": residual(2.0 * Phi - sym_ne, 2.0 * Phi, sym_ne),
        "lie_paracontact": residual(2.0 * Phi - lie, 2.0 * Phi, lie),
        "s_paracontact": residual(nxi - eps * f.phi.T, nxi, f.phi),
        "para_sasakian": residual(geo.nabla_phi - ps_rhs, geo.nabla_phi, ps_rhs),
        "eta_closed": residual(geo.d_eta, f.deta),
        "xi_geodesic": residual(f.xi @ nxi, nxi, f.xi),
    }


def structure_residuals(chart, point=None) -> dict:
    return dict(geometry(chart, point).structure)


# --- identity rows over coordinate basis vectors --------------------------------


def lemma3_rows(geo: PointGeometry) -> dict:
    """Residuals of the normality-tensor identities valid for any structure."""
    f = geo.frame
    phi, xi, eta = f.phi, f.xi, f.eta
    nt = geo.normality
    N1, N2, N3, N4, de = nt.N1, nt.N2, nt.N3, nt.N4, nt.dEta
    rows = {}

    rhs = 2.0 * (xi @ de)
    rows["n4_equals_2_deta_xi"] = residual(N4 - rhs, N4, rhs)

    rhs = 2.0 * (phi.T @ de + de @ phi)
    rows["n2_equals_deta_phi"] = residual(N2 - rhs, N2, rhs)

    n1xi = np.einsum("kib,b->ki", N1, xi)
    rhs = -(N3 @ phi)
    rows["n1_xi_equals_minus_n3_phi"] = residual(n1xi - rhs, n1xi, rhs)

    br = geo.xi_phi_bracket
    xe = f.deta.T @ xi  # ξ(η_i)
    rhs = f.dxi.T + phi @ br + np.einsum("i,k->ki", xe, xi)
    rows["n1_xi_bracket_form"] = residual(n1xi - rhs, n1xi, f.dxi, phi @ br, xi)

    lhs = np.einsum("kaj,ai->kij", N1, phi)
    t1 = -np.einsum("kl,lij->kij", phi, nt.nijPhi)
    t2 = -np.einsum("ij,k->kij", N2, xi)
    t3 = -np.einsum("i,kj->kij", eta, N3)
    rows["n1_phi_expansion"] = residual(lhs - (t1 + t2 + t3), lhs, t1, t2, t3)

    lhs = N2 @ phi
    t1 = 2.0 * (phi.T @ de @ phi + de)
    t2 = np.einsum("j,i->ij", eta, N4)
    rows["n2_phi_second_slot"] = residual(lhs - (t1 + t2), lhs, t1, t2)

    a = eta @ n1xi
    b = xi @ N2 @ phi
    c = -(eta @ N3 @ phi)
    rows["n4_equals_eta_n1_xi"] = residual(N4 - a, N4, a)
    rows["n4_equals_n2_xi_phi"] = residual(N4 - b, N4, b)
    rows["n4_equals_minus_eta_n3_phi"] = residual(N4 - c, N4, c)

    lhs = N4 @ phi
    a = -(eta @ br)
    b = -(eta @ N3)
    rows["n4_phi_equals_minus_eta_bracket"] = residual(lhs - a, lhs, a)
    rows["n4_phi_equals_minus_eta_n3"] = residual(lhs - b, lhs, b)

    lhs = phi @ n1xi
    rhs = N3 + np.einsum("i,k->ki", N4 @ phi, xi)
    rows["phi_n1_xi"] = residual(lhs - rhs, lhs, N3, N4, xi)

    lhs = np.einsum("k,kaj,ai->ij", eta, N1, phi)
    rhs = -N2 + np.einsum("i,j->ij", eta, N4 @ phi)
    rows["eta_n1_phi"] = residual(lhs - rhs, lhs, N2, N4)

    # N1 through ∇φ and ∇ξ (torsion-free connection)
    nphi, nxi = geo.nabla_phi, geo.nabla_xi
    T1 = np.einsum("ikb,bj->kij", nphi, phi)
    T3 = np.einsum("ai,akj->kij", phi, nphi)
    E = np.einsum("j,ik->kij", eta, nxi)
    rhs = (T1 - np.swapaxes(T1, 1, 2)) + (T3 - np.swapaxes(T3, 1, 2)) + (E - np.swapaxes(E, 1, 2))
    rows["n1_covariant_form"] = residual(N1 - rhs, N1, T1, T3, E)

    rows["nijenhuis_coordinate_vs_covariant"] = residual(
        nt.nijPhi - geo.nijenhuis_covariant, nt.nijPhi, geo.nijenhuis_covariant
    )

    eps_lie = geo.eps * geo.lie_g
    ne = geo.nabla_eta
    sym = ne + ne.T
    rows["paracontact_lie_form"] = residual(sym - eps_lie, sym, eps_lie)
    return rows


def phi_rows(geo: PointGeometry) -> dict:
    """Identities of the fundamental tensor ``Φ``."""
    f = geo.frame
    phi, xi, eta, g = f.phi, f.xi, f.eta, f.g
    Phi, nPhi, nphi = geo.Phi, geo.nabla_Phi, geo.nabla_phi
    rows = {"phi_tensor_symmetric": residual(Phi - Phi.T, Phi)}
    rows["nabla_phi_tensor_symmetric"] = residual(nPhi - np.swapaxes(nPhi, 1, 2), nPhi)
    rhs = np.einsum("aki,kj->aij", nphi, g)
    rows["nabla_phi_tensor_via_nabla_phi"] = residual(nPhi - rhs, nPhi, rhs)
    lhs = np.einsum("abc,bi,cj->aij", nPhi, phi, phi)
    t2 = np.einsum("i,b,abj->aij", eta, xi, nPhi)
    t3 = np.einsum("j,c,aic->aij", eta, xi, nPhi)
    rows["nabla_phi_tensor_phi_phi"] = residual(lhs - (-nPhi + t2 + t3), lhs, nPhi, t2, t3)
    return rows
