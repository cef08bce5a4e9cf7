"""Riemann, Ricci and sectional curvature with their derivative tests.

Conventions: ``R(X,Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_[X,Y] Z``,
``R_up[l, i, j, k] = [R(∂_i, ∂_j)∂_k]^l``,
``R_down[i, j, k, l] = g(R(∂_i, ∂_j)∂_k, ∂_l)``,
``S_jk = R^i_ijk`` (trace over the first slot) and ``r = g^jk S_jk``.
Derivative arrays put the differentiation index first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charts import residual
from .errors import DegenerateMetricError, IllPosedFitError
from .levi_civita import PointGeometry, geometry
from .tensors import DOWN, covariant_derivative as _nabla


@dataclass(frozen=True)
class CurvatureFrame:
    point: np.ndarray
    R_up: np.ndarray
    R_down: np.ndarray
    S: np.ndarray
    r: float
    nablaR: np.ndarray
    nablaS: np.ndarray
    dR_up: np.ndarray

    def symmetry_residuals(self):
        Rd = self.R_down
        bianchi1 = Rd + np.einsum("jkil->ijkl", Rd) + np.einsum("kijl->ijkl", Rd)
        nR = self.nablaR
        # cyclic over the differentiation slot and the first 2-form pair
        bianchi2 = nR + np.einsum("ijakl->aijkl", nR) + np.einsum("jaikl->aijkl", nR)
        return {
            "antisym_12": residual(Rd + np.swapaxes(Rd, 0, 1), Rd),
            "antisym_34": residual(Rd + np.swapaxes(Rd, 2, 3), Rd),
            "pair_exchange": residual(Rd - np.einsum("klij->ijkl", Rd), Rd),
            "first_bianchi": residual(bianchi1, Rd),
            "second_bianchi": residual(bianchi2, nR),
            "ricci_symmetric_tensor": residual(self.S - self.S.T, self.S),
        }


def _build(geo: PointGeometry) -> CurvatureFrame:
    f = geo.frame
    con = geo.connection
    G, dG, ddG = con.gamma, con.dgamma, con.ddgamma
    # R^l_ijk = ∂_i Γ^l_jk - ∂_j Γ^l_ik + Γ^l_ip Γ^p_jk - Γ^l_jp Γ^p_ik
    A = np.einsum("iljk->lijk", dG)
    Q = np.einsum("lip,pjk->lijk", G, G)
    Rup = (A - np.swapaxes(A, 1, 2)) + (Q - np.swapaxes(Q, 1, 2))

    dA = np.einsum("ailjk->alijk", ddG)
    dQ = np.einsum("alip,pjk->alijk", dG, G) + np.einsum("lip,apjk->alijk", G, dG)
    dRup = (dA - np.swapaxes(dA, 2, 3)) + (dQ - np.swapaxes(dQ, 2, 3))

    Rd = np.einsum("lm,mijk->ijkl", f.g, Rup)
    dRd = np.einsum("alm,mijk->aijkl", f.dg, Rup) + np.einsum("lm,amijk->aijkl", f.g, dRup)
    S = np.einsum("iijk->jk", Rup)
    dS = np.einsum("aiijk->ajk", dRup)
    r = float(np.einsum("jk,jk->", f.ginv, S))
    nR = _nabla(Rd, dRd, (DOWN,) * 4, G)
    nS = _nabla(S, dS, (DOWN, DOWN), G)
    for a in (Rup, Rd, S, nR, nS, dRup):
        a.flags.writeable = False
    return CurvatureFrame(f.point, Rup, Rd, S, r, nR, nS, dRup)


def curvature_frame(chart, point=None) -> CurvatureFrame:
    geo = geometry(chart, point)
    return geo.memo("curvature", lambda: _build(geo))


def riemann(chart, point=None) -> CurvatureFrame:
    return curvature_frame(chart, point)


def ricci(chart, point=None):
    cf = curvature_frame(chart, point)
    return cf.S, cf.r


def sectional(chart, point=None, X=None, Y=None, tol=1e-10) -> float:
    """``K(X, Y) = R(X,Y,Y,X) / (g(X,X)g(Y,Y) - g(X,Y)²)``."""
    geo = geometry(chart, point)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    g = geo.frame.g
    den = (X @ g @ X) * (Y @ g @ Y) - (X @ g @ Y) ** 2
    scale = max(1.0, float(np.max(np.abs(g)))) ** 2 * float(X @ X) * float(Y @ Y)
    if abs(den) <= tol * scale:
        raise DegenerateMetricError("the plane spanned by X and Y is degenerate")
    Rd = curvature_frame(geo).R_down
    return float(np.einsum("ijkl,i,j,k,l->", Rd, X, Y, Y, X) / den)


def r0_up(g):
    """``R_0(X,Y)W = g(Y,W)X - g(X,W)Y`` as ``[l, i, j, k]``."""
    n = g.shape[0]
    eye = np.eye(n)
    return np.einsum("jk,li->lijk", g, eye) - np.einsum("ik,lj->lijk", g, eye)


def _r_dot_r(Rup):
    t1 = np.einsum("labm,mcde->abcdle", Rup, Rup)
    t2 = np.einsum("lcdm,mabe->abcdle", Rup, Rup)
    t3 = np.einsum("mabc,lmde->abcdle", Rup, Rup)
    t4 = np.einsum("mabd,lcme->abcdle", Rup, Rup)
    return (t1 - t2) - t3 - t4, (t1, t2, t3, t4)


def _r_dot_s(Rup, S):
    t1 = np.einsum("mabc,md->abcd", Rup, S)
    t2 = np.einsum("mabd,cm->abcd", Rup, S)
    return -t1 - t2, (t1, t2)


CLASSIFICATION_KEYS = (
    "flat",
    "constant_curv_eps",
    "symmetric",
    "ricci_symmetric",
    "semi_symmetric",
    "ricci_semisymmetric",
    "einstein_ps",
    "einstein_general",
)


def classification_residuals(chart, point=None) -> dict:
    geo = geometry(chart, point)

    def build():
        cf = curvature_frame(geo)
        g, eps, n = geo.frame.g, geo.eps, geo.n
        Rup, S = cf.R_up, cf.S
        R0 = r0_up(g)
        rr, rr_terms = _r_dot_r(Rup)
        rs, rs_terms = _r_dot_s(Rup, S)
        es = eps * (n - 1) * g
        eg = (cf.r / n) * g
        return {
            "flat": residual(Rup),
            "constant_curv_eps": residual(Rup + eps * R0, Rup, R0),
            "symmetric": residual(cf.nablaR, cf.R_down),
            "ricci_symmetric": residual(cf.nablaS, cf.S),
            "semi_symmetric": residual(rr, *rr_terms),
            "ricci_semisymmetric": residual(rs, *rs_terms),
            "einstein_ps": residual(S + es, S, es),
            "einstein_general": residual(S - eg, S, eg),
        }

    return dict(geo.memo("classification", build))


@dataclass(frozen=True)
class RecurrenceFit:
    alpha_hat: np.ndarray
    residual: float
    target: str


def recurrence_fit(chart, point=None, target="R", tol=1e-10) -> RecurrenceFit:
    """Least-squares ``α`` in ``∇T ≈ α ⊗ T`` (Euclidean component inner product)."""
    cf = curvature_frame(chart, point)
    if target == "R":
        T, nT = cf.R_down, cf.nablaR
    elif target == "S":
        T, nT = cf.S, cf.nablaS
    else:
        raise ValueError("target must be 'R' or 'S'")
    norm2 = float(np.sum(T * T))
    if np.sqrt(norm2) <= tol or float(np.max(np.abs(T))) <= tol:
        raise IllPosedFitError(f"{target} vanishes at this point; the recurrence form is undetermined")
    axes = tuple(range(1, nT.ndim))
    alpha = np.tensordot(nT, T, axes=(axes, tuple(range(T.ndim)))) / norm2
    fitted = np.multiply.outer(alpha, T)
    return RecurrenceFit(alpha, float(np.max(np.abs(nT - fitted))), target)


# --- identity rows -------------------------------------------------------------------


def lemma5_rows(geo: PointGeometry) -> dict:
    """Curvature identities of para-Sasakian structures, over basis vectors."""
    f = geo.frame
    g, phi, xi, eta, eps = f.g, f.phi, f.xi, f.eta, geo.eps
    n = geo.n
    cf = curvature_frame(geo)
    Rup, Rd = cf.R_up, cf.R_down
    eye = np.eye(n)
    Phi, gpp = geo.Phi, geo.gpp
    rows = {}

    lhs = np.einsum("lijk,k->lij", Rup, xi)
    rhs = np.einsum("i,lj->lij", eta, eye) - np.einsum("j,li->lij", eta, eye)
    rows["r_xy_xi"] = residual(lhs - rhs, lhs, rhs)

    lhs = np.einsum("ijkl,l->ijk", Rd, xi)
    rhs = -np.einsum("i,jk->ijk", eta, g) + np.einsum("j,ik->ijk", eta, g)
    rows["r_xyz_xi"] = residual(lhs - rhs, lhs, rhs)

    lhs = np.einsum("l,lijk->ijk", eta, Rup)
    rhs = eps * (-np.einsum("i,jk->ijk", eta, g) + np.einsum("j,ik->ijk", eta, g))
    rows["eta_r_xy_z"] = residual(lhs - rhs, lhs, rhs)

    lhs = np.einsum("i,lijk->ljk", xi, Rup)
    rhs = -eps * np.einsum("jk,l->ljk", g, xi) + np.einsum("k,lj->ljk", eta, eye)
    rows["r_xi_x_y"] = residual(lhs - rhs, lhs, rhs)

    R0 = r0_up(g)
    lhs = np.einsum("lijk,k->lij", Rup, xi)
    rhs = -eps * np.einsum("lijk,k->lij", R0, xi)
    rows["r_xy_xi_r0_form"] = residual(lhs - rhs, lhs, rhs)

    lhs = np.einsum("i,lijk->ljk", xi, Rup)
    rhs = -eps * np.einsum("i,lijk->ljk", xi, R0)
    rows["r_xi_x_r0_form"] = residual(lhs - rhs, lhs, rhs)

    # the four φ-curvature identities; X,Y,Z,W = ∂_i,∂_j,∂_k,∂_l
    R_pz = np.einsum("ijcl,ck->ijkl", Rd, phi)
    R_pw = np.einsum("ijkd,dl->ijkl", Rd, phi)
    R_pzpw = np.einsum("ijcd,ck,dl->ijkl", Rd, phi, phi)
    R_pxpy = np.einsum("abkl,ai,bj->ijkl", Rd, phi, phi)
    R_all = np.einsum("abcd,ai,bj,ck,dl->ijkl", Rd, phi, phi, phi, phi)

    def outer(a, b, idx):
        return np.einsum(f"{idx[:2]},{idx[2:]}->ijkl", a, b)

    ee = np.einsum
    t = [
        eps * outer(Phi, gpp, "jkil"),
        -eps * outer(Phi, gpp, "ikjl"),
        eps * outer(Phi, gpp, "jlik"),
        -eps * outer(Phi, gpp, "iljk"),
        ee("j,k,il->ijkl", eta, eta, Phi),
        -ee("i,k,jl->ijkl", eta, eta, Phi),
        ee("j,l,ik->ijkl", eta, eta, Phi),
        -ee("i,l,jk->ijkl", eta, eta, Phi),
    ]
    lhs = R_pz - R_pw
    rows["phi_curvature_1"] = residual(lhs - sum(t), R_pz, R_pw, *t)

    eta_block = (
        ee("k,j,il->ijkl", eta, eta, g) - ee("k,i,jl->ijkl", eta, eta, g)
        - ee("l,j,ik->ijkl", eta, eta, g) + ee("l,i,jk->ijkl", eta, eta, g)
    )
    t = [
        eps * outer(Phi, Phi, "jkil"),
        -eps * outer(Phi, Phi, "ikjl"),
        eps * outer(gpp, gpp, "ikjl"),
        -eps * outer(gpp, gpp, "jkil"),
        eta_block,
    ]
    lhs = R_pzpw - Rd
    rows["phi_curvature_2"] = residual(lhs - sum(t), R_pzpw, Rd, *t)

    rows["phi_curvature_3"] = residual(R_pzpw - R_pxpy, R_pzpw, R_pxpy)

    rhs = Rd + eta_block
    rows["phi_curvature_4"] = residual(R_all - rhs, R_all, Rd, eta_block)

    # (∇_Y Φ)(Z, W) = -ε η(Z) g(φY, φW) - ε η(W) g(φY, φZ)
    nPhi = geo.nabla_Phi
    rhs = -eps * (ee("k,jl->jkl", eta, gpp) + ee("l,jk->jkl", eta, gpp))
    rows["nabla_phi_tensor_ps_form"] = residual(nPhi - rhs, nPhi, rhs)
    return rows


def ricci_rows(geo: PointGeometry) -> dict:
    f = geo.frame
    phi, xi, eta, eps, n = f.phi, f.xi, f.eta, geo.eps, geo.n
    cf = curvature_frame(geo)
    S = cf.S
    rows = {}
    lhs = phi.T @ S @ phi
    rhs = S + (n - 1) * np.outer(eta, eta)
    rows["s_phi_phi"] = residual(lhs - rhs, lhs, S, np.outer(eta, eta) * (n - 1))
    a, b = phi.T @ S, S @ phi
    rows["s_phi_symmetric"] = residual(a - b, a, b)
    lhs = S @ xi
    rhs = -(n - 1) * eta
    rows["s_y_xi"] = residual(lhs - rhs, lhs, rhs)
    # differentiating S(Y, ξ) = -(n-1)η(Y) gives -(n-1)(∇_X η)Y - εS(Y, φX)
    lhs = np.einsum("ajc,c->aj", cf.nablaS, xi)
    t1 = -(n - 1) * geo.nabla_eta
    t2 = -eps * np.einsum("jb,ba->aj", S, phi)
    rows["nabla_s_y_xi"] = residual(lhs - (t1 + t2), lhs, t1, t2)
    return rows


def corollary_rows(geo: PointGeometry) -> dict:
    """Constant-curvature consequence for ``Φ``, as printed and as rederived.

    The printed right-hand side is ``-g(φY,φZ)g(φX,φW) + g(φX,φZ)g(φY,φW)``.
    Substituting ``R = -ε R_0`` into the second φ-curvature identity yields the
    opposite sign; both rows are reported.
    """
    Phi, gpp = geo.Phi, geo.gpp
    lhs = np.einsum("jk,il->ijkl", Phi, Phi) - np.einsum("ik,jl->ijkl", Phi, Phi)
    gg = np.einsum("jk,il->ijkl", gpp, gpp) - np.einsum("ik,jl->ijkl", gpp, gpp)
    return {
        "constant_curvature_phi_printed": residual(lhs + gg, lhs, gg),
        "constant_curvature_phi_rederived": residual(lhs - gg, lhs, gg),
    }
