"""Independent reference computations for the test suite.

Everything here uses plain float evaluation of the component fields and
finite differences; nothing goes through the jet engine or the library's
connection and curvature code.
"""

import itertools

import numpy as np

H1 = 1e-3  # first derivatives of components
H2 = 2e-3  # derivatives of finite-difference Christoffel symbols


def _grid(fields, x):
    return np.array([[f.value(x) for f in row] for row in fields], dtype=float)


def metric(chart, x):
    return _grid(chart.g, np.asarray(x, float))


def phi(chart, x):
    return _grid(chart.phi, np.asarray(x, float))


def xi(chart, x):
    return np.array([f.value(np.asarray(x, float)) for f in chart.xi])


def eta(chart, x):
    return np.array([f.value(np.asarray(x, float)) for f in chart.eta])


def d(fn, x, h):
    """Fourth-order central differences; derivative index first."""
    x = np.asarray(x, float)
    out = []
    for a in range(len(x)):
        e = np.zeros_like(x)
        e[a] = h
        out.append((-fn(x + 2 * e) + 8 * fn(x + e) - 8 * fn(x - e) + fn(x - 2 * e)) / (12 * h))
    return np.array(out)


def christoffel(chart, x, h=H1):
    """``Γ[k, i, j] = Γ^k_ij``."""
    g = metric(chart, x)
    dg = d(lambda y: metric(chart, y), x, h)
    low = 0.5 * (np.einsum("jil->lij", dg) + np.einsum("ijl->lij", dg) - dg)
    return np.einsum("kl,lij->kij", np.linalg.inv(g), low)


def riemann_up(chart, x):
    """``R[l, i, j, k]`` = l-component of ``R(∂i, ∂j)∂k``."""
    G = christoffel(chart, x)
    dG = d(lambda y: christoffel(chart, y), x, H2)
    R = np.einsum("iljk->lijk", dG) - np.einsum("jlik->lijk", dG)
    R += np.einsum("lim,mjk->lijk", G, G) - np.einsum("ljm,mik->lijk", G, G)
    return R


def ricci(chart, x):
    return np.einsum("iijk->jk", riemann_up(chart, x))


def scalar(chart, x):
    return float(np.einsum("jk,jk->", np.linalg.inv(metric(chart, x)), ricci(chart, x)))


def sectional(chart, x, X, Y):
    g = metric(chart, x)
    Rd = np.einsum("lm,mijk->ijkl", g, riemann_up(chart, x))
    num = np.einsum("ijkl,i,j,k,l->", Rd, X, Y, Y, X)
    return float(num / ((X @ g @ X) * (Y @ g @ Y) - (X @ g @ Y) ** 2))


def nabla_xi(chart, x):
    """``∇ξ[a, k] = (∇_a ξ)^k``."""
    return d(lambda y: xi(chart, y), x, H1) + np.einsum("kam,m->ak", christoffel(chart, x), xi(chart, x))


def lie_g_xi(chart, x):
    """``(£_ξ g)_ij`` from the coordinate formula."""
    v = xi(chart, x)
    dv = d(lambda y: xi(chart, y), x, H1)
    dg = d(lambda y: metric(chart, y), x, H1)
    g = metric(chart, x)
    return np.einsum("a,aij->ij", v, dg) + np.einsum("ia,ja->ij", dv, g) + np.einsum("ja,ia->ij", dv, g)


def nijenhuis(chart, x):
    """``N[k, i, j]`` = k-component of ``[φ,φ](∂i, ∂j)`` via Lie brackets."""
    x = np.asarray(x, float)
    n = len(x)
    P = phi(chart, x)
    dP = d(lambda y: phi(chart, y), x, H1)  # dP[a, k, i] = ∂_a φ^k_i

    def bracket(u, du, v, dv):
        return dv.T @ u - du.T @ v  # [U,V]^k = U^a ∂_a V^k - V^a ∂_a U^k

    N = np.zeros((n, n, n))
    zero = np.zeros((n, n))
    for i, j in itertools.product(range(n), repeat=2):
        ei, ej = np.eye(n)[i], np.eye(n)[j]
        pi, pj = P[:, i], P[:, j]
        dpi, dpj = dP[:, :, i], dP[:, :, j]
        N[:, i, j] = (
            bracket(pi, dpi, pj, dpj)
            - P @ bracket(pi, dpi, ej, zero)
            - P @ bracket(ei, zero, pj, dpj)
        )
    return N


def negative_eigenvalues(g):
    """Index via the general (non-symmetric) eigensolver."""
    return int(np.sum(np.real(np.linalg.eigvals(g)) < 0))
