from fractions import Fraction

import pytest
import sympy as sp

from curvident.metric_geometry import MetricJet


def jet_to_sympy(g: MetricJet):
    xs = sp.symbols(f"x0:{g.dim}")
    mat = sp.zeros(g.dim, g.dim)
    for a in range(g.dim):
        for b in range(g.dim):
            expr = 0
            for exp, c in g.g(a, b).monomials():
                term = sp.Rational(c.numerator, c.denominator)
                for x, e in zip(xs, exp):
                    term *= x ** e
                expr += term
            mat[a, b] = expr
    return xs, mat


def sympy_riemann(xs, g):
    """Covariant R_ijkl at the origin, R^i_jkl = d_k G^i_lj - d_l G^i_kj + G^i_km G^m_lj - G^i_lm G^m_kj."""
    n = len(xs)
    origin = {x: 0 for x in xs}
    g0inv = g.subs(origin).inv()
    # first order of g^-1 is all that curvature at the origin sees
    ginv = g0inv - g0inv * (g - g.subs(origin)) * g0inv
    gam = [[[sum(ginv[i, l] * (sp.diff(g[l, k], xs[j]) + sp.diff(g[l, j], xs[k])
                                - sp.diff(g[j, k], xs[l])) for l in range(n)) / 2
             for k in range(n)] for j in range(n)] for i in range(n)]
    up = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    e = sp.diff(gam[i][l][j], xs[k]) - sp.diff(gam[i][k][j], xs[l])
                    e += sum(gam[i][k][m] * gam[m][l][j] - gam[i][l][m] * gam[m][k][j]
                             for m in range(n))
                    up[i, j, k, l] = e.subs(origin)
    g0 = g.subs(origin)
    return {(i, j, k, l): sp.nsimplify(sum(g0[i, a] * up[a, j, k, l] for a in range(n)))
            for i in range(n) for j in range(n) for k in range(n) for l in range(n)}


def as_fraction(x) -> Fraction:
    x = sp.Rational(x)
    return Fraction(int(x.p), int(x.q))


@pytest.fixture
def sympy_tools():
    return jet_to_sympy, sympy_riemann, as_fraction
