"""Shared hypothesis strategies and small oracles for the test suite."""

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from quadric_cr.exact import ExactMatrix, GaussQ
from quadric_cr.model import HermitianMatrix, QuadricModel
from quadric_cr.poly import Env, MultiPoly

small_ints = st.integers(-3, 3)
rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
gauss = st.builds(GaussQ, rationals, rationals)
small_gauss = st.builds(GaussQ, small_ints, small_ints)


def matrices(max_rows=4, max_cols=4, entries=small_gauss):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r).map(ExactMatrix.from_rows)
        )
    )


@st.composite
def hermitian(draw, n, bound=2):
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = GaussQ(draw(st.integers(-bound, bound)))
        for j in range(i + 1, n):
            v = GaussQ(draw(st.integers(-bound, bound)), draw(st.integers(-bound, bound)))
            rows[i][j] = v
            rows[j][i] = v.conj()
    return HermitianMatrix.from_rows(rows)


@st.composite
def models(draw, max_n=3, max_d=3, bound=2):
    n = draw(st.integers(1, max_n))
    d = draw(st.integers(1, max_d))
    return QuadricModel(n, d, tuple(draw(hermitian(n, bound)) for _ in range(d)))


def vectors(n, entries=small_gauss):
    return st.lists(entries, min_size=n, max_size=n)


@st.composite
def polys(draw, env, max_terms=4, max_exp=2):
    k = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(k):
        e = tuple(draw(st.integers(0, max_exp)) for _ in range(env.nvars))
        terms[e] = draw(small_gauss)
    return MultiPoly(env, terms)


def to_sympy_matrix(m: ExactMatrix) -> sympy.Matrix:
    return sympy.Matrix(m.rows, m.cols, lambda i, j: to_sympy(m[i, j]))


def to_sympy(x: GaussQ):
    return sympy.Rational(x.re) + sympy.I * sympy.Rational(x.im)


def poly_to_sympy(p: MultiPoly, symbols):
    total = sympy.Integer(0)
    for e, c in p.terms().items():
        term = to_sympy(c)
        for s, k in zip(symbols, e):
            term *= s**k
        total += term
    return sympy.expand(total)


CR11 = Env.cr(1, 1)
