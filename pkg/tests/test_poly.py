import pytest
import sympy
from hypothesis import given, settings, strategies as st

from quadric_cr.exact import I, GaussQ
from quadric_cr.jet import extract_bidegree
from quadric_cr.poly import EnvironmentMismatch, Env, MultiPoly, poly_add, poly_mul, poly_substitute

from helpers import CR11, poly_to_sympy, polys

ENV = Env.cr(2, 1)
SYMS = sympy.symbols("z1 z2 zb1 zb2 u1")


def v(name, env=ENV):
    return MultiPoly.var(env, env.index(name))


def test_product_example():
    z1, u1 = v("z1"), v("u1")
    assert poly_mul(z1 + u1, z1 - u1) == z1**2 - u1**2


def test_substitute_zero():
    assert poly_substitute(v("z1") * v("u1"), "u1", MultiPoly.zero(ENV)).is_zero()


def test_w_squared_bidegree_one_one():
    z, zb, u = (MultiPoly.var(CR11, k) for k in range(3))
    w2 = u * u  # w^2 with w carried in the u slot before substitution
    expanded = poly_substitute(w2, "u1", u + (zb * z).scale(I))
    assert extract_bidegree(expanded, 1, 1) == (u * z * zb).scale(GaussQ(0, 2))
    assert extract_bidegree(expanded, 2, 2) == -(z * z * zb * zb)


def test_environment_mismatch():
    with pytest.raises(EnvironmentMismatch):
        poly_add(v("z1"), MultiPoly.var(CR11, 0))


def test_no_zero_coefficients_stored():
    p = v("z1") + v("z2")
    q = p - v("z2")
    assert q == v("z1")
    assert all(c for c in q.terms().values())
    assert len((p - p).terms()) == 0


def test_display_order_is_graded_lex():
    p = v("u1") + v("z1") * v("zb1") + MultiPoly.const(ENV, 3)
    assert str(p) == "z1*zb1 + u1 + 3"


def test_conjugation_swaps_z_and_zb():
    p = (v("z1") * v("zb2")).scale(GaussQ(1, 2)) + v("u1")
    assert p.conj() == (v("zb1") * v("z2")).scale(GaussQ(1, -2)) + v("u1")
    assert p.real_part().conj() == p.real_part()
    assert p.real_part() + p.imag_part().scale(I) == p


@settings(max_examples=1000, deadline=None)
@given(polys(ENV), polys(ENV), polys(ENV))
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a


@settings(max_examples=200, deadline=None)
@given(polys(ENV), polys(ENV))
def test_product_matches_sympy(a, b):
    assert poly_to_sympy(a * b, SYMS) == sympy.expand(poly_to_sympy(a, SYMS) * poly_to_sympy(b, SYMS))


@settings(max_examples=200, deadline=None)
@given(polys(ENV), polys(ENV), polys(ENV), st.sampled_from(range(5)))
def test_substitution_commutes_with_products(a, b, r, var):
    # substitute-then-multiply equals multiply-then-substitute
    assert poly_substitute(a * b, var, r) == poly_substitute(a, var, r) * poly_substitute(b, var, r)
    assert poly_substitute(a + b, var, r) == poly_substitute(a, var, r) + poly_substitute(b, var, r)


@settings(max_examples=200, deadline=None)
@given(polys(ENV), polys(ENV), st.sampled_from(range(5)))
def test_substitution_matches_sympy(a, r, var):
    got = poly_to_sympy(poly_substitute(a, var, r), SYMS)
    want = sympy.expand(poly_to_sympy(a, SYMS).subs(SYMS[var], poly_to_sympy(r, SYMS)))
    assert got == want


@settings(max_examples=200, deadline=None)
@given(polys(ENV), polys(ENV))
def test_conjugation_is_a_multiplicative_involution(a, b):
    assert a.conj().conj() == a
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()


@settings(max_examples=100, deadline=None)
@given(polys(ENV), st.sampled_from(range(5)))
def test_diff_matches_sympy(a, var):
    assert poly_to_sympy(a.diff(var), SYMS) == sympy.expand(sympy.diff(poly_to_sympy(a, SYMS), SYMS[var]))
