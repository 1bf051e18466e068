import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from quadric_cr.catalog import CATALOG, get_entry
from quadric_cr.exact import I, GaussQ, SparseSystem
from quadric_cr.jet import (
    CapTooSmall,
    HolMapPair,
    NotAutomorphismCandidate,
    UnknownLayout,
    assemble_system_direct,
    assemble_system_general,
    char_variety_test,
    characteristic_probes,
    decompose_weighted,
    degree_bounds,
    delta,
    expand_basic_identity,
    extract_bidegree,
    is_solution,
    jet_determination_check,
    pd_system,
    reconciled_caps,
    solve_jet_system,
    truncation_report,
    two_jet_kernel_dimension,
    uniform_caps,
)
from quadric_cr.model import QuadricModel, hermitian_form_polys
from quadric_cr.poly import Env, MultiPoly

from helpers import models, poly_to_sympy, polys, to_sympy_matrix

HYPER = get_entry("hyperquadric-c2").model
CODIM3 = get_entry("beloshapka-c6-codim3").model
DIAG = get_entry("diag-pair-c4").model
FLAT = get_entry("degenerate-flat").model
CR = Env.cr(1, 1)
z, zb, u = (MultiPoly.var(CR, k) for k in range(3))


def pair(n, d, f=(), g=()):
    return HolMapPair.from_terms(n, d, f, g)


# --- independent expansion oracle -------------------------------------------


def identity_oracle(p: HolMapPair, model: QuadricModel):
    n, d = model.n, model.d
    zs = sympy.symbols(f"z1:{n + 1}")
    zbs = sympy.symbols(f"zb1:{n + 1}")
    us = sympy.symbols(f"u1:{d + 1}")
    mats = [to_sympy_matrix(a.inner) for a in model.matrices]
    forms = [sum(zbs[i] * m[i, j] * zs[j] for i in range(n) for j in range(n)) for m in mats]
    hol = sympy.symbols(f"z1:{n + 1}") + sympy.symbols(f"w1:{d + 1}")

    def on_manifold(poly):
        return poly_to_sympy(poly, hol).subs({hol[n + s]: us[s] + sympy.I * forms[s] for s in range(d)}, simultaneous=True)

    def conj_on_manifold(poly):
        # conj(w) = u - i<zb, z> because the forms are real
        expr = sympy.conjugate(poly_to_sympy(poly, hol))
        subs = {sympy.conjugate(hol[k]): zbs[k] for k in range(n)}
        subs.update({sympy.conjugate(hol[n + s]): us[s] - sympy.I * forms[s] for s in range(d)})
        return expr.subs(subs, simultaneous=True)

    out = []
    for s in range(d):
        e = sympy.I * on_manifold(p.g[s]) + 2 * sum(
            conj_on_manifold(p.f[j]) * mats[s][j, k] * zs[k] for j in range(n) for k in range(n)
        )
        ebar = -sympy.I * conj_on_manifold(p.g[s]) + 2 * sum(
            on_manifold(p.f[j]) * sympy.conjugate(mats[s][j, k]) * zbs[k] for j in range(n) for k in range(n)
        )
        out.append(sympy.expand((e + ebar) / 2))
    return out, zs + zbs + us


@st.composite
def hol_pairs(draw, n, d, max_terms=3, max_exp=2):
    env = Env.hol(n, d)
    f = tuple(draw(polys(env, max_terms, max_exp)) for _ in range(n))
    g = tuple(draw(polys(env, max_terms, max_exp)) for _ in range(d))
    return HolMapPair(env, f, g)


@settings(max_examples=60, deadline=None)
@given(models(max_n=2, max_d=2).flatmap(lambda m: st.tuples(st.just(m), hol_pairs(m.n, m.d))))
def test_expansion_matches_sympy(args):
    model, p = args
    want, syms = identity_oracle(p, model)
    got = expand_basic_identity(p, model)
    for s in range(model.d):
        assert poly_to_sympy(got[s], syms) == want[s]


def test_expansion_examples():
    (e,) = expand_basic_identity(pair(1, 1, g=[{(0, 1): 1}]), HYPER)
    assert e == -(z * zb)
    (e,) = expand_basic_identity(pair(1, 1, g=[{(0, 0): 1}]), HYPER)
    assert e.is_zero()
    assert is_solution(pair(1, 1, f=[{(1, 0): 1}], g=[{(0, 1): 2}]), HYPER)


# --- delta and bidegrees ----------------------------------------------------


def test_delta_examples():
    assert delta(u, HYPER) == z * zb
    assert delta(u * u, HYPER) == (u * z * zb).scale(2)
    assert delta(delta(u * u, HYPER), HYPER) == (z * zb * z * zb).scale(2)


@settings(max_examples=100, deadline=None)
@given(models(max_n=2, max_d=3).flatmap(lambda m: st.tuples(st.just(m), polys(Env.cr(m.n, m.d), 4, 3))))
def test_delta_squared_is_second_derivative_form(args):
    model, phi = args
    env = phi.env
    forms = hermitian_form_polys(model, env)
    want = MultiPoly.zero(env)
    for s in range(model.d):
        for t in range(model.d):
            want = want + phi.diff(env.u(s)).diff(env.u(t)) * forms[s] * forms[t]
    assert delta(delta(phi, model), model) == want


def test_extract_bidegree_examples():
    env = Env.cr(1, 2)
    p = MultiPoly.monomial(env, (1, 1, 0, 1))
    assert extract_bidegree(p, 1, 1) == p
    assert extract_bidegree(p, 2, 0).is_zero()
    w_img = u + (zb * z).scale(I)
    assert extract_bidegree(w_img * w_img, 1, 1) == (u * z * zb).scale(GaussQ(0, 2))


# --- weighted decomposition -------------------------------------------------


def test_decompose_examples():
    (c,) = decompose_weighted(pair(1, 1, f=[{(1, 0): 1}]))
    assert c.weight == 1
    (c,) = decompose_weighted(pair(1, 1, g=[{(0, 1): 1}]))
    assert c.weight == 2
    (c,) = decompose_weighted(pair(1, 1, f=[{(1, 1): 1, (3, 0): 1}]))
    assert c.weight == 3 and len(c.pair.f[0]) == 2


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 2).flatmap(lambda n: st.integers(1, 2).flatmap(lambda d: hol_pairs(n, d, 4, 3))))
def test_decomposition_sums_back_and_scales(p):
    parts = decompose_weighted(p)
    total = HolMapPair.zero(p.n, p.d)
    for c in parts:
        assert c.scaling_identity_holds()
        total = total + c.pair
    assert total == p
    assert len({c.weight for c in parts}) == len(parts)


# --- direct and general systems ---------------------------------------------


def _vec(p: HolMapPair):
    out = {}
    for ci, comp in enumerate(p.components()):
        for e, c in comp.terms().items():
            out[(ci, e, 0)] = c.re
            out[(ci, e, 1)] = c.im
    return {k: v for k, v in out.items() if v}


def in_span(p: HolMapPair, basis) -> bool:
    vecs = [_vec(b) for b in basis]
    keys = sorted({k for v in vecs + [_vec(p)] for k in v})
    idx = {k: i for i, k in enumerate(keys)}
    rank = SparseSystem(len(keys), [{idx[k]: x for k, x in v.items()} for v in vecs]).rank()
    rank2 = SparseSystem(len(keys), [{idx[k]: x for k, x in v.items()} for v in vecs + [_vec(p)]]).rank()
    return rank == rank2


def test_unknown_count():
    for n, d in [(1, 1), (2, 2), (3, 3), (2, 4)]:
        layout = UnknownLayout.build(n, d, uniform_caps(2))
        assert layout.q == n * (1 + n + n * (n + 1) // 2) + d * (1 + n)
        assert len(layout.columns) == 2 * layout.q * len({c[1] for c in layout.columns})


def test_direct_line_one_kills_imaginary_g0():
    space = solve_jet_system(HYPER, 2, "direct")
    for b in space.basis:
        for e, c in b.g[0].terms().items():
            if e[0] == 0:
                assert c.im == 0


def test_direct_line_two_links_g1_to_f0():
    space = solve_jet_system(HYPER, 2, "direct")
    env = Env.hol(1, 1)
    for b in space.basis:
        f0 = b.f[0].filter(lambda e: e[0] == 0)
        g1 = b.g[0].filter(lambda e: e[0] == 1)
        # g1 = 2i conj(f0(w)) z restricted to w = u real: compare coefficientwise
        want = MultiPoly(env, {(1,) + e[1:]: GaussQ(0, 2) * c.conj() for e, c in f0.terms().items()})
        assert g1 == want


def test_direct_solutions_contain_scaling_field():
    space = solve_jet_system(HYPER, 2, "direct")
    assert in_span(pair(1, 1, f=[{(1, 0): 1}], g=[{(0, 1): 2}]), space.basis)


def test_general_solutions_contain_known_fields():
    space = solve_jet_system(HYPER, 4, "general")
    for p in (pair(1, 1, g=[{(0, 0): 1}]), pair(1, 1, f=[{(1, 0): 1}], g=[{(0, 1): 2}]), pair(1, 1, f=[{(1, 0): I}])):
        assert in_span(p, space.basis)
    assert not in_span(pair(1, 1, g=[{(0, 1): 1}]), space.basis)


@pytest.mark.parametrize("name", list(CATALOG))
def test_cap_one_contains_real_constants(name):
    model = CATALOG[name].model
    space = solve_jet_system(model, 1, "general")
    for s in range(model.d):
        g = [{} for _ in range(model.d)]
        g[s] = {(0,) * (model.n + model.d): 1}
        assert in_span(pair(model.n, model.d, g=g), space.basis)


def test_hyperquadric_has_eight_dimensional_algebra():
    for cap in (4, 5, 6):
        assert solve_jet_system(HYPER, cap, "direct").dimension == 8
        assert solve_jet_system(HYPER, cap, "general").dimension == 8


def test_degenerate_dimension_grows():
    dims = [solve_jet_system(FLAT, c, "direct").dimension for c in (2, 3, 4)]
    assert dims[0] < dims[1] < dims[2]
    dims = [solve_jet_system(FLAT, c, "general").dimension for c in (2, 3, 4)]
    assert dims[0] < dims[1] < dims[2]


@pytest.mark.parametrize("name", ["hyperquadric-c2", "diag-pair-c4", "ber-c6-codim4", "flat-b-not-a"])
def test_routes_agree_when_common_kernel_is_trivial(name):
    model = CATALOG[name].model
    for cap in (2, 3, 4):
        direct = solve_jet_system(model, reconciled_caps(cap), "direct")
        general = solve_jet_system(model, cap, "general")
        assert direct.dimension == general.dimension
        for b in direct.basis + general.basis:
            assert is_solution(b, model)


@pytest.mark.parametrize("name", ["hyperquadric-c2", "diag-pair-c4", "ber-c6-codim4"])
def test_extra_equation_is_redundant(name):
    model = CATALOG[name].model
    a = solve_jet_system(model, 3, "direct")
    b = solve_jet_system(model, 3, "direct", extra_equation=True)
    assert a.dimension == b.dimension
    assert all(in_span(x, a.basis) for x in b.basis)


def test_basis_satisfies_assembled_system():
    system = assemble_system_direct(DIAG, 3)
    space = solve_jet_system(DIAG, 3, "direct")
    for v in space.vectors:
        assert system.residual(v)
    system = assemble_system_general(DIAG, 3)
    space = solve_jet_system(DIAG, 3, "general")
    for v in space.vectors:
        assert system.residual(v)


def test_linear_combinations_are_solutions():
    space = solve_jet_system(DIAG, 3, "general")
    rng = random.Random(4)
    for _ in range(10):
        total = HolMapPair.zero(2, 2)
        for b in space.basis:
            total = total + b.scale(Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
        assert is_solution(total, DIAG)


def test_bad_caps():
    with pytest.raises(ValueError):
        assemble_system_general(HYPER, 0)
    with pytest.raises(ValueError):
        solve_jet_system(HYPER, 2, "other")


# --- reports ----------------------------------------------------------------


def test_degree_bounds_hold_for_codim3():
    space = solve_jet_system(CODIM3, 4, "general")
    assert all(degree_bounds(space).values())
    assert truncation_report(space).ok


def test_truncation_report_flags_common_kernel():
    space = solve_jet_system(get_entry("corner-a-not-b").model, 3, "general")
    report = truncation_report(space)
    assert not report.ok
    assert any(label.startswith("f") and zdeg >= 3 for _, label, zdeg in report.violations)


def test_truncation_report_clean_for_hyperquadric():
    assert truncation_report(solve_jet_system(HYPER, 6, "general")).ok


# --- characteristic set -----------------------------------------------------


def test_pd_system_shape_and_constant_term():
    p = pd_system(CODIM3)
    q = 3 * (1 + 3 + 6) + 3 * 4
    assert p.shape[1] == 2 * q
    assert p.constant_term_rows() == p.evaluate([0, 0, 0])


def test_char_variety_examples():
    assert char_variety_test(CODIM3, [0, 0, 0])
    assert not char_variety_test(CODIM3, [1, 0, 0])
    assert char_variety_test(FLAT, [1])


def test_probes_are_deterministic_and_nonzero():
    a = characteristic_probes(3)
    assert a == characteristic_probes(3)
    assert len(a) == 20 and len(set(a)) == 20
    assert all(any(v) for v in a)
    assert any(x.im for x in a[-1])


# --- 2-jet determination ----------------------------------------------------


IDENTITY = pair(1, 1, f=[{(1, 0): 1}], g=[{(0, 1): 1}])


def test_jet_check_identical_pairs():
    assert jet_determination_check(HYPER, IDENTITY, IDENTITY)


def test_jet_check_rejects_non_solution_difference():
    bumped = pair(1, 1, f=[{(1, 0): 1, (1, 2): 1}], g=[{(0, 1): 1}])
    with pytest.raises(NotAutomorphismCandidate):
        jet_determination_check(HYPER, IDENTITY, bumped)


def test_jet_check_cap_too_small():
    with pytest.raises(CapTooSmall):
        jet_determination_check(HYPER, IDENTITY, pair(1, 1, f=[{(1, 0): 1}], g=[{(0, 3): 1}]), cap=2)


def test_jet_check_on_solution_space():
    space = solve_jet_system(HYPER, 4, "general")
    a = IDENTITY + space.basis[0].scale(3)
    b = IDENTITY + space.basis[1]
    # different 2-jets: nothing to check, still true
    assert jet_determination_check(HYPER, a, b)
    # equal 2-jets force equality; the only solution with zero 2-jet is 0
    assert jet_determination_check(HYPER, a, IDENTITY + space.basis[0].scale(Fraction(6, 2)))
    assert two_jet_kernel_dimension(space) == 0
