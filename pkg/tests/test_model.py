import json
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from quadric_cr.catalog import get_entry
from quadric_cr.exact import I, ExactMatrix, GaussQ, rank
from quadric_cr.model import (
    HermitianMatrix,
    ModelError,
    ModelParseError,
    QuadricModel,
    SingularTransformError,
    change_coordinates,
    dumps_model,
    levi,
    loads_model,
    polarization_check,
    sesqui,
)
from quadric_cr.nondegeneracy import (
    check_condition_a,
    check_condition_b,
    check_cone_generating,
    check_finite_type_two,
    check_tumanov,
    corner_model,
)

from helpers import models, small_gauss, vectors

CODIM3 = get_entry("beloshapka-c6-codim3").model
CODIM4 = get_entry("ber-c6-codim4").model


def test_levi_examples():
    assert levi(CODIM3, [1, 0, 0]).components == (1, 0, 0)
    assert levi(CODIM3, [1, 1, 0]).components == (1, 2, 0)
    assert levi(CODIM3, [0, 0, 0]).components == (0, 0, 0)


def test_levi_length_mismatch():
    with pytest.raises(ModelError):
        levi(CODIM3, [1, 0])


def test_sesqui_examples():
    assert sesqui(CODIM4, [1, 0], [0, 1]).components == (0, 0, 1, I)
    assert sesqui(CODIM4, [0, 0], [1, 2]).components == (0, 0, 0, 0)
    z = [GaussQ(1, 2), GaussQ(-1)]
    assert tuple(GaussQ(x) for x in levi(CODIM4, z)) == sesqui(CODIM4, z, z).components
    with pytest.raises(ModelError):
        sesqui(CODIM4, [1, 0], [1])


def test_polarization_examples():
    assert polarization_check(CODIM3, [1, 0, 0], [0, 1, 0])
    assert polarization_check(CODIM4, [1, I], [0, 1])


def test_hermitian_validation():
    with pytest.raises(ModelError):
        HermitianMatrix.from_rows([[1, 2], [3, 1]])
    with pytest.raises(ModelError):
        HermitianMatrix.from_rows([[I, 0], [0, 1]])
    with pytest.raises(ModelError):
        QuadricModel(2, 2, (HermitianMatrix.zeros(2),))


@settings(max_examples=200, deadline=None)
@given(models(), st.data())
def test_levi_is_real_and_sesqui_is_hermitian(model, data):
    z = data.draw(vectors(model.n))
    zp = data.draw(vectors(model.n))
    assert all(isinstance(x, (int, Fraction)) for x in levi(model, z))
    s1 = sesqui(model, z, zp).components
    s2 = sesqui(model, zp, z).components
    assert s1 == tuple(x.conj() for x in s2)
    assert polarization_check(model, z, zp)


@settings(max_examples=100, deadline=None)
@given(models(), st.data(), small_gauss)
def test_sesqui_linearity(model, data, c):
    z, zp, zq = (data.draw(vectors(model.n)) for _ in range(3))
    lhs = sesqui(model, z, [a + c * b for a, b in zip(zp, zq)]).components
    rhs = [x + c * y for x, y in zip(sesqui(model, z, zp), sesqui(model, z, zq))]
    assert list(lhs) == rhs
    lhs = sesqui(model, [a + c * b for a, b in zip(zp, zq)], z).components
    rhs = [x + c.conj() * y for x, y in zip(sesqui(model, zp, z), sesqui(model, zq, z))]
    assert list(lhs) == rhs


def test_change_coordinates_examples():
    assert change_coordinates(CODIM3, ExactMatrix.identity(3)) == CODIM3
    scaled = change_coordinates(CODIM3, ExactMatrix.diag([2, 1, 1]))
    assert scaled[0][0, 0] == 4 * CODIM3[0][0, 0]
    with pytest.raises(SingularTransformError):
        change_coordinates(CODIM3, ExactMatrix.diag([1, 0, 1]))


def test_change_coordinates_aligns_common_kernel():
    # e3 spans the common kernel; C sends e1 to it
    model = corner_model(3, 2)
    c = ExactMatrix.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    new = change_coordinates(model, c)
    for a in new.matrices:
        assert all(a[i, 0] == 0 and a[0, i] == 0 for i in range(3))


@settings(max_examples=200, deadline=None)
@given(models(), st.data())
def test_levi_pullback(model, data):
    c = data.draw(st.lists(st.lists(small_gauss, min_size=model.n, max_size=model.n), min_size=model.n, max_size=model.n).map(ExactMatrix.from_rows))
    assume(rank(c) == model.n)
    z = data.draw(vectors(model.n))
    assert levi(change_coordinates(model, c), z) == levi(model, c.apply(z))


@settings(max_examples=60, deadline=None)
@given(models(max_n=3, max_d=3), st.data())
def test_conditions_invariant_under_linear_change(model, data):
    c = data.draw(st.lists(st.lists(small_gauss, min_size=model.n, max_size=model.n), min_size=model.n, max_size=model.n).map(ExactMatrix.from_rows))
    assume(rank(c) == model.n)
    new = change_coordinates(model, c)
    for check in (check_condition_a, check_condition_b, check_cone_generating, check_finite_type_two):
        assert check(new) == check(model)
    assert check_tumanov(new).holds == check_tumanov(model).holds


# --- model file format ------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(models())
def test_round_trip(model):
    assert loads_model(dumps_model(model)) == model


def test_entry_forms():
    doc = {"n": 2, "d": 1, "matrices": [[[1, {"re": "1/2", "im": "-3"}], [{"re": "1/2", "im": "3"}, "-2/3"]]]}
    m = loads_model(json.dumps(doc))
    assert m[0][0, 1] == GaussQ(Fraction(1, 2), -3)
    assert m[0][1, 1] == Fraction(-2, 3)


def test_non_hermitian_names_entry():
    doc = {"n": 2, "d": 2, "matrices": [[[1, 0], [0, 1]], [[0, 1], [2, 0]]]}
    with pytest.raises(ModelParseError) as info:
        loads_model(json.dumps(doc))
    assert info.value.location == (1, 1, 0)
    assert "matrix 2" in str(info.value) and "row 2" in str(info.value)


@pytest.mark.parametrize(
    "doc",
    [
        {"n": 1, "d": 1, "matrices": [[[1.5]]]},
        {"n": 1, "d": 1},
        {"n": 1, "d": 2, "matrices": [[[1]]]},
        {"n": 2, "d": 1, "matrices": [[[1, 0]]]},
        {"n": 1, "d": 1, "matrices": [[["x"]]]},
        {"n": 0, "d": 1, "matrices": []},
    ],
)
def test_bad_documents(doc):
    with pytest.raises(ModelParseError):
        loads_model(json.dumps(doc))


def test_invalid_json():
    with pytest.raises(ModelParseError):
        loads_model("{not json")
