import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hig import serialize
from hig.curvature import CurvatureMeasure, delta, n_measure
from hig.curved import iso_push, kinematic_lambda
from hig.local import FreeCM, K_generator, semilocal
from hig.polynomials import TSPoly
from hig.scalars import PI, ZERO, Scalar
from hig.valuations import FAMILIES, chi, kinematic, random_valuation

fracs = st.fractions(min_value=-10 ** 30, max_value=10 ** 30, max_denominator=10 ** 20)


@st.composite
def scalars(draw):
    num = draw(st.lists(fracs, min_size=1, max_size=4))
    den = draw(st.lists(fracs, min_size=1, max_size=3).filter(any))
    return Scalar.from_parts(num, den, draw(st.integers(-3, 3)))


def through_text(data):
    return json.loads(json.dumps(data))


@given(scalars())
def test_scalar_round_trip(x):
    data = serialize.scalar_to_json(x)
    assert serialize.scalar_from_json(through_text(data)) == x
    # big integers travel as decimal strings
    assert all(isinstance(t[0], str) and isinstance(t[1], str) for t in data["num"] + data["den"])


def test_scalar_format():
    assert serialize.scalar_to_json(2 / PI) == {"num": [["2", "1", -1]], "den": [["1", "1", 0]]}
    assert serialize.scalar_to_json(ZERO) == {"num": [], "den": [["1", "1", 0]]}
    assert serialize.scalar_from_json({"num": [["1", "2", 0], ["1", "2", 0]]}) == 1


def test_scalar_errors():
    with pytest.raises(serialize.SerializationError):
        serialize.scalar_from_json({"num": [["1", "0", 0]]})
    with pytest.raises(serialize.SerializationError):
        serialize.scalar_from_json({"num": [["1", "1"]]})
    with pytest.raises(serialize.SerializationError):
        serialize.scalar_from_json({"num": [["1", "1", 0]], "den": [["0", "1", 0]]})
    with pytest.raises(serialize.SerializationError):
        serialize.to_json(object())


def test_tspoly_format_and_order():
    p = TSPoly(2, {(0, 1): 3, (1, 0): 1, (2, 0): PI})
    data = serialize.tspoly_to_json(p)
    assert [(t["t"], t["s"]) for t in data["terms"]] == [(1, 0), (2, 0), (0, 1)]
    assert "cap" not in data
    assert serialize.tspoly_from_json(through_text(data)) == p
    q = TSPoly(1, {(3, 0): 1}, cap=3)
    assert serialize.tspoly_from_json(through_text(serialize.tspoly_to_json(q))) == q


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("basis", FAMILIES)
def test_valuation_round_trip(n, basis):
    v = random_valuation(n, random.Random(n))
    data = serialize.valuation_to_json(v, basis)
    assert data["basis"] == basis
    assert serialize.valuation_from_json(through_text(data)) == v


def test_valuation_bad_basis():
    with pytest.raises(serialize.SerializationError):
        serialize.valuation_from_json({"n": 1, "basis": "klain", "terms": []})


@pytest.mark.parametrize("n", [1, 2, 3])
def test_structured_round_trips(n):
    rng = random.Random(n)
    v = random_valuation(n, rng)
    T = kinematic(chi(n), "mu", "prim")
    back = serialize.tensor_from_json(through_text(serialize.tensor_to_json(T)))
    assert (back.left, back.right) == ("mu", "prim") and back == T

    phi = delta(n, 1, 0) + CurvatureMeasure.label(n, "Vol", 2 * n, n).scale(PI)
    if n > 1:
        phi = phi + n_measure(n, 1, 0)
    assert serialize.curvature_from_json(through_text(serialize.curvature_to_json(phi))) == phi

    for basis in ("mu_lambda", "flat_mono"):
        cv = iso_push(v, Fraction(-2, 3))
        data = serialize.curved_to_json(cv, basis)
        assert data["lambda"] == {"num": "-2", "den": "3"}
        assert serialize.curved_from_json(through_text(data)) == cv

    CT = kinematic_lambda(iso_push(v, 2))
    back = serialize.curved_tensor_from_json(through_text(serialize.curved_tensor_to_json(CT)))
    assert back.lam == CT.lam and back.same_coefficients(CT)

    x = FreeCM(v, random_valuation(n, rng))
    assert serialize.freecm_from_json(through_text(serialize.freecm_to_json(x))) == x

    for which in ("Delta00", "N10"):
        K = K_generator(which, n)
        assert serialize.freecm_tensor_from_json(through_text(serialize.freecm_tensor_to_json(K))) == K
        S = semilocal(which, n)
        assert serialize.semilocal_from_json(through_text(serialize.semilocal_to_json(S))) == S


def test_emission_is_deterministic():
    T = kinematic(chi(2), "tau")
    assert serialize.dumps(T) == serialize.dumps(serialize.tensor_from_json(json.loads(serialize.dumps(T))))


def test_matrix_round_trip():
    M = [[PI, ZERO], [1 / (PI + 1), Scalar(Fraction(-3, 7))]]
    assert serialize.matrix_from_json(through_text(serialize.matrix_to_json(M))) == M
