from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hig.scalars import (ONE, PI, ZERO, Scalar, SingularMatrixError, as_scalar, binomial, determinant,
                         double_factorial, inverse, mat_mul, nullspace, omega, rank, solve_linear)

fracs = st.fractions(min_value=-6, max_value=6, max_denominator=6)


@st.composite
def scalars(draw):
    num = draw(st.lists(fracs, min_size=1, max_size=3))
    den = draw(st.lists(fracs, min_size=1, max_size=3).filter(lambda d: any(d)))
    shift = draw(st.integers(-2, 2))
    return Scalar.from_parts(num, den, shift)


def test_spec_examples():
    assert 1 / PI + 1 / PI == 2 / PI
    assert (PI ** 2 / 2) * (2 / PI) == PI
    assert ((PI + 1) / PI) / (PI + 1) == 1 / PI


def test_canonical_form():
    x = (PI * PI - 1) / (2 * PI - 2)
    assert x == (PI + 1) / 2
    assert x.den == (Fraction(1),)
    y = (PI + 1) / (3 * PI + 6)
    assert y.den[-1] == 1
    assert Scalar(Fraction(3, 6)) == Fraction(1, 2)
    assert hash(Scalar(Fraction(1, 2))) == hash(Fraction(1, 2))


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_omega():
    assert omega(0) == 1
    assert omega(1) == 2
    assert omega(2) == PI
    assert omega(3) == Fraction(4, 3) * PI
    assert omega(4) == PI ** 2 / 2


def test_omega_products_match_closed_form():
    # omega_k = pi^{k/2} / Gamma(k/2 + 1); compare the squared quantities, which are rational in pi
    from math import factorial
    for k in range(11):
        if k % 2 == 0:
            want_sq = PI ** k / factorial(k // 2) ** 2
        else:
            m = k // 2
            # Gamma(m + 3/2) = (2m+1)!! sqrt(pi) / 2^{m+1}
            want_sq = PI ** k * Fraction(4 ** (m + 1), double_factorial(2 * m + 1) ** 2) / PI
        assert omega(k) * omega(k) == want_sq
        for j in range(11):
            assert omega(k) * omega(j) == omega(j) * omega(k)


def test_double_factorial_and_binomial():
    assert double_factorial(-1) == 1
    assert double_factorial(0) == 1
    assert double_factorial(7) == 105
    assert binomial(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert binomial(5, 2) == 10


@given(scalars(), scalars(), scalars())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == ZERO
    if a:
        assert a * a.inverse() == ONE
        assert (b / a) * a == b


@given(scalars())
def test_evaluate_consistent(a):
    import math
    if a:
        assert math.isclose(a.evaluate(math.pi) * a.inverse().evaluate(math.pi), 1.0, rel_tol=1e-9)


def test_solve_linear_examples():
    I = [[ONE, ZERO], [ZERO, ONE]]
    rhs = [[as_scalar(3)], [PI]]
    assert solve_linear(I, rhs) == rhs
    M = [[PI, ZERO], [ZERO, as_scalar(2)]]
    assert solve_linear(M, [[ONE], [ONE]]) == [[1 / PI], [as_scalar(Fraction(1, 2))]]


def test_solve_linear_random_residual(rng):
    for _ in range(5):
        M = [[as_scalar(Fraction(rng.randint(-5, 5), rng.randint(1, 3))) for _ in range(4)] for _ in range(4)]
        if not determinant(M):
            continue
        rhs = [[as_scalar(rng.randint(-3, 3)) + PI * rng.randint(-2, 2)] for _ in range(4)]
        X = solve_linear(M, rhs)
        assert mat_mul(M, X) == rhs
        assert mat_mul(M, inverse(M)) == [[ONE if i == j else ZERO for j in range(4)] for i in range(4)]


def test_singular_reports_rank_and_kernel():
    M = [[ONE, PI], [as_scalar(2), 2 * PI]]
    with pytest.raises(SingularMatrixError) as err:
        solve_linear(M, [[ONE], [ONE]])
    assert err.value.rank == 1
    v = err.value.kernel_vector
    assert mat_mul(M, [[x] for x in v]) == [[ZERO], [ZERO]]
    assert any(v)
    assert rank(M) == 1
    assert len(nullspace(M, 2)) == 1
