import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from hig.polynomials import TSPoly
from hig.scalars import ONE, PI, ZERO, Scalar, mat_mul, omega
from hig.valuations import (ContextMismatch, InadmissibleIndex, TensorElement, Valuation, a_coeff, algebra,
                            chi, convolve, dim_val, family_indices, fourier, kinematic, mu_polynomial,
                            mu_to_mono, pd_pair, prim_to_tau, principal_kinematic_closed_form,
                            random_valuation, reduce, rho, s, t, tau_to_mu, u_to_mono, val_mul, vol)


def mu(n, k, q):
    return Valuation.basis_element(n, "mu", k, q)


def prim(n, k, r):
    return Valuation.basis_element(n, "prim", k, r)


def poly(n, terms):
    return reduce(TSPoly(n, terms))


seeds = st.integers(0, 10 ** 6)


# reduction and dimensions ------------------------------------------------

def test_reduce_examples():
    assert reduce(TSPoly.s(1)) == poly(1, {(2, 0): Fraction(1, 2)})
    assert reduce(TSPoly(1, {(3, 0): 1}, cap=3)).is_zero()
    for n in (1, 2, 3):
        v = random_valuation(n, random.Random(n))
        assert reduce(v.to_poly()) == v


@pytest.mark.parametrize("n", range(1, 7))
def test_dimension_law(n):
    alg = algebra(n)
    for k in range(2 * n + 1):
        assert alg.quotient_rank(k) == dim_val(n, k) == min(k // 2, (2 * n - k) // 2) + 1


def test_dim_examples():
    assert dim_val(2, 2) == 2
    assert dim_val(1, 1) == 1
    assert dim_val(3, 0) == 1
    with pytest.raises(ValueError):
        dim_val(2, 5)


def test_reduced_representatives_use_canonical_monomials():
    for n in (2, 3):
        for (k, p) in algebra(n).mono_labels:
            assert 0 <= p <= min(k // 2, (2 * n - k) // 2)


# products --------------------------------------------------------------

def test_product_examples():
    assert t(1) * t(1) == mu(1, 2, 1).scale(2 / PI)
    assert mu(1, 1, 0) * mu(1, 1, 0) == vol(1).scale(PI / 2)
    assert mu(1, 1, 0) == t(1).scale(PI / 2)
    for n in (1, 2, 3):
        phi = random_valuation(n, random.Random(7))
        assert chi(n) * phi == phi == phi * chi(n)
        assert val_mul(chi(n), phi) == phi


def test_context_mismatch():
    with pytest.raises(ContextMismatch):
        t(2) * t(3)
    with pytest.raises(ContextMismatch):
        t(2) + t(3)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@given(seed=seeds)
def test_product_ring_laws(n, seed):
    rng = random.Random(seed)
    a, b, c = (random_valuation(n, rng) for _ in range(3))
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_grading():
    for n in (2, 3):
        for j in range(2 * n + 1):
            for k in range(2 * n + 1 - j):
                a = random_valuation(n, random.Random(j), homogeneous=j)
                b = random_valuation(n, random.Random(k + 10), homogeneous=k)
                assert set((a * b).degrees()) <= {j + k}


# basis constructors ----------------------------------------------------

def test_mu_examples():
    for n in (1, 2, 3):
        assert mu_to_mono(n, 0, 0) == chi(n)
        assert mu_to_mono(n, 1, 0) == t(n).scale(PI / 2)
        u = TSPoly(n, {(0, 1): 4, (2, 0): -1})
        want = (u ** n).scale(PI ** (2 * n) / (omega(2 * n) * factorial(2 * n)))
        assert mu_to_mono(n, 2 * n, n) == reduce(want)
        assert vol(n) == mu(n, 2 * n, n)


def test_mu_polynomial_lambda_zero_dictionary():
    n = 3
    for k in range(2 * n + 1):
        for q in family_indices(n, "mu", k):
            assert mu_to_mono(n, k, q) == reduce(mu_polynomial(n, k, q))


def test_tau_examples():
    for n in (2, 3, 4):
        assert tau_to_mu(n, 2, 0) == {(2, 0): 1, (2, 1): 1}
        assert Valuation.basis_element(n, "tau", 2, 0) == mu(n, 2, 0) + mu(n, 2, 1)
        for k in range(n + 1):
            assert tau_to_mu(n, k, k // 2) == {(k, k // 2): 1}
    for n in (3, 4):
        # mu_{4,1} needs n >= 3
        assert tau_to_mu(n, 4, 1) == {(4, 1): 1, (4, 2): 2}
    # above the middle degree the sum runs over the existing mu_{k,i} only
    assert tau_to_mu(2, 4, 1) == {(4, 2): 2}
    with pytest.raises(InadmissibleIndex):
        tau_to_mu(2, 2, 2)


def test_tau_basis_is_indexed_by_kahler_angle_count():
    for n in (1, 2, 3, 4):
        for k in range(2 * n + 1):
            assert family_indices(n, "tau", k) == list(range(dim_val(n, k)))


def test_prim_examples():
    for n in (1, 2, 3, 4):
        for k in range(2 * n + 1):
            assert prim_to_tau(n, k, 0) == {(k, 0): factorial(k)}
        assert prim(n, 0, 0) == chi(n)
        if n >= 1 and 1 in family_indices(n, "prim", 2):
            tau20 = Valuation.basis_element(n, "tau", 2, 0)
            tau21 = Valuation.basis_element(n, "tau", 2, 1)
            assert prim(n, 2, 1) == tau21 - tau20.scale(Fraction(1, 2 * n - 1))


def test_u_examples():
    for n in (1, 2, 3):
        assert u_to_mono(n, 1, 0) == t(n).scale(PI / 2)
        assert u_to_mono(n, 0, 0) == chi(n)
        if n >= 1 and 1 in family_indices(n, "u", 2):
            assert u_to_mono(n, 2, 1) == s(n).scale(Fraction(1, n))


def test_inadmissible_indices():
    with pytest.raises(InadmissibleIndex):
        mu_to_mono(2, 2, 2)
    with pytest.raises(InadmissibleIndex):
        prim_to_tau(2, 2, 2)
    with pytest.raises(InadmissibleIndex):
        mu(1, 2, 0)
    with pytest.raises(InadmissibleIndex):
        a_coeff(1, 1, 1)


@pytest.mark.parametrize("n", range(1, 6))
def test_basis_round_trip(n):
    alg = algebra(n)
    d = alg.dim
    I = [[ONE if i == j else ZERO for j in range(d)] for i in range(d)]
    for fam in ("u", "mu", "tau", "prim"):
        assert mat_mul(alg.basis_matrix(fam), alg.basis_inverse(fam)) == I
    # mono -> mu -> tau -> prim -> mono
    phi = random_valuation(n, random.Random(n))
    c = phi.coeffs
    for fam in ("mu", "tau", "prim"):
        c = alg.from_family(alg.to_family(c, fam), fam)
    assert list(c) == list(phi.coeffs)


# Fourier and convolution -----------------------------------------------

def test_fourier_examples():
    # the index rule fixes the middle degree at n = 2: mu_{2,0} -> mu_{2,0}, mu_{2,1} -> mu_{2,1}
    assert fourier(mu(2, 2, 0)) == mu(2, 2, 0)
    assert fourier(mu(2, 2, 1)) == mu(2, 2, 1)
    assert fourier(mu(2, 1, 0)) == mu(2, 3, 1)
    for n in (1, 2, 3):
        assert fourier(chi(n)) == vol(n)
        assert fourier(fourier(t(n))) == t(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_fourier_on_mu_basis(n):
    for k in range(2 * n + 1):
        for q in family_indices(n, "mu", k):
            assert fourier(mu(n, k, q)) == mu(n, 2 * n - k, n - k + q)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@given(seed=seeds)
def test_fourier_intertwines(n, seed):
    rng = random.Random(seed)
    a, b = random_valuation(n, rng), random_valuation(n, rng)
    assert fourier(fourier(a)) == a
    assert fourier(a * b) == convolve(fourier(a), fourier(b))


def test_convolution_examples():
    for n in (1, 2, 3):
        phi = random_valuation(n, random.Random(3))
        assert convolve(vol(n), phi) == phi
        assert convolve(chi(n), chi(n)).is_zero()
        assert convolve(t(n), vol(n)) == t(n)


@pytest.mark.parametrize("n", [2, 3])
@given(seed=seeds)
def test_convolution_laws(n, seed):
    rng = random.Random(seed)
    a, b, c = (random_valuation(n, rng) for _ in range(3))
    assert convolve(a, b) == convolve(b, a)
    assert convolve(convolve(a, b), c) == convolve(a, convolve(b, c))
    j, k = rng.randint(0, 2 * n), rng.randint(0, 2 * n)
    x = random_valuation(n, rng, homogeneous=j)
    y = random_valuation(n, rng, homogeneous=k)
    z = convolve(x, y)
    assert set(z.degrees()) <= ({j + k - 2 * n} if j + k >= 2 * n else set())


# Poincare duality ------------------------------------------------------

def test_pd_examples():
    for n in (1, 2, 3):
        assert pd_pair(chi(n), vol(n)) == ONE
        assert pd_pair(t(n), chi(n)) == ZERO
    assert pd_pair(t(1), t(1)) == 2 / PI


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_prim_gram_antidiagonal(n):
    alg = algebra(n)
    labels = alg.labels("prim")
    G = alg.gram("prim")
    for i, (k, r) in enumerate(labels):
        for j, (k2, r2) in enumerate(labels):
            if G[i][j]:
                assert k + k2 == 2 * n and r == r2
        assert any(G[i])


# constants -------------------------------------------------------------

def test_a_coeff_examples():
    assert a_coeff(1, 0, 0) == Fraction(1, 2)
    assert a_coeff(1, 1, 0) == 2 / PI
    for n in range(1, 6):
        for k in range(2 * n + 1):
            for r in family_indices(n, "prim", k):
                assert a_coeff(n, k, r) == a_coeff(n, 2 * n - k, r)


def test_a_coeff_independent_formula():
    # re-evaluate the factorial / double-factorial product with math.prod
    from math import comb, prod

    def df(m):
        return prod(range(m, 0, -2)) if m > 0 else 1

    for n in range(1, 5):
        for k in range(2 * n + 1):
            for r in family_indices(n, "prim", k):
                rat = Fraction(factorial(n - r) * df(2 * n - 2 * r + 1),
                               8 ** r * factorial(2 * n - 4 * r) * df(2 * n - 4 * r + 1) * comb(n, 2 * r))
                assert a_coeff(n, k, r) == omega(k) * omega(2 * n - k) * rat / PI ** n


# kinematic -------------------------------------------------------------

def test_classical_planar_formula():
    K = kinematic(chi(1), "mu")
    want = TensorElement.from_terms(1, "mu", "mu", [
        ((0, 0), (2, 1), 1), ((1, 0), (1, 0), 2 / PI), ((2, 1), (0, 0), 1)])
    assert K == want


def test_classical_formula_from_closed_form_oracle():
    # a_{1,0,0} = a_{1,2,0} = 1/2, pi_{k,0} = k! tau_{k,0}
    assert principal_kinematic_closed_form(1) == kinematic(chi(1))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_principal_kinematic_formula(n):
    K = kinematic(chi(n), "prim")
    assert K.matrix == principal_kinematic_closed_form(n).matrix


@pytest.mark.parametrize("n", [1, 2, 3])
def test_kinematic_of_vol(n):
    assert kinematic(vol(n)) == TensorElement.outer(vol(n), vol(n))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_kinematic_basis_independence(n):
    phi = random_valuation(n, random.Random(n + 40))
    K = kinematic(phi)
    for fam in ("u", "mu", "tau", "prim"):
        assert kinematic(phi, fam).in_bases("mono") == K
        assert kinematic(phi, fam, "mono").in_bases("mono").matrix == K.matrix


@pytest.mark.parametrize("n", [1, 2, 3])
def test_kinematic_cocommutative(n):
    for phi in (chi(n), t(n), s(n), random_valuation(n, random.Random(n))):
        K = kinematic(phi)
        assert K.swap() == K


@pytest.mark.parametrize("n", range(1, 5))
@given(seed=seeds)
def test_dual_basis_identity(n, seed):
    phi = random_valuation(n, random.Random(seed))
    acc = Valuation.zero(n)
    for k in range(2 * n + 1):
        for r in family_indices(n, "prim", k):
            acc = acc + prim(n, k, r).scale(a_coeff(n, k, r) * pd_pair(prim(n, 2 * n - k, r), phi))
    assert acc == phi


# rho -------------------------------------------------------------------

def test_rho_examples():
    for n in (1, 2, 3):
        assert rho(n, 1, 0) == chi(n).scale(Fraction(-1, 3))


@pytest.mark.parametrize("n", range(1, 5))
def test_rho_degree(n):
    for k in range(1, 2 * n):
        for r in family_indices(n, "prim", k):
            assert set(rho(n, k, r).degrees()) <= {k - 1}


def test_rho_inadmissible():
    with pytest.raises(InadmissibleIndex):
        rho(2, 1, 1)
    with pytest.raises(InadmissibleIndex):
        rho(2, 7, 0)
