"""Curved valuation algebras on the complex space forms CP^n_lambda.

A curved valuation is stored by its preimage (``flat``) under the algebra
isomorphism Val^U(n) -> V^lambda given by ``s -> s, t -> t sqrt(1 - lambda s)``.
Products are therefore flat products.  The curvature parameter lambda is an
exact rational, never a symbol.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .polynomials import TSPoly, sqrt_series
from .scalars import ONE, ZERO, Scalar, as_scalar, inverse, mat_mul, omega, transpose
from .valuations import (ContextMismatch, TensorElement, Valuation, algebra, family_indices,
                         kinematic)


def _lam(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class CurvedValuation:
    __slots__ = ("lam", "flat")

    def __init__(self, flat: Valuation, lam):
        self.flat = flat
        self.lam = _lam(lam)

    @property
    def n(self):
        return self.flat.n

    def _check(self, other):
        if not isinstance(other, CurvedValuation):
            raise TypeError("expected CurvedValuation")
        if other.n != self.n or other.lam != self.lam:
            raise ContextMismatch("curved valuations from different (n, lambda)")

    def __add__(self, other):
        self._check(other)
        return CurvedValuation(self.flat + other.flat, self.lam)

    def __sub__(self, other):
        self._check(other)
        return CurvedValuation(self.flat - other.flat, self.lam)

    def __neg__(self):
        return CurvedValuation(-self.flat, self.lam)

    def scale(self, c):
        return CurvedValuation(self.flat.scale(c), self.lam)

    def __mul__(self, other):
        if isinstance(other, CurvedValuation):
            self._check(other)
            return CurvedValuation(self.flat * other.flat, self.lam)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, CurvedValuation):
            return NotImplemented
        return self.lam == other.lam and self.flat == other.flat

    def __hash__(self):
        return hash((self.lam, self.flat))

    def is_zero(self):
        return self.flat.is_zero()

    def coordinates(self) -> dict:
        """Nonzero coefficients over the mu^lambda basis."""
        ctx = curved_context(self.n, self.lam)
        vec = ctx.mu_lambda_coords(self.flat.coeffs)
        return {lab: c for lab, c in zip(ctx.labels, vec) if c}

    def __repr__(self):
        return f"CurvedValuation(n={self.n}, lambda={self.lam}, flat={self.flat.to_poly()})"


def iso_push(v: Valuation, lam) -> CurvedValuation:
    return CurvedValuation(v, lam)


def iso_pull(cv: CurvedValuation) -> Valuation:
    return cv.flat


def _one_minus_lam_s(n: int, lam: Fraction, cap=None) -> TSPoly:
    return TSPoly(n, {(0, 0): 1, (0, 1): -lam}, cap)


def curved_expression(cv: CurvedValuation) -> TSPoly:
    """Polynomial in the curved generators t, s representing ``cv``.

    Substitutes t -> t (1 - lambda s)^(1/2) into the flat representative.
    The result is not reduced (the curved ideal is the image of the flat one).
    """
    p = cv.flat.to_poly()
    return p.substitute_t(sqrt_series(_one_minus_lam_s(cv.n, cv.lam), Fraction(1, 2)))


def from_curved_expression(p: TSPoly, lam) -> CurvedValuation:
    """Inverse of :func:`curved_expression`: t -> t (1 - lambda s)^(-1/2), then reduce."""
    lam = _lam(lam)
    flat = p.substitute_t(sqrt_series(_one_minus_lam_s(p.n, lam, p.cap), Fraction(-1, 2)))
    return CurvedValuation(Valuation.from_poly(flat), lam)


def _v_power(n: int, lam: Fraction, m: int) -> TSPoly:
    """v^(m/2) with v = t^2 (1 - lambda s), i.e. t^m (1 - lambda s)^(m/2)."""
    base = _one_minus_lam_s(n, lam)
    return TSPoly(n, {(m, 0): 1}) * sqrt_series(base, Fraction(m, 2))


def mu_lambda_expression(n: int, k: int, q: int, lam) -> TSPoly:
    """mu^lambda_{k,q} written in the curved generators t, s."""
    lam = _lam(lam)
    if q not in family_indices(n, "mu", k):
        from .valuations import InadmissibleIndex
        raise InadmissibleIndex(f"mu^lambda({k},{q}) is not admissible for n={n}")
    v = TSPoly(n, {(2, 0): 1}) * _one_minus_lam_s(n, lam)
    u = TSPoly(n, {(0, 1): 4}) - v
    base = Scalar.pi_power(k) / omega(k)
    acc = TSPoly(n)
    for i in range(q, k // 2 + 1):
        c = base * Fraction((-1) ** (i + q) * comb(i, q), factorial(k - 2 * i) * factorial(2 * i))
        acc = acc + (_v_power(n, lam, k - 2 * i) * u ** i).scale(c)
    return _one_minus_lam_s(n, lam) * acc


def mu_lambda(n: int, k: int, q: int, lam) -> CurvedValuation:
    return from_curved_expression(mu_lambda_expression(n, k, q, lam), lam)


class CurvedContext:
    """Per-(n, lambda) tables: the mu^lambda basis, vol^* row and Gram matrix."""

    def __init__(self, n: int, lam: Fraction):
        self.n, self.lam = n, lam
        self.alg = algebra(n)
        self.labels = self.alg.labels("mu")

    @functools.cached_property
    def basis(self):
        """Flat coordinates of each mu^lambda_{k,q}, in label order."""
        return [mu_lambda(self.n, k, q, self.lam).flat.coeffs for k, q in self.labels]

    @functools.cached_property
    def basis_inverse(self):
        return inverse(transpose(self.basis))

    def mu_lambda_coords(self, flat_coeffs) -> list:
        inv = self.basis_inverse
        return [sum((inv[i][j] * c for j, c in enumerate(flat_coeffs) if c and inv[i][j]), ZERO)
                for i in range(len(inv))]

    @functools.cached_property
    def vol_star_row(self) -> list:
        # B and Gamma are given by forms (omega, 0) and globalize with zero
        # vol^*; among the Delta-expansions of the mu^lambda only mu^lambda_{2q,q}
        # reach Delta_{2n,n} = vol, with weight lambda^{n-q} n! / (pi^{n-q} q!).
        n, lam = self.n, self.lam
        row = []
        for k, q in self.labels:
            if k == 2 * q:
                row.append(Scalar.pi_power(q - n, lam ** (n - q) * Fraction(factorial(n), factorial(q))))
            else:
                row.append(ZERO)
        return row

    def vol_star(self, flat_coeffs) -> Scalar:
        coords = self.mu_lambda_coords(flat_coeffs)
        return sum((a * b for a, b in zip(self.vol_star_row, coords) if a and b), ZERO)

    def pd(self, x, y) -> Scalar:
        return self.vol_star(self.alg.multiply(x, y))

    @functools.cached_property
    def gram(self):
        B = self.basis
        return [[self.pd(B[i], B[j]) for j in range(len(B))] for i in range(len(B))]

    @functools.cached_property
    def gram_inverse(self):
        return inverse(self.gram)


@functools.lru_cache(maxsize=None)
def _context(n: int, lam: Fraction) -> CurvedContext:
    return CurvedContext(n, lam)


def curved_context(n: int, lam) -> CurvedContext:
    return _context(n, _lam(lam))


def curved_basis_element(n: int, k: int, q: int, lam) -> CurvedValuation:
    ctx = curved_context(n, lam)
    i = ctx.labels.index((k, q))
    return CurvedValuation(Valuation(ctx.alg, ctx.basis[i]), ctx.lam)


def from_mu_lambda(n: int, coeffs: dict, lam) -> CurvedValuation:
    ctx = curved_context(n, lam)
    pos = {lab: i for i, lab in enumerate(ctx.labels)}
    flat = [ZERO] * ctx.alg.dim
    for lab, c in coeffs.items():
        col = ctx.basis[pos[tuple(lab)]]
        c = as_scalar(c)
        flat = [f + c * b for f, b in zip(flat, col)]
    return CurvedValuation(Valuation(ctx.alg, flat), ctx.lam)


def vol_star(cv: CurvedValuation) -> Scalar:
    return curved_context(cv.n, cv.lam).vol_star(cv.flat.coeffs)


def pd_lambda(a: CurvedValuation, b: CurvedValuation) -> Scalar:
    a._check(b)
    return curved_context(a.n, a.lam).pd(a.flat.coeffs, b.flat.coeffs)


@dataclass
class CurvedTensor:
    """Element of V^lambda (x) V^lambda as a matrix over mu^lambda (x) mu^lambda."""
    n: int
    lam: Fraction
    matrix: list

    def terms(self):
        labels = algebra(self.n).labels("mu")
        return [(labels[i], labels[j], c) for i, row in enumerate(self.matrix)
                for j, c in enumerate(row) if c]

    def same_coefficients(self, other) -> bool:
        return self.n == other.n and [list(r) for r in self.matrix] == [list(r) for r in other.matrix]

    def as_flat_mu(self) -> TensorElement:
        """The same coefficient matrix read over the flat mu (x) mu basis."""
        return TensorElement(self.n, "mu", "mu", self.matrix)


def kinematic_lambda(phi: CurvedValuation) -> CurvedTensor:
    """Curved kinematic coproduct via normalized Poincare duality."""
    ctx = curved_context(phi.n, phi.lam)
    B = ctx.basis
    m = len(B)
    phiB = [ctx.alg.multiply(phi.flat.coeffs, B[k]) for k in range(m)]
    P = [[ctx.pd(phiB[k], B[l]) for l in range(m)] for k in range(m)]
    Ginv = ctx.gram_inverse
    return CurvedTensor(phi.n, phi.lam, mat_mul(mat_mul(Ginv, P), Ginv))


# ----------------------------------------------------------------------
# lambda-degree certification

class LambdaPoly:
    """Polynomial in lambda with coefficients in a module (Valuation or Scalar),
    tracking an a-priori degree bound that ignores cancellation."""

    __slots__ = ("coeffs", "bound")

    def __init__(self, coeffs: dict, bound: int):
        self.coeffs = {d: c for d, c in coeffs.items() if not _is_zero(c)}
        self.bound = bound

    def actual_degree(self) -> int:
        return max(self.coeffs, default=-1)

    def __add__(self, other):
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out[d] + c if d in out else c
        return LambdaPoly(out, max(self.bound, other.bound))

    def mul(self, other, op):
        out = {}
        for d1, a in self.coeffs.items():
            for d2, b in other.coeffs.items():
                v = op(a, b)
                out[d1 + d2] = out[d1 + d2] + v if d1 + d2 in out else v
        return LambdaPoly(out, self.bound + other.bound)

    def map(self, f, extra_bound=0):
        return LambdaPoly({d: f(c) for d, c in self.coeffs.items()}, self.bound + extra_bound)

    def __call__(self, lam):
        lam = _lam(lam)
        acc = None
        for d, c in self.coeffs.items():
            term = c * Scalar(lam ** d)
            acc = term if acc is None else acc + term
        return acc


def _is_zero(c):
    if isinstance(c, Valuation):
        return c.is_zero()
    return not c


def symbolic_gram(n: int):
    """Gram matrix of normalized Poincare duality on the mu^lambda basis as
    polynomials in lambda.

    Uses flat(mu^lambda_{kq}) = (1 - lambda s) mu_{kq}, the mu^lambda
    coordinates of x as the mu coordinates of (1 - lambda s)^{-1} x, and the
    vol^* row lambda^{n-q} n!/(pi^{n-q} q!).  Every step records its
    a-priori lambda-degree.
    """
    alg = algebra(n)
    labels = alg.labels("mu")
    sv = Valuation.from_poly(TSPoly.s(n))
    mus = [Valuation.basis_element(n, "mu", k, q) for k, q in labels]
    lifted = [LambdaPoly({0: m, 1: -(sv * m)}, 1) for m in mus]
    s_powers = [Valuation.basis_element(n, "mono", 0, 0)]
    for _ in range(n):
        s_powers.append(s_powers[-1] * sv)
    geom = LambdaPoly({j: sp for j, sp in enumerate(s_powers)}, n)

    def vol_star_poly(x: LambdaPoly) -> LambdaPoly:
        y = x.mul(geom, lambda a, b: a * b)
        out = {}
        for d, val in y.coeffs.items():
            coords = val.coordinates("mu")
            for (k, q), c in coords.items():
                if k != 2 * q:
                    continue
                w = Scalar.pi_power(q - n, Fraction(factorial(n), factorial(q))) * c
                e = d + n - q
                out[e] = out[e] + w if e in out else w
        return LambdaPoly(out, y.bound + n)

    G = []
    for i in range(len(mus)):
        row = []
        for j in range(len(mus)):
            prod = lifted[i].mul(lifted[j], lambda a, b: a * b)
            row.append(vol_star_poly(prod))
        G.append(row)
    return G


@dataclass
class LambdaCertificate:
    n: int
    degree_bound: int
    actual_degree: int
    samples: list
    gram_constant_on_samples: bool
    kinematic_constant_on_samples: bool
    matches_flat: bool
    details: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return (self.gram_constant_on_samples and self.kinematic_constant_on_samples
                and self.matches_flat and self.details.get("symbolic_gram_agrees", False)
                and len(self.samples) > self.degree_bound
                and len(self.samples) >= 2 * self.n + 2)


DEFAULT_SAMPLES = [Fraction(x) for x in ("0", "1", "-1", "1/2", "-2", "2", "-1/2", "1/3",
                                         "-1/3", "3", "-3", "2/3", "-3/2", "5", "1/5", "-5")]


def certify_lambda_independence(n: int, samples=None) -> LambdaCertificate:
    """Certify that k_lambda(chi) over mu^lambda (x) mu^lambda does not depend on lambda.

    k_lambda(chi) is the inverse of the Gram matrix G(lambda), whose entries
    are polynomials in lambda of degree at most the tracked bound D.  If G
    takes the same value at D + 1 distinct points it is constant, hence so
    is its inverse.  The kinematic tensor itself is also evaluated at every
    sample and compared with the flat one.
    """
    G = symbolic_gram(n)
    bound = max(e.bound for row in G for e in row)
    actual = max(e.actual_degree() for row in G for e in row)
    need = max(bound + 1, 2 * n + 2)
    if samples is None:
        samples = DEFAULT_SAMPLES[:need]
    samples = [_lam(x) for x in samples]
    if len(set(samples)) != len(samples):
        raise ValueError("sample points must be distinct")
    grams = [curved_context(n, lam).gram for lam in samples]
    gram_const = all(g == grams[0] for g in grams)
    flat = kinematic(Valuation.basis_element(n, "mono", 0, 0), "mu")
    tensors = [kinematic_lambda(CurvedValuation(Valuation.basis_element(n, "mono", 0, 0), lam))
               for lam in samples]
    kin_const = all(T.same_coefficients(tensors[0]) for T in tensors)
    matches = all(T.as_flat_mu() == flat for T in tensors)
    symbolic_ok = all((e(lam) or ZERO) == grams[i][a][b]
                      for i, lam in enumerate(samples)
                      for a, row in enumerate(G) for b, e in enumerate(row))
    return LambdaCertificate(n, bound, actual, samples, gram_const, kin_const, matches,
                             details={"symbolic_gram_agrees": symbolic_ok})


__all__ = [
    "CurvedValuation", "CurvedTensor", "CurvedContext", "LambdaCertificate",
    "iso_push", "iso_pull", "curved_expression", "from_curved_expression",
    "mu_lambda", "mu_lambda_expression", "curved_context", "curved_basis_element",
    "from_mu_lambda", "vol_star", "pd_lambda", "kinematic_lambda",
    "symbolic_gram", "certify_lambda_independence",
]
