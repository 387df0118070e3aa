"""The algebra of unitarily invariant valuations on C^n.

Val^U(n) is modelled as Q(PI)[t, s] / (f_{n+1}, f_{n+2}) where f_i is the
degree-i part of log(1 + t + s).  Elements are stored as coordinate
vectors over the reduced monomials ``s^p t^(k-2p)`` with
``p < dim Val_k``; reduction is exact row reduction of each graded slice
of the ideal.

Five bases are available by name: ``mono``, ``u`` (intersection with affine
complex planes), ``mu`` (hermitian intrinsic volumes), ``tau`` (Tasaki) and
``prim`` (primitive).
"""

from __future__ import annotations

import functools
import random
import threading
from fractions import Fraction
from math import comb, factorial

from .polynomials import TSPoly, log_components
from .scalars import (ONE, PI, ZERO, Scalar, SingularMatrixError, as_scalar,
                      double_factorial, inverse, mat_mul, omega, rref, transpose)

FAMILIES = ("mono", "u", "mu", "tau", "prim")


class ContextMismatch(ValueError):
    pass


class InadmissibleIndex(ValueError):
    pass


def dim_val(n: int, k: int) -> int:
    """dim Val_k^U(n) = min(floor(k/2), floor((2n-k)/2)) + 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= k <= 2 * n:
        raise ValueError(f"degree {k} out of range 0..{2 * n}")
    return min(k // 2, (2 * n - k) // 2) + 1


def family_indices(n: int, family: str, k: int) -> list[int]:
    """Second indices of the basis elements of ``family`` in degree k."""
    if family not in FAMILIES:
        raise ValueError(f"unknown basis family {family!r}")
    if not 0 <= k <= 2 * n:
        return []
    d = dim_val(n, k)
    if family == "mu":
        return list(range(max(0, k - n), k // 2 + 1))
    return list(range(d))


def _check_index(n, family, k, idx):
    if idx not in family_indices(n, family, k):
        raise InadmissibleIndex(f"{family}({k},{idx}) is not admissible for n={n}")


# ----------------------------------------------------------------------
# closed-form constants

def a_coeff(n: int, k: int, r: int) -> Scalar:
    """Constant a_{n,k,r} of the principal kinematic formula."""
    _check_index(n, "prim", k, r)
    rat = Fraction(factorial(n - r), 8 ** r * factorial(2 * n - 4 * r))
    rat *= Fraction(double_factorial(2 * n - 2 * r + 1), double_factorial(2 * n - 4 * r + 1))
    rat /= comb(n, 2 * r)
    return omega(k) * omega(2 * n - k) * Scalar.pi_power(-n, rat)


def prim_to_tau(n: int, k: int, r: int) -> dict:
    """Coefficients of pi_{k,r} over the Tasaki basis, as {(k, i): Fraction}."""
    _check_index(n, "prim", k, r)
    pref = (-1) ** r * double_factorial(2 * n - 4 * r + 1)
    out = {}
    for i in range(r + 1):
        c = Fraction((-1) ** i * factorial(k - 2 * i), factorial(2 * r - 2 * i))
        c *= Fraction(double_factorial(2 * r - 2 * i - 1),
                      double_factorial(2 * n - 2 * r - 2 * i + 1))
        if c:
            out[(k, i)] = pref * c
    return out


def tau_to_mu(n: int, k: int, q: int) -> dict:
    """Coefficients of tau_{k,q} over the hermitian intrinsic volumes.

    The formula makes sense for 0 <= q <= k/2; the Tasaki basis itself only
    uses q < dim Val_k, one index per elementary symmetric polynomial.
    """
    if not (0 <= k <= 2 * n and 0 <= q <= k // 2):
        raise InadmissibleIndex(f"tau({k},{q}) is not admissible for n={n}")
    return {(k, i): Fraction(comb(i, q))
            for i in range(max(q, k - n, 0), k // 2 + 1)}


# ----------------------------------------------------------------------

class ValAlgebra:
    """Structure tables of Val^U(n).  Obtain instances through :func:`algebra`."""

    def __init__(self, n: int, cache=None):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.cache = cache
        self.dims = [dim_val(n, k) for k in range(2 * n + 1)]
        self.mono_labels = [(k, p) for k in range(2 * n + 1) for p in range(self.dims[k])]
        self.dim = len(self.mono_labels)
        self._mono_pos = {lab: i for i, lab in enumerate(self.mono_labels)}
        self._offsets = []
        off = 0
        for d in self.dims:
            self._offsets.append(off)
            off += d
        self._lock = threading.Lock()
        self._tables = {}

    # table management -----------------------------------------------------
    def _table(self, name, builder):
        tab = self._tables.get(name)
        if tab is not None:
            return tab
        if self.cache is not None:
            tab = self.cache.fetch(self.n, name, builder)
        else:
            tab = builder()
        with self._lock:
            self._tables.setdefault(name, tab)
        return self._tables[name]

    def degree_slice(self, k: int) -> range:
        return range(self._offsets[k], self._offsets[k] + self.dims[k])

    def mono_pos(self, k: int, p: int) -> int:
        return self._mono_pos[(k, p)]

    # ideal ------------------------------------------------------------------
    @functools.cached_property
    def generators(self):
        f = log_components(self.n)
        return f[self.n], f[self.n + 1]

    def ideal_slice(self, k: int):
        """Rows (over columns p = 0..k//2) spanning the degree-k part of the ideal."""
        rows = []
        for f in self.generators:
            e = f.degrees()[0]
            if k < e:
                continue
            cap = max(f.cap, k)
            fc = f.with_cap(cap)
            for b in range((k - e) // 2 + 1):
                m = TSPoly(self.n, {(k - e - 2 * b, b): 1}, cap)
                prod = m * fc
                rows.append([prod.coeff(k - 2 * p, p).to_fraction() for p in range(k // 2 + 1)])
        return rows

    def quotient_rank(self, k: int) -> int:
        """Dimension of the degree-k quotient, computed from the ideal alone."""
        rows = self.ideal_slice(k)
        total = k // 2 + 1
        if not rows:
            return total
        return total - len(rref(rows, total)[1])

    def _build_reduction(self):
        table = {}
        for k in range(self.n + 1, 2 * self.n + 1):
            d = self.dims[k]
            top = k // 2
            rows = self.ideal_slice(k)
            R, pivots = rref(rows, top + 1, pivot_order=range(top, -1, -1))
            high = list(range(d, top + 1))
            if sorted(pivots) != high:
                raise ArithmeticError(
                    f"ideal slice in degree {k} does not complement the canonical monomials")
            rules = {}
            for row, p in zip(R, pivots):
                rules[p] = {lo: -row[lo] for lo in range(d) if row[lo]}
            table[k] = rules
        return table

    @property
    def reduction(self):
        return self._table("reduction", self._build_reduction)

    def reduce_poly(self, p: TSPoly) -> list:
        if p.n != self.n:
            raise ContextMismatch(f"polynomial has n={p.n}, algebra has n={self.n}")
        coords = [ZERO] * self.dim
        red = None
        for (a, b), c in p.terms.items():
            k = a + 2 * b
            if k > 2 * self.n:
                continue
            if b < self.dims[k]:
                i = self._mono_pos[(k, b)]
                coords[i] = coords[i] + c
            else:
                if red is None:
                    red = self.reduction
                for lo, f in red[k][b].items():
                    i = self._mono_pos[(k, lo)]
                    coords[i] = coords[i] + c * f
        return coords

    # multiplication ---------------------------------------------------------
    def _build_mult(self):
        table = {}
        for i, (k1, p1) in enumerate(self.mono_labels):
            for j in range(i, self.dim):
                k2, p2 = self.mono_labels[j]
                k = k1 + k2
                if k > 2 * self.n:
                    continue
                b = p1 + p2
                if b < self.dims[k]:
                    entry = {self._mono_pos[(k, b)]: Fraction(1)}
                else:
                    entry = {self._mono_pos[(k, lo)]: f for lo, f in self.reduction[k][b].items()}
                table[(i, j)] = entry
        return table

    @property
    def mult_table(self):
        return self._table("mult", self._build_mult)

    def multiply(self, x, y) -> list:
        tab = self.mult_table
        out = [ZERO] * self.dim
        nzx = [(i, c) for i, c in enumerate(x) if c]
        nzy = [(j, c) for j, c in enumerate(y) if c]
        for i, a in nzx:
            for j, b in nzy:
                key = (i, j) if i <= j else (j, i)
                entry = tab.get(key)
                if not entry:
                    continue
                ab = a * b
                for pos, f in entry.items():
                    out[pos] = out[pos] + ab * f
        return out

    # bases ---------------------------------------------------------------------
    def labels(self, family: str):
        return [(k, i) for k in range(2 * self.n + 1) for i in family_indices(self.n, family, k)]

    def _poly_for(self, family: str, k: int, idx: int) -> list:
        n = self.n
        if family == "mono":
            return self.reduce_poly(TSPoly(n, {(k - 2 * idx, idx): 1}))
        if family == "u":
            p = idx
            c = Scalar.pi_power(k - 2 * p, Fraction(factorial(n - p), factorial(k - 2 * p) * factorial(n)))
            c = c / omega(k - 2 * p)
            return self.reduce_poly(TSPoly(n, {(k - 2 * p, p): c}))
        if family == "mu":
            return self.reduce_poly(mu_polynomial(n, k, idx))
        if family == "tau":
            return self._combine("mu", tau_to_mu(n, k, idx))
        if family == "prim":
            return self._combine("tau", prim_to_tau(n, k, idx))
        raise ValueError(family)

    def _combine(self, family, coeffs: dict) -> list:
        M = self.basis_matrix(family)
        pos = {lab: i for i, lab in enumerate(self.labels(family))}
        out = [ZERO] * self.dim
        for lab, c in coeffs.items():
            col = pos[lab]
            for r in range(self.dim):
                if M[r][col]:
                    out[r] = out[r] + M[r][col] * c
        return out

    def _build_basis(self, family):
        cols = [self._poly_for(family, k, i) for k, i in self.labels(family)]
        return transpose(cols) if cols else []

    def basis_matrix(self, family: str):
        """Square matrix whose column c holds the mono coordinates of basis element c."""
        if family not in FAMILIES:
            raise ValueError(f"unknown basis family {family!r}")
        return self._table(f"basis-{family}", lambda: self._build_basis(family))

    def _build_basis_inverse(self, family):
        M = self.basis_matrix(family)
        inv = [[ZERO] * self.dim for _ in range(self.dim)]
        # block diagonal by degree
        for k in range(2 * self.n + 1):
            sl = list(self.degree_slice(k))
            block = [[M[i][j] for j in sl] for i in sl]
            try:
                binv = inverse(block)
            except SingularMatrixError as exc:
                raise ArithmeticError(f"{family} basis is singular in degree {k}") from exc
            for a, i in enumerate(sl):
                for b, j in enumerate(sl):
                    inv[i][j] = binv[a][b]
        return inv

    def basis_inverse(self, family: str):
        return self._table(f"basis-inv-{family}", lambda: self._build_basis_inverse(family))

    def to_family(self, coords, family: str) -> list:
        if family == "mono":
            return list(coords)
        inv = self.basis_inverse(family)
        return [sum((inv[i][j] * coords[j] for j in range(self.dim) if inv[i][j] and coords[j]), ZERO)
                for i in range(self.dim)]

    def from_family(self, coeffs, family: str) -> list:
        if family == "mono":
            return list(coeffs)
        M = self.basis_matrix(family)
        return [sum((M[i][j] * coeffs[j] for j in range(self.dim) if M[i][j] and coeffs[j]), ZERO)
                for i in range(self.dim)]

    # pairing --------------------------------------------------------------------
    @functools.cached_property
    def vol_coeff(self) -> Scalar:
        """Coefficient of t^{2n} in the reduced form of vol = mu_{2n,n}."""
        M = self.basis_matrix("mu")
        top = self.dim - 1
        return M[top][top]

    def pd(self, x, y) -> Scalar:
        prod = self.multiply(x, y)
        return prod[-1] / self.vol_coeff

    def gram(self, family: str = "mono"):
        def build():
            basis = transpose(self.basis_matrix(family)) if family != "mono" else \
                [[ONE if i == j else ZERO for j in range(self.dim)] for i in range(self.dim)]
            return [[self.pd(basis[i], basis[j]) for j in range(self.dim)] for i in range(self.dim)]
        return self._table(f"gram-{family}", build)

    def gram_inverse(self, family: str = "mono"):
        def build():
            G = self.gram(family)
            try:
                return inverse(G)
            except SingularMatrixError as exc:
                raise SingularMatrixError(exc.rank, exc.kernel_vector) from exc
        return self._table(f"gram-inv-{family}", build)


@functools.lru_cache(maxsize=None)
def _algebra_cached(n: int) -> ValAlgebra:
    return ValAlgebra(n, cache=_DEFAULT_CACHE[0])


_DEFAULT_CACHE = [None]


def set_default_cache(cache) -> None:
    """Attach a disk cache to algebras created from now on (clears the memo)."""
    _DEFAULT_CACHE[0] = cache
    _algebra_cached.cache_clear()


def algebra(n: int) -> ValAlgebra:
    return _algebra_cached(n)


def mu_polynomial(n: int, k: int, q: int) -> TSPoly:
    """Unreduced t,s expression of the hermitian intrinsic volume mu_{k,q}."""
    _check_index(n, "mu", k, q)
    u = TSPoly(n, {(0, 1): 4, (2, 0): -1})
    base = Scalar.pi_power(k) / omega(k)
    out = TSPoly(n)
    for i in range(q, k // 2 + 1):
        c = Fraction((-1) ** (i + q) * comb(i, q), factorial(k - 2 * i) * factorial(2 * i))
        out = out + TSPoly(n, {(k - 2 * i, 0): base * c}) * u ** i
    return out


# ----------------------------------------------------------------------

class Valuation:
    """Immutable element of Val^U(n) in reduced monomial coordinates."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: ValAlgebra, coeffs):
        coeffs = tuple(as_scalar(c) for c in coeffs)
        if len(coeffs) != alg.dim:
            raise ValueError(f"expected {alg.dim} coordinates, got {len(coeffs)}")
        self.alg = alg
        self.coeffs = coeffs

    @property
    def n(self) -> int:
        return self.alg.n

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, n: int):
        alg = algebra(n)
        return cls(alg, [ZERO] * alg.dim)

    @classmethod
    def from_poly(cls, p: TSPoly):
        alg = algebra(p.n)
        return cls(alg, alg.reduce_poly(p))

    @classmethod
    def basis_element(cls, n: int, family: str, k: int, idx: int):
        _check_index(n, family, k, idx)
        alg = algebra(n)
        col = alg.labels(family).index((k, idx))
        M = alg.basis_matrix(family)
        return cls(alg, [M[r][col] for r in range(alg.dim)])

    @classmethod
    def from_coefficients(cls, n: int, family: str, coeffs: dict):
        """Linear combination ``{(k, idx): coefficient}`` of a named basis."""
        alg = algebra(n)
        labels = alg.labels(family)
        pos = {lab: i for i, lab in enumerate(labels)}
        vec = [ZERO] * alg.dim
        for lab, c in coeffs.items():
            if tuple(lab) not in pos:
                k, idx = lab
                raise InadmissibleIndex(f"{family}({k},{idx}) is not admissible for n={n}")
            vec[pos[tuple(lab)]] = vec[pos[tuple(lab)]] + as_scalar(c)
        return cls(alg, alg.from_family(vec, family))

    # arithmetic -----------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Valuation):
            raise TypeError("expected Valuation")
        if other.alg.n != self.alg.n:
            raise ContextMismatch(f"valuations live in different dimensions ({self.n} vs {other.n})")

    def __add__(self, other):
        self._check(other)
        return Valuation(self.alg, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return Valuation(self.alg, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return Valuation(self.alg, [-a for a in self.coeffs])

    def scale(self, c):
        c = as_scalar(c)
        return Valuation(self.alg, [a * c for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Valuation):
            return val_mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        out = chi(self.n)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Valuation):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    # structure ------------------------------------------------------------
    def coordinates(self, family: str = "mono") -> dict:
        """Nonzero coefficients over a named basis as {(k, idx): Scalar}."""
        vec = self.alg.to_family(self.coeffs, family)
        return {lab: c for lab, c in zip(self.alg.labels(family), vec) if c}

    def component(self, k: int) -> "Valuation":
        sl = set(self.alg.degree_slice(k))
        return Valuation(self.alg, [c if i in sl else ZERO for i, c in enumerate(self.coeffs)])

    def degrees(self) -> list[int]:
        return sorted({self.alg.mono_labels[i][0] for i, c in enumerate(self.coeffs) if c})

    def to_poly(self) -> TSPoly:
        return TSPoly(self.n, {(k - 2 * p, p): c
                               for (k, p), c in zip(self.alg.mono_labels, self.coeffs) if c})

    def __repr__(self):
        return f"Valuation(n={self.n}, {self.to_poly()})"


def chi(n: int) -> Valuation:
    return Valuation.basis_element(n, "mono", 0, 0)


def t(n: int) -> Valuation:
    return Valuation.basis_element(n, "mono", 1, 0)


def s(n: int) -> Valuation:
    return Valuation.from_poly(TSPoly.s(n))


def vol(n: int) -> Valuation:
    return Valuation.basis_element(n, "mu", 2 * n, n)


def reduce(p: TSPoly) -> Valuation:
    return Valuation.from_poly(p)


def val_mul(a: Valuation, b: Valuation) -> Valuation:
    a._check(b)
    return Valuation(a.alg, a.alg.multiply(a.coeffs, b.coeffs))


def mu_to_mono(n: int, k: int, q: int) -> Valuation:
    return Valuation.basis_element(n, "mu", k, q)


def u_to_mono(n: int, k: int, p: int) -> Valuation:
    return Valuation.basis_element(n, "u", k, p)


def fourier(v: Valuation) -> Valuation:
    """Alesker-Fourier transform: mu_{k,q} -> mu_{2n-k, n-k+q}."""
    n = v.n
    mu = v.coordinates("mu")
    return Valuation.from_coefficients(n, "mu", {(2 * n - k, n - k + q): c for (k, q), c in mu.items()})


def convolve(a: Valuation, b: Valuation) -> Valuation:
    a._check(b)
    return fourier(fourier(a) * fourier(b))


def pd_pair(a: Valuation, b: Valuation) -> Scalar:
    """Poincare pairing: the vol-coefficient of a*b."""
    a._check(b)
    return a.alg.pd(a.coeffs, b.coeffs)


# ----------------------------------------------------------------------

class TensorElement:
    """Element of Val^U(n) (x) Val^U(n) stored as a coefficient matrix over
    two named bases (rows: left factor, columns: right factor)."""

    __slots__ = ("n", "left", "right", "matrix")

    def __init__(self, n: int, left: str, right: str, matrix):
        self.n, self.left, self.right = n, left, right
        self.matrix = tuple(tuple(as_scalar(c) for c in row) for row in matrix)

    def terms(self):
        alg = algebra(self.n)
        L, R = alg.labels(self.left), alg.labels(self.right)
        return [(L[i], R[j], c) for i, row in enumerate(self.matrix) for j, c in enumerate(row) if c]

    def swap(self) -> "TensorElement":
        return TensorElement(self.n, self.right, self.left, transpose(self.matrix))

    def in_bases(self, left: str, right: str | None = None) -> "TensorElement":
        right = left if right is None else right
        alg = algebra(self.n)
        A = alg.basis_matrix(self.left) if self.left != "mono" else None
        B = alg.basis_matrix(self.right) if self.right != "mono" else None
        C = [list(r) for r in self.matrix]
        if A is not None:
            C = mat_mul(A, C)
        if B is not None:
            C = mat_mul(C, transpose(B))
        if left != "mono":
            C = mat_mul(alg.basis_inverse(left), C)
        if right != "mono":
            C = mat_mul(C, transpose(alg.basis_inverse(right)))
        return TensorElement(self.n, left, right, C)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        if (self.left, self.right) != (other.left, other.right):
            other = other.in_bases(self.left, self.right)
        return self.n == other.n and self.matrix == other.matrix

    def __add__(self, other):
        other = other.in_bases(self.left, self.right)
        return TensorElement(self.n, self.left, self.right,
                             [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)])

    def __sub__(self, other):
        other = other.in_bases(self.left, self.right)
        return TensorElement(self.n, self.left, self.right,
                             [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)])

    def is_zero(self):
        return not any(c for row in self.matrix for c in row)

    @classmethod
    def from_terms(cls, n, left, right, terms):
        """Build from ``[((k, i), (k', j), coeff), ...]`` over the named bases."""
        alg = algebra(n)
        L = {lab: i for i, lab in enumerate(alg.labels(left))}
        R = {lab: j for j, lab in enumerate(alg.labels(right))}
        M = [[ZERO] * alg.dim for _ in range(alg.dim)]
        for l, r, c in terms:
            i, j = L[tuple(l)], R[tuple(r)]
            M[i][j] = M[i][j] + as_scalar(c)
        return cls(n, left, right, M)

    @classmethod
    def outer(cls, a: Valuation, b: Valuation, coeff=ONE):
        coeff = as_scalar(coeff)
        return cls(a.n, "mono", "mono", [[x * y * coeff for y in b.coeffs] for x in a.coeffs])

    def __repr__(self):
        return f"TensorElement(n={self.n}, {self.left}x{self.right}, {len(self.terms())} terms)"


def kinematic(phi: Valuation, basis: str = "mono", right: str | None = None) -> TensorElement:
    """Global kinematic coproduct k(phi) from the product via Poincare duality.

    With G the Gram matrix of pd on the monomial basis e_i, the coefficient
    matrix is G^{-1} P G^{-1} where P_kl = pd(phi e_k, e_l).
    """
    alg = phi.alg
    Ginv = alg.gram_inverse("mono")
    e = [[ONE if i == j else ZERO for j in range(alg.dim)] for i in range(alg.dim)]
    phie = [alg.multiply(phi.coeffs, e[k]) for k in range(alg.dim)]
    P = [[alg.pd(phie[k], e[l]) for l in range(alg.dim)] for k in range(alg.dim)]
    C = mat_mul(mat_mul(Ginv, P), Ginv)
    T = TensorElement(alg.n, "mono", "mono", C)
    if basis != "mono" or (right is not None and right != "mono"):
        T = T.in_bases(basis, right)
    return T


def principal_kinematic_closed_form(n: int) -> TensorElement:
    """Sum of a_{n,k,r} pi_{k,r} (x) pi_{2n-k,r} over the primitive basis."""
    terms = []
    for k in range(2 * n + 1):
        for r in family_indices(n, "prim", k):
            terms.append(((k, r), (2 * n - k, r), a_coeff(n, k, r)))
    return TensorElement.from_terms(n, "prim", "prim", terms)


def apply_left(T: TensorElement, f) -> list:
    """Apply a linear map ``f: Valuation -> TensorElement`` to the left
    factor; returns a nested 3-index coefficient array over mono bases."""
    T = T.in_bases("mono")
    alg = algebra(T.n)
    basis = [Valuation(alg, [ONE if i == j else ZERO for j in range(alg.dim)]) for i in range(alg.dim)]
    images = [f(b).in_bases("mono").matrix for b in basis]
    d = alg.dim
    out = [[[ZERO] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            c = T.matrix[i][j]
            if not c:
                continue
            img = images[i]
            for a in range(d):
                for b in range(d):
                    if img[a][b]:
                        out[a][b][j] = out[a][b][j] + c * img[a][b]
    return out


def apply_right(T: TensorElement, f) -> list:
    T = T.in_bases("mono")
    alg = algebra(T.n)
    basis = [Valuation(alg, [ONE if i == j else ZERO for j in range(alg.dim)]) for i in range(alg.dim)]
    images = [f(b).in_bases("mono").matrix for b in basis]
    d = alg.dim
    out = [[[ZERO] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            c = T.matrix[i][j]
            if not c:
                continue
            img = images[j]
            for a in range(d):
                for b in range(d):
                    if img[a][b]:
                        out[i][a][b] = out[i][a][b] + c * img[a][b]
    return out


# ----------------------------------------------------------------------

def rho(n: int, k: int, r: int) -> Valuation:
    """The valuation rho_{k,r} entering the principal local kinematic formulas
    (homogeneous of degree k - 1)."""
    if not 0 <= k <= 2 * n:
        raise InadmissibleIndex(f"rho: degree {k} out of range 0..{2 * n}")
    _check_index(n, "prim", k, r)
    df = double_factorial
    u = TSPoly(n, {(0, 1): 4, (2, 0): -1})
    pref = Scalar.pi_power(k - 1, 2 * (-1) ** r * df(2 * n - 4 * r + 1)) / omega(k)
    first = Fraction(df(2 * r - 1) * factorial(k + 1), df(2 * n - 2 * r + 1) * factorial(2 * r))
    acc = TSPoly(n)
    for i in range((k - 1) // 2 + 1):
        c = first * Fraction((-1) ** (i + 1), factorial(2 * i + 3) * factorial(k - 2 * i - 1))
        acc = acc + TSPoly(n, {(k - 2 * i - 1, 0): c}) * u ** i
    for i in range(r):
        c = Fraction((-1) ** i * df(2 * r - 2 * i - 3),
                     df(2 * n - 2 * r - 2 * i - 1) * factorial(2 * r - 2 * i - 2) * factorial(2 * i + 2))
        acc = acc + TSPoly(n, {(k - 2 * i - 1, 0): c}) * u ** i
    return Valuation.from_poly(acc.scale(pref))


def random_valuation(n: int, rng: random.Random, homogeneous: int | None = None,
                     with_pi: bool = True) -> Valuation:
    """Random element with small rational (optionally PI-weighted) coefficients."""
    alg = algebra(n)
    coeffs = []
    for k, _ in alg.mono_labels:
        if homogeneous is not None and k != homogeneous:
            coeffs.append(ZERO)
            continue
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        e = rng.randint(-1, 1) if with_pi else 0
        coeffs.append(Scalar.pi_power(e, c) if c else ZERO)
    return Valuation(alg, coeffs)


__all__ = [
    "FAMILIES", "ValAlgebra", "Valuation", "TensorElement", "InadmissibleIndex", "ContextMismatch",
    "algebra", "dim_val", "family_indices", "a_coeff", "prim_to_tau", "tau_to_mu", "mu_polynomial",
    "chi", "t", "s", "vol", "reduce", "val_mul", "mu_to_mono", "u_to_mono", "fourier", "convolve",
    "pd_pair", "kinematic", "principal_kinematic_closed_form", "rho", "random_valuation",
    "apply_left", "apply_right", "set_default_cache", "PI",
]
