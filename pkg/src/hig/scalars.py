"""Exact scalars: rational functions in a transcendental symbol standing for pi.

A :class:`Scalar` is stored canonically as ``PI**shift * num(PI) / den(PI)``
with ``num(0) != 0``, ``den`` monic with ``den(0) != 0`` and
``gcd(num, den) == 1``.  Equality is therefore a tuple comparison.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from numbers import Rational as _RationalABC

from . import kernels as K

_ONE = (Fraction(1),)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def _shift_up(p: tuple, e: int) -> tuple:
    return (Fraction(0),) * e + p if e else p


class Scalar:
    __slots__ = ("num", "shift", "den")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self.num, self.shift, self.den = value.num, value.shift, value.den
            return
        q = _frac(value)
        self.num = (q,) if q else ()
        self.shift = 0
        self.den = _ONE

    @classmethod
    def _raw(cls, num: tuple, shift: int, den: tuple) -> "Scalar":
        obj = cls.__new__(cls)
        obj.num, obj.shift, obj.den = num, shift, den
        return obj

    @classmethod
    def from_parts(cls, num, den=_ONE, shift: int = 0) -> "Scalar":
        """Build ``PI**shift * num/den`` from coefficient sequences (low degree first)."""
        num = K.trim(tuple(_frac(c) for c in num))
        den = K.trim(tuple(_frac(c) for c in den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        return cls._normalize(num, den, shift)

    @classmethod
    def _normalize(cls, num: tuple, den: tuple, shift: int) -> "Scalar":
        if not num:
            return ZERO
        z = K.low_order(num)
        if z:
            num, shift = num[z:], shift + z
        z = K.low_order(den)
        if z:
            den, shift = den[z:], shift - z
        if len(den) > 1:
            g = K.gcd(num, den)
            if len(g) > 1:
                num = K.divmod_(num, g)[0]
                den = K.divmod_(den, g)[0]
        lead = den[-1]
        if lead != 1:
            inv = 1 / lead
            num = K.scale(num, inv)
            den = K.scale(den, inv)
        return cls._raw(num, shift, den)

    @classmethod
    def pi_power(cls, e: int, coeff=1) -> "Scalar":
        c = _frac(coeff)
        if not c:
            return ZERO
        return cls._raw((c,), e, _ONE)

    # ------------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_rational(self) -> bool:
        return len(self.num) <= 1 and self.shift == 0 and self.den == _ONE

    def is_monomial(self) -> bool:
        return len(self.num) <= 1 and self.den == _ONE

    def to_fraction(self) -> Fraction:
        if not self.num:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.num[0]

    def _key(self):
        return (self.num, self.shift, self.den)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self._key() == other._key()
        try:
            other = Scalar(other)
        except TypeError:
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self.is_rational():
            return hash(self.to_fraction())
        return hash(self._key())

    # ------------------------------------------------------------------
    def __neg__(self):
        return Scalar._raw(tuple(-c for c in self.num), self.shift, self.den)

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar(other)
            except TypeError:
                return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        m = min(self.shift, other.shift)
        a = _shift_up(self.num, self.shift - m)
        b = _shift_up(other.num, other.shift - m)
        if self.den == _ONE and other.den == _ONE:
            s = K.add(a, b)
            if not s:
                return ZERO
            z = K.low_order(s)
            return Scalar._raw(s[z:], m + z, _ONE)
        if self.den == other.den:
            return Scalar._normalize(K.add(a, b), self.den, m)
        num = K.add(K.mul(a, other.den), K.mul(b, self.den))
        return Scalar._normalize(num, K.mul(self.den, other.den), m)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar(other)
            except TypeError:
                return NotImplemented
        if not self.num or not other.num:
            return ZERO
        shift = self.shift + other.shift
        if self.den == _ONE and other.den == _ONE:
            return Scalar._raw(K.mul(self.num, other.num), shift, _ONE)
        n1, d2 = self.num, other.den
        n2, d1 = other.num, self.den
        if len(d2) > 1:
            g = K.gcd(n1, d2)
            if len(g) > 1:
                n1, d2 = K.divmod_(n1, g)[0], K.divmod_(d2, g)[0]
        if len(d1) > 1:
            g = K.gcd(n2, d1)
            if len(g) > 1:
                n2, d1 = K.divmod_(n2, g)[0], K.divmod_(d1, g)[0]
        num = K.mul(n1, n2)
        den = K.mul(d1, d2)
        lead = den[-1]
        if lead != 1:
            num, den = K.scale(num, 1 / lead), K.scale(den, 1 / lead)
        return Scalar._raw(num, shift, den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num:
            raise ZeroDivisionError("Scalar division by zero")
        lead = self.num[-1]
        return Scalar._raw(K.scale(self.den, 1 / lead), -self.shift,
                           K.scale(self.num, 1 / lead))

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar(other) * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # ------------------------------------------------------------------
    def numerator_poly(self) -> tuple:
        """Numerator as a Laurent polynomial: (coefficients, shift)."""
        return self.num, self.shift

    def evaluate(self, pi_value):
        """Substitute a numeric value (float or mpmath number) for the symbol.

        Display only; never used in comparisons.
        """
        def horner(p):
            acc = pi_value * 0
            for c in reversed(p):
                acc = acc * pi_value + pi_value.__class__(c.numerator) / c.denominator
            return acc

        return horner(self.num) * pi_value ** self.shift / horner(self.den)

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        num = _poly_str(self.num, self.shift)
        if self.den == _ONE:
            return num
        return f"({num})/({_poly_str(self.den, 0)})"


def _mono_str(c: Fraction, e: int, first: bool) -> str:
    sign = "-" if c < 0 else ("" if first else "+")
    a = abs(c)
    if e == 0:
        body = str(a)
    else:
        sym = "PI" if e == 1 else f"PI^{e}"
        body = sym if a == 1 else f"{a}*{sym}"
    return sign + body


def _poly_str(p: tuple, shift: int) -> str:
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        if p[i]:
            parts.append(_mono_str(p[i], i + shift, not parts))
    return "".join(parts)


ZERO = Scalar._raw((), 0, _ONE)
ONE = Scalar._raw((Fraction(1),), 0, _ONE)
PI = Scalar._raw((Fraction(1),), 1, _ONE)


def as_scalar(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar(x)


def double_factorial(m: int) -> int:
    """m!! with the conventions (-1)!! = 0!! = 1."""
    if m < -1:
        raise ValueError(f"double factorial undefined for {m}")
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def omega(k: int) -> Scalar:
    """Volume of the k-dimensional unit ball."""
    if k < 0:
        raise ValueError("omega needs k >= 0")
    m = k // 2
    if k % 2 == 0:
        return Scalar.pi_power(m, Fraction(1, factorial(m)))
    return Scalar.pi_power(m, Fraction(2 ** (m + 1), double_factorial(k)))


def binomial(a, b: int) -> Fraction:
    """Generalized binomial coefficient C(a, b) for rational a and integer b >= 0."""
    if b < 0:
        return Fraction(0)
    a = Fraction(a)
    out = Fraction(1)
    for j in range(b):
        out = out * (a - j) / (j + 1)
    return out


# ----------------------------------------------------------------------
# exact linear algebra over any field whose elements support + - * / and bool

class SingularMatrixError(ArithmeticError):
    """Raised for a singular system; carries the rank and one kernel vector."""

    def __init__(self, rank: int, kernel_vector):
        super().__init__(f"matrix is singular (rank {rank})")
        self.rank = rank
        self.kernel_vector = kernel_vector


def _zero_like(x):
    return x * 0


def rref(rows, ncols: int | None = None, pivot_order=None):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``pivots`` lists the pivot columns.  When
    ``pivot_order`` is given, columns are tried in that order, so callers
    can choose which monomials become pivots.
    """
    R = [list(r) for r in rows]
    if not R:
        return [], []
    ncols = len(R[0]) if ncols is None else ncols
    order = range(ncols) if pivot_order is None else pivot_order
    pivots = []
    r = 0
    for c in order:
        if r >= len(R):
            break
        piv = None
        for i in range(r, len(R)):
            if R[i][c]:
                piv = i
                break
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][c] if not isinstance(R[r][c], Scalar) else R[r][c].inverse()
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c]:
                f = R[i][c]
                Ri, Rr = R[i], R[r]
                R[i] = [Ri[j] - f * Rr[j] if Rr[j] else Ri[j] for j in range(ncols)]
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int):
    """Basis of {x : rows @ x = 0}, one vector per free column."""
    R, pivots = rref(rows, ncols)
    if R:
        zero = _zero_like(R[0][0])
    elif rows and rows[0]:
        zero = _zero_like(rows[0][0])
    else:
        zero = ZERO
    one = zero + 1
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def mat_mul(A, B):
    if not A:
        return []
    m = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [None] * m
        for j in range(m):
            s = None
            for k, a in enumerate(row):
                if a:
                    b = B[k][j]
                    if b:
                        s = a * b if s is None else s + a * b
            acc[j] = s if s is not None else _zero_like(row[0])
        out.append(acc)
    return out


def transpose(A):
    return [list(c) for c in zip(*A)]


def solve_linear(M, rhs):
    """Solve ``M X = rhs`` exactly for square invertible ``M``.

    ``rhs`` is a matrix (list of rows).  Raises :class:`SingularMatrixError`
    with the rank and a kernel vector when ``M`` is singular.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("solve_linear needs a square matrix")
    if len(rhs) != n:
        raise ValueError("right-hand side has the wrong number of rows")
    m = len(rhs[0]) if rhs else 0
    aug = [list(M[i]) + list(rhs[i]) for i in range(n)]
    R, pivots = rref(aug, n + m, pivot_order=range(n))
    if len(pivots) < n:
        ker = nullspace(M, n)
        raise SingularMatrixError(len(pivots), ker[0] if ker else None)
    return [row[n:] for row in R]


def inverse(M):
    n = len(M)
    if n == 0:
        return []
    zero = _zero_like(M[0][0])
    ident = [[zero + 1 if i == j else zero for j in range(n)] for i in range(n)]
    return solve_linear(M, ident)


def determinant(M):
    n = len(M)
    A = [list(r) for r in M]
    det = _zero_like(A[0][0]) + 1 if n else ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return det * 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        p = A[c][c]
        det = det * p
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] / p
                A[i] = [A[i][j] - f * A[c][j] for j in range(n)]
    return det
