"""Truncated polynomials in t (degree 1) and s (degree 2).

Every valuation space vanishes above degree 2n, so a :class:`TSPoly` drops
all monomials ``t^a s^b`` with ``a + 2b > cap`` (``cap`` defaults to 2n).
Truncation by total degree is compatible with products, which keeps all
power series below finite and exact.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import ONE, ZERO, Scalar, as_scalar, binomial


class ContextMismatch(ValueError):
    pass


def _order(key):
    a, b = key
    return (a + 2 * b, b)


class TSPoly:
    """Immutable truncated polynomial; ``terms`` maps ``(a, b)`` to the
    coefficient of ``t^a s^b``."""

    __slots__ = ("n", "cap", "terms")

    def __init__(self, n: int, terms=None, cap: int | None = None):
        if n < 1:
            raise ValueError("context dimension n must be >= 1")
        self.n = n
        self.cap = 2 * n if cap is None else cap
        clean = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError("negative exponent")
            if a + 2 * b > self.cap:
                continue
            c = as_scalar(c)
            if c:
                clean[(a, b)] = c
        self.terms = clean

    # constructors --------------------------------------------------------
    @classmethod
    def const(cls, n, c=1, cap=None):
        return cls(n, {(0, 0): c}, cap)

    @classmethod
    def t(cls, n, cap=None):
        return cls(n, {(1, 0): 1}, cap)

    @classmethod
    def s(cls, n, cap=None):
        return cls(n, {(0, 1): 1}, cap)

    def _like(self, terms):
        out = TSPoly.__new__(TSPoly)
        out.n, out.cap, out.terms = self.n, self.cap, terms
        return out

    def _check(self, other):
        if not isinstance(other, TSPoly):
            raise TypeError("expected TSPoly")
        if other.n != self.n or other.cap != self.cap:
            raise ContextMismatch(
                f"context mismatch: (n={self.n}, cap={self.cap}) vs (n={other.n}, cap={other.cap})")

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, TSPoly):
            other = TSPoly.const(self.n, other, self.cap)
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            v = terms.get(k, ZERO) + c
            if v:
                terms[k] = v
            else:
                terms.pop(k, None)
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TSPoly):
            other = TSPoly.const(self.n, other, self.cap)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = as_scalar(c)
        if not c:
            return self._like({})
        return self._like({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TSPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        cap = self.cap
        terms = {}
        for (a1, b1), c1 in self.terms.items():
            d1 = a1 + 2 * b1
            for (a2, b2), c2 in other.terms.items():
                if d1 + a2 + 2 * b2 > cap:
                    continue
                key = (a1 + a2, b1 + b2)
                v = terms.get(key, ZERO) + c1 * c2
                if v:
                    terms[key] = v
                else:
                    terms.pop(key, None)
        return self._like(terms)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = TSPoly.const(self.n, 1, self.cap)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, TSPoly):
            return NotImplemented
        return self.n == other.n and self.cap == other.cap and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.cap, frozenset(self.terms.items())))

    # structure -----------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def coeff(self, a: int, b: int) -> Scalar:
        return self.terms.get((a, b), ZERO)

    def constant_term(self) -> Scalar:
        return self.coeff(0, 0)

    def component(self, k: int) -> "TSPoly":
        """Homogeneous component of total degree k."""
        return self._like({key: c for key, c in self.terms.items() if key[0] + 2 * key[1] == k})

    def degrees(self):
        return sorted({a + 2 * b for a, b in self.terms})

    def is_homogeneous(self, k: int | None = None) -> bool:
        degs = self.degrees()
        if not degs:
            return True
        return len(degs) == 1 and (k is None or degs[0] == k)

    def sorted_terms(self):
        """Terms in canonical order: ascending total degree, then ascending s-power."""
        return sorted(self.terms.items(), key=lambda kv: _order(kv[0]))

    def with_cap(self, cap: int) -> "TSPoly":
        return TSPoly(self.n, self.terms, cap)

    def substitute_t(self, factor: "TSPoly") -> "TSPoly":
        """Replace t by ``t * factor`` (s unchanged)."""
        self._check(factor)
        tf = TSPoly.t(self.n, self.cap) * factor
        out = self._like({})
        powers = {0: TSPoly.const(self.n, 1, self.cap)}
        for (a, b), c in self.sorted_terms():
            if a not in powers:
                powers[a] = tf ** a
            mono = powers[a] * TSPoly(self.n, {(0, b): c}, self.cap)
            out = out + mono
        return out

    def __repr__(self):
        return f"TSPoly(n={self.n}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in self.sorted_terms():
            mono = "*".join(p for p in (
                "" if a == 0 else ("t" if a == 1 else f"t^{a}"),
                "" if b == 0 else ("s" if b == 1 else f"s^{b}")) if p)
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)


def poly_mul(p: TSPoly, q: TSPoly) -> TSPoly:
    return p * q


def log_components(n: int, count: int | None = None) -> list[TSPoly]:
    """Homogeneous components f_1, ..., f_count of log(1 + t + s).

    ``count`` defaults to n + 2.  The components are returned with a
    truncation cap large enough to hold them (so f_{n+2} survives even when
    n + 2 > 2n).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    count = n + 2 if count is None else count
    cap = max(2 * n, count)
    x = TSPoly(n, {(1, 0): 1, (0, 1): 1}, cap)
    total = TSPoly(n, {}, cap)
    power = TSPoly.const(n, 1, cap)
    for j in range(1, count + 1):
        power = power * x
        total = total + power.scale(Fraction((-1) ** (j + 1), j))
    return [total.component(i) for i in range(1, count + 1)]


def exp_series(p: TSPoly) -> TSPoly:
    """exp(p) for p without constant term, truncated at the cap."""
    if p.constant_term():
        raise ValueError("exp_series needs zero constant term")
    out = TSPoly.const(p.n, 1, p.cap)
    term = TSPoly.const(p.n, 1, p.cap)
    for j in range(1, p.cap + 1):
        term = (term * p).scale(Fraction(1, j))
        if term.is_zero():
            break
        out = out + term
    return out


def sqrt_series(base: TSPoly, exponent) -> TSPoly:
    """``base ** exponent`` as a binomial series, for base with constant term 1.

    ``exponent`` may be any rational (half-integers are what the curved
    dictionary needs).  Since ``base - 1`` has no constant term its powers
    vanish beyond the cap, so the series is a finite exact sum.
    """
    if base.constant_term() != ONE:
        raise ValueError("sqrt_series needs constant term 1")
    e = Fraction(exponent)
    x = base - 1
    out = TSPoly.const(base.n, 1, base.cap)
    power = TSPoly.const(base.n, 1, base.cap)
    for j in range(1, base.cap + 1):
        power = power * x
        if power.is_zero():
            break
        out = out + power.scale(binomial(e, j))
    return out
