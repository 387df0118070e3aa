"""Pure-Python univariate polynomial kernels over the rationals.

Polynomials are tuples of coefficients, lowest degree first, with no
trailing zeros; the zero polynomial is ``()``.  Coefficients are
``fractions.Fraction`` (plain ``int`` is accepted on input).

This module is the reference implementation; ``_ckernels.pyx`` mirrors it
function for function.
"""

from fractions import Fraction

_ZERO = Fraction(0)

BACKEND = "python"


def trim(a):
    n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return tuple(a[:n])


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def sub(a, b):
    m = max(len(a), len(b))
    out = [_ZERO] * m
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] -= c
    return trim(out)


def scale(a, c):
    if not c:
        return ()
    return tuple(x * c for x in a)


def mul(a, b):
    if not a or not b:
        return ()
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def divmod_(a, b):
    """Quotient and remainder of ``a`` by nonzero ``b``."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    lead = Fraction(b[-1])
    if len(r) <= db:
        return (), trim(r)
    q = [_ZERO] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if not c:
            continue
        c = c / lead
        q[i - db] = c
        for j in range(db + 1):
            r[i - db + j] -= c * b[j]
    return trim(q), trim(r[:db])


def monic(a):
    if not a:
        return ()
    lead = Fraction(a[-1])
    if lead == 1:
        return tuple(Fraction(x) for x in a)
    return tuple(x / lead for x in a)


def gcd(a, b):
    """Monic greatest common divisor (``()`` when both are zero)."""
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_(a, b)
        a, b = b, monic(r)
    return monic(a)


def low_order(a):
    """Number of leading zero coefficients (the power of x dividing a)."""
    i = 0
    for c in a:
        if c:
            return i
        i += 1
    return i
