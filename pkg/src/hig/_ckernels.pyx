# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_kernels_py``: same functions, same contracts."""

from fractions import Fraction
from math import gcd as _gcd, lcm as _lcm

BACKEND = "cython"
_ZERO = Fraction(0)


cpdef tuple trim(a):
    cdef Py_ssize_t n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return tuple(a[:n])


cpdef tuple add(tuple a, tuple b):
    cdef Py_ssize_t i, lb
    if len(a) < len(b):
        a, b = b, a
    cdef list out = list(a)
    lb = len(b)
    for i in range(lb):
        out[i] = out[i] + b[i]
    return trim(out)


cpdef tuple sub(tuple a, tuple b):
    cdef Py_ssize_t i
    cdef Py_ssize_t la = len(a), lb = len(b)
    cdef Py_ssize_t m = la if la > lb else lb
    cdef list out = [_ZERO] * m
    for i in range(la):
        out[i] = a[i]
    for i in range(lb):
        out[i] = out[i] - b[i]
    return trim(out)


cpdef tuple scale(tuple a, c):
    if not c:
        return ()
    return tuple([x * c for x in a])


# The hot kernels work on integer numerators over a common denominator, so
# every coefficient is normalized once instead of after every operation.

cdef tuple _ints(a):
    """(integer numerators, common denominator) of a rational coefficient tuple."""
    cdef object L = 1, x
    for x in a:
        L = _lcm(L, x.denominator)
    return [x.numerator * (L // x.denominator) for x in a], L


cdef list _prem(list A, list B):
    """Pseudo-remainder: lc(B)^(deg A - deg B + 1) A mod B over the integers."""
    cdef Py_ssize_t i, j, db = len(B) - 1, la = len(A)
    cdef list R = list(A)
    cdef object lc = B[db], c
    if la <= db:
        return R
    for i in range(la - 1, db - 1, -1):
        c = R[i]
        for j in range(i + 1):
            R[j] = R[j] * lc
        if c:
            for j in range(db + 1):
                R[i - db + j] = R[i - db + j] - c * B[j]
    return R[:db]


cdef list _primitive(list A):
    cdef object g = 0, x
    for x in A:
        g = _gcd(g, x)
        if g == 1:
            break
    if A and A[len(A) - 1] < 0:
        g = -g
    if g == 1:
        return A
    return [x // g for x in A]


cdef list _itrim(list A):
    cdef Py_ssize_t n = len(A)
    while n and not A[n - 1]:
        n -= 1
    return A[:n]


cpdef tuple mul(tuple a, tuple b):
    cdef Py_ssize_t i, j, la = len(a), lb = len(b)
    if la == 0 or lb == 0:
        return ()
    A, da = _ints(a)
    B, db = _ints(b)
    cdef list out = [0] * (la + lb - 1)
    cdef object x
    for i in range(la):
        x = A[i]
        if not x:
            continue
        for j in range(lb):
            out[i + j] = out[i + j] + x * B[j]
    d = da * db
    return trim([Fraction(c, d) for c in out])


cpdef tuple divmod_(tuple a, tuple b):
    cdef Py_ssize_t i, j, db, lr
    if len(b) == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    lr = len(a)
    if lr <= db:
        return (), trim(a)
    A, da = _ints(a)
    B, dbb = _ints(b)
    lc = B[db]
    # integer pseudo-division lc^e A = Q B + R, rescaled once at the end
    cdef list R = list(A)
    cdef list Q = [0] * (lr - db)
    cdef Py_ssize_t e = 0
    for i in range(lr - 1, db - 1, -1):
        c = R[i]
        if not c:
            continue
        for j in range(i):
            R[j] = R[j] * lc
        for j in range(lr - db):
            Q[j] = Q[j] * lc
        Q[i - db] = c
        R[i] = 0
        for j in range(db):
            R[i - db + j] = R[i - db + j] - c * B[j]
        e += 1
    scale_ = da * lc ** e
    return (trim([Fraction(x * dbb, scale_) for x in Q]),
            trim([Fraction(x, scale_) for x in R[:db]]))


cpdef tuple monic(tuple a):
    if len(a) == 0:
        return ()
    lead = Fraction(a[len(a) - 1])
    if lead == 1:
        return tuple([Fraction(x) for x in a])
    return tuple([x / lead for x in a])


cpdef tuple gcd(a, b):
    """Monic gcd via the primitive pseudo-remainder sequence over the integers."""
    cdef tuple x = trim(a), y = trim(b)
    if not x:
        return monic(y)
    if not y:
        return monic(x)
    X = _primitive(_ints(x)[0])
    Y = _primitive(_ints(y)[0])
    if len(X) < len(Y):
        X, Y = Y, X
    while Y:
        if len(Y) == 1:
            return (Fraction(1),)
        R = _itrim(_prem(X, Y))
        X, Y = Y, (_primitive(R) if R else R)
    lead = X[len(X) - 1]
    return tuple([Fraction(c, lead) for c in X])


cpdef Py_ssize_t low_order(tuple a):
    cdef Py_ssize_t i = 0
    for c in a:
        if c:
            return i
        i += 1
    return i
