"""Local kinematic formulas on the free module generated by Delta_{0,0} and N_{1,0}.

An element ``l(phi) + n(psi)`` of the free module is a :class:`FreeCM`;
tensors are stored blockwise over the symbol pairs (l|n) x (l|n), each block
a coefficient matrix over monomial coordinates of Val^U(n).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .curvature import CurvatureMeasure, delta, n_measure, solve_module_action
from .scalars import ONE, ZERO, as_scalar, mat_mul, transpose
from .valuations import (ContextMismatch, TensorElement, Valuation, a_coeff, algebra,
                         family_indices, rho)

SYMBOLS = ("l", "n")
GENERATORS = ("Delta00", "N10")


@dataclass(frozen=True)
class FreeCM:
    """``l(ell) + n(nu)``: ell is the coefficient of Delta_{0,0}, nu that of N_{1,0}."""
    ell: Valuation
    nu: Valuation

    def __post_init__(self):
        if self.ell.n != self.nu.n:
            raise ContextMismatch("parts live in different dimensions")

    @property
    def n(self):
        return self.ell.n

    @classmethod
    def l(cls, phi: Valuation):
        return cls(phi, Valuation.zero(phi.n))

    @classmethod
    def nsym(cls, psi: Valuation):
        return cls(Valuation.zero(psi.n), psi)

    def part(self, sym):
        return self.ell if sym == "l" else self.nu

    def __add__(self, other):
        return FreeCM(self.ell + other.ell, self.nu + other.nu)

    def __sub__(self, other):
        return FreeCM(self.ell - other.ell, self.nu - other.nu)

    def scale(self, c):
        return FreeCM(self.ell.scale(c), self.nu.scale(c))

    def times(self, phi: Valuation):
        """Module action of a valuation."""
        return FreeCM(phi * self.ell, phi * self.nu)

    def is_zero(self):
        return self.ell.is_zero() and self.nu.is_zero()


def _zero_matrix(d):
    return [[ZERO] * d for _ in range(d)]


class FreeCMTensor:
    """Element of FreeCM (x) FreeCM; ``blocks[(a, b)]`` is the mono (x) mono
    coefficient matrix of the a (x) b symbol pair."""

    __slots__ = ("n", "blocks")

    def __init__(self, n: int, blocks=None):
        d = algebra(n).dim
        self.n = n
        self.blocks = {}
        for a in SYMBOLS:
            for b in SYMBOLS:
                M = (blocks or {}).get((a, b))
                self.blocks[(a, b)] = (tuple(tuple(as_scalar(c) for c in row) for row in M)
                                       if M is not None else tuple(tuple(r) for r in _zero_matrix(d)))

    @classmethod
    def outer(cls, sa, x: Valuation, sb, y: Valuation, coeff=ONE):
        coeff = as_scalar(coeff)
        M = [[a * b * coeff for b in y.coeffs] for a in x.coeffs]
        return cls(x.n, {(sa, sb): M})

    def __add__(self, other):
        if other.n != self.n:
            raise ContextMismatch("tensors of different n")
        return FreeCMTensor(self.n, {key: [[a + b for a, b in zip(r1, r2)]
                                           for r1, r2 in zip(M, other.blocks[key])]
                                     for key, M in self.blocks.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = as_scalar(c)
        return FreeCMTensor(self.n, {key: [[a * c for a in r] for r in M] for key, M in self.blocks.items()})

    def __eq__(self, other):
        if not isinstance(other, FreeCMTensor):
            return NotImplemented
        return self.n == other.n and self.blocks == other.blocks

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.blocks.items()))))

    def is_zero(self):
        return not any(c for M in self.blocks.values() for r in M for c in r)

    def swap(self):
        return FreeCMTensor(self.n, {(b, a): transpose(M) for (a, b), M in self.blocks.items()})

    def terms(self):
        """``[(sym_l, (k, p), sym_r, (k', p'), coeff)]`` over monomial labels."""
        labels = algebra(self.n).mono_labels
        out = []
        for (a, b), M in sorted(self.blocks.items()):
            for i, row in enumerate(M):
                for j, c in enumerate(row):
                    if c:
                        out.append((a, labels[i], b, labels[j], c))
        return out

    def __repr__(self):
        return f"FreeCMTensor(n={self.n}, {len(self.terms())} terms)"


def mult_matrix(phi: Valuation):
    """Matrix of x -> phi * x on monomial coordinates."""
    alg = phi.alg
    cols = []
    for j in range(alg.dim):
        e = [ONE if i == j else ZERO for i in range(alg.dim)]
        cols.append(alg.multiply(phi.coeffs, e))
    return transpose(cols)


@functools.lru_cache(maxsize=None)
def _prim(n, k, r):
    return Valuation.basis_element(n, "prim", k, r)


@functools.lru_cache(maxsize=None)
def K_generator(which: str, n: int) -> FreeCMTensor:
    """Principal local kinematic formula K(Delta_{0,0}) or K(N_{1,0})."""
    if which not in GENERATORS:
        raise ValueError(f"unknown generator {which!r}; expected one of {GENERATORS}")
    out = FreeCMTensor(n)
    for k in range(2 * n + 1):
        for r in family_indices(n, "prim", k):
            a = a_coeff(n, k, r)
            p1, p2 = _prim(n, k, r), _prim(n, 2 * n - k, r)
            r1, r2 = rho(n, k, r), rho(n, 2 * n - k, r)
            if which == "Delta00":
                out = out + FreeCMTensor.outer("l", p1, "l", p2, a)
                out = out + FreeCMTensor.outer("n", r1, "n", r2, -a)
            else:
                out = out + FreeCMTensor.outer("n", p1, "l", p2, a)
                out = out + FreeCMTensor.outer("l", p1, "n", p2, a)
                out = out + FreeCMTensor.outer("n", p1, "n", r2, -a)
                out = out + FreeCMTensor.outer("n", r1, "n", p2, -a)
    return out


def K_apply(phi: Valuation, base: FreeCMTensor, side: str = "left") -> FreeCMTensor:
    """(phi (x) chi) . base (side='left') or (chi (x) phi) . base (side='right')."""
    if phi.n != base.n:
        raise ContextMismatch("valuation and tensor of different n")
    M = mult_matrix(phi)
    if side == "left":
        return FreeCMTensor(base.n, {key: mat_mul(M, B) for key, B in base.blocks.items()})
    if side == "right":
        return FreeCMTensor(base.n, {key: mat_mul(B, transpose(M)) for key, B in base.blocks.items()})
    raise ValueError("side must be 'left' or 'right'")


def K_of(x: FreeCM) -> FreeCMTensor:
    """K(l(phi) + n(psi)) = (phi (x) chi) K(Delta00) + (psi (x) chi) K(N10)."""
    return K_apply(x.ell, K_generator("Delta00", x.n)) + K_apply(x.nu, K_generator("N10", x.n))


def glob_free(x: FreeCM) -> Valuation:
    """glob l(phi) = phi and glob n(psi) = 0."""
    return x.ell


def glob_tensor(T: FreeCMTensor, side: str = "both"):
    """Globalize one or both factors.

    'both' gives a :class:`TensorElement`; 'right' gives a
    :class:`SemiLocalTensor` (FreeCM (x) Val); 'left' gives Val (x) FreeCM,
    also returned as a SemiLocalTensor of the swapped tensor.
    """
    if side == "both":
        return TensorElement(T.n, "mono", "mono", T.blocks[("l", "l")])
    if side == "right":
        return SemiLocalTensor(T.n, {a: T.blocks[(a, "l")] for a in SYMBOLS})
    if side == "left":
        return SemiLocalTensor(T.n, {b: transpose(T.blocks[("l", b)]) for b in SYMBOLS})
    raise ValueError("side must be 'left', 'right' or 'both'")


class SemiLocalTensor:
    """Element of FreeCM (x) Val: one mono (x) mono matrix per symbol."""

    __slots__ = ("n", "blocks")

    def __init__(self, n, blocks):
        self.n = n
        self.blocks = {a: tuple(tuple(as_scalar(c) for c in r) for r in blocks[a]) for a in SYMBOLS}

    def __eq__(self, other):
        return isinstance(other, SemiLocalTensor) and self.n == other.n and self.blocks == other.blocks

    def pair(self, phi: Valuation) -> FreeCM:
        """(id (x) pd(., phi)) applied to the tensor."""
        alg = algebra(self.n)
        w = [alg.pd([ONE if i == j else ZERO for i in range(alg.dim)], phi.coeffs) for j in range(alg.dim)]
        parts = {}
        for a, M in self.blocks.items():
            parts[a] = Valuation(alg, [sum((c * x for c, x in zip(row, w) if c and x), ZERO) for row in M])
        return FreeCM(parts["l"], parts["n"])

    def glob_first(self) -> TensorElement:
        return TensorElement(self.n, "mono", "mono", self.blocks["l"])


def semilocal(which: str, n: int) -> SemiLocalTensor:
    """Semi-local operator (id (x) glob) K on a generator."""
    return glob_tensor(K_generator(which, n), "right")


def semilocal_closed_form(which: str, n: int) -> SemiLocalTensor:
    """sum a_{nkr} s(pi_{kr}) (x) pi_{2n-k,r} with s = l for Delta00 and s = n for N10."""
    sym = "l" if which == "Delta00" else "n"
    d = algebra(n).dim
    M = _zero_matrix(d)
    for k in range(2 * n + 1):
        for r in family_indices(n, "prim", k):
            a = a_coeff(n, k, r)
            x, y = _prim(n, k, r), _prim(n, 2 * n - k, r)
            for i, xi in enumerate(x.coeffs):
                if xi:
                    for j, yj in enumerate(y.coeffs):
                        if yj:
                            M[i][j] = M[i][j] + a * xi * yj
    blocks = {a: _zero_matrix(d) for a in SYMBOLS}
    blocks[sym] = M
    return SemiLocalTensor(n, blocks)


def coassociativity_defect(which: str, n: int):
    """(K (x) id) K - (id (x) K) K on the free module, as blocks over symbol triples.

    Returned, not asserted: the free module only lifts Curv^U(n).
    """
    T = K_generator(which, n)
    alg = algebra(n)
    d = alg.dim
    unit = [[ONE if i == j else ZERO for j in range(d)] for i in range(d)]
    # K on basis elements l(e_i), n(e_i)
    K_l = [K_of(FreeCM.l(Valuation(alg, unit[i]))) for i in range(d)]
    K_n = [K_of(FreeCM.nsym(Valuation(alg, unit[i]))) for i in range(d)]
    Kb = {"l": K_l, "n": K_n}
    out = {}

    def add(key, i, j, k, c):
        arr = out.setdefault(key, {})
        arr[(i, j, k)] = arr.get((i, j, k), ZERO) + c

    for (a, b), M in T.blocks.items():
        for i in range(d):
            for j in range(d):
                c = M[i][j]
                if not c:
                    continue
                for (x, y), N in Kb[a][i].blocks.items():
                    for p, row in enumerate(N):
                        for q, v in enumerate(row):
                            if v:
                                add((x, y, b), p, q, j, c * v)
                for (x, y), N in Kb[b][j].blocks.items():
                    for p, row in enumerate(N):
                        for q, v in enumerate(row):
                            if v:
                                add((a, x, y), i, p, q, -c * v)
    return {key: {idx: v for idx, v in arr.items() if v} for key, arr in out.items()
            if any(arr.values())}


# ----------------------------------------------------------------------
# bridge to Park coordinates (available when the module action is unique)

@functools.lru_cache(maxsize=None)
def _solution(n):
    return solve_module_action(n)


def bridge_available(n: int) -> bool:
    return _solution(n).unique


def bridge(x: FreeCM) -> CurvatureMeasure:
    """Image of l(phi) + n(psi) in Curv^U(n): phi . Delta_{0,0} + psi . N_{1,0}."""
    sol = _solution(x.n)
    return sol.act(x.ell, delta(x.n, 0, 0)) + sol.act(x.nu, n_measure(x.n, 1, 0))


def bridge_tensor(T: FreeCMTensor):
    """Image of a free tensor in Curv (x) Curv as a label x label matrix."""
    n = T.n
    alg = algebra(n)
    d = alg.dim
    unit = [[ONE if i == j else ZERO for j in range(d)] for i in range(d)]
    images = {}
    for a in SYMBOLS:
        imgs = []
        for i in range(d):
            e = Valuation(alg, unit[i])
            imgs.append(bridge(FreeCM.l(e) if a == "l" else FreeCM.nsym(e)).coeffs)
        images[a] = imgs
    L = len(images["l"][0])
    out = _zero_matrix(L)
    for (a, b), M in T.blocks.items():
        for i, row in enumerate(M):
            for j, c in enumerate(row):
                if not c:
                    continue
                u, v = images[a][i], images[b][j]
                for p, up in enumerate(u):
                    if up:
                        for q, vq in enumerate(v):
                            if vq:
                                out[p][q] = out[p][q] + c * up * vq
    return out


__all__ = [
    "FreeCM", "FreeCMTensor", "SemiLocalTensor", "K_generator", "K_apply", "K_of", "glob_free",
    "glob_tensor", "semilocal", "semilocal_closed_form", "coassociativity_defect", "mult_matrix",
    "bridge_available", "bridge", "bridge_tensor", "SYMBOLS", "GENERATORS",
]
