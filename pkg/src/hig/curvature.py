"""Unitarily invariant curvature measures on C^n in Park's basis.

Labels are ``B(k,q)`` (k > 2q), ``Gamma(k,q)`` (q > k - n), both with
max(0, k-n) <= q <= k/2 and k <= 2n - 1, plus the volume ``Vol``.  The
angular measures Delta_{kq} and the null measures N_{kq} give a second
coordinate system; glob_lambda maps into the mu^lambda basis of the curved
valuation algebra.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import NamedTuple

from .curved import CurvedValuation, curved_context, from_curved_expression
from .polynomials import TSPoly, sqrt_series
from .scalars import (ONE, ZERO, Scalar, as_scalar, inverse, mat_mul, nullspace, rref)
from .valuations import ContextMismatch, InadmissibleIndex, Valuation, algebra

_KIND_ORDER = {"B": 0, "Gamma": 1, "Vol": 2}


class Label(NamedTuple):
    kind: str
    k: int
    q: int

    def __str__(self):
        return "Vol" if self.kind == "Vol" else f"{self.kind}({self.k},{self.q})"


def is_b(n, k, q) -> bool:
    return 0 <= k <= 2 * n - 1 and k > 2 * q and max(0, k - n) <= q <= k // 2


def is_gamma(n, k, q) -> bool:
    return 0 <= k <= 2 * n - 1 and n > k - q and max(0, k - n) <= q <= k // 2


def enumerate_basis(n: int) -> list[Label]:
    """Park labels ordered by degree, then B before Gamma, then q."""
    if n < 1:
        raise ValueError("n must be >= 1")
    labels = []
    for k in range(2 * n):
        for q in range(k // 2 + 1):
            if is_b(n, k, q):
                labels.append(Label("B", k, q))
            if is_gamma(n, k, q):
                labels.append(Label("Gamma", k, q))
    labels.append(Label("Vol", 2 * n, n))
    labels.sort(key=lambda l: (l.k, _KIND_ORDER[l.kind], l.q))
    return labels


def kernel_indices(n: int) -> list[tuple[int, int]]:
    """(k, q) with k > 2q and q > k - n: the indices of the N_{k,q}."""
    return [(k, q) for k in range(2 * n) for q in range(k // 2 + 1)
            if k > 2 * q and q > k - n and q >= 0]


def delta_indices(n: int) -> list[tuple[int, int]]:
    out = [(k, q) for k in range(2 * n) for q in range(max(0, k - n), k // 2 + 1) if 2 * q <= k < 2 * n]
    return out + [(2 * n, n)]


@functools.lru_cache(maxsize=None)
def _space(n: int):
    labels = enumerate_basis(n)
    return labels, {l: i for i, l in enumerate(labels)}


class CurvatureMeasure:
    """Immutable linear combination of Park basis labels."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        labels, _ = _space(n)
        coeffs = tuple(as_scalar(c) for c in coeffs)
        if len(coeffs) != len(labels):
            raise ValueError("wrong number of coordinates")
        self.n, self.coeffs = n, coeffs

    @classmethod
    def from_terms(cls, n: int, terms: dict):
        labels, pos = _space(n)
        vec = [ZERO] * len(labels)
        for lab, c in terms.items():
            lab = Label(*lab)
            if lab not in pos:
                raise InadmissibleIndex(f"{lab} is not a basis label for n={n}")
            vec[pos[lab]] = vec[pos[lab]] + as_scalar(c)
        return cls(n, vec)

    @classmethod
    def label(cls, n: int, kind: str, k: int, q: int):
        return cls.from_terms(n, {Label(kind, k, q): ONE})

    @property
    def labels(self):
        return _space(self.n)[0]

    def terms(self) -> dict:
        return {l: c for l, c in zip(self.labels, self.coeffs) if c}

    def _check(self, other):
        if not isinstance(other, CurvatureMeasure):
            raise TypeError("expected CurvatureMeasure")
        if other.n != self.n:
            raise ContextMismatch("curvature measures of different n")

    def __add__(self, other):
        self._check(other)
        return CurvatureMeasure(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return CurvatureMeasure(self.n, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return CurvatureMeasure(self.n, [-a for a in self.coeffs])

    def scale(self, c):
        c = as_scalar(c)
        return CurvatureMeasure(self.n, [a * c for a in self.coeffs])

    __rmul__ = scale

    def __mul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, CurvatureMeasure):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def is_zero(self):
        return not any(self.coeffs)

    def __repr__(self):
        body = " + ".join(f"({c})*{l}" for l, c in self.terms().items()) or "0"
        return f"CurvatureMeasure(n={self.n}, {body})"


def _ratio(n, k, q) -> Fraction:
    return Fraction(2 * (n - k + q), 2 * n - k)


def delta(n: int, k: int, q: int) -> CurvatureMeasure:
    """Angular curvature measure Delta_{k,q}."""
    if (k, q) == (2 * n, n):
        return CurvatureMeasure.label(n, "Vol", 2 * n, n)
    if not (max(0, k - n) <= q and 2 * q <= k < 2 * n):
        raise InadmissibleIndex(f"Delta({k},{q}) is not admissible for n={n}")
    terms = {}
    if is_gamma(n, k, q):
        terms[Label("Gamma", k, q)] = _ratio(n, k, q)
    if is_b(n, k, q):
        terms[Label("B", k, q)] = Fraction(k - 2 * q, 2 * n - k)
    return CurvatureMeasure.from_terms(n, terms)


def n_measure(n: int, k: int, q: int) -> CurvatureMeasure:
    """N_{k,q} = 2(n-k+q)/(2n-k) (Gamma_{k,q} - B_{k,q})."""
    if (k, q) == (1, 0) and not is_gamma(n, 1, 0):
        # n = 1: the coefficient 2(n-k+q) vanishes and Gamma_{1,0} is absent
        return CurvatureMeasure(n, [ZERO] * len(_space(n)[0]))
    if (k, q) not in kernel_indices(n):
        raise InadmissibleIndex(f"N({k},{q}) is not admissible for n={n}")
    c = _ratio(n, k, q)
    return CurvatureMeasure.from_terms(n, {Label("Gamma", k, q): c, Label("B", k, q): -c})


def glob_kernel(n: int, lam) -> list[CurvatureMeasure]:
    """Spanning set N_{k,q} + lambda (q+1)/pi B_{k+2,q+1} of ker glob_lambda."""
    lam = Fraction(lam)
    out = []
    for k, q in kernel_indices(n):
        corr = CurvatureMeasure.label(n, "B", k + 2, q + 1).scale(Scalar.pi_power(-1, lam * (q + 1)))
        out.append(n_measure(n, k, q) + corr)
    return out


# ----------------------------------------------------------------------
# Delta / N coordinates

@functools.lru_cache(maxsize=None)
def delta_n_change(n: int):
    """Matrices between label coordinates and (Delta, N) coordinates.

    Returns ``(names, to_labels, from_labels)`` where ``names`` lists
    ("Delta", k, q) / ("N", k, q) in label-degree order, ``to_labels`` has
    one column per name, and ``from_labels`` is its inverse.
    """
    labels, _ = _space(n)
    names = [("Delta", k, q) for k, q in delta_indices(n)] + [("N", k, q) for k, q in kernel_indices(n)]
    names.sort(key=lambda x: (x[1], x[0] == "N", x[2]))
    cols = [(delta(n, k, q) if kind == "Delta" else n_measure(n, k, q)).coeffs for kind, k, q in names]
    to_labels = [[cols[j][i] for j in range(len(cols))] for i in range(len(labels))]
    return names, to_labels, inverse(to_labels)


# ----------------------------------------------------------------------
# globalization

@functools.lru_cache(maxsize=None)
def _glob_columns(n: int, lam: Fraction):
    """mu^lambda-coordinates of glob_lambda of every label (dict label -> vector)."""
    mu_labels = algebra(n).labels("mu")
    mpos = {lab: i for i, lab in enumerate(mu_labels)}
    dim = len(mu_labels)

    def unit(lab):
        v = [ZERO] * dim
        v[mpos[lab]] = ONE
        return v

    def axpy(a, x, y):
        return [yi + a * xi for xi, yi in zip(x, y)]

    deltas = {}
    for k, q in sorted(delta_indices(n), key=lambda kq: -kq[0]):
        # mu^lambda_{kq} = sum_i lambda^i (q+i)!/(pi^i q!) glob Delta_{k+2i,q+i}
        g = unit((k, q))
        i = 1
        while k + 2 * i <= 2 * n:
            key = (k + 2 * i, q + i)
            if key in deltas:
                c = Scalar.pi_power(-i, lam ** i * Fraction(factorial(q + i), factorial(q)))
                g = axpy(-c, deltas[key], g)
            i += 1
        deltas[(k, q)] = g

    bs = {}

    def glob_b(k, q):
        if (k, q) in bs:
            return bs[(k, q)]
        if is_gamma(n, k, q):
            # B = Delta - N and glob N_{kq} = -lambda (q+1)/pi glob B_{k+2,q+1}
            c = Scalar.pi_power(-1, lam * (q + 1))
            v = axpy(c, glob_b(k + 2, q + 1), deltas[(k, q)])
        else:
            v = deltas[(k, q)]
        bs[(k, q)] = v
        return v

    cols = {}
    for lab in _space(n)[0]:
        if lab.kind == "Vol":
            cols[lab] = deltas[(2 * n, n)]
        elif lab.kind == "B":
            cols[lab] = glob_b(lab.k, lab.q)
        elif lab.k == 2 * lab.q:
            cols[lab] = deltas[(lab.k, lab.q)]
        else:
            # Gamma = B + N / ratio
            c = Scalar.pi_power(-1, lam * (lab.q + 1)) / _ratio(n, lab.k, lab.q)
            cols[lab] = axpy(-c, glob_b(lab.k + 2, lab.q + 1), glob_b(lab.k, lab.q))
    return cols


def glob_matrix(n: int, lam) -> list:
    """Matrix of glob_lambda: rows indexed by mu^lambda labels, columns by Park labels."""
    cols = _glob_columns(n, Fraction(lam))
    labels = _space(n)[0]
    return [[cols[l][i] for l in labels] for i in range(len(cols[labels[0]]))]


def glob_coords(phi: CurvatureMeasure, lam) -> list:
    M = glob_matrix(phi.n, lam)
    return [sum((a * b for a, b in zip(row, phi.coeffs) if a and b), ZERO) for row in M]


def glob_lambda(phi: CurvatureMeasure, lam) -> CurvedValuation:
    lam = Fraction(lam)
    ctx = curved_context(phi.n, lam)
    coords = glob_coords(phi, lam)
    flat = [ZERO] * ctx.alg.dim
    for c, col in zip(coords, ctx.basis):
        if c:
            flat = [f + c * b for f, b in zip(flat, col)]
    return CurvedValuation(Valuation(ctx.alg, flat), lam)


def glob_flat(phi: CurvatureMeasure) -> Valuation:
    return glob_lambda(phi, 0).flat


# ----------------------------------------------------------------------
# module structure solver

def _mult_matrix_mu_lambda(n: int, lam: Fraction, flat_elem) -> list:
    """Matrix of multiplication by a curved valuation in mu^lambda coordinates."""
    ctx = curved_context(n, lam)
    cols = []
    for b in ctx.basis:
        cols.append(ctx.mu_lambda_coords(ctx.alg.multiply(flat_elem, b)))
    return [[cols[j][i] for j in range(len(cols))] for i in range(len(cols))]


def curved_t(n: int, lam) -> Valuation:
    """Flat representative of the curved generator t: t (1 - lambda s)^(-1/2)."""
    lam = Fraction(lam)
    p = TSPoly(n, {(1, 0): 1}) * sqrt_series(TSPoly(n, {(0, 0): 1, (0, 1): -lam}), Fraction(-1, 2))
    return Valuation.from_poly(p)


class InfeasibleSystem(ArithmeticError):
    pass


def _solve_affine(rows, rhs, nvars):
    """Affine solution set of rows @ x = rhs: (particular, kernel basis)."""
    if not rows:
        return [ZERO] * nvars, [[ONE if i == j else ZERO for i in range(nvars)] for j in range(nvars)]
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = rref(aug, nvars + 1)
    if nvars in pivots:
        raise InfeasibleSystem("module-action constraints are inconsistent")
    x = [ZERO] * nvars
    for row, p in zip(R, pivots):
        x[p] = row[nvars]
    return x, nullspace(rows, nvars)


@dataclass
class ModuleSolution:
    n: int
    basis_order: list
    s_unknowns: list
    t_unknowns: list
    s_particular: list
    s_kernel: list
    t_particular: list | None
    t_kernel: list | None
    lambdas: tuple
    t_lambdas: tuple
    notes: list = field(default_factory=list)

    @property
    def solution_dim(self) -> int:
        return len(self.s_kernel) + (len(self.t_kernel) if self.t_kernel is not None else 0)

    @property
    def unique(self) -> bool:
        return self.t_particular is not None and self.solution_dim == 0

    def _matrix(self, unknowns, values):
        labels = self.basis_order
        pos = {l: i for i, l in enumerate(labels)}
        A = [[ZERO] * len(labels) for _ in labels]
        for (src, dst), v in zip(unknowns, values):
            A[pos[dst]][pos[src]] = v
        return A

    def s_matrix(self, kernel_coeffs=None):
        vals = list(self.s_particular)
        for c, kv in zip(kernel_coeffs or [], self.s_kernel):
            vals = [a + as_scalar(c) * b for a, b in zip(vals, kv)]
        return self._matrix(self.s_unknowns, vals)

    def t_matrix(self, kernel_coeffs=None):
        if self.t_particular is None:
            return None
        vals = list(self.t_particular)
        for c, kv in zip(kernel_coeffs or [], self.t_kernel):
            vals = [a + as_scalar(c) * b for a, b in zip(vals, kv)]
        return self._matrix(self.t_unknowns, vals)

    @property
    def s_action(self):
        return self.s_matrix() if not self.s_kernel else None

    @property
    def t_action(self):
        return self.t_matrix() if self.unique else None

    def act(self, v: Valuation, phi: CurvatureMeasure) -> CurvatureMeasure:
        """Module action of a flat valuation on a curvature measure (needs a unique solution)."""
        if not self.unique:
            raise ValueError("module action is not uniquely determined")
        T, S = self.t_matrix(), self.s_matrix()
        out = [ZERO] * len(phi.coeffs)
        for (k, p), c in zip(v.alg.mono_labels, v.coeffs):
            if not c:
                continue
            w = list(phi.coeffs)
            for _ in range(k - 2 * p):
                w = _apply(T, w)
            for _ in range(p):
                w = _apply(S, w)
            out = [a + c * b for a, b in zip(out, w)]
        return CurvatureMeasure(phi.n, out)


def _apply(A, v):
    return [sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in A]


def _unknowns(labels, step):
    out = []
    for src in labels:
        if src.kind == "Vol":
            continue
        for dst in labels:
            if dst.k == src.k + step:
                out.append((src, dst))
    return out


def _s_constraints(n, labels, unknowns, lambdas):
    upos = {u: i for i, u in enumerate(unknowns)}
    rows, rhs = [], []
    nv = len(unknowns)
    # Beta containment: s * B_{k,q} has no Gamma or Vol component
    for (src, dst), i in upos.items():
        if src.kind == "B" and dst.kind != "B":
            r = [ZERO] * nv
            r[i] = ONE
            rows.append(r)
            rhs.append(ZERO)
    sflat = Valuation.from_poly(TSPoly.s(n)).coeffs
    for lam in lambdas:
        G = glob_matrix(n, lam)
        Ms = _mult_matrix_mu_lambda(n, lam, sflat)
        cols = {l: [row[j] for row in G] for j, l in enumerate(labels)}
        for src in labels:
            target = _apply(Ms, cols[src])
            for i in range(len(G)):
                r = [ZERO] * nv
                for (s_, dst), j in upos.items():
                    if s_ == src and cols[dst][i]:
                        r[j] = cols[dst][i]
                if any(r) or target[i]:
                    rows.append(r)
                    rhs.append(target[i])
    return rows, rhs


def _t_constraints(n, labels, unknowns, t_lambdas, S):
    upos = {u: i for i, u in enumerate(unknowns)}
    pos = {l: i for i, l in enumerate(labels)}
    nv = len(unknowns)
    rows, rhs = [], []
    names, _, from_labels = delta_n_change(n)
    # angularity: t * Delta_{k,q} has no N component
    for kind, k, q in names:
        if kind != "Delta" or k >= 2 * n:
            continue
        d = delta(n, k, q).coeffs
        for ni, (kind2, k2, q2) in enumerate(names):
            if kind2 != "N" or k2 != k + 1:
                continue
            r = [ZERO] * nv
            for (src, dst), j in upos.items():
                c = d[pos[src]]
                if c and from_labels[ni][pos[dst]]:
                    r[j] = r[j] + c * from_labels[ni][pos[dst]]
            if any(r):
                rows.append(r)
                rhs.append(ZERO)
    # globalization compatibility
    for lam in t_lambdas:
        G = glob_matrix(n, lam)
        Mt = _mult_matrix_mu_lambda(n, Fraction(lam), curved_t(n, lam).coeffs)
        cols = {l: [row[j] for row in G] for j, l in enumerate(labels)}
        for src in labels:
            target = _apply(Mt, cols[src])
            for i in range(len(G)):
                r = [ZERO] * nv
                for (s_, dst), j in upos.items():
                    if s_ == src and cols[dst][i]:
                        r[j] = cols[dst][i]
                if any(r) or target[i]:
                    rows.append(r)
                    rhs.append(target[i])
    # commutativity T S = S T, linear in T once S is fixed
    if S is not None:
        L = len(labels)
        for a in range(L):
            for b in range(L):
                r = [ZERO] * nv
                # (T S)[a][b] = sum_c T[a][c] S[c][b];  (S T)[a][b] = sum_c S[a][c] T[c][b]
                for (src, dst), j in upos.items():
                    ia, ic = pos[dst], pos[src]
                    if ia == a and S[ic][b]:
                        r[j] = r[j] + S[ic][b]
                    if ic == b and S[a][ia]:
                        r[j] = r[j] - S[a][ia]
                if any(r):
                    rows.append(r)
                    rhs.append(ZERO)
    return rows, rhs


DEFAULT_LAMBDAS = tuple(Fraction(x) for x in ("0", "1", "-1", "1/2", "-1/2", "2"))


def solve_module_action(n: int, lambdas=DEFAULT_LAMBDAS, t_lambdas=(Fraction(0),)) -> ModuleSolution:
    """Solve for the actions of t and s on Park's basis from structural constraints.

    The s-action is constrained by Beta containment and by glob_lambda
    compatibility at every sampled lambda (it does not depend on lambda).
    The t-action is constrained by angularity, glob compatibility at the
    ``t_lambdas`` and commutativity with s.  Residual freedom is reported.
    """
    labels = enumerate_basis(n)
    su = _unknowns(labels, 2)
    tu = _unknowns(labels, 1)
    lambdas = tuple(Fraction(x) for x in lambdas)
    t_lambdas = tuple(Fraction(x) for x in t_lambdas)
    rows, rhs = _s_constraints(n, labels, su, lambdas)
    s_part, s_ker = _solve_affine(rows, rhs, len(su))
    sol = ModuleSolution(n, labels, su, tu, s_part, s_ker, None, None, lambdas, t_lambdas)
    S = sol.s_matrix() if not s_ker else None
    if S is None:
        sol.notes.append("s-action not unique; commutativity not imposed on t")
    rows, rhs = _t_constraints(n, labels, tu, t_lambdas, S)
    sol.t_particular, sol.t_kernel = _solve_affine(rows, rhs, len(tu))
    return sol


def replay_constraints(sol: ModuleSolution, lambdas=None, t_lambdas=None, t_kernel_coeffs=None) -> dict:
    """Re-check a solution against every constraint family; returns name -> bool.

    ``t_kernel_coeffs`` picks a member of the affine family of t-actions
    (default: the particular solution).
    """
    n = sol.n
    labels = sol.basis_order
    lambdas = sol.lambdas if lambdas is None else tuple(Fraction(x) for x in lambdas)
    t_lambdas = sol.t_lambdas if t_lambdas is None else tuple(Fraction(x) for x in t_lambdas)
    S, T = sol.s_matrix(), sol.t_matrix(t_kernel_coeffs)
    out = {}
    pos = {l: i for i, l in enumerate(labels)}

    def act(A, phi):
        return CurvatureMeasure(n, _apply(A, phi.coeffs))

    beta = True
    for l in labels:
        if l.kind == "B":
            img = act(S, CurvatureMeasure.label(n, "B", l.k, l.q))
            beta &= all(lab.kind == "B" for lab in img.terms())
    out["beta"] = beta
    names, _, from_labels = delta_n_change(n)
    ang = True
    if T is not None:
        for kind, k, q in names:
            if kind == "Delta" and k < 2 * n:
                img = _apply(T, delta(n, k, q).coeffs)
                dn = _apply(from_labels, img)
                ang &= all(not c for (kd, _, _), c in zip(names, dn) if kd == "N")
    out["angularity"] = ang if T is not None else None
    sflat = Valuation.from_poly(TSPoly.s(n))
    glob_s = True
    for lam in lambdas:
        for l in labels:
            phi = CurvatureMeasure.label(n, l.kind, l.k, l.q)
            lhs = glob_lambda(act(S, phi), lam)
            rhs = glob_lambda(phi, lam) * CurvedValuation(sflat, lam)
            glob_s &= lhs == rhs
    out["glob_s"] = glob_s
    if T is not None:
        glob_t = True
        for lam in t_lambdas:
            tl = CurvedValuation(curved_t(n, lam), lam)
            for l in labels:
                phi = CurvatureMeasure.label(n, l.kind, l.k, l.q)
                glob_t &= glob_lambda(act(T, phi), lam) == glob_lambda(phi, lam) * tl
        out["glob_t"] = glob_t
        out["commute"] = mat_mul(T, S) == mat_mul(S, T)
    else:
        out["glob_t"] = out["commute"] = None
    return out


def glob_conjugated_action(n: int, v: Valuation):
    """For n = 1 (glob_0 bijective): matrix of Phi -> glob_0^{-1}(v * glob_0 Phi)."""
    labels = enumerate_basis(n)
    G = glob_matrix(n, 0)
    if len(G) != len(labels):
        raise ValueError("glob_0 is not bijective for this n")
    Ginv = inverse(G)
    M = _mult_matrix_mu_lambda(n, Fraction(0), v.coeffs)
    return mat_mul(mat_mul(Ginv, M), G)


def solution_report(sol: ModuleSolution) -> dict:
    from .serialize import scalar_to_json

    def mat(A):
        return None if A is None else [[scalar_to_json(c) for c in row] for row in A]

    return {
        "n": sol.n,
        "solution_dim": sol.solution_dim,
        "unique": sol.unique,
        "t_action": mat(sol.t_action),
        "s_action": mat(sol.s_action),
        "basis_order": [str(l) for l in sol.basis_order],
        "s_solution_dim": len(sol.s_kernel),
        "t_solution_dim": None if sol.t_kernel is None else len(sol.t_kernel),
        "lambdas": [str(x) for x in sol.lambdas],
        "t_lambdas": [str(x) for x in sol.t_lambdas],
    }


__all__ = [
    "Label", "CurvatureMeasure", "enumerate_basis", "kernel_indices", "delta_indices",
    "delta", "n_measure", "glob_kernel", "glob_matrix", "glob_coords", "glob_lambda", "glob_flat",
    "delta_n_change", "solve_module_action", "replay_constraints", "ModuleSolution",
    "InfeasibleSystem", "glob_conjugated_action", "curved_t", "solution_report",
]
