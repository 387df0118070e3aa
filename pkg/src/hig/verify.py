"""Identity suites, one per acceptance criterion.

Every suite returns a list of :class:`Check` records; a check passes only on
exact equality.  ``n_max`` bounds the dimensions a suite visits (each suite
also has its own ceiling, matching the sizes the identities are meant for).
"""

from __future__ import annotations

import json
import random
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction

from . import serialize
from .cache import DiskCache
from .curvature import (CurvatureMeasure, DEFAULT_LAMBDAS, enumerate_basis, glob_conjugated_action,
                        glob_kernel, glob_lambda, glob_matrix, kernel_indices, replay_constraints,
                        solve_module_action)
from .curved import certify_lambda_independence, curved_expression, from_curved_expression, iso_push
from .local import K_generator, glob_tensor
from .polynomials import TSPoly
from .scalars import PI, rank
from .valuations import (TensorElement, ValAlgebra, Valuation, a_coeff, apply_left, apply_right, chi, convolve,
                         dim_val, family_indices, fourier, kinematic, pd_pair,
                         principal_kinematic_closed_form, random_valuation)


@dataclass
class Check:
    suite: str
    name: str
    ok: bool
    seconds: float = 0.0
    detail: str = ""


def _run(suite, name, fn):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure of the identity, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Check(suite, name, bool(ok), time.perf_counter() - t0, detail)


def _ns(n_max, ceiling, lo=1):
    return range(lo, min(n_max, ceiling) + 1)


def suite_dims(n_max=6):
    def one(n):
        def f():
            alg = ValAlgebra(n)
            got = [alg.quotient_rank(k) for k in range(2 * n + 1)]
            want = [min(k // 2, (2 * n - k) // 2) + 1 for k in range(2 * n + 1)]
            return got == want, f"ranks={got}"
        return f
    return [_run("dims", f"rank law n={n}", one(n)) for n in _ns(n_max, 6)]


def suite_pkf(n_max=4):
    def one(n):
        def f():
            return kinematic(chi(n), "prim") == principal_kinematic_closed_form(n), ""
        return f
    return [_run("pkf", f"Gram inversion = closed form n={n}", one(n)) for n in _ns(n_max, 4)]


def suite_classical(n_max=1):
    def f():
        n = 1
        mu10 = Valuation.basis_element(n, "mu", 1, 0)
        vol = Valuation.basis_element(n, "mu", 2, 1)
        want = (TensorElement.outer(chi(n), vol) + TensorElement.outer(mu10, mu10, 2 / PI)
                + TensorElement.outer(vol, chi(n)))
        return kinematic(chi(n)) == want, ""
    return [_run("classical", "n=1 kinematic(chi) = chi(x)vol + (2/pi) mu1(x)mu1 + vol(x)chi", f)]


def suite_fourier(n_max=4, pairs=10, seed=11):
    out = []
    for n in _ns(n_max, 4):
        alg_labels = [(k, q) for k in range(2 * n + 1) for q in family_indices(n, "mu", k)]

        def involution(n=n):
            rng = random.Random(seed + n)
            return all(fourier(fourier(v)) == v for v in (random_valuation(n, rng) for _ in range(pairs))), ""

        def basis_rule(n=n, labels=alg_labels):
            return all(fourier(Valuation.basis_element(n, "mu", k, q))
                       == Valuation.basis_element(n, "mu", 2 * n - k, n - k + q) for k, q in labels), ""

        def intertwine(n=n):
            rng = random.Random(seed + 100 + n)
            for _ in range(pairs):
                a, b = random_valuation(n, rng), random_valuation(n, rng)
                if fourier(a * b) != convolve(fourier(a), fourier(b)):
                    return False, "F(ab) != Fa * Fb"
            return True, ""

        out += [_run("fourier", f"F^2 = id n={n}", involution),
                _run("fourier", f"F mu_kq = mu_(2n-k,n-k+q) n={n}", basis_rule),
                _run("fourier", f"F(a.b) = Fa * Fb n={n}", intertwine)]
    return out


def suite_coalgebra(n_max=3):
    out = []
    for n in _ns(n_max, 3):
        def cocomm(n=n):
            T = kinematic(chi(n))
            return T.swap() == T, ""

        def coassoc(n=n):
            T = kinematic(chi(n))
            return apply_left(T, kinematic) == apply_right(T, kinematic), ""

        out += [_run("coalgebra", f"cocommutative n={n}", cocomm),
                _run("coalgebra", f"coassociative n={n}", coassoc)]
    return out


def suite_dualbasis(n_max=4, samples=20, seed=5):
    def one(n):
        def f():
            rng = random.Random(seed + n)
            prims = {(k, r): Valuation.basis_element(n, "prim", k, r)
                     for k in range(2 * n + 1) for r in family_indices(n, "prim", k)}
            for _ in range(samples):
                phi = random_valuation(n, rng)
                acc = Valuation.zero(n)
                for (k, r), p in prims.items():
                    acc = acc + p.scale(a_coeff(n, k, r) * pd_pair(prims[(2 * n - k, r)], phi))
                if acc != phi:
                    return False, "reconstruction failed"
            return True, ""
        return f
    return [_run("dualbasis", f"sum a pd(pi', phi) pi = phi n={n}", one(n)) for n in _ns(n_max, 4)]


def suite_local(n_max=4):
    out = []
    for n in _ns(n_max, 4):
        def delta(n=n):
            return glob_tensor(K_generator("Delta00", n)) == kinematic(chi(n)), ""

        def null(n=n):
            return glob_tensor(K_generator("N10", n)).is_zero(), ""

        def sym(n=n):
            return all(K_generator(w, n).swap() == K_generator(w, n) for w in ("Delta00", "N10")), ""

        out += [_run("local", f"(glob x glob) K(Delta00) = kinematic(chi) n={n}", delta),
                _run("local", f"(glob x glob) K(N10) = 0 n={n}", null),
                _run("local", f"K(Delta00), K(N10) swap-symmetric n={n}", sym)]
    return out


GLOB_LAMBDAS = tuple(Fraction(x) for x in ("0", "1", "-1", "1/2", "2"))


def suite_glob(n_max=4):
    out = [_run("glob", "basis counts n=1: 3, n=2: 7",
                lambda: (len(enumerate_basis(1)) == 3 and len(enumerate_basis(2)) == 7, ""))]
    for n in _ns(n_max, 4):
        def one(n=n):
            want = sum(dim_val(n, k) for k in range(2 * n + 1))
            for lam in GLOB_LAMBDAS:
                if any(not glob_lambda(v, lam).is_zero() for v in glob_kernel(n, lam)):
                    return False, f"kernel element survives at lambda={lam}"
                r = rank(glob_matrix(n, lam))
                if r != want:
                    return False, f"rank {r} != {want} at lambda={lam}"
                if len(enumerate_basis(n)) - r != len(kernel_indices(n)):
                    return False, "nullity mismatch"
            return True, ""
        out.append(_run("glob", f"kernel annihilated, rank = dim Val n={n}", one))
    return out


def suite_curved(n_max=3):
    def one(n):
        def f():
            cert = certify_lambda_independence(n)
            return cert.certified, (f"bound={cert.degree_bound} actual={cert.actual_degree} "
                                    f"samples={len(cert.samples)}")
        return f
    return [_run("curved", f"k_lambda(chi) lambda-independent n={n}", one(n)) for n in _ns(n_max, 3)]


ISO_LAMBDAS = (Fraction(1), Fraction(-1), Fraction(1, 2))


def suite_iso(n_max=4, pairs=50, seed=3):
    def one(n):
        def f():
            rng = random.Random(seed + n)
            for lam in ISO_LAMBDAS:
                for _ in range(pairs):
                    a, b = random_valuation(n, rng), random_valuation(n, rng)
                    if iso_push(a * b, lam) != iso_push(a, lam) * iso_push(b, lam):
                        return False, f"lambda={lam}"
                    # compare through the curved-coordinate expressions as well
                    ea = curved_expression(iso_push(a, lam))
                    eb = curved_expression(iso_push(b, lam))
                    if from_curved_expression(ea * eb, lam) != iso_push(a * b, lam):
                        return False, f"curved expressions lambda={lam}"
            return True, ""
        return f
    return [_run("iso", f"iso_push multiplicative n={n}", one(n)) for n in _ns(n_max, 4)]


def suite_module(n_max=3):
    out = []

    def n1():
        sol = solve_module_action(1)
        if not sol.unique:
            return False, "not unique"
        n = 1
        t_ = Valuation.from_poly(TSPoly.t(n))
        s_ = Valuation.from_poly(TSPoly.s(n))
        T = [list(r) for r in glob_conjugated_action(1, t_)]
        S = [list(r) for r in glob_conjugated_action(1, s_)]
        return sol.t_matrix() == T and sol.s_matrix() == S, ""
    out.append(_run("module", "n=1 unique, equals glob-conjugated action", n1))
    for n in _ns(n_max, 3):
        def replay(n=n):
            sol = solve_module_action(n)
            res = replay_constraints(sol, lambdas=DEFAULT_LAMBDAS)
            ok = all(v is True for v in res.values())
            # the t-action is affine in its residual freedom; replay other members of the family
            for c in (1, Fraction(-2, 3), PI):
                if sol.t_kernel:
                    extra = replay_constraints(sol, t_kernel_coeffs=[c] * len(sol.t_kernel))
                    ok &= all(v is True for v in extra.values())
            return ok, f"solution_dim={sol.solution_dim} " + " ".join(f"{k}={v}" for k, v in res.items())
        out.append(_run("module", f"constraint replay n={n}", replay))
    return out


def _roundtrip_objects(n):
    from .curved import kinematic_lambda
    from .curvature import delta
    from .local import semilocal
    rng = random.Random(n)
    v = random_valuation(n, rng)
    return [
        ((PI + 1) / (PI * PI - 3) + v.coeffs[-1], serialize.scalar_from_json),
        (v.to_poly(), serialize.tspoly_from_json),
        *[(v, serialize.valuation_from_json, b) for b in ("mono", "u", "mu", "tau", "prim")],
        (kinematic(chi(n), "mu", "prim"), serialize.tensor_from_json),
        (delta(n, 1, 0) + CurvatureMeasure.label(n, "Vol", 2 * n, n), serialize.curvature_from_json),
        (iso_push(v, Fraction(-1, 2)), serialize.curved_from_json),
        (kinematic_lambda(iso_push(chi(n), Fraction(2))), serialize.curved_tensor_from_json),
        (K_generator("N10", n), serialize.freecm_tensor_from_json),
        (semilocal("Delta00", n), serialize.semilocal_from_json),
    ]


def _same(a, b):
    from .curved import CurvedTensor
    if isinstance(a, CurvedTensor):
        return a.lam == b.lam and a.same_coefficients(b)
    return a == b


def suite_plumbing(n_max=2):
    out = []

    def roundtrip():
        for n in _ns(n_max, 3):
            for item in _roundtrip_objects(n):
                obj, dec = item[0], item[1]
                if len(item) == 3:
                    data = serialize.valuation_to_json(obj, item[2])
                else:
                    data = serialize.to_json(obj)
                back = dec(json.loads(json.dumps(data)))
                if not _same(back, obj):
                    return False, f"{type(obj).__name__} n={n}"
                if json.dumps(serialize.to_json(back) if len(item) == 2 else
                              serialize.valuation_to_json(back, item[2])) != json.dumps(data):
                    return False, f"re-emission differs for {type(obj).__name__}"
        return True, ""

    def snapshots():
        from .snapshots import SNAPSHOTS, render_snapshot
        bad = [name for name, text in SNAPSHOTS.items() if render_snapshot(name) != text]
        return not bad, ", ".join(bad)

    def cache_identity():
        with tempfile.TemporaryDirectory() as d:
            for n in _ns(n_max, 3):
                c = DiskCache(d)
                alg = ValAlgebra(n, cache=c)
                T1 = _structure_tables(alg)
                alg2 = ValAlgebra(n, cache=DiskCache(d))
                T2 = _structure_tables(alg2)
                if T1 != T2 or alg2.cache.hits == 0:
                    return False, "cache hit differs or missed"
                fresh = ValAlgebra(n)
                builders = {
                    "reduction": fresh._build_reduction, "mult": fresh._build_mult,
                    "basis-mu": lambda: fresh._build_basis("mu"),
                    "gram-mono": lambda: fresh.gram("mono"),
                    "gram-inv-mono": lambda: fresh.gram_inverse("mono"),
                }
                for name, b in builders.items():
                    if not c.verify(n, name, b):
                        return False, f"n={n} table {name} not byte-identical"
        return True, ""

    out += [_run("plumbing", "JSON round trip", roundtrip),
            _run("plumbing", "LaTeX snapshots stable", snapshots),
            _run("plumbing", "cache hit byte-identical to recomputation", cache_identity)]
    return out


def _structure_tables(alg: ValAlgebra):
    """Gram inverse (the kinematic tensor of chi) and mu basis of one algebra instance."""
    Ginv = alg.gram_inverse("mono")
    basis_mu = alg.basis_matrix("mu")
    return [tuple(r) for r in Ginv], [tuple(r) for r in basis_mu]


SUITES = {
    "dims": suite_dims, "pkf": suite_pkf, "classical": suite_classical, "fourier": suite_fourier,
    "coalgebra": suite_coalgebra, "dualbasis": suite_dualbasis, "local": suite_local, "glob": suite_glob,
    "curved": suite_curved, "iso": suite_iso, "module": suite_module, "plumbing": suite_plumbing,
}


def run_suites(names, n_max: int):
    if "all" in names:
        names = list(SUITES)
    checks = []
    for name in names:
        if name not in SUITES:
            raise KeyError(name)
        checks += SUITES[name](n_max)
    return checks


__all__ = ["Check", "SUITES", "run_suites"] + [f"suite_{k}" for k in SUITES]
