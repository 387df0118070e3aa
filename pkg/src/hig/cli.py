"""Command-line interface: ``hig <command> [flags]``.

Exit codes: 0 success, 2 usage error (bad flags, unparsable or inadmissible
input), 3 mathematical contract violation (singular Gram matrix, infeasible
constraint system, failed verification).
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import latex, serialize
from .cache import CacheWarning, DiskCache, resolve_cache_dir
from .curvature import (DEFAULT_LAMBDAS, InfeasibleSystem, enumerate_basis, glob_kernel, glob_lambda,
                        solution_report, solve_module_action)
from .curved import certify_lambda_independence, iso_push, kinematic_lambda
from .exprs import ExpressionError, parse, parse_curvature, parse_rational, parse_valuation
from .local import K_generator, glob_tensor, semilocal
from .scalars import Scalar, SingularMatrixError
from .valuations import (FAMILIES, ContextMismatch, InadmissibleIndex, Valuation, convolve, dim_val,
                         fourier, kinematic, pd_pair, rho, set_default_cache)

EXIT_OK, EXIT_USAGE, EXIT_MATH = 0, 2, 3


class UsageError(Exception):
    pass


# input helpers -------------------------------------------------------------------

def _load_json_arg(text: str):
    path = Path(text[1:])
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _expr(text: str) -> str:
    return text.replace("^", "**")


def valuation_arg(text: str, n: int) -> Valuation:
    """An expression, or ``@file.json`` holding a serialized valuation."""
    if text.startswith("@"):
        v = serialize.valuation_from_json(_load_json_arg(text))
        if v.n != n:
            raise UsageError(f"{text}: valuation has n={v.n}, expected n={n}")
        return v
    return parse_valuation(_expr(text), n)


def curvature_arg(text: str, n: int):
    if text.startswith("@"):
        phi = serialize.curvature_from_json(_load_json_arg(text))
        if phi.n != n:
            raise UsageError(f"{text}: curvature measure has n={phi.n}, expected n={n}")
        return phi
    return parse_curvature(_expr(text), n)


def rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ExpressionError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError("n must be >= 1")
    return v


def rational_list(text: str):
    return tuple(rational_arg(x) for x in text.split(",") if x.strip())


# approximations ----------------------------------------------------------------------

def approx_scalar(x: Scalar, digits: int) -> str:
    import mpmath
    with mpmath.workdps(digits + 5):
        pi = mpmath.pi
        num = sum(mpmath.mpf(c.numerator) / c.denominator * pi ** i for i, c in enumerate(x.num)) if x.num else 0
        den = sum(mpmath.mpf(c.numerator) / c.denominator * pi ** i for i, c in enumerate(x.den))
        val = pi ** x.shift * num / den
        return mpmath.nstr(val, digits)


def add_approx(data, digits: int):
    """Attach ``coeff_approx`` (or ``approx``) decimal strings next to every exact scalar."""
    def is_scalar(d):
        return isinstance(d, dict) and set(d) == {"num", "den"} and isinstance(d["num"], list)

    def walk(d):
        if isinstance(d, dict):
            for key in list(d):
                v = d[key]
                if is_scalar(v):
                    d[f"{key}_approx"] = approx_scalar(serialize.scalar_from_json(v), digits)
                else:
                    walk(v)
        elif isinstance(d, list):
            for i, v in enumerate(d):
                if is_scalar(v):
                    d[i] = {"exact": v, "approx": approx_scalar(serialize.scalar_from_json(v), digits)}
                else:
                    walk(v)

    if is_scalar(data):
        return {"value": data, "approx": approx_scalar(serialize.scalar_from_json(data), digits),
                "note": "approx values use pi numerically and are for reading only"}
    walk(data)
    if isinstance(data, dict):
        data["approx_note"] = "fields ending in _approx substitute pi numerically; display only"
    return data


# command implementations -----------------------------------------------------------------
# each returns (json_data, latex_text)

def cmd_dims(a):
    dims = [dim_val(a.n, k) for k in range(2 * a.n + 1)]
    data = {"n": a.n, "dims": [{"k": k, "dim": d} for k, d in enumerate(dims)], "total": sum(dims)}
    tex = latex.table(["$k$", r"$\dim \mathrm{Val}_k$"], list(enumerate(dims)))
    return data, tex


def cmd_convert(a):
    v = valuation_arg(a.expr, a.n)
    return serialize.valuation_to_json(v, a.to), latex.valuation(v, a.to)


def cmd_mul(a):
    v = valuation_arg(a.a, a.n) * valuation_arg(a.b, a.n)
    return serialize.valuation_to_json(v, a.basis), latex.valuation(v, a.basis)


def cmd_conv(a):
    v = convolve(valuation_arg(a.a, a.n), valuation_arg(a.b, a.n))
    return serialize.valuation_to_json(v, a.basis), latex.valuation(v, a.basis)


def cmd_fourier(a):
    v = fourier(valuation_arg(a.expr, a.n))
    return serialize.valuation_to_json(v, a.basis), latex.valuation(v, a.basis)


def cmd_pd(a):
    x = pd_pair(valuation_arg(a.a, a.n), valuation_arg(a.b, a.n))
    return serialize.scalar_to_json(x), latex.equation(r"\mathrm{pd}", latex.scalar(x))


def cmd_kinematic(a):
    T = kinematic(valuation_arg(a.phi, a.n), a.basis, a.right_basis or a.basis)
    return serialize.tensor_to_json(T), latex.tensor(T)


def cmd_rho(a):
    v = rho(a.n, a.k, a.r)
    return serialize.valuation_to_json(v, a.basis), latex.equation(rf"\rho_{{{a.k},{a.r}}}",
                                                                    latex.valuation(v, a.basis))


def cmd_local_kinematic(a):
    T = K_generator(a.generator, a.n)
    if a.glob == "none":
        return serialize.freecm_tensor_to_json(T), latex.free_tensor(T)
    if a.glob == "both":
        G = glob_tensor(T, "both").in_bases(a.basis)
        return serialize.tensor_to_json(G), latex.tensor(G, r"(\mathrm{glob}\otimes\mathrm{glob})K")
    S = glob_tensor(T, "right")
    return serialize.semilocal_to_json(S), latex.semilocal_tensor(S)


def cmd_semilocal(a):
    S = semilocal(a.generator, a.n)
    if a.pair:
        x = S.pair(valuation_arg(a.pair, a.n))
        data = serialize.freecm_to_json(x, a.basis)
        tex = latex.equation(r"\mathfrak{l}", latex.valuation(x.ell, a.basis)) + "\n" + \
            latex.equation(r"\mathfrak{n}", latex.valuation(x.nu, a.basis))
        return data, tex
    return serialize.semilocal_to_json(S), latex.semilocal_tensor(S)


def cmd_curved_kinematic(a):
    lam = a.lam
    phi = iso_push(valuation_arg(a.phi, a.n), lam)
    T = kinematic_lambda(phi)
    data = serialize.curved_tensor_to_json(T)
    tex = latex.curved_tensor(T)
    if a.certify:
        c = certify_lambda_independence(a.n)
        data["certificate"] = {"certified": c.certified, "degree_bound": c.degree_bound,
                               "actual_degree": c.actual_degree, "samples": [str(x) for x in c.samples],
                               "matches_flat": c.matches_flat}
        tex += f"\n% lambda-independence certified: {c.certified} (degree bound {c.degree_bound}, " \
               f"{len(c.samples)} samples)"
    return data, tex


def cmd_glob(a):
    phi = curvature_arg(a.expr, a.n)
    cv = glob_lambda(phi, a.lam)
    return serialize.curved_to_json(cv, a.basis), latex.curved_valuation(cv)


def cmd_kernel(a):
    gens = glob_kernel(a.n, a.lam)
    data = {"n": a.n, "lambda": serialize.fraction_to_json(a.lam),
            "basis_order": [str(l) for l in enumerate_basis(a.n)],
            "generators": [serialize.curvature_to_json(g) for g in gens]}
    tex = "\\begin{align*}\n" + " \\\\\n".join(rf"\kappa_{{{i}}} &= {latex.curvature(g)}"
                                               for i, g in enumerate(gens)) + "\n\\end{align*}" if gens else \
        "% kernel is trivial"
    return data, tex


def cmd_module_solve(a):
    sol = solve_module_action(a.n, lambdas=a.lambdas, t_lambdas=a.t_lambdas)
    data = solution_report(sol)
    names = [latex_label(l) for l in sol.basis_order]
    parts = [f"% n = {a.n}, solution_dim = {sol.solution_dim}, unique = {str(sol.unique).lower()}"]
    if sol.t_action is not None:
        parts += ["% t-action (rows: targets, columns: sources)", latex.matrix(sol.t_action, names, names)]
    if sol.s_action is not None:
        parts += ["% s-action (rows: targets, columns: sources)", latex.matrix(sol.s_action, names, names)]
    return data, "\n".join(parts)


def latex_label(l):
    if l.kind == "Vol":
        return r"\mathrm{Vol}"
    return ("B" if l.kind == "B" else r"\Gamma") + f"_{{{l.k},{l.q}}}"


def cmd_verify(a):
    from .verify import SUITES, run_suites
    names = a.suite or ["all"]
    for s in names:
        if s != "all" and s not in SUITES:
            raise UsageError(f"unknown suite {s!r}; choose from all, {', '.join(SUITES)}")
    checks = run_suites(names, a.n)
    passed = all(c.ok for c in checks)
    data = {"n": a.n, "suites": names, "passed": passed,
            "checks": [{"suite": c.suite, "name": c.name, "ok": c.ok, "seconds": round(c.seconds, 3),
                        "detail": c.detail} for c in checks]}
    rows = [(c.suite, latex.escape_text(c.name), "pass" if c.ok else "FAIL") for c in checks]
    tex = latex.table(["suite", "identity", "result"], rows)
    return data, tex, (EXIT_OK if passed else EXIT_MATH)


COMMANDS = {
    "dims": cmd_dims, "convert": cmd_convert, "mul": cmd_mul, "conv": cmd_conv, "fourier": cmd_fourier,
    "pd": cmd_pd, "kinematic": cmd_kinematic, "rho": cmd_rho, "local-kinematic": cmd_local_kinematic,
    "semilocal": cmd_semilocal, "curved-kinematic": cmd_curved_kinematic, "glob": cmd_glob,
    "kernel": cmd_kernel, "module-solve": cmd_module_solve, "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=positive_int, required=True, help="complex dimension")
    common.add_argument("--format", choices=("json", "latex"), default="json")
    common.add_argument("--approx", type=int, metavar="D", help="append D-digit decimal approximations")
    common.add_argument("--cache-dir", help="table cache directory (overrides HIG_CACHE_DIR)")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the disk cache")

    p = argparse.ArgumentParser(prog="hig", description="Exact hermitian integral geometry calculator.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    def basis_flag(sp, default="mono"):
        sp.add_argument("--basis", choices=FAMILIES, default=default)

    add("dims", "dimensions of Val_k^U(n)")
    sp = add("convert", "re-express a valuation in another basis")
    sp.add_argument("expr")
    sp.add_argument("--to", choices=FAMILIES, default="mu")
    for name, h in (("mul", "Alesker product"), ("conv", "convolution"), ("pd", "Poincare duality pairing")):
        sp = add(name, h)
        sp.add_argument("a")
        sp.add_argument("b")
        if name != "pd":
            basis_flag(sp)
    sp = add("fourier", "Alesker-Fourier transform")
    sp.add_argument("expr")
    basis_flag(sp)
    sp = add("kinematic", "global kinematic coproduct")
    sp.add_argument("--phi", default="chi")
    basis_flag(sp, "mu")
    sp.add_argument("--right-basis", choices=FAMILIES)
    sp = add("rho", "the valuations rho_{k,r} of the local formulas")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    basis_flag(sp)
    sp = add("local-kinematic", "principal local kinematic formulas K(Delta00), K(N10)")
    sp.add_argument("--generator", choices=("Delta00", "N10"), default="Delta00")
    sp.add_argument("--glob", choices=("none", "right", "both"), default="none")
    basis_flag(sp, "mu")
    sp = add("semilocal", "semi-local kinematic operator")
    sp.add_argument("--generator", choices=("Delta00", "N10"), default="Delta00")
    sp.add_argument("--pair", help="pair the second factor against this valuation")
    basis_flag(sp)
    sp = add("curved-kinematic", "kinematic coproduct on the curved space form")
    sp.add_argument("--lam", type=rational_arg, required=True)
    sp.add_argument("--phi", default="chi")
    sp.add_argument("--certify", action="store_true", help="attach the lambda-independence certificate")
    sp = add("glob", "globalization of a curvature measure")
    sp.add_argument("expr")
    sp.add_argument("--lam", type=rational_arg, default=Fraction(0))
    sp.add_argument("--basis", choices=("mu_lambda", "flat_mono"), default="mu_lambda")
    sp = add("kernel", "spanning set of ker glob_lambda")
    sp.add_argument("--lam", type=rational_arg, default=Fraction(0))
    sp = add("module-solve", "solve for the Val-module structure of Curv")
    sp.add_argument("--lambdas", type=rational_list, default=DEFAULT_LAMBDAS,
                    help="comma-separated lambda samples for the s-constraints")
    sp.add_argument("--t-lambdas", type=rational_list, default=(Fraction(0),),
                    help="lambda samples for glob-compatibility of t (default 0)")
    sp = add("verify", "run identity suites")
    sp.add_argument("--suite", action="append", help="suite name or 'all' (repeatable)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if args.approx is not None and args.approx < 1:
        print("hig: error: --approx needs a positive digit count", file=sys.stderr)
        return EXIT_USAGE

    cache_dir = resolve_cache_dir(args.cache_dir, args.no_cache)
    set_default_cache(DiskCache(cache_dir) if cache_dir is not None else None)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", CacheWarning)
            warnings.showwarning = lambda msg, cat, *rest, **kw: print(f"hig: warning: {msg}", file=sys.stderr)
            result = COMMANDS[args.command](args)
    except (UsageError, ExpressionError, InadmissibleIndex, ContextMismatch) as exc:
        print(f"hig: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularMatrixError, InfeasibleSystem, ArithmeticError) as exc:
        print(f"hig: mathematical contract violation: {exc}", file=sys.stderr)
        return EXIT_MATH
    finally:
        set_default_cache(None)

    code = EXIT_OK
    if len(result) == 3:
        data, tex, code = result
    else:
        data, tex = result
    if args.format == "json":
        if args.approx:
            data = add_approx(data, args.approx)
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        if args.approx:
            tex += "\n" + latex_approx(data, args.approx)
        sys.stdout.write(tex + "\n")
    return code


def latex_approx(data, digits: int) -> str:
    lines = ["% decimal approximations (pi substituted numerically, display only):"]
    out = add_approx(json.loads(json.dumps(data)), digits)

    def walk(d, path):
        if isinstance(d, dict):
            for k, v in d.items():
                if k.endswith("_approx") or k == "approx":
                    lines.append(f"%   {path}{k}: {v}")
                else:
                    walk(v, f"{path}{k}.")
        elif isinstance(d, list):
            for i, v in enumerate(d):
                walk(v, f"{path}{i}.")
    walk(out, "")
    return "\n".join(lines)


if __name__ == "__main__":
    sys.exit(main())
