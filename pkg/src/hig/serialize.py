"""JSON encoding of every exact object.

Integers are written as decimal strings so arbitrary precision survives any
JSON reader.  ``dumps`` is canonical (sorted keys are not used; field order is
fixed by construction), so equal objects serialize to identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .curvature import CurvatureMeasure, Label
from .curved import CurvedTensor, CurvedValuation, curved_context
from .local import SYMBOLS, FreeCM, FreeCMTensor, SemiLocalTensor
from .polynomials import TSPoly
from .scalars import ZERO, Scalar
from .valuations import FAMILIES, TensorElement, Valuation, algebra


class SerializationError(ValueError):
    pass


# scalars -------------------------------------------------------------------

def fraction_to_json(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator)}


def fraction_from_json(d) -> Fraction:
    try:
        return Fraction(int(d["num"]), int(d["den"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise SerializationError(f"bad rational: {d!r}") from exc


def scalar_to_json(x: Scalar) -> dict:
    num = [[str(c.numerator), str(c.denominator), i + x.shift] for i, c in enumerate(x.num) if c]
    den = [[str(c.numerator), str(c.denominator), i] for i, c in enumerate(x.den) if c]
    return {"num": num, "den": den}


def _laurent(terms):
    if not terms:
        return (), 0
    coeffs = {}
    for t in terms:
        if len(t) != 3:
            raise SerializationError(f"bad scalar term {t!r}")
        c = Fraction(int(t[0]), int(t[1]))
        coeffs[int(t[2])] = coeffs.get(int(t[2]), 0) + c
    lo, hi = min(coeffs), max(coeffs)
    return tuple(Fraction(coeffs.get(e, 0)) for e in range(lo, hi + 1)), lo


def scalar_from_json(d) -> Scalar:
    try:
        num, shift = _laurent(d["num"])
        den, dshift = _laurent(d["den"]) if d.get("den") else ((Fraction(1),), 0)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise SerializationError(f"bad scalar: {d!r}") from exc
    if not any(num):
        return ZERO
    if not any(den):
        raise SerializationError("scalar with zero denominator")
    return Scalar.from_parts(num, den, shift - dshift)


# polynomials and valuations ---------------------------------------------------

def tspoly_to_json(p: TSPoly) -> dict:
    out = {"n": p.n, "terms": [{"t": a, "s": b, "coeff": scalar_to_json(c)} for (a, b), c in p.sorted_terms()]}
    if p.cap != 2 * p.n:
        out["cap"] = p.cap
    return out


def tspoly_from_json(d) -> TSPoly:
    return TSPoly(int(d["n"]), {(int(t["t"]), int(t["s"])): scalar_from_json(t["coeff"]) for t in d["terms"]},
                  d.get("cap"))


def valuation_to_json(v: Valuation, basis: str = "mono") -> dict:
    coords = v.coordinates(basis)
    return {"n": v.n, "basis": basis,
            "terms": [{"k": k, "idx": i, "coeff": scalar_to_json(c)} for (k, i), c in sorted(coords.items())]}


def valuation_from_json(d) -> Valuation:
    basis = d.get("basis", "mono")
    if basis not in FAMILIES:
        raise SerializationError(f"unknown basis {basis!r}")
    coeffs = {}
    for t in d["terms"]:
        key = (int(t["k"]), int(t["idx"]))
        coeffs[key] = coeffs.get(key, ZERO) + scalar_from_json(t["coeff"])
    return Valuation.from_coefficients(int(d["n"]), basis, coeffs)


def tensor_to_json(T: TensorElement) -> dict:
    return {"n": T.n, "basis_left": T.left, "basis_right": T.right,
            "terms": [{"left": list(l), "right": list(r), "coeff": scalar_to_json(c)} for l, r, c in T.terms()]}


def tensor_from_json(d) -> TensorElement:
    terms = [(tuple(t["left"]), tuple(t["right"]), scalar_from_json(t["coeff"])) for t in d["terms"]]
    for side in ("basis_left", "basis_right"):
        if d[side] not in FAMILIES:
            raise SerializationError(f"unknown basis {d[side]!r}")
    return TensorElement.from_terms(int(d["n"]), d["basis_left"], d["basis_right"], terms)


# curvature measures -----------------------------------------------------------

def curvature_to_json(phi: CurvatureMeasure) -> dict:
    return {"n": phi.n, "terms": [{"label": l.kind, "k": l.k, "q": l.q, "coeff": scalar_to_json(c)}
                                  for l, c in phi.terms().items()]}


def curvature_from_json(d) -> CurvatureMeasure:
    n = int(d["n"])
    terms = {}
    for t in d["terms"]:
        kind = t["label"]
        if kind == "Vol":
            lab = Label("Vol", 2 * n, n)
        else:
            lab = Label(kind, int(t["k"]), int(t["q"]))
        terms[lab] = terms.get(lab, ZERO) + scalar_from_json(t["coeff"])
    return CurvatureMeasure.from_terms(n, terms)


def curved_to_json(cv: CurvedValuation, basis: str = "mu_lambda") -> dict:
    if basis == "mu_lambda":
        ctx = curved_context(cv.n, cv.lam)
        vec = ctx.mu_lambda_coords(cv.flat.coeffs)
        terms = [{"k": k, "idx": q, "coeff": scalar_to_json(c)} for (k, q), c in zip(ctx.labels, vec) if c]
    elif basis == "flat_mono":
        terms = valuation_to_json(cv.flat, "mono")["terms"]
    else:
        raise SerializationError(f"unknown curved basis {basis!r}")
    return {"n": cv.n, "lambda": fraction_to_json(cv.lam), "basis": basis, "terms": terms}


def curved_from_json(d) -> CurvedValuation:
    from .curved import from_mu_lambda
    n, lam = int(d["n"]), fraction_from_json(d["lambda"])
    coeffs = {}
    for t in d["terms"]:
        key = (int(t["k"]), int(t["idx"]))
        coeffs[key] = coeffs.get(key, ZERO) + scalar_from_json(t["coeff"])
    if d["basis"] == "mu_lambda":
        return from_mu_lambda(n, coeffs, lam)
    if d["basis"] == "flat_mono":
        return CurvedValuation(Valuation.from_coefficients(n, "mono", coeffs), lam)
    raise SerializationError(f"unknown curved basis {d['basis']!r}")


def curved_tensor_to_json(T: CurvedTensor) -> dict:
    return {"n": T.n, "lambda": fraction_to_json(T.lam), "basis_left": "mu_lambda", "basis_right": "mu_lambda",
            "terms": [{"left": list(l), "right": list(r), "coeff": scalar_to_json(c)} for l, r, c in T.terms()]}


def curved_tensor_from_json(d) -> CurvedTensor:
    n = int(d["n"])
    labels = {lab: i for i, lab in enumerate(algebra(n).labels("mu"))}
    M = [[ZERO] * len(labels) for _ in labels]
    for t in d["terms"]:
        i, j = labels[tuple(t["left"])], labels[tuple(t["right"])]
        M[i][j] = M[i][j] + scalar_from_json(t["coeff"])
    return CurvedTensor(n, fraction_from_json(d["lambda"]), M)


# free module --------------------------------------------------------------------

def freecm_to_json(x: FreeCM, basis: str = "mono") -> dict:
    return {"n": x.n, "l": valuation_to_json(x.ell, basis), "n_part": valuation_to_json(x.nu, basis)}


def freecm_from_json(d) -> FreeCM:
    return FreeCM(valuation_from_json(d["l"]), valuation_from_json(d["n_part"]))


def _unit_val(n, k, p):
    return Valuation.from_coefficients(n, "mono", {(k, p): 1})


def freecm_tensor_to_json(T: FreeCMTensor) -> dict:
    terms = []
    for a, l, b, r, c in T.terms():
        terms.append({"left": {"sym": a, "val": valuation_to_json(_unit_val(T.n, *l))},
                      "right": {"sym": b, "val": valuation_to_json(_unit_val(T.n, *r))},
                      "coeff": scalar_to_json(c)})
    return {"n": T.n, "terms": terms}


def freecm_tensor_from_json(d) -> FreeCMTensor:
    n = int(d["n"])
    out = FreeCMTensor(n)
    for t in d["terms"]:
        a, b = t["left"]["sym"], t["right"]["sym"]
        if a not in SYMBOLS or b not in SYMBOLS:
            raise SerializationError("free-module symbol must be 'l' or 'n'")
        x, y = valuation_from_json(t["left"]["val"]), valuation_from_json(t["right"]["val"])
        out = out + FreeCMTensor.outer(a, x, b, y, scalar_from_json(t["coeff"]))
    return out


def semilocal_to_json(T: SemiLocalTensor) -> dict:
    labels = algebra(T.n).mono_labels
    terms = []
    for a in SYMBOLS:
        for i, row in enumerate(T.blocks[a]):
            for j, c in enumerate(row):
                if c:
                    terms.append({"left": {"sym": a, "val": valuation_to_json(_unit_val(T.n, *labels[i]))},
                                  "right": valuation_to_json(_unit_val(T.n, *labels[j])),
                                  "coeff": scalar_to_json(c)})
    return {"n": T.n, "terms": terms}


def semilocal_from_json(d) -> SemiLocalTensor:
    n = int(d["n"])
    alg = algebra(n)
    blocks = {a: [[ZERO] * alg.dim for _ in range(alg.dim)] for a in SYMBOLS}
    for t in d["terms"]:
        x, y = valuation_from_json(t["left"]["val"]), valuation_from_json(t["right"])
        c = scalar_from_json(t["coeff"])
        M = blocks[t["left"]["sym"]]
        for i, xi in enumerate(x.coeffs):
            for j, yj in enumerate(y.coeffs):
                if xi and yj:
                    M[i][j] = M[i][j] + c * xi * yj
    return SemiLocalTensor(n, blocks)


# generic -------------------------------------------------------------------------

def matrix_to_json(M) -> list:
    return [[scalar_to_json(c) for c in row] for row in M]


def matrix_from_json(M) -> list:
    return [[scalar_from_json(c) for c in row] for row in M]


_ENCODERS = [
    (Scalar, scalar_to_json), (TSPoly, tspoly_to_json), (Valuation, valuation_to_json),
    (TensorElement, tensor_to_json), (CurvatureMeasure, curvature_to_json), (CurvedValuation, curved_to_json),
    (CurvedTensor, curved_tensor_to_json), (FreeCM, freecm_to_json), (FreeCMTensor, freecm_tensor_to_json),
    (SemiLocalTensor, semilocal_to_json),
]


def to_json(obj):
    for cls, enc in _ENCODERS:
        if isinstance(obj, cls):
            return enc(obj)
    if isinstance(obj, Fraction):
        return fraction_to_json(obj)
    raise SerializationError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=None) -> str:
    data = obj if isinstance(obj, (dict, list)) else to_json(obj)
    return json.dumps(data, indent=indent, ensure_ascii=False)


__all__ = [
    "SerializationError", "scalar_to_json", "scalar_from_json", "fraction_to_json", "fraction_from_json",
    "tspoly_to_json", "tspoly_from_json", "valuation_to_json", "valuation_from_json", "tensor_to_json",
    "tensor_from_json", "curvature_to_json", "curvature_from_json", "curved_to_json", "curved_from_json",
    "curved_tensor_to_json", "curved_tensor_from_json", "freecm_to_json", "freecm_from_json",
    "freecm_tensor_to_json", "freecm_tensor_from_json", "semilocal_to_json", "semilocal_from_json",
    "matrix_to_json", "matrix_from_json", "to_json", "dumps",
]
