"""Deterministic LaTeX output.

Terms always appear in the canonical order used by the JSON encoder, so the
output of equal objects is byte-identical and can be snapshot-tested.
"""

from __future__ import annotations

from fractions import Fraction

from .curvature import CurvatureMeasure
from .curved import CurvedTensor, CurvedValuation, curved_context
from .local import SYMBOLS, FreeCMTensor, SemiLocalTensor
from .polynomials import TSPoly
from .scalars import Scalar
from .valuations import TensorElement, Valuation, algebra

_FAMILY_SYMBOL = {"mono": None, "u": "U", "mu": r"\mu", "tau": r"\tau", "prim": r"\pi"}


def _pi_power(e: int) -> str:
    if e == 0:
        return ""
    return r"\pi" if e == 1 else rf"\pi^{{{e}}}"


def _poly(coeffs, shift=0) -> str:
    """Polynomial in pi with rational coefficients, highest power first."""
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        e = i + shift
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = _pi_power(e)
        if a.denominator != 1:
            body = rf"\frac{{{a.numerator}}}{{{a.denominator}}}" + mono
        elif a == 1 and mono:
            body = mono
        else:
            body = str(a.numerator) + mono
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def scalar(x: Scalar) -> str:
    if not x:
        return "0"
    if len(x.den) == 1:
        if x.is_monomial():
            c = x.num[0]
            sign = "-" if c < 0 else ""
            c = abs(c)
            num = (str(c.numerator) if c.numerator != 1 or x.shift <= 0 else "") + _pi_power(max(x.shift, 0))
            den = (str(c.denominator) if c.denominator != 1 or x.shift >= 0 else "") + _pi_power(max(-x.shift, 0))
            if not num:
                num = "1"
            if den in ("", "1"):
                return sign + num
            return sign + rf"\frac{{{num}}}{{{den}}}"
        if x.shift >= 0:
            return _poly(x.num, x.shift)
        return rf"\frac{{{_poly(x.num)}}}{{{_pi_power(-x.shift)}}}"
    num = _poly(x.num, max(x.shift, 0))
    den = _poly(x.den, 0)
    if x.shift < 0:
        den = rf"{_pi_power(-x.shift)}\left({den}\right)"
    return rf"\frac{{{num}}}{{{den}}}"


def _term(c: Scalar, sym: str, first: bool) -> str:
    """One summand ``c * sym`` including its joining sign."""
    s = scalar(c)
    simple = len(c.den) == 1 and c.is_monomial()
    neg = simple and s.startswith("-")
    if neg:
        s = s[1:]
    if sym:
        if not simple:
            s = rf"\left({s}\right)"
        body = sym if s == "1" else rf"{s}\,{sym}"
    else:
        body = s
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


def _sum(terms) -> str:
    """terms: list of (Scalar, symbol string)."""
    if not terms:
        return "0"
    return "".join(_term(c, sym, i == 0) for i, (c, sym) in enumerate(terms))


def monomial(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("t" if a == 1 else f"t^{{{a}}}")
    if b:
        parts.append("s" if b == 1 else f"s^{{{b}}}")
    return " ".join(parts)


def basis_symbol(family: str, k: int, i: int) -> str:
    if family == "mono":
        return monomial(k - 2 * i, i) or r"\chi"
    return rf"{_FAMILY_SYMBOL[family]}_{{{k},{i}}}"


def tspoly(p: TSPoly) -> str:
    return _sum([(c, monomial(a, b)) for (a, b), c in p.sorted_terms()])


def valuation(v: Valuation, basis: str = "mono") -> str:
    return _sum([(c, basis_symbol(basis, k, i)) for (k, i), c in sorted(v.coordinates(basis).items())])


def _align(lines, lhs) -> str:
    body = [rf"{lhs} &= {lines[0]}"] + [rf"&\quad {ln}" for ln in lines[1:]]
    return "\\begin{align*}\n" + " \\\\\n".join(body) + "\n\\end{align*}"


def _tensor_lines(terms) -> list:
    return [_term(c, sym, i == 0).strip() for i, (c, sym) in enumerate(terms)] or ["0"]


def tensor(T: TensorElement, lhs: str = "k") -> str:
    terms = [(c, basis_symbol(T.left, *l) + r" \otimes " + basis_symbol(T.right, *r)) for l, r, c in T.terms()]
    return _align(_tensor_lines(terms), lhs)


def curved_valuation(cv: CurvedValuation) -> str:
    ctx = curved_context(cv.n, cv.lam)
    vec = ctx.mu_lambda_coords(cv.flat.coeffs)
    return _sum([(c, rf"\mu^{{\lambda}}_{{{k},{q}}}") for (k, q), c in zip(ctx.labels, vec) if c])


def curved_tensor(T: CurvedTensor, lhs: str = r"k_{\lambda}") -> str:
    terms = [(c, rf"\mu^{{\lambda}}_{{{l[0]},{l[1]}}} \otimes \mu^{{\lambda}}_{{{r[0]},{r[1]}}}") for l, r, c in T.terms()]
    lam = Fraction(T.lam)
    return _align(_tensor_lines(terms), lhs) + f"\n% lambda = {lam}"


def curvature(phi: CurvatureMeasure) -> str:
    def sym(l):
        if l.kind == "Vol":
            return r"\mathrm{Vol}"
        return (r"B" if l.kind == "B" else r"\Gamma") + f"_{{{l.k},{l.q}}}"
    return _sum([(c, sym(l)) for l, c in phi.terms().items()])


def _free_sym(a, k, p):
    return (r"\mathfrak{l}" if a == "l" else r"\mathfrak{n}") + rf"\left({basis_symbol('mono', k, p)}\right)"


def free_tensor(T: FreeCMTensor, lhs: str = "K") -> str:
    terms = [(c, _free_sym(a, *l) + r" \otimes " + _free_sym(b, *r)) for a, l, b, r, c in T.terms()]
    return _align(_tensor_lines(terms), lhs)


def semilocal_tensor(T: SemiLocalTensor, lhs: str = r"\bar k") -> str:
    labels = algebra(T.n).mono_labels
    terms = []
    for a in SYMBOLS:
        for i, row in enumerate(T.blocks[a]):
            for j, c in enumerate(row):
                if c:
                    terms.append((c, _free_sym(a, *labels[i]) + r" \otimes " + basis_symbol("mono", *labels[j])))
    return _align(_tensor_lines(terms), lhs)


def matrix(M, row_labels=None, col_labels=None) -> str:
    ncols = len(M[0]) if M else 0
    spec = ("l|" if row_labels else "") + "c" * ncols
    lines = ["\\begin{tabular}{" + spec + "}"]
    if col_labels:
        lines.append(" & ".join(([""] if row_labels else []) + [f"${c}$" for c in col_labels]) + r" \\ \hline")
    for i, row in enumerate(M):
        cells = [f"${scalar(c)}$" for c in row]
        if row_labels:
            cells = [f"${row_labels[i]}$"] + cells
        lines.append(" & ".join(cells) + r" \\")
    lines.append("\\end{tabular}")
    return "\n".join(lines)


def table(header, rows) -> str:
    lines = ["\\begin{tabular}{" + "c" * len(header) + "}", " & ".join(header) + r" \\ \hline"]
    lines += [" & ".join(str(x) for x in r) + r" \\" for r in rows]
    lines.append("\\end{tabular}")
    return "\n".join(lines)


_TEXT_ESCAPES = {"\\": r"\textbackslash{}", "&": r"\&", "%": r"\%", "$": r"\$", "#": r"\#",
                 "_": r"\_", "{": r"\{", "}": r"\}", "~": r"\textasciitilde{}", "^": r"\textasciicircum{}"}


def escape_text(text: str) -> str:
    """Escape LaTeX special characters in plain text cells."""
    return "".join(_TEXT_ESCAPES.get(ch, ch) for ch in text)


def equation(lhs: str, rhs: str) -> str:
    return "\\begin{align*}\n" + f"{lhs} &= {rhs}" + "\n\\end{align*}"


__all__ = ["scalar", "tspoly", "valuation", "tensor", "curved_valuation", "curved_tensor", "curvature",
           "free_tensor", "semilocal_tensor", "matrix", "table", "equation", "escape_text", "basis_symbol", "monomial"]
