"""Parser for command-line expressions.

Valuations are written with ``t``, ``s``, ``chi``, ``vol``, ``pi`` and the basis
constructors ``mu(k,q)``, ``tau(k,q)``, ``prim(k,r)``, ``U(k,p)``, ``mono(k,p)``;
curvature measures with ``B(k,q)``, ``Gamma(k,q)``, ``Delta(k,q)``, ``N(k,q)``
and ``Vol``.  Only arithmetic (``+ - * / **``) and integer literals are
accepted; parsing goes through :mod:`ast` and never evaluates code.
"""

from __future__ import annotations

import ast
from fractions import Fraction

from .curvature import CurvatureMeasure, delta, n_measure
from .polynomials import TSPoly
from .scalars import PI, Scalar, as_scalar
from .valuations import Valuation, algebra

_VAL_FUNCS = {"mu": "mu", "tau": "tau", "prim": "prim", "U": "u", "u": "u", "mono": "mono"}
_CM_FUNCS = ("B", "Gamma", "Delta", "N")


class ExpressionError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ExpressionError(f"not a rational number: {text!r}") from exc


class _Eval:
    def __init__(self, n: int):
        self.n = n

    def const(self, name):
        n = self.n
        if name == "pi":
            return PI
        if name == "t":
            return Valuation.from_poly(TSPoly.t(n))
        if name == "s":
            return Valuation.from_poly(TSPoly.s(n))
        if name == "chi":
            return Valuation.from_poly(TSPoly.const(n, 1))
        if name == "vol":
            return Valuation.basis_element(n, "mu", 2 * n, n)
        if name == "Vol":
            return CurvatureMeasure.label(n, "Vol", 2 * n, n)
        raise ExpressionError(f"unknown symbol {name!r}")

    def call(self, node):
        if not isinstance(node.func, ast.Name) or node.keywords or len(node.args) != 2:
            raise ExpressionError("basis constructors take exactly two integer arguments")
        args = []
        for a in node.args:
            v = self.visit(a)
            if not (isinstance(v, Scalar) and v.is_rational() and v.to_fraction().denominator == 1):
                raise ExpressionError("basis indices must be integers")
            args.append(int(v.to_fraction()))
        name = node.func.id
        if name in _VAL_FUNCS:
            return Valuation.basis_element(self.n, _VAL_FUNCS[name], *args)
        if name == "Delta":
            return delta(self.n, *args)
        if name == "N":
            return n_measure(self.n, *args)
        if name in ("B", "Gamma"):
            return CurvatureMeasure.label(self.n, name, *args)
        raise ExpressionError(f"unknown function {name!r}")

    def visit(self, node):
        if isinstance(node, ast.Expression):
            return self.visit(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise ExpressionError("only integer literals are allowed")
            return as_scalar(node.value)
        if isinstance(node, ast.Name):
            return self.const(node.id)
        if isinstance(node, ast.Call):
            return self.call(node)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self.visit(node.operand)
            return v if isinstance(node.op, ast.UAdd) else _scale(v, -1)
        if isinstance(node, ast.BinOp):
            a, b = self.visit(node.left), self.visit(node.right)
            if isinstance(node.op, ast.Add):
                return _add(a, b, self.n)
            if isinstance(node.op, ast.Sub):
                return _add(a, _scale(b, -1), self.n)
            if isinstance(node.op, ast.Mult):
                return _mul(a, b)
            if isinstance(node.op, ast.Div):
                if not isinstance(b, Scalar):
                    raise ExpressionError("can only divide by scalars")
                if not b:
                    raise ExpressionError("division by zero")
                return _scale(a, 1 / b) if not isinstance(a, Scalar) else a / b
            if isinstance(node.op, ast.Pow):
                if not (isinstance(b, Scalar) and b.is_rational() and b.to_fraction().denominator == 1):
                    raise ExpressionError("exponents must be integers")
                e = int(b.to_fraction())
                if isinstance(a, CurvatureMeasure):
                    raise ExpressionError("curvature measures cannot be raised to powers")
                if isinstance(a, Valuation) and e < 0:
                    raise ExpressionError("negative powers of valuations are undefined")
                return a ** e
        raise ExpressionError(f"unsupported syntax: {ast.dump(node)[:60]}")


def _scale(v, c):
    c = as_scalar(c)
    return v * c if isinstance(v, Scalar) else v.scale(c)


def _add(a, b, n):
    if isinstance(a, Scalar) and isinstance(b, Scalar):
        return a + b
    if isinstance(a, Scalar):
        a, b = b, a
    if isinstance(b, Scalar):
        if isinstance(a, CurvatureMeasure):
            raise ExpressionError("cannot add a scalar to a curvature measure")
        return a + Valuation.from_poly(TSPoly.const(n, b))
    if type(a) is not type(b):
        raise ExpressionError("cannot add a valuation and a curvature measure")
    return a + b


def _mul(a, b):
    if isinstance(a, Scalar) and isinstance(b, Scalar):
        return a * b
    if isinstance(a, Scalar):
        return _scale(b, a)
    if isinstance(b, Scalar):
        return _scale(a, b)
    if isinstance(a, Valuation) and isinstance(b, Valuation):
        return a * b
    raise ExpressionError("products involving curvature measures need the module action (not parsed)")


def parse(text: str, n: int):
    """Evaluate ``text`` to a Scalar, Valuation or CurvatureMeasure."""
    if n < 1:
        raise ExpressionError("n must be >= 1")
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from exc
    algebra(n)
    return _Eval(n).visit(tree)


def parse_valuation(text: str, n: int) -> Valuation:
    v = parse(text, n)
    if isinstance(v, Scalar):
        return Valuation.from_poly(TSPoly.const(n, v))
    if not isinstance(v, Valuation):
        raise ExpressionError("expected a valuation")
    return v


def parse_curvature(text: str, n: int) -> CurvatureMeasure:
    v = parse(text, n)
    if not isinstance(v, CurvatureMeasure):
        raise ExpressionError("expected a curvature measure (B, Gamma, Delta, N, Vol)")
    return v


__all__ = ["parse", "parse_valuation", "parse_curvature", "parse_rational", "ExpressionError"]
