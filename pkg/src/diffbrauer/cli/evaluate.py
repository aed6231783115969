"""Evaluate parsed expressions in a scalar domain.

A value is either a scalar of the domain or a 1-form, a dict mapping a
basic differential name to its coefficient.
"""
from __future__ import annotations

from ..ff import FieldSpec, FqElem, embed
from ..poly import RationalFunction
from ..series import LaurentSeries, PrecisionLoss
from .parser import BinOp, Call, Diff, Name, Neg, Num, Pow, Prec, parse


class InputError(ValueError):
    """Well-formed expression that does not make sense in the chosen domain."""


class Form(dict):
    """{differential name: coefficient}"""


class SeriesDomain:
    """Laurent series in one uniformizer over ``field``.

    ``names`` maps extra identifiers (``theta``, the global ``t`` at a local
    place) to series values.
    """

    def __init__(self, field: FieldSpec, var: str = "t", prec: int | None = 64, names=None,
                 gen_field: FieldSpec | None = None):
        self.field, self.var, self.prec = field, var, prec
        self.names = dict(names or {})
        self.gen_field = gen_field or field

    @property
    def basic(self):
        return (self.var,)

    def const(self, c):
        return LaurentSeries.monomial(self.field, 0, c)

    def name(self, n: str):
        if n == self.var:
            return LaurentSeries.t(self.field)
        if n in self.names:
            return self.names[n]
        if n == self.gen_field.var:
            return self.const(embed(self.gen_field.gen(), self.field))
        raise InputError(f"unknown name {n!r} (series variable is {self.var!r})")

    def precision(self, var: str, n: int):
        if var != self.var:
            raise InputError(f"O({var}^..) but the series variable is {self.var!r}")
        return LaurentSeries.zero(self.field, n)

    def div(self, a, b):
        if b.is_zero():
            raise ZeroDivisionError("division by zero series")
        if b.exact and b.c.shape[0] > 1:
            if a.exact:
                if self.prec is None:
                    raise PrecisionLoss("division by a non-monomial needs --prec")
                return a.divide(b, self.prec)
        return a / b

    def power(self, a, e: int):
        if e < 0 and a.exact and a.c.shape[0] > 1:
            if self.prec is None:
                raise PrecisionLoss("negative power of a non-monomial needs --prec")
            return self.div(self.const(1), a) ** (-e)
        return a ** e

    def d(self, f) -> Form:
        return Form({self.var: f.derivative()})

    def finish(self, value):
        if self.prec is None:
            return value
        if isinstance(value, Form):
            return Form({k: v.truncate(self.prec) for k, v in value.items()})
        return value.truncate(self.prec)


class RationalDomain:
    def __init__(self, field: FieldSpec):
        self.field = field

    basic = ("t",)

    def const(self, c):
        return RationalFunction.const(self.field, c)

    def name(self, n: str):
        if n == "t":
            return RationalFunction.t(self.field)
        if n == self.field.var:
            return self.const(self.field.gen())
        raise InputError(f"unknown name {n!r} in a rational function of t")

    def precision(self, var, n):
        raise InputError("precision markers are not allowed in exact rational input")

    def div(self, a, b):
        return a / b

    def power(self, a, e):
        return a ** e

    def d(self, f) -> Form:
        return Form({"t": f.derivative()})

    def finish(self, value):
        return value


class MPolyDomain:
    """Polynomials in patch coordinates with coefficients in F_q(t)."""

    def __init__(self, field: FieldSpec, coords):
        from ..bm import MPoly

        self.field, self.coords = field, tuple(coords)
        self.MPoly = MPoly

    @property
    def basic(self):
        return self.coords + ("t",)

    def const(self, c):
        return self.MPoly.const(self.field, len(self.coords), c)

    def name(self, n: str):
        if n in self.coords:
            return self.MPoly.var(self.field, len(self.coords), self.coords.index(n))
        if n == "t":
            return self.MPoly.t(self.field, len(self.coords))
        if n == self.field.var:
            return self.const(self.field.gen())
        raise InputError(f"unknown name {n!r}; coordinates are {', '.join(self.coords)}")

    def precision(self, var, n):
        raise InputError("precision markers are not allowed in patch expressions")

    def div(self, a, b):
        zero = (0,) * len(self.coords)
        if set(b.terms) != {zero}:
            raise InputError("only division by functions of t is supported on patches")
        return a * self.const(b.terms[zero].inverse())

    def power(self, a, e):
        if e < 0:
            return self.div(self.const(1), a ** (-e))
        return a ** e

    def d(self, f) -> Form:
        out = Form()
        for i, c in enumerate(self.coords):
            g = f.diff(i)
            if not g.is_zero():
                out[c] = g
        g = f.diff_t()
        if not g.is_zero():
            out["t"] = g
        return out

    def finish(self, value):
        return value


def _is_form(v):
    return isinstance(v, Form)


def _add(dom, a, b, sign=1):
    if _is_form(a) != _is_form(b):
        form, other = (a, b) if _is_form(a) else (b, a)
        if not _zero_scalar(other):
            raise InputError("cannot add a function and a 1-form")
        if other.prec is None or not form:
            return form
        # an O(t^n) term next to a form bounds the precision of its coefficient
        if len(form) != 1:
            raise InputError("O(...) next to a form with several differentials")
        (k, v), = form.items()
        return Form({k: v + other})
    if _is_form(a) or _is_form(b):
        out = Form(a)
        for k, v in b.items():
            v = v if sign == 1 else -v
            out[k] = out[k] + v if k in out else v
        return out
    return a + b if sign == 1 else a - b


def _zero_scalar(v):
    try:
        return v.is_zero()
    except AttributeError:
        return False


def _mul(dom, a, b):
    if _is_form(a) and _is_form(b):
        raise InputError("product of two 1-forms is not a 1-form")
    if _is_form(a):
        a, b = b, a
    if _is_form(b):
        return Form({k: a * v for k, v in b.items()})
    return a * b


def _div(dom, a, b):
    if _is_form(b):
        raise InputError("division by a 1-form")
    if _is_form(a):
        return Form({k: dom.div(v, b) for k, v in a.items()})
    return dom.div(a, b)


def evaluate(node, dom):
    if isinstance(node, Num):
        return dom.const(node.value)
    if isinstance(node, Name):
        return dom.name(node.name)
    if isinstance(node, Prec):
        return dom.precision(node.var, node.n)
    if isinstance(node, Diff):
        if node.var in dom.basic:
            return Form({node.var: dom.const(1)})
        return dom.d(dom.name(node.var))
    if isinstance(node, Neg):
        v = evaluate(node.arg, dom)
        return Form({k: -c for k, c in v.items()}) if _is_form(v) else -v
    if isinstance(node, Pow):
        v = evaluate(node.base, dom)
        if _is_form(v):
            raise InputError("power of a 1-form")
        return dom.power(v, node.exp)
    if isinstance(node, Call):
        v = evaluate(node.arg, dom)
        if _is_form(v):
            raise InputError(f"{node.fn}() of a 1-form")
        if node.fn == "d":
            return dom.d(v)
        return _div(dom, dom.d(v), v)
    if isinstance(node, BinOp):
        a, b = evaluate(node.left, dom), evaluate(node.right, dom)
        if node.op == "+":
            return _add(dom, a, b)
        if node.op == "-":
            return _add(dom, a, b, -1)
        if node.op == "*":
            return _mul(dom, a, b)
        return _div(dom, a, b)
    raise TypeError(f"unknown node {node!r}")


def eval_text(text: str, dom):
    variables = set(dom.basic) | {"t", "s", "u"} | set(getattr(dom, "names", {}))
    return dom.finish(evaluate(parse(text, variables), dom))


def as_scalar(value, what="value"):
    if _is_form(value):
        raise InputError(f"{what} must be a function, got a 1-form")
    return value


def as_form(value, var: str, what="form"):
    """Coefficient of d<var> of a one-variable form."""
    if not _is_form(value):
        if _zero_scalar(value) and getattr(value, "prec", None) is None:
            return value
        raise InputError(f"{what} must be a 1-form like 'f d{var}'")
    extra = set(value) - {var}
    if extra:
        raise InputError(f"{what} uses differentials {sorted(extra)}; only d{var} is allowed")
    return value.get(var)


def fq_const(value, field) -> FqElem:
    """A scalar expression that evaluates to a field constant."""
    if isinstance(value, LaurentSeries):
        if value.is_zero():
            return field.zero()
        if value.lo == 0 and value.c.shape[0] == 1:
            return value.leading()
    if isinstance(value, RationalFunction) and value.num.deg <= 0 and value.den.deg == 0:
        return value.num[0] if not value.is_zero() else field.zero()
    raise InputError("expected a field constant")
