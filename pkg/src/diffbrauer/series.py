"""Truncated Laurent series over F_q and differential forms f dt.

A :class:`LaurentSeries` stores the coefficients of t^lo, ..., t^(hi-1) and a
precision ``prec``: every coefficient below ``lo`` is zero, every coefficient
at an exponent >= ``prec`` is unknown.  ``prec=None`` marks an exact Laurent
polynomial.  Reading an unknown coefficient raises :class:`PrecisionLoss`;
nothing is ever silently padded with zeros.

Arithmetic propagates precision pessimistically.  For a product the result is
known modulo t^min(prec_a + val_b, prec_b + val_a); p-th powers scale the
precision by p because (a + O(t^N))^p = a^p + O(t^(pN)) in characteristic p.
"""
from __future__ import annotations

import numpy as np

from . import _kernels
from .ff import FieldMismatch, FieldSpec, FqElem, embed_arrays, format_elem
from .ff import sqrt as ff_sqrt
from .poly import Poly, RationalFunction

DEFAULT_PREC = 64


class PrecisionLoss(ArithmeticError):
    """A coefficient outside the certified window was requested."""


class NotExact(ArithmeticError):
    """Antiderivative requested for a form with a t^(-1 mod p) term."""

    def __init__(self, exponent: int):
        super().__init__(f"form is not exact: nonzero coefficient at t^{exponent}")
        self.exponent = exponent


def _pmin(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _padd(a, b):
    return None if a is None or b is None else a + b


class LaurentSeries:
    """Immutable truncated Laurent series sum_{e >= lo} a_e t^e + O(t^prec)."""

    __slots__ = ("field", "lo", "c", "prec")

    def __init__(self, field: FieldSpec, lo: int, coeffs, prec: int | None = None):
        arr = np.asarray(coeffs, dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((0, field.k), dtype=np.int64)
        elif arr.ndim == 1:
            arr = arr.reshape(-1, field.k)
        arr = arr % field.p
        lo = int(lo)
        if prec is not None:
            prec = int(prec)
            keep = max(0, min(arr.shape[0], prec - lo))
            arr = arr[:keep]
        nz = np.nonzero(arr.any(axis=1))[0]
        if nz.size == 0:
            arr = arr[:0]
            lo = prec if prec is not None else 0
        else:
            arr = arr[nz[0]: nz[-1] + 1]
            lo += int(nz[0])
        arr.setflags(write=False)
        self.field, self.lo, self.c, self.prec = field, lo, arr, prec

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, field: FieldSpec, prec: int | None = None) -> LaurentSeries:
        return cls(field, 0, [], prec)

    @classmethod
    def one(cls, field: FieldSpec, prec: int | None = None) -> LaurentSeries:
        return cls.monomial(field, 0, 1, prec)

    @classmethod
    def monomial(cls, field: FieldSpec, e: int, c=1, prec: int | None = None) -> LaurentSeries:
        return cls(field, e, [field.elem(c).rep], prec)

    @classmethod
    def t(cls, field: FieldSpec, prec: int | None = None) -> LaurentSeries:
        return cls.monomial(field, 1, 1, prec)

    @classmethod
    def from_elems(cls, field: FieldSpec, lo: int, elems, prec: int | None = None) -> LaurentSeries:
        rows = [field.elem(e).rep for e in elems]
        return cls(field, lo, np.array(rows, dtype=np.int64).reshape(len(rows), field.k), prec)

    @classmethod
    def from_poly(cls, f: Poly, prec: int | None = None) -> LaurentSeries:
        return cls(f.field, 0, f.c, prec)

    @classmethod
    def from_dict(cls, field: FieldSpec, terms: dict, prec: int | None = None) -> LaurentSeries:
        if not terms:
            return cls.zero(field, prec)
        lo, hi = min(terms), max(terms) + 1
        arr = np.zeros((hi - lo, field.k), dtype=np.int64)
        for e, c in terms.items():
            arr[e - lo] = field.elem(c).rep
        return cls(field, lo, arr, prec)

    def _like(self, lo, coeffs, prec):
        return LaurentSeries(self.field, lo, coeffs, prec)

    # queries ----------------------------------------------------------------
    @property
    def hi(self) -> int:
        return self.lo + self.c.shape[0]

    @property
    def exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return self.c.shape[0] == 0

    def valuation(self):
        """Exponent of the first nonzero coefficient; ``prec`` (or None) if zero."""
        if self.is_zero():
            return self.prec
        return self.lo

    def coeff(self, e: int) -> FqElem:
        if self.prec is not None and e >= self.prec:
            raise PrecisionLoss(f"coefficient of t^{e} unknown (series known mod t^{self.prec})")
        if self.lo <= e < self.hi:
            return FqElem(self.field, self.c[e - self.lo])
        return self.field.zero()

    def __getitem__(self, e: int) -> FqElem:
        return self.coeff(e)

    def window(self, start: int, stop: int) -> np.ndarray:
        """Coefficient rows for exponents start..stop-1."""
        if self.prec is not None and stop > self.prec:
            raise PrecisionLoss(f"window up to t^{stop} exceeds precision {self.prec}")
        out = np.zeros((max(stop - start, 0), self.field.k), dtype=np.int64)
        a, b = max(start, self.lo), min(stop, self.hi)
        if a < b:
            out[a - start: b - start] = self.c[a - self.lo: b - self.lo]
        return out

    def terms(self) -> dict:
        return {self.lo + i: FqElem(self.field, row) for i, row in enumerate(self.c) if row.any()}

    def leading(self) -> FqElem:
        if self.is_zero():
            raise PrecisionLoss("series is zero to its precision; no leading term")
        return FqElem(self.field, self.c[0])

    # precision ----------------------------------------------------------------
    def truncate(self, prec: int | None) -> LaurentSeries:
        return self._like(self.lo, self.c, _pmin(self.prec, prec))

    def with_prec(self, prec: int | None) -> LaurentSeries:
        """Declare coefficients beyond the stored ones zero up to ``prec``.

        Only valid for values we construct ourselves (a chosen representative),
        never for data that came in truncated.
        """
        return self._like(self.lo, self.c, prec)

    # arithmetic ------------------------------------------------------------
    def _check(self, other):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def _lift(self, other):
        if isinstance(other, LaurentSeries):
            self._check(other)
            return other
        if isinstance(other, (int, np.integer, FqElem)):
            return LaurentSeries.monomial(self.field, 0, other)
        if isinstance(other, Poly):
            return LaurentSeries.from_poly(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        prec = _pmin(self.prec, o.prec)
        if self.is_zero() and o.is_zero():
            return LaurentSeries.zero(self.field, prec)
        parts = [s for s in (self, o) if not s.is_zero()]
        lo = min(s.lo for s in parts)
        hi = max(s.hi for s in parts)
        out = np.zeros((hi - lo, self.field.k), dtype=np.int64)
        for s in parts:
            out[s.lo - lo: s.hi - lo] += s.c
        return self._like(lo, out, prec)

    __radd__ = __add__

    def __neg__(self):
        return self._like(self.lo, -self.c, self.prec)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def scale(self, c) -> LaurentSeries:
        c = self.field.elem(c)
        if self.field.k == 1:
            return self._like(self.lo, self.c * c.rep[0], self.prec)
        return self._like(self.lo, self.field.scale_arrays(c, self.c), self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer, FqElem)):
            return self.scale(other)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        va, vb = self.valuation(), o.valuation()
        if (self.is_zero() and self.exact) or (o.is_zero() and o.exact):
            return LaurentSeries.zero(self.field)
        prec = _pmin(_padd(self.prec, vb), _padd(o.prec, va))
        if self.is_zero() or o.is_zero():
            return LaurentSeries.zero(self.field, prec)
        lo = self.lo + o.lo
        rows = None if prec is None else max(prec - lo, 0)
        wide = _kernels.conv2d(self.c, o.c, rows)
        return self._like(lo, self.field.reduce(wide), prec)

    __rmul__ = __mul__

    def shift(self, j: int) -> LaurentSeries:
        """Multiply by t^j."""
        return self._like(self.lo + j, self.c, _padd(self.prec, j))

    def inverse(self, prec: int | None = None) -> LaurentSeries:
        """1/f.  For exact input the absolute precision ``prec`` must be given."""
        if self.is_zero():
            raise ZeroDivisionError("series is zero to its precision")
        v = self.lo
        if self.c.shape[0] == 1:
            inv = FqElem(self.field, self.c[0]).inverse()
            out = LaurentSeries.monomial(self.field, -v, inv)
            if self.prec is None:
                return out if prec is None else out.truncate(prec)
            return out.truncate(_pmin(self.prec - 2 * v, prec))
        if self.prec is None:
            if prec is None:
                raise PrecisionLoss("inverse of a non-monomial exact series needs a precision")
            target = prec
        else:
            target = _pmin(self.prec - 2 * v, prec)
        rel = target + v
        if rel <= 0:
            return LaurentSeries.zero(self.field, target)
        unit = self.c
        field = self.field
        cur = np.array([FqElem(field, unit[0]).inverse().rep], dtype=np.int64)
        n = 1
        while n < rel:
            n = min(2 * n, rel)
            u = unit[:n]
            prod = field.reduce(_kernels.conv2d(u, cur, n))
            prod = (-prod) % field.p
            prod[0] = (prod[0] + field.one().as_array() * 2) % field.p
            cur = field.reduce(_kernels.conv2d(cur, prod, n))
        return self._like(-v, cur[:rel], target)

    def __truediv__(self, other):
        if isinstance(other, (int, np.integer, FqElem)):
            return self.scale(self.field.elem(other).inverse())
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o.exact and o.c.shape[0] > 1:
            if self.exact:
                raise PrecisionLoss("exact division by a non-monomial needs divide(..., prec)")
            # enough terms of 1/o that the product keeps self's precision
            need = self.prec - self.lo if not self.is_zero() else 0
            return self * o.inverse(need - o.lo)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def divide(self, other: LaurentSeries, prec: int) -> LaurentSeries:
        """self/other known to absolute precision ``prec`` (for exact operands)."""
        o = self._lift(other)
        if self.is_zero():
            return LaurentSeries.zero(self.field, prec)
        inv = o.inverse(prec - self.lo)
        return (self * inv).truncate(prec)

    def frobenius(self, times: int = 1) -> LaurentSeries:
        """f^(p^times), computed coefficientwise."""
        out = self
        p = self.field.p
        for _ in range(times):
            if out.is_zero():
                out = LaurentSeries.zero(self.field, None if out.prec is None else out.prec * p)
                continue
            n = out.c.shape[0]
            arr = np.zeros(((n - 1) * p + 1, self.field.k), dtype=np.int64)
            arr[::p] = self.field.frob_arrays(out.c)
            out = self._like(out.lo * p, arr, None if out.prec is None else out.prec * p)
        return out

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        p = self.field.p
        j = 0
        while e and e % p == 0:
            e //= p
            j += 1
        result = None
        base = self.frobenius(j) if j else self
        if e == 0:
            return LaurentSeries.one(self.field)
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def map_coeffs(self, matrix: np.ndarray) -> LaurentSeries:
        return self._like(self.lo, (self.c @ matrix) % self.field.p, self.prec)

    def change_field(self, target: FieldSpec) -> LaurentSeries:
        return LaurentSeries(target, self.lo, embed_arrays(self.c, self.field, target), self.prec)

    def derivative(self) -> LaurentSeries:
        if self.is_zero():
            return LaurentSeries.zero(self.field, None if self.prec is None else self.prec - 1)
        exps = np.arange(self.lo, self.hi, dtype=np.int64).reshape(-1, 1) % self.field.p
        return self._like(self.lo - 1, self.c * exps, None if self.prec is None else self.prec - 1)

    def compose_poly(self, f: Poly) -> LaurentSeries:
        """f(self) for a polynomial f over the same field."""
        acc = LaurentSeries.zero(self.field)
        for row in f.c[::-1]:
            acc = acc * self + FqElem(self.field, row)
        return acc

    def sqrt(self) -> LaurentSeries:
        """A square root (p odd); raises ValueError when none exists."""
        if self.field.p == 2:
            raise ValueError("series square roots need odd characteristic")
        if self.is_zero():
            return LaurentSeries.zero(self.field, None if self.prec is None else self.prec // 2)
        v = self.lo
        if v % 2:
            raise ValueError("odd valuation has no square root")
        y0 = ff_sqrt(self.leading())
        if y0 is None:
            raise ValueError("leading coefficient is not a square")
        if self.prec is None:
            raise PrecisionLoss("square root of an exact series needs a precision")
        rel = self.prec - v
        u = [FqElem(self.field, r) for r in self.window(v, self.prec)]
        ys = [y0]
        inv2y0 = (y0 * 2).inverse()
        for n in range(1, rel):
            acc = u[n]
            for j in range(1, n):
                acc = acc - ys[j] * ys[n - j]
            ys.append(acc * inv2y0)
        return LaurentSeries.from_elems(self.field, v // 2, ys, v // 2 + rel)

    # comparison --------------------------------------------------------------
    def agrees_with(self, other, upto: int | None = None) -> bool:
        """Equality on the common window (optionally cut at ``upto``)."""
        o = self._lift(other)
        prec = _pmin(_pmin(self.prec, o.prec), upto)
        diff = (self - o).truncate(prec)
        return diff.is_zero()

    def __eq__(self, other):
        if not isinstance(other, (LaurentSeries, int, np.integer, FqElem, Poly)):
            return NotImplemented
        try:
            return self.agrees_with(other)
        except FieldMismatch:
            return False

    __hash__ = None

    def __repr__(self):
        return f"LaurentSeries({self})"

    def __str__(self):
        return format_series(self)


def format_series(f: LaurentSeries, var: str = "t") -> str:
    terms = []
    for e, c in f.terms().items():
        cs = format_elem(c)
        if "+" in cs:
            cs = f"({cs})"
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if not mono:
            terms.append(cs)
        elif cs == "1":
            terms.append(mono)
        else:
            terms.append(f"{cs}*{mono}")
    if f.prec is not None:
        terms.append(f"O({var}^{f.prec})")
    return " + ".join(terms) if terms else "0"


class DiffForm:
    """The differential form ``coeff * dt`` over series or rational functions."""

    __slots__ = ("coeff",)

    def __init__(self, coeff):
        if isinstance(coeff, Poly):
            coeff = RationalFunction(coeff)
        if not isinstance(coeff, (LaurentSeries, RationalFunction)):
            raise TypeError(f"unsupported form coefficient {type(coeff).__name__}")
        self.coeff = coeff

    @property
    def field(self) -> FieldSpec:
        return self.coeff.field

    @property
    def kind(self) -> str:
        return "series" if isinstance(self.coeff, LaurentSeries) else "rational"

    @property
    def prec(self):
        return self.coeff.prec if isinstance(self.coeff, LaurentSeries) else None

    def _other(self, other):
        if isinstance(other, DiffForm):
            return other.coeff
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else DiffForm(self.coeff + o)

    def __sub__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else DiffForm(self.coeff - o)

    def __neg__(self):
        return DiffForm(-self.coeff)

    def __mul__(self, scalar):
        if isinstance(scalar, DiffForm):
            return NotImplemented
        return DiffForm(self.coeff * scalar)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.coeff.is_zero()

    def __eq__(self, other):
        if isinstance(other, DiffForm):
            return self.coeff == other.coeff
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def truncate(self, prec) -> DiffForm:
        return DiffForm(self.coeff.truncate(prec))

    def __repr__(self):
        return f"DiffForm({self})"

    def __str__(self):
        return f"({self.coeff}) dt"


def d(f) -> DiffForm:
    """The exact form df = f' dt."""
    return DiffForm(derivative(f))


def dlog(u) -> DiffForm:
    """du/u for a unit series or nonzero rational function."""
    if isinstance(u, LaurentSeries):
        du = u.derivative()
        return DiffForm(du * u.inverse())
    if isinstance(u, Poly):
        u = RationalFunction(u)
    return DiffForm(u.derivative() / u)


def derivative(f):
    """df/dt for series, polynomials and rational functions."""
    if isinstance(f, (LaurentSeries, Poly, RationalFunction)):
        return f.derivative()
    raise TypeError(f"cannot differentiate {type(f).__name__}")


def p_power_decompose(f: LaurentSeries) -> list:
    """Return [g_0, ..., g_{p-1}] with f = sum_i g_i^p t^i on f's window.

    g_i collects the exponents e = p*j + i; its coefficient at t^j is the
    p-th root of f's coefficient at t^e, and g_i is known modulo
    t^ceil((prec - i)/p).
    """
    field = f.field
    p = field.p
    out = []
    for i in range(p):
        prec = None if f.prec is None else -((i - f.prec) // p)
        if f.is_zero():
            out.append(LaurentSeries.zero(field, prec))
            continue
        first = f.lo + ((i - f.lo) % p)
        rows = f.c[first - f.lo:: p]
        j0 = (first - i) // p
        out.append(LaurentSeries(field, j0, field.root_arrays(rows), prec))
    return out


def recompose(parts: list) -> LaurentSeries:
    """Inverse of :func:`p_power_decompose`."""
    total = None
    for i, g in enumerate(parts):
        term = g.frobenius().shift(i)
        total = term if total is None else total + term
    return total


def residue(form) -> FqElem:
    """Coefficient of t^-1 of a series form."""
    coeff = form.coeff if isinstance(form, DiffForm) else form
    if not isinstance(coeff, LaurentSeries):
        raise TypeError("residue() takes a series form; use adelic.residue_at for rational forms")
    if coeff.prec is not None and coeff.prec <= -1:
        raise PrecisionLoss(f"residue needs t^-1 but series is known mod t^{coeff.prec}")
    return coeff.coeff(-1)


def integrate(f) -> LaurentSeries:
    """Antiderivative g with g' = f and zero constant term."""
    if isinstance(f, DiffForm):
        f = f.coeff
    p = f.field.p
    if f.is_zero():
        return LaurentSeries.zero(f.field, None if f.prec is None else f.prec + 1)
    exps = np.arange(f.lo, f.hi, dtype=np.int64)
    bad = np.nonzero(((exps + 1) % p == 0) & f.c.any(axis=1))[0]
    if bad.size:
        raise NotExact(int(exps[bad[0]]))
    inv = np.array([pow(int(e + 1) % p, -1, p) if (e + 1) % p else 0 for e in exps],
                   dtype=np.int64).reshape(-1, 1)
    return LaurentSeries(f.field, f.lo + 1, f.c * inv, None if f.prec is None else f.prec + 1)


def expand_at(r, center: FqElem | None, prec: int) -> LaurentSeries:
    """Laurent expansion of a rational function, known modulo s^prec.

    ``center`` is a point theta (possibly in an extension of the base field)
    giving the uniformizer s = t - theta; ``None`` expands at infinity in
    s = 1/t.
    """
    if isinstance(r, Poly):
        r = RationalFunction(r)
    if center is None:
        num, den = r.num, r.den
        n = max(num.deg, den.deg, 0)
        ns = LaurentSeries.from_poly(num.reverse(n)) if not num.is_zero() else None
        ds = LaurentSeries.from_poly(den.reverse(n))
        if ns is None:
            return LaurentSeries.zero(r.field, prec)
        return ns.divide(ds, prec)
    num = r.num.taylor_shift(center)
    den = r.den.taylor_shift(center)
    if num.is_zero():
        return LaurentSeries.zero(center.spec, prec)
    return LaurentSeries.from_poly(num).divide(LaurentSeries.from_poly(den), prec)
