"""Dense univariate polynomials and rational functions over F_q.

Coefficients live in an ``(n, k)`` integer array (see :mod:`._kernels`).
Besides ring arithmetic this module factors polynomials (square-free,
distinct-degree, then Cantor-Zassenhaus equal-degree splitting), which is what
the place machinery of :mod:`.adelic` and the tower embeddings of :mod:`.ff`
are built on.
"""
from __future__ import annotations

import functools

import numpy as np

from . import _kernels
from .ff import FieldMismatch, FieldSpec, FqElem, embed_arrays

_SPLIT_SEED = 20240611


def _trim_rows(a: np.ndarray) -> np.ndarray:
    nz = np.nonzero(a.any(axis=1))[0]
    if nz.size == 0:
        return a[:0]
    return a[: nz[-1] + 1]


class Poly:
    """Polynomial over a finite field, immutable."""

    __slots__ = ("field", "c")

    def __init__(self, field: FieldSpec, coeffs):
        arr = np.asarray(coeffs, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, field.k) if field.k > 1 else arr.reshape(-1, 1)
        if arr.size == 0:
            arr = np.zeros((0, field.k), dtype=np.int64)
        self.field = field
        self.c = _trim_rows(arr % field.p)
        self.c.setflags(write=False)

    # construction ---------------------------------------------------------
    @classmethod
    def from_elems(cls, field: FieldSpec, elems) -> Poly:
        rows = [field.elem(e).rep for e in elems]
        return cls(field, np.array(rows, dtype=np.int64).reshape(len(rows), field.k))

    @classmethod
    def const(cls, field: FieldSpec, c) -> Poly:
        return cls.from_elems(field, [c])

    @classmethod
    def x(cls, field: FieldSpec) -> Poly:
        return cls.from_elems(field, [0, 1])

    @classmethod
    def monomial(cls, field: FieldSpec, n: int, c=1) -> Poly:
        return cls.from_elems(field, [0] * n + [c])

    def zero(self) -> Poly:
        return Poly(self.field, [])

    def one(self) -> Poly:
        return Poly.const(self.field, 1)

    # basic queries --------------------------------------------------------
    @property
    def deg(self) -> int:
        return self.c.shape[0] - 1

    def is_zero(self) -> bool:
        return self.c.shape[0] == 0

    def __bool__(self):
        return not self.is_zero()

    def __getitem__(self, i: int) -> FqElem:
        if 0 <= i < self.c.shape[0]:
            return FqElem(self.field, self.c[i])
        return self.field.zero()

    def coeffs(self) -> list:
        return [FqElem(self.field, row) for row in self.c]

    def lc(self) -> FqElem:
        if self.is_zero():
            return self.field.zero()
        return FqElem(self.field, self.c[-1])

    def is_monic(self) -> bool:
        return not self.is_zero() and self.lc() == 1

    def is_one(self) -> bool:
        return self.deg == 0 and self.lc() == 1

    def key(self) -> tuple:
        return (self.deg, tuple(tuple(int(v) for v in row) for row in self.c[::-1]))

    def __eq__(self, other):
        if isinstance(other, (int, FqElem)):
            other = Poly.const(self.field, other)
        return (isinstance(other, Poly) and self.field == other.field
                and self.c.shape == other.c.shape and bool(np.all(self.c == other.c)))

    def __hash__(self):
        return hash((self.field, self.c.tobytes()))

    def __lt__(self, other):
        return self.key() < other.key()

    # arithmetic -----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Poly):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, np.integer, FqElem)):
            return Poly.const(self.field, other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = max(self.c.shape[0], o.c.shape[0])
        out = np.zeros((n, self.field.k), dtype=np.int64)
        out[: self.c.shape[0]] += self.c
        out[: o.c.shape[0]] += o.c
        return Poly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, -self.c)

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

    def __mul__(self, other):
        if isinstance(other, (int, np.integer, FqElem)):
            return self.scale(self.field.elem(other))
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.is_zero() or o.is_zero():
            return self.zero()
        wide = _kernels.conv2d(self.c, o.c)
        return Poly(self.field, self.field.reduce(wide))

    __rmul__ = __mul__

    def scale(self, c: FqElem) -> Poly:
        if self.field.k == 1:
            return Poly(self.field, self.c * c.rep[0])
        return Poly(self.field, self.field.scale_arrays(c, self.c))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result, base = self.one(), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def divmod(self, other: Poly):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.deg < o.deg:
            return self.zero(), self
        field = self.field
        if field.k == 1:
            return self._divmod_prime(o)
        inv = o.lc().inverse()
        rem = self.c.copy()
        dq = self.deg - o.deg
        quo = np.zeros((dq + 1, field.k), dtype=np.int64)
        divisor = o.c
        dd = o.deg
        for i in range(self.deg, dd - 1, -1):
            lead = rem[i]
            if not lead.any():
                continue
            c = FqElem(field, lead) * inv
            quo[i - dd] = c.rep
            rem[i - dd: i + 1] = (rem[i - dd: i + 1] - field.scale_arrays(c, divisor)) % field.p
        return Poly(field, quo), Poly(field, rem[:dd] if dd > 0 else rem[:0])

    def _divmod_prime(self, o: Poly):
        # prime field: plain integer long division
        p = self.field.p
        rem = [int(x) for x in self.c[:, 0]]
        div = [int(x) for x in o.c[:, 0]]
        dd = len(div) - 1
        inv = pow(div[-1], -1, p)
        quo = [0] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i] * inv % p
            if not c:
                continue
            quo[i - dd] = c
            off = i - dd
            for j in range(dd + 1):
                rem[off + j] = (rem[off + j] - c * div[j]) % p
        return Poly(self.field, quo), Poly(self.field, rem[:dd])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: Poly) -> Poly:
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self.scale(self.lc().inverse())

    def gcd(self, other: Poly) -> Poly:
        a, b = self, self._lift(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def powmod(self, e: int, m: Poly) -> Poly:
        result, base = self.one() % m, self % m
        while e:
            if e & 1:
                result = (result * base) % m
            e >>= 1
            if e:
                base = (base * base) % m
        return result

    def derivative(self) -> Poly:
        if self.deg < 1:
            return self.zero()
        idx = np.arange(1, self.deg + 1, dtype=np.int64).reshape(-1, 1)
        return Poly(self.field, self.c[1:] * idx)

    def frobenius_coeffs(self, times: int = 1) -> Poly:
        return Poly(self.field, self.field.frob_arrays(self.c, times))

    def pth_root(self) -> Poly:
        """sqrt[p] of a polynomial whose derivative vanishes."""
        p = self.field.p
        if self.is_zero():
            return self
        if self.c[np.arange(self.c.shape[0]) % p != 0].any():
            raise ArithmeticError("polynomial is not a p-th power")
        return Poly(self.field, self.field.root_arrays(self.c[::p]))

    def __call__(self, a: FqElem) -> FqElem:
        """Horner evaluation; ``a`` may live in an extension field."""
        target = a.spec
        coeffs = embed_arrays(self.c, self.field, target)
        acc = target.zero()
        for row in coeffs[::-1]:
            acc = acc * a + FqElem(target, row)
        return acc

    def change_field(self, target: FieldSpec) -> Poly:
        return Poly(target, embed_arrays(self.c, self.field, target))

    def taylor_shift(self, theta: FqElem) -> Poly:
        """Coefficients of f(theta + s) as a polynomial in s over theta's field."""
        f = self.change_field(theta.spec)
        lin = Poly.from_elems(theta.spec, [theta, 1])
        acc = f.zero()
        for row in f.c[::-1]:
            acc = acc * lin + FqElem(theta.spec, row)
        return acc

    def reverse(self, n: int | None = None) -> Poly:
        """x^n f(1/x) with n defaulting to deg f."""
        if n is None:
            n = self.deg
        if self.is_zero():
            return self
        pad = np.zeros((n + 1, self.field.k), dtype=np.int64)
        pad[: self.c.shape[0]] = self.c
        return Poly(self.field, pad[::-1])

    # factorisation ----------------------------------------------------------
    def squarefree_decomposition(self) -> list:
        """Pairs (g, e) with self = lc * prod g^e, each g square-free and monic."""
        f = self.monic()
        out: dict = {}
        _yun(f, 1, out)
        return sorted(out.items(), key=lambda ge: (ge[1], ge[0].key()))

    def distinct_degree(self) -> list:
        """Split a monic square-free polynomial into (product, degree) pairs."""
        f = self.monic()
        q = self.field.q
        x = Poly.x(self.field)
        h = x % f if f.deg > 0 else x
        out = []
        d = 0
        while f.deg >= 2 * (d + 1):
            d += 1
            h = h.powmod(q, f)
            g = f.gcd(h - x)
            if g.deg > 0:
                out.append((g, d))
                f = f // g
                h = h % f
        if f.deg > 0:
            out.append((f, f.deg))
        return out

    def equal_degree(self, d: int, rng=None) -> list:
        """Cantor-Zassenhaus split of a product of distinct degree-d irreducibles."""
        f = self.monic()
        if f.deg <= d:
            return [f]
        if rng is None:
            rng = np.random.default_rng(_SPLIT_SEED)
        field = self.field
        qd = field.q ** d
        while True:
            coeffs = rng.integers(0, field.p, size=(f.deg, field.k))
            a = Poly(field, coeffs)
            if a.deg < 1:
                continue
            if field.p == 2:
                acc, cur = a % f, a % f
                for _ in range(field.k * d - 1):
                    cur = (cur * cur) % f
                    acc = acc + cur
                b = acc
            else:
                b = a.powmod((qd - 1) // 2, f) - 1
            g = f.gcd(b)
            if 0 < g.deg < f.deg:
                return (g.equal_degree(d, rng) + (f // g).equal_degree(d, rng))

    def factor(self) -> list:
        """Monic irreducible factors with multiplicity, sorted deterministically."""
        if self.deg < 1:
            return []
        out = []
        for g, e in self.squarefree_decomposition():
            for h, d in g.distinct_degree():
                for irr in h.equal_degree(d):
                    out.append((irr, e))
        return sorted(out, key=lambda fe: fe[0].key())

    def is_irreducible(self) -> bool:
        if self.deg < 1:
            return False
        f = self.monic()
        if f.gcd(f.derivative()).deg > 0:
            return False
        parts = f.distinct_degree()
        return len(parts) == 1 and parts[0][1] == f.deg

    def roots(self) -> list:
        """All roots lying in the coefficient field, sorted by representation."""
        if self.deg < 1:
            return []
        f = self.monic()
        x = Poly.x(self.field)
        h = _frobenius_x(f)
        g = f.gcd(h - x)
        if g.deg < 1:
            return []
        roots = [-lin[0] for lin in g.equal_degree(1)]
        return sorted(roots)

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def _frobenius_x(f: Poly) -> Poly:
    """x^q mod f by k repeated p-th powers (cheap even for large q)."""
    field = f.field
    h = Poly.x(field) % f
    for _ in range(field.k):
        h = h.powmod(field.p, f)
    return h


def _yun(f: Poly, mult: int, out: dict):
    if f.deg < 1:
        return
    p = f.field.p
    df = f.derivative()
    if df.is_zero():
        _yun(f.pth_root(), mult * p, out)
        return
    c = f.gcd(df)
    w = f // c
    i = 1
    while w.deg > 0:
        y = w.gcd(c)
        z = w // y
        if z.deg > 0:
            out[z] = out.get(z, 0) + i * mult
        i += 1
        w = y
        c = c // y
    if c.deg > 0:
        _yun(c.pth_root(), mult * p, out)


def format_poly(f: Poly, var: str = "t") -> str:
    if f.is_zero():
        return "0"
    terms = []
    for i in range(f.deg, -1, -1):
        c = f[i]
        if c.is_zero():
            continue
        cs = str(c)
        if "+" in cs:
            cs = f"({cs})"
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(cs)
        elif cs == "1":
            terms.append(mono)
        else:
            terms.append(f"{cs}*{mono}")
    return " + ".join(terms)


class RationalFunction:
    """Element of F_q(t) kept as num/den with gcd 1 and monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, canonical: bool = False):
        if den is None:
            den = num.one()
        if num.field != den.field:
            raise FieldMismatch(f"{num.field} vs {den.field}")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not canonical:
            if num.is_zero():
                den = den.one()
            else:
                g = num.gcd(den)
                if g.deg > 0:
                    num, den = num // g, den // g
                lc = den.lc()
                if lc != 1:
                    inv = lc.inverse()
                    num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @property
    def field(self) -> FieldSpec:
        return self.num.field

    @classmethod
    def const(cls, field: FieldSpec, c) -> RationalFunction:
        return cls(Poly.const(field, c))

    @classmethod
    def t(cls, field: FieldSpec) -> RationalFunction:
        return cls(Poly.x(field))

    def zero(self):
        return RationalFunction(self.num.zero(), canonical=True)

    def one(self):
        return RationalFunction(self.num.one(), canonical=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.deg == 0

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        if isinstance(other, (int, np.integer, FqElem)):
            return RationalFunction.const(self.field, other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, canonical=True)

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

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RationalFunction(self.num ** e, self.den ** e, canonical=True)

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, RationalFunction) else other
        if o is NotImplemented or not isinstance(o, RationalFunction):
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def derivative(self) -> RationalFunction:
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def frobenius(self) -> RationalFunction:
        """The p-th power, computed coefficientwise."""
        p = self.field.p
        return RationalFunction(_frob_poly(self.num, p), _frob_poly(self.den, p), canonical=True)

    def degree(self) -> int:
        """deg(num) - deg(den); the negated valuation at infinity."""
        if self.is_zero():
            raise ValueError("degree of zero")
        return self.num.deg - self.den.deg

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.den.is_one():
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"


def _frob_poly(f: Poly, p: int) -> Poly:
    if f.is_zero():
        return f
    out = np.zeros(((f.deg) * p + 1, f.field.k), dtype=np.int64)
    out[::p] = f.field.frob_arrays(f.c)
    return Poly(f.field, out)


@functools.lru_cache(maxsize=None)
def monic_irreducibles(field: FieldSpec, d: int) -> tuple:
    """All monic irreducibles of degree d (used for exhaustive small tests)."""
    out = []
    for code in range(field.q ** d):
        low = [field.from_code((code // field.q ** i) % field.q) for i in range(d)]
        f = Poly.from_elems(field, low + [1])
        if f.is_irreducible():
            out.append(f)
    return tuple(out)
