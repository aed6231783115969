"""Truncated Witt vectors, the differential D_n and its inverse on B_n.

Ring laws come from the universal addition/multiplication polynomials,
computed once over the integers from the ghost components

    w_m(x) = sum_{j <= m} p^j x_j^(p^(m-j))

and reduced mod p.  Entries may live in any of the rings modelled here
(F_q, F_q[t], F_q(t), truncated Laurent series); all entries of a vector
share one ring context.
"""
from __future__ import annotations

import functools
import logging

import sympy

from .ff import FqElem
from .poly import Poly, RationalFunction
from .series import DiffForm, LaurentSeries, NotExact, integrate

logger = logging.getLogger(__name__)


class WittError(ValueError):
    pass


class LengthMismatch(WittError):
    pass


class RingMismatch(WittError):
    pass


class NotInBn(ArithmeticError):
    """The form is not in B_n (some Cartier image is not exact)."""


def max_length(p: int) -> int:
    return 3 if p in (2, 3) else 2


def ring_key(a):
    """Identify the ring an entry lives in."""
    if isinstance(a, FqElem):
        return ("fq", a.spec)
    if isinstance(a, LaurentSeries):
        return ("series", a.field)
    if isinstance(a, Poly):
        return ("poly", a.field)
    if isinstance(a, RationalFunction):
        return ("rational", a.field)
    raise RingMismatch(f"unsupported Witt entry type {type(a).__name__}")


def _ghost(vs, m, p):
    return sum(p ** j * vs[j] ** (p ** (m - j)) for j in range(m + 1))


class UniversalWittPolys:
    """S_m and P_m for m < n, reduced mod p, as lists of (coef, x-exps, y-exps)."""

    def __init__(self, p: int, n: int):
        if n < 1 or n > max_length(p):
            raise WittError(f"Witt length {n} unsupported for p={p} (max {max_length(p)})")
        self.p, self.n = p, n
        xs = sympy.symbols(f"x0:{n}")
        ys = sympy.symbols(f"y0:{n}")
        gens = xs + ys
        S, P = [], []
        for m in range(n):
            S.append(self._next(S, _ghost(xs, m, p) + _ghost(ys, m, p), gens, m))
            P.append(self._next(P, _ghost(xs, m, p) * _ghost(ys, m, p), gens, m))
        self._check(S, xs, ys, gens, add=True)
        self._check(P, xs, ys, gens, add=False)
        self.add_terms = [self._reduce(s) for s in S]
        self.mul_terms = [self._reduce(q) for q in P]

    def _next(self, prev, target, gens, m):
        p = self.p
        num = sympy.Poly(target, *gens, domain="ZZ")
        for i, s in enumerate(prev):
            num = num - s ** (p ** (m - i)) * p ** i
        den = p ** m
        coeffs = num.coeffs()
        if any(c % den for c in coeffs):
            raise AssertionError(f"ghost recursion not integral at m={m}")
        return num.exquo_ground(den)

    def _check(self, polys, xs, ys, gens, add):
        p = self.p
        for m in range(len(polys)):
            lhs = sum((polys[j] ** (p ** (m - j)) * p ** j for j in range(1, m + 1)),
                      polys[0] ** (p ** m))
            gx = sympy.Poly(_ghost(xs, m, p), *gens, domain="ZZ")
            gy = sympy.Poly(_ghost(ys, m, p), *gens, domain="ZZ")
            rhs = gx + gy if add else gx * gy
            if lhs != rhs:
                raise AssertionError(f"ghost identity fails at m={m}")

    def _reduce(self, poly):
        n, p = self.n, self.p
        out = []
        for exps, c in poly.terms():
            c = int(c) % p
            if c:
                out.append((c, exps[:n], exps[n:]))
        return out


@functools.lru_cache(maxsize=None)
def universal(p: int, n: int) -> UniversalWittPolys:
    return UniversalWittPolys(p, n)


class WittVector:
    """(f_0, ..., f_{n-1}) with entries in a common ring of characteristic p."""

    __slots__ = ("entries", "p")

    def __init__(self, entries):
        entries = tuple(entries)
        if not entries:
            raise LengthMismatch("Witt vector of length 0")
        keys = {ring_key(e) for e in entries}
        if len(keys) != 1:
            raise RingMismatch(f"entries live in different rings: {sorted(k[0] for k in keys)}")
        key = keys.pop()
        self.entries = entries
        self.p = key[1].p

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def ring(self):
        return ring_key(self.entries[0])

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __add__(self, other):
        return witt_add(self, other)

    def __mul__(self, other):
        return witt_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return self.n == other.n and all(a == b for a, b in zip(self.entries, other.entries))

    __hash__ = None

    def __repr__(self):
        return "WittVector(" + ", ".join(str(e) for e in self.entries) + ")"


def _pair(a: WittVector, b: WittVector):
    if a.n != b.n:
        raise LengthMismatch(f"lengths {a.n} and {b.n}")
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")


def _evaluate(terms, a, b):
    powers: dict = {}

    def pw(vec, tag, i, e):
        key = (tag, i, e)
        if key not in powers:
            powers[key] = vec[i] ** e
        return powers[key]

    total = None
    for c, ex, ey in terms:
        mono = None
        for tag, vec, exps in (("x", a, ex), ("y", b, ey)):
            for i, e in enumerate(exps):
                if e:
                    f = pw(vec, tag, i, e)
                    mono = f if mono is None else mono * f
        if mono is None:  # pragma: no cover - S_m, P_m have no constant term
            mono = a[0] ** 0
        if c != 1:
            mono = mono * c
        total = mono if total is None else total + mono
    if total is None:
        total = a[0] * 0
    return total


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    _pair(a, b)
    polys = universal(a.p, a.n)
    return WittVector(_evaluate(polys.add_terms[m], a.entries, b.entries) for m in range(a.n))


def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    _pair(a, b)
    polys = universal(a.p, a.n)
    return WittVector(_evaluate(polys.mul_terms[m], a.entries, b.entries) for m in range(a.n))


def witt_neg(a: WittVector) -> WittVector:
    """Additive inverse; for odd p it is entrywise negation."""
    if a.p != 2:
        return WittVector(-e for e in a.entries)
    zero = witt_zero_like(a)
    # solve a + x = 0 entry by entry
    x = list(zero.entries)
    for m in range(a.n):
        s = witt_add(a, WittVector(x))
        x[m] = x[m] - s[m]
    return WittVector(x)


def witt_zero_like(a: WittVector) -> WittVector:
    z = a[0] * 0
    return WittVector([z] * a.n)


def witt_frobenius(a: WittVector) -> WittVector:
    """Entrywise p-th power, the Frobenius of W_n in characteristic p."""
    return WittVector(e ** a.p for e in a.entries)


def _as_form_coeff(f):
    if isinstance(f, Poly):
        return RationalFunction(f)
    return f


def d_n(a: WittVector) -> DiffForm:
    """sum_j f_j^(p^(n-1-j) - 1) df_j."""
    p, n = a.p, a.n
    total = None
    for j, f in enumerate(a.entries):
        f = _as_form_coeff(f)
        if isinstance(f, FqElem):
            continue
        e = p ** (n - 1 - j) - 1
        term = f.derivative() if e == 0 else (f ** e) * f.derivative()
        total = term if total is None else total + term
    if total is None:
        raise RingMismatch("d_n needs a ring with a derivation (series, polynomials or rationals)")
    return DiffForm(total)


def _laurent_coeff(omega: DiffForm) -> LaurentSeries:
    c = omega.coeff
    if isinstance(c, LaurentSeries):
        return c
    den = c.den
    if den.deg == 0 or (den.c[:-1] == 0).all():
        return LaurentSeries.from_poly(c.num).shift(-den.deg)
    raise NotInBn("invert_dn handles Laurent polynomials and series; denominator is not a power of t")


def invert_dn(omega: DiffForm, n: int) -> WittVector:
    """A Witt vector f with d_n(f) = omega, for omega in B_n.

    Induction on n: f_0 integrates C^(n-1)(omega); then
    omega - f_0^(p^(n-1) - 1) df_0 lies in B_(n-1) and yields the rest.
    Each entry is returned as an exact Laurent polynomial (unknown tail set
    to zero, constants of integration zero), so d_n of the result agrees with
    omega on omega's whole window.
    """
    from .cartier import cartier_power

    coeff = _laurent_coeff(omega)
    p = coeff.field.p
    if n < 1:
        raise WittError("level must be >= 1")
    eta = cartier_power(DiffForm(coeff), n - 1).coeff
    try:
        f0 = integrate(eta)
    except NotExact as exc:
        raise NotInBn(f"C^{n - 1}(omega) has a t^{exc.exponent} term; not exact") from exc
    f0 = f0.with_prec(None)
    if n == 1:
        return WittVector([f0])
    e = p ** (n - 1) - 1
    rest = coeff - (f0 ** e) * f0.derivative()
    tail = invert_dn(DiffForm(rest), n - 1)
    return WittVector((f0,) + tail.entries)
