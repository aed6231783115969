"""p-torsion Brauer invariants of F_q((t)) read off differential forms.

The invariant of omega is Tr_{F_q/F_p}(Res omega); it vanishes exactly on
(1 - C) of forms, which :func:`solve_one_minus_c` makes constructive.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import ff
from .cartier import bn_member, cartier
from .series import DiffForm, LaurentSeries, NotExact, PrecisionLoss, integrate, residue
from .witt import LengthMismatch, WittVector, d_n


class ZeroG(ValueError):
    """The second entry of a symbol [f, g) must be nonzero."""


@dataclass(frozen=True)
class BrauerInv:
    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def __add__(self, other):
        return BrauerInv(self.value + other.value, self.p)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.p
        if isinstance(other, BrauerInv):
            return (self.value, self.p) == (other.value, other.p)
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class CyclicAlgebraDesc:
    """Presentation data of [f, g): x^p - x = f, y^p = g, xy = y(x + 1)."""

    f: object
    g: object

    def relations(self) -> tuple:
        return ("x^p - x = f", "y^p = g", "x*y = y*(x + 1)")


@dataclass(frozen=True)
class PairingClass:
    """A representative form modulo B_n with its traced residue."""

    form: DiffForm
    level: int
    invariant: BrauerInv


def local_invariant(omega: DiffForm) -> BrauerInv:
    return BrauerInv(ff.trace(residue(omega)), omega.field.p)


def _sigma(f: LaurentSeries, p: int) -> LaurentSeries:
    if f.is_zero():
        return f
    first = -((-f.lo) // p)  # smallest m with p*m >= lo
    rows = f.c[first * p - f.lo:: p]
    return LaurentSeries(f.field, first, f.field.root_arrays(rows))


def _as_rep(f: LaurentSeries, upto: int) -> LaurentSeries:
    """Exact Laurent polynomial agreeing with f below ``upto``."""
    return f.truncate(upto).with_prec(None)


def artin_schreier_series(c: LaurentSeries):
    """Some y with y^p - y = c, or None when no solution exists."""
    field, p = c.field, c.field.p
    prec = c.prec
    if prec is not None and prec <= 0:
        raise PrecisionLoss("constant term of c is outside its window")
    y = LaurentSeries.zero(field)
    rest = c
    # negative part: peel leading terms a^p t^(p m) with y += a t^m
    guard = (abs(c.lo) + 1) * 2 + 8
    while not rest.is_zero() and rest.lo < 0:
        v = rest.lo
        if v % p:
            return None
        a = ff.pth_root(rest.leading())
        term = LaurentSeries.monomial(field, v // p, a)
        y = y + term
        rest = rest - (term ** p - term)
        guard -= 1
        if guard < 0:  # pragma: no cover - each peel raises the valuation
            raise AssertionError("Artin-Schreier peeling did not terminate")
    # constant term
    c0 = rest.coeff(0)
    x0 = ff.artin_schreier_solve(c0)
    if x0 is None:
        return None
    y = y + LaurentSeries.monomial(field, 0, x0)
    # positive part: -sum_i c_+^(p^i)
    pos = rest - LaurentSeries.monomial(field, 0, c0)
    if not pos.is_zero():
        if pos.prec is None:
            raise PrecisionLoss("positive part of an exact c has an infinite solution; truncate c")
        acc = LaurentSeries.zero(field, pos.prec)
        term = pos
        while not term.is_zero() and term.lo < pos.prec:
            acc = acc - term
            term = term.frobenius().truncate(pos.prec)
        y = y + acc
    elif prec is not None:
        y = y.truncate(prec)
    return y


def solve_one_minus_c(omega: DiffForm):
    """Some w with (1 - C)(w) = omega, or None when the invariant is nonzero.

    Writing omega = dg + f^p dlog t (f = t C(omega)/dt), we need
    y - sigma(y) = f where sigma(y)_m = y_{pm}^(1/p); then y^p dlog t
    solves the equation up to an exact form, which C kills.  The answer is
    an exact Laurent polynomial whose image agrees with omega on omega's
    window.
    """
    coeff = omega.coeff
    if not isinstance(coeff, LaurentSeries):
        raise TypeError("solve_one_minus_c works on series forms")
    field, p = coeff.field, coeff.field.p
    if coeff.prec is not None and coeff.prec <= -1:
        raise PrecisionLoss("residue outside the window")
    N = coeff.prec
    if N is None:
        N = max(coeff.hi, 1)
    if local_invariant(omega) != 0:
        return None
    f = cartier(DiffForm(coeff)).coeff.shift(1)
    # the image of y^p dlog t below t^N involves y_m for m <= N through C
    ymax = N
    y = LaurentSeries.zero(field)
    neg = f.truncate(0) if not f.is_zero() and f.lo < 0 else LaurentSeries.zero(field)
    neg = neg.with_prec(None)
    cur = neg
    while not cur.is_zero():
        y = y + cur
        cur = _sigma(cur, p)
    x0 = ff.artin_schreier_solve(f.coeff(0))
    if x0 is None:  # pragma: no cover - excluded by the invariant test
        return None
    y = y + LaurentSeries.monomial(field, 0, x0 ** p)
    pos = LaurentSeries(field, 1, f.window(1, min(ymax + 1, f.prec or ymax + 1)))
    if not pos.is_zero():
        acc = LaurentSeries.zero(field)
        term = pos
        while not term.is_zero() and term.lo <= ymax:
            acc = acc - term
            term = _as_rep(term.frobenius(), ymax + 1)
        y = y + _as_rep(acc.frobenius(), ymax + 1)
    y = _as_rep(y, ymax + 1)
    w0 = y.frobenius().shift(-1)
    image0 = w0 - cartier(DiffForm(w0)).coeff
    r = coeff - image0
    try:
        integrate(r)
    except NotExact as exc:  # pragma: no cover - would contradict the algebra
        raise AssertionError(f"remainder not exact at t^{exc.exponent}") from exc
    return DiffForm(w0 + r.with_prec(None))


def one_minus_c(omega: DiffForm) -> DiffForm:
    return omega - cartier(omega)


def symbol_to_brauer(f: LaurentSeries, g: LaurentSeries):
    """The algebra [f g, g) and the invariant of f dg."""
    if g.is_zero():
        raise ZeroG("g must be nonzero")
    inv = local_invariant(DiffForm(f * g.derivative()))
    return CyclicAlgebraDesc(f * g, g), inv


def pairing_alpha_p(f, g) -> PairingClass:
    """<df, dg> represented by g df."""
    form = DiffForm(g * f.derivative())
    return PairingClass(form, 1, local_invariant(form) if isinstance(form.coeff, LaurentSeries)
                        else BrauerInv(0, f.field.p))


def pairing_level_n(f: WittVector, g: WittVector) -> PairingClass:
    """D_n(f) g_0^(p^(n-1)) as a representative modulo B_n."""
    if f.n != g.n:
        raise LengthMismatch(f"lengths {f.n} and {g.n}")
    form = d_n(f) * (g[0] ** (f.p ** (f.n - 1)))
    inv = local_invariant(form) if isinstance(form.coeff, LaurentSeries) else BrauerInv(0, f.p)
    return PairingClass(form, f.n, inv)


def same_class(a: DiffForm, b: DiffForm, n: int = 1) -> bool:
    """a - b in B_n."""
    return bool(bn_member(a - b, n))
