"""The Cartier operator on forms f dt, B_n membership and the B_n + dlog splitting.

With f = sum_i g_i^p t^i the operator is C(f dt) = g_{p-1} dt.  On a form
known modulo t^N the result is known modulo t^floor(N/p).
"""
from __future__ import annotations

from dataclasses import dataclass

from .poly import Poly, RationalFunction
from .series import DiffForm, LaurentSeries, PrecisionLoss, p_power_decompose
from .witt import WittVector, d_n, invert_dn


@dataclass(frozen=True)
class Membership:
    """A boolean answer together with the window it was certified on.

    ``window`` is the exponent bound below which C^n(omega) was checked
    (None: exact computation).
    """

    value: bool
    level: int
    window: int | None

    def __bool__(self):
        return self.value


@dataclass(frozen=True)
class BnDecomposition:
    """omega = d_n(witt_part) + h^(p^n) t^(p^n) dlog t."""

    witt_part: WittVector
    h: LaurentSeries
    level: int
    prec: int | None = None

    def log_part(self) -> DiffForm:
        q = self.h.field.p ** self.level
        return DiffForm(self.h.frobenius(self.level).shift(q - 1))

    def recompose(self) -> DiffForm:
        # the exact witt part would otherwise claim digits omega never had
        return (d_n(self.witt_part) + self.log_part()).truncate(self.prec)


def _cartier_series(f: LaurentSeries) -> LaurentSeries:
    p = f.field.p
    if f.prec is not None and not f.is_zero():
        first = -((p - 1 - f.lo) // p)  # smallest j with p*j + p - 1 >= lo
        if f.prec // p <= first:
            raise PrecisionLoss(
                f"C needs a t^(-1 mod p) exponent in [{f.lo}, {f.prec}); window empties")
    return p_power_decompose(f)[p - 1]


def _cartier_rational(r: RationalFunction) -> RationalFunction:
    # num/den = (num den^(p-1)) / den^p and C is (1/p)-linear
    p = r.field.p
    g = p_power_decompose(LaurentSeries.from_poly(r.num * r.den ** (p - 1)))[p - 1]
    return RationalFunction(Poly(r.field, g.window(0, g.hi) if not g.is_zero() else []), r.den)


def cartier(omega: DiffForm) -> DiffForm:
    """C(omega) for series or rational forms."""
    c = omega.coeff
    if isinstance(c, LaurentSeries):
        return DiffForm(_cartier_series(c))
    return DiffForm(_cartier_rational(c))


def cartier_power(omega: DiffForm, n: int) -> DiffForm:
    for _ in range(n):
        omega = cartier(omega)
    return omega


def cartier_inverse(omega: DiffForm) -> DiffForm:
    """The representative f^p t^(p-1) dt of C^-1(f dt)."""
    c = omega.coeff
    p = omega.field.p
    if isinstance(c, LaurentSeries):
        return DiffForm(c.frobenius().shift(p - 1))
    return DiffForm(c.frobenius() * RationalFunction.t(c.field) ** (p - 1))


def bn_member(omega: DiffForm, n: int) -> Membership:
    """True iff C^n(omega) vanishes on its surviving window."""
    img = cartier_power(omega, n)
    return Membership(img.is_zero(), n, img.prec)


def zn_member(omega: DiffForm, n: int) -> Membership:
    """Whether C can be applied n times with a nonempty certified window.

    In one variable every form is closed, so this only fails through
    precision starvation (reported as False rather than raised).
    """
    try:
        img = cartier_power(omega, n)
    except PrecisionLoss:
        return Membership(False, n, None)
    return Membership(True, n, img.prec)


def bn_decompose(omega: DiffForm, n: int) -> BnDecomposition:
    """Split omega into d_n(witt_part) plus h^(p^n) t^(p^n - 1) dt.

    h is read off C^n(omega) = h dt; the remainder has C^n = 0 and is
    inverted through :func:`invert_dn`.
    """
    if not isinstance(omega.coeff, LaurentSeries):
        raise TypeError("bn_decompose works on series forms")
    h = cartier_power(omega, n).coeff
    q = omega.field.p ** n
    log_part = h.frobenius(n).shift(q - 1)
    rest = omega.coeff - log_part
    witt = invert_dn(DiffForm(rest), n)
    return BnDecomposition(witt, h, n, omega.prec)
