"""Affine patches over K = F_q(t), absolute forms, and the pairing with adelic points.

The pairing of a form omega of level n with an adelic point (x_v) and a
multiplier m is

    sum_v Tr_{F(v)/F_p} Res_v(m C^n(omega|x_v)).

Adelic points agree with a global default point outside a finite support
S, and the default contributes a global form whose residues sum to zero, so
only the differences omega|x_v - omega|default at v in S enter.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field as dc_field

from .adelic import (DEFAULT_TRIAL_BOUND, AdelicForm, Place, as_rational, default_trials,
                     local_expand, reconstruct_adelic)
from .cartier import cartier_power
from .ff import FieldSpec
from .poly import Poly, RationalFunction, monic_irreducibles
from .series import DiffForm, LaurentSeries, PrecisionLoss, residue

logger = logging.getLogger(__name__)

SEED = 20240611


class RelationViolation(ValueError):
    """A point does not satisfy the patch relations to its precision."""


class MPoly:
    """Polynomial in coordinates x_1..x_d with coefficients in F_q(t).

    Stored as {exponent tuple: RationalFunction} without zero entries.
    """

    __slots__ = ("base", "nvars", "terms")

    def __init__(self, base: FieldSpec, nvars: int, terms=None):
        self.base, self.nvars = base, nvars
        clean = {}
        for e, c in (terms or {}).items():
            c = as_rational(c, base)
            if not c.is_zero():
                clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def const(cls, base, nvars, c) -> MPoly:
        return cls(base, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, base, nvars, i) -> MPoly:
        e = [0] * nvars
        e[i] = 1
        return cls(base, nvars, {tuple(e): 1})

    @classmethod
    def t(cls, base, nvars) -> MPoly:
        return cls.const(base, nvars, RationalFunction.t(base))

    def _lift(self, other):
        if isinstance(other, MPoly):
            return other
        return MPoly.const(self.base, self.nvars, other)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out[e] + c if e in out else c
        return MPoly(self.base, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.base, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return MPoly(self.base, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = MPoly.const(self.base, self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._lift(other)
        return (self - o).is_zero()

    __hash__ = None

    def diff(self, i: int) -> MPoly:
        p = self.base.p
        out = {}
        for e, c in self.terms.items():
            if e[i] % p:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return MPoly(self.base, self.nvars, out)

    def diff_t(self) -> MPoly:
        return MPoly(self.base, self.nvars, {e: c.derivative() for e, c in self.terms.items()})

    def evaluate(self, values):
        """Substitute values (rational functions or local series) for the coordinates.

        ``values`` is a list for global evaluation; for local evaluation pass
        a :class:`LocalPoint`.
        """
        if isinstance(values, LocalPoint):
            return self._eval_local(values)
        total = RationalFunction.const(self.base, 0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(values, e):
                if k:
                    term = term * as_rational(x, self.base) ** k
            total = total + term
        return total

    def _eval_local(self, pt: LocalPoint):
        v = pt.place
        prec = pt.prec
        total = LaurentSeries.zero(v.residue_field)
        for e, c in self.terms.items():
            mono = None
            for x, k in zip(pt.coords, e):
                if k:
                    xk = x ** k
                    mono = xk if mono is None else mono * xk
            if mono is None:
                mono = LaurentSeries.one(v.residue_field)
            shift = max(0, -(mono.valuation() or 0)) if mono.valuation() is not None else 0
            cv = local_expand(c, v, (prec if prec is not None else _exact_prec(mono)) + shift + 1)
            total = total + cv * mono
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i + 1}^{k}" if k > 1 else f"x{i + 1}" for i, k in enumerate(e) if k)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    __repr__ = __str__


def _exact_prec(s: LaurentSeries) -> int:
    return max(s.hi, 0) + 16


@dataclass
class AffinePatch:
    coords: tuple
    relations: list = dc_field(default_factory=list)
    base: FieldSpec | None = None

    @property
    def dim(self) -> int:
        return len(self.coords)

    def check_local(self, pt: LocalPoint):
        for rel in self.relations:
            val = rel.evaluate(pt)
            if not val.is_zero():
                raise RelationViolation(
                    f"relation {rel} fails at {pt.place}: leading term t^{val.lo}")

    def check_global(self, coords):
        for rel in self.relations:
            if not rel.evaluate(coords).is_zero():
                raise RelationViolation(f"relation {rel} fails at the global point")


@dataclass
class AbsoluteForm:
    """sum_i a_i dx_i + b dt with MPoly coefficients; ``level`` is n (class mod B_n)."""

    a: list
    b: MPoly
    level: int = 0

    def __add__(self, other):
        return AbsoluteForm([x + y for x, y in zip(self.a, other.a)], self.b + other.b,
                            max(self.level, other.level))

    def scale(self, f: MPoly) -> AbsoluteForm:
        return AbsoluteForm([f * x for x in self.a], f * self.b, self.level)

    def with_level(self, n: int) -> AbsoluteForm:
        return AbsoluteForm(list(self.a), self.b, n)


def exterior_d(f: MPoly) -> AbsoluteForm:
    return AbsoluteForm([f.diff(i) for i in range(f.nvars)], f.diff_t())


def d_n_absolute(entries) -> AbsoluteForm:
    """sum_j f_j^(p^(n-1-j) - 1) df_j for MPoly entries f_0..f_{n-1}."""
    entries = list(entries)
    n = len(entries)
    p = entries[0].base.p
    total = None
    for j, f in enumerate(entries):
        term = exterior_d(f).scale(f ** (p ** (n - 1 - j) - 1))
        total = term if total is None else total + term
    return total


@dataclass
class LocalPoint:
    place: Place
    coords: list

    @property
    def prec(self):
        precs = [c.prec for c in self.coords if c.prec is not None]
        return min(precs) if precs else None


@dataclass
class AdelicPoint:
    patch: AffinePatch
    points: dict
    default: list | None = None

    def places(self) -> list:
        return sorted(self.points)


def _dt_local(v: Place, prec) -> LaurentSeries:
    """dt/ds at v: 1 at finite places, -u^-2 at infinity."""
    field = v.residue_field
    if v.is_infinite:
        return LaurentSeries.monomial(field, -2, -1)
    return LaurentSeries.one(field)


def pullback(omega: AbsoluteForm, pt: LocalPoint, patch: AffinePatch | None = None) -> DiffForm:
    """(b(P) dt/ds + sum_i a_i(P) dP_i/ds) ds."""
    if patch is not None:
        patch.check_local(pt)
    total = omega.b.evaluate(pt) * _dt_local(pt.place, pt.prec)
    for ai, xi in zip(omega.a, pt.coords):
        if ai.is_zero():
            continue
        total = total + ai.evaluate(pt) * xi.derivative()
    return DiffForm(total)


def pullback_global(omega: AbsoluteForm, coords) -> DiffForm:
    coords = [as_rational(c, omega.b.base) for c in coords]
    total = omega.b.evaluate(coords)
    for ai, xi in zip(omega.a, coords):
        if not ai.is_zero():
            total = total + ai.evaluate(coords) * xi.derivative()
    return DiffForm(total)


def expand_point(coords, v: Place, prec: int) -> LocalPoint:
    """The completion at v of a global point."""
    return LocalPoint(v, [local_expand(c, v, prec) for c in coords])


def _local_difference(omega, A: AdelicPoint, v: Place, n: int) -> DiffForm:
    pt = A.points[v]
    loc = pullback(omega, pt, A.patch)
    if A.default is not None:
        glob = pullback_global(omega, A.default).coeff
        prec = loc.prec if loc.prec is not None else _exact_prec(loc.coeff)
        if not glob.is_zero():
            gl = local_expand(glob, v, prec + (2 if v.is_infinite else 0))
            if v.is_infinite:
                gl = -gl.shift(-2)
            loc = loc - DiffForm(gl)
    return cartier_power(loc, n)


def bm_pairing(omega: AbsoluteForm, A: AdelicPoint, m, n: int | None = None) -> int:
    """sum_{v in S} Tr Res_v(m C^n(omega|x_v - omega|default)) in F_p."""
    n = omega.level if n is None else n
    base = A.patch.base
    m = as_rational(m, base)
    total = 0
    for v in A.places():
        diff = _local_difference(omega, A, v, n).coeff
        if m.is_zero() or (diff.is_zero() and diff.prec is None):
            continue
        vd = diff.valuation()
        vd = 0 if vd is None else vd
        mv = local_expand(m, v, max(-vd, 0) + 1)
        total += residue(mv * diff).trace()
    return total % base.p


def spot_check_integrality(A: AdelicPoint, count: int = 3, seed: int = SEED) -> list:
    """Check the default point is integral at ``count`` random places outside S."""
    base = A.patch.base
    if A.default is None:
        return []
    rng = random.Random(seed)
    taken = set(A.points)
    candidates = [Place.finite(pi) for d in (1, 2) for pi in monic_irreducibles(base, d)]
    candidates = [v for v in candidates if v not in taken]
    rng.shuffle(candidates)
    out = []
    for v in candidates[:count]:
        ok = all(as_rational(c, base).is_zero() or v.ord(as_rational(c, base)) >= 0
                 for c in A.default)
        out.append((v, ok))
    return out


@dataclass(frozen=True)
class Obstructed:
    witness: RationalFunction
    value: int

    verdict = "Obstructed"


@dataclass(frozen=True)
class UnobstructedEvidence:
    form: RationalFunction
    trials: int
    reconstruction: object = None
    spot_checks: tuple = ()

    verdict = "UnobstructedEvidence"


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    trials: int = 0

    verdict = "Inconclusive"


def check_theorem1(omega: AbsoluteForm, A: AdelicPoint, n: int | None = None, trials=None,
                   bound: int = DEFAULT_TRIAL_BOUND):
    """Obstructed (a proof), UnobstructedEvidence (trial-bounded) or Inconclusive."""
    n = omega.level if n is None else n
    base = A.patch.base
    family = default_trials(base, bound) + [as_rational(m, base) for m in (trials or [])]
    spots = tuple(spot_check_integrality(A))
    try:
        for m in family:
            val = bm_pairing(omega, A, m, n)
            if val:
                return Obstructed(m, val)
    except PrecisionLoss as exc:
        return Inconclusive(f"precision: {exc}", len(family))
    if A.default is None:
        return Inconclusive("no default point to fix the unlisted places", len(family))
    eta = cartier_power(pullback_global(omega, A.default), n).coeff
    if not A.points:
        return UnobstructedEvidence(eta, len(family), None, spots)
    try:
        local = {v: cartier_power(pullback(omega, A.points[v], A.patch), n) for v in A.places()}
    except PrecisionLoss as exc:
        return Inconclusive(f"precision: {exc}", len(family))
    rec = reconstruct_adelic(AdelicForm(base, local, eta))
    if rec.ok:
        return UnobstructedEvidence(rec.form, len(family), rec, spots)
    if rec.form is None:
        return Inconclusive("reconstruction failed at the available precision", len(family))
    return Inconclusive("reconstructed form does not match every place", len(family))


# --- Legendre family -------------------------------------------------------

@dataclass(frozen=True)
class LegendreReport:
    p: int
    relation_ok: bool
    identity: bool
    epsilon: int | None
    series_agree: bool
    series_window: int
    series_point: tuple

    def as_dict(self) -> dict:
        return {"p": self.p, "relation": self.relation_ok, "identity": self.identity,
                "epsilon": self.epsilon, "series_agree": self.series_agree,
                "series_window": self.series_window, "series_point": list(self.series_point)}


class _Quad:
    """a + b y in L(y) with y^2 = P, a and b in a rational function field L."""

    __slots__ = ("a", "b", "P")

    def __init__(self, a, b, P):
        self.a, self.b, self.P = a, b, P

    def __add__(self, o):
        return _Quad(self.a + o.a, self.b + o.b, self.P)

    def __sub__(self, o):
        return _Quad(self.a - o.a, self.b - o.b, self.P)

    def __mul__(self, o):
        return _Quad(self.a * o.a + self.b * o.b * self.P, self.a * o.b + self.b * o.a, self.P)

    def inverse(self):
        norm = self.a * self.a - self.b * self.b * self.P
        return _Quad(self.a / norm, -self.b / norm, self.P)

    def __truediv__(self, o):
        return self * o.inverse()

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __eq__(self, o):
        return (self - o).is_zero()


def _legendre_symbolic(p: int):
    import sympy
    from sympy.polys.fields import field
    from sympy.polys.rings import ring

    dom = sympy.GF(p)
    R, X, T, Y = ring("x,t,y", dom)
    Pr = X * (X - 1) * (X - T)
    F = Y ** 2 - Pr
    # (i) d(y^2 - P) = 2y dy - P_x dx - P_t dt
    relation_ok = (F.diff(Y) == 2 * Y and F.diff(X) == -Pr.diff(X) and F.diff(T) == -Pr.diff(T))

    L, x, t = field("x,t", dom)
    P = x * (x - 1) * (x - t)
    Px, Pt = P.diff(x), P.diff(t)

    def q(a, b=0):
        return _Quad(L(a), L(b), P)

    two_y = q(0, 2)
    # dy from the relation, as (dx, dt) coefficients
    dy = (q(Px) / two_y, q(Pt) / two_y)
    lhs_dx = q(1) / two_y - dy[0] / q(Px)
    lhs_dt = q(0) - dy[1] / q(Px)
    rhs_dt = q(Pt) / (two_y * q(Px))
    eps = None
    if lhs_dx.is_zero():
        for e in (1, -1):
            if (lhs_dt - q(e) * rhs_dt).is_zero():
                eps = e
                break
    return relation_ok, eps is not None, eps


def _legendre_series(p: int, eps: int, prec: int = 32):
    from .ff import get_field

    F = get_field(p)
    work = prec + 8
    for t0 in range(1, p):
        for x0 in range(p):
            P0 = x0 * (x0 - 1) * (x0 - t0) % p
            Px0 = (3 * x0 * x0 - 2 * (1 + t0) * x0 + t0) % p
            if P0 == 0 or Px0 == 0 or pow(P0, (p - 1) // 2, p) != 1:
                continue
            s = LaurentSeries.t(F, work)
            x = s + x0
            t = s + t0
            P = x * (x - 1) * (x - t)
            Px = x * x * 3 - (t + 1) * x * 2 + t
            Pt = -(x * x) + x
            y = P.sqrt()
            dy = y.derivative()
            lhs = x.derivative() / (y * 2) - dy / Px
            rhs = Pt / (y * 2 * Px) * eps
            window = min(lhs.prec, rhs.prec)
            return lhs.agrees_with(rhs) and window >= prec, window, (x0, t0)
    return False, 0, ()


def legendre_check(p: int) -> LegendreReport:
    """Check dx/(2y) - dy/P_x = eps P_t/(2y P_x) dt on y^2 = x(x-1)(x-t)."""
    if p < 5:
        raise ValueError("the Legendre check needs p >= 5")
    relation_ok, identity, eps = _legendre_symbolic(p)
    agree, window, point = _legendre_series(p, eps or 1)
    return LegendreReport(p, relation_ok, identity, eps, agree, window, point)


def legendre_patch(base: FieldSpec) -> AffinePatch:
    x = MPoly.var(base, 2, 0)
    y = MPoly.var(base, 2, 1)
    t = MPoly.t(base, 2)
    return AffinePatch(("x", "y"), [y * y - x * (x - 1) * (x - t)], base)


def legendre_global_points(base: FieldSpec) -> list:
    """Affine K-points: the 2-torsion plus (x, y) with x of degree <= 2 found by search."""
    t = RationalFunction.t(base)
    zero = RationalFunction.const(base, 0)
    pts = [(zero, zero), (RationalFunction.const(base, 1), zero), (t, zero)]
    for code in range(base.q ** 3):
        cs = [base.from_code((code // base.q ** i) % base.q) for i in range(3)]
        xp = Poly.from_elems(base, cs)
        if xp.deg < 1:
            continue
        rhs = xp * (xp - 1) * (xp - Poly.x(base))
        if rhs.is_zero():
            continue
        root = _poly_sqrt(rhs)
        if root is not None:
            pts.append((RationalFunction(xp), RationalFunction(root)))
    return pts


def _poly_sqrt(f: Poly):
    if f.deg % 2:
        return None
    from .ff import sqrt as fsqrt

    lc = fsqrt(f.lc())
    if lc is None:
        return None
    fac = f.factor()
    if any(e % 2 for _, e in fac):
        return None
    g = Poly.const(f.field, lc)
    for h, e in fac:
        g = g * h ** (e // 2)
    return g if g * g == f else None
