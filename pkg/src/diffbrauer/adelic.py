"""Places of K = F_q(t), completions, residues and adelic forms.

A finite place is a monic irreducible pi; its completion is F(v)((s)) with
F(v) = F_{q^deg pi} and s = t - theta for a fixed root theta of pi (the
smallest one in F(v)).  At infinity the uniformizer is u = 1/t and
dt = -u^-2 du.

Residue sums over all places of a global form vanish, so an adelic form that
agrees with a global "default" form outside a finite support S pairs with a
multiplier m through the finitely many terms
    sum_{v in S} Tr Res(m (omega_v - default_v)).
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import _linalg
from .ff import FieldSpec, FqElem, get_field, rel_trace
from .poly import Poly, RationalFunction
from .series import DiffForm, LaurentSeries, PrecisionLoss, residue

DEFAULT_TRIAL_BOUND = 12


class PlaceError(ValueError):
    pass


class ExpansionFailure(AssertionError):
    """pi has no root in the constructed residue field."""


@dataclass(frozen=True)
class Place:
    """Finite(pi) when ``pi`` is given, otherwise the place at infinity."""

    base: FieldSpec
    pi: Poly | None = None

    def __post_init__(self):
        if self.pi is not None:
            if self.pi.field != self.base:
                raise PlaceError("place polynomial over the wrong field")
            if not self.pi.is_monic() or not _irreducible(self.pi):
                raise PlaceError(f"{self.pi} is not monic irreducible")

    @classmethod
    def finite(cls, pi: Poly) -> Place:
        return cls(pi.field, pi)

    @classmethod
    def infinity(cls, base: FieldSpec) -> Place:
        return cls(base, None)

    @property
    def is_infinite(self) -> bool:
        return self.pi is None

    @property
    def degree(self) -> int:
        return 1 if self.pi is None else self.pi.deg

    @property
    def residue_field(self) -> FieldSpec:
        return _residue_field(self.base, self.degree)

    @property
    def theta(self) -> FqElem | None:
        if self.pi is None:
            return None
        return _theta(self.pi)

    def key(self):
        return (1, ()) if self.pi is None else (0, (self.pi.deg,) + self.pi.key())

    def __lt__(self, other):
        return self.key() < other.key()

    def __hash__(self):
        return hash((self.base, None if self.pi is None else self.pi.key()))

    def __eq__(self, other):
        if not isinstance(other, Place):
            return NotImplemented
        return self.base == other.base and self.pi == other.pi

    def __str__(self):
        return "inf" if self.pi is None else f"({self.pi})"

    def ord(self, r: RationalFunction) -> int:
        """Valuation of a nonzero rational function at this place."""
        if r.is_zero():
            raise PlaceError("valuation of zero")
        if self.pi is None:
            return r.den.deg - r.num.deg
        return _mult(r.num, self.pi) - _mult(r.den, self.pi)


def _mult(f: Poly, pi: Poly) -> int:
    m = 0
    while f.deg >= pi.deg:
        q, r = f.divmod(pi)
        if not r.is_zero():
            break
        f, m = q, m + 1
    return m


@functools.lru_cache(maxsize=4096)
def _irreducible(pi: Poly) -> bool:
    return pi.is_irreducible()


@functools.lru_cache(maxsize=None)
def _residue_field(base: FieldSpec, d: int) -> FieldSpec:
    return base if d == 1 else get_field(base.p, base.k * d)


@functools.lru_cache(maxsize=None)
def _theta(pi: Poly) -> FqElem:
    fv = _residue_field(pi.field, pi.deg)
    roots = pi.change_field(fv).roots()
    if not roots:
        raise ExpansionFailure(f"{pi} has no root in {fv}")
    return roots[0]


def as_rational(r, base: FieldSpec) -> RationalFunction:
    if isinstance(r, RationalFunction):
        return r
    if isinstance(r, Poly):
        return RationalFunction(r)
    return RationalFunction.const(base, r)


def local_expand(r, v: Place, prec: int) -> LaurentSeries:
    """Expansion of r in the uniformizer at v, known modulo s^prec."""
    from .series import expand_at

    r = as_rational(r, v.base)
    return expand_at(r, v.theta, prec)


def local_form(f, v: Place, prec: int) -> DiffForm:
    """The completion at v of the global form f dt, in the local ds (or du)."""
    f = as_rational(f, v.base)
    if v.is_infinite:
        s = local_expand(f, v, prec + 2)
        return DiffForm(-s.shift(-2))
    return DiffForm(local_expand(f, v, prec))


def residue_at(f, v: Place) -> FqElem:
    """Residue of the global form f dt at v, in F(v)."""
    f = as_rational(f, v.base)
    if f.is_zero():
        return v.residue_field.zero()
    return residue(local_form(f, v, 0))


def poles(f: RationalFunction) -> list:
    """Finite places where f has a pole, sorted."""
    out = []
    for pi, _ in f.den.factor():  # irreducible already, skip the check
        v = object.__new__(Place)
        object.__setattr__(v, "base", pi.field)
        object.__setattr__(v, "pi", pi)
        out.append(v)
    return sorted(out)


def residue_sum(f) -> FqElem:
    """sum over all places of Tr_{F(v)/F_q} Res_v(f dt); zero by reciprocity."""
    if isinstance(f, DiffForm):
        f = f.coeff
    if isinstance(f, Poly):
        f = RationalFunction(f)
    base = f.field
    total = base.zero()
    for v in poles(f) + [Place.infinity(base)]:
        total = total + rel_trace(residue_at(f, v), base)
    return total


@dataclass
class AdelicForm:
    """Local forms on a finite support; elsewhere the completion of ``default``.

    ``default`` is the coefficient of a global form default dt, or None for
    the zero form.
    """

    base: FieldSpec
    support: dict = dc_field(default_factory=dict)
    default: RationalFunction | None = None

    @classmethod
    def diagonal(cls, f, places, prec: int) -> AdelicForm:
        f = as_rational(f, places[0].base if places else None)
        return cls(f.field, {v: local_form(f, v, prec) for v in places}, f)

    def places(self) -> list:
        return sorted(self.support)

    def deviation(self, v: Place) -> DiffForm:
        loc = self.support[v]
        if self.default is None or self.default.is_zero():
            return loc
        prec = loc.prec
        if prec is None:
            prec = max(loc.coeff.hi, 0) + 1
        return loc - local_form(self.default, v, prec)


def traced_residue(form: DiffForm) -> int:
    return residue(form).trace()


def pair_multiplier(ad: AdelicForm, m) -> int:
    """sum_v Tr_{F(v)/F_p} Res_v(m omega_v) using reciprocity for unlisted places."""
    p = ad.base.p
    total = 0
    m = as_rational(m, ad.base)
    for v in ad.places():
        dev = ad.deviation(v).coeff
        if dev.is_zero() and dev.prec is None:
            continue
        if m.is_zero():
            continue
        vd = dev.lo if not dev.is_zero() else (dev.prec if dev.prec is not None else 0)
        need = max(-vd, 0) + 1
        mv = local_expand(m, v, need)
        prod = mv * dev
        if prod.prec is not None and prod.prec <= -1:
            raise PrecisionLoss(f"window at {v} too short for multiplier {m}")
        total += residue(prod).trace()
    return total % p


def default_trials(base: FieldSpec, bound: int = DEFAULT_TRIAL_BOUND) -> list:
    t = RationalFunction.t(base)
    return [t ** j for j in range(-bound, bound + 1)]


@dataclass(frozen=True)
class PassedAllTrials:
    trials: int
    evidence: object = None

    verdict = "PassedAllTrials"


@dataclass(frozen=True)
class Failed:
    witness: RationalFunction
    value: int

    verdict = "Failed"


def tate_global_test(ad: AdelicForm, trials=None, bound: int = DEFAULT_TRIAL_BOUND):
    """First multiplier with a nonzero traced residue sum, or a pass verdict.

    A pass is trial-bounded: the criterion quantifies over all of K.
    """
    family = default_trials(ad.base, bound) + [as_rational(m, ad.base) for m in (trials or [])]
    for m in family:
        val = pair_multiplier(ad, m)
        if val:
            return Failed(m, val)
    evidence = None
    if ad.support:
        evidence = reconstruct_adelic(ad)
    return PassedAllTrials(len(family), evidence)


def _basis(base: FieldSpec, deg: int) -> list:
    """w^j t^i for i <= deg, j < k: an F_p-basis of polynomials of degree <= deg."""
    t = RationalFunction.t(base)
    eye = np.eye(base.k, dtype=np.int64)
    return [(t ** i) * base.elem(eye[j]) for i in range(deg + 1) for j in range(base.k)]


def rational_reconstruct(s: LaurentSeries, bounds, v: Place | None = None):
    """Some N/D with deg N <= bounds[0], deg D <= bounds[1] expanding to s, or None.

    ``v`` is the place s was expanded at (default: t = 0 over s's field).
    Solved as the F_p-linear system D*s - N = 0 on the window; with enough
    terms every solution with D != 0 gives the same quotient, which is then
    checked against the whole window.
    """
    dn, dd = bounds
    if v is None:
        v = Place.finite(Poly.x(s.field))
    base = v.base
    if s.field != v.residue_field:
        raise PlaceError("series field differs from the residue field of the place")
    if s.prec is None:
        raise PrecisionLoss("reconstruction needs a truncated series")
    if s.is_zero():
        return RationalFunction(Poly.x(base).zero())
    lo = min(s.lo, 0) - (dn if v.is_infinite else 0)
    if s.prec * v.degree < dn + dd + 1:
        raise PrecisionLoss("window shorter than num_deg + den_deg + 1")
    dpart = [local_expand(m, v, s.prec - s.lo + 2) * s for m in _basis(base, dd)]
    stop = min([s.prec] + [x.prec for x in dpart])
    if stop <= lo:
        raise PrecisionLoss("no common window for the reconstruction system")
    cols = [x.window(lo, stop).reshape(-1) for x in dpart]
    for m in _basis(base, dn):
        cols.append((-local_expand(m, v, stop)).window(lo, stop).reshape(-1))
    mat = np.stack(cols, axis=1) % base.p
    nd = (dd + 1) * base.k
    for vec in _linalg.nullspace(mat, base.p):
        dvec = vec[:nd]
        if not dvec.any():
            continue
        r = RationalFunction(Poly(base, vec[nd:].reshape(dn + 1, base.k)),
                             Poly(base, dvec.reshape(dd + 1, base.k)))
        if local_expand(r, v, s.prec) == s:
            return r
    return None


def auto_bounds(s: LaurentSeries) -> tuple:
    d = max((s.prec - 1) // 2, 0)
    return d, d


@dataclass(frozen=True)
class Reconstruction:
    form: RationalFunction | None
    place: Place | None
    validated: tuple

    @property
    def ok(self) -> bool:
        return self.form is not None and all(ok for _, ok in self.validated)


def form_coefficient_at(form: DiffForm, v: Place) -> LaurentSeries:
    """The local series g with form = g(s) dt, undoing dt = -u^-2 du at infinity."""
    c = form.coeff
    if v.is_infinite:
        return -c.shift(2)
    return c


def reconstruct_adelic(ad: AdelicForm, bounds=None) -> Reconstruction:
    """Rebuild a global form from one place and check it at the others."""
    places = ad.places()
    if not places:
        return Reconstruction(ad.default, None, ())
    finite = [v for v in places if not v.is_infinite]
    v0 = finite[0] if finite else places[0]
    g = form_coefficient_at(ad.support[v0], v0)
    if g.prec is None:
        g = g.truncate(max(g.hi, 0) + 32)
    try:
        r = rational_reconstruct(g, bounds or auto_bounds(g), v0)
    except PrecisionLoss:
        r = None
    if r is None:
        return Reconstruction(None, v0, ())
    checks = []
    for v in places:
        loc = ad.support[v]
        prec = loc.prec if loc.prec is not None else loc.coeff.hi + 1
        checks.append((v, local_form(r, v, prec) == loc))
    # unlisted places carry the default, so a global form must equal it
    checks.append((None, r == ad.default if ad.default is not None else r.is_zero()))
    return Reconstruction(r, v0, tuple(checks))
