"""Acceptance criteria 1-9, each at its stated sample size, window and time limit.

Every criterion prints one line ``[PASS|FAIL] <id> <title> (<seconds>s) <detail>``;
pytest also repeats the lines in its terminal summary.  Run directly with
``python3 tests/test_acceptance.py`` for the lines alone.
"""
from __future__ import annotations

import itertools
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from diffbrauer.adelic import Place, residue_sum
from diffbrauer.bm import (AbsoluteForm, AdelicPoint, LocalPoint, Obstructed, UnobstructedEvidence,
                           bm_pairing, check_theorem1, d_n_absolute, legendre_check)
from diffbrauer.adelic import PassedAllTrials, default_trials
from diffbrauer.brauer_local import (local_invariant, one_minus_c, pairing_alpha_p, pairing_level_n,
                                     same_class, solve_one_minus_c)
from diffbrauer.cartier import bn_decompose, bn_member, cartier, cartier_inverse, cartier_power
from diffbrauer.ff import get_field
from diffbrauer.poly import Poly, RationalFunction, monic_irreducibles
from diffbrauer.series import DiffForm, LaurentSeries, NotExact, d, dlog, integrate
from diffbrauer.witt import WittVector, d_n, invert_dn, witt_add, witt_frobenius, witt_mul

from bm_cases import (DEVIATING_WITNESS_EXP, a1_patch, deviating_fixture, diagonal_a1,
                      diagonal_legendre, lacunary, rand_mpoly)
from conftest import SEED, field_of

L = LaurentSeries
PREC = 64
RESULTS: list = []


class Check:
    """Collects failures for one criterion and reports a single line."""

    def __init__(self, cid: str, title: str, limit: float | None = None):
        self.cid, self.title, self.limit = cid, title, limit
        self.failures: list = []
        self.counts: dict = {}

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def count(self, key, n=1):
        self.counts[key] = self.counts.get(key, 0) + n

    def expect(self, cond, what):
        if not cond:
            self.failures.append(what)

    def __exit__(self, exc_type, exc, tb):
        self.elapsed = time.perf_counter() - self.t0
        if exc is not None:
            self.failures.append(f"raised {exc_type.__name__}: {exc}")
        if self.limit is not None and self.elapsed >= self.limit:
            self.failures.append(f"took {self.elapsed:.2f}s, limit {self.limit}s")
        ok = not self.failures
        detail = ", ".join(f"{k}={v}" for k, v in self.counts.items())
        if not ok:
            detail += " | " + "; ".join(self.failures[:3])
        limit = f" < {self.limit}s" if self.limit else ""
        line = f"[{'PASS' if ok else 'FAIL'}] {self.cid} {self.title} ({self.elapsed:.2f}s{limit}) {detail}"
        RESULTS.append(line)
        print(line, flush=True)
        return True  # failures are reported through self.failures

    @property
    def ok(self):
        return not self.failures


def rand_form(rng, F, lo_range=(-10, 5), prec=PREC):
    lo = int(rng.integers(*lo_range))
    return DiffForm(L(F, lo, rng.integers(0, F.p, size=(prec - lo, F.k)), prec))


def rand_unit(rng, F, prec=PREC):
    c = rng.integers(0, F.p, size=(prec, F.k))
    while not c[0].any():
        c[0] = rng.integers(0, F.p, size=F.k)
    e = int(rng.integers(-5, 6))
    return L(F, e, c, e + prec)


# --- 1 -------------------------------------------------------------------------

def criterion_1():
    with Check("AC1", "Cartier round trip C(C^-1 w) = w, 1000 forms x 6 fields", 5.0) as chk:
        for q in (2, 3, 4, 5, 9, 25):
            F = field_of(q)
            rng = np.random.default_rng(SEED + q)
            for _ in range(1000):
                w = rand_form(rng, F)
                back = cartier(cartier_inverse(w))
                chk.expect(back == w and back.prec == w.prec, f"q={q} mismatch")
                chk.count("forms")
    return chk


# --- 2 -------------------------------------------------------------------------

def criterion_2():
    with Check("AC2", "ker C = exact forms, C fixes dlog forms") as chk:
        rng = np.random.default_rng(SEED)
        for i in range(1000):
            F = field_of((2, 3, 4, 5, 9, 25)[i % 6])
            f = rand_form(rng, F).coeff
            chk.expect(cartier(d(f)).is_zero(), "C(df) != 0")
            chk.count("C(df)")
        for i in range(500):
            F = field_of((2, 3, 4, 5, 9, 25)[i % 6])
            w = dlog(rand_unit(rng, F))
            chk.expect(cartier(w) == w, "C(dlog u) != dlog u")
            chk.count("dlog")
        for p in (2, 3):
            F = get_field(p)
            for width in range(1, 7):
                for lo in range(-width - 2, 2):
                    for cs in itertools.product(range(p), repeat=width):
                        if not cs[0]:
                            continue
                        w = DiffForm(L(F, lo, np.array(cs).reshape(-1, 1)))
                        try:
                            g = integrate(w.coeff)
                            exact = d(g) == w
                        except NotExact:
                            exact = False
                        chk.expect(cartier(w).is_zero() == exact, f"p={p} {cs}@{lo}")
                        chk.count("exhaustive")
    return chk


# --- 3 -------------------------------------------------------------------------

def criterion_3():
    with Check("AC3", "solve_one_minus_c succeeds iff invariant 0; invariant onto F_p", 30.0) as chk:
        for q in (2, 3, 4):
            F = field_of(q)
            seen = set()
            for lo in range(-4, 1):
                for codes in itertools.product(range(q), repeat=4):
                    w = DiffForm(L.from_elems(F, lo, [F.from_code(c) for c in codes], 12))
                    inv = local_invariant(w).value
                    seen.add(inv)
                    sol = solve_one_minus_c(w)
                    chk.expect((sol is not None) == (inv == 0), f"q={q} iff fails")
                    if sol is not None:
                        chk.expect(one_minus_c(sol) == w, f"q={q} (1-C)(sol) != w")
                    chk.count(f"F_{q}")
            chk.expect(seen == set(range(F.p)), f"q={q} invariant not surjective: {seen}")
    return chk


# --- 4 -------------------------------------------------------------------------

def _rand_witt(rng, F, n):
    return WittVector([L(F, int(rng.integers(-3, 2)), rng.integers(0, F.p, size=(6, 1)))
                       for _ in range(n)])


def criterion_4():
    with Check("AC4", "C^n d_n = 0, d_n invert_dn = id, additivity, Leibniz, d_n F = 0") as chk:
        for p, n in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)]:
            F = get_field(p)
            rng = np.random.default_rng(SEED + 10 * p + n)
            q = p ** (n - 1)
            for _ in range(500):
                a, b = _rand_witt(rng, F, n), _rand_witt(rng, F, n)
                da, db = d_n(a), d_n(b)
                chk.expect(cartier_power(da, n).is_zero(), f"C^{n} d_{n} != 0")
                chk.expect(d_n(invert_dn(da, n)) == da, "d_n invert_dn != id")
                chk.expect(d_n(witt_add(a, b)) == da + db, "additivity")
                chk.expect(d_n(witt_mul(a, b)) == da * (b[0] ** q) + db * (a[0] ** q), "Leibniz")
                chk.expect(d_n(witt_frobenius(a)).is_zero(), "d_n F != 0")
                chk.count(f"p{p}n{n}")
    return chk


# --- 5 -------------------------------------------------------------------------

def criterion_5():
    with Check("AC5", "global reciprocity, 500 rational forms per q in {2,3,5}", 10.0) as chk:
        for q in (2, 3, 5):
            F = get_field(q)
            rng = np.random.default_rng(SEED + q)
            irr = [pi for deg in (1, 2, 3) for pi in monic_irreducibles(F, deg)]
            high = 0
            for _ in range(500):
                num = Poly(F, rng.integers(0, q, size=(int(rng.integers(1, 8)), 1)))
                if num.is_zero():
                    num = Poly.const(F, 1)
                den, deg = Poly.const(F, 1), 0
                while True:
                    pi = irr[int(rng.integers(len(irr)))]
                    if deg + pi.deg > 6:
                        break
                    den, deg = den * pi, deg + pi.deg
                    high += pi.deg > 1
                    if rng.random() < 0.4:
                        break
                f = RationalFunction(num, den)
                chk.expect(residue_sum(f).is_zero(), f"q={q}: {f}")
                chk.count("forms")
            chk.expect(high > 0, "no higher-degree places sampled")
            chk.count("deg>1 poles", high)
    return chk


# --- 6 -------------------------------------------------------------------------

def criterion_6():
    with Check("AC6", "obstruction check: diagonal points, deviating fixture, level invariance") as chk:
        rng = np.random.default_rng(SEED)
        for i in range(50):
            F = get_field((2, 3)[i % 2])
            omega, A = diagonal_a1(rng, F, int(rng.integers(0, 2)))
            v = check_theorem1(omega, A, bound=6)
            chk.expect(isinstance(v, (UnobstructedEvidence, PassedAllTrials)), f"A1 #{i}: {v}")
            chk.count("A1")
        for i in range(50):
            F = get_field((5, 7)[i % 2])
            omega, A = diagonal_legendre(rng, F, int(rng.integers(0, 2)), prec=48)
            v = check_theorem1(omega, A, bound=6)
            chk.expect(isinstance(v, (UnobstructedEvidence, PassedAllTrials)), f"Legendre #{i}: {v}")
            chk.count("Legendre")
        omega, A = deviating_fixture()
        v = check_theorem1(omega, A)
        t = RationalFunction.t(A.patch.base)
        chk.expect(isinstance(v, Obstructed) and v.witness == t ** DEVIATING_WITNESS_EXP,
                   f"fixture verdict {v}")
        for p, n in [(2, 1), (2, 2), (3, 1), (3, 2)]:
            F = get_field(p)
            pl = Place.finite(Poly.x(F))
            pt = AdelicPoint(a1_patch(F), {pl: LocalPoint(pl, [lacunary(F, 6, 160)])},
                             [RationalFunction.const(F, 0)])
            for _ in range(5):
                w = AbsoluteForm([rand_mpoly(rng, F, 1)], rand_mpoly(rng, F, 1), n)
                moved = w + d_n_absolute([rand_mpoly(rng, F, 1, deg=1, tdeg=1) for _ in range(n)])
                for m in default_trials(F, 3):
                    chk.expect(bm_pairing(w, pt, m, n) == bm_pairing(moved, pt, m, n),
                               f"level {n} p={p} pairing moved")
                    chk.count("invariance")
    return chk


# --- 7 -------------------------------------------------------------------------

def criterion_7():
    with Check("AC7", "Legendre identity for p = 5, 7, 11 with one sign", 5.0) as chk:
        eps = set()
        for p in (5, 7, 11):
            rep = legendre_check(p)
            chk.expect(rep.relation_ok and rep.identity, f"p={p} symbolic identity")
            chk.expect(rep.series_agree and rep.series_window >= 32, f"p={p} series window {rep.series_window}")
            eps.add(rep.epsilon)
            chk.count(f"eps{p}", rep.epsilon)
        chk.expect(len(eps) == 1, f"sign differs across p: {eps}")
    return chk


# --- 8 -------------------------------------------------------------------------

def criterion_8():
    with Check("AC8", "pairing alternates mod B_1; level-2 bilinearity mod B_2") as chk:
        rng = np.random.default_rng(SEED)
        for i in range(500):
            F = field_of((2, 3, 4, 5, 9)[i % 5])
            f, g = rand_form(rng, F, (-6, 3)).coeff, rand_form(rng, F, (-6, 3)).coeff
            s = pairing_alpha_p(f, g).form + pairing_alpha_p(g, f).form
            chk.expect(bool(bn_member(s, 1)), "alternation")
            chk.count("pairs")
        F = get_field(2)
        for _ in range(100):
            f, g, h = (_rand_witt(rng, F, 2) for _ in range(3))
            lhs = pairing_level_n(f, witt_add(g, h)).form
            rhs = pairing_level_n(f, g).form + pairing_level_n(f, h).form
            chk.expect(same_class(lhs.truncate(PREC), rhs.truncate(PREC), 2), "bilinearity")
            lhs = pairing_level_n(witt_add(g, h), f).form
            rhs = pairing_level_n(g, f).form + pairing_level_n(h, f).form
            chk.expect(same_class(lhs.truncate(PREC), rhs.truncate(PREC), 2), "bilinearity (left)")
            chk.count("witt pairs")
    return chk


# --- 9 -------------------------------------------------------------------------

def criterion_9():
    with Check("AC9", "B_n decomposition recomposes; h unique") as chk:
        for q, n in itertools.product((2, 3, 4), (1, 2)):
            F = field_of(q)
            rng = np.random.default_rng(SEED + 7 * q + n)
            for _ in range(500):
                w = rand_form(rng, F, (-12, 3))
                dec = bn_decompose(w, n)
                back = dec.recompose()
                chk.expect(back == w and back.prec == w.prec, f"q={q} n={n} recomposition")
                chk.expect(bn_decompose(back, n).h == dec.h, f"q={q} n={n} h not unique")
                chk.count(f"q{q}n{n}")
    return chk


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"AC{i}" for i in range(1, 10)])
def test_acceptance(criterion):
    chk = criterion()
    assert chk.ok, chk.failures[:5]


if __name__ == "__main__":
    failed = sum(not c().ok for c in CRITERIA)
    sys.exit(1 if failed else 0)
