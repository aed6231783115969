import numpy as np
import pytest

from diffbrauer.adelic import (AdelicForm, Failed, PassedAllTrials, Place, PlaceError, local_expand,
                               local_form, pair_multiplier, poles, rational_reconstruct,
                               reconstruct_adelic, residue_at, residue_sum, tate_global_test)
from diffbrauer.ff import get_field, rel_trace, trace
from diffbrauer.poly import Poly, RationalFunction, monic_irreducibles
from diffbrauer.series import DiffForm, LaurentSeries, residue

from conftest import SEED

L = LaurentSeries


def tfun(F):
    return RationalFunction.t(F)


def place(F, coeffs):
    return Place.finite(Poly.from_elems(F, coeffs))


def test_local_expand_examples():
    F3 = get_field(3)
    t = tfun(F3)
    v0 = place(F3, [0, 1])
    assert local_expand(t, v0, 3) == L.from_dict(F3, {1: 1}, 3)
    assert local_expand(1 / (1 - t), v0, 3) == L.from_dict(F3, {0: 1, 1: 1, 2: 1}, 3)
    v1 = place(F3, [-1, 1])
    e = local_expand(1 / (t - 1), v1, 4)
    assert e.terms() == {-1: F3.one()}
    inf = Place.infinity(F3)
    assert local_expand(t, inf, 3).terms() == {-1: F3.one()}


def test_valuation_matches_ord():
    F = get_field(2)
    rng = np.random.default_rng(SEED)
    places = [Place.infinity(F)] + [Place.finite(pi) for d in (1, 2, 3) for pi in monic_irreducibles(F, d)]
    for _ in range(30):
        num = Poly(F, rng.integers(0, 2, size=(5, 1)))
        den = Poly(F, rng.integers(0, 2, size=(4, 1)))
        if num.is_zero() or den.is_zero():
            continue
        r = RationalFunction(num, den)
        for v in places:
            assert local_expand(r, v, 6).valuation() == v.ord(r)


def test_residue_examples():
    F = get_field(3)
    t = tfun(F)
    v0, inf = place(F, [0, 1]), Place.infinity(F)
    assert residue_at(1 / t, v0) == F.one()
    assert residue_at(1 / t, inf) == -F.one()
    assert residue_at(1 / t, place(F, [1, 1])).is_zero()
    assert residue_at(RationalFunction.const(F, 1), inf).is_zero()
    assert residue_sum(1 / t).is_zero()
    F2 = get_field(2)
    t2 = tfun(F2)
    v = place(F2, [1, 1, 1])
    assert v.residue_field.q == 4
    assert residue_at(1 / (t2 ** 2 + t2 + 1), v) == v.residue_field.one()


@pytest.mark.parametrize("pk", [(2, 1), (3, 1), (5, 1), (2, 2)])
def test_reciprocity_random(pk):
    F = get_field(*pk)
    rng = np.random.default_rng(SEED + pk[0])
    irr = [pi for d in (1, 2, 3) for pi in monic_irreducibles(F, d)][:12]
    for _ in range(40):
        num = Poly(F, rng.integers(0, F.p, size=(int(rng.integers(1, 7)), F.k)))
        if num.is_zero():
            continue
        den = Poly.const(F, 1)
        for _ in range(int(rng.integers(1, 3))):
            den = den * irr[int(rng.integers(len(irr)))]
        f = RationalFunction(num, den)
        assert residue_sum(f).is_zero()
        for v in poles(f):
            assert trace(rel_trace(residue_at(f, v), F)) == trace(residue_at(f, v))


def test_place_errors():
    F = get_field(2)
    with pytest.raises(PlaceError):
        place(F, [0, 1, 1])  # t^2 + t is reducible
    with pytest.raises(PlaceError):
        place(F, [1, 0, 1])


def test_tate_examples():
    F = get_field(3)
    t = tfun(F)
    v0, inf = place(F, [0, 1]), Place.infinity(F)
    g = (t ** 2 + 1) / (t ** 3 - t)
    places = [v0, place(F, [1, 1]), place(F, [-1, 1]), inf]
    diag = AdelicForm.diagonal(g, places, 40)
    verdict = tate_global_test(diag, [1 / (t + 1), t ** 2 + t])
    assert isinstance(verdict, PassedAllTrials)
    assert verdict.evidence.ok and verdict.evidence.form == g

    single = AdelicForm(F, {v0: DiffForm(L.monomial(F, -1, 1, 30))}, None)
    verdict = tate_global_test(single, bound=0)
    assert isinstance(verdict, Failed) and verdict.value == 1
    assert verdict.witness == RationalFunction.const(F, 1)

    # dt/t at (t) and -du/u at infinity are both completions of the global dt/t,
    # so every monomial pairs to zero; 1/(t-1) sees the missing default.
    pair = AdelicForm(F, {v0: DiffForm(L.monomial(F, -1, 1, 30)),
                          inf: DiffForm(-L.monomial(F, -1, 1, 30))}, None)
    assert pair_multiplier(pair, RationalFunction.const(F, 1)) == 0
    assert pair_multiplier(pair, t) == 0
    assert isinstance(tate_global_test(pair), PassedAllTrials)
    verdict = tate_global_test(pair, [1 / (t - 1)])
    assert isinstance(verdict, Failed) and verdict.witness == 1 / (t - 1)


def test_rational_reconstruct_examples():
    F = get_field(3)
    t = tfun(F)
    s = local_expand(1 / (1 - t), place(F, [0, 1]), 10)
    assert rational_reconstruct(s, (0, 1)) == 1 / (1 - t)
    assert rational_reconstruct(L.zero(F, 10), (1, 1)).is_zero()
    # a non-rational window: coefficients of t^(2^i) style lacunary data
    lac = L.from_dict(F, {0: 1, 1: 1, 3: 1, 7: 1}, 12)
    assert rational_reconstruct(lac, (2, 2)) is None


@pytest.mark.parametrize("pk", [(2, 1), (3, 1), (2, 2)])
def test_reconstruct_roundtrip(pk):
    F = get_field(*pk)
    rng = np.random.default_rng(SEED)
    irr = [pi for d in (1, 2) for pi in monic_irreducibles(F, d)]
    for _ in range(25):
        num = Poly(F, rng.integers(0, F.p, size=(3, F.k)))
        if num.is_zero():
            continue
        den = irr[int(rng.integers(len(irr)))] * irr[int(rng.integers(len(irr)))]
        r = RationalFunction(num, den)
        v = irr[int(rng.integers(len(irr)))]
        pl = Place.finite(v)
        s = local_expand(r, pl, 16)
        assert rational_reconstruct(s, (4, 4), pl) == r
        ad = AdelicForm.diagonal(r, [pl, Place.infinity(F)], 24)
        rec = reconstruct_adelic(ad)
        assert rec.ok and rec.form == r
