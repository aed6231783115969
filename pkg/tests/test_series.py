import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diffbrauer.ff import get_field
from diffbrauer.poly import Poly, RationalFunction
from diffbrauer.series import (DiffForm, LaurentSeries, NotExact, PrecisionLoss, d, derivative,
                               dlog, expand_at, integrate, p_power_decompose, recompose, residue)

from conftest import SEED, field_of, naive_mul, rand_series, rand_unit

L = LaurentSeries


def ser(F, terms, prec=None):
    return L.from_dict(F, terms, prec)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 9])
def test_product_matches_naive(q):
    F = field_of(q)
    rng = np.random.default_rng(SEED + q)
    for _ in range(40):
        a = rand_series(rng, F, lo=int(rng.integers(-5, 5)), width=int(rng.integers(1, 10)))
        b = rand_series(rng, F, lo=int(rng.integers(-5, 5)), width=int(rng.integers(1, 10)))
        assert (a * b).prec == naive_mul(a, b).prec
        assert (a * b).terms() == naive_mul(a, b).terms()


@pytest.mark.parametrize("q", [2, 3, 4, 5, 9])
def test_decompose_recompose(q):
    F = field_of(q)
    rng = np.random.default_rng(SEED)
    for _ in range(200):
        f = rand_series(rng, F, lo=int(rng.integers(-7, 3)), width=int(rng.integers(1, 20)))
        parts = p_power_decompose(f)
        for i, g in enumerate(parts):
            assert g.prec == -((i - f.prec) // F.p)
        back = recompose(parts)
        assert back == f and back.prec == f.prec


def test_decompose_examples():
    F2, F3 = get_field(2), get_field(3)
    g0, g1 = p_power_decompose(ser(F2, {2: 1, 3: 1}, 8))
    assert g0.terms() == {1: F2.one()} and g1.terms() == {1: F2.one()}
    parts = p_power_decompose(ser(F3, {-1: 1}, 6))
    assert parts[2].terms() == {-1: F3.one()}
    assert parts[0].is_zero() and parts[1].is_zero()
    parts = p_power_decompose(L.one(F3, 9))
    assert parts[0].terms() == {0: F3.one()}


def test_derivative_examples():
    F3, F5 = get_field(3), get_field(5)
    assert derivative(L.monomial(F3, 3, 1, 10)).is_zero()
    assert derivative(L.monomial(F3, 2, 1)).terms() == {1: F3.elem(2)}
    assert derivative(ser(F5, {0: 1, 1: 2}, 10)).prec == 9
    t = RationalFunction.t(F5)
    assert derivative(1 / t) == -1 / t ** 2


def test_residue_examples():
    F5 = get_field(5)
    assert residue(DiffForm(L.monomial(F5, -1))) == F5.one()
    assert residue(DiffForm(L.one(F5, 8))) == F5.zero()
    assert residue(DiffForm(ser(F5, {-2: 1, -1: 3}, 4))) == F5.elem(3)
    with pytest.raises(PrecisionLoss):
        residue(DiffForm(ser(F5, {-4: 1}, -2)))


def test_integrate_examples():
    F2, F3 = get_field(2), get_field(3)
    assert integrate(L.zero(F3)).is_zero()
    assert integrate(L.t(F3)).terms() == {2: F3.elem(2)}
    with pytest.raises(NotExact) as exc:
        integrate(L.monomial(F2, -1))
    assert exc.value.exponent == -1


def test_expand_examples():
    F3 = get_field(3)
    t = RationalFunction.t(F3)
    assert expand_at(t, F3.zero(), 3) == ser(F3, {1: 1}, 3)
    assert expand_at(1 / (1 - t), F3.zero(), 3) == ser(F3, {0: 1, 1: 1, 2: 1}, 3)
    e = expand_at(1 / t, F3.zero(), 2)
    assert e.terms() == {-1: F3.one()} and e.prec == 2


@pytest.mark.parametrize("q", [2, 3, 4, 5, 9, 25])
def test_inverse_and_division(q):
    F = field_of(q)
    rng = np.random.default_rng(SEED)
    for _ in range(30):
        u = rand_unit(rng, F, width=8)
        inv = u.inverse()
        one = u * inv
        assert one.agrees_with(L.one(F)) and one.prec == u.prec - u.lo
        exact = L(F, u.lo, u.c)
        q_ = exact.divide(exact, 20)
        assert q_ == L.one(F, 20)


@pytest.mark.parametrize("q", [2, 3, 5, 9])
def test_exact_properties(q):
    F = field_of(q)
    rng = np.random.default_rng(SEED + 1)
    for _ in range(100):
        f = rand_series(rng, F, lo=int(rng.integers(-6, 4)), width=12)
        df = derivative(f)
        if df.prec > -1:
            assert residue(DiffForm(df)) == F.zero()
        assert derivative(f.frobenius()).is_zero()
        try:
            g = integrate(f)
        except NotExact as exc:
            assert (exc.exponent + 1) % F.p == 0
        else:
            assert derivative(g) == f


def test_precision_contract_double_window():
    """A product computed at twice the input window agrees on the contractual window."""
    F = get_field(3, 2)
    rng = np.random.default_rng(SEED)
    for _ in range(50):
        a_full = rand_series(rng, F, lo=-2, width=24)
        b_full = rand_series(rng, F, lo=-1, width=24)
        a, b = a_full.truncate(a_full.lo + 12), b_full.truncate(b_full.lo + 12)
        small, big = a * b, a_full * b_full
        assert big.truncate(small.prec) == small
        if small.c.shape[0]:
            inv = small.inverse()
            assert big.inverse().truncate(inv.prec) == inv


def test_zero_series_semantics():
    F = get_field(2)
    z = L.zero(F, 5)
    assert z.lo == 5 and z.is_zero()
    assert ser(F, {7: 1}, 5) == z
    assert L(F, 0, [[0], [0]], 3) == L.zero(F, 3)


def test_dlog_and_d():
    F = get_field(5)
    rng = np.random.default_rng(SEED)
    u = rand_unit(rng, F)
    w = dlog(u)
    assert residue(w) == F.elem(u.valuation())
    assert d(u.frobenius()).is_zero()
    t = RationalFunction.t(F)
    assert dlog(t * t).coeff == 2 / t


F4 = get_field(2, 2)


@settings(max_examples=200, deadline=None)
@given(st.integers(-5, 5), st.lists(st.integers(0, 3), min_size=1, max_size=10),
       st.lists(st.integers(0, 3), min_size=1, max_size=10))
def test_ring_laws(lo, a, b):
    A = L.from_elems(F4, lo, [F4.from_code(c) for c in a], lo + len(a))
    B = L.from_elems(F4, 0, [F4.from_code(c) for c in b], len(b))
    assert A * B == B * A
    assert (A + B) - B == A
    assert derivative(A * B) == derivative(A) * B + A * derivative(B)
    assert (A * B).frobenius() == A.frobenius() * B.frobenius()
    assert A ** 2 == A * A
