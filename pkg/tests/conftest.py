import os

import numpy as np
import pytest

from diffbrauer.ff import get_field
from diffbrauer.series import DiffForm, LaurentSeries

SEED = int(os.environ.get("DIFFBRAUER_SEED", "20240611"))

FIELDS = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 9: (3, 2), 25: (5, 2)}


def field_of(q):
    p, k = FIELDS[q]
    return get_field(p, k)


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def rand_series(rng, F, lo=-4, width=12, prec=None, exact=False):
    c = rng.integers(0, F.p, size=(width, F.k))
    if exact:
        return LaurentSeries(F, lo, c)
    return LaurentSeries(F, lo, c, lo + width if prec is None else prec)


def rand_form(rng, F, **kw):
    return DiffForm(rand_series(rng, F, **kw))


def rand_unit(rng, F, width=10, prec=None):
    c = rng.integers(0, F.p, size=(width, F.k))
    while not c[0].any():
        c[0] = rng.integers(0, F.p, size=F.k)
    e = int(rng.integers(-3, 4))
    return LaurentSeries(F, e, c, e + width if prec is None else prec)


def naive_mul(a, b):
    """Dict-based product used as an oracle for the convolution kernels."""
    F = a.field
    out = {}
    for i, x in a.terms().items():
        for j, y in b.terms().items():
            out[i + j] = out.get(i + j, F.zero()) + x * y
    prec = None
    if a.prec is not None or b.prec is not None:
        cands = []
        if a.prec is not None:
            cands.append(a.prec + (b.valuation() if not b.is_zero() else b.prec or 0))
        if b.prec is not None:
            cands.append(b.prec + (a.valuation() if not a.is_zero() else a.prec or 0))
        prec = min(cands)
    return LaurentSeries.from_dict(F, {e: c for e, c in out.items() if prec is None or e < prec}, prec)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
