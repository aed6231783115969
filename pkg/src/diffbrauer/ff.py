"""Finite fields F_{p^k} = F_p[w]/(m(w)) with trace, Frobenius and Artin-Schreier.

Elements are immutable :class:`FqElem` values holding their F_p-coordinate
vector in the power basis 1, w, ..., w^(k-1).  Every F_p-linear map a field
needs (Frobenius, its inverse, the absolute trace) is precomputed once per
:class:`FieldSpec` as an integer matrix, so the same maps also act on whole
coefficient arrays of series and polynomials.
"""
from __future__ import annotations

import functools
import itertools
import re

import numpy as np

from . import _linalg

SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)

# Lexicographically first monic irreducible (ordered by sum c_i p^i over the
# low coefficients), coefficients listed from the constant term up.
MODULI = {
    (2, 1): (0, 1), (2, 2): (1, 1, 1), (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1), (2, 5): (1, 0, 1, 0, 0, 1), (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (3, 1): (0, 1), (3, 2): (1, 0, 1), (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1), (3, 5): (1, 2, 0, 0, 0, 1), (3, 6): (2, 1, 0, 0, 0, 0, 1),
    (5, 1): (0, 1), (5, 2): (2, 0, 1), (5, 3): (1, 1, 0, 1),
    (5, 4): (2, 0, 0, 0, 1), (5, 5): (1, 4, 0, 0, 0, 1), (5, 6): (2, 1, 0, 0, 0, 0, 1),
    (7, 1): (0, 1), (7, 2): (1, 0, 1), (7, 3): (2, 0, 0, 1),
    (7, 4): (1, 1, 0, 0, 1), (7, 5): (3, 1, 0, 0, 0, 1), (7, 6): (2, 0, 0, 0, 0, 0, 1),
    (11, 1): (0, 1), (11, 2): (1, 0, 1), (11, 3): (4, 1, 0, 1),
    (11, 4): (2, 1, 0, 0, 1), (11, 5): (2, 0, 0, 0, 0, 1), (11, 6): (2, 1, 0, 0, 0, 0, 1),
    (13, 1): (0, 1), (13, 2): (2, 0, 1), (13, 3): (2, 0, 0, 1),
    (13, 4): (2, 0, 0, 0, 1), (13, 5): (2, 4, 0, 0, 0, 1), (13, 6): (2, 0, 0, 0, 0, 0, 1),
}

MAX_DEGREE = 24


class FieldError(ValueError):
    pass


class FieldMismatch(FieldError):
    pass


class NoEmbedding(FieldError):
    pass


# --- polynomials over F_p as int lists (low degree first), used for moduli ---

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = [c % p for c in a]
    _trim(a)
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = (a[-1] * inv) % p
        s = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[s + i] = (a[s + i] - c * mi) % p
        _trim(a)
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _pgcd(a, b, p):
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base, e, m, p):
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        while n % d == 0:
            if d not in out:
                out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_modp(m, p) -> bool:
    """Irreducibility of a polynomial over F_p.

    Trial division by every monic polynomial of degree <= k/2 for k <= 6;
    Rabin's test above that.
    """
    m = _trim([c % p for c in m])
    k = len(m) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    if k <= 6:
        for d in range(1, k // 2 + 1):
            for low in itertools.product(range(p), repeat=d):
                if not _pmod(m, list(low) + [1], p):
                    return False
        return True
    x = [0, 1]
    for r in _prime_factors(k):
        h = _ppowmod(x, p ** (k // r), m, p)
        if len(_pgcd(m, _psub(h, x, p), p)) > 1:
            return False
    return not _psub(_ppowmod(x, p ** k, m, p), x, p)


@functools.lru_cache(maxsize=None)
def default_modulus(p: int, k: int) -> tuple:
    if (p, k) in MODULI:
        return MODULI[(p, k)]
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        if is_irreducible_modp(low + [1], p):
            return tuple(low + [1])
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")  # pragma: no cover


class FieldSpec:
    """The field F_{p^k} presented as F_p[w]/(modulus).

    Two specs are interchangeable iff ``(p, k, modulus)`` agree; the generator
    name only affects printing.
    """

    def __init__(self, p: int, k: int = 1, modulus=None, var: str = "w"):
        if p not in SUPPORTED_PRIMES:
            raise FieldError(f"unsupported characteristic {p}; expected one of {SUPPORTED_PRIMES}")
        if not 1 <= k <= MAX_DEGREE:
            raise FieldError(f"extension degree {k} out of range 1..{MAX_DEGREE}")
        if modulus is None:
            modulus = default_modulus(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        if not is_irreducible_modp(list(modulus), p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.p, self.k, self.q = p, k, p ** k
        self.modulus = modulus
        self.var = var
        self._key = (p, k, modulus)
        self._build_tables()

    def _build_tables(self):
        p, k, m = self.p, self.k, list(self.modulus)
        rows = max(2 * k - 1, 1)
        red = np.zeros((rows, k), dtype=np.int64)
        for i in range(rows):
            r = _pmod([0] * i + [1], m, p)
            red[i, :len(r)] = r
        self.red = red
        frob = np.zeros((k, k), dtype=np.int64)
        for i in range(k):
            r = _ppowmod([0] * i + [1], p, m, p)
            frob[i, :len(r)] = r
        self.frob = frob
        root = np.eye(k, dtype=np.int64)
        for _ in range(k - 1):
            root = (root @ frob) % p
        self.root = root
        tr = np.zeros(k, dtype=np.int64)
        power = np.eye(k, dtype=np.int64)
        for _ in range(k):
            tr = (tr + power[:, 0]) % p
            power = (power @ frob) % p
        # Tr(w^i) lies in F_p: only the constant coordinate is summed.
        self.trace_vec = tr
        self._red_rows = [[int(c) for c in row] for row in red]

    # identity -------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"FieldSpec({self.descriptor()})"

    def descriptor(self) -> str:
        return f"gf({self.p},{self.k},{modulus_to_str(self.modulus, self.var)})"

    # elements ---------------------------------------------------------------
    def elem(self, rep) -> FqElem:
        if isinstance(rep, FqElem):
            if rep.spec != self:
                raise FieldMismatch(f"{rep.spec} vs {self}")
            return rep
        if isinstance(rep, (int, np.integer)):
            return FqElem(self, (int(rep) % self.p,) + (0,) * (self.k - 1))
        return FqElem(self, rep)

    def zero(self) -> FqElem:
        return self.elem(0)

    def one(self) -> FqElem:
        return self.elem(1)

    def gen(self) -> FqElem:
        if self.k == 1:
            return self.elem(-self.modulus[0])
        return FqElem(self, (0, 1) + (0,) * (self.k - 2))

    def from_code(self, code: int) -> FqElem:
        return FqElem(self, tuple((code // self.p ** i) % self.p for i in range(self.k)))

    def elements(self):
        for code in range(self.q):
            yield self.from_code(code)

    # array-level maps (rows are coordinate vectors) -------------------------
    def reduce(self, wide: np.ndarray) -> np.ndarray:
        """Reduce arrays of w-degree < 2k-1 to canonical coordinates."""
        width = wide.shape[-1]
        return ((wide % self.p) @ self.red[:width]) % self.p

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product of equal-shape coordinate arrays (..., k)."""
        k = self.k
        wide = np.zeros(a.shape[:-1] + (max(2 * k - 1, 1),), dtype=np.int64)
        for i in range(k):
            wide[..., i:i + k] += a[..., i:i + 1] * b
        return self.reduce(wide)

    def scale_arrays(self, c: FqElem, a: np.ndarray) -> np.ndarray:
        return (a @ self.mult_matrix(c)) % self.p

    def mult_matrix(self, c: FqElem) -> np.ndarray:
        """F_p-matrix M with row-vector x @ M = coordinates of x * c."""
        k = self.k
        wide = np.zeros((k, max(2 * k - 1, 1)), dtype=np.int64)
        rep = np.array(c.rep, dtype=np.int64)
        for i in range(k):
            wide[i, i:i + k] = rep
        return self.reduce(wide)

    def frob_arrays(self, a: np.ndarray, times: int = 1) -> np.ndarray:
        for _ in range(times % self.k if self.k > 1 else 0):
            a = (a @ self.frob) % self.p
        return a % self.p

    def root_arrays(self, a: np.ndarray, times: int = 1) -> np.ndarray:
        for _ in range(times % self.k if self.k > 1 else 0):
            a = (a @ self.root) % self.p
        return a % self.p

    def trace_arrays(self, a: np.ndarray) -> np.ndarray:
        return (a @ self.trace_vec) % self.p


def modulus_to_str(modulus, var="w") -> str:
    terms = []
    for i in range(len(modulus) - 1, -1, -1):
        c = modulus[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return "+".join(terms) if terms else "0"


_DESC = re.compile(r"^\s*(?:gf|GF)\s*\(\s*(\d+)\s*(?:,\s*(\d+)\s*(?:,\s*(.+?)\s*)?)?\)\s*$")
_TERM = re.compile(r"^(?:(\d+)\*?)?(?:([A-Za-z_]\w*)(?:\^(\d+))?)?$")


def parse_field(text: str) -> FieldSpec:
    """Parse ``gf(p)``, ``gf(p,k)`` or ``gf(p,k,w^2+w+1)``."""
    m = _DESC.match(text)
    if not m:
        raise FieldError(f"bad field descriptor {text!r}; expected gf(p,k,modulus)")
    p = int(m.group(1))
    k = int(m.group(2)) if m.group(2) else 1
    if not m.group(3):
        return get_field(p, k)
    body = m.group(3).replace(" ", "").replace("-", "+-")
    coeffs = [0] * (k + 1)
    var = None
    for term in filter(None, body.split("+")):
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:]
        tm = _TERM.match(term)
        if not tm or not term:
            raise FieldError(f"bad modulus term {term!r}")
        c = int(tm.group(1)) if tm.group(1) else 1
        if tm.group(2):
            if var is None:
                var = tm.group(2)
            elif var != tm.group(2):
                raise FieldError("modulus uses two variable names")
            e = int(tm.group(3)) if tm.group(3) else 1
        else:
            e = 0
        if e > k:
            raise FieldError(f"modulus degree exceeds k={k}")
        coeffs[e] = (coeffs[e] + sign * c) % p
    return get_field(p, k, tuple(coeffs), var or "w")


@functools.lru_cache(maxsize=None)
def get_field(p: int, k: int = 1, modulus=None, var: str = "w") -> FieldSpec:
    """Interned constructor; identical arguments return the same spec object."""
    return FieldSpec(p, k, modulus, var)


class FqElem:
    """Immutable element of a :class:`FieldSpec`."""

    __slots__ = ("spec", "rep")

    def __init__(self, spec: FieldSpec, rep):
        rep = tuple(int(c) % spec.p for c in rep)
        if len(rep) != spec.k:
            raise FieldError(f"expected {spec.k} coordinates, got {len(rep)}")
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "rep", rep)

    def __setattr__(self, *_):
        raise AttributeError("FqElem is immutable")

    def _coerce(self, other):
        if isinstance(other, FqElem):
            if other.spec != self.spec:
                raise FieldMismatch(f"{self.spec} vs {other.spec}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.spec.elem(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FqElem(self.spec, [a + b for a, b in zip(self.rep, o.rep)])

    __radd__ = __add__

    def __neg__(self):
        return FqElem(self.spec, [-a for a in self.rep])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FqElem(self.spec, [a - b for a, b in zip(self.rep, o.rep)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        spec = self.spec
        k, p = spec.k, spec.p
        if k == 1:
            return FqElem(spec, (self.rep[0] * o.rep[0],))
        wide = [0] * (2 * k - 1)
        for i, a in enumerate(self.rep):
            if a:
                for j, b in enumerate(o.rep):
                    wide[i + j] += a * b
        out = [0] * k
        red = spec._red_rows
        for i, c in enumerate(wide):
            c %= p
            if c:
                row = red[i]
                for j in range(k):
                    out[j] += c * row[j]
        return FqElem(spec, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.spec.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.spec.k == 1:
            return FqElem(self.spec, (pow(self.rep[0], -1, self.spec.p),))
        return self ** (self.spec.q - 2)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.rep == self.spec.elem(int(other)).rep
        return isinstance(other, FqElem) and self.spec == other.spec and self.rep == other.rep

    def __hash__(self):
        return hash((self.spec, self.rep))

    def __lt__(self, other):
        return self.rep < other.rep

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self) -> bool:
        return not any(self.rep)

    @property
    def code(self) -> int:
        return sum(c * self.spec.p ** i for i, c in enumerate(self.rep))

    def as_array(self) -> np.ndarray:
        return np.array(self.rep, dtype=np.int64)

    def frobenius(self, times: int = 1) -> FqElem:
        return FqElem(self.spec, self.spec.frob_arrays(self.as_array(), times))

    def pth_root(self) -> FqElem:
        return pth_root(self)

    def trace(self) -> int:
        return trace(self)

    def in_prime_field(self) -> bool:
        return not any(self.rep[1:])

    def __int__(self):
        if not self.in_prime_field():
            raise ValueError(f"{self} is not in the prime field")
        return self.rep[0]

    def __repr__(self):
        return f"FqElem({self})"

    def __str__(self):
        return format_elem(self)


def format_elem(a: FqElem) -> str:
    var = a.spec.var
    terms = []
    for i in range(len(a.rep) - 1, -1, -1):
        c = a.rep[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms) if terms else "0"


def trace(a: FqElem) -> int:
    """Absolute trace Tr_{F_q/F_p}(a) = sum of the conjugates a^(p^i)."""
    return int(np.dot(a.as_array(), a.spec.trace_vec) % a.spec.p)


def pth_root(a: FqElem) -> FqElem:
    """The unique b with b^p = a, i.e. a^(p^(k-1))."""
    return FqElem(a.spec, a.spec.root_arrays(a.as_array()))


def sqrt(a: FqElem):
    """A square root of ``a`` (the smaller of +-b by ``rep``), or None."""
    spec = a.spec
    if a.is_zero():
        return a
    if spec.p == 2:
        return a ** (spec.q // 2)
    q = spec.q
    if a ** ((q - 1) // 2) != 1:
        return None
    s, odd = 0, q - 1
    while odd % 2 == 0:
        odd //= 2
        s += 1
    z = next(x for x in spec.elements() if not x.is_zero() and x ** ((q - 1) // 2) != 1)
    m, c, t, r = s, z ** odd, a ** odd, a ** ((odd + 1) // 2)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2
            i += 1
        b = c ** (2 ** (m - i - 1))
        m, c = i, b * b
        t, r = t * c, r * b
    return min(r, -r)


@functools.lru_cache(maxsize=None)
def _as_matrix(spec: FieldSpec) -> np.ndarray:
    return (spec.frob - np.eye(spec.k, dtype=np.int64)) % spec.p


def artin_schreier_solve(a: FqElem):
    """Solve x^p - x = a in F_q; None when Tr(a) != 0.

    Solutions form a coset of F_p; the one returned has zero constant
    coordinate, which is the lexicographically smallest by ``rep``.
    """
    spec = a.spec
    if trace(a) != 0:
        return None
    lin = _as_matrix(spec)
    x = _linalg.solve(lin.T, a.as_array(), spec.p)
    if x is None:  # pragma: no cover - excluded by the trace test
        return None
    x[0] = 0
    return FqElem(spec, x)


# --- towers ----------------------------------------------------------------

_EMBED_CACHE: dict = {}


def _embedding_matrix(source: FieldSpec, target: FieldSpec) -> np.ndarray:
    key = (source, target)
    if key in _EMBED_CACHE:
        return _EMBED_CACHE[key]
    if source.p != target.p or target.k % source.k:
        raise NoEmbedding(f"{source} does not embed in {target}")
    if source.k == 1:
        mat = np.zeros((1, target.k), dtype=np.int64)
        mat[0, 0] = 1
    else:
        from .poly import Poly
        m = Poly(target, np.array([[c] + [0] * (target.k - 1) for c in source.modulus]))
        roots = m.roots()
        if not roots:  # pragma: no cover - finite fields always split here
            raise NoEmbedding(f"modulus of {source} has no root in {target}")
        theta = min(roots)
        mat = np.zeros((source.k, target.k), dtype=np.int64)
        power = target.one()
        for i in range(source.k):
            mat[i] = power.rep
            power = power * theta
    _EMBED_CACHE[key] = mat
    return mat


def embed(a: FqElem, target: FieldSpec) -> FqElem:
    """Field homomorphism F_q -> F_{q^d} sending w to the smallest root of m."""
    if a.spec == target:
        return a
    mat = _embedding_matrix(a.spec, target)
    return FqElem(target, (a.as_array() @ mat) % target.p)


def embed_arrays(arr: np.ndarray, source: FieldSpec, target: FieldSpec) -> np.ndarray:
    if source == target:
        return arr
    return (arr @ _embedding_matrix(source, target)) % target.p


def rel_trace(a: FqElem, base: FieldSpec) -> FqElem:
    """Tr_{F_{q^d}/F_q}(a) returned as an element of ``base``."""
    big = a.spec
    if big == base:
        return a
    mat = _embedding_matrix(base, big)
    d = big.k // base.k
    total = np.zeros(big.k, dtype=np.int64)
    cur = a.as_array()
    for _ in range(d):
        total = (total + cur) % big.p
        cur = big.frob_arrays(cur, base.k)
    x = _linalg.solve(mat.T, total, big.p)
    if x is None:  # pragma: no cover - trace always lands in the subfield
        raise FieldError("relative trace left the base field")
    return FqElem(base, x)


def restrict(a: FqElem, base: FieldSpec):
    """Preimage of ``a`` under the embedding of ``base``, or None."""
    if a.spec == base:
        return a
    mat = _embedding_matrix(base, a.spec)
    x = _linalg.solve(mat.T, a.as_array(), a.spec.p)
    if x is None:
        return None
    return FqElem(base, x)
