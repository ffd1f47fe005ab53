"""Exact scalars: the rationals and small finite fields, commutative
polynomials over them, and exact rank."""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

MAX_FIELD_SIZE = 97
MAX_EXTENSION_DEGREE = 3

# Pinned moduli, low-degree coefficient first (t^2+t+1 -> (1, 1, 1)).
MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 0, 1),
    (7, 2): (1, 0, 1),
}


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_power(n: int):
    """Return (p, k) with n = p^k, or None."""
    for p in range(2, n + 1):
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            return (p, k) if n == 1 else None
    return None


def _poly_has_root(coeffs, p: int) -> bool:
    for x in range(p):
        v = 0
        for c in reversed(coeffs):
            v = (v * x + c) % p
        if v == 0:
            return True
    return False


def is_irreducible_small(coeffs, p: int) -> bool:
    """Irreducibility over GF(p) of a monic polynomial of degree 2 or 3
    (no roots is enough in these degrees)."""
    deg = len(coeffs) - 1
    if deg not in (2, 3) or coeffs[-1] % p != 1:
        raise FieldError("only monic quadratics and cubics are supported")
    return not _poly_has_root(coeffs, p)


class Field:
    """A field: Q, or GF(q) with q = p^k.

    Rationals are `Fraction`s.  Finite-field elements are ints in
    range(q); for k > 1 the base-p digits of the int are the coefficients
    of a polynomial in t (lowest degree first) reduced by the modulus.
    """

    def __init__(self, p: int | None = None, k: int = 1):
        self.p = p
        self.k = k
        if p is None:
            self.q = None
            self.modulus = None
            self.name = "Q"
            return
        self.q = p ** k
        self.modulus = MODULI.get((p, k)) if k > 1 else None
        self.name = f"GF({self.q})"
        self._build_tables()

    # identity / hashing
    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    def __repr__(self):
        return self.name

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def char(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def cardinality(self):
        return "infinite" if self.q is None else self.q

    @property
    def kind(self) -> str:
        if self.p is None:
            return "Rationals"
        return "PrimeField" if self.k == 1 else "ExtensionField"

    # finite-field tables
    def _digits(self, a: int):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds) -> int:
        a = 0
        for d in reversed(ds):
            a = a * self.p + d
        return a

    def _poly_mul(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for deg in range(len(prod) - 1, k - 1, -1):
            c = prod[deg]
            if c:
                for i in range(k + 1):
                    prod[deg - k + i] = (prod[deg - k + i] - c * mod[i]) % p
        return self._undigits(prod[:k])

    def _build_tables(self):
        q, p = self.q, self.p
        if self.k == 1:
            self.add_t = [[(a + b) % p for b in range(q)] for a in range(q)]
            self.mul_t = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            digs = [self._digits(a) for a in range(q)]
            self.add_t = [
                [self._undigits([(x + y) % p for x, y in zip(digs[a], digs[b])]) for b in range(q)]
                for a in range(q)
            ]
            self.mul_t = [[self._poly_mul(a, b) for b in range(q)] for a in range(q)]
        self.neg_t = [self.add_t[a].index(0) for a in range(q)]
        self.inv_t = [None] + [self.mul_t[a].index(1) for a in range(1, q)]
        self._np = None

    def tables(self):
        """numpy (add, mul, neg) lookup tables for vectorised evaluation."""
        if self._np is None:
            import numpy as np

            self._np = (
                np.array(self.add_t, dtype=np.int64),
                np.array(self.mul_t, dtype=np.int64),
                np.array(self.neg_t, dtype=np.int64),
            )
        return self._np

    # arithmetic
    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def from_int(self, n: int):
        if self.p is None:
            return Fraction(n)
        # integers land in the prime subfield, whose codes are 0..p-1
        return n % self.p

    def coerce(self, x):
        """Bring an int / Fraction into the field (finite-field ints are
        taken as integers, not as element codes)."""
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self.name}")
            return self.div(self.from_int(x.numerator), self.from_int(x.denominator))
        return self.from_int(x)

    def add(self, a, b):
        return a + b if self.p is None else self.add_t[a][b]

    def sub(self, a, b):
        return a - b if self.p is None else self.add_t[a][self.neg_t[b]]

    def neg(self, a):
        return -a if self.p is None else self.neg_t[a]

    def mul(self, a, b):
        return a * b if self.p is None else self.mul_t[a][b]

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if self.p is None else self.inv_t[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        r = self.one
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def is_zero(self, a) -> bool:
        return a == 0

    def elements(self):
        if self.p is None:
            raise FieldError("Q has no finite element list")
        return list(range(self.q))

    def generator_t(self):
        """The class of t in an extension field."""
        if self.k == 1:
            raise FieldError("prime field has no t")
        return self.p

    # text
    def fmt(self, a) -> str:
        if self.p is None:
            return str(a)
        if self.k == 1:
            return str(a)
        ds = self._digits(a)
        parts = []
        for deg in range(self.k - 1, -1, -1):
            c = ds[deg]
            if not c:
                continue
            mono = "" if deg == 0 else ("t" if deg == 1 else f"t^{deg}")
            if deg == 0:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(parts) if parts else "0"

    def parse(self, text: str):
        """Parse a scalar: an integer, a fraction a/b, or (extension fields)
        a polynomial in t such as `t+1` or `2t^2+1`."""
        s = text.replace(" ", "")
        m = re.fullmatch(r"([+-]?\d+)(?:/(\d+))?", s)
        if m:
            num = int(m.group(1))
            den = int(m.group(2)) if m.group(2) else 1
            if den == 0:
                raise FieldError(f"zero denominator in {text!r}")
            return self.coerce(Fraction(num, den))
        if self.p is None or self.k == 1:
            raise FieldError(f"bad scalar {text!r} for {self.name}")
        if not re.fullmatch(r"[+-]?(\d*t(\^\d+)?|\d+)([+-](\d*t(\^\d+)?|\d+))*", s):
            raise FieldError(f"bad scalar {text!r} for {self.name}")
        total = 0
        for sign, coef, tpart, exp in re.findall(r"([+-]?)(\d*)(t?)(?:\^(\d+))?", s):
            if not coef and not tpart:
                continue
            c = int(coef) if coef else 1
            if sign == "-":
                c = -c
            e = (int(exp) if exp else 1) if tpart else 0
            term = self.mul(self.from_int(c), self.pow(self.generator_t(), e))
            total = self.add(total, term)
        return total


@lru_cache(maxsize=None)
def _field(p, k) -> Field:
    return Field(p, k)


def make_field(text: str) -> Field:
    """Parse `Q`, `GF(p)`, `GF(q)` with q a prime power, or `GF(p^k)`."""
    s = text.strip()
    if s == "Q":
        return _field(None, 1)
    m = re.fullmatch(r"GF\((\d+)(?:\^(\d+))?\)", s)
    if not m:
        raise FieldError(f"malformed field spec {text!r}")
    base = int(m.group(1))
    if m.group(2) is not None:
        p, k = base, int(m.group(2))
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
    else:
        pk = _prime_power(base) if base > 1 else None
        if pk is None:
            raise FieldError(f"{base} is not a prime power")
        p, k = pk
    if p ** k > MAX_FIELD_SIZE or k > MAX_EXTENSION_DEGREE:
        raise FieldError(f"unsupported field size {p}^{k} (need q <= {MAX_FIELD_SIZE}, k <= {MAX_EXTENSION_DEGREE})")
    if k > 1:
        mod = MODULI[(p, k)]
        if not is_irreducible_small(mod, p):  # guard against a bad table entry
            raise FieldError(f"modulus for GF({p}^{k}) is reducible")
    return _field(p, k)


QQ = make_field("Q")


class CommPoly:
    """Commutative polynomial: {exponent key: nonzero scalar}.

    An exponent key is a sorted tuple of (variable, exponent) pairs with
    positive exponents; () is the constant monomial.
    """

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms=None):
        self.field = field
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if not field.is_zero(c):
                    self.terms[key] = c

    @classmethod
    def var(cls, field, i, coeff=None):
        return cls(field, {((i, 1),): field.one if coeff is None else coeff})

    @classmethod
    def const(cls, field, c):
        return cls(field, {(): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, CommPoly) and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"CommPoly({self.terms!r})"

    def _acc(self, out, key, c):
        F = self.field
        v = F.add(out.get(key, F.zero), c)
        if F.is_zero(v):
            out.pop(key, None)
        else:
            out[key] = v

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            self._acc(out, key, c)
        r = CommPoly(self.field)
        r.terms = out
        return r

    def __neg__(self):
        F = self.field
        r = CommPoly(F)
        r.terms = {k: F.neg(c) for k, c in self.terms.items()}
        return r

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        F = self.field
        if F.is_zero(c):
            return CommPoly(F)
        r = CommPoly(F)
        r.terms = {k: F.mul(v, c) for k, v in self.terms.items()}
        return r

    def __mul__(self, other):
        F = self.field
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                self._acc(out, _mul_keys(k1, k2), F.mul(c1, c2))
        r = CommPoly(F)
        r.terms = out
        return r

    def variables(self):
        return sorted({v for key in self.terms for v, _ in key})

    def evaluate(self, point):
        """Value at point: a mapping variable -> scalar."""
        F = self.field
        total = F.zero
        for key, c in self.terms.items():
            t = c
            for v, e in key:
                t = F.mul(t, F.pow(point[v], e))
            total = F.add(total, t)
        return total


def _mul_keys(k1, k2):
    if not k1:
        return k2
    if not k2:
        return k1
    d = dict(k1)
    for v, e in k2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def reduce_exponent(e: int, q: int) -> int:
    """x^e as a function on GF(q): e >= q goes to ((e-1) mod (q-1)) + 1."""
    return e if e < q else ((e - 1) % (q - 1)) + 1


def frobenius_reduce(f: CommPoly, F: Field | None = None) -> CommPoly:
    F = F or f.field
    if not F.is_finite:
        raise FieldError("frobenius_reduce needs a finite field")
    q = F.q
    out = {}
    for key, c in f.terms.items():
        nk = tuple((v, reduce_exponent(e, q)) for v, e in key)
        f._acc(out, nk, c)
    r = CommPoly(F)
    r.terms = out
    return r


def is_zero_function(f: CommPoly, F: Field | None = None) -> bool:
    F = F or f.field
    if not F.is_finite:
        return f.is_zero()
    return frobenius_reduce(f, F).is_zero()


class RowSpace:
    """Incrementally built row space of sparse vectors (dict column -> scalar).

    Over Q the stored rows are primitive integer vectors and reduction is
    fraction-free; over GF(q) pivots are normalised to 1.
    """

    def __init__(self, field: Field):
        self.field = field
        self.pivots = []  # list of (column, row)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _prep(self, row):
        F = self.field
        if F.is_finite:
            return {c: v for c, v in row.items() if v != 0}
        vals = {c: Fraction(v) for c, v in row.items() if v != 0}
        if not vals:
            return {}
        den = 1
        for v in vals.values():
            den = den * v.denominator // gcd(den, v.denominator)
        return _primitive({c: int(v * den) for c, v in vals.items()})

    def reduce(self, row):
        """Residue of row modulo the current space."""
        r = self._prep(row)
        F = self.field
        for col, prow in self.pivots:
            a = r.get(col)
            if a is None:
                continue
            if F.is_finite:
                na = F.neg(a)
                for c, v in prow.items():
                    nv = F.add(r.get(c, 0), F.mul(na, v))
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
            else:
                pv = prow[col]
                g = gcd(pv, a)
                m1, m2 = pv // g, a // g
                nr = {}
                for c, v in r.items():
                    nr[c] = v * m1
                for c, v in prow.items():
                    nv = nr.get(c, 0) - v * m2
                    if nv:
                        nr[c] = nv
                    else:
                        nr.pop(c, None)
                r = _primitive(nr)
        return r

    def add(self, row) -> bool:
        """Insert row; True iff it enlarged the space."""
        r = self.reduce(row)
        if not r:
            return False
        col = min(r, key=_colkey)
        if self.field.is_finite:
            inv = self.field.inv(r[col])
            r = {c: self.field.mul(v, inv) for c, v in r.items()}
        self.pivots.append((col, r))
        return True

    def contains(self, row) -> bool:
        return not self.reduce(row)


def _colkey(c):
    return (type(c).__name__, c) if not isinstance(c, tuple) else ("tuple", c)


def _primitive(r):
    if not r:
        return r
    g = 0
    for v in r.values():
        g = gcd(g, v)
        if g == 1:
            break
    first = r[min(r, key=_colkey)]
    if first < 0:
        g = -g
    if g in (1,):
        return r
    return {c: v // g for c, v in r.items()}


def rank(M, field: Field = QQ) -> int:
    """Exact rank of a dense matrix (list of rows)."""
    if not M:
        return 0
    width = len(M[0])
    if any(len(row) != width for row in M):
        raise ValueError("ragged matrix")
    space = RowSpace(field)
    for row in M:
        space.add({j: v for j, v in enumerate(row)})
    return space.rank
