"""The free (right) Leibniz algebra on x1, x2, ...

A word is a tuple of variable indices standing for the left-normed
monomial (((x_i1 x_i2) x_i3) ...).  Polynomials map words to scalars.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import permutations

from .scalars import QQ, Field, FieldError


class FreeAlgError(ValueError):
    pass


def word_key(w):
    """Canonical order on words: length, then lexicographic."""
    return (len(w), w)


@lru_cache(maxsize=200_000)
def word_product(u: tuple, v: tuple) -> tuple:
    """u*v as a tuple of (word, integer coefficient) pairs.

    Peels the last letter of v:  u(wj) = (uw)j - (uj)w.
    """
    if len(v) == 1:
        return ((u + v, 1),)
    w, j = v[:-1], v[-1:]
    acc = Counter()
    for word, c in word_product(u, w):
        acc[word + j] += c
    for word, c in word_product(u + j, w):
        acc[word] -= c
    return tuple((word, c) for word, c in sorted(acc.items()) if c)


class LPoly:
    """An element of the free Leibniz algebra over `field`."""

    __slots__ = ("field", "terms")

    def __init__(self, terms=None, field: Field = QQ):
        self.field = field
        self.terms = {}
        if terms:
            for w, c in terms.items():
                w = tuple(w)
                if not w or min(w) < 1:
                    raise FreeAlgError(f"bad word {w!r}")
                c = field.coerce(c) if not _is_element(field, c) else c
                if not field.is_zero(c):
                    self.terms[w] = c

    @classmethod
    def word(cls, w, field: Field = QQ, coeff=None):
        return cls({tuple(w): field.one if coeff is None else coeff}, field)

    @classmethod
    def var(cls, i, field: Field = QQ):
        return cls.word((i,), field)

    @classmethod
    def zero(cls, field: Field = QQ):
        return cls({}, field)

    def _new(self, terms):
        r = LPoly(field=self.field)
        r.terms = terms
        return r

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, LPoly):
            return self.field == other.field and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"LPoly({format_poly(self)!r}, {self.field.name})"

    def _check(self, other):
        if self.field != other.field:
            raise FreeAlgError(f"field mismatch: {self.field.name} vs {other.field.name}")

    def __add__(self, other):
        self._check(other)
        F = self.field
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = F.add(out.get(w, F.zero), c)
            if F.is_zero(v):
                out.pop(w, None)
            else:
                out[w] = v
        return self._new(out)

    def __neg__(self):
        F = self.field
        return self._new({w: F.neg(c) for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        F = self.field
        if not _is_element(F, c):
            c = F.coerce(c)
        if F.is_zero(c):
            return self._new({})
        return self._new({w: F.mul(v, c) for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, LPoly):
            return lproduct(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def coeff(self, w):
        return self.terms.get(tuple(w), self.field.zero)

    def words(self):
        return sorted(self.terms, key=word_key)

    def variables(self):
        return sorted({i for w in self.terms for i in w})

    def degree(self):
        return max((len(w) for w in self.terms), default=0)

    def with_field(self, field: Field):
        """Reinterpret integer-valued coefficients in another field."""
        return LPoly({w: _to_int(self.field, c) for w, c in self.terms.items()}, field)


def _is_element(F, c):
    if F.is_finite:
        return isinstance(c, int) and 0 <= c < F.q and not isinstance(c, bool)
    from fractions import Fraction

    return isinstance(c, Fraction)


def _to_int(F, c):
    if not F.is_finite:
        return c
    if F.k > 1 and c >= F.p:
        raise FreeAlgError("coefficient outside the prime subfield")
    return c


def lproduct(f: LPoly, g: LPoly) -> LPoly:
    f._check(g)
    F = f.field
    out = {}
    for u, a in f.terms.items():
        for v, b in g.terms.items():
            ab = F.mul(a, b)
            for w, c in word_product(u, v):
                v2 = F.add(out.get(w, F.zero), F.mul(ab, F.from_int(c)))
                if F.is_zero(v2):
                    out.pop(w, None)
                else:
                    out[w] = v2
    return f._new(out)


def left_power(f: LPoly, g: LPoly, n: int) -> LPoly:
    """f g g ... g with n left-normed right multiplications by g."""
    if n < 0:
        raise FreeAlgError("negative power")
    r = f
    for _ in range(n):
        r = lproduct(r, g)
    return r


def append_letter(f: LPoly, j: int) -> LPoly:
    """f * x_j (just appends j to every word)."""
    return f._new({w + (j,): c for w, c in f.terms.items()})


def substitute(f: LPoly, sigma) -> LPoly:
    """Image of f under the endomorphism x_i -> sigma[i]."""
    F = f.field
    out = LPoly.zero(F)
    cache = {}
    for w, c in f.terms.items():
        for i in w:
            if i not in sigma:
                raise FreeAlgError(f"no assignment for x{i}")
        val = None
        for k in range(len(w), 0, -1):
            if w[:k] in cache:
                val = cache[w[:k]]
                start = k
                break
        if val is None:
            val = sigma[w[0]]
            start = 1
            cache[w[:1]] = val
        for k in range(start, len(w)):
            val = lproduct(val, sigma[w[k]])
            cache[w[: k + 1]] = val
        out = out + val.scale(c)
    return out


def rename(f: LPoly, mapping) -> LPoly:
    """Substitution by variables only (fast path)."""
    F = f.field
    out = {}
    for w, c in f.terms.items():
        nw = tuple(mapping[i] for i in w)
        v = F.add(out.get(nw, F.zero), c)
        if F.is_zero(v):
            out.pop(nw, None)
        else:
            out[nw] = v
    return f._new(out)


# multidegrees are dicts {var: multiplicity}; md_key gives a hashable form

def md_key(d) -> tuple:
    return tuple(sorted((int(i), int(m)) for i, m in dict(d).items() if m))


def word_multidegree(w) -> dict:
    return dict(sorted(Counter(w).items()))


def multilinear(n: int) -> dict:
    return {i: 1 for i in range(1, n + 1)}


def enumerate_words(d) -> list:
    """All words with letter multiplicities d, in canonical order."""
    letters = []
    for i, m in md_key(d):
        letters.extend([i] * m)
    if not letters:
        return []
    return _distinct_perms(tuple(letters))


@lru_cache(maxsize=None)
def _distinct_perms(letters):
    counts = Counter(letters)
    keys = sorted(counts)
    n = len(letters)
    out = []
    cur = []

    def rec():
        if len(cur) == n:
            out.append(tuple(cur))
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                cur.append(k)
                rec()
                cur.pop()
                counts[k] += 1

    rec()
    return out


def words_of_length(letters, n: int):
    """All words of length n over the given letters, canonical order."""
    letters = sorted(letters)
    out = [()]
    for _ in range(n):
        out = [w + (a,) for w in out for a in letters]
    return out


MIXED = "mixed"


def multidegree_of(f: LPoly):
    if f.is_zero():
        raise FreeAlgError("zero polynomial has no multidegree")
    degs = {md_key(word_multidegree(w)) for w in f.terms}
    if len(degs) > 1:
        return MIXED
    return dict(degs.pop())


def homogeneous_parts(f: LPoly) -> dict:
    """Split f by multidegree: {md_key: LPoly}."""
    parts = {}
    for w, c in f.terms.items():
        parts.setdefault(md_key(word_multidegree(w)), {})[w] = c
    return {k: f._new(v) for k, v in parts.items()}


def leading_decomposition(f: LPoly) -> dict:
    """Group f's words by first letter."""
    parts = {}
    for w, c in f.terms.items():
        parts.setdefault(w[0], {})[w] = c
    return {i: f._new(parts[i]) for i in sorted(parts)}


# ---- text ---------------------------------------------------------------

class ParseError(FreeAlgError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def _tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == "x":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("expected variable index after 'x'", i)
            idx = int(text[i + 1 : j])
            if idx < 1:
                raise ParseError("variable index must be positive", i + 1)
            toks.append(("var", idx, i))
            i = j
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[i:j]), i))
            i = j
        elif ch == "[":
            j = text.find("]", i)
            if j < 0:
                raise ParseError("unclosed '['", i)
            toks.append(("scalar", text[i + 1 : j], i))
            i = j + 1
        elif ch in "+-/()^":
            toks.append((ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, text, field):
        self.toks = _tokenize(text)
        self.i = 0
        self.F = field

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        t = self.toks[self.i]
        if kind is not None and t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[1] if t[1] is not None else 'end of input'!r}", t[2])
        self.i += 1
        return t

    def poly(self):
        F = self.F
        sign = F.one
        if self.peek()[0] in "+-":
            if self.take()[0] == "-":
                sign = F.neg(sign)
        total = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            total = total + t if op == "+" else total - t
        return total

    def term(self):
        F = self.F
        coeff = F.one
        t = self.peek()
        if t[0] == "int":
            self.take()
            num = t[1]
            den = 1
            if self.peek()[0] == "/":
                self.take()
                d = self.take("int")
                if d[1] == 0:
                    raise ParseError("zero denominator", d[2])
                den = d[1]
            try:
                coeff = F.div(F.from_int(num), F.from_int(den))
            except ZeroDivisionError:
                raise ParseError(f"denominator {den} vanishes in {F.name}", t[2]) from None
        elif t[0] == "scalar":
            self.take()
            try:
                coeff = F.parse(t[1])
            except (FieldError, ZeroDivisionError) as e:
                raise ParseError(str(e), t[2]) from None
        val = None
        while self.peek()[0] in ("var", "("):
            fac, reps = self.factor()
            for _ in range(reps):
                val = fac if val is None else lproduct(val, fac)
        if val is None:
            t = self.peek()
            raise ParseError(f"expected a factor, found {t[1] if t[1] is not None else 'end of input'!r}", t[2])
        return val.scale(coeff)

    def factor(self):
        t = self.take()
        if t[0] == "var":
            base = LPoly.var(t[1], self.F)
        elif t[0] == "(":
            base = self.poly()
            self.take(")")
        else:
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        reps = 1
        if self.peek()[0] == "^":
            self.take()
            if self.peek()[0] == "(":
                self.take()
                e = self.take("int")
                self.take(")")
            else:
                e = self.take("int")
            if e[1] == 0:
                raise ParseError("exponent must be positive", e[2])
            reps = e[1]
        return base, reps


def parse_poly(text: str, field: Field = QQ) -> LPoly:
    """Parse e.g. "x1 (x2 x3) - 2 x2 x1^(3)" into left-normed form.

    `^(n)` and `^n` both repeat the factor n times left-normed:
    x2 x1^(3) = ((x2 x1) x1) x1.  A leading sign is accepted and, for
    extension fields, a bracketed coefficient such as `[t+1] x1 x2`.
    """
    p = _Parser(text, field)
    if p.peek()[0] == "int" and p.toks[1][0] == "end" and p.peek()[1] == 0:
        return LPoly.zero(field)
    f = p.poly()
    p.take("end")
    return f


def format_word(w) -> str:
    parts = []
    i = 0
    n = len(w)
    # the first letter stands alone unless it starts a run: x1^(2) x2
    while i < n:
        j = i
        while j + 1 < n and w[j + 1] == w[i]:
            j += 1
        run = j - i + 1
        parts.append(f"x{w[i]}" if run == 1 else f"x{w[i]}^({run})")
        i = j + 1
    return " ".join(parts)


def _fmt_coeff(F, c):
    """(is_negative, text) for a coefficient; text '' means 1."""
    if not F.is_finite:
        neg = c < 0
        a = -c if neg else c
        return neg, ("" if a == 1 else str(a))
    if F.k == 1:
        neg = c > F.p // 2
        a = F.p - c if neg else c
        return neg, ("" if a == 1 else str(a))
    if c < F.p:
        neg = c > F.p // 2
        a = F.p - c if neg else c
        return neg, ("" if a == 1 else str(a))
    return False, f"[{F.fmt(c)}]"


def format_poly(f: LPoly) -> str:
    if f.is_zero():
        return "0"
    F = f.field
    out = []
    for k, w in enumerate(f.words()):
        neg, ctext = _fmt_coeff(F, f.terms[w])
        body = format_word(w) if not ctext else f"{ctext} {format_word(w)}"
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)
