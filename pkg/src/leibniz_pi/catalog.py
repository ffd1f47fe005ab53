"""The two- and three-dimensional Leibniz algebras, their T-ideal
presentations and the monomial bases of their relatively free algebras."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from itertools import product

from .freealg import LPoly, enumerate_words, md_key, parse_poly, word_key
from .scalars import Field, FieldError


class CatalogError(ValueError):
    pass


# e_i e_j = sum c e_k ; a coefficient is (constant, alpha-multiple)
_TABLES = {
    "L2": (2, [(1, 2, 1, (1, 0)), (2, 1, 1, (-1, 0))]),
    "L3": (2, [(2, 2, 1, (1, 0))]),
    "L4": (2, [(1, 2, 1, (1, 0)), (2, 2, 1, (1, 0))]),
    "RR1": (3, [(1, 3, 1, (-2, 0)), (2, 2, 1, (1, 0)), (3, 2, 2, (1, 0)), (2, 3, 2, (-1, 0))]),
    "RR2": (3, [(1, 3, 1, (0, 1)), (3, 2, 2, (1, 0)), (2, 3, 2, (-1, 0))]),
    "RR3": (3, [(3, 3, 1, (1, 0)), (3, 2, 2, (1, 0)), (2, 3, 2, (-1, 0))]),
    "RR4": (3, [(2, 2, 1, (1, 0)), (3, 3, 1, (0, 1)), (2, 3, 1, (1, 0))]),
    "RR5": (3, [(2, 2, 1, (1, 0)), (3, 3, 1, (0, 1))]),
    "RR6": (3, [(1, 3, 2, (1, 0)), (2, 3, 1, (0, 1))]),
    "RR7": (3, [(1, 3, 2, (1, 0)), (2, 3, 1, (0, 1)), (2, 3, 2, (1, 0))]),
    "RR8": (3, [(3, 3, 1, (1, 0)), (1, 3, 2, (1, 0))]),
    "RR9": (3, [(3, 3, 1, (1, 0)), (1, 3, 1, (1, 0)), (1, 3, 2, (1, 0))]),
    "RR10": (3, [(2, 3, 1, (1, 0))]),
    "RR11": (3, [(1, 3, 1, (1, 0)), (2, 3, 2, (1, 0))]),
}

NAMES = list(_TABLES)
ALPHA_FAMILIES = {"RR2", "RR4", "RR5", "RR6", "RR7"}
NONZERO_ALPHA = {"RR2", "RR6"}
BASIS_NAMES = {"L2", "L3", "L4", "RR2", "RR3", "RR6", "RR7", "RR9", "RR11"}


class AlgebraDef:
    """A finite-dimensional algebra given by structure constants
    e_i e_j = sum_k c[i][j][k] e_k (indices from 1)."""

    def __init__(self, name, dim, field: Field, alpha, table):
        self.name = name
        self.dim = dim
        self.field = field
        self.alpha = alpha
        self.table = table  # {(i, j): {k: c}} with nonzero c only
        self._flags = None

    def __repr__(self):
        a = "" if self.alpha is None else f", alpha={self.field.fmt(self.alpha)}"
        return f"AlgebraDef({self.name}, {self.field.name}{a})"

    @property
    def label(self):
        if self.alpha is None:
            return self.name
        return f"{self.name}:alpha={self.field.fmt(self.alpha)}"

    def c(self, i, j, k):
        return self.table.get((i, j), {}).get(k, self.field.zero)

    def basis(self, i):
        F = self.field
        return tuple(F.one if k == i else F.zero for k in range(1, self.dim + 1))

    def triples(self):
        """Nonzero structure constants as sorted (i, j, k, c)."""
        return sorted((i, j, k, c) for (i, j), row in self.table.items() for k, c in row.items())

    @property
    def flags(self):
        if self._flags is None:
            self._flags = structure_check(self)
        return self._flags

    @property
    def is_lie(self):
        return self.flags["lie"]

    @property
    def is_metabelian(self):
        return self.flags["metabelian"]

    def to_json(self):
        F = self.field
        return {
            "name": self.name,
            "field": F.name,
            "alpha": None if self.alpha is None else F.fmt(self.alpha),
            "dim": self.dim,
            "table": [[i, j, k, F.fmt(c)] for i, j, k, c in self.triples()],
            "flags": dict(self.flags),
        }


def _basis_product(A, i, j):
    return A.table.get((i, j), {})


def _vec_mul(A, u, v):
    F = A.field
    out = [F.zero] * A.dim
    for (i, j), row in A.table.items():
        a, b = u[i - 1], v[j - 1]
        if F.is_zero(a) or F.is_zero(b):
            continue
        ab = F.mul(a, b)
        for k, c in row.items():
            out[k - 1] = F.add(out[k - 1], F.mul(ab, c))
    return tuple(out)


def structure_check(A: AlgebraDef) -> dict:
    """Leibniz identity on basis triples, metabelian identity on basis
    4-tuples, and the Lie condition (x x = 0 on basis, antisymmetry)."""
    F = A.field
    n = A.dim
    e = [A.basis(i) for i in range(1, n + 1)]
    sub = lambda u, v: tuple(F.sub(a, b) for a, b in zip(u, v))
    zero = tuple([F.zero] * n)
    leibniz = True
    for a, b, c in product(e, repeat=3):
        lhs = _vec_mul(A, a, _vec_mul(A, b, c))
        rhs = sub(_vec_mul(A, _vec_mul(A, a, b), c), _vec_mul(A, _vec_mul(A, a, c), b))
        if lhs != rhs:
            leibniz = False
            break
    prods = {(i, j): _vec_mul(A, e[i], e[j]) for i in range(n) for j in range(n)}
    metabelian = all(
        _vec_mul(A, prods[p], prods[r]) == zero for p in prods for r in prods
    )
    lie = all(prods[(i, i)] == zero for i in range(n)) and all(
        tuple(F.neg(x) for x in prods[(i, j)]) == prods[(j, i)] for i in range(n) for j in range(n)
    )
    return {"leibniz": leibniz, "metabelian": metabelian, "lie": lie}


def make_algebra(name: str, field: Field, alpha=None) -> AlgebraDef:
    if name not in _TABLES:
        raise CatalogError(f"unknown algebra {name!r}")
    if name in ALPHA_FAMILIES:
        if alpha is None:
            raise CatalogError(f"{name} needs a parameter alpha")
        if isinstance(alpha, str):
            alpha = field.parse(alpha)
        elif not (field.is_finite and isinstance(alpha, int) and 0 <= alpha < field.q):
            alpha = field.coerce(alpha)
        if name in NONZERO_ALPHA and field.is_zero(alpha):
            raise CatalogError(f"{name} requires alpha != 0")
    elif alpha is not None:
        raise CatalogError(f"{name} takes no parameter alpha")
    dim, entries = _TABLES[name]
    F = field
    table = {}
    for i, j, k, (const, amul) in entries:
        c = F.from_int(const)
        if amul:
            c = F.add(c, F.mul(F.from_int(amul), alpha))
        if not F.is_zero(c):
            table.setdefault((i, j), {})[k] = c
    A = AlgebraDef(name, dim, F, alpha, table)
    if not A.flags["leibniz"]:
        raise CatalogError(f"{A!r} fails the Leibniz identity")
    return A


def parse_algebra_spec(text: str):
    """`RR7:alpha=2` -> ("RR7", "2"); `L2` -> ("L2", None)."""
    m = re.fullmatch(r"\s*([A-Za-z]+\d+)\s*(?::\s*alpha\s*=\s*(\S+))?\s*", text)
    if not m:
        raise CatalogError(f"malformed algebra spec {text!r}")
    return m.group(1).upper(), m.group(2)


def catalog_dump(field: Field, alphas=None) -> str:
    """JSON listing of every table over `field` (alpha families at each
    requested alpha, default 1)."""
    out = []
    for name in NAMES:
        if name in ALPHA_FAMILIES:
            for a in alphas or [field.one]:
                out.append(make_algebra(name, field, a).to_json())
        else:
            out.append(make_algebra(name, field).to_json())
    return json.dumps(out, indent=2, sort_keys=True)


# ---- presentations -----------------------------------------------------

@dataclass
class Presentation:
    name: str
    field: Field
    alpha: object
    generators: list
    labels: list
    source: str
    notes: list = dc_field(default_factory=list)

    def texts(self):
        from .freealg import format_poly

        return [format_poly(g) for g in self.generators]


S3 = "x1 x2 x3 - x1 x3 x2 - x2 x1 x3 + x2 x3 x1 + x3 x1 x2 - x3 x2 x1"
METABELIAN = "(x1 x2)(x3 x4)"
RIGHT_CUBE = "x1 (x2 x3)"


def _p(text, F):
    return parse_poly(text, F)


def presentation(name: str, field: Field, alpha=None) -> Presentation:
    """Generators of the T-ideal claimed for (name, field)."""
    F = field
    if name in ALPHA_FAMILIES:
        A = make_algebra(name, F, alpha)
        alpha = A.alpha
    elif alpha is not None:
        raise CatalogError(f"{name} takes no parameter alpha")
    q = F.q
    gens = []

    def add(label, text_or_poly):
        g = _p(text_or_poly, F) if isinstance(text_or_poly, str) else text_or_poly
        gens.append((label, g))
    if name == "L2":
        add("square", "x1^(2)")
        add("metabelian", METABELIAN)
        if q:
            add("bounded_tail", f"x2 x1^({q}) x2^({q - 1}) - x2 x1^({q}) + x2 x1 - x2 x1 x2^({q - 1})")
    elif name == "L3":
        add("commutator", "x1 x2 - x2 x1")
        add("cube", "x1 x2 x3")
    elif name in ("L4", "RR11"):
        add("right_cube", RIGHT_CUBE)
        if q:
            add("frobenius", f"x1 x2^({q}) - x1 x2")
    elif name in ("RR4", "RR10"):
        add("cube", "x1 x2 x3")
    elif name == "RR5":
        add("commutator", "x1 x2 - x2 x1")
        add("cube", "x1 x2 x3")
    elif name == "RR8":
        add("right_cube", RIGHT_CUBE)
        add("swap", "x1 x2 x3 - x2 x1 x3")
        if q == 2:
            add("q2", "x1^(2) x2 - x1 x2^(2)")
    elif name == "RR2":
        add("metabelian", METABELIAN)
        add("s3", S3)
        if q:
            add("power", f"x1^({q + 1}) - x1^(2)")
            add("square_swap", f"x1 x2^(2) x3 - x3 x2^(2) x1 x3^({q - 1}) + x3^({q}) x2^(2) x1 - x1 x3^({q}) x2^(2)")
            add("square_cycle", f"x1 x2^(2) x3 x1^({q - 1}) - x1 x2^(2) x3 - x1 x3^({q}) x2^(2) x1^({q - 1}) + x1 x3^({q}) x2^(2)")
            add("bounded_middle", f"x1 x2^({q}) x1^({q - 1}) - x1 x2 x1^({q - 1}) - x1 x2^({q}) + x1 x2")
    elif name == "RR3":
        if F.char == 2:
            add("anticommutator", "x1 x2 + x2 x1")
            add("square_left", "x1^(2) x2")
        else:
            add("antisym3", "x1 x2 x3 + x2 x1 x3")
            add("jacobi3", "x3 x1 x2 - x3 x2 x1 - x2 x1 x3")
        add("metabelian", METABELIAN)
        if q:
            add("fin_quadratic", f"x1 x2 - x2 x1 + 2 x2 x1 x2^({q - 1}) + 2 x2 x1^({q}) - 2 x2 x1^({q}) x2^({q - 1})")
            add("fin_tail", f"x1 x2 x3^({q}) - x1 x2 x3")
            add("fin_middle", f"x3 x1 x2 - x3 x1^({q}) x2 - x3 x1 x3^({q - 1}) x2 + x3 x1^({q}) x3^({q - 1}) x2")
    elif name == "RR6":
        add("right_cube", RIGHT_CUBE)
        if q:
            if q % 2:
                c = F.pow(alpha, (q - 1) // 2)
                add("frobenius", _p(f"x1 x2^({q})", F) - _p("x1 x2", F).scale(c))
            else:
                add("frobenius2", f"x1 x2^({2 * q - 1}) - x1 x2")
                add("shift", f"x1 x2^({q}) x3 - x1 x2 x3^({q})")
    elif name == "RR7":
        add("right_cube", RIGHT_CUBE)
        if q:
            from .engine import rr7_classify

            case = rr7_classify(F, alpha)
            kind = case.kind
            if case.kind in ("Alpha0", "DistinctRootsInK"):
                add("frobenius", f"x1 x2^({q}) - x1 x2")
            else:
                add("shift", f"x1 x2 x3^({q}) - x1 x2^({q}) x3")
                if case.kind == "DoubleRoot":
                    add("spectral", f"x1 x2^({2 * q - 1}) - 2 x1 x2^({q}) + x1 x2")
                else:
                    c = F.div(F.add(F.one, F.mul(F.from_int(2), alpha)), alpha)
                    g = _p(f"x1 x2^({2 * q - 1})", F) + _p(f"x1 x2^({q})", F).scale(c) + _p("x1 x2", F)
                    add("spectral", g)
    elif name == "RR9":
        add("right_cube", RIGHT_CUBE)
        if q:
            add("frobenius", f"x1 x2^({q}) - x1 x2 - x2 x1^({q}) + x2 x1")
    else:
        raise CatalogError(f"no presentation for {name}")
    notes = []
    if name == "RR8" and q and q != 2 and F.char == 2:
        notes.append("RR8 over a field of size 4 or more in characteristic 2: reported, not asserted")
    source = f"{name} over " + (f"a field with {q} elements" if q else "an infinite field")
    if name == "RR7" and q:
        source += f" ({kind})"
    return Presentation(name, F, alpha, [g for _, g in gens], [l for l, _ in gens], source, notes)


# ---- claimed bases -------------------------------------------------------

class NoBasis(CatalogError):
    pass


def _blocks(letters, d):
    w = ()
    for j in letters:
        w += (j,) * d[j]
    return w


def _leading_family(d, q, caps):
    """Words x_j1^(m1) x_j2^(m2) ... x_jn^(mn) with j2 < ... < jn and
    j1 != jk; `caps(n, m1, m2, rest_mults)` filters exponents."""
    letters = sorted(d)
    out = []
    for j1 in letters:
        rest = [j for j in letters if j != j1]
        mults = [d[j] for j in rest]
        if q is not None and not caps(len(letters), d[j1], mults, j1, rest):
            continue
        out.append((j1,) * d[j1] + _blocks(rest, d))
    return out


def _cap_l4(q):
    def ok(n, m1, ms, j1, rest):
        return m1 <= q and all(m < q for m in ms)
    return ok


def _cap_rr6(q):
    if q % 2:
        return _cap_l4(q)

    def ok(n, m1, ms, j1, rest):
        if not m1 < 2 * q:
            return False
        if ms:
            if not ms[0] < 2 * q - 1:
                return False
            if m1 > 1 and not ms[0] < q:
                return False
            if any(not m < q for m in ms[1:]):
                return False
        return True
    return ok


def _cap_rr7(q, simple):
    def ok(n, m1, ms, j1, rest):
        if any(not m < q for m in ms[1:]):
            return False
        if simple:
            return m1 <= q and (not ms or ms[0] < q)
        if m1 == 1:
            return not ms or ms[0] < 2 * q - 1
        return (not ms or ms[0] < q) and 1 < m1 < 2 * q
    return ok


def _cap_rr9(q):
    def ok(n, m1, ms, j1, rest):
        if m1 > 1 and ms and not ms[0] < q:
            return False
        if n == 1:
            return m1 <= q + 1
        if n == 2:
            if not (m1 <= q and ms[0] <= q):
                return False
            if m1 == 1 and ms[0] == 1 and not j1 < rest[0]:
                return False
            return True
        return m1 <= q and all(m < q for m in ms)
    return ok


def _l2_family(d, q, rr3=False):
    """x_j1 x_j2^(m2) x_j3^(m3) ... x_j1^(mn): j1 the largest letter, j1 > j2,
    the remaining letters ascending; mn counts the extra copies of j1."""
    letters = sorted(d)
    if len(letters) < 2:
        return []
    top = letters[-1]
    tail = d[top] - 1
    out = []
    for j2 in letters[:-1]:
        mid = [j for j in letters[:-1] if j != j2]
        m2 = d[j2]
        if q is not None:
            if not (m2 <= q and tail < q and all(d[j] < q for j in mid)):
                continue
            if rr3:
                if m2 == q and tail == 0:
                    continue
                if m2 == 1 and tail == 0 and mid and not j2 < mid[0]:
                    continue
            elif tail == 0:
                if not m2 < q or (mid and not j2 < mid[0]):
                    continue
        out.append((top,) + (j2,) * m2 + _blocks(mid, d) + (top,) * tail)
    return out


def _rr2_words(d, q):
    """Literal reading of the RR2 basis description; the n >= 3 multilinear
    sets are not independent (see the verifier)."""
    letters = sorted(d)
    total = sum(d.values())
    out = set()
    lim = (lambda m: True) if q is None else (lambda m: m <= q)
    strict = (lambda m: True) if q is None else (lambda m: m < q)
    if len(letters) == 1:
        if lim(total):
            out.add((letters[0],) * total)
        return out
    if len(letters) == 2:
        for i1, i2 in ((letters[0], letters[1]), (letters[1], letters[0])):
            # x_i1 x_i2^(m) x_i1^(m_i1 - 1)
            mi1, mi2 = d[i1], d[i2]
            ok = True
            if q is not None:
                ok = lim(mi1) and lim(mi2) and not (mi1 == 1 and mi2 == 1) and not (mi1 > 1 and mi2 >= q)
            if ok:
                out.add((i1,) + (i2,) * mi2 + (i1,) * (mi1 - 1))
            # x_j1^(m) x_j2^(m), if m_j2 > 1 then j1 < j2
            j1, j2 = i1, i2
            if d[j2] > 1 and not j1 < j2:
                continue
            if q is not None and not (lim(d[j1]) and strict(d[j2])):
                continue
            out.add((j1,) * d[j1] + (j2,) * d[j2])
        return out
    w1 = set(letters[:3])
    for i1 in letters:
        for i2 in letters:
            if i2 == i1:
                continue
            rest = [j for j in letters if j not in (i1, i2)]
            i3 = rest[0]
            mi1, mi2 = d[i1], d[i2]
            if i1 < i2 < i3:
                continue
            if i1 not in w1 and not (all(i2 < k for k in rest) and mi1 == 1):
                continue
            if i2 not in w1 and not (all(i1 < k for k in rest) and mi1 > 1):
                continue
            if q is not None:
                if not (lim(mi1) and lim(mi2) and all(strict(d[k]) for k in rest)):
                    continue
                if i2 < i1 < i3:
                    continue
                if w1 == {i1, i2, i3}:
                    if i1 < i2 and i1 < i3 and mi1 != 1:
                        continue
                    if i2 < i3 < i1 and not mi1 > 1:
                        continue
                    if i3 < i1 and i3 < i2 and mi1 > 1 and not mi2 < q:
                        continue
            out.add((i1,) + (i2,) * mi2 + _blocks(rest, d) + (i1,) * (mi1 - 1))
    for j1 in letters:
        rest = [j for j in letters if j != j1]
        j2, j3 = rest[0], rest[1]
        if j2 < j1 and d[j3] > 1 and not j1 < j3:
            continue
        if q is not None and not (lim(d[j1]) and all(strict(d[k]) for k in rest)):
            continue
        out.add((j1,) * d[j1] + _blocks(rest, d))
    return out


def claimed_basis(name: str, field: Field, d, alpha=None) -> list:
    """Basis words of multidegree d claimed for the relatively free algebra."""
    d = dict(md_key(d))
    if not d:
        return []
    q = field.q
    letters = sorted(d)
    total = sum(d.values())
    if name == "L3":
        if total == 1:
            return [tuple(letters)]
        if total == 2:
            return [w for w in enumerate_words(d) if w[0] <= w[1]]
        return []
    if name == "L2":
        words = []
        if total == 1:
            words = [tuple(letters)]
        words += _l2_family(d, q)
        return sorted(set(words), key=word_key)
    if name == "RR3":
        words = set()
        if total == 1:
            words.add(tuple(letters))
        if total == 2:
            for w in enumerate_words(d):
                if field.char == 2 and not w[0] >= w[1]:
                    continue
                words.add(w)
        words.update(_l2_family(d, q, rr3=True))
        if total == 2 and field.char == 2:
            words = {w for w in words if w[0] >= w[1]}
        return sorted(words, key=word_key)
    if name in ("L4", "RR11"):
        caps = _cap_l4(q) if q else None
    elif name == "RR6":
        caps = _cap_rr6(q) if q else None
    elif name == "RR7":
        caps = None
        if q:
            from .engine import rr7_classify

            if alpha is None:
                raise CatalogError("RR7 basis over a finite field depends on alpha")
            kind = rr7_classify(field, field.parse(alpha) if isinstance(alpha, str) else alpha).kind
            caps = _cap_rr7(q, kind in ("Alpha0", "DistinctRootsInK"))
    elif name == "RR9":
        caps = _cap_rr9(q) if q else None
    elif name == "RR2":
        return sorted(_rr2_words(d, q), key=word_key)
    else:
        raise NoBasis(f"no basis description for {name}")
    return sorted(set(_leading_family(d, q, caps)), key=word_key)
