"""Evaluation in catalog algebras, identity tests, codimensions by rank,
T-ideal components, the RR7 case analysis and the presentation verifier."""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from itertools import product

from .catalog import (
    METABELIAN,
    AlgebraDef,
    NoBasis,
    claimed_basis,
    make_algebra,
    presentation,
)
from .freealg import (
    LPoly,
    enumerate_words,
    md_key,
    multidegree_of,
    parse_poly,
    word_key,
    word_multidegree,
    word_product,
    MIXED,
)
from .scalars import CommPoly, Field, RowSpace, frobenius_reduce, reduce_exponent

DEFAULT_COST_CAP = 10 ** 8


class EngineError(ValueError):
    pass


class CostCapExceeded(EngineError):
    def __init__(self, estimate, cap):
        super().__init__(f"cost estimate {estimate:.3g} exceeds the cap {cap:.3g}")
        self.estimate = estimate
        self.cap = cap


# ---- elements --------------------------------------------------------

def multiply(A: AlgebraDef, a, b):
    """Product of two coordinate tuples (scalars or CommPolys)."""
    if len(a) != A.dim or len(b) != A.dim:
        raise EngineError("dimension mismatch")
    F = A.field
    if a and isinstance(a[0], CommPoly) or b and isinstance(b[0], CommPoly):
        zero = CommPoly(F)
        out = [zero] * A.dim
        for (i, j), row in A.table.items():
            x, y = a[i - 1], b[j - 1]
            if isinstance(x, CommPoly) and x.is_zero() or isinstance(y, CommPoly) and y.is_zero():
                continue
            xy = _as_poly(F, x) * _as_poly(F, y)
            for k, c in row.items():
                out[k - 1] = out[k - 1] + xy.scale(c)
        return tuple(out)
    out = [F.zero] * A.dim
    for (i, j), row in A.table.items():
        x, y = a[i - 1], b[j - 1]
        if F.is_zero(x) or F.is_zero(y):
            continue
        xy = F.mul(x, y)
        for k, c in row.items():
            out[k - 1] = F.add(out[k - 1], F.mul(xy, c))
    return tuple(out)


def _as_poly(F, x):
    return x if isinstance(x, CommPoly) else CommPoly.const(F, x)


def _combine(F, acc, val, c):
    if acc is None:
        acc = [F.zero if not isinstance(v, CommPoly) else CommPoly(F) for v in val]
    for k, v in enumerate(val):
        if isinstance(v, CommPoly):
            acc[k] = _as_poly(F, acc[k]) + v.scale(c)
        else:
            acc[k] = F.add(acc[k], F.mul(v, c)) if not isinstance(acc[k], CommPoly) else acc[k] + CommPoly.const(F, F.mul(v, c))
    return acc


def _word_values(A, words, t):
    """Values of left-normed words under assignment t, sharing prefixes."""
    cache = {}
    out = {}
    for w in sorted(words):
        for i in w:
            if i not in t:
                raise EngineError(f"no value for x{i}")
        k = len(w)
        while k > 1 and w[:k] not in cache:
            k -= 1
        val = cache.get(w[:k]) if k > 1 else t[w[0]]
        for p in range(k, len(w)):
            val = multiply(A, val, t[w[p]])
            cache[w[: p + 1]] = val
        out[w] = val
    return out


def evaluate(A: AlgebraDef, f: LPoly, t):
    """f(t) for an assignment variable -> element."""
    F = A.field
    vals = _word_values(A, f.terms, t)
    acc = None
    for w, c in f.terms.items():
        acc = _combine(F, acc, vals[w], c)
    if acc is None:
        sample = next(iter(t.values()), None)
        if sample is not None and sample and isinstance(sample[0], CommPoly):
            return tuple(CommPoly(F) for _ in range(A.dim))
        return tuple([F.zero] * A.dim)
    return tuple(acc)


def generic_assignment(A: AlgebraDef, variables):
    """x_i -> sum_k g_(i,k) e_k with commuting indeterminates g_(i,k)."""
    F = A.field
    t = {}
    for i in variables:
        t[i] = tuple(CommPoly.var(F, (i, k)) for k in range(1, A.dim + 1))
    return t


def is_multilinear(f: LPoly) -> bool:
    d = multidegree_of(f) if not f.is_zero() else {}
    return d != MIXED and all(m == 1 for m in d.values())


# ---- exhaustive evaluation over a finite field (vectorised) -----------

def exhaustive_values(A: AlgebraDef, f: LPoly, chunk=1 << 17):
    """Yield the values of f on every tuple of field elements, in chunks,
    as a list of dim coordinate arrays of field codes."""
    import numpy as np

    F = A.field
    q, dim = F.q, A.dim
    add_t, mul_t, _ = F.tables()
    variables = f.variables()
    m = len(variables)
    total = q ** (dim * m)
    entries = [(i - 1, j - 1, k - 1, c) for (i, j), row in A.table.items() for k, c in row.items()]
    words = sorted(f.terms)

    def vmul(a, b):
        out = [np.zeros_like(a[0]) for _ in range(dim)]
        for i, j, k, c in entries:
            prod = mul_t[a[i], b[j]]
            if c != 1:
                prod = mul_t[prod, c]
            out[k] = add_t[out[k], prod]
        return out

    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        t = {}
        r = idx.copy()
        for v in variables:
            coords = []
            for _ in range(dim):
                coords.append(r % q)
                r //= q
            t[v] = coords
        acc = [np.zeros(len(idx), dtype=np.int64) for _ in range(dim)]
        cache = {}
        for w in words:
            k = len(w)
            while k > 1 and w[:k] not in cache:
                k -= 1
            val = cache[w[:k]] if k > 1 else t[w[0]]
            for p in range(k, len(w)):
                val = vmul(val, t[w[p]])
                cache[w[: p + 1]] = val
            c = f.terms[w]
            for k2 in range(dim):
                acc[k2] = add_t[acc[k2], mul_t[val[k2], c]]
        yield acc


def _exhaustive_zero(A: AlgebraDef, f: LPoly) -> bool:
    for acc in exhaustive_values(A, f):
        if any(a.any() for a in acc):
            return False
    return True


def exhaustive_cost(A: AlgebraDef, f: LPoly) -> int:
    """Tuples times letters: the work of exhaustive evaluation."""
    m = len(f.variables())
    letters = sum(len(w) for w in f.terms)
    return A.field.q ** (A.dim * m) * max(1, letters)


def is_identity(A: AlgebraDef, f: LPoly, cost_cap=DEFAULT_COST_CAP, method=None) -> bool:
    """Does f vanish on A?

    method: None picks basis tuples for multilinear f, exhaustive
    evaluation over a finite field, generic evaluation over Q; "generic"
    over a finite field uses Frobenius reduction of the generic value.
    """
    F = A.field
    if f.field != F:
        raise EngineError(f"polynomial over {f.field.name}, algebra over {F.name}")
    if f.is_zero():
        return True
    if method is None:
        if is_multilinear(f):
            method = "basis"
        elif F.is_finite:
            method = "exhaustive"
        else:
            method = "generic"
    if method == "basis":
        if not is_multilinear(f):
            raise EngineError("basis-tuple test needs a multilinear polynomial")
        variables = f.variables()
        for combo in product(range(1, A.dim + 1), repeat=len(variables)):
            t = {v: A.basis(b) for v, b in zip(variables, combo)}
            if any(not F.is_zero(x) for x in evaluate(A, f, t)):
                return False
        return True
    if method == "exhaustive":
        if not F.is_finite:
            raise EngineError("exhaustive evaluation needs a finite field")
        cost = exhaustive_cost(A, f)
        if cost_cap is not None and cost > cost_cap:
            raise CostCapExceeded(cost, cost_cap)
        return _exhaustive_zero(A, f)
    if method == "generic":
        val = evaluate(A, f, generic_assignment(A, f.variables()))
        if F.is_finite:
            return all(frobenius_reduce(v, F).is_zero() for v in val)
        return all(v.is_zero() for v in val)
    raise EngineError(f"unknown method {method!r}")


# ---- codimension -------------------------------------------------------

def _multilinear_rows(A: AlgebraDef, words, n):
    """Rows of the basis-tuple evaluation matrix for multilinear words.

    The value of a word at a basis tuple only depends on the sequence of
    basis indices it reads, so all sequences are tabulated once."""
    F = A.field
    dim = A.dim
    seqval = {}
    level = {(b,): A.basis(b) for b in range(1, dim + 1)}
    seqval.update(level)
    for _ in range(n - 1):
        nxt = {}
        for s, v in level.items():
            zero = all(F.is_zero(x) for x in v)
            for b in range(1, dim + 1):
                nxt[s + (b,)] = v if zero else multiply(A, v, A.basis(b))
        seqval.update(nxt)
        level = nxt
    rows = []
    for w in words:
        row = {}
        for combo in product(range(1, dim + 1), repeat=n):
            val = seqval[tuple(combo[i - 1] for i in w)]
            for k, x in enumerate(val):
                if not F.is_zero(x):
                    row[(combo, k)] = x
        rows.append(row)
    return rows


def _generic_rows(A: AlgebraDef, words):
    F = A.field
    variables = sorted({i for w in words for i in w})
    vals = _word_values(A, words, generic_assignment(A, variables))
    rows = []
    for w in words:
        row = {}
        for k, v in enumerate(vals[w]):
            if F.is_finite:
                v = frobenius_reduce(v, F)
            for key, c in v.terms.items():
                row[(k, key)] = c
        rows.append(row)
    return rows


def evaluation_rows(A: AlgebraDef, words):
    """Each word as a vector of function values on A (exact)."""
    words = list(words)
    if words and all(len(set(w)) == len(w) for w in words) and len({tuple(sorted(w)) for w in words}) == 1:
        return _multilinear_rows(A, words, len(words[0]))
    return _generic_rows(A, words)


def rank_of_rows(F: Field, rows) -> int:
    space = RowSpace(F)
    for r in rows:
        space.add(r)
    return space.rank


def codimension(A: AlgebraDef, d, cost_cap=DEFAULT_COST_CAP) -> int:
    """dim of the multidegree-d component modulo the identities of A."""
    words = enumerate_words(d)
    if not words:
        return 0
    n = len(words[0])
    cost = len(words) * (A.dim ** n) * n
    if cost_cap is not None and cost > cost_cap:
        raise CostCapExceeded(cost, cost_cap)
    return rank_of_rows(A.field, evaluation_rows(A, words))


def cn(A: AlgebraDef, n: int, cost_cap=DEFAULT_COST_CAP) -> int:
    return codimension(A, {i: 1 for i in range(1, n + 1)}, cost_cap)


def filtered_words(k: int, N: int):
    """Words over x1..xk using every letter, of length at most N."""
    out = []
    letters = list(range(1, k + 1))
    level = [()]
    for length in range(1, N + 1):
        level = [w + (a,) for w in level for a in letters]
        if length >= k:
            out.extend(w for w in level if len(set(w)) == k)
    return sorted(out, key=word_key)


def filtered_codimension(A: AlgebraDef, k: int, N: int) -> int:
    """Over GF(q): dim of regular polynomials in x1..xk of degree <= N
    modulo the identities of A, as functions A^k -> A."""
    return rank_of_rows(A.field, _generic_rows(A, filtered_words(k, N)))


def _function_row(F, val):
    row = {}
    for k, v in enumerate(val):
        for key, c in v.terms.items():
            row[(k, key)] = c
    return row


def _reduced(F, val):
    return tuple(frobenius_reduce(v, F) if F.is_finite else v for v in val)


def support_function_dims(A: AlgebraDef, k: int):
    """Over GF(q): for every support S of x1..xk, the dimension of the span
    of the functions A^|S| -> A given by words with exactly that support.

    The span is closed under right multiplication by a generic element, so
    it is found by a work-list from the letters; it is finite because
    Frobenius-reduced functions have bounded exponents."""
    F = A.field
    if not F.is_finite:
        raise EngineError("support spaces are finite only over a finite field")
    gen = generic_assignment(A, range(1, k + 1))
    spaces = {}

    def build(S):
        if S in spaces:
            return spaces[S]
        space = RowSpace(F)
        vecs = []
        todo = []

        def push(val):
            val = _reduced(F, val)
            if space.add(_function_row(F, val)):
                vecs.append(val)
                todo.append(val)

        if len(S) == 1:
            (v,) = S
            push(gen[v])
        for v in S:
            if len(S) > 1:
                for b in build(S - {v})[1]:
                    push(multiply(A, b, gen[v]))
        while todo:
            b = todo.pop()
            for v in sorted(S):
                push(multiply(A, b, gen[v]))
        spaces[S] = (space.rank, vecs)
        return spaces[S]

    out = {}
    for size in range(1, k + 1):
        S = frozenset(range(1, size + 1))
        out[size] = build(S)[0]
    return out


def words_function_rank(A: AlgebraDef, words) -> int:
    """Rank of the functions of the given words (exact, any field)."""
    if not words:
        return 0
    return rank_of_rows(A.field, _generic_rows(A, words))


# ---- T-ideal components ---------------------------------------------------

def metabelian_normal(w):
    """Normal form modulo (x1x2)(x3x4): letters from position 3 on commute."""
    if len(w) <= 3:
        return w
    return w[:2] + tuple(sorted(w[2:]))


def _reduce_terms(F, terms, quotient):
    if not quotient:
        return terms
    out = {}
    for w, c in terms.items():
        nw = metabelian_normal(w)
        v = F.add(out.get(nw, F.zero), c)
        if F.is_zero(v):
            out.pop(nw, None)
        else:
            out[nw] = v
    return out


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for a in range(total + 1):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


def _reduced_class(k, q):
    if q is None:
        return k
    return tuple(0 if e == 0 else reduce_exponent(e, q) for e in k)


def linearizations(g: LPoly, max_pieces: int):
    """Regular polynomials whose word instances span all instances of g.

    Each variable v of g is split into r_v pieces; the expansion of
    g(pieces) is grouped by piece exponents, which over GF(q) are taken up
    to x^q = x.  Only groups in which every piece occurs are kept."""
    F = g.field
    q = F.q
    variables = g.variables()
    mult = {v: max(w.count(v) for w in g.terms) for v in variables}
    results = []
    ranges = [range(1, mult[v] + 1) for v in variables]
    for rs in product(*ranges):
        if sum(rs) > max_pieces:
            continue
        offsets = {}
        nxt = 1
        for v, r in zip(variables, rs):
            offsets[v] = (nxt, r)
            nxt += r
        groups = {}
        for w, c in g.terms.items():
            positions = {v: [p for p, a in enumerate(w) if a == v] for v in variables}
            per_var = []
            for v in variables:
                start, r = offsets[v]
                opts = []
                for comp in _compositions(len(positions[v]), r):
                    red = _reduced_class(comp, q)
                    if 0 in red:
                        continue
                    opts.append((comp, red))
                per_var.append(opts)
            for choice in product(*per_var):
                cls = tuple(red for _, red in choice)
                # distribute piece labels over the occurrences
                label_lists = []
                for v, (comp, _) in zip(variables, choice):
                    start, r = offsets[v]
                    letters = []
                    for j, cnt in enumerate(comp):
                        letters.extend([start + j] * cnt)
                    label_lists.append(enumerate_words_of_multiset(tuple(letters)))
                bucket = groups.setdefault(cls, {})
                for labels in product(*label_lists):
                    nw = list(w)
                    for v, lab in zip(variables, labels):
                        for p, a in zip(positions[v], lab):
                            nw[p] = a
                    nw = tuple(nw)
                    val = F.add(bucket.get(nw, F.zero), c)
                    if F.is_zero(val):
                        bucket.pop(nw, None)
                    else:
                        bucket[nw] = val
        for cls in sorted(groups):
            terms = groups[cls]
            if terms:
                h = LPoly(field=F)
                h.terms = terms
                results.append(h)
    return results


def enumerate_words_of_multiset(letters):
    if not letters:
        return [()]
    return enumerate_words(word_multidegree(letters))


def _normal_words_of_length(k, length, quotient):
    letters = range(1, k + 1)
    if length <= 2 or not quotient:
        return [tuple(w) for w in product(letters, repeat=length)]
    out = []
    from itertools import combinations_with_replacement

    for a, b in product(letters, repeat=2):
        for tail in combinations_with_replacement(letters, length - 2):
            out.append((a, b) + tail)
    return out


@dataclass
class ComponentSpace:
    """Span of T-ideal elements in one component (or filtered piece)."""

    shape: tuple
    words: list  # all words of the component in canonical order
    normal_words: list  # coordinates actually used (quotient normal forms)
    quotient: bool
    space: RowSpace
    short_rank: int = None  # rank of the part supported on short words
    bound: int = None

    @property
    def rank(self) -> int:
        """Rank of the T-ideal component inside the full word space."""
        hidden = len(self.words) - len(self.normal_words)
        inner = self.space.rank if self.short_rank is None else self.short_rank
        return hidden + inner

    @property
    def quotient_dim(self) -> int:
        return len(self.words) - self.rank

    def contains(self, f: LPoly) -> bool:
        F = self.space.field
        terms = _reduce_terms(F, f.terms, self.quotient)
        return self.space.contains({_col(w): c for w, c in terms.items()})

    def rows(self):
        """Spanning rows as (word, coefficient) lists."""
        return [[(w, c) for (_, w), c in sorted(r.items())] for _, r in self.space.pivots]


def _col(w):
    # long words get smaller keys so that echelon rows with a short pivot
    # are supported on short words only
    return (-len(w), w)


class TIdealEngine:
    """Components of the T-ideal generated by `gens` over `field`."""

    def __init__(self, gens, field: Field, quotient="auto", slack=0):
        self.field = field
        self.gens = [g for g in gens if not g.is_zero()]
        for g in self.gens:
            if g.field != field:
                raise EngineError("generator over a different field")
        self.slack = slack
        self._lin = {}
        self._filt = {}
        self._homog = {}
        if quotient == "auto":
            quotient = self._implies_metabelian()
        self.quotient = bool(quotient)

    def _implies_metabelian(self) -> bool:
        probe = TIdealEngine(self.gens, self.field, quotient=False)
        m = parse_poly(METABELIAN, self.field)
        if self.field.is_finite:
            comp = probe.filtered(4, 4)
        else:
            comp = probe.homogeneous({1: 1, 2: 1, 3: 1, 4: 1})
        return comp.contains(m)

    # generator pieces
    def pieces(self, max_len):
        key = max_len
        if key not in self._lin:
            out = []
            for g in self.gens:
                parts = [g]
                if not self.field.is_finite:
                    from .freealg import homogeneous_parts

                    parts = list(homogeneous_parts(g).values())
                for part in parts:
                    for h in linearizations(part, max_len):
                        h = LPoly(field=self.field) if h.is_zero() else h
                        if not h.is_zero() and min(len(w) for w in h.terms) <= max_len:
                            out.append(h)
            self._lin[key] = out
        return self._lin[key]

    # products in the quotient
    def _mul(self, terms_a, terms_b):
        F = self.field
        out = {}
        for u, a in terms_a.items():
            for v, b in terms_b.items():
                if self.quotient and len(u) >= 2 and len(v) >= 2:
                    continue
                ab = F.mul(a, b)
                for w, c in word_product(u, v):
                    nw = metabelian_normal(w) if self.quotient else w
                    val = F.add(out.get(nw, F.zero), F.mul(ab, F.from_int(c)))
                    if F.is_zero(val):
                        out.pop(nw, None)
                    else:
                        out[nw] = val
        return out

    def instance(self, h: LPoly, sigma):
        """h with each variable replaced by a word, reduced."""
        F = self.field
        out = {}
        cache = {}
        for w in sorted(h.terms):
            k = len(w)
            while k > 1 and w[:k] not in cache:
                k -= 1
            val = cache[w[:k]] if k > 1 else {sigma[w[0]]: F.one}
            for p in range(k, len(w)):
                val = self._mul(val, {sigma[w[p]]: F.one}) if val else val
                cache[w[: p + 1]] = val
            c = h.terms[w]
            for x, a in val.items():
                v = F.add(out.get(x, F.zero), F.mul(a, c))
                if F.is_zero(v):
                    out.pop(x, None)
                else:
                    out[x] = v
        return out

    def _survivor_len(self, h, lengths):
        """Longest surviving word length of an instance with these letter
        lengths, or None if every word dies in the quotient."""
        best = None
        for w in h.terms:
            if self.quotient:
                if len(w) >= 2 and lengths[w[0]] >= 2 and lengths[w[1]] >= 2:
                    continue
                if any(lengths[a] >= 2 for a in w[2:]):
                    continue
            s = sum(lengths[a] for a in w)
            best = s if best is None else max(best, s)
        return best

    def _min_len(self, h, lengths):
        m = None
        for w in h.terms:
            if self.quotient:
                if len(w) >= 2 and lengths[w[0]] >= 2 and lengths[w[1]] >= 2:
                    continue
                if any(lengths[a] >= 2 for a in w[2:]):
                    continue
            s = sum(lengths[a] for a in w)
            m = s if m is None else min(m, s)
        return m

    # filtered spaces: words over x1..xk using every letter, length <= N
    def filtered(self, k: int, N: int, bound: int = None) -> ComponentSpace:
        """T-ideal part of the filtered space (k letters, length <= N),
        computed with working length N + slack."""
        work = N + self.slack
        space = self._filtered_work(k, work)
        words = filtered_words(k, N)
        normal = sorted({metabelian_normal(w) for w in words} if self.quotient else words, key=word_key)
        short = sum(1 for c, _ in space.pivots if -c[0] <= N)
        return ComponentSpace(("filtered", k, N), words, normal, self.quotient, space, short, N)

    def _filtered_work(self, k, N):
        key = (k, N)
        if key in self._filt:
            return self._filt[key]
        F = self.field
        space = RowSpace(F)
        self._filt[key] = space
        if N < k or k < 1:
            return space
        # instances of generator pieces
        for h in self.pieces(N):
            m = len(h.variables())
            hv = h.variables()
            for lens in product(range(1, N + 1), repeat=m):
                lengths = dict(zip(hv, lens))
                top = self._survivor_len(h, lengths)
                if top is None or top > N:
                    continue
                choices = [_normal_words_of_length(k, lengths[v], self.quotient) for v in hv]
                for ws in product(*choices):
                    if len(set().union(*ws)) != k:
                        continue
                    inst = self.instance(h, dict(zip(hv, ws)))
                    if inst:
                        space.add({_col(w): c for w, c in inst.items()})
        # closure: left and right multiplication by a letter
        for sub_k, rename in ((k, None), (k - 1, "drop")):
            if sub_k < 1 or N - 1 < sub_k:
                continue
            lower = self._filtered_work(sub_k, N - 1)
            rows = [{w: c for (_, w), c in r.items()} for _, r in lower.pivots]
            if rename is None:
                maps = [(None, v) for v in range(1, k + 1)]
            else:
                maps = []
                for v in range(1, k + 1):
                    others = [j for j in range(1, k + 1) if j != v]
                    maps.append((dict(zip(range(1, k), others)), v))
            for mp, v in maps:
                for r in rows:
                    terms = r if mp is None else {tuple(mp[a] for a in w): c for w, c in r.items()}
                    if mp is not None and self.quotient:
                        terms = _reduce_terms(F, terms, True)
                    for prod_terms in (self._mul({(v,): F.one}, terms), self._mul(terms, {(v,): F.one})):
                        if prod_terms:
                            space.add({_col(w): c for w, c in prod_terms.items()})
        return space

    # homogeneous components (generators split into homogeneous parts)
    def homogeneous(self, d) -> ComponentSpace:
        key = md_key(d)
        words = enumerate_words(dict(key))
        normal = sorted({metabelian_normal(w) for w in words} if self.quotient else words, key=word_key)
        space = self._homog_work(key)
        return ComponentSpace(("multidegree", key), words, normal, self.quotient, space)

    def _homog_work(self, key):
        # canonical renaming: letters in increasing order -> 1..k
        letters = [i for i, _ in key]
        canon = tuple((j + 1, m) for j, (_, m) in enumerate(key))
        space = self._homog_canon(canon)
        if letters == list(range(1, len(letters) + 1)):
            return space
        mp = {j + 1: a for j, a in enumerate(letters)}
        out = RowSpace(self.field)
        for _, r in space.pivots:
            out.add({_col(tuple(mp[a] for a in w)): c for (_, w), c in r.items()})
        return out

    def _homog_canon(self, key):
        if key in self._homog:
            return self._homog[key]
        F = self.field
        space = RowSpace(F)
        self._homog[key] = space
        d = dict(key)
        total = sum(d.values())
        k = len(d)
        for h in self.pieces(total):
            hv = h.variables()
            hd = multidegree_of(h)
            if hd == MIXED:
                continue
            for assign in _split_multidegree(d, [hd[v] for v in hv]):
                lens = {v: sum(e.values()) for v, e in zip(hv, assign)}
                top = self._survivor_len(h, lens)
                if top is None:
                    continue
                choices = [_normal_words_md(e, self.quotient) for e in assign]
                for ws in product(*choices):
                    inst = self.instance(h, dict(zip(hv, ws)))
                    if inst:
                        space.add({_col(w): c for w, c in inst.items()})
        for v in d:
            lower = dict(d)
            lower[v] -= 1
            if lower[v] == 0:
                del lower[v]
            if not lower:
                continue
            lspace = self._homog_work(md_key(lower))
            for _, r in lspace.pivots:
                terms = {w: c for (_, w), c in r.items()}
                for prod_terms in (self._mul({(v,): F.one}, terms), self._mul(terms, {(v,): F.one})):
                    if prod_terms:
                        space.add({_col(w): c for w, c in prod_terms.items()})
        return space


def _normal_words_md(e, quotient):
    ws = enumerate_words(e)
    if not quotient:
        return ws
    return sorted({metabelian_normal(w) for w in ws}, key=word_key)


def _split_multidegree(d, mults):
    """All ways to write d = sum_i mults[i] * e_i with every e_i nonzero."""
    letters = sorted(d)

    def rec(i, remaining):
        if i == len(mults):
            if all(v == 0 for v in remaining.values()):
                yield []
            return
        mu = mults[i]
        opts = [range(0, remaining[a] // mu + 1) for a in letters]
        for counts in product(*opts):
            if not any(counts):
                continue
            e = {a: c for a, c in zip(letters, counts) if c}
            rem = {a: remaining[a] - mu * e.get(a, 0) for a in letters}
            for rest in rec(i + 1, rem):
                yield [e] + rest

    yield from rec(0, dict(d))


def _canonical_regular(f: LPoly):
    """Rename the variables of f to 1..k (order preserving)."""
    from .freealg import rename

    vs = f.variables()
    mp = {v: j + 1 for j, v in enumerate(vs)}
    return rename(f, mp), len(vs)


def tideal_component(gens, d, field: Field = None, quotient="auto", slack=0) -> ComponentSpace:
    """Degree-d part of the T-ideal generated by gens.

    Over Q the component is graded by multidegree.  Over GF(q) identities
    need not be multihomogeneous, so d is read as the filtered space of
    regular polynomials in the letters of d with length <= |d|."""
    gens = list(gens)
    field = field or (gens[0].field if gens else None)
    eng = TIdealEngine(gens, field, quotient=quotient, slack=slack)
    if field.is_finite:
        dd = dict(md_key(d))
        return eng.filtered(len(dd), sum(dd.values()))
    return eng.homogeneous(d)


def in_tideal(f: LPoly, gens, quotient="auto", slack=0, engine=None) -> bool:
    """Membership of f in the T-ideal generated by gens (degree-bounded).

    Over Q f must be multihomogeneous.  Over GF(q) f must be regular
    (every variable in every word); it is tested in the filtered space."""
    if f.is_zero():
        return True
    F = f.field
    eng = engine or TIdealEngine(list(gens), F, quotient=quotient, slack=slack)
    if F.is_finite:
        supports = {frozenset(w) for w in f.terms}
        if len(supports) != 1:
            raise EngineError("polynomial is not regular: words use different variable sets")
        g, k = _canonical_regular(f)
        return eng.filtered(k, g.degree()).contains(g)
    d = multidegree_of(f)
    if d == MIXED:
        raise EngineError("polynomial is not multihomogeneous; split it first")
    return eng.homogeneous(d).contains(f)


# ---- RR7 ------------------------------------------------------------------

def theta(n: int, alpha, field: Field):
    if n < -1:
        raise EngineError("theta is defined for n >= -1")
    F = field
    prev, cur = F.zero, F.one  # theta_{-1}, theta_0
    if n == -1:
        return prev
    for _ in range(n):
        prev, cur = cur, F.add(F.mul(alpha, prev), cur)
    return cur


@dataclass(frozen=True)
class RR7Case:
    kind: str  # Alpha0 | DistinctRootsInK | DoubleRoot | Irreducible
    roots: tuple = ()
    c: object = None

    def describe(self, F: Field) -> str:
        if self.kind == "DistinctRootsInK":
            return f"DistinctRootsInK(r1={F.fmt(self.roots[0])}, r2={F.fmt(self.roots[1])})"
        if self.kind == "DoubleRoot":
            return f"DoubleRoot(r={F.fmt(self.roots[0])})"
        if self.kind == "Irreducible":
            return f"Irreducible(c={F.fmt(self.c)})"
        return "Alpha0"


def rr7_roots(field: Field, alpha):
    """Roots of t^2 - t - alpha by exhaustive search."""
    F = field
    return [t for t in F.elements() if F.is_zero(F.sub(F.sub(F.mul(t, t), t), alpha))]


def rr7_classify(field: Field, alpha) -> RR7Case:
    F = field
    if not F.is_finite:
        raise EngineError("rr7_classify needs a finite field")
    if F.is_zero(alpha):
        return RR7Case("Alpha0")
    roots = rr7_roots(F, alpha)
    if len(roots) == 2:
        return RR7Case("DistinctRootsInK", tuple(roots))
    if len(roots) == 1:
        if F.char == 2:
            raise EngineError("double root in characteristic 2 is impossible")
        return RR7Case("DoubleRoot", (roots[0],))
    c = F.neg(F.div(F.add(F.one, F.mul(F.from_int(2), alpha)), alpha))
    return RR7Case("Irreducible", (), c)


def mat_mul(F, X, Y):
    return [
        [F.add(F.mul(X[i][0], Y[0][j]), F.mul(X[i][1], Y[1][j])) for j in range(2)] for i in range(2)
    ]


def rr7_matrix(alpha, F):
    return [[F.zero, alpha], [F.one, F.one]]


def rr7_matrix_power(m: int, alpha, field: Field):
    """A^m for A = [[0, alpha], [1, 1]] by repeated multiplication."""
    if m < 1:
        raise EngineError("m >= 1 required")
    F = field
    A = rr7_matrix(alpha, F)
    P = A
    for _ in range(m - 1):
        P = mat_mul(F, P, A)
    return P


def rr7_theta_matrix(m: int, alpha, field: Field):
    F = field
    th = lambda n: theta(n, alpha, F)
    return [[F.mul(alpha, th(m - 2)), F.mul(alpha, th(m - 1))], [th(m - 1), th(m)]]


# ---- verification -----------------------------------------------------------

@dataclass
class Check:
    name: str
    multidegree: list
    expected: str
    computed: str
    passed: bool
    note: str = ""

    def to_json(self):
        return {
            "name": self.name,
            "multidegree": [list(p) for p in self.multidegree],
            "expected": self.expected,
            "computed": self.computed,
            "pass": bool(self.passed),
        }


@dataclass
class VerificationReport:
    algebra: str
    field: str
    alpha: str = None
    checks: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)
    runtime_ms: int = 0
    codims: dict = dc_field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, *args, **kw):
        self.checks.append(Check(*args, **kw))


# claimed closed codimension formulas (multilinear, any field)
def closed_cn(name: str, n: int, field: Field):
    if name == "L2":
        return 1 if n == 1 else n - 1
    if name in ("L4", "RR11", "RR6", "RR7", "RR9"):
        return n
    if name == "RR2":
        return {1: 1, 2: 2}.get(n, 2 * n - 1)
    if name == "RR3":
        if n == 2:
            return 1 if field.char == 2 else 2
        return 1 if n == 1 else n - 1
    if name == "L3":
        return {1: 1, 2: 1}.get(n, 0)
    if name in ("RR4", "RR10"):
        return {1: 1, 2: 2}.get(n, 0)
    if name == "RR5":
        return {1: 1, 2: 1}.get(n, 0)
    return None


RR6_FIELDS = {"even": (2, 4), "odd": (3, 5)}


def _basis_or_none(name, field, d, alpha):
    try:
        return claimed_basis(name, field, d, alpha=alpha)
    except NoBasis:
        return None


def independent_subset(A: AlgebraDef, words):
    """Greedy (canonical order) subset of words independent modulo T(A)."""
    rows = evaluation_rows(A, words)
    space = RowSpace(A.field)
    keep, drop = [], []
    for w, r in zip(words, rows):
        (keep if space.add(r) else drop).append(w)
    return keep, drop


def verify_presentation(name: str, field: Field, alpha=None, D: int = 5, cost_cap=DEFAULT_COST_CAP,
                        slack=0, timing=True, support_k=3) -> VerificationReport:
    """Generator identities, then the triple equality
    #words - rank(T-ideal part) = codimension = #claimed basis words
    for every component up to degree D, and the closed c_n formula."""
    from .freealg import format_poly, format_word

    t0 = time.perf_counter()
    F = field
    A = make_algebra(name, F, alpha)
    pres = presentation(name, F, A.alpha)
    alpha_txt = None if A.alpha is None else F.fmt(A.alpha)
    rep = VerificationReport(name, F.name, alpha_txt)
    rep.notes.extend(pres.notes)
    for label, g in zip(pres.labels, pres.generators):
        try:
            ok = is_identity(A, g, cost_cap=cost_cap)
            rep.add(f"generator:{label}", [list(p) for p in md_key(_md_or_support(g))],
                    "identity", "identity" if ok else "not an identity", ok)
        except CostCapExceeded as e:
            rep.add(f"generator:{label}", [], "identity", f"cost cap: {e}", False)
    eng = TIdealEngine(pres.generators, F, quotient="auto", slack=slack)
    if eng.quotient:
        rep.notes.append("T-ideal spans computed modulo (x1x2)(x3x4), which the generators imply")
    has_basis = _basis_or_none(name, F, {1: 1}, alpha_txt) is not None
    asserted = not (name == "RR8" and F.is_finite and F.q != 2 and F.char == 2)
    if not F.is_finite:
        for n in range(1, D + 1):
            d = {i: 1 for i in range(1, n + 1)}
            md = [[i, 1] for i in range(1, n + 1)]
            comp = eng.homogeneous(d)
            quot = comp.quotient_dim
            cod = codimension(A, d, cost_cap)
            rep.codims[n] = cod
            rep.add(f"tideal_quotient n={n}", md, str(cod), f"{len(comp.words)}-{comp.rank}={quot}", quot == cod)
            if has_basis:
                basis = claimed_basis(name, F, d, alpha=alpha_txt)
                label = f"n={n}"
                if name == "RR2" and n == 3:
                    keep, drop = independent_subset(A, basis)
                    if drop:
                        rep.notes.append(
                            f"RR2 n=3: literal basis reading gives {len(basis)} words; dropped "
                            + ", ".join(format_word(w) for w in drop)
                            + f" (dependent modulo T), leaving {len(keep)}"
                        )
                        basis, label = keep, f"n={n} (adjusted)"
                rep.add(f"basis_count {label}", md, str(cod), str(len(basis)), len(basis) == cod)
                r = words_function_rank(A, basis)
                rep.add(f"basis_independent {label}", md, str(len(basis)), str(r), r == len(basis))
            closed = closed_cn(name, n, F)
            if closed is not None:
                rep.add(f"closed_form c_{n}", md, str(closed), str(cod), closed == cod)
    else:
        for k in range(1, D + 1):
            md = [[i, 1] for i in range(1, k + 1)]
            for N in range(k, D + 1):
                tag = f"k={k},deg<={N}"
                comp = eng.filtered(k, N)
                quot = comp.quotient_dim
                cod = filtered_codimension(A, k, N)
                rep.add(f"tideal_quotient {tag}", md, str(cod), f"{len(comp.words)}-{comp.rank}={quot}",
                        quot == cod or not asserted)
            d = {i: 1 for i in range(1, k + 1)}
            cod = codimension(A, d, cost_cap)
            rep.codims[k] = cod
            closed = closed_cn(name, k, F)
            if closed is not None:
                rep.add(f"closed_form c_{k}", md, str(closed), str(cod), closed == cod)
        if has_basis:
            dims = support_function_dims(A, support_k)
            cap = 2 * F.q
            for k in range(1, support_k + 1):
                md = [[i, 1] for i in range(1, k + 1)]
                basis = []
                for dd in _capped_multidegrees(k, cap):
                    basis.extend(claimed_basis(name, F, dd, alpha=alpha_txt))
                tag = f"support k={k}"
                rep.add(f"basis_count {tag}", md, str(dims[k]), str(len(basis)),
                        len(basis) == dims[k] or not asserted)
                r = words_function_rank(A, basis)
                rep.add(f"basis_independent {tag}", md, str(len(basis)), str(r), r == len(basis) or not asserted)
        if not asserted:
            rep.notes.append("component checks reported but not asserted for this field")
    rep.runtime_ms = int((time.perf_counter() - t0) * 1000) if timing else 0
    return rep


def _md_or_support(g: LPoly):
    d = multidegree_of(g)
    if d == MIXED:
        return {v: 1 for v in g.variables()}
    return d


def _capped_multidegrees(k, cap):
    """Multidegrees on x1..xk with entries in 1..cap."""
    return [{i + 1: m for i, m in enumerate(ms)} for ms in product(range(1, cap + 1), repeat=k)]


def _multidegrees(k, N):
    """Multidegrees on x1..xk with every entry >= 1 and total <= N."""
    out = []
    for total in range(k, N + 1):
        for comp in _compositions(total - k, k):
            out.append({i + 1: c + 1 for i, c in enumerate(comp)})
    return out
