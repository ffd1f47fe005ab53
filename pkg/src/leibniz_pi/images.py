"""Images f(A) of polynomials on finite algebras and their shapes."""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import AlgebraDef
from .engine import DEFAULT_COST_CAP, CostCapExceeded, EngineError, exhaustive_cost, exhaustive_values
from .freealg import MIXED, LPoly, multidegree_of

SHAPES = ("Zero", "LineKe1", "ScaledSquares", "WholeAlgebra", "Other")


@dataclass(frozen=True)
class ImageClass:
    kind: str
    lam: int = None  # ScaledSquares only
    elements: frozenset = None  # Other only

    def describe(self, F) -> str:
        if self.kind == "ScaledSquares":
            return f"ScaledSquares({F.fmt(self.lam)})"
        if self.kind == "Other":
            return f"Other({format_set(F, self.elements)})"
        return self.kind


def image_set(A: AlgebraDef, f: LPoly, cost_cap=DEFAULT_COST_CAP) -> frozenset:
    """All values of f on A, by exhaustive evaluation."""
    import numpy as np

    F = A.field
    if not F.is_finite:
        raise EngineError("images are computed over finite fields only")
    if f.field != F:
        raise EngineError(f"polynomial over {f.field.name}, algebra over {F.name}")
    if f.is_zero():
        return frozenset({tuple([0] * A.dim)})
    cost = exhaustive_cost(A, f)
    if cost_cap is not None and cost > cost_cap:
        raise CostCapExceeded(cost, cost_cap)
    out = set()
    for acc in exhaustive_values(A, f):
        codes = np.zeros(len(acc[0]), dtype=np.int64)
        for a in reversed(acc):
            codes = codes * F.q + a
        for c in np.unique(codes).tolist():
            out.add(_decode(c, F.q, A.dim))
    return frozenset(out)


def _decode(code, q, dim):
    v = []
    for _ in range(dim):
        v.append(code % q)
        code //= q
    return tuple(v)


def is_subspace(A: AlgebraDef, S) -> bool:
    """0 in S and S closed under addition and scalar multiples."""
    F = A.field
    S = set(map(tuple, S))
    if tuple([F.zero] * A.dim) not in S:
        return False
    for a in S:
        for c in F.elements():
            if tuple(F.mul(c, x) for x in a) not in S:
                return False
        for b in S:
            if tuple(F.add(x, y) for x, y in zip(a, b)) not in S:
                return False
    return True


def _line_e1(F, coeffs, dim):
    return frozenset(tuple([c] + [F.zero] * (dim - 1)) for c in coeffs)


def classify_image(A: AlgebraDef, f: LPoly, cost_cap=DEFAULT_COST_CAP) -> ImageClass:
    """Match f(A) against {0}, K e1, lambda K^2 e1 and A, in that order."""
    if not f.is_zero() and multidegree_of(f) == MIXED:
        raise EngineError("classify_image needs a multihomogeneous polynomial")
    F = A.field
    S = image_set(A, f, cost_cap)
    if A.dim != 2:
        return ImageClass("Other", elements=S)
    elems = list(F.elements())
    if S == frozenset({(F.zero, F.zero)}):
        return ImageClass("Zero")
    if S == _line_e1(F, elems, 2):
        return ImageClass("LineKe1")
    squares = {F.mul(s, s) for s in elems}
    for lam in elems:
        if F.is_zero(lam):
            continue
        if S == _line_e1(F, {F.mul(lam, s) for s in squares}, 2):
            return ImageClass("ScaledSquares", lam=lam)
    if len(S) == F.q ** 2:
        return ImageClass("WholeAlgebra")
    return ImageClass("Other", elements=S)


def format_element(F, v) -> str:
    parts = []
    for k, c in enumerate(v, start=1):
        if F.is_zero(c):
            continue
        if c == F.one:
            parts.append(f"e{k}")
        else:
            txt = F.fmt(c)
            parts.append(f"({txt})e{k}" if "+" in txt else f"{txt}e{k}")
    return " + ".join(parts) if parts else "0"


def format_set(F, S) -> str:
    items = sorted(S, key=lambda v: (sum(1 for x in v if x), tuple(reversed(v))))
    return "{" + ", ".join(format_element(F, v) for v in items) + "}"
