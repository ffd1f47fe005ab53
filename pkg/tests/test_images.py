from __future__ import annotations

import pytest

from leibniz_pi.catalog import make_algebra
from leibniz_pi.engine import EngineError, is_identity
from leibniz_pi.freealg import LPoly, parse_poly
from leibniz_pi.images import classify_image, format_set, image_set, is_subspace
from leibniz_pi.scalars import make_field

import oracles

GF2, GF3, GF4, GF5 = (make_field(f"GF({q})") for q in (2, 3, 4, 5))


def test_image_set_examples():
    assert image_set(make_algebra("L2", GF3), parse_poly("x2 x1", GF3)) == {(0, 0), (1, 0), (2, 0)}
    assert image_set(make_algebra("L4", GF2), parse_poly("x1 x2", GF2)) == {(0, 0), (1, 0)}
    assert image_set(make_algebra("L3", GF3), parse_poly("x1 x1", GF3)) == {(0, 0), (1, 0)}


def test_image_set_matches_brute_force():
    for name, q, terms in [("L2", 3, {(2, 1): 1}), ("L3", 5, {(1, 1): 2}), ("L4", 3, {(1, 2, 1): 1, (2, 1, 1): 2}),
                           ("RR6", 2, {(1, 2, 2): 1})]:
        F = make_field(f"GF({q})")
        A = make_algebra(name, F, 1 if name == "RR6" else None)
        f = LPoly({w: F.from_int(c) for w, c in terms.items()}, F)
        assert image_set(A, f) == oracles.brute_image(name, q, terms, 1 if name == "RR6" else 0)


def test_is_subspace_examples():
    A = make_algebra("L2", GF3)
    assert is_subspace(A, {(0, 0), (1, 0), (2, 0)})
    assert not is_subspace(A, {(0, 0), (1, 0)})
    assert is_subspace(A, {(0, 0)})


def test_classify_examples():
    c = classify_image(make_algebra("L3", GF3), parse_poly("2 x1 x1", GF3))
    assert c.describe(GF3) == "ScaledSquares(2)"
    assert format_set(GF3, image_set(make_algebra("L3", GF3), parse_poly("2 x1 x1", GF3))) == "{0, 2e1}"
    assert classify_image(make_algebra("L2", GF5), parse_poly("x2 x1 x1", GF5)).kind == "LineKe1"
    assert classify_image(make_algebra("L2", GF3), parse_poly("x1^(2)", GF3)).kind == "Zero"


def test_gf4_squares_surjective():
    A = make_algebra("L3", GF4)
    for lam in range(1, 4):
        f = parse_poly("x1 x1", GF4).scale(lam)
        assert classify_image(A, f).kind == "LineKe1"


def test_three_dim_reports_other():
    c = classify_image(make_algebra("RR9", GF2), parse_poly("x1 x2", GF2))
    assert c.kind == "Other" and c.elements


def test_mixed_is_rejected():
    with pytest.raises(EngineError):
        classify_image(make_algebra("L2", GF3), parse_poly("x1 x2 + x1", GF3))


def test_zero_image_iff_identity():
    A = make_algebra("L4", GF3)
    for text in ["x1 (x2 x3)", "x1 x2^(3) - x1 x2", "x1 x2", "x1 x2 - x2 x1", "x2 x1 x1"]:
        f = parse_poly(text, GF3)
        assert (image_set(A, f) == {(0, 0)}) == is_identity(A, f)
