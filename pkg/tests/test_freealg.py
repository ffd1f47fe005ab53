from __future__ import annotations

import pytest

from leibniz_pi.freealg import (
    MIXED,
    FreeAlgError,
    LPoly,
    ParseError,
    enumerate_words,
    format_poly,
    leading_decomposition,
    left_power,
    lproduct,
    multidegree_of,
    parse_poly,
    substitute,
)
from leibniz_pi.catalog import S3

W = LPoly.word
x = LPoly.var


def test_right_multiplication_by_product():
    assert lproduct(x(1), W((2, 3))) == W((1, 2, 3)) - W((1, 3, 2))


def test_append_letter():
    assert lproduct(W((1, 2)), x(3)) == W((1, 2, 3))


def test_two_by_two_product():
    assert lproduct(W((1, 2)), W((3, 4))) == W((1, 2, 3, 4)) - W((1, 2, 4, 3))


def test_left_power_examples():
    assert left_power(x(1), x(2), 3) == W((1, 2, 2, 2))
    assert left_power(x(1), x(2), 0) == x(1)
    expected = W((1, 2, 2)) + W((1, 2, 3)) + W((1, 3, 2)) + W((1, 3, 3))
    assert left_power(x(1), x(2) + x(3), 2) == expected


def test_substitute_examples():
    f = W((1, 2))
    assert substitute(f, {1: x(3), 2: x(4)}) == W((3, 4))
    assert substitute(f, {1: x(1), 2: W((3, 4))}) == W((1, 3, 4)) - W((1, 4, 3))
    s3 = parse_poly(S3)
    assert substitute(s3, {i: x(i) for i in (1, 2, 3)}) == s3
    with pytest.raises(FreeAlgError):
        substitute(s3, {1: x(1)})


def test_enumerate_words_examples():
    assert len(enumerate_words({1: 1, 2: 1, 3: 1})) == 6
    assert enumerate_words({1: 2, 2: 1}) == [(1, 1, 2), (1, 2, 1), (2, 1, 1)]
    assert enumerate_words({5: 1}) == [(5,)]


def test_multidegree_examples():
    assert multidegree_of(W((1, 2, 3)) - W((2, 1, 3))) == {1: 1, 2: 1, 3: 1}
    assert multidegree_of(W((1, 1)) + W((1, 2))) == MIXED
    assert multidegree_of(parse_poly(S3)) == {1: 1, 2: 1, 3: 1}


def test_leading_decomposition_examples():
    assert leading_decomposition(W((1, 2)) + W((2, 1))) == {1: W((1, 2)), 2: W((2, 1))}
    parts = leading_decomposition(parse_poly(S3))
    assert parts[1] == W((1, 2, 3)) - W((1, 3, 2))
    assert parts[2] == W((2, 3, 1)) - W((2, 1, 3))
    assert parts[3] == W((3, 1, 2)) - W((3, 2, 1))
    assert leading_decomposition(LPoly.zero()) == {}


def test_parse_examples():
    assert parse_poly("x1 (x2 x3)") == W((1, 2, 3)) - W((1, 3, 2))
    assert parse_poly("x2 x1^(3)") == W((2, 1, 1, 1))
    assert parse_poly("x1 x2 - x2 x1") == W((1, 2)) - W((2, 1))


def test_format_examples():
    assert format_poly(W((2, 1, 1, 1))) == "x2 x1^(3)"
    assert format_poly(LPoly.zero()) == "0"
    assert format_poly(W((1, 2)) - W((2, 1))) == "x1 x2 - x2 x1"


@pytest.mark.parametrize("bad", ["x1 +", "(x1 x2", "x0", "y1", "x1^(", ""])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_poly(bad)
