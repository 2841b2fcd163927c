from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from twistroot._exact import QI, nullspace, parse_scalar, rank, scalar_str, simplest_between, solve

rationals = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 100)


def test_simplest_between_prefers_zero():
    assert simplest_between(F(-1), False, F(3), True) == 0
    assert simplest_between(None, False, None, False) == 0


def test_simplest_between_open_interval():
    x = simplest_between(F(1), True, F(2), True)
    assert 1 < x < 2


def test_simplest_between_degenerate_closed():
    assert simplest_between(F(5, 3), False, F(5, 3), False) == F(5, 3)


def test_simplest_between_empty_raises():
    with pytest.raises(ValueError):
        simplest_between(F(1), True, F(1), False)


@given(rationals, rationals, st.booleans(), st.booleans())
def test_simplest_between_respects_bounds(a, b, sa, sb):
    lo, hi = min(a, b), max(a, b)
    if lo == hi and (sa or sb):
        return
    x = simplest_between(lo, sa, hi, sb)
    assert (x > lo) if sa else (x >= lo)
    assert (x < hi) if sb else (x <= hi)


def test_solve_and_nullspace():
    rows = [[F(1), F(2), F(0)], [F(0), F(1), F(1)]]
    x = solve(rows, [F(3), F(1)], 3)
    assert [sum(a * b for a, b in zip(r, x)) for r in rows] == [3, 1]
    (v,) = nullspace(rows, 3)
    assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    assert rank(rows, 3) == 2
    assert solve([[F(1)], [F(1)]], [F(0), F(1)], 1) is None


def test_gaussian_rationals():
    i = QI(0, 1)
    assert i * i == QI(-1, 0)
    assert (QI(1, 1) / QI(1, -1)) == i
    assert parse_scalar(scalar_str(QI(F(1, 2), -3))) == QI(F(1, 2), -3)
    assert parse_scalar("7/3") == F(7, 3)
