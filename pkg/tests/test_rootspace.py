from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, strategies as st

from twistroot.checks import admissible_systems, listed_finite_roots
from twistroot.quadratic import twisted_root_data
from twistroot.rootspace import KINDS, PARITY_TABLE, FamilyId, RootSystem, Weight, form, parse_kind


def W(rs, coords, k=0):
    return rs.weight(coords, k)


@pytest.fixture
def aeo():
    return RootSystem.of("A-even-odd-2", 1, 1)


@pytest.fixture
def d2():
    return RootSystem.of("D-2", 1, 1)


def test_form_values():
    e1, d1 = Weight.eps_unit(1, 1, 1), Weight.del_unit(1, 1, 1)
    delta = Weight.null(1, 1)
    assert form(e1, e1) == 1
    assert form(d1, d1) == -1
    assert form(e1 + d1, e1 + d1) == 0
    assert form(delta, e1 + delta.scale(3)) == 0


def test_form_dimension_mismatch():
    with pytest.raises(ValueError):
        form(Weight.eps_unit(1, 1, 1), Weight.eps_unit(2, 1, 1))


def test_membership_examples(aeo):
    assert aeo.contains(W(aeo, (1, 0), 5))
    assert not aeo.contains(W(aeo, (2, 0), 2))
    assert aeo.contains(W(aeo, (0, 2), 2))


def test_non_integral_is_not_a_root(aeo):
    assert not aeo.contains(Weight((F(1, 2),), (F(1, 2),), F(0)))


def test_classify_examples(aeo, d2):
    assert aeo.classify(W(aeo, (2, 0), 1)) == "Real"
    assert d2.classify(W(d2, (1, 1))) == "Nonsingular"
    assert d2.classify(W(d2, (0, 0), 3)) == "Imaginary"
    assert d2.classify(W(d2, (0, 0))) == "Imaginary"
    assert d2.classify(W(d2, (2, 0))) == "NotARoot"


def test_string_data_examples():
    rs = RootSystem.of("A-even-even-4", 1, 1)
    assert rs.string_data(W(rs, (2, 0))) == (4, 2)
    assert rs.string_data(W(rs, (1, 0))) == (1, 0)
    assert rs.string_data(W(rs, (0, 2))) == (4, 0)
    with pytest.raises(ValueError):
        rs.string_data(W(rs, (3, 0)))


def test_finite_roots_examples(aeo, d2):
    def pm(*vs):
        return {v for base in vs for v in (base, tuple(-x for x in base))}

    assert set(aeo.finite_root_coords) == {(0, 0)} | pm((1, 0), (0, 1), (2, 0), (0, 2), (1, 1), (1, -1))
    assert set(d2.finite_root_coords) == {(0, 0)} | pm((1, 0), (0, 1), (0, 2), (1, 1), (1, -1))
    rs = RootSystem.of("A-odd-odd-2", 2, 1)
    expected = {(0, 0, 0)} | pm((2, 0, 0), (0, 2, 0), (1, 1, 0), (1, -1, 0), (0, 0, 2),
                                (1, 0, 1), (1, 0, -1), (0, 1, 1), (0, 1, -1))
    assert set(rs.finite_root_coords) == expected


def test_parity_examples(d2):
    assert d2.parity(W(d2, (1, 1), 2)) == "odd"
    assert d2.parity(W(d2, (0, 2), 2)) == "even"
    for k in range(-4, 5):
        assert d2.parity(W(d2, (0, 0), k)) == "even"


def test_parity_of_imaginary_roots_in_order_four_family():
    """The order-4 twist puts odd root vectors at odd multiples of delta."""
    rs = RootSystem.of("A-even-even-4", 1, 1)
    assert rs.parity(W(rs, (0, 0), 1)) == "odd"
    assert rs.parity(W(rs, (0, 0), 2)) == "even"


def test_admissibility():
    with pytest.raises(ValueError):
        FamilyId("A-odd-odd-2", 1, 1)
    with pytest.raises(ValueError):
        FamilyId("A-even-odd-2", 2, 0)
    with pytest.raises(ValueError):
        FamilyId("A-even-even-4", 0, 0)
    with pytest.raises(ValueError):
        FamilyId("D-2", 3, 0)
    assert parse_kind("Dm+1,n^2") == "D-2"
    assert parse_kind("A2m,2n^4") == "A-even-even-4"


def test_weight_json_roundtrip(aeo):
    w = Weight((F(1, 3),), (F(-2),), F(5))
    assert Weight.from_json(w.to_json(), 1, 1) == w


SYSTEMS = [rs for kind in KINDS for rs in admissible_systems(kind)]


@pytest.mark.parametrize("rs", SYSTEMS, ids=lambda r: f"{r.kind}-{r.m}-{r.n}")
def test_symmetry_and_string_roundtrip(rs):
    depth = 12
    for coords in product(range(-2, 3), repeat=rs.dim):
        neg = tuple(-x for x in coords)
        for k in range(-depth, depth + 1):
            assert rs.contains_coords(coords, k) == rs.contains_coords(neg, -k)
        if any(coords) and coords in rs.finite_root_coords:
            r, k0 = rs.string_data_coords(coords)
            assert 0 <= k0 < r and (k0 == 0 or r % k0 == 0)


@pytest.mark.parametrize("rs", SYSTEMS, ids=lambda r: f"{r.kind}-{r.m}-{r.n}")
def test_classification_matches_listed_sets(rs):
    re, ns = listed_finite_roots(rs.kind, rs.m, rs.n)
    for w in rs.enumerate(4):
        cls = rs.classify(w)
        key = tuple(int(x) for x in w.coords)
        assert (cls == "Real") == (key in re)
        assert (cls == "Nonsingular") == (key in ns)


@pytest.mark.parametrize("rs", SYSTEMS, ids=lambda r: f"{r.kind}-{r.m}-{r.n}")
def test_doubled_odd_real_roots_are_even(rs):
    for w in rs.enumerate(6):
        if rs.classify(w) == "Real" and rs.parity(w) == "odd":
            double = w.scale(2)
            if rs.contains(double):
                assert rs.parity(double) == "even"


@pytest.mark.parametrize("rs", SYSTEMS, ids=lambda r: f"{r.kind}-{r.m}-{r.n}")
def test_odd_part_of_real_coset_has_allowed_shape(rs):
    for c in rs.real_coords:
        odd = {k for k in range(-8, 9) if rs.contains_coords(c, k) and rs.parity_coords(c, k) == "odd"}
        allowed = [set(), set(range(-8, 9)), {k for k in range(-8, 9) if k % 2 == 0},
                   {k for k in range(-8, 9) if k % 2}]
        assert odd in allowed


ORACLE_CASES = [("A-even-odd-2", 1, 1), ("A-even-odd-2", 0, 1), ("A-odd-odd-2", 2, 1), ("A-odd-odd-2", 2, 2),
                ("A-even-even-4", 1, 1), ("A-even-even-4", 0, 1), ("A-even-even-4", 1, 0), ("D-2", 1, 1),
                ("D-2", 0, 1)]


@pytest.mark.parametrize("kind,m,n", ORACLE_CASES)
def test_parity_table_matches_matrix_realization(kind, m, n):
    rs = RootSystem.of(kind, m, n)
    depth = 6
    data = twisted_root_data(kind, m, n, depth)
    for (coords, k), (even, odd) in data.items():
        assert rs.contains_coords(coords, k)
        assert not (even and odd)
        assert rs.parity_coords(coords, k) == ("even" if even else "odd")
    for w in rs.enumerate(depth):
        assert (tuple(int(x) for x in w.coords), int(w.delta)) in data


def test_parity_table_covers_every_shape():
    from twistroot.rootspace import _STRINGS
    for kind in KINDS:
        assert set(_STRINGS[kind]) | {"0"} == set(PARITY_TABLE[kind])


coeff = st.integers(-3, 3)


@given(st.sampled_from(SYSTEMS), st.data())
def test_form_is_bilinear_and_symmetric(rs, data):
    def weight():
        return Weight(tuple(data.draw(coeff) for _ in range(rs.m)), tuple(data.draw(coeff) for _ in range(rs.n)),
                      data.draw(coeff))

    a, b, c = weight(), weight(), weight()
    s = F(data.draw(st.integers(-4, 4)), data.draw(st.integers(1, 4)))
    assert form(a, b) == form(b, a)
    assert form(a + b, c) == form(a, c) + form(b, c)
    assert form(a.scale(s), b) == s * form(a, b)
    assert form(Weight.null(rs.m, rs.n), a) == 0
