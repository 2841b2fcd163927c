import random

import pytest
from hypothesis import given, settings, strategies as st

from twistroot.checks import admissible_systems, brute_closed
from twistroot.cylsets import CylinderSet, ZSet, lex_nonneg, root_string, sign_split
from twistroot.rootspace import KINDS, RootSystem

DEPTH = 50
WIDE = 200


def atoms():
    small = st.integers(-10, 10)
    period = st.integers(1, 4)
    return st.one_of(
        st.builds(lambda pts: ZSet.finite(pts), st.lists(small, max_size=4)),
        st.builds(ZSet.progression, small, period),
        st.builds(ZSet.up_ray, small, period),
        st.builds(ZSet.down_ray, small, period),
        st.builds(ZSet.interval, small, small),
    )


@st.composite
def zsets(draw):
    acc = ZSet.empty()
    for a in draw(st.lists(atoms(), max_size=3)):
        acc = acc | a
    if draw(st.booleans()):
        acc = acc - draw(atoms())
    return acc


def window(z, d=DEPTH):
    return {k for k in range(-d, d + 1) if k in z}


@given(zsets(), zsets())
def test_zset_boolean_ops_match_brute_force(a, b):
    A, B = window(a), window(b)
    assert window(a | b) == A | B
    assert window(a & b) == A & B
    assert window(a - b) == A - B
    assert window(-a) == {-k for k in A}


@given(zsets(), zsets())
def test_zset_sumset_matches_brute_force(a, b):
    A, B = window(a, WIDE), window(b, WIDE)
    brute = {x + y for x in A for y in B if abs(x + y) <= DEPTH}
    assert window(a + b) == brute


@given(zsets())
def test_zset_normal_form_is_canonical(a):
    rebuilt = ZSet.empty()
    for kind, x, p in a.atoms():
        rebuilt = rebuilt | {"point": lambda: ZSet.finite([x]), "prog": lambda: ZSet.progression(x, p),
                             "up": lambda: ZSet.up_ray(x, p), "down": lambda: ZSet.down_ray(x, p)}[kind]()
    assert rebuilt == a
    assert ZSet.from_json(a.to_json()) == a


@given(zsets(), st.integers(-20, 20))
def test_zset_shift_and_nearest(a, s):
    assert window(a.shift(s), 30) == {k + s for k in window(a, 60) if abs(k + s) <= 30}
    if not a.is_empty():
        k = a.nearest()
        assert k in a
        assert all(abs(j) >= abs(k) for j in window(a, abs(k)))


@given(st.integers(-5, 5), st.integers(-5, 5), zsets())
def test_sign_split_partitions(c, d, within):
    pos, zero, neg = sign_split(c, d, within)
    for k in range(-DEPTH, DEPTH + 1):
        v = c + k * d
        assert (k in pos) == (k in within and v > 0)
        assert (k in zero) == (k in within and v == 0)
        assert (k in neg) == (k in within and v < 0)


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=3), zsets())
def test_lex_nonneg_is_lexicographic(levels, within):
    got = lex_nonneg(levels, within)
    for k in range(-DEPTH, DEPTH + 1):
        vals = [c + k * d for c, d in levels]
        first = next((v for v in vals if v != 0), 0)
        assert (k in got) == (k in within and first >= 0)


def test_union_of_progressions_normalizes():
    assert ZSet.progression(0, 4) | ZSet.progression(2, 4) == ZSet.progression(0, 2)


# ---------------------------------------------------------------------------
# cylinder sets

SYSTEMS = [rs for kind in KINDS for rs in admissible_systems(kind)]


def random_cylinder(rs, rng, max_components=5, symmetric=False):
    comps = {}
    keys = rng.sample(list(rs.finite_root_coords), min(max_components, len(rs.finite_root_coords)))
    for key in keys:
        choice = rng.randrange(5)
        a = rng.randint(-6, 6)
        p = rng.choice([1, 2, 4])
        z = [ZSet.full(), ZSet.up_ray(a, p), ZSet.down_ray(a, p), ZSet.finite([a, a + p]),
             ZSet.progression(a, p)][choice]
        z = z & root_string(rs, key)
        comps[key] = z
        if symmetric:
            comps[tuple(-x for x in key)] = -z & root_string(rs, tuple(-x for x in key))
    return CylinderSet(rs, comps)


def elements(S, d=DEPTH):
    return {(tuple(int(x) for x in w.coords), int(w.delta)) for w in S.elements(d)}


def roots_in(rs, d):
    return {(c, k) for c in rs.finite_root_coords for k in range(-d, d + 1) if rs.contains_coords(c, k)}


@pytest.mark.parametrize("rs", SYSTEMS, ids=lambda r: f"{r.kind}-{r.m}-{r.n}")
def test_cylinder_algebra_matches_brute_force(rs):
    rng = random.Random(hash((rs.kind, rs.m, rs.n)) & 0xFFFF)
    R = roots_in(rs, DEPTH)
    for _ in range(15):
        a, b = random_cylinder(rs, rng), random_cylinder(rs, rng)
        A, B = elements(a), elements(b)
        assert elements(a | b) == A | B
        assert elements(a & b) == A & B
        assert elements(a - b) == A - B
        assert elements(a.negate()) == {(tuple(-x for x in c), -k) for c, k in A}
        assert a.issubset(a | b)
        # generator boundaries sit within 10 of zero, so every sum in the window has a summand pair here
        wa, wb = elements(a, DEPTH + 30), elements(b, DEPTH + 30)
        brute = set()
        for ca, ka in wa:
            for cb, kb in wb:
                s = (tuple(x + y for x, y in zip(ca, cb)), ka + kb)
                if abs(s[1]) <= DEPTH and s in R:
                    brute.add(s)
        assert elements(a.minkowski(b)) == brute


@pytest.mark.parametrize("rs", SYSTEMS, ids=lambda r: f"{r.kind}-{r.m}-{r.n}")
def test_parts_partition(rs):
    rng = random.Random(7)
    for _ in range(10):
        S = random_cylinder(rs, rng)
        re, ns, im, cross = S.parts()
        assert (re | ns | im) == S
        assert (re & ns).is_empty() and (re & im).is_empty() and (ns & im).is_empty()
        assert cross == S - im


@pytest.mark.parametrize("kind", KINDS)
def test_is_closed_agrees_with_brute_force(kind):
    """200 random subsets per family, brute force at three times the window bound."""
    rng = random.Random(kind)
    systems = admissible_systems(kind)
    verdicts = set()
    for i in range(200):
        rs = systems[i % len(systems)]
        S = random_cylinder(rs, rng, max_components=3, symmetric=i % 2 == 0)
        if i % 3 == 0:
            S = S | CylinderSet.imaginary(rs)
        rep = S.closure_report()
        wit = brute_closed(S, 3 * rep.bound)
        assert rep.closed == (wit is None)
        if not rep.closed:
            a, b, c = rep.witness
            assert S.member(a) and S.member(b) and rs.contains(c) and not S.member(c)
        verdicts.add(rep.closed)
    assert verdicts == {True, False}


def test_member_examples():
    rs = RootSystem.of("A-even-odd-2", 1, 1)
    assert CylinderSet.full(rs).member(rs.weight((1, 0), 7))
    S = CylinderSet(rs, {(0, 2): ZSet.progression(0, 2)})
    assert not S.member(rs.weight((0, 2), 3))
    assert CylinderSet.imaginary(rs).member(rs.weight((0, 0), -4))


def test_symmetry_examples():
    rs = RootSystem.of("A-even-odd-2", 1, 1)
    assert not CylinderSet.from_weights(rs, [rs.weight((1, 0))]).is_symmetric()
    assert CylinderSet.imaginary(rs).is_symmetric()


def test_closed_examples():
    rs = RootSystem.of("D-2", 1, 1)
    assert CylinderSet.full(rs).is_closed()
    pair = CylinderSet(rs, {(0, 2): root_string(rs, (0, 2)), (0, -2): root_string(rs, (0, -2))})
    # 2 delta_1 + (-2 delta_1 + 2k delta) = 2k delta is a root outside the set
    assert not pair.is_closed()
    assert (pair | CylinderSet.imaginary(rs)).is_closed()


def test_sdot_examples():
    rs = RootSystem.of("D-2", 1, 1)
    assert set(CylinderSet.imaginary(rs).sdot_coords()) == {(0, 0)}
    assert not CylinderSet.empty(rs).sdot_coords()


def test_parts_examples():
    rs = RootSystem.of("A-even-odd-2", 1, 1)
    _, _, im, _ = CylinderSet.full(rs).parts()
    assert im == CylinderSet.imaginary(rs)
    d2 = RootSystem.of("D-2", 1, 1)
    _, ns, _, _ = CylinderSet.full(d2).parts()
    assert set(ns.components) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}
    assert all(z == ZSet.progression(0, 2) for z in ns.components.values())
    re, ns, _, _ = CylinderSet.imaginary(d2).parts()
    assert re.is_empty() and ns.is_empty()


def test_set_algebra_examples():
    rs = RootSystem.of("A-odd-odd-2", 2, 1)
    up = CylinderSet.imaginary(rs, ZSet.up_ray(0))
    assert up.negate() == CylinderSet.imaginary(rs, ZSet.down_ray(0))
    a = CylinderSet.coset(rs, (0, 0, 2))
    b = CylinderSet.coset(rs, (0, 0, -2))
    assert a.minkowski(b) == CylinderSet.imaginary(rs, ZSet.progression(0, 2))


@settings(max_examples=30)
@given(st.sampled_from(SYSTEMS), st.integers(0, 10 ** 6))
def test_json_roundtrip(rs, seed):
    S = random_cylinder(rs, random.Random(seed))
    assert CylinderSet.from_json(rs, S.to_json()) == S
