import random
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from twistroot.checks import admissible_systems, brute_closed, brute_covers
from twistroot.cylsets import CylinderSet, ZSet
from twistroot.functionals import (Functional, Ineq, Infeasible, PipelineError, build_zeta1, find_base,
                                   fourier_motzkin, hybrid_parabolic, is_root_system, nonneg_part, parabolic,
                                   pipeline, solve_zeta, tri_decompose)
from twistroot.rootspace import KINDS, RootSystem
from twistroot.shadow import CosetClass, PreconditionError, ShadowAssignment, build_T, random_assignment


@pytest.fixture
def rs21():
    return RootSystem.of("A-odd-odd-2", 2, 1)


@pytest.fixture
def worked(rs21):
    classes = {c: CosetClass("FullLN") for c in rs21.real_coords if any(c[:2])}
    classes[(0, 0, 2)] = CosetClass("UpHybrid", 0, 0)
    return ShadowAssignment.from_classes(rs21, classes)


def functional(rs, eps=(), dels=(), delta=0):
    return Functional(tuple(eps) or (0,) * rs.m, tuple(dels) or (0,) * rs.n, delta)


# ---------------------------------------------------------------------------
# triangular decompositions


def test_zero_functional_is_trivial(rs21):
    S = CylinderSet.full(rs21)
    tri = tri_decompose(S, Functional.zero(2, 1))
    assert tri.zero == S and tri.plus.is_empty() and tri.minus.is_empty()


def test_imaginary_line_split(rs21):
    tri = tri_decompose(CylinderSet.imaginary(rs21), functional(rs21, delta=1))
    assert tri.plus.get((0, 0, 0)) == ZSet.up_ray(1)
    assert tri.zero.get((0, 0, 0)) == ZSet.finite([0])
    assert tri.minus.get((0, 0, 0)) == ZSet.down_ray(-1)


def test_coset_split(rs21):
    S = CylinderSet.coset(rs21, (0, 0, 2))
    tri = tri_decompose(S, functional(rs21, dels=(F(1, 2),), delta=1))
    assert tri.plus.get((0, 0, 2)) == ZSet.up_ray(0, 2)


SYSTEMS = [rs for kind in KINDS for rs in admissible_systems(kind)]
small_q = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@settings(max_examples=50)
@given(st.sampled_from(SYSTEMS), st.data())
def test_tri_decompose_partitions(rs, data):
    z = Functional.from_vector([data.draw(small_q) for _ in range(rs.dim + 1)], rs.m)
    S = CylinderSet.full(rs)
    tri = tri_decompose(S, z)
    assert (tri.plus | tri.zero | tri.minus) == S
    assert (tri.plus & tri.zero).is_empty() and (tri.plus & tri.minus).is_empty()
    assert tri.plus == tri.minus.negate()
    for w in S.elements(50):
        v = z(w)
        assert tri.plus.member(w) == (v > 0) and tri.zero.member(w) == (v == 0)


# ---------------------------------------------------------------------------
# parabolic subsets


def test_parabolic_trivial(rs21):
    par = parabolic(rs21, Functional.zero(2, 1))
    full = CylinderSet.full(rs21)
    assert par.P == full and par.levi == full


def test_parabolic_generic_levi_is_imaginary(rs21):
    lam = functional(rs21, eps=(F(1), F(1, 101)), dels=(F(1, 10201),))
    assert parabolic(rs21, lam).levi == CylinderSet.imaginary(rs21)


def test_parabolic_levi_from_zeta1(worked, rs21):
    ts = build_T(worked)
    zeta1 = build_zeta1(ts.T1, ts.T2)
    levi = parabolic(rs21, zeta1).levi
    assert (levi & ts.T) == (ts.T2 | CylinderSet.imaginary(rs21))


@settings(max_examples=25)
@given(st.sampled_from(SYSTEMS), st.data())
def test_parabolic_axioms_by_brute_force(rs, data):
    lam = Functional.from_vector([data.draw(small_q) for _ in range(rs.dim + 1)], rs.m)
    mu = Functional.from_vector([data.draw(small_q) for _ in range(rs.dim + 1)], rs.m)
    par = parabolic(rs, lam, mu)
    depth = 3 * par.P.window_bound()
    assert brute_covers(par.P, depth) is None
    assert brute_closed(par.P, depth) is None
    assert par.levi == (par.P & par.P.negate())


# ---------------------------------------------------------------------------
# Fourier-Motzkin


def test_fm_strict_bookkeeping():
    # x > 0, y - 2x > 0 is feasible; adding x - y >= 0 makes it infeasible
    sys = [Ineq((F(1), F(0)), True), Ineq((F(-2), F(1)), True)]
    x = fourier_motzkin(sys, 2)
    assert all(q.holds(x) for q in sys)
    with pytest.raises(Infeasible):
        fourier_motzkin(sys + [Ineq((F(1), F(-1)), False)], 2)


def test_fm_all_weak_returns_zero():
    assert fourier_motzkin([Ineq((F(1), F(1)), False)], 2) == [0, 0]


@settings(max_examples=200)
@given(st.lists(st.tuples(st.tuples(*[st.integers(-3, 3)] * 3), st.booleans()), min_size=1, max_size=7))
def test_fm_matches_grid_search(rows):
    ineqs = [Ineq(tuple(F(c) for c in coeffs), strict) for coeffs, strict in rows]
    try:
        x = fourier_motzkin(ineqs, 3)
    except Infeasible:
        x = None
    if x is not None:
        assert all(q.holds(x) for q in ineqs)
    else:
        # homogeneous cone: any solution scales into the grid below
        grid = [F(a, 4) for a in range(-12, 13)]
        assert not any(all(q.holds(p) for q in ineqs) for p in product(grid, repeat=3))


# ---------------------------------------------------------------------------
# solve_zeta


def test_solve_zeta_worked(worked, rs21):
    ts = build_T(worked)
    S = ts.T2 | CylinderSet.imaginary(rs21)
    P = hybrid_parabolic(worked, S, "AllUp")
    zeta = solve_zeta(S, P)
    assert zeta is not None
    assert 0 < 2 * zeta.del_vals[0] < 2 * zeta.delta_val
    assert nonneg_part(S, zeta) == P
    assert zeta(rs21.weight((0, 0, 2), 0)) > 0 > zeta(rs21.weight((0, 0, 2), -2))


def test_solve_zeta_everything(worked, rs21):
    ts = build_T(worked)
    S = ts.T2 | CylinderSet.imaginary(rs21)
    assert solve_zeta(S, S) == Functional.zero(2, 1)


def test_solve_zeta_not_closed(rs21):
    S = CylinderSet.imaginary(rs21)
    P = CylinderSet.imaginary(rs21, ZSet.up_ray(0) - ZSet.finite([2]) | ZSet.down_ray(-2))
    with pytest.raises(PreconditionError):
        solve_zeta(S, P)


def test_solve_zeta_with_flat_delta(rs21):
    """A whole coset in P forces zeta(delta) = 0."""
    S = CylinderSet.coset(rs21, (0, 0, 2)) | CylinderSet.coset(rs21, (0, 0, -2)) | CylinderSet.imaginary(rs21)
    P = CylinderSet.coset(rs21, (0, 0, 2)) | CylinderSet.imaginary(rs21)
    zeta = solve_zeta(S, P)
    assert zeta.delta_val == 0 and zeta.del_vals[0] > 0
    assert nonneg_part(S, zeta) == P


def test_solve_zeta_not_covering(rs21):
    S = CylinderSet.imaginary(rs21)
    with pytest.raises(PreconditionError):
        solve_zeta(S, CylinderSet.imaginary(rs21, ZSet.up_ray(1)))


# ---------------------------------------------------------------------------
# finite root systems


def test_find_base_examples():
    c2 = [(2, 0), (-2, 0), (0, 2), (0, -2), (1, 1), (1, -1), (-1, 1), (-1, -1)]
    assert sorted(find_base(c2, 2)) == sorted([(1, -1), (0, 2)])
    assert find_base([(0, 2), (0, -2)], 0) == [(0, 2)]
    assert find_base([(1,), (-1,), (2,), (-2,)], 1) == [(1,)]


def test_find_base_rejects_non_root_system():
    with pytest.raises(ValueError):
        find_base([(1, 0), (0, 1)], 2)


def test_is_root_system_examples(worked):
    ts = build_T(worked)
    assert is_root_system(set(ts.t1_re) | {(0, 0, 0)}, 2)
    assert is_root_system([(1, 0), (-1, 0), (0, 1), (0, -1)], 1)
    assert is_root_system([], 1)
    assert not is_root_system([(1, 1), (-1, -1)], 1)
    assert not is_root_system([(1, 0), (-1, 0), (1, 1), (-1, -1)], 2)


@pytest.mark.parametrize("rs", SYSTEMS, ids=lambda r: f"{r.kind}-{r.m}-{r.n}")
def test_find_base_on_even_real_parts(rs):
    from twistroot.functionals import even_real_dots
    dots = even_real_dots(CylinderSet.full(rs))
    base = find_base(dots, rs.m)
    assert len(base) == rs.dim


# ---------------------------------------------------------------------------
# zeta1 and the pipeline


def test_build_zeta1_worked(worked, rs21):
    ts = build_T(worked)
    z = build_zeta1(ts.T1, ts.T2)
    assert z == Functional((F(3, 2), F(1, 2)), (F(0),), F(0))
    assert all(z(rs21.weight((0, 0, 2), k)) == 0 for k in range(-6, 7, 2))


def test_build_zeta1_needs_t1(rs21):
    classes = {c: CosetClass("FullIN") for c in rs21.real_coords}
    ts = build_T(ShadowAssignment.from_classes(rs21, classes))
    with pytest.raises(PreconditionError):
        build_zeta1(ts.T1, ts.T2)


def test_pipeline_worked(worked):
    rep = pipeline(worked)
    assert rep["ok"] and rep["T_prime_finite"]
    assert rep["direction"] == "AllUp"
    assert rep["zeta1"] == {"eps": ["3/2", "1/2"], "del": ["0"], "delta": "0"}
    assert [s["stage"] for s in rep["stages"]] == [1, 2, 3]


def test_pipeline_precondition_all_ln(rs21):
    with pytest.raises(PipelineError) as err:
        pipeline(ShadowAssignment.uniform(rs21))
    assert err.value.stage == "precondition"


def test_pipeline_mixed_directions():
    rs = RootSystem.of("A-odd-odd-2", 2, 2)
    classes = {c: CosetClass("FullLN") for c in rs.real_coords if any(c[:2])}
    # every delta-side pair hybrid keeps T closed; one pair goes up, the rest down
    for c in rs.real_coords:
        if not any(c[:2]) and c > tuple(-x for x in c):
            classes[c] = CosetClass("DownHybrid", 0, 0)
    classes[(0, 0, 2, 0)] = CosetClass("UpHybrid", 0, 0)
    sa = ShadowAssignment.from_classes(rs, classes, validate=False)
    with pytest.raises(PipelineError) as err:
        pipeline(sa)
    assert err.value.stage == "precondition"
    assert "direction" in str(err.value)


@settings(max_examples=40)
@given(st.sampled_from([rs for rs in SYSTEMS if rs.m and rs.n]), st.integers(0, 10 ** 6))
def test_pipeline_properties(rs, seed):
    sa = random_assignment(rs, random.Random(seed), need_both=True)
    rep = pipeline(sa)
    ts = build_T(sa)
    zeta1 = Functional.from_json(rep["zeta1"])
    assert tri_decompose(ts.T, zeta1).zero == ts.T2 | CylinderSet.imaginary(rs)
    assert rep["T_prime_finite"]


def test_functional_json_roundtrip():
    z = Functional((F(1, 3), F(-2)), (F(5, 7),), F(1, 2))
    assert Functional.from_json(z.to_json(), 2, 1) == z
