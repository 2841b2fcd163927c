"""End-to-end verification sweeps, shared by the test suite and the ``sweep`` command.

Each ``criterion_*`` function returns a dict with at least ``name``, ``passed``,
``failures`` and ``seconds``.  Brute-force oracles here work on truncated
integer windows and never call the exact set algebra they are checking.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .cylsets import CylinderSet
from .functionals import Functional, hybrid_parabolic, parabolic, pipeline, solve_zeta, nonneg_part
from .quadratic import (antisymmetry_check, centrality_check, derivation_check, diagonal_conjugation,
                        form_invariance_check, gl_superalgebra, loop_algebra, mutate, parity_sigma,
                        q_algebra, super_jacobi_check)
from .rootspace import KINDS, RootSystem
from .shadow import Family, ShadowAssignment, SuppState, build_T, hybrid_direction, random_assignment, saturate, verify_main_i
from ._exact import QI

RANKS = [(1, 1), (1, 2), (2, 1), (2, 2)]


def admissible_systems(kind):
    out = []
    for m, n in RANKS:
        try:
            out.append(RootSystem.of(kind, m, n))
        except ValueError:
            pass
    return out


def _result(name, failures, start, **extra):
    out = {"name": name, "passed": not failures, "failures": len(failures),
           "witnesses": failures[:5], "seconds": round(time.perf_counter() - start, 3)}
    out.update(extra)
    return out


# ---------------------------------------------------------------------------
# windowed brute force


def _mask(zs, depth):
    bits = 0
    for k in zs.members(-depth, depth):
        bits |= 1 << (k + depth)
    return bits


def _sum_mask(a, b, depth):
    acc = 0
    x = b
    while x:
        low = x & -x
        acc |= a << (low.bit_length() - 1)
        x ^= low
    return (acc >> depth) & ((1 << (2 * depth + 1)) - 1)


@lru_cache(maxsize=None)
def _root_mask(rs, coords, depth):
    bits = 0
    for k in range(-depth, depth + 1):
        if rs.contains_coords(coords, k):
            bits |= 1 << (k + depth)
    return bits


def brute_closed(S: CylinderSet, depth: int):
    """First (a, b, k) with a + b a root in the window but missing from S, else None."""
    rs = S.rs
    roots = set(rs.finite_root_coords)
    masks = {key: _mask(z, depth) for key, z in S.components.items()}
    for a, ma in masks.items():
        for b, mb in masks.items():
            c = tuple(x + y for x, y in zip(a, b))
            if c not in roots:
                continue
            bad = _sum_mask(ma, mb, depth) & _root_mask(rs, c, depth) & ~masks.get(c, 0)
            if bad:
                return (a, b, (bad & -bad).bit_length() - 1 - depth)
    return None


def brute_covers(P: CylinderSet, depth: int):
    rs = P.rs
    for c in rs.finite_root_coords:
        here = P.get(c)
        there = P.get(tuple(-x for x in c))
        for k in range(-depth, depth + 1):
            if rs.contains_coords(c, k) and not (k in here or -k in there):
                return (c, k)
    return None


# ---------------------------------------------------------------------------
# 1-2: root data


def criterion_table_membership(depth=12):
    start = time.perf_counter()
    failures = []
    for kind in KINDS:
        for rs in admissible_systems(kind):
            box = product(range(-2, 3), repeat=rs.dim)
            for coords in box:
                try:
                    r, k0 = rs.string_data_coords(coords)
                except ValueError:
                    r = None
                for k in range(-depth, depth + 1):
                    if not any(coords):
                        from_strings = True
                    else:
                        from_strings = r is not None and (k - k0) % r == 0
                    if from_strings != rs.contains_coords(coords, k):
                        failures.append({"family": kind, "m": rs.m, "n": rs.n, "coords": coords, "k": k})
    res = _result("table membership vs string data", failures, start, depth=depth)
    res["passed"] = res["passed"] and res["seconds"] < 5
    return res


def listed_finite_roots(kind, m, n):
    """Real and nonsingular finite roots written out from the classification table."""
    dim = m + n

    def unit(i, s=1):
        v = [0] * dim
        v[i] = s
        return tuple(v)

    def add(*vs):
        return tuple(sum(t) for t in zip(*vs))

    eps, dels = range(m), range(m, dim)
    re = set()
    singles_e = kind != "A-odd-odd-2"
    doubles_e = kind != "D-2"
    for s in (1, -1):
        for i in eps:
            if singles_e:
                re.add(unit(i, s))
            if doubles_e:
                re.add(unit(i, 2 * s))
        for p in dels:
            if kind != "A-odd-odd-2":
                re.add(unit(p, s))
            re.add(unit(p, 2 * s))
    for block in (eps, dels):
        for i in block:
            for j in block:
                if i != j:
                    for s in (1, -1):
                        for t in (1, -1):
                            re.add(add(unit(i, s), unit(j, t)))
    ns = {add(unit(i, s), unit(p, t)) for i in eps for p in dels for s in (1, -1) for t in (1, -1)}
    return re, ns


def criterion_real_and_nonsingular():
    start = time.perf_counter()
    failures = []
    for kind in KINDS:
        for rs in admissible_systems(kind):
            re, ns = listed_finite_roots(kind, rs.m, rs.n)
            if set(rs.real_coords) != re or set(rs.ns_coords) != ns:
                failures.append({"family": kind, "m": rs.m, "n": rs.n, "which": "root sets"})
                continue
            kappa = 2 if kind == "A-odd-odd-2" else 1
            if rs.kappa != kappa:
                failures.append({"family": kind, "kappa": rs.kappa})
            sums = {tuple(x + y for x, y in zip(a, b)) for a in re for b in re}
            for c in ns:
                if tuple(kappa * x for x in c) not in sums:
                    failures.append({"family": kind, "m": rs.m, "n": rs.n, "ns": c})
    return _result("real/nonsingular finite roots and kappa", failures, start)


# ---------------------------------------------------------------------------
# 3-5: shadow assignments, T sets, functionals


def sample_assignments(kind, count, rng):
    systems = admissible_systems(kind)
    return [random_assignment(systems[i % len(systems)], rng, need_both=True) for i in range(count)]


def criterion_main_i(assignments, brute_every=1, required=200, time_limit=60.0):
    """``assignments`` maps family -> list.  Cross-validates closure by brute force at depth 3B."""
    start = time.perf_counter()
    failures = []
    total = 0
    for kind, sas in assignments.items():
        for idx, sa in enumerate(sas):
            total += 1
            ts = build_T(sa)
            rep = verify_main_i(sa, ts)
            if not rep["ok"]:
                failures.append({"family": kind, "assignment": sa.to_json(),
                                 "failed": [c for c in rep["checks"] if not c["passed"]]})
                continue
            if idx % brute_every:
                continue
            for name, S in (("T", ts.T), ("T1", ts.T1), ("T2", ts.T2)):
                depth = 3 * S.window_bound()
                wit = brute_closed(S, depth)
                if (wit is None) != S.is_closed():
                    failures.append({"family": kind, "set": name, "brute_witness": wit})
    res = _result("T, T(1), T(2) symmetric closed with imaginary and parity claims", failures, start,
                  assignments=total, per_family={k: len(v) for k, v in assignments.items()})
    res["passed"] = (res["passed"] and res["seconds"] < time_limit
                     and all(len(v) >= required for v in assignments.values()))
    return res


def criterion_solve_zeta(per_family=100, seed=1):
    start = time.perf_counter()
    rng = random.Random(seed)
    failures = []
    counts = {}
    for kind in KINDS:
        systems = admissible_systems(kind)
        done = tries = 0
        while done < per_family and tries < 50 * per_family:
            tries += 1
            rs = systems[tries % len(systems)]
            sa = random_assignment(rs, rng, need_both=True)
            ts = build_T(sa)
            direction = hybrid_direction(sa, ts.T2)
            if direction == "Mixed":
                continue
            S = ts.T2 | CylinderSet.imaginary(rs)
            base = S.parts()[0] | S.parts()[2]
            P = hybrid_parabolic(sa, base, direction)
            zeta = solve_zeta(S, P)
            if zeta is None:
                failures.append({"family": kind, "reason": "infeasible", "assignment": sa.to_json()})
            elif nonneg_part(base, zeta) != P:
                failures.append({"family": kind, "reason": "mismatch", "zeta": zeta.to_json()})
            done += 1
        counts[kind] = done
    res = _result("hybrid parabolic subsets realized by a functional", failures, start, per_family=counts)
    res["passed"] = res["passed"] and all(c >= per_family for c in counts.values())
    return res


def criterion_pipeline(assignments):
    start = time.perf_counter()
    failures = []
    rng = random.Random(0)
    for kind, sas in assignments.items():
        for sa in sas:
            try:
                rep = pipeline(sa, rng)
            except ValueError as exc:
                failures.append({"family": kind, "error": str(exc), "assignment": sa.to_json()})
                continue
            if not rep["T_prime_finite"]:
                failures.append({"family": kind, "error": "infinite T'"})
    return _result("zeta1 zero set is T(2) with Z delta and the final zero set is finite", failures, start,
                   assignments=sum(len(v) for v in assignments.values()))


# ---------------------------------------------------------------------------
# 6: parabolic subsets


def _rand_functional(rs, rng):
    return Functional.from_vector([Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(rs.dim + 1)], rs.m)


def criterion_parabolic(per_family=100, depth=20, seed=2):
    start = time.perf_counter()
    rng = random.Random(seed)
    failures = []
    for kind in KINDS:
        systems = admissible_systems(kind)
        for i in range(per_family):
            rs = systems[i % len(systems)]
            lam, mu = _rand_functional(rs, rng), _rand_functional(rs, rng)
            try:
                par = parabolic(rs, lam, mu)
            except AssertionError as exc:
                failures.append({"family": kind, "error": str(exc)})
                continue
            if brute_covers(par.P, depth) is not None:
                failures.append({"family": kind, "lam": lam.to_json(), "mu": mu.to_json(), "which": "cover"})
            wit = brute_closed(par.P, depth)
            if wit is not None:
                failures.append({"family": kind, "lam": lam.to_json(), "mu": mu.to_json(), "closure": str(wit)})
    return _result("parabolic subsets cover and are closed", failures, start, depth=depth)


# ---------------------------------------------------------------------------
# 7-8: superalgebras


def criterion_q_algebra(window=21, mutants=50, seed=3):
    start = time.perf_counter()
    q = q_algebra(window)
    failures = []
    jac = super_jacobi_check(q)
    if not jac.ok:
        failures.append({"jacobi": jac.to_json(q)})
    anti = antisymmetry_check(q)
    if anti:
        failures.append({"antisymmetry": [list(p) for p in anti[:5]]})
    rng = random.Random(seed)
    missed = 0
    for i in range(mutants):
        mu = mutate(q, rng, symmetric=(i % 2 == 0))
        caught = bool(antisymmetry_check(mu.algebra)) or not super_jacobi_check(mu.algebra, max_violations=1).ok
        if not caught:
            missed += 1
            failures.append({"missed_mutant": [q.labels[x] for x in mu.pair]})
    return _result("quadratic superalgebra identities and mutation detection", failures, start,
                   window=window, triples=jac.checked_triples, missed_mutants=missed)


def loop_twists():
    g = gl_superalgebra(2, 1)
    ident = {i: {i: Fraction(1)} for i in range(len(g))}
    return g, [("identity", ident, 2), ("parity", parity_sigma(g), 2),
               ("diagonal-i", diagonal_conjugation(2, 1, [1, QI(0, 1), 1]), 4)]


def criterion_loop(window=4):
    start = time.perf_counter()
    g, twists = loop_twists()
    failures = []
    for name, sigma, l in twists:
        L = loop_algebra(g, sigma, l, window)
        idx = range(len(L))
        jac = super_jacobi_check(L)
        if not jac.ok:
            failures.append({"twist": name, "jacobi": jac.to_json(L)})
        inv = form_invariance_check(L, product(idx, repeat=3))
        if inv:
            failures.append({"twist": name, "form_invariance": len(inv)})
        der = derivation_check(L, L.d_index, product(idx, repeat=2))
        if der:
            failures.append({"twist": name, "derivation": len(der)})
        cen = centrality_check(L, [{L.c_index: 1}])
        if not cen[0]["central"]:
            failures.append({"twist": name, "centrality": cen[0]})
    return _result("loop algebra bracket laws", failures, start, window=window)


# ---------------------------------------------------------------------------
# 9: saturation replay


def saturation_scenarios():
    rs = RootSystem.of("A-odd-odd-2", 2, 1)
    full = ShadowAssignment.uniform(rs)
    two_e1 = rs.weight((2, 0, 0))
    return rs, [
        ("infinite family along 2 eps_1", full,
         SuppState.from_seeds([], [Family(rs.zero(), two_e1)]), "Contradiction"),
        ("seed orthogonal to every real root", full, SuppState.from_seeds([rs.weight((0, 0, 0), 3)]), "Consistent"),
        ("seed with Cartan number 1 against 2 eps_1", full, SuppState.from_seeds([rs.weight((1, 0, 0))]),
         "Consistent"),
    ]


def criterion_saturation(budget=10_000):
    start = time.perf_counter()
    rs, scenarios = saturation_scenarios()
    failures = []
    outcomes = {}
    for name, sa, state, expected in scenarios:
        res = saturate(state, sa, budget)
        outcomes[name] = {"status": res.status, "applications": res.applications}
        if res.status != expected:
            failures.append({"scenario": name, "expected": expected, "got": res.status})
    return _result("saturation replay", failures, start, outcomes=outcomes)


def run_all(per_family=200, seed=0, quick=False):
    """Every criterion in order; ``quick`` shrinks sample sizes for smoke runs."""
    rng = random.Random(seed)
    n3 = 20 if quick else per_family
    assignments = {kind: sample_assignments(kind, n3, rng) for kind in KINDS}
    results = [
        criterion_table_membership(),
        criterion_real_and_nonsingular(),
        criterion_main_i(assignments, required=n3),
        criterion_solve_zeta(10 if quick else 100),
        criterion_pipeline(assignments),
        criterion_parabolic(10 if quick else 100),
        criterion_q_algebra(mutants=10 if quick else 50),
        criterion_loop(),
        criterion_saturation(),
    ]
    for i, r in enumerate(results, 1):
        r["criterion"] = i
    if quick:
        for r in results:
            r["quick"] = True
    return results
