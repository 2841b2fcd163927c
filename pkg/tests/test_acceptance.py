"""The nine acceptance criteria, each at its stated tolerance.

Run with ``pytest -s tests/test_acceptance.py`` to see one line per criterion.
"""

import random
import time

import pytest

from twistroot import checks
from twistroot.rootspace import KINDS

PER_FAMILY = 200


def report(res):
    status = "PASS" if res["passed"] else "FAIL"
    extras = {k: v for k, v in res.items() if k not in ("name", "passed", "witnesses", "criterion")}
    print(f"\n[criterion {res['criterion']}] {status}: {res['name']} {extras}")
    assert res["passed"], res["witnesses"]


@pytest.fixture(scope="module")
def sweep():
    start = time.perf_counter()
    rng = random.Random(0)
    assignments = {kind: checks.sample_assignments(kind, PER_FAMILY, rng) for kind in KINDS}
    return assignments, time.perf_counter() - start


def test_criterion_1_table_membership():
    res = checks.criterion_table_membership(depth=12)
    res["criterion"] = 1
    report(res)


def test_criterion_2_real_nonsingular_and_kappa():
    res = checks.criterion_real_and_nonsingular()
    res["criterion"] = 2
    report(res)


def test_criterion_3_main_i_sweep(sweep):
    assignments, gen_seconds = sweep
    res = checks.criterion_main_i(assignments, required=PER_FAMILY, time_limit=60.0 - gen_seconds)
    res["criterion"] = 3
    res["generation_seconds"] = round(gen_seconds, 3)
    report(res)


def test_criterion_4_solve_zeta():
    res = checks.criterion_solve_zeta(per_family=100)
    res["criterion"] = 4
    report(res)


def test_criterion_5_pipeline_finiteness(sweep):
    res = checks.criterion_pipeline(sweep[0])
    res["criterion"] = 5
    report(res)


def test_criterion_6_parabolic_axioms():
    res = checks.criterion_parabolic(per_family=100, depth=20)
    res["criterion"] = 6
    report(res)


def test_criterion_7_quadratic_superalgebra():
    res = checks.criterion_q_algebra(window=21, mutants=50)
    res["criterion"] = 7
    report(res)


def test_criterion_8_loop_bracket_laws():
    res = checks.criterion_loop(window=4)
    res["criterion"] = 8
    report(res)


def test_criterion_9_saturation_replay():
    res = checks.criterion_saturation(budget=10_000)
    res["criterion"] = 9
    report(res)
