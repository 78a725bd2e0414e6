"""Acceptance suite: one PASS/FAIL line per criterion.

The lines appear in the pytest terminal summary, or on stdout when run as
a script. Tolerances and runtime budgets are pinned below.
"""

import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from pqkannan.axioms import check_derived_lemma, check_symmetrization_invariants
from pqkannan.completeness import audit_counterexample, build_counterexample_map, probe_completeness
from pqkannan.errors import PreconditionError
from pqkannan.kannan import ExampleMap, check_kannan, check_lemma2, estimate_lambda
from pqkannan.oracle import enumerate_self_maps, exhaustive_kannan_audit, min_kannan_constant, random_spaces
from pqkannan.sampling import CheckStrategy
from pqkannan.solver import iterate, rate_bound_check, uniqueness_probe
from pqkannan.spaces import BUILTIN_SPACES, builtin_space

SEED = 42
EXAMPLE_LAMBDA = Fraction(2, 15)
LAMBDA_TOL = 1e-9
RESIDUAL_TOL = 1e-12
RATE_SLACK = 1e-12
N_RANDOM_SPACES = 50
MAX_N = 5

LINES = []

BUDGET = {1: 5.0, 2: 1.0, 3: 60.0, 4: 60.0, 5: 5.0, 6: 2.0, 7: 30.0, 8: 1.0}


def _line(k, ok, elapsed, detail):
    status = "PASS" if ok else "FAIL"
    msg = f"criterion {k}: {status}  ({elapsed:.2f}s / {BUDGET[k]:.0f}s budget)  {detail}"
    LINES.append(msg)
    if __name__ == "__main__":
        print(msg)


@pytest.fixture(scope="module")
def finite_spaces():
    return random_spaces(N_RANDOM_SPACES, seed=SEED, max_n=MAX_N)


def run_1():
    space = builtin_space("paper_example")
    est = estimate_lambda(space, ExampleMap(), CheckStrategy.sampled(100_000, seed=SEED))
    rep = check_kannan(space, ExampleMap(), EXAMPLE_LAMBDA, CheckStrategy.sampled(100_000, seed=SEED))
    ok = est.lambda_hat <= float(EXAMPLE_LAMBDA) + LAMBDA_TOL and rep.passed
    return ok, f"lambda_hat={est.lambda_hat:.9f}, violations at 2/15: {rep['kannan'].violations}"


def run_2():
    space = builtin_space("paper_example")
    starts = np.random.default_rng(SEED).uniform(0.0, 1e6, 100).tolist()
    bad = 0
    for s in starts:
        _, res = iterate(space, ExampleMap(), s)
        if not (res.point == 0 and res.residual <= RESIDUAL_TOL and res.self_distance == 0):
            bad += 1
    uniq = uniqueness_probe(space, ExampleMap(), starts)
    return bad == 0 and uniq.passed, f"{100 - bad}/100 starts reach 0, uniqueness={uniq.passed}"


def run_3(spaces):
    violations = maps = 0
    exact = CheckStrategy.exhaustive(slack=0)
    for space in spaces:
        for m in enumerate_self_maps(space):
            b = min_kannan_constant(space, m)
            if not b.is_kannan:
                continue
            maps += 1
            rep = check_lemma2(space, m, b.lambda_min, exact)
            violations += sum(r.violations for r in rep.results)
    return violations == 0, f"{maps} Kannan maps checked, {violations} violations"


def run_4(spaces):
    audits = [exhaustive_kannan_audit(s) for s in spaces]
    kannan = sum(a.kannan_count for a in audits)
    viol = sum(len(a.violations) for a in audits)
    return viol == 0, f"{kannan} Kannan maps over {len(audits)} spaces, {viol} violations"


def run_5():
    space = builtin_space("paper_example_punctured")
    rep = audit_counterexample(space, build_counterexample_map(space))
    ok = rep.passed and rep.details["min_p_plus_x_Tx"] > 0
    checks = ", ".join(f"{r.axiom}={'ok' if r.passed else 'FAIL'}" for r in rep.results)
    return ok, f"{checks}, min p+(x,Tx)={rep.details['min_p_plus_x_Tx']:.4g}"


def run_6():
    full = probe_completeness(builtin_space("paper_example"))
    punct = probe_completeness(builtin_space("paper_example_punctured"))
    hit = punct.counterexamples["p_sequential"]
    ok = full.passed and hit == "geometric(0.5)"
    return ok, f"paper_example clean={full.passed}, punctured p_sequential counterexample={hit}"


def run_7(spaces):
    exact = CheckStrategy.exhaustive(slack=0)
    targets = [(builtin_space(n), CheckStrategy.sampled(10_000, seed=SEED)) for n in BUILTIN_SPACES]
    targets += [(s, exact) for s in spaces]
    failed = []
    inv_fail = []
    for space, strat in targets:
        inv = check_symmetrization_invariants(space, strat.with_slack(0))
        if not inv.passed:
            inv_fail.append(space.label)
        try:
            ok = check_derived_lemma(space, strat).passed
            reason = "" if ok else "derived check failed"
        except PreconditionError as exc:
            ok = False
            reason = ", ".join(r.axiom for r in exc.report.failures)
            reason = f"base axioms fail ({reason})"
        if not ok:
            failed.append(f"{space.label}: {reason}")
    ok = not failed and not inv_fail
    detail = f"{len(targets) - len(failed)}/{len(targets)} spaces pass the derived lemma; " \
             f"invariant failures: {inv_fail or 'none'}"
    if failed:
        detail += "; failing: " + "; ".join(failed)
    return ok, detail


def run_8():
    trace, _ = iterate(builtin_space("paper_example"), ExampleMap(), 1e6)
    ok = rate_bound_check(trace, EXAMPLE_LAMBDA, slack=RATE_SLACK)
    return ok, f"r=4/11 over {len(trace)} steps"


def _timed(k, fn, *args):
    t0 = time.perf_counter()
    ok, detail = fn(*args)
    elapsed = time.perf_counter() - t0
    within = elapsed < BUDGET[k]
    if not within:
        detail += "; over runtime budget"
    _line(k, ok and within, elapsed, detail)
    return ok and within, detail


def test_criterion_1_example_kannan_constant():
    ok, detail = _timed(1, run_1)
    assert ok, detail


def test_criterion_2_example_fixed_point_contract():
    ok, detail = _timed(2, run_2)
    assert ok, detail


def test_criterion_3_lemma2_on_random_spaces(finite_spaces):
    ok, detail = _timed(3, run_3, finite_spaces)
    assert ok, detail


def test_criterion_4_exhaustive_oracle(finite_spaces):
    ok, detail = _timed(4, run_4, finite_spaces)
    assert ok, detail


def test_criterion_5_fixed_point_free_map():
    ok, detail = _timed(5, run_5)
    assert ok, detail


def test_criterion_6_completeness_evidence():
    ok, detail = _timed(6, run_6)
    assert ok, detail


def test_criterion_7_structural_lemma_suite(finite_spaces):
    ok, detail = _timed(7, run_7, finite_spaces)
    assert ok, detail


def test_criterion_8_rate_bound():
    ok, detail = _timed(8, run_8)
    assert ok, detail


if __name__ == "__main__":
    spaces = random_spaces(N_RANDOM_SPACES, seed=SEED, max_n=MAX_N)
    runs = [(1, run_1, ()), (2, run_2, ()), (3, run_3, (spaces,)), (4, run_4, (spaces,)),
            (5, run_5, ()), (6, run_6, ()), (7, run_7, (spaces,)), (8, run_8, ())]
    results = [_timed(k, fn, *a)[0] for k, fn, a in runs]
    sys.exit(0 if all(results) else 1)
