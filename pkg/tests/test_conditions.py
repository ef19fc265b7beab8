"""Sampled bound and Lipschitz estimates, and the combined verdicts."""

import math

import numpy as np
import pytest
from dataclasses import replace

from bvp3 import (BoundaryConditions, CaseId, ProblemSpec, build_general_kernel,
                  estimate_lipschitz, estimate_sup_f, get_problem, kernel_catalog,
                  kernel_for, verdict)

CASE1 = kernel_catalog(CaseId.CASE1)
NORMS1 = CASE1.norms()


def test_sup_estimate_exponential():
    entry = get_problem("yao-feng-7")
    true_sup = math.exp(1.1 / 12.0)
    sup, sign_ok = estimate_sup_f(entry.problem, 1.1, NORMS1, "full")
    assert sign_ok is None
    assert sup <= true_sup + 1e-12
    assert sup == pytest.approx(true_sup, abs=1e-3)


def test_sup_estimate_positive_domain_flags_sign():
    entry = get_problem("yao-feng-7")
    sup, sign_ok = estimate_sup_f(entry.problem, 1.1, NORMS1, "positive",
                                  sigma_g=-1, sign_product=1)
    assert sign_ok is True
    assert sup <= math.exp(1.1 / 12.0) + 1e-12


def test_sup_estimate_zero_function():
    p = ProblemSpec(f=lambda t, x, y, z: 0.0 * t, bc=CaseId.CASE1)
    sup, _ = estimate_sup_f(p, 1.0, NORMS1, "full")
    assert sup == 0.0


def test_sup_estimate_monotone_in_radius():
    entry = get_problem("yao-feng-7")
    sups = [estimate_sup_f(entry.problem, m, NORMS1, "full")[0]
            for m in (0.5, 1.0, 2.0, 4.0)]
    assert sups == sorted(sups)


def test_sup_estimate_validation():
    entry = get_problem("yao-feng-7")
    with pytest.raises(ValueError):
        estimate_sup_f(entry.problem, -1.0, NORMS1)
    with pytest.raises(ValueError):
        estimate_sup_f(entry.problem, 1.0, NORMS1, samples=100)
    with pytest.raises(ValueError):
        estimate_sup_f(entry.problem, 1.0, NORMS1, domain="sideways")


def test_lipschitz_analytic_passthrough():
    entry = get_problem("bai-3.5")
    (l0, l1, l2), source = estimate_lipschitz(entry.problem, 0.835,
                                              kernel_for(entry.problem).norms())
    assert source == "analytic"
    assert l0 == pytest.approx(math.exp(0.835 / 3.0) / 4.0, rel=1e-12)
    assert l1 == pytest.approx(0.835 / 4.0, rel=1e-12)
    assert l2 == 0.25


def test_lipschitz_sampled_constant_function():
    p = ProblemSpec(f=lambda t, x, y, z: 2.0 + 0.0 * t, bc=CaseId.CASE1)
    ls, source = estimate_lipschitz(p, 1.0, NORMS1)
    assert source == "sampled"
    assert ls == (0.0, 0.0, 0.0)


@pytest.mark.parametrize("name", ["dqa1", "dqa", "bai-3.5"])
def test_lipschitz_sampled_below_analytic(name):
    entry = get_problem(name)
    kernel = kernel_for(entry.problem)
    stripped = replace(entry.problem, lipschitz=None)
    sampled, source = estimate_lipschitz(
        stripped, entry.reference.M, kernel.norms(),
        sigma_g=kernel.sigma_g,
        sign_product=kernel.sigma_g * kernel.sigma_g1)
    assert source == "sampled"
    analytic = entry.reference.lipschitz
    for got, ref in zip(sampled, analytic):
        assert got <= ref + 1e-9
    q_sampled = sum(l * m for l, m in zip(sampled, kernel.norms()))
    q_analytic = entry.reference.q
    assert q_sampled >= 0.5 * q_analytic


@pytest.mark.parametrize("name", ["yao-feng-7", "yao-feng-8", "feng-liu-4.2",
                                  "dqa1", "dqa", "bai-3.5"])
def test_all_corpus_verdicts_hold(name):
    entry = get_problem(name)
    v = verdict(entry.problem, kernel_for(entry.problem), entry.reference.M)
    assert v.theorem1_holds and v.theorem2_holds
    assert v.theorem3_holds and v.theorem4_holds
    assert v.sign_ok is True
    assert v.q == pytest.approx(entry.reference.q, rel=1e-12)
    assert v.q < 1.0
    assert v.predicted_monotonicity == "increasing"
    assert v.lipschitz_source == "analytic"


def test_verdict_contraction_factor_case1():
    entry = get_problem("yao-feng-7")
    v = verdict(entry.problem, kernel_for(entry.problem), 1.1)
    assert v.q == pytest.approx(math.exp(1.1 / 12.0) / 12.0, rel=1e-12)


def test_verdict_small_radius_fails_existence():
    entry = get_problem("yao-feng-7")
    stripped = replace(entry.problem, lipschitz=None)
    v = verdict(stripped, kernel_for(entry.problem), 0.01)
    assert v.theorem1_holds is False
    assert v.theorem3_holds is False


def test_verdict_non_contractive_q():
    p = ProblemSpec(f=lambda t, x, y, z: 2.0 * z, bc=CaseId.CASE2,
                    lipschitz=(0.0, 0.0, 2.0))
    v = verdict(p, kernel_catalog(CaseId.CASE2), 1.0)
    assert v.q == 2.0
    assert v.theorem3_holds is False and v.theorem4_holds is False


def test_verdict_without_constant_sign_kernel():
    # u(0) = u'(0) = u(1) = 0 has a slope kernel that changes sign
    bc = BoundaryConditions(1, 0, 0, 0, 1, 0, 1, 0, 0)
    kernel = build_general_kernel(bc)
    assert kernel.sigma_g1 == 0
    p = ProblemSpec(f=lambda t, x, y, z: -np.exp(x), bc=bc)
    v = verdict(p, kernel, 1.0)
    assert v.theorem2_holds is None and v.theorem4_holds is None
    assert v.predicted_monotonicity == "none"
    assert v.sup_f_positive is None and v.sign_ok is None
    assert v.theorem1_holds in (True, False)


def test_one_sided_domain_needs_signs():
    entry = get_problem("yao-feng-7")
    with pytest.raises(ValueError):
        estimate_sup_f(entry.problem, 1.0, NORMS1, "positive", sigma_g=0)


def test_verdict_then_solve_converges():
    from bvp3 import Grid, solve
    entry = get_problem("dqa1")
    v = verdict(entry.problem, kernel_for(entry.problem), entry.reference.M)
    assert v.theorem3_holds
    _, report = solve(entry.problem, Grid(100))
    assert report.converged
