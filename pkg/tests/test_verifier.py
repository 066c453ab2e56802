import dataclasses
import math

import numpy as np
import pytest

from pinchlab import (
    EigenTriple,
    EmptyRegion,
    EstimateVariant,
    FlowParams,
    DomainError,
    HypothesisViolated,
    InequalityKind,
    IntegratorConfig,
    QuantityKind,
    SetKind,
    SetSpec,
    check_estimate,
    check_invariance,
    deriv_suite,
    derivative_consistency,
    estimate_suite,
    integrate,
    invariance_is_claimed,
    scan_inequality,
)
from pinchlab.verifier import thread_count

P_NEG = FlowParams(rho=-1.0)


# --------------------------------------------------------------------- scans


def test_scan_tokens():
    assert InequalityKind.from_token("j-neg-trace") is InequalityKind.J_NEG_TRACE
    assert InequalityKind.from_token("trace-bound") is InequalityKind.TRACE_BOUND
    with pytest.raises(DomainError):
        InequalityKind.from_token("nope")


def test_j_scan_holds_at_modest_resolution():
    rep = scan_inequality(InequalityKind.J_NEG_TRACE, P_NEG, resolution=60)
    assert rep.violations == 0
    assert rep.min_margin >= 0.0
    assert rep.points_checked > 0
    assert rep.mode == "grid"
    # the argmin lives on the sup-norm unit slice
    assert rep.argmin_state.sup_norm == pytest.approx(1.0)


def test_j_nonneg_scan_min_is_small_but_clean():
    rep = scan_inequality(InequalityKind.J_NONNEG_TRACE, P_NEG, resolution=120)
    assert rep.violations == 0
    # the bound is tight near mu+nu -> 0^-: tiny positive minimum
    assert 0.0 <= rep.min_margin < 1e-2


def test_scan_is_deterministic():
    a = scan_inequality(InequalityKind.I_POLY, FlowParams(rho=0.1), resolution=80)
    b = scan_inequality(InequalityKind.I_POLY, FlowParams(rho=0.1), resolution=80)
    assert a == b


def test_scan_reports_near_boundary_points():
    rep = scan_inequality(InequalityKind.I_POLY, FlowParams(rho=0.0), resolution=50)
    assert 0 < rep.near_boundary_points < rep.points_checked


def test_empty_region_is_an_error():
    with pytest.raises(EmptyRegion):
        scan_inequality(InequalityKind.J_NONNEG_TRACE, P_NEG, resolution=2)


@pytest.mark.parametrize(
    "kind,params",
    [
        (InequalityKind.J_NEG_TRACE, FlowParams(rho=0.1)),  # needs rho < 0
        (InequalityKind.I_POLY, FlowParams(rho=-0.1)),  # needs rho in [0, 1/4)
        # xi-prime needs theta = -1/(2 rho)
        (InequalityKind.XI_PRIME, FlowParams(rho=-0.5, eta=1.0, theta=2.0)),
        # and eta > 0 with rho in (-1/eta, 0)
        (InequalityKind.XI_PRIME, FlowParams(rho=0.1, eta=1.0, theta=1.0)),
    ],
)
def test_scan_rejects_wrong_parameter_window(kind, params):
    with pytest.raises(DomainError):
        scan_inequality(kind, params, resolution=30)


def test_xi_prime_scan_small():
    p = FlowParams(rho=-0.5, eta=1.0, theta=1.0)
    rep = scan_inequality(InequalityKind.XI_PRIME, p, resolution=60)
    assert rep.violations == 0
    assert rep.min_margin >= 0.0


def test_trace_bound_grid_mode():
    rep = scan_inequality(InequalityKind.TRACE_BOUND, P_NEG, resolution=40)
    assert rep.violations == 0
    assert rep.min_margin >= 0.0


def test_trace_bound_random_mode():
    rep = scan_inequality(
        InequalityKind.TRACE_BOUND, FlowParams(rho=0.2), samples=20_000, seed=4
    )
    assert rep.mode == "random"
    assert rep.violations == 0
    assert rep.samples == 20_000
    assert rep.seed == 4
    # the isotropic injections must sit exactly on the equality case
    assert rep.injected_max_abs_margin <= 1e-12
    again = scan_inequality(
        InequalityKind.TRACE_BOUND, FlowParams(rho=0.2), samples=20_000, seed=4
    )
    assert again == rep


# -------------------------------------------------------------- invariance


def test_claim_taxonomy():
    assert invariance_is_claimed(SetSpec(SetKind.RICCI_LOG_STATIC, P_NEG))
    assert invariance_is_claimed(SetSpec(SetKind.TRACE_POSITIVE_RICCI_LOG, FlowParams(rho=-0.2)))
    assert invariance_is_claimed(
        SetSpec(SetKind.SECTIONAL_LOG_NONNEG_RICCI, FlowParams(rho=-0.5, eta=1.0, theta=1.0))
    )
    # wrong theta for this rho: still a legal region, not a claim
    assert not invariance_is_claimed(
        SetSpec(SetKind.SECTIONAL_LOG_NONNEG_RICCI, FlowParams(rho=-0.5, eta=1.0, theta=1.5))
    )
    assert invariance_is_claimed(SetSpec(SetKind.SECTIONAL_LOG, FlowParams(rho=0.1, eta=-4.0, theta=1.0)))
    assert not invariance_is_claimed(
        SetSpec(SetKind.SECTIONAL_LOG, FlowParams(rho=-0.1, eta=-4.0, theta=1.0))
    )
    assert not invariance_is_claimed(
        SetSpec(SetKind.SECTIONAL_LOG, FlowParams(rho=0.1, eta=-3.9, theta=1.0))
    )


def test_invariance_small_run():
    spec = SetSpec(SetKind.RICCI_LOG_STATIC, P_NEG)
    rep = check_invariance(spec, samples=24, horizon=0.05, seed=42)
    assert rep.claimed
    assert rep.worst_drift >= -1e-8
    assert rep.violating_seed is None
    assert rep.samples == 24
    assert rep.checkpoints > 0


def test_invariance_is_order_independent(monkeypatch):
    spec = SetSpec(SetKind.TRACE_POSITIVE_RICCI_LOG, P_NEG)
    monkeypatch.setenv("PINCHLAB_THREADS", "1")
    serial = check_invariance(spec, samples=10, horizon=0.03, seed=7)
    monkeypatch.setenv("PINCHLAB_THREADS", "4")
    threaded = check_invariance(spec, samples=10, horizon=0.03, seed=7)
    assert serial == threaded


def test_recheck_runs_as_observation():
    spec_y = SetSpec(SetKind.SECTIONAL_LOG_NONNEG_RICCI, FlowParams(rho=-0.5, eta=1.0, theta=1.0))
    spec_k = SetSpec(SetKind.SECTIONAL_LOG, FlowParams(rho=-0.5, eta=1.0, theta=1.0))
    rep = check_invariance(spec_y, samples=8, horizon=0.02, seed=3, recheck=spec_k)
    assert not rep.claimed
    assert rep.recheck_kind is SetKind.SECTIONAL_LOG


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("PINCHLAB_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("PINCHLAB_THREADS", "0")
    assert thread_count() >= 1
    monkeypatch.setenv("PINCHLAB_THREADS", "x")
    with pytest.raises(ValueError):
        thread_count()


# ---------------------------------------------------------------- estimates


def test_estimate_slack_zero_at_equality_start():
    # at (-1,-1,-1), rho=0, t=0 the nonneg-rho bound is exactly attained:
    # R = -6 and the bound evaluates to -6
    p = FlowParams(rho=0.0)
    traj = integrate(EigenTriple(-1.0, -1.0, -1.0), p, 0.0, 0.5)
    rep = check_estimate(traj, EstimateVariant.NONNEG_RHO, p)
    assert rep.worst_slack >= -1e-8
    assert rep.trigger_times
    assert rep.trigger_times[0][0] == 0.0


def test_estimate_untriggered_is_vacuous():
    p = FlowParams(rho=0.0)
    traj = integrate(EigenTriple(1.0, 1.0, 1.0), p, 0.0, 0.2)
    rep = check_estimate(traj, EstimateVariant.NONNEG_RHO, p)
    assert rep.worst_slack == math.inf
    assert rep.trigger_times == ()


def test_estimate_hypothesis_gate():
    p = FlowParams(rho=-1.0)
    bad = integrate(EigenTriple(0.5, -1.0, -1.0), p, 0.0, 0.01)  # trace < 0
    with pytest.raises(HypothesisViolated):
        check_estimate(bad, EstimateVariant.NEG_RHO_SCALAR, p)
    p2 = FlowParams(rho=-0.5, eta=1.0)
    bad2 = integrate(EigenTriple(3.0, 2.0, -1.5), p2, 0.0, 0.01)  # nu < -1
    with pytest.raises(HypothesisViolated):
        check_estimate(bad2, EstimateVariant.NEG_RHO_SECTIONAL, p2)


def test_estimate_rejects_wrong_params():
    p = FlowParams(rho=0.1)
    traj = integrate(EigenTriple(1.0, 0.5, -0.5), p, 0.0, 0.01)
    with pytest.raises(DomainError):
        check_estimate(traj, EstimateVariant.NEG_RHO_SCALAR, p)


def test_estimate_suite_small():
    rep = estimate_suite(EstimateVariant.NEG_RHO_SCALAR, P_NEG, count=8, seed=2)
    assert rep.worst_slack >= -1e-8
    assert rep.count == 8
    assert 0.0 < rep.min_coverage <= 1.0
    # starts are trace-positive, so every run must reach blow-up at t_end=50
    assert rep.blowups == 8


def test_estimate_suite_reproducible():
    a = estimate_suite(EstimateVariant.NONNEG_RHO, FlowParams(rho=0.2), count=5, seed=9)
    b = estimate_suite(EstimateVariant.NONNEG_RHO, FlowParams(rho=0.2), count=5, seed=9)
    assert a.worst_slack == b.worst_slack
    assert a.min_coverage == b.min_coverage


# ------------------------------------------------------- derivative identity


def test_derivative_consistency_single_trajectory():
    traj = integrate(EigenTriple(0.5, -0.8, -0.9), P_NEG, 0.0, 0.01)
    rep = derivative_consistency(traj, QuantityKind.LAMBDA_PINCH, P_NEG)
    assert rep.max_discrepancy < 1e-5


@pytest.mark.parametrize("quantity", [QuantityKind.LAMBDA_PINCH, QuantityKind.XI_PINCH])
def test_deriv_suite_decays_quadratically(quantity):
    p = P_NEG if quantity is QuantityKind.LAMBDA_PINCH else FlowParams(rho=0.1, eta=-4.0, theta=1.0)
    rep = deriv_suite(quantity, p, trajectories=5, seed=1)
    assert rep.max_discrepancy < 1e-6
    # halving h divides a quadratic error by 4 (within integration noise)
    assert 2.5 < rep.decay_ratio < 6.0
