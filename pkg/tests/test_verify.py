import math

import numpy as np
import pytest

from fixtime.dynamics import make_system
from fixtime.gain_aut import make_aut_gain
from fixtime.numerics.ode import IntegratorConfig, Trajectory, Verdict, integrate
from fixtime.verify import (certify_settling, eps_slack, format_report, least_ubst_sweep,
                            lyapunov_check)

from conftest import exp_sqrt_system, poly_beta_system, secant_system, tbg_system

TIGHT = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)


@pytest.mark.parametrize("x0", [0.1, 1.0, 2.0])
def test_certify_autonomous_match(x0):
    rep = certify_settling(poly_beta_system(), [x0])
    assert rep.verdict is Verdict.MATCH
    assert rep.abs_gap <= 1e-3
    assert rep.observed < 1.0


def test_certify_nonautonomous_match():
    rep = certify_settling(tbg_system(), [100.0])
    assert rep.verdict is Verdict.MATCH
    assert rep.termination in ("settled", "horizon")


def test_certify_budget_is_diverged():
    rep = certify_settling(secant_system(), [1e5], IntegratorConfig(max_steps=5))
    assert rep.verdict is Verdict.DIVERGED


def test_certify_zero_state():
    rep = certify_settling(exp_sqrt_system(), [0.0])
    assert rep.predicted == 0.0 and rep.observed == 0.0
    assert rep.verdict is Verdict.MATCH


def test_eps_slack_shrinks_with_eps():
    spec = exp_sqrt_system()
    a, b = eps_slack(spec, [1.0], 1e-6), eps_slack(spec, [1.0], 1e-12)
    assert 0 < b < a
    assert eps_slack(spec, [1e-9], 1e-6) == pytest.approx(certify_settling(spec, [1e-9]).predicted)


def test_sweep_monotone_and_bounded():
    rep = least_ubst_sweep(exp_sqrt_system(), [0.1, 1.0, 2.0, 10.0])
    assert rep.monotone_ok
    assert all(b >= a for a, b in zip(rep.observed, rep.observed[1:]))
    assert rep.sup_observed < 1.0
    assert rep.sup_gap == pytest.approx(1.0 - rep.sup_observed)
    assert rep.verdicts == ["Match"] * 4


@pytest.mark.parametrize("norms", [[], [1.0, 1.0], [2.0, 1.0], [-1.0, 1.0]])
def test_sweep_rejects_bad_norms(norms):
    with pytest.raises(ValueError):
        least_ubst_sweep(exp_sqrt_system(), norms)


def test_sweep_in_higher_dimension_uses_first_axis():
    rep = least_ubst_sweep(exp_sqrt_system(dim=3), [1.0, 2.0])
    single = least_ubst_sweep(exp_sqrt_system(), [1.0, 2.0])
    np.testing.assert_allclose(rep.observed, single.observed, atol=1e-9)


def test_lyapunov_short_trajectory_raises():
    spec = exp_sqrt_system()
    traj = integrate(spec, [1.0])
    short = Trajectory(traj.times[:4], traj.states[:4], traj.gains[:4], traj.lyap[:4],
                       False, "t_end", 3, 0, 0, 0.0)
    with pytest.raises(ValueError, match="too short"):
        lyapunov_check(spec, short)


def test_lyapunov_zero_trajectory_is_trivial():
    spec = exp_sqrt_system()
    n = 8
    traj = Trajectory(np.linspace(0, 1, n), np.zeros((n, 1)), np.zeros(n), np.zeros(n),
                      True, "settled", n - 1, 0, 0, 0.0)
    rep = lyapunov_check(spec, traj)
    assert rep.max_violation == 0.0 and rep.max_residual == 0.0 and rep.samples == 0


@pytest.mark.parametrize("make", [poly_beta_system, exp_sqrt_system])
def test_lyapunov_equality_case(make):
    spec = make()
    rep = lyapunov_check(spec, integrate(spec, [2.0], TIGHT))
    assert rep.samples > 10
    assert rep.max_residual <= 1e-4


def test_lyapunov_linear_base():
    A = np.array([[1.0, 1.0], [-1.0, 1.0]])
    spec = make_system(make_aut_gain("ExpSqrt", {}, "id"), dim=2, base="LinearMatrix", A=A)
    rep = lyapunov_check(spec, integrate(spec, [1.0, -0.5], TIGHT))
    assert rep.samples > 10
    assert rep.max_violation <= 1e-4


def test_lyapunov_detects_slow_trajectory():
    # a trajectory of a slower system violates the faster system's inequality
    fast, slow = exp_sqrt_system(T_c=0.5), exp_sqrt_system(T_c=1.0)
    rep = lyapunov_check(fast, integrate(slow, [1.0], TIGHT))
    assert rep.max_violation == pytest.approx(0.5, rel=1e-3)


def test_format_report_lines():
    rep = certify_settling(exp_sqrt_system(), [1.0])
    text = format_report(rep)
    lines = text.splitlines()
    assert len(lines) == len(rep.to_dict())
    assert any(line.startswith("verdict") and line.endswith("Match") for line in lines)
    sweep = format_report(least_ubst_sweep(exp_sqrt_system(), [1.0, 2.0]))
    assert "monotone_ok" in sweep and "Match, Match" in sweep
    assert not math.isnan(float(lines[0].split()[-1]))
