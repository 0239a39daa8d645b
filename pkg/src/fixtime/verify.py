"""Executable certificates for settling-time and Lyapunov claims."""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .dynamics import Base, base_settling, norm, predict_settling
from .gain_aut import predict_settling_aut
from .gain_nonaut import predict_settling_nonaut
from .numerics.ode import (IntegratorConfig, SettlingReport, Verdict, integrate,
                           settle_time_tolerance)

__all__ = [
    "SweepReport",
    "LyapunovReport",
    "certify_settling",
    "least_ubst_sweep",
    "lyapunov_check",
    "eps_slack",
    "format_report",
]

MATCH_FLOOR = 1e-3


@dataclass(frozen=True)
class SweepReport:
    """Observed settling times over increasing initial norms."""

    x0_norms: list
    predicted: list
    observed: list
    sup_observed: float
    monotone_ok: bool
    sup_gap: float
    verdicts: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class LyapunovReport:
    """Finite-difference check of dV/dt <= -(1/T_c) Psi H(V) along a trajectory.

    Violations are normalized by the local rate (1/T_c) Psi H(V), so
    ``max_violation`` <= 0 means the inequality holds everywhere and
    ``max_residual`` measures departure from equality.
    """

    max_violation: float
    max_residual: float
    samples: int

    def to_dict(self):
        return asdict(self)


def eps_slack(spec, x0, eps):
    """Settling time left once the state enters the eps-ball.

    The simulation stops at |x| <= eps, so its event time undercuts the
    true settling time by about this much.
    """
    r0 = norm(x0)
    predicted = predict_settling(spec, x0)
    if r0 <= eps:
        return predicted
    if spec.is_autonomous:
        v_eps = eps * math.sqrt(spec.lam_max) if spec.base is Base.LINEAR_MATRIX else eps
        return predict_settling_aut(spec.gain, v_eps, spec.T_c)
    if spec.base is Base.IDENTITY:
        tau_eps = math.log(r0 / eps)
    else:
        tau_eps = base_settling(spec, x0) - base_settling(spec, [eps])
    return max(predicted - predict_settling_nonaut(spec.gain, tau_eps), 0.0)


def certify_settling(spec, x0, cfg=None):
    """Compare the predicted settling time with a simulation.

    The verdict is ``Match`` when the gap is at most
    max(1e-3, 10 * eps_slack), ``Diverged`` when the step budget ran
    out, and ``PredictUnreached`` otherwise.
    """
    cfg = cfg or IntegratorConfig()
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    traj = integrate(spec, x0, cfg)
    predicted = predict_settling(spec, x0)
    observed = traj.settling_time
    gap = abs(predicted - observed)
    tol = max(MATCH_FLOOR, 10.0 * eps_slack(spec, x0, cfg.eps_settle))
    if traj.termination == "budget":
        verdict = Verdict.DIVERGED
    elif traj.termination in ("settled", "horizon") and gap <= tol:
        verdict = Verdict.MATCH
    else:
        verdict = Verdict.PREDICT_UNREACHED
    return SettlingReport(predicted, observed, cfg.eps_settle, gap, verdict, traj.steps,
                          tol, traj.termination)


def least_ubst_sweep(spec, norms, cfg=None):
    """Certify settling from x0 = r e_1 for each r in ``norms``.

    ``norms`` must be nonnegative and strictly increasing.
    """
    norms = [float(r) for r in norms]
    if not norms:
        raise ValueError("norms must not be empty")
    if any(r < 0 for r in norms) or any(b <= a for a, b in zip(norms, norms[1:])):
        raise ValueError("norms must be nonnegative and strictly increasing")
    cfg = cfg or IntegratorConfig()
    predicted, observed, verdicts = [], [], []
    for r in norms:
        x0 = np.zeros(spec.dim)
        x0[0] = r
        rep = certify_settling(spec, x0, cfg)
        predicted.append(rep.predicted)
        observed.append(rep.observed)
        verdicts.append(rep.verdict.value)
    slack = 2.0 * settle_time_tolerance(spec.T_c)
    monotone = all(b >= a - slack for a, b in zip(observed, observed[1:]))
    sup_obs = max(observed)
    return SweepReport(norms, predicted, observed, sup_obs, monotone, spec.T_c - sup_obs,
                       verdicts)


def _fd_weights(x0, xs):
    """First-derivative weights at x0 for nodes xs (Fornberg's recursion)."""
    n = len(xs)
    c = np.zeros((n, 2))
    c1 = 1.0
    c4 = xs[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, 1)
        c2 = 1.0
        c5 = c4
        c4 = xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, 1]


def lyapunov_check(spec, trajectory, *, tail_fraction=0.01, noise_factor=1e5):
    """Check dV/dt + (1/T_c) Psi(V, t_hat) H(V) <= 0 along samples.

    dV/dt comes from fourth-order central differences on the recorded
    samples, taken against the integration variable: dV/dt is the ratio
    of dV/ds and dt/ds.  That variable is time itself for time-varying
    gains and the arc parameter for autonomous ones, where t alone can
    advance geometrically.  A sample is skipped when V, or the time spanned
    by its stencil, is below ``noise_factor * abs_tol``: there the
    differences would only see integration noise.  For time-varying gains
    the final ``tail_fraction`` of the horizon is skipped as well.

    Raises
    ------
    ValueError
        If the trajectory has fewer than 5 samples.
    """
    t = np.asarray(trajectory.times, dtype=float)
    V = np.asarray(trajectory.lyap, dtype=float)
    X = np.asarray(trajectory.states, dtype=float)
    if len(t) < 5:
        raise ValueError(f"trajectory too short for finite differences ({len(t)} < 5 samples)")
    ds = trajectory.steps_s
    if ds is None or len(ds) != len(t) - 1:
        ds = np.diff(t)
    cfg = trajectory.config or IntegratorConfig()
    floor = noise_factor * cfg.abs_tol
    t_cut = spec.t0 + (1.0 - tail_fraction) * spec.T_c
    worst = -math.inf
    resid = 0.0
    used = 0
    for i in range(2, len(t) - 2):
        if V[i] == 0.0 or V[i] <= floor or t[i + 2] - t[i - 2] <= floor:
            continue
        if not spec.is_autonomous and t[i] >= t_cut:
            continue
        # local offsets in s around sample i, exact even when s is large
        u = np.concatenate([[-(ds[i - 2] + ds[i - 1]), -ds[i - 1], 0.0],
                            [ds[i], ds[i] + ds[i + 1]]])
        w = _fd_weights(0.0, u)
        dt = float(w @ (t[i - 2:i + 3] - t[i]))
        if not dt > 0:
            continue
        dV = float(w @ V[i - 2:i + 3]) / dt
        rate = spec.gain_at(X[i], t[i]) * spec.H(V[i]) / spec.T_c
        if not (math.isfinite(rate) and rate > 0):
            continue
        viol = (dV + rate) / rate
        worst = max(worst, viol)
        resid = max(resid, abs(viol))
        used += 1
    if used == 0:
        return LyapunovReport(0.0, 0.0, 0)
    return LyapunovReport(worst, resid, used)


def format_report(report):
    """Aligned ``key  value`` lines for terminal output."""
    d = report.to_dict()
    width = max(len(k) for k in d)
    lines = []
    for k, v in d.items():
        if isinstance(v, list):
            v = ", ".join(f"{x:.10g}" if isinstance(x, float) else str(x) for x in v)
        elif isinstance(v, float):
            v = f"{v:.12g}"
        lines.append(f"{k.ljust(width)}  {v}")
    return "\n".join(lines)
