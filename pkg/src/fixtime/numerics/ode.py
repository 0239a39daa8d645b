"""Dormand-Prince 5(4) integration with settle detection and a horizon guard.

Autonomous systems are integrated in an arc-length-like variable s with

    dx/ds = f / (1 + |f|),    dt/ds = 1 / (1 + |f|),

so the unbounded speeds of singular gains far from the origin stay
bounded.  The speed is formed in the log domain, which keeps fields such
as sqrt(exp(2|x|) - 1) usable where they overflow.  The right-hand side
does not depend on s, so s is restarted at every step and never loses
resolution.

Time-varying systems are integrated in t directly.  Steps are capped at
half the remaining distance to the horizon and never reach
t0 + T_c (1 - horizon_guard).
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

__all__ = [
    "IntegratorConfig",
    "Trajectory",
    "IntegrationError",
    "Verdict",
    "SettlingReport",
    "integrate",
    "settle_time_tolerance",
]

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array(_A[6] + [0.0])
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])

SAFETY = 0.9
FAC_MIN, FAC_MAX = 0.2, 5.0
PI_ALPHA, PI_BETA = 0.17, 0.04
# relative width to which settle events are located
EVENT_TOL = 1e-12
APPROACH_FRACTION = 0.9
MAX_REJECT_STREAK = 200
# steps shorter than this many ulps of t are accepted without error control
FORCE_ULPS = 1024


class IntegrationError(ArithmeticError):
    """Step size underflow or an unusable right-hand side."""


class Verdict(str, Enum):
    MATCH = "Match"
    PREDICT_UNREACHED = "PredictUnreached"
    DIVERGED = "Diverged"


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and limits for :func:`integrate`."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-11
    eps_settle: float = 1e-8
    max_steps: int = 2_000_000
    horizon_guard: float = 1e-12
    gain_cap: float = 1e12

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "eps_settle", "max_steps", "horizon_guard", "gain_cap"):
            v = getattr(self, name)
            if not v > 0:
                raise ValueError(f"{name} must be positive, got {v!r}")
        if not self.horizon_guard < 1:
            raise ValueError("horizon_guard must be < 1")

    def with_overrides(self, **kw):
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


@dataclass
class Trajectory:
    """Recorded solution.

    ``termination`` is one of ``settled``, ``horizon``, ``budget`` or
    ``t_end``.  ``forced`` counts steps taken without error control
    because they were within a few hundred ulps of t.  ``max_eval_t_hat`` is the largest elapsed time at which
    the field was evaluated (time-varying gains only).
    """

    times: np.ndarray
    states: np.ndarray
    gains: np.ndarray
    lyap: np.ndarray
    settled: bool
    termination: str
    steps: int
    rejected: int
    evaluations: int
    t0: float
    steps_s: Optional[np.ndarray] = field(default=None, repr=False)
    forced: int = 0
    max_eval_t_hat: float = -math.inf
    config: Optional[IntegratorConfig] = field(default=None, repr=False)

    @property
    def final_time(self):
        return float(self.times[-1])

    @property
    def settling_time(self):
        """Elapsed time at termination."""
        return float(self.times[-1]) - self.t0


@dataclass(frozen=True)
class SettlingReport:
    """Predicted against observed settling time."""

    predicted: float
    observed: float
    eps_settle: float
    abs_gap: float
    verdict: Verdict
    steps: int
    tolerance: float = 0.0
    termination: str = ""

    def to_dict(self):
        return {"predicted": self.predicted, "observed": self.observed,
                "eps_settle": self.eps_settle, "abs_gap": self.abs_gap,
                "verdict": self.verdict.value, "steps": self.steps,
                "tolerance": self.tolerance, "termination": self.termination}


def settle_time_tolerance(T_c):
    """Absolute width to which the settle event time is located."""
    return EVENT_TOL * max(T_c, 1.0)


def _norm(x):
    return math.hypot(*x)


def _crossed(x_old, x_new):
    """True when x_new lies in the closed half-space opposite to x_old."""
    d = x_old / _norm(x_old)
    return float(np.dot(d, x_new / max(_norm(x_new), 1e-300))) <= 0.0


def _dp_step(f, s, y, h, k1):
    """One Dormand-Prince step; returns y_new, error vector, f(y_new)."""
    ks = [k1]
    for i in range(1, 6):
        yi = y + h * sum(a * k for a, k in zip(_A[i], ks) if a != 0.0)
        ks.append(f(s + _C[i] * h, yi))
    y_new = y + h * sum(b * k for b, k in zip(_A[6], ks) if b != 0.0)
    k7 = f(s + h, y_new)
    ks.append(k7)
    err = h * sum(e * k for e, k in zip(_E, ks) if e != 0.0)
    return y_new, err, k7


def _err_norm(err, y, y_new, rtol, atol):
    sc = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
    with np.errstate(invalid="ignore", over="ignore"):
        val = float(np.max(np.abs(err) / sc))
    return val if math.isfinite(val) else math.inf


def _initial_step(f, s, y, k1, rtol, atol, h_max):
    sc = atol + rtol * np.abs(y)
    d0 = float(np.max(np.abs(y) / sc))
    d1 = float(np.max(np.abs(k1) / sc))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, h_max)
    y1 = y + h0 * k1
    k2 = f(s + h0, y1)
    d2 = float(np.max(np.abs(k2 - k1) / sc)) / h0 if h0 > 0 else 0.0
    if not math.isfinite(d2):
        return h0 * 1e-3
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, h_max)


def integrate(spec, x0, cfg=None, *, t_end=None):
    """Integrate ``spec`` from ``x0`` at ``spec.t0`` until it settles.

    Parameters
    ----------
    spec : SystemSpec
        The system; anything providing ``g``, ``lyapunov``, ``log_gain``,
        ``T_c``, ``t0`` and ``is_autonomous`` works.
    x0 : array_like
        Initial state.
    cfg : IntegratorConfig, optional
    t_end : float, optional
        Extra stopping time for autonomous systems (default t0 + 10 T_c).

    Returns
    -------
    Trajectory
        With ``termination`` explaining why integration stopped.  A
        ``budget`` termination is returned, not raised.

    Raises
    ------
    IntegrationError
        When the step size underflows.
    """
    cfg = cfg or IntegratorConfig()
    x0 = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    if x0.shape != (spec.dim,):
        raise ValueError(f"x0 must have shape ({spec.dim},), got {x0.shape}")
    if not np.all(np.isfinite(x0)):
        raise ValueError("x0 must be finite")
    if not spec.is_autonomous and getattr(spec.gain, "gain_cap", cfg.gain_cap) != cfg.gain_cap:
        spec = replace(spec, gain=replace(spec.gain, gain_cap=cfg.gain_cap))
    if spec.is_autonomous:
        return _integrate_arclength(spec, x0, cfg, spec.t0 + 10 * spec.T_c if t_end is None else t_end)
    return _integrate_time(spec, x0, cfg)


class _Recorder:
    def __init__(self, spec):
        self.spec = spec
        self.t, self.x, self.g, self.v, self.ds = [], [], [], [], []
        self.pending = 0.0

    def add(self, t, x, ds=0.0):
        # ds: integration-variable length of the step that ended here
        self.pending += ds
        if self.t and not t > self.t[-1]:
            return
        self.t.append(float(t))
        self.x.append(np.array(x, dtype=float))
        self.g.append(self.spec.gain_at(x, t) if np.any(x) else math.nan)
        self.v.append(self.spec.lyapunov(x))
        if len(self.t) > 1:
            self.ds.append(self.pending)
        self.pending = 0.0

    def build(self, **kw):
        return Trajectory(np.array(self.t), np.array(self.x), np.array(self.g),
                          np.array(self.v), steps_s=np.array(self.ds), **kw)


def _integrate_arclength(spec, x0, cfg, t_end):
    n = spec.dim
    count = [0]

    def rhs(_s, y):
        count[0] += 1
        x = y[:n]
        out = np.zeros(n + 1)
        gx = spec.g(x)
        ng = _norm(gx)
        lg = spec.log_gain(x, y[n]) - math.log(spec.T_c) if ng > 0 else -math.inf
        if lg == -math.inf:
            out[n] = 1.0
            return out
        ls = lg + math.log(ng)
        lden = np.logaddexp(0.0, ls)
        out[:n] = -(gx / ng) * math.exp(ls - lden)
        out[n] = math.exp(-lden)
        return out

    def state_of(y):
        return y[:n], y[n]

    y0 = np.concatenate([x0, [spec.t0]])
    return _drive(spec, cfg, rhs, y0, state_of, track_s=False, count=count,
                  t_limit=t_end, h_cap=None)


def _integrate_time(spec, x0, cfg):
    T_c, t0 = spec.T_c, spec.t0
    limit = t0 + T_c * (1.0 - cfg.horizon_guard)
    t_stop = math.nextafter(limit, -math.inf)
    while t_stop - t0 >= T_c * (1.0 - cfg.horizon_guard):
        t_stop = math.nextafter(t_stop, -math.inf)
    count = [0]
    seen = [-math.inf]

    def rhs(t, x):
        count[0] += 1
        th = t - t0
        if th > seen[0]:
            seen[0] = th
        lg = spec.log_gain(x, t) - math.log(T_c)
        if lg == -math.inf or not np.any(x):
            return np.zeros_like(x)
        return -math.exp(lg) * spec.g(x)

    # within a few ulps of t_stop, stage times are quantized and the error
    # estimate is noise, so that close counts as reaching the horizon
    t_near = t_stop - 64 * math.ulp(t_stop)

    def h_cap(t, h):
        h = min(h, 0.5 * (t0 + T_c - t))
        if t + h >= t_near:
            h = t_stop - t
        return h

    traj = _drive(spec, cfg, rhs, x0.copy(), lambda y: (y, None), track_s=True, count=count,
                  t_limit=t_near, h_cap=h_cap)
    traj.max_eval_t_hat = seen[0]
    return traj


def _drive(spec, cfg, rhs, y, state_of, *, track_s, count, t_limit, h_cap):
    """Shared step loop.

    ``track_s`` is true when the independent variable is physical time;
    otherwise time lives in the last state component and s restarts at 0.
    """
    rtol, atol, eps = cfg.rel_tol, cfg.abs_tol, cfg.eps_settle
    rec = _Recorder(spec)

    def time_of(s, yy):
        return s if track_s else float(yy[-1])

    s = spec.t0 if track_s else 0.0
    x, _ = state_of(y)
    rec.add(time_of(s, y), x)
    base = dict(t0=spec.t0, config=cfg)
    if _norm(x) <= eps:
        return rec.build(settled=True, termination="settled", steps=0, rejected=0,
                         evaluations=count[0], **base)

    k1 = rhs(s, y)
    h_max = math.inf
    if track_s:
        h_max = t_limit - s
    h = _initial_step(rhs, s, y, k1, rtol, atol, h_max if track_s else 0.1 * (1 + _norm(x)))
    err_prev = 1.0
    steps = rejected = streak = forced = 0
    rejected_last = False
    evt_tol = settle_time_tolerance(spec.T_c)

    while steps < cfg.max_steps:
        # near a finite-time equilibrium the field does not shrink with x;
        # a step past the origin makes the stages cancel and x creeps, so
        # keep the predictor from moving the state by more than 90% of its norm
        x_cur, _ = state_of(y)
        speed = _norm(state_of(k1)[0])
        if speed > 0 and h * speed > APPROACH_FRACTION * _norm(x_cur):
            h = APPROACH_FRACTION * _norm(x_cur) / speed
        if h_cap is not None:
            h = h_cap(s, h)
        if not h > 0:
            raise IntegrationError(f"step size underflow at t = {time_of(s, y)!r}")
        y_new, err, k7 = _dp_step(rhs, s, y, h, k1)
        en = _err_norm(err, y, y_new, rtol, atol)
        if en > 1.0 and track_s and h <= FORCE_ULPS * math.ulp(s) and math.isfinite(en):
            # the time grid cannot resolve this step; take it as is
            forced += 1
            en = 1.0
        if en > 1.0:
            rejected += 1
            streak += 1
            rejected_last = True
            if streak > MAX_REJECT_STREAK:
                raise IntegrationError(f"step rejected {streak} times in a row at t = "
                                       f"{time_of(s, y)!r}")
            h *= max(FAC_MIN, SAFETY * en ** -PI_ALPHA) if math.isfinite(en) else FAC_MIN
            if np.all(y + h * k1 == y) and (not track_s or s + h == s):
                raise IntegrationError(f"step size underflow at t = {time_of(s, y)!r}")
            continue
        steps += 1
        streak = 0
        x_old, _ = state_of(y)
        x_new, _ = state_of(y_new)
        s_new = s + h if track_s else 0.0

        if _norm(x_new) <= eps or _crossed(x_old, x_new):
            t_evt, y_evt, h_evt = _locate(rhs, s, y, h, k1, state_of, eps, evt_tol, track_s)
            rec.add(t_evt, state_of(y_evt)[0], h_evt)
            return rec.build(settled=True, termination="settled", steps=steps,
                             rejected=rejected, evaluations=count[0], forced=forced, **base)

        s, y, k1 = s_new, y_new, k7
        t_now = time_of(s, y)
        rec.add(t_now, x_new, h)
        if track_s and t_now >= t_limit:
            return rec.build(settled=False, termination="horizon", steps=steps,
                             rejected=rejected, evaluations=count[0], forced=forced, **base)
        if not track_s and t_now >= t_limit:
            return rec.build(settled=False, termination="t_end", steps=steps,
                             rejected=rejected, evaluations=count[0], forced=forced, **base)

        # PI step-size control
        en = max(en, 1e-10)
        fac = SAFETY * en ** -PI_ALPHA * err_prev ** PI_BETA
        fac = min(FAC_MAX, max(FAC_MIN, fac))
        if rejected_last:
            fac = min(fac, 1.0)
        h *= fac
        err_prev = en
        rejected_last = False

    return rec.build(settled=False, termination="budget", steps=steps, rejected=rejected,
                     evaluations=count[0], forced=forced, **base)


def _locate(rhs, s, y, h, k1, state_of, eps, evt_tol, track_s):
    """Bisect the step length for the first time the settle predicate holds.

    Returns ``(t_event, y_event, step)``; each trial re-steps from ``(s, y)``.
    """
    x_start, _ = state_of(y)

    def trial(hh):
        yy, _, _ = _dp_step(rhs, s, y, hh, k1)
        return yy

    def hit(yy):
        xx, _ = state_of(yy)
        return _norm(xx) <= eps or _crossed(x_start, xx)

    lo, hi = 0.0, h
    y_hi = trial(hi)
    t_of = (lambda hh, yy: s + hh) if track_s else (lambda hh, yy: float(yy[-1]))
    t_lo = t_of(0.0, y)
    t_hi = t_of(hi, y_hi)
    for _ in range(200):
        if t_hi - t_lo <= evt_tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        y_mid = trial(mid)
        if hit(y_mid):
            hi, y_hi, t_hi = mid, y_mid, t_of(mid, y_mid)
        else:
            lo, t_lo = mid, t_of(mid, y_mid)
    return t_hi, y_hi, hi
