"""Time-varying gains that diverge at the horizon t_hat = T_c.

A gain is described through a density Phi on the base-time axis tau and
the time map psi(tau) = T_c * int_0^tau Phi.  In the fixed-time system
the gain at t_hat < T_c is 1 / Phi(psi^{-1}(t_hat)); past the horizon it
is 1.  Each family below provides the gain, Phi and psi in closed form.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import specfun
from .gain_aut import GainValidationError, poly_beta_gamma
from .numerics.quadrature import QuadratureError, quad
from .shapes import ShapeFn, make_shape

__all__ = [
    "NonAutFamily",
    "NonAutGain",
    "make_nonaut_gain",
    "tbg_from_shape",
    "tbg_profile",
    "gain_value",
    "phi_of_tau",
    "predict_settling_nonaut",
    "normalization",
    "NONAUT_CONDITIONS",
    "DEFAULT_GAIN_CAP",
]

DEFAULT_GAIN_CAP = 1e12
P_CAP = 1e12
NORM_TOL = 1e-6
# relative distance to T_c below which the gain is clamped outright
HORIZON_CLAMP = 1e-14


class NonAutFamily(str, Enum):
    TBG = "TBG"
    SECANT = "Secant"
    ERF_INV = "ErfInv"
    BETA_INV = "BetaInv"


NONAUT_CONDITIONS = {
    NonAutFamily.TBG: (
        "T_c eta'(t) / (1 - eta(t))^(alpha+1)",
        "α≥0 and η(z) is K_{T_c}^1",
    ),
    NonAutFamily.SECANT: (
        "(pi/2) sec(pi t / (2 T_c))^2 eta'(tan(pi t / (2 T_c)))",
        "eta(z) is K_inf^inf",
    ),
    NonAutFamily.ERF_INV: (
        "(sqrt(pi)/2) eta'(s) exp(s^2), s = erf^-1(t / T_c)",
        "eta(z) is K_inf^inf",
    ),
    NonAutFamily.BETA_INV: (
        "gamma (alpha P^p + beta P^q)^k eta'(P)",
        "kp<1, kq>1, alpha,beta,p,q,k>0, eta(z) is K_inf^inf; "
        "P^(p-q) = (beta/alpha) / B^-1(Gamma(m_p)Gamma(m_q) t / (Gamma(k) T_c); m_p, m_q) - beta/alpha",
    ),
}


def tbg_profile(eta, alpha):
    """The K_{T_c}^inf profile h = ((1-eta)^(-alpha) - 1)/alpha, or -log(1-eta)."""
    alpha = float(alpha)
    if eta.complement is not None:
        one_minus = eta.complement

        def log_one_minus(z):
            return np.log(one_minus(z))
    else:
        def one_minus(z):
            return 1.0 - eta.value(z)

        def log_one_minus(z):
            return np.log1p(-eta.value(z))

    if alpha == 0.0:
        def value(z):
            with np.errstate(divide="ignore"):
                return -log_one_minus(z)

        def deriv(z):
            with np.errstate(divide="ignore"):
                return eta.deriv(z) / one_minus(z)

        def inverse(tau):
            return eta.inverse(-np.expm1(-np.asarray(tau, dtype=float)))
    else:
        def value(z):
            with np.errstate(divide="ignore"):
                return np.expm1(-alpha * log_one_minus(z)) / alpha

        def deriv(z):
            with np.errstate(divide="ignore"):
                return eta.deriv(z) * one_minus(z) ** (-(alpha + 1.0))

        def inverse(tau):
            tau = np.asarray(tau, dtype=float)
            return eta.inverse(-np.expm1(-np.log1p(alpha * tau) / alpha))

    return ShapeFn(f"tbg[{eta.name},{alpha}]", value, deriv, inverse,
                   domain_sup=eta.domain_sup, range_sup=math.inf)


@dataclass(frozen=True)
class NonAutGain:
    """Immutable non-autonomous gain.

    ``profile`` is the K_{T_c}^inf profile for TBG gains, unused otherwise.
    """

    family: NonAutFamily
    params: dict
    eta: Optional[ShapeFn]
    T_c: float
    gain_cap: float = DEFAULT_GAIN_CAP
    profile: Optional[ShapeFn] = field(default=None, repr=False, compare=False)
    derived: dict = field(default_factory=dict)

    # -- gain in real time -------------------------------------------------
    def evaluate(self, t_hat):
        """Return ``(value, clamped)`` for the gain at elapsed time ``t_hat``."""
        t_hat = float(t_hat)
        if not t_hat >= 0:
            raise ValueError(f"t_hat must be nonnegative, got {t_hat!r}")
        T_c = self.T_c
        if t_hat >= T_c:
            return 1.0, False
        if T_c - t_hat <= HORIZON_CLAMP * T_c:
            return self.gain_cap, True
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            value, clamped = self._raw(t_hat)
        if not value <= self.gain_cap:  # also catches nan
            return self.gain_cap, True
        return value, clamped

    def gain_value(self, t_hat):
        return self.evaluate(t_hat)[0]

    def _raw(self, t_hat):
        T_c = self.T_c
        fam = self.family
        if fam is NonAutFamily.TBG:
            return T_c * float(self.profile.deriv(t_hat)), False
        if fam is NonAutFamily.SECANT:
            s = math.tan(math.pi * t_hat / (2.0 * T_c))
            return 0.5 * math.pi * (1.0 + s * s) * float(self.eta.deriv(s)), False
        if fam is NonAutFamily.ERF_INV:
            frac = t_hat / T_c
            if frac <= 0.5:
                s = specfun.erf_inv(frac)
            else:
                s = specfun.erfc_inv((T_c - t_hat) / T_c)
            return 0.5 * math.sqrt(math.pi) * float(self.eta.deriv(s)) * math.exp(s * s), False
        return self._beta_inv_gain(t_hat)

    def _beta_inv_gain(self, t_hat):
        d = self.derived
        a, b, p, q, k = (self.params[n] for n in ("alpha", "beta", "p", "q", "k"))
        mp, mq, total = d["m_p"], d["m_q"], d["B"]
        frac = t_hat / self.T_c
        # u solves B(u; m_p, m_q) = frac * B(m_p, m_q); v = 1 - u via the mirror
        if frac <= 0.5:
            u = specfun.inc_beta_inv(frac * total, mp, mq)
            v = 1.0 - u
        else:
            v = specfun.inc_beta_inv((self.T_c - t_hat) / self.T_c * total, mq, mp)
            u = 1.0 - v
        if u == 0.0:
            P = 0.0
        elif v == 0.0:
            P = math.inf
        else:
            P = (a / b * u / v) ** (1.0 / (q - p))
        clamped = P > P_CAP
        P = min(P, P_CAP)
        value = d["gamma"] * (a * P ** p + b * P ** q) ** k * float(self.eta.deriv(P))
        return value, clamped

    # -- base-time quantities ----------------------------------------------
    def phi_of_tau(self, tau):
        """Phi(tau), elementwise."""
        tau = np.asarray(tau, dtype=float)
        fam = self.family
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if fam is NonAutFamily.TBG:
                out = 1.0 / (self.T_c * self.profile.deriv(self.profile.inverse(tau)))
            else:
                w = self.eta.inverse(tau)
                dw = self.eta.deriv(w)
                if fam is NonAutFamily.SECANT:
                    out = (2.0 / math.pi) / (1.0 + w * w) / dw
                elif fam is NonAutFamily.ERF_INV:
                    out = (2.0 / math.sqrt(math.pi)) * np.exp(-w * w) / dw
                else:
                    a, b, p, q, k = (self.params[n] for n in ("alpha", "beta", "p", "q", "k"))
                    out = (a * w ** p + b * w ** q) ** (-k) / self.derived["gamma"] / dw
        return float(out) if out.ndim == 0 else out

    def psi(self, tau):
        """psi(tau) = T_c * int_0^tau Phi, in closed form."""
        tau = np.asarray(tau, dtype=float)
        T_c = self.T_c
        fam = self.family
        if fam is NonAutFamily.TBG:
            out = np.asarray(self.profile.inverse(tau), dtype=float)
        else:
            w = np.asarray(self.eta.inverse(tau), dtype=float)
            if fam is NonAutFamily.SECANT:
                out = (2.0 * T_c / math.pi) * np.arctan(w)
            elif fam is NonAutFamily.ERF_INV:
                out = T_c * np.asarray(specfun.erf(w))
            else:
                out = np.vectorize(self._beta_psi, otypes=[float])(w)
        return float(out) if out.ndim == 0 else out

    def _beta_psi(self, w):
        a, b, p, q = (self.params[n] for n in ("alpha", "beta", "p", "q"))
        mp, mq, total = self.derived["m_p"], self.derived["m_q"], self.derived["B"]
        if w == 0:
            return 0.0
        if math.isinf(w):
            return self.T_c
        r = b * w ** (q - p)
        u = r / (r + a)
        if u <= 0.5:
            return self.T_c * specfun.inc_beta(u, mp, mq) / total
        return self.T_c * (1.0 - specfun.inc_beta(a / (r + a), mq, mp) / total)

    def to_dict(self):
        if self.eta is None:
            raise TypeError("gains built from a bare profile have no serial form")
        return {"kind": "nonautonomous", "family": self.family.value,
                "params": dict(self.params), "eta": self.eta.name}


def _require(cond, msg):
    if not cond:
        raise GainValidationError(msg)


def make_nonaut_gain(family, params=None, eta="id", T_c=1.0, gain_cap=DEFAULT_GAIN_CAP):
    """Construct a catalog time-varying gain.

    Parameters
    ----------
    family : NonAutFamily or str
        ``TBG``, ``Secant``, ``ErfInv`` or ``BetaInv``.
    params : dict
        ``alpha`` for TBG; ``alpha, beta, p, q, k`` for BetaInv.
    eta : ShapeFn or str
        K_{T_c}^1 profile for TBG (e.g. ``"ramp"``), K_inf^inf otherwise.
    T_c : float
        Horizon.
    gain_cap : float
        Values above this are clamped (and flagged by ``evaluate``).
    """
    family = NonAutFamily(family)
    T_c = float(T_c)
    _require(T_c > 0, f"T_c>0 violated: T_c = {T_c!r}")
    _require(gain_cap > 0, "gain_cap must be positive")
    params = {k: float(v) for k, v in (params or {}).items()}
    if isinstance(eta, str):
        eta = make_shape(eta, T_c=T_c)

    derived = {}
    profile = None
    if family is NonAutFamily.TBG:
        alpha = params.setdefault("alpha", 0.0)
        _require(alpha >= 0, f"alpha>=0 violated: alpha = {alpha!r}")
        _require(eta.domain_sup == T_c and eta.range_sup == 1.0,
                 f"eta(z) is K_{{T_c}}^1 violated by shape {eta.name!r}")
        profile = tbg_profile(eta, alpha)
    else:
        _require(eta.is_unbounded, f"eta(z) is K_inf^inf violated by shape {eta.name!r}")
    if family is NonAutFamily.BETA_INV:
        missing = {"alpha", "beta", "p", "q", "k"} - params.keys()
        _require(not missing, f"BetaInv needs parameters {sorted(missing)}")
        a, b, p, q, k = (params[n] for n in ("alpha", "beta", "p", "q", "k"))
        for n in ("alpha", "beta", "p", "q", "k"):
            _require(params[n] > 0, f"alpha,beta,p,q,k>0 violated: {n} = {params[n]!r}")
        _require(k * p < 1, f"kp<1 violated: k*p = {k * p!r}")
        _require(k * q > 1, f"kq>1 violated: k*q = {k * q!r}")
        mp = (1 - k * p) / (q - p)
        mq = (k * q - 1) / (q - p)
        derived = {"gamma": poly_beta_gamma(a, b, p, q, k), "m_p": mp, "m_q": mq,
                   "B": specfun.beta(mp, mq)}
    gain = NonAutGain(family, params, eta, T_c, float(gain_cap), profile, derived)
    _check_normalization(gain)
    return gain


def tbg_from_shape(h, T_c, gain_cap=DEFAULT_GAIN_CAP):
    """Time-base generator from a K_{T_c}^inf profile ``h``.

    The gain is T_c h'(t_hat) and psi = h^{-1}.
    """
    T_c = float(T_c)
    _require(T_c > 0, f"T_c>0 violated: T_c = {T_c!r}")
    _require(h.domain_sup == T_c and math.isinf(h.range_sup),
             f"profile {h.name!r} must be K_{{T_c}}^inf with T_c = {T_c!r}")
    gain = NonAutGain(NonAutFamily.TBG, {}, None, T_c, float(gain_cap), h)
    _check_normalization(gain)
    return gain


def normalization(gain):
    """Integral of Phi(tau) over [0, inf).

    Heavy algebraic tails turn into endpoint singularities under the
    interval map, so panel extrapolation is the fallback.
    """
    try:
        return quad(gain.phi_of_tau, 0.0, math.inf, 1e-10, singular_lo=True)
    except QuadratureError:
        return quad(gain.phi_of_tau, 0.0, math.inf, 1e-10, singular_lo=True, tail="extrapolate")


def _check_normalization(gain):
    try:
        res = normalization(gain)
    except QuadratureError as exc:
        raise GainValidationError(f"normalization quadrature failed: {exc}") from exc
    _require(abs(res.value - 1.0) <= NORM_TOL,
             f"normalization check failed: integral of Phi = {res.value!r}")


def gain_value(g, t_hat):
    """Gain at elapsed time ``t_hat``; 1 for ``t_hat >= T_c``."""
    return g.gain_value(t_hat)


def phi_of_tau(g, tau):
    return g.phi_of_tau(tau)


def predict_settling_nonaut(g, base_settling, tol=1e-11):
    """Settling time T_c * int_0^{base_settling} Phi(tau) dtau."""
    base_settling = float(base_settling)
    if base_settling < 0:
        raise ValueError("base_settling must be nonnegative")
    if math.isinf(base_settling):
        return g.T_c
    if base_settling == 0:
        return 0.0
    res = quad(g.phi_of_tau, 0.0, base_settling, tol, singular_lo=True)
    return g.T_c * min(max(res.value, 0.0), 1.0)
