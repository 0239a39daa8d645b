"""Autonomous gains: densities Phi on [0, inf) with Phi(0) = inf and unit mass.

Every family has the form

    Phi(z) = F(h(z)) h'(z) / M

where F is a positive density on (0, inf) with total mass M and h is a
K_inf^inf shaping function.  The system built from Phi,

    dx/dt = -(1/T_c) (Phi(|x|) |x|)^{-1} x,

reaches the origin at time T_c times the integral of Phi from 0 to |x0|.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from . import specfun
from .numerics.quadrature import QuadratureError, quad
from .shapes import ShapeFn, make_shape

__all__ = [
    "AutFamily",
    "AutGain",
    "GainValidationError",
    "make_aut_gain",
    "compose_from_density",
    "phi",
    "psi_vector_field",
    "predict_settling_aut",
    "normalization",
    "poly_beta_gamma",
    "sinusoid_rho",
    "AUT_CONDITIONS",
]

NORM_TOL = 1e-6


class GainValidationError(ValueError):
    """Gain parameters violate the family's conditions."""


class AutFamily(str, Enum):
    POLY_BETA = "PolyBeta"
    EXP_SQRT = "ExpSqrt"
    EXP = "Exp"
    SINUSOID = "Sinusoid"
    COMPOSED = "Composed"


AUT_CONDITIONS = {
    AutFamily.POLY_BETA: (
        "(1/gamma) (alpha h^p + beta h^q)^(-k) h'",
        "kp<1, kq>1, alpha,beta,p,q,k>0",
    ),
    AutFamily.EXP_SQRT: ("(2/pi) (exp(2h) - 1)^(-1/2) h'", "h in K_inf^inf"),
    AutFamily.EXP: ("exp(-h) h'", "h'(z) -> +inf as z -> 0+"),
    AutFamily.SINUSOID: (
        "(1/rho) (sin(h) + alpha) (1 + h)^(-2) h'",
        "alpha>1, h'(z) -> +inf as z -> 0+, rho = alpha - ci(1)cos(1) - si(1)sin(1)",
    ),
}


def poly_beta_gamma(alpha, beta, p, q, k):
    """Mass of (alpha w^p + beta w^q)^(-k) over (0, inf)."""
    mp = (1 - k * p) / (q - p)
    mq = (k * q - 1) / (q - p)
    return (specfun.gamma(mp) * specfun.gamma(mq) * (alpha / beta) ** mp
            / (alpha ** k * specfun.gamma(k) * (q - p)))


def sinusoid_rho(alpha):
    """Mass of (sin w + alpha) (1 + w)^(-2) over (0, inf)."""
    return alpha - specfun.cosint(1.0) * math.cos(1.0) - specfun.sinint_shifted(1.0) * math.sin(1.0)


@dataclass(frozen=True)
class AutGain:
    """Immutable autonomous gain.

    ``derived`` holds the normalizing constant under its usual name
    (``gamma``, ``rho`` or ``M``).  ``period`` is the oscillation period
    of the density in shape coordinates, if any.
    """

    family: AutFamily
    params: dict
    shape: ShapeFn
    derived: dict = field(default_factory=dict)
    log_density: Callable = field(default=None, repr=False, compare=False)
    period: Optional[float] = None

    @property
    def mass(self):
        return next(iter(self.derived.values()), 1.0)

    def density(self, w):
        """F(w)/M, i.e. Phi pulled back to shape coordinates."""
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.exp(self.log_density(np.asarray(w, dtype=float)) - math.log(self.mass))

    def log_phi(self, z):
        """log Phi(z), elementwise; +inf at z = 0."""
        z = np.asarray(z, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = (self.log_density(self.shape.value(z)) + self.shape.log_derivative(z)
                   - math.log(self.mass))
        out = np.where(z == 0, np.inf, out)
        return float(out) if out.ndim == 0 else out

    def phi(self, z):
        with np.errstate(over="ignore"):
            return np.exp(self.log_phi(z))

    def to_dict(self):
        if self.family is AutFamily.COMPOSED:
            raise TypeError("composed gains have no serial form")
        return {"kind": "autonomous", "family": self.family.value,
                "params": dict(self.params), "shape": self.shape.name}


def _log_poly_beta(alpha, beta, p, q, k):
    la, lb = math.log(alpha), math.log(beta)

    def f(w):
        with np.errstate(divide="ignore"):
            lw = np.log(w)
        return -k * np.logaddexp(la + p * lw, lb + q * lw)
    return f


def _log_exp_sqrt(w):
    # -0.5 log(exp(2w) - 1), split to avoid overflow for large w
    with np.errstate(divide="ignore", over="ignore"):
        small = -0.5 * np.log(np.expm1(2.0 * np.minimum(w, 20.0)))
        large = -w - 0.5 * np.log1p(-np.exp(-2.0 * np.maximum(w, 20.0)))
    return np.where(w < 20.0, small, large)


def _log_exp(w):
    return -np.asarray(w, dtype=float)


def _log_sinusoid(alpha):
    def f(w):
        return np.log(np.sin(w) + alpha) - 2.0 * np.log1p(w)
    return f


def _require(cond, msg):
    if not cond:
        raise GainValidationError(msg)


def _singular_deriv(shape):
    with np.errstate(divide="ignore"):
        d0 = float(shape.deriv(0.0))
    return math.isinf(d0) and d0 > 0


def make_aut_gain(family, params=None, shape="id"):
    """Construct a catalog gain after checking its row conditions.

    Parameters
    ----------
    family : AutFamily or str
        ``PolyBeta``, ``ExpSqrt``, ``Exp`` or ``Sinusoid``.
    params : dict
        ``alpha, beta, p, q, k`` for PolyBeta, ``alpha`` for Sinusoid.
    shape : ShapeFn or str
        Shaping function or its registry name.

    Raises
    ------
    GainValidationError
        With the violated inequality in the message.
    """
    family = AutFamily(family)
    params = {k: float(v) for k, v in (params or {}).items()}
    if isinstance(shape, str):
        shape = make_shape(shape)
    _require(shape.is_unbounded, f"shape {shape.name!r} must be K_inf^inf")

    if family is AutFamily.POLY_BETA:
        missing = {"alpha", "beta", "p", "q", "k"} - params.keys()
        _require(not missing, f"PolyBeta needs parameters {sorted(missing)}")
        a, b, p, q, k = (params[n] for n in ("alpha", "beta", "p", "q", "k"))
        for n in ("alpha", "beta", "p", "q", "k"):
            _require(params[n] > 0, f"alpha,beta,p,q,k>0 violated: {n} = {params[n]!r}")
        _require(k * p < 1, f"kp<1 violated: k*p = {k * p!r}")
        _require(k * q > 1, f"kq>1 violated: k*q = {k * q!r}")
        gain = AutGain(family, params, shape, {"gamma": poly_beta_gamma(a, b, p, q, k)},
                       _log_poly_beta(a, b, p, q, k))
    elif family is AutFamily.EXP_SQRT:
        gain = AutGain(family, params, shape, {"M": math.pi / 2}, _log_exp_sqrt)
    elif family is AutFamily.EXP:
        _require(_singular_deriv(shape), "h'(z) -> +inf as z -> 0+ violated by shape "
                 f"{shape.name!r}")
        gain = AutGain(family, params, shape, {"M": 1.0}, _log_exp)
    elif family is AutFamily.SINUSOID:
        _require("alpha" in params, "Sinusoid needs parameter alpha")
        _require(params["alpha"] > 1, f"alpha>1 violated: alpha = {params['alpha']!r}")
        _require(_singular_deriv(shape), "h'(z) -> +inf as z -> 0+ violated by shape "
                 f"{shape.name!r}")
        gain = AutGain(family, params, shape, {"rho": sinusoid_rho(params["alpha"])},
                       _log_sinusoid(params["alpha"]), period=2 * math.pi)
    else:
        raise GainValidationError("use compose_from_density for custom densities")
    _check_normalization(gain)
    return gain


def compose_from_density(F, shape, mass=None, period=None):
    """Build Phi(z) = F(h(z)) h'(z) / M from a density F on (0, inf).

    ``F`` must accept numpy arrays.  When ``mass`` is omitted it is found
    by quadrature.  ``period`` flags an oscillating F and selects tail
    extrapolation for the integrals.
    """
    if isinstance(shape, str):
        shape = make_shape(shape)
    _require(shape.is_unbounded, f"shape {shape.name!r} must be K_inf^inf")

    def log_f(w):
        with np.errstate(divide="ignore"):
            return np.log(F(w))

    if mass is None:
        mass = _integrate_tail(lambda w: F(np.asarray(w, dtype=float)), period).value
    _require(mass > 0 and math.isfinite(mass), f"density mass must be positive, got {mass!r}")
    gain = AutGain(AutFamily.COMPOSED, {}, shape, {"M": float(mass)}, log_f, period)
    _check_normalization(gain)
    return gain


def _integrate_tail(f, period, tol=1e-10):
    if period:
        return quad(f, 0.0, math.inf, tol, singular_lo=True, tail="extrapolate", scale=period)
    return quad(f, 0.0, math.inf, tol, singular_lo=True)


def normalization(gain):
    """Integral of Phi over [0, inf), computed in shape coordinates.

    Substituting w = h(z) turns the integral into that of F(w)/M, whose
    tail stays representable even for logarithmic shapes.
    """
    return _integrate_tail(gain.density, gain.period)


def _check_normalization(gain):
    try:
        res = normalization(gain)
    except QuadratureError as exc:
        raise GainValidationError(f"normalization quadrature failed: {exc}") from exc
    _require(abs(res.value - 1.0) <= NORM_TOL,
             f"normalization check failed: integral of Phi = {res.value!r}")


def phi(gain, z):
    """Phi(z); +inf at z = 0."""
    return gain.phi(z)


def psi_vector_field(gain, x, T_c):
    """The field -(1/T_c) (Phi(|x|) |x|)^{-1} x, zero at the origin."""
    x = np.asarray(x, dtype=float)
    r = math.hypot(*np.ravel(x))
    if r == 0.0:
        return np.zeros_like(x)
    log_rate = -math.log(T_c) - gain.log_phi(r) - math.log(r)
    rate = math.exp(log_rate) if log_rate < 709.0 else math.inf
    return -rate * x


def predict_settling_aut(gain, x0_norm, T_c, tol=1e-11):
    """Settling time T_c * int_0^{x0_norm} Phi(z) dz."""
    x0_norm = float(x0_norm)
    if x0_norm < 0:
        raise ValueError("x0_norm must be nonnegative")
    if x0_norm == 0:
        return 0.0
    if math.isinf(x0_norm):
        return float(T_c)
    res = quad(gain.phi, 0.0, x0_norm, tol, singular_lo=True)
    return float(T_c) * min(max(res.value, 0.0), 1.0)
