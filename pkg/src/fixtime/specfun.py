"""Special functions used by the gain constructions.

The Beta function convention here is the *unregularized* one,

    B(x; a, b) = int_0^x t**(a-1) (1-t)**(b-1) dt,

and ``si`` is the shifted sine integral ``Si(x) - pi/2``.  Evaluation is
delegated to :mod:`math` and :mod:`scipy.special`; this module adds the
domain checks and the conventions above.
"""

import math

import numpy as np
from scipy import special as _sp

__all__ = [
    "DomainError",
    "gamma",
    "beta",
    "inc_beta",
    "inc_beta_inv",
    "erf",
    "erf_inv",
    "erfc_inv",
    "cosint",
    "sinint_shifted",
]


class DomainError(ValueError):
    """Raised when an argument lies outside a function's domain."""


def gamma(z):
    """Gamma function for positive real arguments."""
    z = float(z)
    if not z > 0:
        raise DomainError(f"gamma requires z > 0, got {z!r}")
    return math.gamma(z)


def beta(a, b):
    """Complete Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)."""
    _check_ab(a, b)
    return float(_sp.beta(a, b))


def _check_ab(a, b):
    if not (a > 0 and b > 0):
        raise DomainError(f"Beta parameters must be positive, got a={a!r}, b={b!r}")


def inc_beta(x, a, b):
    """Lower incomplete Beta function B(x; a, b), unregularized.

    Parameters
    ----------
    x : float or ndarray
        Upper limit, in [0, 1].
    a, b : float
        Positive shape parameters.
    """
    _check_ab(a, b)
    xa = np.asarray(x, dtype=float)
    if np.any(~((xa >= 0) & (xa <= 1))):
        raise DomainError("inc_beta requires 0 <= x <= 1")
    out = _sp.betainc(a, b, xa) * _sp.beta(a, b)
    return float(out) if out.ndim == 0 else out


def inc_beta_inv(y, a, b):
    """Inverse of :func:`inc_beta` in its first argument.

    Returns x in [0, 1] with B(x; a, b) = y, for 0 <= y <= B(a, b).
    """
    _check_ab(a, b)
    total = _sp.beta(a, b)
    ya = np.asarray(y, dtype=float)
    # allow a few ulps of slack above the complete value
    if np.any(~((ya >= 0) & (ya <= total * (1 + 4e-16)))):
        raise DomainError(f"inc_beta_inv requires 0 <= y <= B(a, b) = {float(np.max(total)):.17g}")
    target = np.minimum(ya / total, 1.0)
    out = _sp.betaincinv(a, b, target)
    bad = np.isnan(out)
    if np.any(bad):
        # betaincinv gives nan for tiny y; there B(x; a, b) ~ x^a / a
        out = np.where(bad, _inc_beta_inv_small(np.where(bad, ya, 1.0), a, b), out)
    out = _newton_polish(out, target, a, b)
    return float(out) if out.ndim == 0 else out


def _newton_polish(x, target, a, b, steps=2):
    # the library inverse is occasionally off by ~1e-8 in the interior
    lb = math.log(_sp.beta(a, b))
    for _ in range(steps):
        interior = (x > 0) & (x < 1)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            dens = np.exp((a - 1) * np.log(x) + (b - 1) * np.log1p(-x) - lb)
            step = (_sp.betainc(a, b, x) - target) / dens
        ok = interior & np.isfinite(step) & (np.abs(step) < 1e-4 * np.minimum(x, 1 - x) + 1e-300)
        x = np.where(ok, np.clip(x - np.where(ok, step, 0.0), 0.0, 1.0), x)
    return x


def _inc_beta_inv_small(y, a, b):
    with np.errstate(divide="ignore"):
        lx = (np.log(a) + np.log(y)) / a
        for _ in range(4):
            # Newton on log x for B(x) = y using B(x) ~ x^a/a (1 - a(b-1)x/(a+1))
            x = np.exp(lx)
            corr = 1.0 - a * (b - 1.0) * x / (a + 1.0)
            lb = a * lx - np.log(a) + np.log(corr)
            lx = lx - (lb - np.log(y)) / a
    return np.where(y == 0, 0.0, np.exp(lx))


def erf(x):
    """Error function."""
    xa = np.asarray(x, dtype=float)
    out = _sp.erf(xa)
    return float(out) if out.ndim == 0 else out


def erf_inv(y):
    """Inverse error function on (-1, 1)."""
    ya = np.asarray(y, dtype=float)
    if np.any(~(np.abs(ya) < 1)):
        raise DomainError("erf_inv requires |y| < 1")
    out = _sp.erfinv(ya)
    return float(out) if out.ndim == 0 else out


def erfc_inv(y):
    """Inverse complementary error function on (0, 2).

    Accurate where ``erf_inv(1 - y)`` would cancel, i.e. for small y.
    """
    ya = np.asarray(y, dtype=float)
    if np.any(~((ya > 0) & (ya < 2))):
        raise DomainError("erfc_inv requires 0 < y < 2")
    out = _sp.erfcinv(ya)
    return float(out) if out.ndim == 0 else out


def _check_pos(x, name):
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError(f"{name} requires x > 0")
    return xa


def cosint(x):
    """Cosine integral ci(x) = -int_x^inf cos(t)/t dt, for x > 0."""
    xa = _check_pos(x, "cosint")
    out = _sp.sici(xa)[1]
    return float(out) if np.ndim(out) == 0 else out


def sinint_shifted(x):
    """Shifted sine integral si(x) = -int_x^inf sin(t)/t dt = Si(x) - pi/2."""
    xa = _check_pos(x, "sinint_shifted")
    out = _sp.sici(xa)[0] - np.pi / 2
    return float(out) if np.ndim(out) == 0 else out
