"""Class-K shaping functions and the registry used by JSON specs.

A shaping function is strictly increasing on [0, domain_sup) with
h(0) = 0 and h(z) -> range_sup as z -> domain_sup.  Every function here
works elementwise on numpy arrays.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = ["ShapeFn", "ShapeError", "make_shape", "shape_names"]


class ShapeError(ValueError):
    """Unknown or malformed shape name."""


@dataclass(frozen=True)
class ShapeFn:
    """A class-K function with analytic derivative and inverse.

    Attributes
    ----------
    name : str
        Registry name, used for serialization.
    value, deriv, inverse : callable
        h, h' and h^{-1}, all elementwise.
    domain_sup, range_sup : float
        The a and b of the class K_a^b.
    log_deriv : callable, optional
        log h', for callers working in the log domain.  Falls back to
        ``log(deriv(z))``.
    complement : callable, optional
        range_sup - h(z) without cancellation, for bounded profiles.
    """

    name: str
    value: Callable = field(repr=False, compare=False)
    deriv: Callable = field(repr=False, compare=False)
    inverse: Callable = field(repr=False, compare=False)
    domain_sup: float = math.inf
    range_sup: float = math.inf
    log_deriv: Optional[Callable] = field(default=None, repr=False, compare=False)
    complement: Optional[Callable] = field(default=None, repr=False, compare=False)

    def __call__(self, z):
        return self.value(z)

    def log_derivative(self, z):
        if self.log_deriv is not None:
            return self.log_deriv(z)
        with np.errstate(divide="ignore"):
            return np.log(self.deriv(z))

    @property
    def is_unbounded(self):
        return math.isinf(self.domain_sup) and math.isinf(self.range_sup)


def _identity():
    return ShapeFn(
        "id",
        value=lambda z: np.asarray(z, dtype=float) * 1.0,
        deriv=lambda z: np.ones_like(np.asarray(z, dtype=float)),
        inverse=lambda w: np.asarray(w, dtype=float) * 1.0,
        log_deriv=lambda z: np.zeros_like(np.asarray(z, dtype=float)),
    )


def _log1p():
    return ShapeFn(
        "log1p",
        value=np.log1p,
        deriv=lambda z: 1.0 / (1.0 + np.asarray(z, dtype=float)),
        inverse=np.expm1,
        log_deriv=lambda z: -np.log1p(z),
    )


def _power(p, name):
    if not p > 0:
        raise ShapeError(f"power shape needs a positive exponent, got {p!r}")

    def deriv(z):
        with np.errstate(divide="ignore"):
            return p * np.power(np.asarray(z, dtype=float), p - 1.0)

    def log_deriv(z):
        with np.errstate(divide="ignore"):
            return math.log(p) + (p - 1.0) * np.log(z)

    return ShapeFn(
        name,
        value=lambda z: np.power(np.asarray(z, dtype=float), p),
        deriv=deriv,
        inverse=lambda w: np.power(np.asarray(w, dtype=float), 1.0 / p),
        log_deriv=log_deriv,
    )


def _ramp(T_c):
    # eta(z) = z / T_c, a K_{T_c}^1 profile for time-base generators
    return ShapeFn(
        "ramp",
        value=lambda z: np.asarray(z, dtype=float) / T_c,
        deriv=lambda z: np.full_like(np.asarray(z, dtype=float), 1.0 / T_c),
        inverse=lambda w: np.asarray(w, dtype=float) * T_c,
        domain_sup=T_c,
        range_sup=1.0,
        log_deriv=lambda z: np.full_like(np.asarray(z, dtype=float), -math.log(T_c)),
        complement=lambda z: (T_c - np.asarray(z, dtype=float)) / T_c,
    )


def _sin_ramp(T_c):
    # eta(z) = sin(pi z / (2 T_c)), another K_{T_c}^1 profile
    c = math.pi / (2.0 * T_c)
    return ShapeFn(
        "sin_ramp",
        value=lambda z: np.sin(c * np.asarray(z, dtype=float)),
        deriv=lambda z: c * np.cos(c * np.asarray(z, dtype=float)),
        inverse=lambda w: np.arcsin(np.asarray(w, dtype=float)) / c,
        domain_sup=T_c,
        range_sup=1.0,
        # 1 - sin(c z) = 2 sin(c (T_c - z) / 2)^2
        complement=lambda z: 2.0 * np.sin(0.5 * c * (T_c - np.asarray(z, dtype=float))) ** 2,
    )


_BOUNDED = {"ramp": _ramp, "sin_ramp": _sin_ramp}


def shape_names():
    """Names accepted by :func:`make_shape` (``pow:<p>`` is a template)."""
    return ["id", "log1p", "sqrt", "pow:<p>", "ramp", "sin_ramp"]


def make_shape(name, T_c=None):
    """Build a registered shaping function.

    ``ramp`` and ``sin_ramp`` are K_{T_c}^1 profiles and need ``T_c``.
    """
    name = name.strip()
    if name == "id":
        return _identity()
    if name == "log1p":
        return _log1p()
    if name == "sqrt":
        return _power(0.5, "sqrt")
    if name.startswith("pow:"):
        try:
            p = float(name[4:])
        except ValueError:
            raise ShapeError(f"bad exponent in shape name {name!r}") from None
        return _power(p, name)
    if name in _BOUNDED:
        if T_c is None or not T_c > 0:
            raise ShapeError(f"shape {name!r} needs a positive T_c")
        return _BOUNDED[name](float(T_c))
    raise ShapeError(f"unknown shape {name!r}; known: {', '.join(shape_names())}")
