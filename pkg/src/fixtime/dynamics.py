"""Fixed-time systems dx/dt = -(1/T_c) Psi(V(x), t_hat) g(x).

Three base fields g are supported:

* ``Identity``: g(x) = x, V = |x|, H(V) = V.
* ``IdentityPlusRoot``: g(x) = x + |x|^(a-1) x, V = |x|, H(V) = V + V^a.
* ``LinearMatrix``: g(x) = A x with -A Hurwitz, V = sqrt(x'Px) where
  A'P + PA = I, and H(V) = V / (2 lambda_max(P)).

With an autonomous gain Psi = (Phi(V) H(V))^{-1}; with a time-varying
gain Psi is the gain value at t_hat = t - t0.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np
from scipy import linalg

from .gain_aut import AutGain, predict_settling_aut
from .gain_nonaut import NonAutGain
from .numerics.quadrature import quad
from .numerics.roots import RootError, root_bracketed

__all__ = [
    "Base",
    "SystemSpec",
    "SpecError",
    "LyapunovError",
    "make_system",
    "field",
    "base_settling",
    "lyapunov_solve",
    "converse_lyapunov",
    "predict_settling",
    "norm",
]


def norm(x):
    """Euclidean norm without underflow for tiny components."""
    return math.hypot(*np.ravel(x))


class SpecError(ValueError):
    """Inconsistent system specification."""


class LyapunovError(ValueError):
    """Matrix is not admissible for the Lyapunov construction."""


class Base(str, Enum):
    IDENTITY = "Identity"
    IDENTITY_PLUS_ROOT = "IdentityPlusRoot"
    LINEAR_MATRIX = "LinearMatrix"


def lyapunov_solve(A):
    """Solve A'P + PA = I for symmetric positive definite P.

    Raises
    ------
    LyapunovError
        If some eigenvalue of A has nonpositive real part.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise LyapunovError(f"A must be square, got shape {A.shape}")
    eig = np.linalg.eigvals(A)
    worst = eig[np.argmin(eig.real)]
    if not worst.real > 0:
        raise LyapunovError(f"-A is not Hurwitz: A has eigenvalue {worst:.6g}")
    P = linalg.solve_continuous_lyapunov(A.T, np.eye(A.shape[0]))
    return 0.5 * (P + P.T)


@dataclass(frozen=True)
class SystemSpec:
    """Immutable description of a fixed-time system.

    ``root_exp`` is the exponent a of ``IdentityPlusRoot``; ``A`` is the
    matrix of ``LinearMatrix``.  ``P`` and ``lam_max`` are filled in.
    """

    dim: int
    T_c: float
    gain: Union[AutGain, NonAutGain]
    base: Base = Base.IDENTITY
    t0: float = 0.0
    root_exp: float = 0.5
    A: Optional[np.ndarray] = field(default=None, compare=False)
    P: Optional[np.ndarray] = field(default=None, repr=False, compare=False)
    lam_max: float = field(default=1.0, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "base", Base(self.base))
        if not (isinstance(self.dim, int) and self.dim >= 1):
            raise SpecError(f"dim must be a positive integer, got {self.dim!r}")
        if not self.T_c > 0:
            raise SpecError(f"T_c must be positive, got {self.T_c!r}")
        if not self.t0 >= 0:
            raise SpecError(f"t0 must be nonnegative, got {self.t0!r}")
        if isinstance(self.gain, NonAutGain) and not math.isclose(self.gain.T_c, self.T_c):
            raise SpecError(f"gain horizon {self.gain.T_c} differs from T_c {self.T_c}")
        if self.base is Base.IDENTITY_PLUS_ROOT and not 0 < self.root_exp < 1:
            raise SpecError(f"root exponent must lie in (0, 1), got {self.root_exp!r}")
        if self.base is Base.LINEAR_MATRIX:
            if self.A is None:
                raise SpecError("LinearMatrix base needs a matrix A")
            A = np.array(self.A, dtype=float)
            if A.shape != (self.dim, self.dim):
                raise SpecError(f"A must be {self.dim}x{self.dim}, got {A.shape}")
            A.setflags(write=False)
            P = lyapunov_solve(A)
            P.setflags(write=False)
            object.__setattr__(self, "A", A)
            object.__setattr__(self, "P", P)
            object.__setattr__(self, "lam_max", float(np.linalg.eigvalsh(P)[-1]))

    @property
    def is_autonomous(self):
        return isinstance(self.gain, AutGain)

    # -- pieces used by the integrator and the checks ----------------------
    def lyapunov(self, x):
        x = np.asarray(x, dtype=float)
        r = norm(x)
        if self.base is Base.LINEAR_MATRIX:
            if r == 0.0:
                return 0.0
            u = x / r  # rescale so tiny states do not underflow
            return r * math.sqrt(max(float(u @ self.P @ u), 0.0))
        return r

    def H(self, V):
        if self.base is Base.IDENTITY:
            return V
        if self.base is Base.IDENTITY_PLUS_ROOT:
            return V + V ** self.root_exp
        return V / (2.0 * self.lam_max)

    def g(self, x):
        x = np.asarray(x, dtype=float)
        if self.base is Base.IDENTITY:
            return x
        if self.base is Base.IDENTITY_PLUS_ROOT:
            r = norm(x)
            if r == 0.0:
                return np.zeros_like(x)
            return x + r ** (self.root_exp - 1.0) * x
        return self.A @ x

    def log_gain(self, x, t):
        """log Psi(V(x), t - t0); -inf for a vanishing gain."""
        if self.is_autonomous:
            V = self.lyapunov(x)
            H = self.H(V)
            if V == 0.0 or H == 0.0:
                return -math.inf
            return -float(self.gain.log_phi(V)) - math.log(H)
        value = self.gain.gain_value(t - self.t0)
        return math.log(value) if value > 0 else -math.inf

    def gain_at(self, x, t):
        lg = self.log_gain(x, t)
        return math.exp(lg) if lg < 709.0 else math.inf

    def log_rate(self, x, t):
        """log of Psi / T_c."""
        return self.log_gain(x, t) - math.log(self.T_c)

    def to_dict(self):
        out = {"dim": self.dim, "T_c": self.T_c, "t0": self.t0,
               "gain": self.gain.to_dict(), "base": {"kind": self.base.value}}
        if self.base is Base.IDENTITY_PLUS_ROOT:
            out["base"]["a"] = self.root_exp
        if self.base is Base.LINEAR_MATRIX:
            out["base"]["A"] = self.A.tolist()
        return out


def make_system(gain, dim=1, T_c=1.0, base="Identity", t0=0.0, root_exp=0.5, A=None):
    """Convenience constructor mirroring :class:`SystemSpec`."""
    return SystemSpec(int(dim), float(T_c), gain, Base(base), float(t0), float(root_exp), A)


def field(spec, x, t):
    """Right-hand side -(1/T_c) Psi(V(x), t - t0) g(x); zero at the origin."""
    x = np.asarray(x, dtype=float)
    if t < spec.t0:
        raise ValueError(f"t = {t} precedes t0 = {spec.t0}")
    if not np.any(x):
        return np.zeros_like(x)
    lr = spec.log_rate(x, t)
    if lr == -math.inf:
        return np.zeros_like(x)
    rate = math.exp(lr) if lr < 709.0 else math.inf
    return -rate * spec.g(x)


def base_settling(spec, x0):
    """Settling time of the base system dx/dtau = -g(x).

    ``Identity`` never reaches the origin from x0 != 0.  For
    ``IdentityPlusRoot`` the norm obeys dr/dtau = -(r + r^a), giving
    log(1 + r0^(1-a)) / (1 - a).
    """
    r = norm(np.asarray(x0, dtype=float))
    if spec.base is Base.IDENTITY:
        return 0.0 if r == 0 else math.inf
    if spec.base is Base.IDENTITY_PLUS_ROOT:
        a = spec.root_exp
        return math.log1p(r ** (1.0 - a)) / (1.0 - a)
    raise SpecError("base settling time is only available for Identity and IdentityPlusRoot")


def predict_settling(spec, x0):
    """Predicted settling time of ``spec`` from ``x0``.

    Exact for the equality-case systems; an upper bound for a general
    ``LinearMatrix`` base with an autonomous gain.
    """
    from .gain_nonaut import predict_settling_nonaut

    if spec.is_autonomous:
        return predict_settling_aut(spec.gain, spec.lyapunov(x0), spec.T_c)
    return predict_settling_nonaut(spec.gain, base_settling(spec, x0))


def _settle_map(spec):
    """G(z) = T_c int_0^z Phi and its derivative."""
    gain = spec.gain

    def G(z):
        if z <= 0:
            return 0.0
        return spec.T_c * quad(gain.phi, 0.0, z, 1e-13, singular_lo=True).value

    def dG(z):
        return spec.T_c * float(gain.phi(z))

    return G, dG


def converse_lyapunov(spec, x, settling_time=None, tol=1e-12):
    """V(x) = G^{-1}(T(x)) with G(z) = T_c int_0^z Phi.

    ``settling_time`` defaults to the predicted settling time from x.
    """
    if not spec.is_autonomous:
        raise SpecError("converse Lyapunov construction needs an autonomous gain")
    T = predict_settling(spec, x) if settling_time is None else float(settling_time)
    if T <= 0:
        return 0.0
    if T >= spec.T_c:
        return math.inf
    G, dG = _settle_map(spec)
    hi = 1.0
    while G(hi) <= T:
        hi *= 2.0
        if hi > 1e300:
            raise RootError("could not bracket the converse Lyapunov value")
    res = root_bracketed(lambda z: G(z) - T, 0.0, hi, tol, fprime=dG, xtol=1e-15 * hi)
    return res.root
