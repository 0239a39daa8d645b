"""Bracketed root finding for monotone scalar equations."""

import math
from dataclasses import dataclass

__all__ = ["RootResult", "RootError", "root_bracketed"]


@dataclass(frozen=True)
class RootResult:
    """Root estimate, residual there, iteration count and final bracket."""

    root: float
    residual: float
    iterations: int
    bracket: tuple


class RootError(ArithmeticError):
    """Raised for an invalid bracket or when iteration does not converge."""


def root_bracketed(f, lo, hi, tol=1e-12, *, fprime=None, xtol=None, max_iter=200):
    """Find a root of ``f`` in [lo, hi] by safeguarded Newton/bisection.

    Without ``fprime`` this is plain bisection.  With it, a Newton step is
    taken whenever it stays inside the current bracket and shrinks the
    residual reasonably; otherwise the bracket is bisected.

    Iteration stops when ``|f(root)| <= tol`` or the bracket is narrower
    than ``xtol`` (default: ``tol``).  In the second case the point with
    the smallest residual among the iterate and the bracket ends is
    returned; its residual may exceed ``tol`` when f is ulp-limited.
    """
    lo = float(lo)
    hi = float(hi)
    if not lo <= hi:
        raise RootError(f"bracket [{lo}, {hi}] is empty")
    xtol = tol if xtol is None else xtol
    flo = f(lo)
    if flo == 0:
        return RootResult(lo, 0.0, 0, (lo, lo))
    fhi = f(hi)
    if fhi == 0:
        return RootResult(hi, 0.0, 0, (hi, hi))
    if (flo > 0) == (fhi > 0):
        raise RootError(f"f(lo)={flo!r} and f(hi)={fhi!r} have the same sign")
    rising = fhi > 0

    x = 0.5 * (lo + hi)
    fx = f(x)
    for it in range(1, max_iter + 1):
        if abs(fx) <= tol:
            return RootResult(x, fx, it, (lo, hi))
        if (fx > 0) == rising:
            hi, fhi = x, fx
        else:
            lo, flo = x, fx
        if hi - lo <= xtol:
            return _best(x, fx, lo, flo, hi, fhi, it)
        step_x = None
        if fprime is not None:
            d = fprime(x)
            if d != 0 and math.isfinite(d):
                cand = x - fx / d
                if lo < cand < hi:
                    step_x = cand
        if step_x is None:
            step_x = 0.5 * (lo + hi)
            if step_x == lo or step_x == hi:
                return _best(x, fx, lo, flo, hi, fhi, it)
        x = step_x
        fx = f(x)
    raise RootError(f"no convergence in {max_iter} iterations, bracket [{lo}, {hi}]")


def _best(x, fx, lo, flo, hi, fhi, it):
    r, fr = min(((x, fx), (lo, flo), (hi, fhi)), key=lambda p: abs(p[1]))
    return RootResult(r, fr, it, (lo, hi))
