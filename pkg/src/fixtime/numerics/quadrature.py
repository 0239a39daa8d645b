"""Adaptive Gauss-Kronrod quadrature for singular and improper integrals."""

import heapq
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["QuadratureResult", "QuadratureError", "quad"]

# 15-point Kronrod extension of the 7-point Gauss rule (nonnegative half).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full symmetric node set on [-1, 1] and matching weights
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[1:14:2] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class QuadratureResult:
    """Value of an integral with its error estimate and cost."""

    value: float
    abs_error_estimate: float
    evaluations: int


class QuadratureError(ArithmeticError):
    """Raised when quadrature fails to reach tolerance.

    The best available estimate is kept on ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


def _rule(g, a, b):
    """Apply the G7-K15 pair to every interval [a_i, b_i] at once."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(g(nodes.ravel()), dtype=float).reshape(nodes.shape)
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("integrand returned a non-finite value inside the interval")
    k = half * (vals @ _KW)
    gs = half * (vals @ _GW)
    return k, np.abs(k - gs)


class _Counter:
    def __init__(self, f, vectorized):
        self.f = f if vectorized else np.vectorize(f, otypes=[float])
        self.n = 0

    def __call__(self, z):
        self.n += z.size
        return self.f(z)


def _adaptive(g, edges, tol, rel_tol, limit):
    """Globally adaptive bisection over the panels given by ``edges``."""
    a = np.asarray(edges[:-1], dtype=float)
    b = np.asarray(edges[1:], dtype=float)
    vals, errs = _rule(g, a, b)
    heap = [(-e, i, lo, hi, v) for i, (lo, hi, v, e) in enumerate(zip(a, b, vals, errs))]
    heapq.heapify(heap)
    serial = len(heap)
    done = []  # intervals too narrow to split further
    total_err = float(np.sum(errs))
    total_val = float(np.sum(vals))
    goal = max(tol, rel_tol * abs(total_val))
    while heap and total_err > goal:
        if serial + len(done) > limit:
            break
        picked = []
        budget = total_err - 0.5 * goal
        while heap and budget > 0 and len(picked) < 128:
            item = heapq.heappop(heap)
            budget += item[0]
            lo, hi = item[2], item[3]
            if hi - lo <= 1024 * np.finfo(float).eps * max(abs(lo), abs(hi), 1e-300):
                done.append((lo, hi, -item[0], item[4]))
                continue
            picked.append(item)
        if not picked:
            break
        lo = np.array([it[2] for it in picked])
        hi = np.array([it[3] for it in picked])
        mid = 0.5 * (lo + hi)
        v, e = _rule(g, np.concatenate([lo, mid]), np.concatenate([mid, hi]))
        m = len(picked)
        for j, it in enumerate(picked):
            total_err += it[0] + e[j] + e[m + j]
            total_val += v[j] + v[m + j] - it[4]
            heapq.heappush(heap, (-e[j], serial, lo[j], mid[j], v[j]))
            heapq.heappush(heap, (-e[m + j], serial + 1, mid[j], hi[j], v[m + j]))
            serial += 2
        goal = max(tol, rel_tol * abs(total_val))
    value = math.fsum(item[4] for item in heap) + math.fsum(d[3] for d in done)
    err = math.fsum(-item[0] for item in heap) + math.fsum(d[2] for d in done)
    return value, err, err <= max(tol, rel_tol * abs(value))


def _geometric_edges(lo, hi, scale):
    """Breakpoints lo, lo+s, lo+2s, lo+4s, ... up to hi."""
    edges = [lo]
    step = scale
    while lo + step < hi:
        edges.append(lo + step)
        step *= 2.0
    edges.append(hi)
    return edges


def _wynn(seq):
    """Last even-column entry of the Wynn epsilon table for ``seq``."""
    prev = [0.0] * (len(seq) + 1)
    cur = list(seq)
    best = cur[-1]
    for col in range(1, len(seq)):
        nxt = []
        for i in range(len(cur) - 1):
            diff = cur[i + 1] - cur[i]
            if diff == 0.0:
                return cur[i + 1]
            nxt.append(prev[i + 1] + 1.0 / diff)
        prev, cur = cur, nxt
        if col % 2 == 0 and cur:
            best = cur[-1]
    return best


def quad(f, lo, hi, tol=1e-10, *, rel_tol=0.0, singular_lo=False, tail="map",
         scale=1.0, limit=50000, vectorized=True):
    """Integrate ``f`` over [lo, hi] where hi may be ``inf``.

    Parameters
    ----------
    f : callable
        Integrand.  With ``vectorized=True`` it must accept a 1-d array.
    lo, hi : float
        Limits, ``lo <= hi``.  ``hi`` may be ``numpy.inf``.
    tol, rel_tol : float
        Absolute and relative targets for the error estimate.
    singular_lo : bool
        Substitute z = lo + u**2, which removes inverse square-root
        endpoint singularities and softens weaker ones.
    tail : {"map", "extrapolate"}
        Treatment of an infinite upper limit.  ``"map"`` splits at lo + scale
        and maps the tail by z = lo + scale/v.  ``"extrapolate"`` sums geometric panels of
        width ``scale * 2**j`` and accelerates the partial sums with the
        epsilon algorithm, which suits slowly decaying oscillatory tails;
        pick ``scale`` as a multiple of the oscillation period.
    scale : float
        Length scale for geometric panelling of long finite ranges.
    limit : int
        Maximum number of subintervals.

    Returns
    -------
    QuadratureResult

    Raises
    ------
    QuadratureError
        If the error target is not met; ``exc.result`` holds the estimate.
    """
    lo = float(lo)
    hi = float(hi)
    if math.isnan(lo) or math.isnan(hi) or lo > hi or math.isinf(lo):
        raise ValueError(f"invalid limits [{lo}, {hi}]")
    counter = _Counter(f, vectorized)
    if lo == hi:
        return QuadratureResult(0.0, 0.0, 1)

    if math.isinf(hi) and tail == "extrapolate":
        return _quad_panels(counter, lo, tol, rel_tol, singular_lo, scale, limit)
    if math.isinf(hi) and tail != "map":
        raise ValueError(f"unknown tail treatment {tail!r}")

    if math.isinf(hi):
        # head [lo, lo + scale]; tail z = lo + scale / v puts infinity at
        # v = 0, where floats are dense enough to resolve algebraic decay
        head = quad(counter, lo, lo + scale, 0.5 * tol, rel_tol=rel_tol,
                    singular_lo=singular_lo, limit=limit)

        def g(v):
            return counter(lo + scale / v) * (scale / (v * v))
        value, err, ok = _adaptive(g, [0.0, 0.125, 0.25, 0.5, 1.0], 0.5 * tol, rel_tol, limit)
        result = QuadratureResult(head.value + value, head.abs_error_estimate + err,
                                  max(counter.n, 1))
        if not ok:
            raise QuadratureError(
                f"quadrature did not converge on [{lo}, inf]: estimate {result.value!r}, "
                f"error {result.abs_error_estimate:.3e}", result)
        return result
    if singular_lo:
        def g(u):
            return counter(lo + u * u) * (2.0 * u)
        edges = _geometric_edges(0.0, math.sqrt(hi - lo), math.sqrt(scale))
    else:
        g = counter
        edges = _geometric_edges(lo, hi, scale)

    value, err, ok = _adaptive(g, edges, tol, rel_tol, limit)
    result = QuadratureResult(value, err, max(counter.n, 1))
    if not ok:
        raise QuadratureError(
            f"quadrature did not converge on [{lo}, {hi}]: estimate {value!r}, error {err:.3e}",
            result,
        )
    return result


def _quad_panels(counter, lo, tol, rel_tol, singular_lo, scale, limit, max_panels=64):
    ptol = tol / 16
    first = quad(counter, lo, lo + scale, ptol, singular_lo=singular_lo, limit=limit)
    sums = [first.value]
    err = first.abs_error_estimate
    estimates = []
    small = 0
    left = lo + scale
    width = scale
    for _ in range(max_panels):
        panel = quad(counter, left, left + width, ptol, limit=limit)
        err += panel.abs_error_estimate
        sums.append(sums[-1] + panel.value)
        left += width
        width *= 2.0
        small = small + 1 if abs(panel.value) <= ptol else 0
        if small >= 3:
            return QuadratureResult(sums[-1], err + 3 * ptol, counter.n)
        if len(sums) >= 5:
            estimates.append(_wynn(sums))
        if len(estimates) >= 3:
            spread = max(abs(estimates[-1] - estimates[-2]), abs(estimates[-1] - estimates[-3]))
            if spread + err <= max(tol, rel_tol * abs(estimates[-1])):
                return QuadratureResult(estimates[-1], spread + err, counter.n)
    best = estimates[-1] if estimates else sums[-1]
    raise QuadratureError(
        f"tail extrapolation did not settle from {lo}", QuadratureResult(best, math.inf, counter.n)
    )
