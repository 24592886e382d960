"""Shared numerical kernels: ODE integration, quadrature, root finding, Gamma.

All routines are deterministic pure functions of their arguments; nothing in
this module keeps global state, so values can be shared freely between
concurrent workers.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DivergentTail,
    DomainError,
    InvalidBracket,
    NoConvergence,
    NonFiniteRhs,
    StepSizeUnderflow,
)

__all__ = [
    "Tolerances",
    "RadialGrid",
    "integrate_ode",
    "quad",
    "find_root",
    "gamma_fn",
]


@dataclass(frozen=True)
class Tolerances:
    """Absolute/relative error targets plus an iteration budget."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_iterations: int = 10_000

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise DomainError("tolerances must be nonnegative")
        if self.abs_tol + self.rel_tol <= 0:
            raise DomainError("abs_tol + rel_tol must be positive")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be at least 1")

    @classmethod
    def default(cls) -> "Tolerances":
        return cls()


@dataclass(frozen=True)
class RadialGrid:
    """Strictly increasing radial nodes covering [r_min, r_max]."""

    r_min: float
    r_max: float
    nodes: np.ndarray = field(repr=False)
    spacing_mode: str = "uniform"

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float, copy=True)
        if nodes.ndim != 1 or nodes.size < 16:
            raise DomainError("grid needs at least 16 nodes")
        if not np.all(np.diff(nodes) > 0):
            raise DomainError("grid nodes must be strictly increasing")
        if self.r_min < 0 or self.r_max <= self.r_min:
            raise DomainError("need 0 <= r_min < r_max")
        if nodes[0] != self.r_min or nodes[-1] != self.r_max:
            raise DomainError("grid endpoints must equal r_min, r_max")
        nodes.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)

    def __len__(self) -> int:
        return self.nodes.size

    @classmethod
    def uniform(cls, r_min: float, r_max: float, n: int) -> "RadialGrid":
        nodes = np.linspace(r_min, r_max, n)
        return cls(r_min=r_min, r_max=r_max, nodes=nodes, spacing_mode="uniform")

    @classmethod
    def geometric(cls, r_min: float, r_max: float, n: int) -> "RadialGrid":
        if r_min <= 0:
            raise DomainError("geometric spacing requires r_min > 0")
        nodes = np.geomspace(r_min, r_max, n)
        nodes[0], nodes[-1] = r_min, r_max
        return cls(r_min=r_min, r_max=r_max, nodes=nodes, spacing_mode="geometric")

    def refined(self) -> "RadialGrid":
        """Grid with midpoints inserted between all nodes (for step-halving checks)."""
        nodes = self.nodes
        mid = 0.5 * (nodes[:-1] + nodes[1:])
        merged = np.empty(nodes.size + mid.size)
        merged[0::2] = nodes
        merged[1::2] = mid
        return RadialGrid(r_min=self.r_min, r_max=self.r_max, nodes=merged,
                          spacing_mode=self.spacing_mode)


def _rk4_step(rhs, r, y, h):
    k1 = rhs(r, y)
    k2 = rhs(r + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(r + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(r + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_ode(rhs, initial, grid: RadialGrid, tol: Tolerances) -> np.ndarray:
    """Integrate y' = rhs(r, y) across the grid with adaptive RK4 steps.

    Classical fourth-order Runge-Kutta with step-doubling error control: each
    trial step is compared against two half steps, the Richardson difference
    drives acceptance and the next step size.  Returns the trajectory at the
    grid nodes, shape (len(grid), len(initial)).
    """
    y = np.asarray(initial, dtype=float).copy()
    nodes = grid.nodes
    out = np.empty((nodes.size, y.size))
    out[0] = y
    span = nodes[-1] - nodes[0]
    h_min = 1e-14 * span
    steps = 0

    def checked_rhs(r, state):
        f = np.asarray(rhs(r, state), dtype=float)
        if not np.all(np.isfinite(f)):
            raise NonFiniteRhs(f"rhs non-finite at r={r!r}")
        return f

    for i in range(1, nodes.size):
        r, r_end = nodes[i - 1], nodes[i]
        h = r_end - r
        while r < r_end:
            h = min(h, r_end - r)
            f0 = checked_rhs(r, y)
            y_full = _rk4_step(checked_rhs, r, y, h)
            y_mid = _rk4_step(checked_rhs, r, y, 0.5 * h)
            y_half = _rk4_step(checked_rhs, r + 0.5 * h, y_mid, 0.5 * h)
            scale = tol.abs_tol + tol.rel_tol * (np.abs(y) + np.abs(h * f0))
            err = np.max(np.abs(y_full - y_half) / scale)
            if err <= 1.0:
                r += h
                # local extrapolation: the combination is fifth-order accurate
                y = y_half + (y_half - y_full) / 15.0
                grow = 5.0 if err == 0.0 else min(5.0, 0.9 * err ** -0.2)
                h *= grow
            else:
                h *= max(0.2, 0.9 * err ** -0.2)
                if h < h_min:
                    raise StepSizeUnderflow(
                        f"step {h:.3e} below floor near r={r:.6g}")
            steps += 1
            if steps > 50 * tol.max_iterations:
                raise StepSizeUnderflow("step budget exhausted")
        out[i] = y
    return out


# 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
_KRONROD_X = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_KRONROD_W = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
_GAUSS_W = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])


def _gk_panel(f, a, b):
    c, half = 0.5 * (a + b), 0.5 * (b - a)
    fx = np.array([f(c + half * x) for x in _KRONROD_X], dtype=float)
    if not np.all(np.isfinite(fx)):
        raise NoConvergence(f"integrand non-finite on [{a!r}, {b!r}]")
    k15 = half * float(_KRONROD_W @ fx)
    g7 = half * float(_GAUSS_W @ fx[1::2])
    return k15, abs(k15 - g7)


def _check_tail_decay(f, lo, abs_tol):
    """Reject integrands whose tail contribution estimate fails to shrink."""
    x0 = 8.0 * max(1.0, abs(lo))
    estimates = []
    for j in range(5):
        x = x0 * 4.0 ** j
        fx = f(x)
        if not math.isfinite(fx):
            raise DivergentTail(f"integrand non-finite at x={x:.3e}")
        estimates.append(abs(fx) * x)
    if estimates[-1] > max(0.5 * estimates[0], abs_tol):
        raise DivergentTail(
            "tail estimate |f(x)|*x does not shrink; need decay >= x^-2")


def quad(f, interval, tol: Tolerances) -> float:
    """Adaptive Gauss-Kronrod quadrature over [lo, hi]; hi may be math.inf.

    Semi-infinite intervals are compactified with x = lo + t/(1-t), which
    avoids any arbitrary truncation radius.  Purely deterministic.
    """
    lo, hi = interval
    if not math.isfinite(lo):
        raise DomainError("lower limit must be finite")
    if hi == lo:
        return 0.0
    if hi < lo:
        return -quad(f, (hi, lo), tol)

    if math.isinf(hi):
        _check_tail_decay(f, lo, tol.abs_tol)

        def g(t):
            x = lo + t / (1.0 - t)
            return f(x) / (1.0 - t) ** 2

        return _adaptive_gk(g, 0.0, 1.0, tol)
    return _adaptive_gk(f, lo, hi, tol)


def _adaptive_gk(f, a, b, tol: Tolerances) -> float:
    val, err = _gk_panel(f, a, b)
    # heap of (-panel_error, insertion_index, a, b, panel_value)
    heap = [(-err, 0, a, b, val)]
    total, total_err = val, err
    counter = 1
    max_panels = max(64, tol.max_iterations)
    while total_err > max(tol.abs_tol, tol.rel_tol * abs(total)):
        if counter >= max_panels:
            raise NoConvergence(
                f"quadrature stalled at error {total_err:.3e} after "
                f"{counter} panels")
        neg_err, _, pa, pb, pval = heapq.heappop(heap)
        if pb - pa < 1e-15 * max(1.0, abs(pa)):
            raise NoConvergence("panel width underflow; integrand too singular")
        mid = 0.5 * (pa + pb)
        v1, e1 = _gk_panel(f, pa, mid)
        v2, e2 = _gk_panel(f, mid, pb)
        total += v1 + v2 - pval
        total_err += e1 + e2 + neg_err  # neg_err = -old panel error
        heapq.heappush(heap, (-e1, counter, pa, mid, v1))
        heapq.heappush(heap, (-e2, counter + 1, mid, pb, v2))
        counter += 2
    return total


def find_root(f, bracket, tol: Tolerances) -> float:
    """Bracketing root finder (Brent); endpoints must straddle the root."""
    from scipy.optimize import brentq

    lo, hi = bracket
    if hi <= lo:
        raise DomainError("bracket must satisfy lo < hi")
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise InvalidBracket(
            f"f({lo!r})={flo!r} and f({hi!r})={fhi!r} have the same sign")
    xtol = max(tol.abs_tol, 1e-15 * (1.0 + abs(lo) + abs(hi)))
    rtol = max(tol.rel_tol, 4.0 * np.finfo(float).eps)
    root = brentq(f, lo, hi, xtol=xtol, rtol=rtol,
                  maxiter=max(tol.max_iterations, 10))
    return float(min(max(root, lo), hi))


def gamma_fn(x: float) -> float:
    """Gamma function for x > 0 (standard library implementation)."""
    if x <= 0:
        raise DomainError("gamma_fn requires x > 0")
    return math.gamma(x)
