"""Closed-form energy bounds for the homogeneous dilute gas (3D and 2D).

Leading-order asymptotics, the hard-sphere upper bound, the Y^(1/17) lower
bound, the 2D logarithmic bounds, and the Temple/cell-method machinery that
produces the lower bounds.  Everything here is formula evaluation: pure,
deterministic, and cheap enough for dense parameter sweeps.

Constants hidden inside O(.) remainders are exposed as configuration with
default 1.0; only the exponents are fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import AnsatzInfeasible, DomainError, GapViolation, VarianceNegative

__all__ = [
    "DiluteParams",
    "CellMethodParams",
    "EnergyEstimate",
    "LowerRatio",
    "DYSON_LOWER_RATIO",
    "LOWER_RATIO_C",
    "ANSATZ_EXPONENTS",
    "leading_energy",
    "lhy_energy",
    "dyson_upper_ratio",
    "dilute_lower_ratio",
    "schick_2d_bounds",
    "temple_bound",
    "softened_interaction",
    "first_order_expectation",
    "cell_energy_factor",
    "cell_lower_bound",
    "cell_params_from_ansatz",
    "two_dim_cell_parameters",
    "occupation_minimum",
    "log_quadratic_gap",
]

# Hard-sphere lower-bound ratio of Dyson (1957): e0/(4 pi mu rho a) >= 1/(10 sqrt 2)
DYSON_LOWER_RATIO = 1.0 / (10.0 * math.sqrt(2.0))

# Best published constant in the (1 - C Y^(1/17)) lower bound
LOWER_RATIO_C = 8.9

# Cell-method ansatz exponents for (eps, a/ell, (R^3-R0^3)/ell^3) in powers of Y
ANSATZ_EXPONENTS = (1.0 / 17.0, 6.0 / 17.0, 3.0 / 17.0)


@dataclass(frozen=True)
class DiluteParams:
    """Density, scattering length, and kinetic constant for one gas state.

    ``y`` is the 3D diluteness parameter 4 pi rho a^3 / 3; ``rho_a2`` its 2D
    analogue rho a^2.  Both are derived and kept consistent with the fields.
    """

    rho: float
    a: float
    mu: float = 1.0
    d: int = 3
    y: float = field(init=False)
    rho_a2: float = field(init=False)

    def __post_init__(self):
        if self.rho <= 0 or self.a <= 0 or self.mu <= 0:
            raise DomainError("rho, a, mu must all be positive")
        if self.d not in (2, 3):
            raise DomainError("d must be 2 or 3")
        object.__setattr__(self, "y", 4.0 * math.pi * self.rho * self.a ** 3 / 3.0)
        object.__setattr__(self, "rho_a2", self.rho * self.a ** 2)


@dataclass(frozen=True)
class CellMethodParams:
    """Parameters of one Temple cell: n particles in a box of side ell.

    The softened interaction lives on the shell R0 < r < R; eps is the
    kinetic-energy fraction withheld from the Dyson substitution.  ``n`` may
    be non-integral: the closed formulas are evaluated at n = 4 rho ell^d.
    """

    n: float
    ell: float
    R: float
    R0: float = 0.0
    eps: float = 0.5
    exponents: tuple = ANSATZ_EXPONENTS
    c_eps: float = 1.0
    c_ell: float = 1.0
    c_R: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.R0 < self.R < 0.5 * self.ell):
            raise DomainError("need R0 < R < ell/2")
        if not (0.0 < self.eps < 1.0):
            raise DomainError("eps must lie in (0, 1)")
        if self.n < 2:
            raise DomainError("need at least 2 particles per cell")
        if min(self.c_eps, self.c_ell, self.c_R) <= 0:
            raise DomainError("ansatz constants must be positive")


@dataclass(frozen=True)
class EnergyEstimate:
    """Energy per particle with provenance."""

    value: float
    kind: str                  # upper | lower | asymptotic
    formula_id: str
    params: Optional[DiluteParams] = None

    def __post_init__(self):
        if self.kind not in ("upper", "lower", "asymptotic"):
            raise DomainError(f"unknown estimate kind {self.kind!r}")


def leading_energy(p: DiluteParams) -> EnergyEstimate:
    """Leading low-density energy per particle: 4 pi mu rho a, or its 2D
    analogue 4 pi mu rho / |ln(rho a^2)|."""
    if p.d == 3:
        return EnergyEstimate(4.0 * math.pi * p.mu * p.rho * p.a,
                              "asymptotic", "leading_3d", p)
    if p.rho_a2 >= 1.0:
        raise DomainError("2D leading term needs rho a^2 < 1")
    return EnergyEstimate(4.0 * math.pi * p.mu * p.rho / abs(math.log(p.rho_a2)),
                          "asymptotic", "leading_2d", p)


def lhy_energy(p: DiluteParams) -> EnergyEstimate:
    """Leading term times the Lee-Huang-Yang correction series
    1 + (128/15 sqrt(pi)) x^(1/2) + 8(4 pi/3 - sqrt 3) x ln x, x = rho a^3."""
    if p.d != 3:
        raise DomainError("the expansion is three-dimensional")
    x = p.rho * p.a ** 3
    if x >= 1.0:
        raise DomainError("expansion needs rho a^3 < 1")
    series = (1.0
              + 128.0 / (15.0 * math.sqrt(math.pi)) * math.sqrt(x)
              + 8.0 * (4.0 * math.pi / 3.0 - math.sqrt(3.0)) * x * math.log(x))
    return EnergyEstimate(4.0 * math.pi * p.mu * p.rho * p.a * series,
                          "asymptotic", "lhy_expansion", p)


def dyson_upper_ratio(y, finite_range_improved: bool = False):
    """Hard-sphere-style upper bound on e0/(4 pi mu rho a) as a function of
    Y = 4 pi rho a^3 / 3 (valid for Y < 1).

    The improved variant assumes finite range R0 < b = (4 pi rho/3)^(-1/3),
    for which a/b = Y^(1/3).
    """
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0.0) or np.any(y >= 1.0):
        raise DomainError("upper bound valid for 0 < Y < 1")
    t = y ** (1.0 / 3.0)
    if finite_range_improved:
        out = (1.0 - t ** 2 + 0.5 * t ** 3) / (1.0 - t) ** 4
    else:
        out = (1.0 - t + t ** 2 - 0.5 * t ** 3) / (1.0 - t) ** 8
    return out if out.ndim else float(out)


class LowerRatio(NamedTuple):
    value: float
    valid: bool


def dilute_lower_ratio(y: float, c: float = LOWER_RATIO_C) -> LowerRatio:
    """Lower bound ratio 1 - C Y^(1/17), unclamped, with a validity flag.

    The bound is vacuous (value <= 0) for large Y; returning the raw value
    keeps the crossover against DYSON_LOWER_RATIO visible.
    """
    if y <= 0:
        raise DomainError("Y must be positive")
    value = 1.0 - c * y ** (1.0 / 17.0)
    return LowerRatio(value=value, valid=value > 0.0)


def schick_2d_bounds(p: DiluteParams, c_upper: float = 1.0,
                     c_lower: float = 1.0):
    """2D bounds around 4 pi mu rho / |ln(rho a^2)|.

    upper: leading * (1 + c_upper / |ln|); lower: leading * (1 - c_lower *
    |ln|^(-1/5)).  The remainder constants are configuration, default 1.
    """
    if p.d != 2:
        raise DomainError("2D operation")
    if p.rho_a2 >= 1.0 or abs(math.log(p.rho_a2)) <= 1.0:
        raise DomainError("need rho a^2 small enough that |ln(rho a^2)| > 1")
    log = abs(math.log(p.rho_a2))
    lead = 4.0 * math.pi * p.mu * p.rho / log
    upper = EnergyEstimate(lead * (1.0 + c_upper / log), "upper",
                           "log_2d_upper", p)
    lower = EnergyEstimate(lead * (1.0 - c_lower * log ** -0.2), "lower",
                           "log_2d_lower", p)
    return upper, lower


def intermediate_2d_upper(p: DiluteParams, b: Optional[float] = None) -> float:
    """2D upper bound 2 pi mu rho / (ln(b/a) - pi rho b^2) at cutoff b.

    The leading term is minimized at b = (2 pi rho)^(-1/2), where it reduces
    to 4 pi mu rho / |ln(rho a^2)| up to O(1/|ln|) corrections.
    """
    if p.d != 2:
        raise DomainError("2D operation")
    if b is None:
        b = (2.0 * math.pi * p.rho) ** -0.5
    denom = math.log(b / p.a) - math.pi * p.rho * b * b
    if denom <= 0:
        raise DomainError("cutoff b too large for the bound to hold")
    return 2.0 * math.pi * p.mu * p.rho / denom


def temple_bound(h_mean: float, h2_mean: float, e1: float,
                 var_tol: float = 1e-12) -> float:
    """Variational lower bound <H> - Var(H)/(E1 - <H>) for the lowest
    eigenvalue, valid when the second eigenvalue estimate E1 exceeds <H>."""
    variance = h2_mean - h_mean * h_mean
    if variance < -var_tol * max(1.0, h_mean * h_mean):
        raise VarianceNegative(f"<H^2> - <H>^2 = {variance!r} < 0")
    variance = max(variance, 0.0)
    gap = e1 - h_mean
    if gap <= 0:
        raise GapViolation("Temple bound needs E1 > <H>")
    return h_mean - variance / gap


class SoftenedInteraction(NamedTuple):
    amplitude: float
    normalization: float  # should be exactly 1
    support_volume: float


def softened_interaction(params: CellMethodParams, a: float = 1.0,
                         d: int = 3) -> SoftenedInteraction:
    """Normalized soft replacement for a hard potential on R0 < r < R.

    3D: amplitude 3/(R^3-R0^3) with int U r^2 dr = 1.
    2D: amplitude 1/nu(R) with nu(R) = int_R0^R ln(r/a) r dr
        = (1/4){R^2(ln(R^2/a^2)-1) - R0^2(ln(R0^2/a^2)-1)}; needs R0 >= a.
    The support volume is 4 pi (R^3-R0^3)/3 in 3D and pi (R^2-R0^2) in 2D.
    """
    R, R0 = params.R, params.R0
    if d == 3:
        shell = R ** 3 - R0 ** 3
        amplitude = 3.0 / shell
        normalization = amplitude * shell / 3.0
        return SoftenedInteraction(amplitude, normalization,
                                   4.0 * math.pi * shell / 3.0)
    if d == 2:
        if R0 < a:
            raise DomainError("2D softened interaction needs R0 >= a")
        nu = 0.25 * (R * R * (math.log(R * R / (a * a)) - 1.0)
                     - R0 * R0 * (math.log(R0 * R0 / (a * a)) - 1.0))
        if nu <= 0:
            raise DomainError("normalization integral must be positive")
        return SoftenedInteraction(1.0 / nu, 1.0, math.pi * (R * R - R0 * R0))
    raise DomainError("d must be 2 or 3")


def first_order_expectation(params: CellMethodParams, rho_cell: float,
                            d: int = 3, a: float = None):
    """Bracketing pair (lower, upper) for <W_R>_0 / n in one Neumann cell.

    3D: upper 4 pi rho (1 - 1/n); lower adds the boundary factor
    (1 - 2R/ell)^3 and the local-density denominator
    (1 + 4 pi rho (1 - 1/n)(R^3 - R0^3)/3)^(-1).

    2D (needs the scattering length a): upper (n-1) Q / nu(R) with
    Q = A(R)/ell^2; lower multiplies by (1 - 2R/ell)^2 / (1 + (n-1) Q).
    """
    n, ell, R, R0 = params.n, params.ell, params.R, params.R0
    if n < 2:
        raise DomainError("need n >= 2")
    if d == 3:
        base = 4.0 * math.pi * rho_cell * (1.0 - 1.0 / n)
        boundary = (1.0 - 2.0 * R / ell) ** 3
        local = 1.0 + 4.0 * math.pi / 3.0 * rho_cell * (1.0 - 1.0 / n) \
            * (R ** 3 - R0 ** 3)
        return base * boundary / local, base
    if d == 2:
        if a is None:
            raise DomainError("the 2D bracket needs the scattering length a")
        soft = softened_interaction(params, a=a, d=2)
        nu = 1.0 / soft.amplitude
        q = soft.support_volume / ell ** 2
        upper = (n - 1.0) * q / nu
        lower = upper * (1.0 - 2.0 * R / ell) ** 2 / (1.0 + (n - 1.0) * q)
        return lower, upper
    raise DomainError("d must be 2 or 3")


def cell_energy_factor(params: CellMethodParams, a: float, mu: float = 1.0,
                       d: int = 3, n=None):
    """The dimensionless factor K(n, ell) of the cell-method lower bound.

    3D:  (1-eps) (1-2R/ell)^3 (1 + 4 pi/3 rho (1-1/n)(R^3-R0^3))^(-1)
         * (1 - (3/pi) a n / ((R^3-R0^3)(eps ell^-2 - 4 a ell^-3 n(n-1))))
    with rho = n/ell^3.  2D analogously with nu(R) and Q = A(R)/ell^2.
    Returns 0 whenever the Temple denominator is nonpositive or the product
    turns negative (0 is the documented trivial lower bound).  ``n`` may be
    an array for sweeps; defaults to params.n.
    """
    n = params.n if n is None else n
    n = np.asarray(n, dtype=float)
    if np.any(n < 2):
        raise DomainError("need n >= 2")
    ell, R, R0, eps = params.ell, params.R, params.R0, params.eps
    if d == 3:
        shell = R ** 3 - R0 ** 3
        rho = n / ell ** 3
        local = 1.0 + 4.0 * math.pi / 3.0 * rho * (1.0 - 1.0 / n) * shell
        denom = eps / ell ** 2 - 4.0 * a / ell ** 3 * n * (n - 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            temple = 1.0 - (3.0 / math.pi) * a * n / (shell * denom)
        k = (1.0 - eps) * (1.0 - 2.0 * R / ell) ** 3 / local * temple
        k = np.where(denom > 0.0, np.maximum(k, 0.0), 0.0)
    elif d == 2:
        soft = softened_interaction(params, a=a, d=2)
        nu = 1.0 / soft.amplitude
        q = soft.support_volume / ell ** 2
        denom = eps * nu / ell ** 2 - n * (n - 1.0) * q
        with np.errstate(divide="ignore", invalid="ignore"):
            temple = 1.0 - n / denom
        k = (1.0 - eps) * (1.0 - 2.0 * R / ell) ** 2 \
            / (1.0 + (n - 1.0) * q) * temple
        k = np.where(denom > 0.0, np.maximum(k, 0.0), 0.0)
    else:
        raise DomainError("d must be 2 or 3")
    return k if k.ndim else float(k)


def cell_params_from_ansatz(p: DiluteParams, c_eps: float = 1.0,
                            c_ell: float = 1.0, c_R: float = 1.0,
                            R0: Optional[float] = None) -> CellMethodParams:
    """Instantiate cell parameters from the Y-power ansatz.

    eps = c_eps Y^(1/17), a/ell = c_ell Y^(6/17),
    (R^3 - R0^3)/ell^3 = c_R Y^(3/17); R0 defaults to a (the hard-core
    convention, where range and scattering length coincide).
    """
    if p.d != 3:
        raise DomainError("the Y-power ansatz is three-dimensional")
    alpha, beta, gamma = ANSATZ_EXPONENTS
    y = p.y
    eps = c_eps * y ** alpha
    ell = p.a / (c_ell * y ** beta)
    R0 = p.a if R0 is None else R0
    R = (R0 ** 3 + c_R * y ** gamma * ell ** 3) ** (1.0 / 3.0)
    n = 4.0 * p.rho * ell ** 3
    if not (0.0 < eps < 1.0):
        raise AnsatzInfeasible(f"eps = {eps!r} outside (0, 1); Y too large")
    if not (R0 < R < 0.5 * ell):
        raise AnsatzInfeasible("ansatz violates R0 < R < ell/2; Y too large")
    if n < 2:
        raise AnsatzInfeasible("fewer than 2 particles per cell; Y too large")
    return CellMethodParams(n=n, ell=ell, R=R, R0=R0, eps=eps,
                            c_eps=c_eps, c_ell=c_ell, c_R=c_R)


def cell_lower_bound(p: DiluteParams, c_eps: float = 1.0, c_ell: float = 1.0,
                     c_R: float = 1.0) -> EnergyEstimate:
    """Cell-method lower bound 4 pi mu a rho (1 - 1/(rho ell^3)) K(4 rho ell^3, ell)
    with the ansatz-instantiated cell parameters.

    The estimate records the five relative error terms of the construction in
    ``error_terms`` (attached attribute on the returned estimate's params is
    avoided; use `cell_error_terms` for the breakdown).
    """
    params = cell_params_from_ansatz(p, c_eps, c_ell, c_R)
    terms = cell_error_terms(p, params)
    if any(t >= 1.0 for t in terms.values()):
        raise AnsatzInfeasible(f"error terms not all < 1: {terms}")
    k = cell_energy_factor(params, a=p.a, mu=p.mu, d=3)
    value = 4.0 * math.pi * p.mu * p.a * p.rho \
        * (1.0 - 1.0 / (p.rho * params.ell ** 3)) * k
    return EnergyEstimate(value, "lower", "cell_method", p)


def cell_error_terms(p: DiluteParams, params: CellMethodParams) -> dict:
    """The five relative error terms of the cell construction (all must be << 1)."""
    shell = params.R ** 3 - params.R0 ** 3
    n, ell, eps = params.n, params.ell, params.eps
    denom = eps / ell ** 2 - 4.0 * p.a / ell ** 3 * n * (n - 1.0)
    temple_err = math.inf if denom <= 0 else \
        (3.0 / math.pi) * p.a * n / (shell * denom)
    return {
        "eps": eps,
        "occupancy": 1.0 / (p.rho * ell ** 3),
        "boundary": 2.0 * params.R / ell,
        "local_density": 4.0 * math.pi / 3.0 * (4.0 * p.rho) * shell,
        "temple": temple_err,
    }


def two_dim_cell_parameters(rho: float, a: float, c_eps: float = 1.0,
                            c_ell: float = 1.0, c_R: float = 1.0):
    """2D cell parameters: eps ~ |ln(rho a^2)|^(-1/5),
    ell ~ rho^(-1/2) |ln|^(1/10), R ~ rho^(-1/2) |ln|^(-1/10)."""
    rho_a2 = rho * a * a
    if rho_a2 >= 1.0:
        raise DomainError("need rho a^2 < 1")
    log = abs(math.log(rho_a2))
    eps = c_eps * log ** -0.2
    ell = c_ell * rho ** -0.5 * log ** 0.1
    R = c_R * rho ** -0.5 * log ** -0.1
    return eps, ell, R


def occupation_minimum(k: float, p: int) -> float:
    """Minimum of the reduced cell-occupation objective
    t(t-1) + (k-t)(p-1)/2 over t in [1, k] (k = rho ell^d particles per cell
    on average, p the superadditivity splitting index).

    Equals k(k-1) whenever p >= 4k (minimum at t = k).
    """
    if k < 1:
        raise DomainError("need k >= 1")
    if p < 2:
        raise DomainError("need p >= 2")

    def objective(t):
        return t * (t - 1.0) + 0.5 * (k - t) * (p - 1.0)

    t_star = (p + 1.0) / 4.0
    candidates = [1.0, float(k)]
    if 1.0 < t_star < k:
        candidates.append(t_star)
    return min(objective(t) for t in candidates)


def log_quadratic_gap(x, b, k):
    """LHS - RHS of the inequality
    x^2/|ln x| - 2 (b/|ln b|) x k >= -(b^2/|ln b|)(1 + (2|ln b|)^-2) k^2,
    for 0 < x, b < 1 and k >= 1.  Nonnegative throughout that domain."""
    x = np.asarray(x, dtype=float)
    b = np.asarray(b, dtype=float)
    k = np.asarray(k, dtype=float)
    if np.any(x <= 0) or np.any(x >= 1) or np.any(b <= 0) or np.any(b >= 1):
        raise DomainError("need 0 < x, b < 1")
    if np.any(k < 1):
        raise DomainError("need k >= 1")
    log_x = np.abs(np.log(x))
    log_b = np.abs(np.log(b))
    gap = (x * x / log_x
           - 2.0 * (b / log_b) * x * k
           + (b * b / log_b) * (1.0 + 1.0 / (2.0 * log_b) ** 2) * k * k)
    return gap if gap.ndim else float(gap)
