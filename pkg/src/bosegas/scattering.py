"""Zero-energy two-body scattering in 3D and 2D.

Solves -2*mu*u'' + v*u = 0 (3D, u = r*psi) and the radial equation for psi
(2D) outward from the regular solution, continues analytically beyond the
interaction range (linear in 3D, logarithmic in 2D), and extracts the
scattering length from the asymptote.  Energy integrals are accumulated as
extra ODE components, so they inherit the integrator's accuracy.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DomainError,
    GridTooCoarse,
    NoLogAsymptote,
    NonIntegrableTail,
    NotConverged,
    RadiusInsideRange,
    ZeroScatteringLength,
)
from .numerics import RadialGrid, Tolerances, integrate_ode, quad
from .potentials import (
    PairPotential,
    born_pair_integral,
    pair_value,
    tail_integrability,
)

__all__ = [
    "ScatteringSolution",
    "scattering_grid",
    "solve_zero_energy",
    "scattering_length",
    "energy_integral",
    "kinetic_fraction",
    "two_dim_energy_ratio",
    "born_integral",
]


@dataclass(frozen=True)
class ScatteringSolution:
    """Radial zero-energy solution with derived quantities.

    ``u_values`` holds u(r) in 3D and psi(r) in 2D on the grid nodes, in the
    raw normalization of the outward integration; ``slope`` is the asymptotic
    scale (u' beyond the range in 3D, r*psi' in 2D), so dividing by it gives
    the u ~ r - a (3D) or psi ~ ln(r/a) (2D) normalization.
    """

    dimension: int
    mu: float
    grid: RadialGrid
    u_values: np.ndarray
    a: float
    match_radius: float
    s: float
    converged: bool
    potential: PairPotential
    range_radius: float
    slope: float
    kin_interior: float   # int (u' - u/r)^2 dr (3D) / int psi'^2 r dr (2D), raw
    pot_interior: float   # int v u^2 dr (3D) / int v psi^2 r dr (2D), raw


def _a_estimate(p: PairPotential, mu: float) -> float:
    if p.has_hard_core():
        return p.core_radius
    born = born_pair_integral(p)
    return min(p.range_radius, born / (8.0 * math.pi * mu) + 1e-3 * p.range_radius)


def scattering_grid(p: PairPotential, mu: float, n: int = 256) -> RadialGrid:
    """Default solver grid: r_max = max(2*range, 10*a-estimate), tail-aware."""
    rng = p.range_radius
    r_max = max(2.0 * rng, 10.0 * _a_estimate(p, mu))
    if p.tail is not None:
        report = tail_integrability(p)
        if not report.integrable:
            raise NonIntegrableTail("tail exponent <= dimension")
        r_max = max(r_max, report.cut_radius)
    return RadialGrid.uniform(0.0, r_max, n)


def _integration_radius(p: PairPotential, grid: RadialGrid) -> float:
    """Radius up to which the ODE must actually be integrated."""
    if p.tail is None:
        return p.range_radius
    return grid.r_max


def _interior_nodes(grid: RadialGrid, r_start: float, r_end: float) -> np.ndarray:
    inner = grid.nodes[(grid.nodes > r_start) & (grid.nodes < r_end)]
    return np.concatenate(([r_start], inner, [r_end]))


def _solve_3d(p, mu, grid, tol):
    r_end = _integration_radius(p, grid)
    hard = p.has_hard_core()
    r_start = p.core_radius if hard else 0.0
    if r_end <= r_start:   # pure hard core: exterior is exactly u = r - R0
        u_range, du_range, kin, pot = 0.0, 1.0, 0.0, 0.0
    else:
        def rhs(r, y):
            u, du = y[0], y[1]
            if r <= 0.0:
                # regular solution: u ~ r, so u'' and (u' - u/r) vanish at 0
                return np.array([du, 0.0, 0.0, 0.0])
            v = pair_value(p, r)
            curv = v * u / (2.0 * mu)
            grad = du - u / r
            return np.array([du, curv, grad * grad, v * u * u])

        nodes = _interior_nodes(grid, r_start, r_end)
        init = [0.0, 1.0, 0.0, 0.0]
        traj = _padded_ode(rhs, init, nodes, tol)
        u_range, du_range, kin, pot = traj[-1]
        interior_traj = traj
    if du_range <= 0.0:
        raise DomainError("u' <= 0 at the range; potential not nonnegative?")
    a = r_end - u_range / du_range

    if p.tail is not None:
        # first-order tail correction: neglected repulsion beyond the cut
        # radius adds int v r^2 dr / (2 mu) to a (psi ~ 1 out there)
        c_t, exponent = p.tail
        a += c_t * r_end ** (3 - exponent) / ((exponent - 3) * 2.0 * mu)

    # kinetic fraction s = int |grad psi0|^2 / (4 pi a), psi0 -> 1 at infinity
    c2 = du_range * du_range
    if a > 0.0:
        kin_total = kin / c2 + a * a / r_end
        s = kin_total / a
    else:
        s = math.nan

    u_nodes = np.empty(len(grid))
    below = grid.nodes <= r_start
    inside = (grid.nodes > r_start) & (grid.nodes < r_end)
    u_nodes[below] = 0.0
    if np.any(inside):
        u_nodes[inside] = np.interp(grid.nodes[inside],
                                    _interior_nodes(grid, r_start, r_end)
                                    if r_end > r_start else [r_start],
                                    interior_traj[:, 0]
                                    if r_end > r_start else [0.0])
    u_nodes[grid.nodes >= r_end] = du_range * (grid.nodes[grid.nodes >= r_end] - a)
    return a, s, u_nodes, du_range, kin, pot, r_end


def _padded_ode(rhs, init, nodes, tol):
    """integrate_ode on an arbitrary increasing node list (>= 2 points)."""
    if nodes.size >= 16:
        grid = RadialGrid(r_min=nodes[0], r_max=nodes[-1], nodes=nodes,
                          spacing_mode="uniform")
        return integrate_ode(rhs, init, grid, tol)
    dense = np.unique(np.concatenate([nodes,
                                      np.linspace(nodes[0], nodes[-1], 17)]))
    grid = RadialGrid(r_min=dense[0], r_max=dense[-1], nodes=dense,
                      spacing_mode="uniform")
    traj = integrate_ode(rhs, init, grid, tol)
    keep = np.isin(dense, nodes)
    return traj[keep]


def _solve_2d(p, mu, grid, tol):
    r_end = _integration_radius(p, grid)
    hard = p.has_hard_core()
    if hard and p.tail is None:
        # psi = ln(r/R0) solves the exterior equation exactly
        psi_range, chi_range, kin, pot = 0.0, 1.0, 0.0, 0.0
        r_anchor = p.core_radius
    else:
        r_anchor = r_end
        r_start = p.core_radius if hard else 1e-9 * p.range_radius
        if hard:
            init = [0.0, 1.0, 0.0, 0.0]
        else:
            v0 = pair_value(p, r_start)
            init = [1.0, v0 * r_start * r_start / (4.0 * mu), 0.0, 0.0]

        def rhs(r, y):
            psi, chi = y[0], y[1]
            v = pair_value(p, r)
            return np.array([chi / r, r * v * psi / (2.0 * mu),
                             chi * chi / r, v * psi * psi * r])

        nodes = _interior_nodes(grid, r_start, r_end)
        traj = _padded_ode(rhs, init, nodes, tol)
        psi_range, chi_range, kin, pot = traj[-1]
        interior = (nodes, traj)
    if chi_range <= 0.0:
        raise NoLogAsymptote("no logarithmic asymptote: v vanishes identically")
    a = r_anchor * math.exp(-psi_range / chi_range)

    psi_nodes = np.empty(len(grid))
    if hard and p.tail is None:
        with np.errstate(divide="ignore", invalid="ignore"):
            psi_nodes = np.where(grid.nodes >= p.core_radius,
                                 np.log(np.maximum(grid.nodes, p.core_radius)
                                        / p.core_radius), 0.0)
    else:
        nodes, traj = interior
        inside = (grid.nodes >= nodes[0]) & (grid.nodes <= r_end)
        psi_nodes[grid.nodes < nodes[0]] = traj[0, 0]
        psi_nodes[inside] = np.interp(grid.nodes[inside], nodes, traj[:, 0])
        outer = grid.nodes > r_end
        psi_nodes[outer] = psi_range + chi_range * np.log(grid.nodes[outer] / r_end)
    return a, psi_nodes, chi_range, kin, pot, (r_anchor if hard and p.tail is None
                                               else r_end)


def solve_zero_energy(p: PairPotential, mu: float, grid: Optional[RadialGrid] = None,
                      tol: Optional[Tolerances] = None) -> ScatteringSolution:
    """Solve the zero-energy scattering problem and extract a (and s in 3D).

    Parameters
    ----------
    p : pair potential (its dimension tag selects the 3D or 2D equation)
    mu : the kinetic coefficient hbar^2 / 2m
    grid : output grid; defaults to `scattering_grid(p, mu)`
    tol : integrator tolerances; a Richardson rerun on the midpoint-refined
        grid gates `converged` (raises GridTooCoarse on failure)
    """
    if mu <= 0:
        raise DomainError("mu must be positive")
    report = tail_integrability(p)
    if not report.integrable:
        raise NonIntegrableTail(
            "potential tail decays too slowly; scattering length infinite")
    tol = tol or Tolerances(abs_tol=1e-13, rel_tol=1e-11)
    grid = grid or scattering_grid(p, mu)
    if p.core_radius >= grid.r_max:
        raise DomainError("hard-core radius must lie inside the grid")

    def run(g):
        if p.dimension == 3:
            return _solve_3d(p, mu, g, tol)
        return _solve_2d(p, mu, g, tol)

    if p.dimension == 3:
        a, s, u_nodes, slope, kin, pot, r_range = run(grid)
        a2 = _solve_3d(p, mu, grid.refined(), tol)[0]
    else:
        a, u_nodes, slope, kin, pot, r_range = run(grid)
        s = 1.0  # interaction energy is purely kinetic in 2D
        a2 = _solve_2d(p, mu, grid.refined(), tol)[0]

    scale = max(abs(a), p.range_radius)
    converged = abs(a - a2) <= 10.0 * max(tol.rel_tol * scale, tol.abs_tol)
    if not converged:
        raise GridTooCoarse(
            f"scattering length moved by {abs(a - a2):.3e} under refinement")

    match_radius = max(2.0 * p.range_radius, 10.0 * abs(a)) if a != 0 \
        else 2.0 * p.range_radius
    return ScatteringSolution(
        dimension=p.dimension, mu=mu, grid=grid, u_values=u_nodes, a=a,
        match_radius=match_radius, s=s, converged=converged, potential=p,
        range_radius=r_range, slope=slope, kin_interior=kin, pot_interior=pot)


def scattering_length(sol: ScatteringSolution) -> float:
    """The scattering length extracted from the asymptote."""
    if not sol.converged:
        raise NotConverged("solution did not pass the refinement gate")
    return sol.a


def energy_integral(sol: ScatteringSolution, R: float) -> float:
    """int_{|x|<=R} (2 mu |grad psi0|^2 + v psi0^2) d^3x, psi0 -> 1 at infinity.

    Equals 8 pi mu a (1 - a/R) for finite-range potentials.
    """
    if sol.dimension != 3:
        raise DomainError("energy_integral is a 3D operation")
    if not sol.converged:
        raise NotConverged("solution did not pass the refinement gate")
    if R < sol.range_radius:
        raise RadiusInsideRange(
            f"R={R!r} lies inside the interaction range {sol.range_radius!r}")
    mu, a, c = sol.mu, sol.a, sol.slope
    c2 = c * c
    kin = sol.kin_interior / c2 + a * a * (1.0 / sol.range_radius - 1.0 / R)
    pot = sol.pot_interior / c2
    if sol.potential.tail is not None and R > sol.range_radius:
        p = sol.potential

        def tail_term(r):
            return pair_value(p, r) * (1.0 - a / r) ** 2 * r * r

        pot += quad(tail_term, (sol.range_radius, R),
                    Tolerances(abs_tol=1e-13, rel_tol=1e-10))
    return 4.0 * math.pi * (2.0 * mu * kin + pot)


def kinetic_fraction(sol: ScatteringSolution) -> float:
    """s = int |grad psi0|^2 d^3x / (4 pi a); equals 1 identically in 2D."""
    if sol.dimension == 2:
        return 1.0
    if not sol.converged:
        raise NotConverged("solution did not pass the refinement gate")
    if not (sol.a > 1e-12 * sol.range_radius):
        raise ZeroScatteringLength("kinetic fraction undefined for a = 0")
    return sol.s


def two_dim_energy_ratio(sol: ScatteringSolution, R: float) -> float:
    """Kinetic share of the 2D energy integral over a disc of radius R.

    Tends to 1 like 1/ln(R/a): the logarithmically growing kinetic part
    dominates the finite potential part.
    """
    if sol.dimension != 2:
        raise DomainError("two_dim_energy_ratio is a 2D diagnostic")
    if R < sol.range_radius:
        raise RadiusInsideRange("R inside the interaction range")
    c2 = sol.slope * sol.slope
    kin = 2.0 * sol.mu * (sol.kin_interior / c2 + math.log(R / sol.range_radius))
    pot = sol.pot_interior / c2
    return kin / (kin + pot)


def born_integral(p: PairPotential, d: Optional[int] = None) -> float:
    """First Born integral int v(|x|) d^dx (an upper bound for 8 pi mu a in 3D)."""
    if d is not None and d != p.dimension:
        p = dataclasses.replace(p, dimension=d)
    return born_pair_integral(p)
