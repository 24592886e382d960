"""GP minimizer, TF closed forms, scaling laws, and the GP->TF limit.

Analytic oracles used here (derived by hand, unit scale, mu_const = 1):
  3D harmonic, a = 0:  E/N = 3, phi Gaussian exp(-r^2/2).
  3D harmonic TF:      mu = (15 N a)^(2/5),  E_tf = mu^(7/2)/(21 a),
                       int rho^2 = mu^(7/2)/(2 pi a^2) * 1/105 * ... checked
                       through the chemical-potential identity instead.
  2D harmonic TF (N=1, coupling 1): mu = 4, E_tf = mu^3/24 = 8/3.
"""

import dataclasses
import math

import numpy as np
import pytest

from bosegas.errors import DomainError, NegativeCoupling, NotConverged
from bosegas.gp import (chemical_potential, coupling_2d, export_profile,
                        gp_energy, gp_minimize, gp_residual, gp_tf_limit,
                        mean_density, tf_chemical_identity_gap, tf_density,
                        tf_energy, tf_scaling, tf_solve, two_dim_coupling)
from bosegas.numerics import RadialGrid
from bosegas.potentials import TrapPotential

HARM3 = TrapPotential(kind="harmonic", dimension=3)
HARM2 = TrapPotential(kind="harmonic", dimension=2)


def test_gp_energy_box_closed_form():
    box = TrapPotential(kind="box", dimension=3, box_side=2.0)
    n_part, a = 5.0, 0.1
    value = math.sqrt(n_part / 8.0)
    kin, trap_e, inter = gp_energy(np.full(40, value), box, a)
    assert kin == 0.0 and trap_e == 0.0
    assert inter == pytest.approx(4.0 * math.pi * a * n_part ** 2 / 8.0,
                                  rel=1e-12)
    with pytest.raises(DomainError):
        gp_energy(np.linspace(0.1, 0.2, 8), box, a)


def test_gp_energy_gaussian_oracle():
    # a = 0 harmonic ground state: E/N = 3 for the exact Gaussian profile
    grid = RadialGrid.uniform(1e-4, 10.0, 6000)
    r = grid.nodes
    phi = (math.pi) ** -0.75 * np.exp(-0.5 * r * r)
    kin, trap_e, inter = gp_energy(phi, HARM3, 0.0, grid=grid)
    assert inter == 0.0
    assert kin + trap_e == pytest.approx(3.0, abs=2e-4)
    assert kin == pytest.approx(1.5, abs=1e-4)


def test_gp_energy_breakdown_vs_fused_quadrature():
    grid = RadialGrid.uniform(1e-3, 8.0, 3000)
    r = grid.nodes
    phi = np.exp(-0.3 * r * r) * (1.0 + 0.1 * np.sin(3.0 * r))
    a = 0.07
    kin, trap_e, inter = gp_energy(phi, HARM3, a, grid=grid)
    dphi = np.gradient(phi, r)
    fused = np.trapezoid(
        (dphi ** 2 + r ** 2 * phi ** 2 + 4.0 * math.pi * a * phi ** 4)
        * 4.0 * math.pi * r ** 2, r)
    assert kin + trap_e + inter == pytest.approx(fused, rel=1e-10)


def test_linear_limit_harmonic():
    st1 = gp_minimize(HARM3, 1.0, 0.0, grid_points=1000)
    st2 = gp_minimize(HARM3, 1.0, 0.0, grid_points=2000)
    extrap = (4.0 * st2.E - st1.E) / 3.0
    assert abs(extrap - 3.0) <= 1e-4
    assert st2.residual <= 1e-6
    assert st2.mu_gp == pytest.approx(st2.E, rel=1e-12)  # no interaction term
    # profile matches the Gaussian ground state on the grid
    r = st2.grid.nodes
    gauss = np.exp(-0.5 * r * r)
    gauss *= math.sqrt(1.0 / (4.0 * math.pi * np.trapezoid(gauss ** 2 * r ** 2, r)))
    assert np.max(np.abs(st2.phi - gauss)) <= 1e-4


def test_negative_coupling_rejected():
    with pytest.raises(NegativeCoupling):
        gp_minimize(HARM3, 1.0, -0.1)


@pytest.mark.parametrize("n_part,a", [(10.0, 0.01), (100.0, 0.001)])
def test_scaling_law_energy(n_part, a):
    big = gp_minimize(HARM3, n_part, a, grid_points=1200)
    unit = gp_minimize(HARM3, 1.0, n_part * a, grid_points=1200)
    assert abs(big.E - n_part * unit.E) / abs(big.E) <= 1e-6


def test_scaling_law_minimizer():
    big = gp_minimize(HARM3, 10.0, 0.01, grid_points=1200)
    unit = gp_minimize(HARM3, 1.0, 0.1, grid_points=1200)
    r = big.grid.nodes
    diff = big.phi - math.sqrt(10.0) * unit.phi
    l2 = math.sqrt(np.trapezoid(diff ** 2 * 4.0 * math.pi * r ** 2, r))
    assert l2 <= 1e-5


def test_residual_behaviour():
    st = gp_minimize(HARM3, 1.0, 0.05, grid_points=1000)
    assert gp_residual(st) <= 1e-9
    bump = np.exp(-0.5 * (st.grid.nodes - 1.0) ** 2 / 0.04)
    perturbed = dataclasses.replace(st, phi=st.phi + 0.1 * bump * st.phi.max())
    assert gp_residual(perturbed) > 10.0 * gp_residual(st)
    trace = st.residual_trace
    tail = trace[-10:]
    assert all(b <= a * (1.0 + 1e-9) for a, b in zip(tail, tail[1:]))


def test_energy_trace_monotone():
    st = gp_minimize(HARM3, 1.0, 2.0, grid_points=1000)
    trace = st.energy_trace
    assert all(b <= a + 1e-13 * abs(a) for a, b in zip(trace, trace[1:]))
    assert st.phi.min() > 0.0


def test_normalization_invariant():
    for n_part in (1.0, 25.0):
        st = gp_minimize(HARM3, n_part, 0.3, grid_points=1500)
        r = st.grid.nodes
        norm = np.trapezoid(st.phi ** 2 * 4.0 * math.pi * r ** 2, r)
        assert norm == pytest.approx(n_part, rel=1e-6)
        # chemical-potential identity holds by construction
        quartic = np.trapezoid(st.phi ** 4 * 4.0 * math.pi * r ** 2, r)
        rebuilt = st.E / st.N + 4.0 * math.pi * st.coupling / st.N * quartic
        assert st.mu_gp == pytest.approx(rebuilt, rel=1e-6)


def test_chemical_potential_derivative():
    # dE/dN at fixed a equals mu_gp
    n_part, a = 4.0, 0.05
    st = gp_minimize(HARM3, n_part, a, grid_points=1200)
    dn = 1e-3 * n_part
    up = gp_minimize(HARM3, n_part + dn, a, grid_points=1200)
    dn_state = gp_minimize(HARM3, n_part - dn, a, grid_points=1200)
    fd = (up.E - dn_state.E) / (2.0 * dn)
    assert abs(fd - chemical_potential(st)) / abs(fd) <= 1e-4


def test_chemical_potential_tf_trend():
    prev = math.inf
    for g in (10.0, 100.0, 1000.0):
        st = gp_minimize(HARM3, 1.0, g, grid_points=1200)
        tf = tf_solve(HARM3, 1.0, g)
        ratio = st.mu_gp / tf.mu_tf
        assert 1.0 < ratio < prev
        prev = ratio
    assert prev - 1.0 < 5e-3


def test_mean_density():
    box = TrapPotential(kind="box", dimension=3, box_side=2.0)
    st = gp_minimize(box, 5.0, 0.1)
    assert mean_density(st) == pytest.approx(5.0 / 8.0, rel=1e-12)
    # the a = 0 minimizer is the sigma = 1 Gaussian up to grid error
    st = gp_minimize(HARM3, 1.0, 0.0, grid_points=2000)
    assert mean_density(st) == pytest.approx((2.0 * math.pi) ** -1.5,
                                             rel=1e-4)
    # analytic-profile oracle: rho_bar = N (2 pi sigma^2)^(-3/2) exactly
    r = st.grid.nodes
    sigma = 1.3
    phi = (math.pi * sigma ** 2) ** -0.75 * np.exp(-0.5 * (r / sigma) ** 2)
    gauss_state = dataclasses.replace(st, phi=phi, N=1.0)
    exact = (2.0 * math.pi * sigma ** 2) ** -1.5
    assert mean_density(gauss_state) == pytest.approx(exact, rel=1e-8)


def test_coupling_2d_formula():
    assert coupling_2d(math.exp(-20.0), 1.0) == pytest.approx(0.05, rel=1e-12)
    with pytest.raises(DomainError):
        coupling_2d(2.0, 1.0)
    alpha = two_dim_coupling(HARM2, 10.0, 1e-6, grid_points=800)
    st = gp_minimize(HARM2, 10.0, 1.0, grid_points=800)
    expected = 1.0 / abs(math.log(mean_density(st) * 1e-12))
    assert alpha == pytest.approx(expected, rel=1e-10)


def test_tf_closed_forms_3d():
    n_part, a = 3.0, 0.4
    tf = tf_solve(HARM3, n_part, a)
    exact_mu = (15.0 * n_part * a) ** 0.4
    assert abs(tf.mu_tf - exact_mu) <= 1e-10 * exact_mu
    assert tf.support_radius == pytest.approx(math.sqrt(exact_mu), rel=1e-10)
    # E_tf = mu^(7/2) / (21 a) for the unit harmonic trap
    assert tf_energy(tf) == pytest.approx(exact_mu ** 3.5 / (21.0 * a),
                                          rel=1e-9)
    assert tf_chemical_identity_gap(tf) <= 1e-9
    # density nonnegative, zero outside the support
    rs = np.linspace(0.0, 2.0 * tf.support_radius, 101)
    dens = tf_density(tf, rs)
    assert np.all(dens >= 0.0)
    assert np.all(dens[rs > tf.support_radius] == 0.0)


def test_tf_closed_forms_2d():
    tf = tf_solve(HARM2, 1.0, 1.0)
    assert abs(tf.mu_tf - 4.0) <= 1e-10 * 4.0
    assert tf_energy(tf) == pytest.approx(8.0 / 3.0, rel=1e-9)
    assert tf_chemical_identity_gap(tf) <= 1e-9


def test_tf_scaling_law():
    vals = []
    for g in (1.0, 10.0, 100.0):
        tf = tf_solve(HARM3, 1.0, g)
        vals.append(tf.E_tf / tf_scaling(g, s=2.0, d=3))
    assert vals[0] == pytest.approx(vals[1], rel=1e-9)
    assert vals[1] == pytest.approx(vals[2], rel=1e-9)
    # 2D exponent: s/(s+2)
    assert tf_scaling(16.0, s=2.0, d=2) == pytest.approx(4.0, rel=1e-14)


def test_gp_tf_limit_trend():
    rows = gp_tf_limit(HARM3, [10.0, 100.0, 1000.0], grid_points=1200)
    ratios = [row["ratio"] for row in rows]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    assert all(r > 1.0 for r in ratios)
    l1s = [row["l1_rescaled"] for row in rows]
    assert all(b < a for a, b in zip(l1s, l1s[1:]))
    # tiny g: the gradient term dominates and the ratio is far above 1
    small = gp_tf_limit(HARM3, [0.01], grid_points=900)[0]["ratio"]
    assert small > 5.0


def test_grid_refinement_consistency():
    coarse = gp_minimize(HARM3, 1.0, 0.5, grid_points=700)
    fine = gp_minimize(HARM3, 1.0, 0.5, grid_points=1400)
    est_err = abs(coarse.E - fine.E)
    finest = gp_minimize(HARM3, 1.0, 0.5, grid_points=2800)
    assert abs(fine.E - finest.E) <= 4.0 * est_err


def test_power_trap_s4():
    # quartic trap: TF scaling exponent s/(s+3) = 4/7 and GP -> TF trend
    quartic = TrapPotential(kind="power-law", dimension=3,
                            homogeneity_degree=4.0, scale=1.0)
    tf1 = tf_solve(quartic, 1.0, 1.0)
    tf2 = tf_solve(quartic, 1.0, 100.0)
    assert tf2.E_tf / tf_scaling(100.0, s=4.0, d=3) \
        == pytest.approx(tf1.E_tf, rel=1e-9)
    assert tf_chemical_identity_gap(tf2) <= 1e-9
    rows = gp_tf_limit(quartic, [10.0, 300.0], grid_points=1200)
    assert 1.0 < rows[1]["ratio"] < rows[0]["ratio"]


def test_two_dim_gp():
    st = gp_minimize(HARM2, 1.0, 0.0, grid_points=1000)
    assert st.E == pytest.approx(2.0, abs=1e-4)
    sa = gp_minimize(HARM2, 7.0, 0.3, grid_points=900)
    sb = gp_minimize(HARM2, 1.0, 2.1, grid_points=900)
    assert abs(sa.E - 7.0 * sb.E) / abs(sa.E) <= 1e-6
    rows = gp_tf_limit(HARM2, [30.0, 300.0], grid_points=900)
    assert rows[1]["ratio"] < rows[0]["ratio"]
    assert rows[1]["ratio"] > 1.0


def test_export_profile(tmp_path):
    st = gp_minimize(HARM3, 1.0, 0.1, grid_points=800)
    path = tmp_path / "profile.csv"
    export_profile(st, str(path))
    lines = path.read_text().splitlines()
    meta = [ln for ln in lines if ln.startswith("#")]
    assert any("trap" in ln for ln in meta)
    assert any("mu_gp" in ln for ln in meta)
    header_idx = len(meta)
    assert lines[header_idx] == "r,phi,rho"
    assert len(lines) == header_idx + 1 + len(st.grid)


def test_not_converged_guard():
    st = gp_minimize(HARM3, 1.0, 0.0, grid_points=800)
    bad = dataclasses.replace(st, converged=False)
    with pytest.raises(NotConverged):
        chemical_potential(bad)
