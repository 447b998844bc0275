"""Exit criteria for the simulator. Each test records a one-line verdict that
is printed in the pytest terminal summary."""
import itertools
import subprocess
import sys
import time

import numpy as np
import pytest

from alphavac.bath import BUNCH_DAVIES, BathParams, bath_coefficients
from alphavac.cli import build_config
from alphavac.core import purity
from alphavac.dynamics import (
    EvolutionConfig,
    closed_form_entries,
    equilibrium_reduced_v,
    equilibrium_time,
    evolve_closed_form,
    evolve_numeric,
    initial_state,
    thermal_state_v,
)
from alphavac.measures import (
    SIGMA_X,
    SIGMA_Z,
    entropic_bound,
    entropic_uncertainty,
    measure_report,
    mixedness_closed_form,
    negativity,
    post_measurement_state,
)
from alphavac.sweep import PRESETS, run_sweep

from test_measures import printed_f_matrix

F_VALUES = (0.0, 0.1, 0.2, 1 / 3)
TEMPERATURES = (0.1, 0.2, 0.4)
ALPHAS = (-0.5, -1.0, -2.0, BUNCH_DAVIES)
OMEGAS = (0.1, 1.0, 2.0)
TAU_POINTS = 20


def grid():
    for f, T, alpha, omega in itertools.product(F_VALUES, TEMPERATURES, ALPHAS, OMEGAS):
        c = bath_coefficients(BathParams(omega=omega, temperature=T, alpha=alpha))
        yield (f, T, alpha, omega), c, np.linspace(0.0, 10.0 / c.A, TAU_POINTS)


@pytest.fixture(scope="module")
def trajectories():
    """Numerical and analytic trajectories over the full grid, with timing."""
    start = time.perf_counter()
    numeric = {}
    for point, c, taus in grid():
        config = EvolutionConfig(tau_max=float(taus[-1]), points=TAU_POINTS)
        numeric[point] = evolve_numeric(initial_state(point[0]), c, config).states
    elapsed = time.perf_counter() - start
    analytic = {point: evolve_closed_form(point[0], c, taus) for point, c, taus in grid()}
    return numeric, analytic, elapsed


def test_criterion_01_oracle_equivalence(trajectories, acceptance):
    numeric, analytic, elapsed = trajectories
    worst = max(np.max(np.abs(numeric[k] - analytic[k])) for k in numeric)
    ok = worst <= 1e-8 and elapsed < 10.0 and len(numeric) == 144
    acceptance(1, "numeric vs closed-form evolution <= 1e-8", ok, f"max dev {worst:.2e}, {elapsed:.2f} s")
    assert worst <= 1e-8
    assert elapsed < 10.0


def test_criterion_02_uncertainty_relation(trajectories, acceptance):
    numeric, analytic, _ = trajectories
    worst = np.inf
    for states in itertools.chain(numeric.values(), analytic.values()):
        for rho in states:
            worst = min(worst, entropic_uncertainty(rho) - entropic_bound(rho))
    for name in PRESETS:
        cfg = build_config({"preset": name, "tau-points": "60"})
        for row in run_sweep(cfg):
            worst = min(worst, row.L - row.R)
    ok = worst >= -1e-9
    acceptance(2, "L - R >= -1e-9 on grid and trajectories", ok, f"min L-R {worst:.3e}")
    assert ok


def test_criterion_03_saturation_value(acceptance):
    values = []
    for T in (0.1, 0.2, 0.3, 0.4):
        c = bath_coefficients(BathParams(omega=1.0, temperature=T, alpha=-1.0))
        tau_eq = equilibrium_time(c)
        values.append(entropic_uncertainty(evolve_closed_form(0.0, c, tau_eq)))
        traj = evolve_numeric(initial_state(0.0), c, EvolutionConfig(tau_max=tau_eq, points=2))
        values.append(entropic_uncertainty(traj.states[-1]))
    worst = max(abs(v - 2.5) for v in values)
    ok = worst <= 1e-3
    acceptance(3, "L(tau_eq) = 2.5 for f=0, alpha=-1, omega=1", ok, f"max |L-2.5| {worst:.2e}")
    assert ok


def test_criterion_04_entanglement_death(acceptance):
    worst = 0.0
    for (f, T, alpha, omega), c, _ in grid():
        tau_eq = equilibrium_time(c)
        worst = max(worst, negativity(evolve_closed_form(f, c, tau_eq)))
        traj = evolve_numeric(initial_state(f), c, EvolutionConfig(tau_max=tau_eq, points=2))
        worst = max(worst, negativity(traj.states[-1]))
    ok = worst < 1e-6
    acceptance(4, "negativity(tau_eq) < 1e-6", ok, f"max {worst:.2e}")
    assert ok


def test_criterion_05_thermalisation(acceptance):
    bd_dev, alpha_gap = 0.0, np.inf
    for T, omega in itertools.product((0.1, 0.2, 0.3, 0.4, 0.5, 1.0), (0.1, 1.0, 2.0, 3.0)):
        bd = bath_coefficients(BathParams(omega, T, BUNCH_DAVIES))
        thermal = thermal_state_v(omega, T)
        bd_dev = max(bd_dev, np.max(np.abs(equilibrium_reduced_v(bd) - thermal)))
        av = bath_coefficients(BathParams(omega, T, -1.0))
        alpha_gap = min(alpha_gap, np.max(np.abs(equilibrium_reduced_v(av) - thermal)))
    ok = bd_dev <= 1e-12 and alpha_gap > 1e-6
    acceptance(5, "Bunch-Davies stationary qubit is thermal; alpha=-1 is not", ok, f"BD dev {bd_dev:.1e}, alpha gap {alpha_gap:.3g}")
    assert bd_dev <= 1e-12
    assert alpha_gap > 1e-6


def test_criterion_06_mixedness_consistency(trajectories, acceptance):
    _, analytic, _ = trajectories
    worst, worst0 = 0.0, 0.0
    for (point, c, taus) in grid():
        f = point[0]
        states = analytic[point]
        numeric_x = np.array([1.2 * (1 - purity(r)) for r in states])
        worst = max(worst, np.max(np.abs(mixedness_closed_form(f, c, taus) - numeric_x)))
        expected0 = 4.8 * f - 6.6 * f**2
        worst0 = max(worst0, abs(mixedness_closed_form(f, c, 0.0) - expected0), abs(numeric_x[0] - expected0))
    ok = worst <= 1e-10 and worst0 <= 1e-10
    acceptance(6, "closed-form mixedness = 6/5 (1 - Tr rho^2)", ok, f"max dev {worst:.1e}, tau=0 dev {worst0:.1e}")
    assert ok


def test_criterion_07_post_measurement_forms(trajectories, acceptance):
    _, analytic, _ = trajectories
    z_exact, x_worst = True, 0.0
    for point, c, taus in grid():
        f = point[0]
        q = closed_form_entries(f, c, taus)
        for n, (tau, rho) in enumerate(zip(taus, analytic[point])):
            dz = post_measurement_state(rho, SIGMA_Z)
            z_exact &= np.array_equal(dz, np.diag([float(q[k][n]) for k in range(6)]).astype(complex))
            dx = post_measurement_state(rho, SIGMA_X)
            x_worst = max(x_worst, np.max(np.abs(dx - printed_f_matrix(f, c.A, c.B, tau))))
    ok = z_exact and x_worst <= 1e-12
    acceptance(7, "sigma_z -> diag(Q), sigma_x -> F matrix", ok, f"sigma_z exact={z_exact}, sigma_x dev {x_worst:.1e}")
    assert z_exact
    assert x_worst <= 1e-12


def test_criterion_08_wmr_steering(acceptance):
    rows = run_sweep(build_config({"preset": "fig5"}))
    by_tau = {}
    for r in rows:
        by_tau.setdefault(r.tau, {})[r.p] = r.L
    strengths = (0.0, 0.3, 0.6, 0.9)
    bad = [
        tau
        for tau, ls in sorted(by_tau.items())
        if any(ls[b] > ls[a] + 1e-9 for a, b in zip(strengths, strengths[1:]))
    ]
    ok = not bad
    detail = f"{len(by_tau)} tau samples"
    if bad:
        detail += f"; order broken at {len(bad)} samples, tau in [{bad[0]:.3g}, {bad[-1]:.3g}]"
    acceptance(8, "L non-increasing in WMR strength at every tau (fig5)", ok, detail)
    assert ok, detail


def test_criterion_09_short_time_temperature_order(acceptance):
    L, N = [], []
    for T in (0.1, 0.2, 0.3, 0.4):
        c = bath_coefficients(BathParams(omega=1.0, temperature=T, alpha=-1.0))
        r = measure_report(evolve_closed_form(0.0, c, 1.0), 1.0)
        L.append(r.L)
        N.append(r.negativity)
    ok = all(a < b for a, b in zip(L, L[1:])) and all(a > b for a, b in zip(N, N[1:]))
    acceptance(9, "at tau=1: L rises, negativity falls with T", ok, "L=" + ",".join(f"{x:.3f}" for x in L))
    assert ok


def test_criterion_10_determinism(tmp_path, acceptance):
    outputs = []
    for n, workers in enumerate(["1", "1", "1", "4"]):
        path = tmp_path / f"run{n}.csv"
        subprocess.run(
            [sys.executable, "-m", "alphavac", "sweep", "--preset", "fig1", "--workers", workers, "-o", str(path)],
            check=True,
        )
        outputs.append(path.read_bytes())
    ok = len(set(outputs)) == 1 and outputs[0].count(b"\n") == 801
    acceptance(10, "sweep --preset fig1 byte-identical (3 runs, 1 vs 4 workers)", ok)
    assert ok
