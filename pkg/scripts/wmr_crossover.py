"""Tabulate L against weak-measurement-reversal strength along the fig5
trajectory and report where stronger filtering starts to lower L."""
import numpy as np

from alphavac import (
    BathParams,
    EvolutionConfig,
    bath_coefficients,
    entropic_uncertainty,
    evolve_numeric,
    initial_state,
    weak_measurement_reversal,
)

STRENGTHS = (0.0, 0.3, 0.6, 0.9)


def main(points=401):
    c = bath_coefficients(BathParams(omega=0.1, temperature=0.2, alpha=-1.0))
    config = EvolutionConfig(tau_max=10 / (4 * c.A), points=points)
    curves = []
    for p in STRENGTHS:
        traj = evolve_numeric(weak_measurement_reversal(initial_state(0.0), p), c, config)
        curves.append([entropic_uncertainty(rho) for rho in traj.states])
    curves = np.array(curves)
    ordered = np.all(np.diff(curves, axis=0) <= 1e-9, axis=0)
    broken = np.flatnonzero(~ordered)
    first = config.times[broken[-1] + 1] if broken.size else 0.0
    print("tau      " + "  ".join(f"p={p:<5}" for p in STRENGTHS))
    for n in np.linspace(0, points - 1, 11).astype(int):
        print(f"{config.times[n]:7.3f}  " + "  ".join(f"{x:7.4f}" for x in curves[:, n]))
    print(f"L decreases with p for all tau >= {first:.3f}")


if __name__ == "__main__":
    main()
