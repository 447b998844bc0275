"""Parameter sweeps over bath and state parameters with CSV output.

Rows are sorted before emission, so output bytes do not depend on the
number of worker processes.
"""
from __future__ import annotations

import io
import itertools
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from .bath import BUNCH_DAVIES, BathParams, bath_coefficients
from .dynamics import (
    EvolutionConfig,
    evolve_closed_form,
    evolve_numeric,
    initial_state,
    weak_measurement_reversal,
)
from .measures import measure_report

CSV_HEADER = ("f", "T", "alpha", "omega", "p", "tau", "L", "R", "negativity", "mixedness", "purity")
DEFAULT_TAU_POINTS = 200
# default horizon: 10 relaxation times 1/(4A) of the slowest bath
DEFAULT_HORIZON = 10.0

PRESETS = {
    "fig1": dict(f=(0.0,), T=(0.1, 0.2, 0.3, 0.4), alpha=(-1.0,), omega=(1.0,), p=(0.0,)),
    "fig2": dict(f=(0.0,), T=(0.1,), alpha=(-1.0,), omega=(1.0,), p=(0.0,)),
    "fig3": dict(f=(0.0, 0.1, 0.2, 1 / 3), T=(0.2,), alpha=(-1.0,), omega=(0.1,), p=(0.0,)),
    "fig4": dict(f=(0.1,), T=(0.2,), alpha=(-1.0,), omega=(0.1,), p=(0.0,)),
    "fig5": dict(f=(0.0,), T=(0.2,), alpha=(-1.0,), omega=(0.1,), p=(0.0, 0.3, 0.6, 0.9)),
    "alpha": dict(f=(0.0,), T=(0.2,), alpha=(BUNCH_DAVIES, -2.0, -1.0, -0.5), omega=(1.0,), p=(0.0,)),
    "omega": dict(f=(0.0,), T=(0.2,), alpha=(-1.0,), omega=(0.1, 1.0, 2.0, 3.0), p=(0.0,)),
}


@dataclass(frozen=True)
class RunConfig:
    f: tuple = (0.0,)
    T: tuple = (0.1,)
    alpha: tuple = (-1.0,)
    omega: tuple = (1.0,)
    p: tuple = (0.0,)
    tau_max: float | None = None
    tau_points: int = DEFAULT_TAU_POINTS
    integrator: str = "rk4"
    workers: int = 1
    output: str = "-"
    preset: str | None = None

    def grid(self):
        return list(itertools.product(self.f, self.T, self.alpha, self.omega, self.p))

    def coefficient_grid(self):
        return {
            (T, a, w): bath_coefficients(BathParams(omega=w, temperature=T, alpha=a))
            for T, a, w in itertools.product(self.T, self.alpha, self.omega)
        }

    def times(self):
        tau_max = self.tau_max
        if tau_max is None:
            a_min = min(c.A for c in self.coefficient_grid().values())
            tau_max = DEFAULT_HORIZON / (4.0 * a_min)
        return np.linspace(0.0, tau_max, self.tau_points)


@dataclass(frozen=True, order=True)
class ResultRow:
    f: float
    T: float
    alpha: float
    omega: float
    p: float
    tau: float
    L: float = field(compare=False)
    R: float = field(compare=False)
    negativity: float = field(compare=False)
    mixedness: float = field(compare=False)
    purity: float = field(compare=False)


class SweepError(RuntimeError):
    """A grid point failed; carries the point and the underlying error."""

    def __init__(self, point, cause):
        self.point = point
        self.cause = cause
        f, T, a, w, p = point
        super().__init__(
            f"grid point f={f:g}, T={T:g}, alpha={format_alpha(a)}, omega={w:g}, p={p:g}: {cause}"
        )


def trajectory_states(f, T, alpha, omega, p, times, integrator="rk4"):
    """States along ``times`` for one grid point.

    Without weak measurement reversal the state stays in the analytic family;
    a filtered initial state leaves it and is integrated numerically.
    """
    coeffs = bath_coefficients(BathParams(omega=omega, temperature=T, alpha=alpha))
    if p == 0:
        return evolve_closed_form(f, coeffs, times)
    rho0 = weak_measurement_reversal(initial_state(f), p)
    config = EvolutionConfig(tau_max=float(times[-1]), points=len(times), integrator=integrator)
    return evolve_numeric(rho0, coeffs, config).states


def _evaluate_point(args):
    point, times, integrator = args
    f, T, alpha, omega, p = point
    try:
        states = trajectory_states(f, T, alpha, omega, p, times, integrator)
        rows = []
        for tau, rho in zip(times, states):
            r = measure_report(rho, tau)
            rows.append(ResultRow(f, T, alpha, omega, p, float(tau), r.L, r.R, r.negativity, r.mixedness, r.purity))
        return rows
    except (ValueError, RuntimeError) as exc:
        raise SweepError(point, exc) from exc


def run_sweep(config, workers=None):
    """Evaluate every grid point of ``config`` and return rows sorted by
    ``(f, T, alpha, omega, p, tau)``."""
    workers = config.workers if workers is None else workers
    times = config.times()
    jobs = [(point, times, config.integrator) for point in config.grid()]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_evaluate_point, jobs))
    else:
        chunks = [_evaluate_point(job) for job in jobs]
    return sorted(itertools.chain.from_iterable(chunks))


def format_alpha(alpha):
    return "BD" if alpha == BUNCH_DAVIES else format_number(alpha)


def format_number(x):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        x = 0.0  # no "-0"
    return format(x, ".12g")


def format_row(row):
    values = [getattr(row, name.name) for name in fields(row)]
    out = [format_alpha(v) if name == "alpha" else format_number(v) for name, v in zip(CSV_HEADER, values)]
    return ",".join(out)


def emit_csv(rows, destination="-"):
    """Write the header and one line per row to a path, ``"-"`` (stdout) or
    an open text stream."""
    text = io.StringIO()
    text.write(",".join(CSV_HEADER) + "\n")
    for row in rows:
        text.write(format_row(row) + "\n")
    payload = text.getvalue()
    if destination == "-":
        sys.stdout.write(payload)
        sys.stdout.flush()
    elif hasattr(destination, "write"):
        destination.write(payload)
    else:
        with open(destination, "w", encoding="ascii", newline="\n") as fh:
            fh.write(payload)
