"""Open-system dynamics of the qutrit-qubit pair.

Only the qubit couples to the field, so the generator is the qubit
Kossakowski-Lindblad dissipator lifted by ``I_3 ⊗ ·``. The environment-induced
level shift (the commutator with the renormalised qubit Hamiltonian) is not
included: it acts as a local unitary on the qubit, and every measure in
:mod:`alphavac.measures` is invariant under such unitaries. Off-diagonal
elements of the returned states therefore carry no oscillating phase.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .core import (
    DEFAULT_TOL,
    DIM,
    DIM_U,
    PAULI,
    check_density_matrix,
    lift_qubit,
)
from .errors import (
    DegeneratePostSelectionError,
    DomainError,
    IntegrationError,
    ValidationError,
)

F_MAX = 1.0 / 3.0
# 4 A dt bound used to pick the default RK4 step
RK4_STEP_BOUND = 0.01
# e^{-4 A tau} <= e^{-40}
EQUILIBRIUM_EXPONENT = 40.0

_LIFTED_PAULI = tuple(lift_qubit(s) for s in PAULI)


def check_f(f):
    if not (0.0 <= f <= F_MAX + 1e-15):
        raise DomainError(f"f must lie in [0, 1/3], got {f!r}")
    return float(f)


def equilibrium_time(coeffs):
    """Proper time after which ``e^{-4 A tau}`` drops below ``e^{-40}``."""
    return EQUILIBRIUM_EXPONENT / (4.0 * coeffs.A)


def initial_state(f):
    """The one-parameter initial family; pure and maximally entangled at ``f = 0``,
    separable at ``f = 1/3``."""
    f = check_f(f)
    rho = np.zeros((DIM, DIM), dtype=complex)
    rho[0, 0] = rho[0, 5] = rho[5, 0] = rho[5, 5] = f / 2
    rho[1, 1] = rho[1, 4] = rho[4, 1] = rho[4, 4] = (1 - 2 * f) / 2
    rho[2, 2] = rho[3, 3] = f / 2
    return check_density_matrix(rho)


def kossakowski_matrix(coeffs):
    """``S_ij = A δ_ij - i B ε_ij3 - A δ_i3 δ_j3``."""
    A, B = coeffs.A, coeffs.B
    return np.array(
        [[A, -1j * B, 0], [1j * B, A, 0], [0, 0, 0]],
        dtype=complex,
    )


def lindblad_rhs(rho, coeffs):
    """Time derivative of ``rho`` under the lifted dissipator.

    ``rho`` may carry leading batch dimensions (``(..., 6, 6)``); the map is
    applied to each trailing 6x6 block.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (DIM, DIM):
        raise ValidationError(f"expected (..., 6, 6) state, got shape {rho.shape}")
    S = kossakowski_matrix(coeffs)
    out = np.zeros_like(rho)
    for i, si in enumerate(_LIFTED_PAULI):
        for j, sj in enumerate(_LIFTED_PAULI):
            if S[i, j] == 0:
                continue
            sisj = si @ sj
            out += 0.5 * S[i, j] * (2 * sj @ rho @ si - sisj @ rho - rho @ sisj)
    return out


def lindblad_superoperator(coeffs):
    """Matrix of :func:`lindblad_rhs` acting on row-major ``rho.ravel()``."""
    basis = np.eye(DIM * DIM, dtype=complex).reshape(DIM * DIM, DIM, DIM)
    return lindblad_rhs(basis, coeffs).reshape(DIM * DIM, DIM * DIM).T


@dataclass(frozen=True)
class EvolutionConfig:
    """Integration settings.

    Output is sampled at ``points`` uniformly spaced times on ``[0, tau_max]``.
    For ``integrator="rk4"`` the total number of fixed steps is ``steps``
    (rounded up to a multiple of ``points - 1``); ``None`` picks the smallest
    count with ``4 A dt <= 0.01``.
    """

    tau_max: float
    points: int = 201
    steps: int | None = None
    integrator: str = "rk4"
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not (self.tau_max > 0 and math.isfinite(self.tau_max)):
            raise DomainError(f"tau_max must be positive, got {self.tau_max!r}")
        if self.points < 2:
            raise DomainError(f"points must be >= 2, got {self.points!r}")
        if self.steps is not None and self.steps < 1:
            raise DomainError(f"steps must be >= 1, got {self.steps!r}")
        if self.integrator not in ("rk4", "rk45"):
            raise DomainError(f"unknown integrator {self.integrator!r}")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("integrator tolerances must be positive")

    @property
    def times(self):
        return np.linspace(0.0, self.tau_max, self.points)

    def rk4_steps(self, coeffs):
        segments = self.points - 1
        steps = self.steps
        if steps is None:
            steps = math.ceil(4.0 * coeffs.A * self.tau_max / RK4_STEP_BOUND)
        return max(segments, segments * math.ceil(steps / segments))


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n, 6, 6)

    def __len__(self):
        return len(self.times)

    def __iter__(self):
        return iter(zip(self.times, self.states))


def _rk4_step_matrix(L, h):
    """One classical RK4 step for ``y' = L y``, applied to every basis vector."""
    y = np.eye(L.shape[0], dtype=complex)
    k1 = L @ y
    k2 = L @ (y + 0.5 * h * k1)
    k3 = L @ (y + 0.5 * h * k2)
    k4 = L @ (y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _validated(times, vecs, tol):
    states = vecs.reshape(-1, DIM, DIM)
    for tau, rho in zip(times, states):
        try:
            check_density_matrix(rho, DIM, tol)
        except ValidationError as exc:
            raise IntegrationError(float(tau), str(exc)) from None
    return Trajectory(times=np.asarray(times, dtype=float), states=states)


def evolve_numeric(rho0, coeffs, config):
    """Integrate the master equation from ``rho0`` on ``config.times``.

    The generator is linear and time independent, so a fixed RK4 step is a
    fixed 36x36 matrix; between output samples it is raised to the number of
    substeps. Every sampled state is checked against the density-matrix
    invariants.

    Raises:
        IntegrationError: naming the first sample time whose state fails
            validation.
    """
    rho0 = check_density_matrix(rho0, DIM, config.tol)
    L = lindblad_superoperator(coeffs)
    times = config.times
    y0 = rho0.ravel().copy()

    if config.integrator == "rk45":
        sol = solve_ivp(
            lambda _t, y: L @ y,
            (0.0, config.tau_max),
            y0,
            method="RK45",
            t_eval=times,
            rtol=config.rel_tol,
            atol=config.abs_tol,
        )
        if not sol.success:
            raise IntegrationError(float(sol.t[-1]) if sol.t.size else 0.0, sol.message)
        vecs = sol.y.T.copy()
        vecs[0] = y0
        return _validated(times, vecs, config.tol)

    segments = config.points - 1
    steps = config.rk4_steps(coeffs)
    h = config.tau_max / steps
    hop = np.linalg.matrix_power(_rk4_step_matrix(L, h), steps // segments)
    vecs = np.empty((config.points, DIM * DIM), dtype=complex)
    vecs[0] = y0
    for n in range(segments):
        vecs[n + 1] = hop @ vecs[n]
    return _validated(times, vecs, config.tol)


def _populations(f, A, B, tau):
    """Diagonal entries (Q1..Q6) and coherences (Q7, Q8) of the closed form."""
    e = np.exp(-4 * A * tau)
    E = np.exp(4 * A * tau)
    # written as printed, with the exponentials multiplied out
    q1 = e * (3 * f * A - A + B - (A - B) * E * (f - 1) - B * f) / (4 * A)
    q2 = e * (-3 * f * A + A - B - (A + B) * E * (f - 1) + B * f) / (4 * A)
    q3 = (A - B + B * e) * f / (2 * A)
    q4 = (A - B * e + B) * f / (2 * A)
    q5 = e * (-3 * f * A + A + B - (A - B) * E * (f - 1) - B * f) / (4 * A)
    q6 = e * (3 * f * A - A - B - (A + B) * E * (f - 1) + B * f) / (4 * A)
    q7 = 0.5 * np.exp(-2 * A * tau) * f
    q8 = 0.5 * np.exp(-2 * A * tau) * (1 - 2 * f)
    return q1, q2, q3, q4, q5, q6, q7, q8


def _relaxed_populations(f, A, B, tau):
    # same entries regrouped as K + (Q(0) - K) e^{-4 A tau}; finite for any tau
    e = np.exp(-4 * A * tau)
    k1 = (A - B) * (1 - f) / (4 * A)
    k2 = (A + B) * (1 - f) / (4 * A)
    k3 = (A - B) * f / (2 * A)
    k4 = (A + B) * f / (2 * A)
    q1 = k1 + (f / 2 - k1) * e
    q2 = k2 + ((1 - 2 * f) / 2 - k2) * e
    q3 = k3 + (f / 2 - k3) * e
    q4 = k4 + (f / 2 - k4) * e
    q5 = k1 + ((1 - 2 * f) / 2 - k1) * e
    q6 = k2 + (f / 2 - k2) * e
    q7 = 0.5 * np.exp(-2 * A * tau) * f
    q8 = 0.5 * np.exp(-2 * A * tau) * (1 - 2 * f)
    return q1, q2, q3, q4, q5, q6, q7, q8


def closed_form_entries(f, coeffs, tau):
    """``(Q1, ..., Q8)`` at ``tau`` (scalar or array).

    The literal products overflow once ``4 A tau`` exceeds ~700; past that the
    algebraically identical relaxed form is used.
    """
    f = check_f(f)
    tau = np.asarray(tau, dtype=float)
    A, B = coeffs.A, coeffs.B
    literal = _populations(f, A, B, np.minimum(tau, 100.0 / A))
    relaxed = _relaxed_populations(f, A, B, tau)
    use_literal = 4 * A * tau <= 400.0
    return tuple(np.where(use_literal, lit, rel) for lit, rel in zip(literal, relaxed))


def evolve_closed_form(f, coeffs, tau, tol=DEFAULT_TOL):
    """Analytic state at proper time ``tau``; ``tau`` may be an array, in
    which case the result has shape ``(len(tau), 6, 6)``."""
    q = closed_form_entries(f, coeffs, tau)
    shape = np.shape(q[0])
    rho = np.zeros(shape + (DIM, DIM), dtype=complex)
    for k in range(6):
        rho[..., k, k] = q[k]
    rho[..., 0, 5] = rho[..., 5, 0] = q[6]
    rho[..., 1, 4] = rho[..., 4, 1] = q[7]
    for r in rho.reshape(-1, DIM, DIM):
        check_density_matrix(r, DIM, tol)
    return rho


def equilibrium_state(f, coeffs):
    """``tau -> inf`` limit: ``diag(K1, K2, K3, K4, K1, K2)``."""
    f = check_f(f)
    A, B = coeffs.A, coeffs.B
    k1 = -(A - B) * (f - 1) / (4 * A)
    k2 = -(A + B) * (f - 1) / (4 * A)
    k3 = (A - B) * f / (2 * A)
    k4 = (A + B) * f / (2 * A)
    return check_density_matrix(np.diag([k1, k2, k3, k4, k1, k2]).astype(complex))


def equilibrium_reduced_v(coeffs):
    """Stationary qubit state ``diag((A-B)/2A, (A+B)/2A)``."""
    A, B = coeffs.A, coeffs.B
    return check_density_matrix(np.diag([(A - B) / (2 * A), (A + B) / (2 * A)]).astype(complex))


def thermal_state_v(omega, temperature):
    """Gibbs state of ``(omega/2) sigma_3`` at ``temperature``; ``|0>`` is the
    excited level."""
    if not (omega > 0 and temperature > 0):
        raise DomainError("omega and temperature must be positive")
    t = math.tanh(omega / (2 * temperature))
    return check_density_matrix(np.diag([(1 - t) / 2, (1 + t) / 2]).astype(complex))


def weak_measurement_reversal(rho, strength):
    """Apply the qubit filter ``M = sqrt(1-p)|0><0| + |1><1|`` and renormalise.

    Raises:
        DomainError: for ``strength`` outside ``[0, 1)``.
        DegeneratePostSelectionError: if the success probability vanishes.
    """
    p = float(strength)
    if not 0.0 <= p < 1.0:
        raise DomainError(f"weak measurement strength must lie in [0, 1), got {strength!r}")
    rho = check_density_matrix(rho, DIM)
    m = np.sqrt(np.array([1.0 - p, 1.0] * DIM_U))
    out = m[:, None] * rho * m[None, :]
    norm = np.trace(out).real
    if norm <= 0:
        raise DegeneratePostSelectionError("post-selection probability is zero")
    return check_density_matrix(out / norm)
