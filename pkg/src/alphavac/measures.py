"""Entropic uncertainty, negativity and mixedness of qutrit-qubit states."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DIM,
    DIM_U,
    DIM_V,
    check_density_matrix,
    check_hermitian,
    partial_trace_over_u,
    partial_transpose_u,
    purity,
    trace_norm,
    von_neumann_entropy,
)
from .dynamics import check_f
from .errors import ValidationError

# L >= R is checked with this much slack
RELATION_SLACK = 1e-9
ROUNDOFF_CLAMP = 1e-12


@dataclass(frozen=True)
class Observable:
    """A Hermitian qutrit observable with its orthonormal eigenbasis.

    ``eigenvectors[:, k]`` belongs to ``eigenvalues[k]``; eigenvalues are in
    descending order.
    """

    name: str
    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def from_matrix(cls, name, matrix):
        matrix = check_hermitian(np.asarray(matrix, dtype=complex), 1e-12)
        vals, vecs = np.linalg.eigh(matrix)
        return cls(name, matrix, vals[::-1].copy(), vecs[:, ::-1].copy())

    @property
    def projectors(self):
        v = self.eigenvectors
        return np.einsum("ik,jk->kij", v, v.conj())


def qutrit_sigma_z():
    return Observable.from_matrix("sigma_z", np.diag([1.0, 0.0, -1.0]))


def qutrit_sigma_x():
    s = 1 / math.sqrt(2)
    return Observable.from_matrix(
        "sigma_x", np.array([[0, s, 0], [s, 0, s], [0, s, 0]], dtype=float)
    )


SIGMA_Z = qutrit_sigma_z()
SIGMA_X = qutrit_sigma_x()


def overlap_c(o1, o2):
    """Largest squared overlap ``max_ij |<phi_i|psi_j>|^2`` of two eigenbases."""
    return float(np.max(np.abs(o1.eigenvectors.conj().T @ o2.eigenvectors) ** 2))


def post_measurement_state(rho, obs):
    """Dephase the qutrit of ``rho`` in the eigenbasis of ``obs``:
    ``sum_k (P_k ⊗ I) rho (P_k ⊗ I)``."""
    rho = check_density_matrix(rho, DIM)
    blocks = rho.reshape(DIM_U, DIM_V, DIM_U, DIM_V)
    out = np.zeros_like(blocks)
    for P in obs.projectors:
        out += np.einsum("ab,bvcw,cd->avdw", P, blocks, P)
    return check_density_matrix(out.reshape(DIM, DIM))


def conditional_entropy(rho):
    """``S(U|V) = S(rho) - S(Tr_U rho)`` in bits."""
    rho = check_density_matrix(rho, DIM)
    return von_neumann_entropy(rho) - von_neumann_entropy(partial_trace_over_u(rho))


def entropic_uncertainty(rho, o1=SIGMA_Z, o2=SIGMA_X):
    """Left-hand side ``L = S(O1|V) + S(O2|V)`` of the uncertainty relation."""
    return conditional_entropy(post_measurement_state(rho, o1)) + conditional_entropy(
        post_measurement_state(rho, o2)
    )


def entropic_bound(rho, o1=SIGMA_Z, o2=SIGMA_X):
    """Lower bound ``R = S(U|V) + log2(1/c)``."""
    return conditional_entropy(rho) - math.log2(overlap_c(o1, o2))


def negativity(rho):
    """``||rho^{T_U}||_1 - 1``; round-off negatives are reported as zero."""
    rho = check_density_matrix(rho, DIM)
    n = trace_norm(partial_transpose_u(rho)) - 1.0
    if -ROUNDOFF_CLAMP < n < 0:
        return 0.0
    return n


def mixedness(rho):
    """Normalised linear entropy ``d/(d-1) (1 - Tr rho^2)``."""
    rho = check_density_matrix(rho)
    d = rho.shape[0]
    x = d / (d - 1) * (1.0 - purity(rho))
    if -ROUNDOFF_CLAMP < x < 0:
        return 0.0
    return x


def mixedness_closed_form(f, coeffs, tau):
    """Analytic mixedness of the evolved initial family (vectorised in ``tau``)."""
    f = check_f(f)
    A, B = coeffs.A, coeffs.B
    tau = np.asarray(tau, dtype=float)
    e4 = np.exp(-4 * A * tau)
    # the printed expression with e^{-8 A tau} distributed over the bracket
    x = -3 * (
        A**2 * ((f * (3 * f - 2) - 3) + 2 * (f * (5 * f - 4) + 1) * e4 + (1 - 3 * f) ** 2 * e4**2)
        + B**2 * (f * (3 * f - 2) + 1) * (1 - e4) ** 2
    ) / (10 * A**2)
    return x


def equilibrium_mixedness(f, coeffs):
    A, B = coeffs.A, coeffs.B
    return (A**2 * (-9 * f**2 + 6 * f + 9) - 3 * B**2 * (3 * f**2 - 2 * f + 1)) / (10 * A**2)


@dataclass(frozen=True)
class UncertaintyReport:
    tau: float
    L: float
    R: float
    c: float
    negativity: float
    mixedness: float
    purity: float

    def check(self):
        """Raise :class:`ValidationError` if the report violates a physical bound."""
        if self.L < self.R - RELATION_SLACK:
            raise ValidationError(f"uncertainty relation violated at tau={self.tau}: L={self.L}, R={self.R}")
        if self.negativity < 0:
            raise ValidationError(f"negative negativity {self.negativity} at tau={self.tau}")
        if not -ROUNDOFF_CLAMP <= self.mixedness <= 1 + ROUNDOFF_CLAMP:
            raise ValidationError(f"mixedness {self.mixedness} outside [0, 1] at tau={self.tau}")
        return self


def measure_report(rho, tau=0.0, o1=SIGMA_Z, o2=SIGMA_X):
    """All measures of ``rho``, validated against their bounds."""
    rho = check_density_matrix(rho, DIM)
    return UncertaintyReport(
        tau=float(tau),
        L=entropic_uncertainty(rho, o1, o2),
        R=entropic_bound(rho, o1, o2),
        c=overlap_c(o1, o2),
        negativity=negativity(rho),
        mixedness=mixedness(rho),
        purity=purity(rho),
    ).check()
