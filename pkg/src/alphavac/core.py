"""Dense linear algebra and entropy primitives for qutrit-qubit states.

Composite basis ordering is ``index = 2*u + v`` with ``u`` the qutrit and
``v`` the qubit label, i.e. the ordering produced by ``np.kron(U_op, V_op)``.
States are plain ``numpy`` complex arrays; the ``check_*`` helpers enforce
the density-matrix invariants wherever a state is built.
"""
from __future__ import annotations

import numpy as np

from .errors import ValidationError

DIM_U = 3
DIM_V = 2
DIM = DIM_U * DIM_V

DEFAULT_TOL = 1e-9
# eigenvalues in (-ENTROPY_CLAMP, 0) are round-off and count as zero
ENTROPY_CLAMP = 1e-10

SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_1, SIGMA_2, SIGMA_3)


def tensor_product(a, b):
    """Kronecker product ``a ⊗ b`` in the ``(u, v)`` ordering."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def lift_qubit(op):
    """Embed a 2x2 operator acting on the qubit as ``I_3 ⊗ op``."""
    return tensor_product(np.eye(DIM_U), op)


def _square(m, dim=None, name="matrix"):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise ValidationError(f"{name} must be {dim}x{dim}, got {m.shape[0]}x{m.shape[1]}")
    return m


def check_hermitian(m, tol=DEFAULT_TOL):
    m = _square(m)
    err = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if err > tol:
        raise ValidationError(f"matrix is not Hermitian (max deviation {err:.3g})")
    return m


def check_density_matrix(rho, dim=None, tol=DEFAULT_TOL):
    """Validate and return ``rho`` as a complex density matrix.

    Raises:
        ValidationError: if ``rho`` is not square (or not ``dim``-dimensional),
            not Hermitian, not of unit trace, or has an eigenvalue below
            ``-tol``.
    """
    rho = _square(rho, dim, "density matrix")
    check_hermitian(rho, tol)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
    lam_min = np.linalg.eigvalsh(rho)[0]
    if lam_min < -tol:
        raise ValidationError(f"density matrix has negative eigenvalue {lam_min:.3g}")
    return rho


def partial_trace_over_u(rho):
    """Reduced qubit state ``Tr_U rho`` of a 6x6 qutrit-qubit state."""
    rho = _square(rho, DIM, "bipartite state")
    return np.einsum("uvuw->vw", rho.reshape(DIM_U, DIM_V, DIM_U, DIM_V))


def partial_trace_over_v(rho):
    """Reduced qutrit state ``Tr_V rho`` of a 6x6 qutrit-qubit state."""
    rho = _square(rho, DIM, "bipartite state")
    return np.einsum("uvwv->uw", rho.reshape(DIM_U, DIM_V, DIM_U, DIM_V))


def partial_transpose_u(rho):
    """Transpose the qutrit indices: ``(u,v),(u',v') -> (u',v),(u,v')``."""
    rho = _square(rho, DIM, "bipartite state")
    t = rho.reshape(DIM_U, DIM_V, DIM_U, DIM_V).transpose(2, 1, 0, 3)
    return t.reshape(DIM, DIM)


def hermitian_eigenvalues(m, tol=DEFAULT_TOL):
    """Real eigenvalues of a Hermitian matrix, largest first."""
    m = check_hermitian(m, tol)
    return np.linalg.eigvalsh(m)[::-1]


def von_neumann_entropy(rho, clamp=ENTROPY_CLAMP):
    """Entropy ``-Tr(rho log2 rho)`` in bits.

    Eigenvalues in ``(-clamp, 0)`` are treated as zero; anything more
    negative is an error rather than silently dropped.
    """
    lam = np.linalg.eigvalsh(check_hermitian(rho))
    if lam[0] < -clamp:
        raise ValidationError(f"entropy of a non-positive matrix (eigenvalue {lam[0]:.3g})")
    lam = lam[lam > 0]
    # an eigenvalue of 1 + eps would give a tiny negative entropy
    return max(0.0, float(-np.sum(lam * np.log2(lam))))


def trace_norm(m):
    """Trace norm ``Tr sqrt(m^† m)`` of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eigenvalues(m))))


def purity(rho):
    """``Tr(rho^2)``; for Hermitian ``rho`` this is the squared Frobenius norm."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.sum(np.abs(rho) ** 2))
