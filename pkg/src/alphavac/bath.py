"""Field spectrum of a conformally coupled massless scalar in de Sitter
alpha-vacua, and the dissipator coefficients ``A``, ``B`` it induces.

Bunch-Davies is represented by ``alpha = -inf`` and evaluated with its exact
limit formulas. All exponentials are combined in log space so that large
``omega / T`` or ``pi * omega`` do not overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

BUNCH_DAVIES = -math.inf
# e^{2 alpha} - 1 vanishes at alpha = 0
ALPHA_MAX = -1e-6


def gibbons_hawking_temperature(curvature_radius):
    """Temperature ``1 / (2 pi l)`` seen by a comoving detector."""
    if not curvature_radius > 0:
        raise DomainError(f"curvature radius must be positive, got {curvature_radius!r}")
    return 1.0 / (2.0 * math.pi * curvature_radius)


@dataclass(frozen=True)
class BathParams:
    """Environment of the qubit: level spacing, temperature and vacuum.

    ``alpha`` is the (negative) alpha-vacuum parameter, or
    :data:`BUNCH_DAVIES` (``-inf``) for the Bunch-Davies vacuum.
    """

    omega: float
    temperature: float
    alpha: float = BUNCH_DAVIES

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise DomainError(f"omega must be positive and finite, got {self.omega!r}")
        if not (self.temperature > 0 and math.isfinite(self.temperature)):
            raise DomainError(f"temperature must be positive and finite, got {self.temperature!r}")
        if math.isnan(self.alpha) or not self.alpha <= ALPHA_MAX:
            raise DomainError(f"alpha must be <= {ALPHA_MAX} (or -inf), got {self.alpha!r}")

    @property
    def is_bunch_davies(self):
        return self.alpha == BUNCH_DAVIES


@dataclass(frozen=True)
class BathCoefficients:
    A: float
    B: float

    def __post_init__(self):
        if not self.A > 0:
            raise DomainError(f"dissipator coefficient A must be positive, got {self.A!r}")
        if not abs(self.B) <= self.A:
            raise DomainError(f"|B| must not exceed A (A={self.A!r}, B={self.B!r})")

    @property
    def relaxation_rate(self):
        """Decay rate ``4A`` of the populations."""
        return 4.0 * self.A


def _log_one_minus_exp_neg(x):
    """``log|1 - e^{-x}|`` for ``x != 0``."""
    if x > 0:
        return math.log(-math.expm1(-x))
    # |1 - e^{|x|}| = e^{|x|} (1 - e^{-|x|})
    return -x + math.log(-math.expm1(x))


def _log_alpha_norm(alpha):
    """``log(1 - e^{2 alpha})``, zero in the Bunch-Davies limit."""
    if alpha == BUNCH_DAVIES:
        return 0.0
    return math.log(-math.expm1(2.0 * alpha))


def _log_squeeze(alpha, x):
    """``2 log(1 + e^{alpha + x})``."""
    if alpha == BUNCH_DAVIES:
        return 0.0
    return 2.0 * float(np.logaddexp(0.0, alpha + x))


def _exp_checked(x, what):
    if x > 709.0:
        raise DomainError(f"{what} exceed the floating-point range (log value {x:.4g})")
    return math.exp(x)


def power_spectrum(lam, params):
    """Fourier transform of the alpha-vacuum Wightman function at ``lam``.

    ``G(lam) = lam (1 + e^{alpha - pi lam})^2 / [2 pi (1 - e^{-lam/T}) (1 - e^{2 alpha})]``,
    reducing to ``lam / [2 pi (1 - e^{-lam/T})]`` for Bunch-Davies.
    """
    if lam == 0 or not math.isfinite(lam):
        raise DomainError(f"power spectrum requires finite nonzero frequency, got {lam!r}")
    T = params.temperature
    log_g = (
        math.log(abs(lam))
        + _log_squeeze(params.alpha, -math.pi * lam)
        - math.log(2.0 * math.pi)
        - _log_one_minus_exp_neg(lam / T)
        - _log_alpha_norm(params.alpha)
    )
    return _exp_checked(log_g, "power spectrum")


def bath_coefficients(params):
    """Coefficients ``A = [G(w) + G(-w)]/4`` and ``B = [G(w) - G(-w)]/4``.

    Evaluated from the closed-form expressions rather than by calling
    :func:`power_spectrum` twice; the two routes agree to round-off.
    """
    w, T = params.omega, params.temperature
    if params.is_bunch_davies:
        B = w / (8.0 * math.pi)
        return BathCoefficients(A=B / math.tanh(w / (2.0 * T)), B=B)

    alpha = params.alpha
    # A, B = w [t1 ± t2] / [8 pi (1 - e^{2 alpha}) (1 - e^{-w/T})]
    log_t1 = _log_squeeze(alpha, -math.pi * w)
    log_t2 = _log_squeeze(alpha, math.pi * w) - w / T
    log_den = math.log(8.0 * math.pi) + _log_alpha_norm(alpha) + math.log(-math.expm1(-w / T))
    m = max(log_t1, log_t2)
    e1, e2 = math.exp(log_t1 - m), math.exp(log_t2 - m)
    scale = _exp_checked(m + math.log(w) - log_den, "bath coefficients")
    return BathCoefficients(A=scale * (e1 + e2), B=scale * (e1 - e2))
