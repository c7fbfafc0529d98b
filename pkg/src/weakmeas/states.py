"""Pointer-state constructors: squeezed vacuum, photon-subtracted squeezed
vacuum (single mode), and the two-mode squeezed vacuum.

The analytic Fock coefficients used here follow the operator conventions
S(xi) = exp[(xi a^dag^2 - xi* a^2)/2] and S(chi) = exp(chi a^dag b^dag -
chi* a b); every constructor agrees with the matrix-exponential route
elementwise (the test suite checks this).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .fock import DEFAULT_TAIL_TOL, StateVector, _check_tail

# 1/sinh(r) diverges as r -> 0, so the photon-subtracted state needs r
# bounded away from zero.
R_MIN = 1e-6
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SqueezeParams:
    """Single-mode squeeze xi = r e^{i theta}, r >= R_MIN."""

    r: float
    theta: float = 0.0

    def __post_init__(self):
        if not self.r >= R_MIN:
            raise DomainError(f"need r >= {R_MIN:g}, got {self.r}")
        object.__setattr__(self, "theta", self.theta % TWO_PI)

    @property
    def xi(self) -> complex:
        return self.r * np.exp(1j * self.theta)


@dataclass(frozen=True)
class TwoModeSqueezeParams:
    """Two-mode squeeze chi = eta e^{i zeta}, eta >= 0."""

    eta: float
    zeta: float = 0.0

    def __post_init__(self):
        if self.eta < 0:
            raise DomainError(f"need eta >= 0, got {self.eta}")
        object.__setattr__(self, "zeta", self.zeta % TWO_PI)

    @property
    def chi(self) -> complex:
        return self.eta * np.exp(1j * self.zeta)


def squeezed_vacuum_coefficients(p: SqueezeParams, count: int) -> np.ndarray:
    """Even-level amplitudes of S(xi)|0>: entry m multiplies |2m>.

    amp_m = (e^{i theta} tanh r)^m sqrt((2m)!) / (2^m m! sqrt(cosh r)),
    evaluated in log space to stay finite for large m.
    """
    m = np.arange(count)
    lg2m = np.array([math.lgamma(2 * k + 1) for k in range(count)])
    lgm = np.array([math.lgamma(k + 1) for k in range(count)])
    logmag = (0.5 * lg2m - lgm - m * math.log(2.0)
              + m * math.log(math.tanh(p.r)) - 0.5 * math.log(math.cosh(p.r)))
    return np.exp(logmag) * np.exp(1j * m * p.theta)


def squeezed_vacuum(p: SqueezeParams, N: int,
                    tail_tol: float = DEFAULT_TAIL_TOL) -> StateVector:
    """Squeezed vacuum S(xi)|0> in the truncated basis, normalized."""
    amps = np.zeros(N, dtype=complex)
    coeffs = squeezed_vacuum_coefficients(p, (N + 1) // 2)
    amps[0:2 * len(coeffs):2] = coeffs
    amps /= np.linalg.norm(amps)
    return _check_tail(StateVector(1, N, amps), tail_tol)


def spssv_coefficients(p: SqueezeParams, count: int) -> np.ndarray:
    """Odd-level amplitudes of the photon-subtracted squeezed vacuum.

    Entry n multiplies |2n+1>:
    C_n = e^{i(n+1) theta} tanh^n(r) sqrt((2n+1)!) / (cosh^{3/2}(r) n! 2^n).
    The sequence is exactly normalized: sum |C_n|^2 = 1.
    """
    n = np.arange(count)
    lg = np.array([math.lgamma(2 * k + 2) for k in range(count)])
    lgn = np.array([math.lgamma(k + 1) for k in range(count)])
    logmag = (0.5 * lg - lgn - n * math.log(2.0)
              + n * math.log(math.tanh(p.r)) - 1.5 * math.log(math.cosh(p.r)))
    return np.exp(logmag) * np.exp(1j * (n + 1) * p.theta)


def spssv(p: SqueezeParams, N: int, tail_tol: float = DEFAULT_TAIL_TOL) -> StateVector:
    """Single-photon-subtracted squeezed vacuum  a S(xi)|0> / sinh(r).

    Support on odd levels only.  Equivalently computable by applying the
    annihilation operator to ``squeezed_vacuum`` and renormalizing; both
    routes agree elementwise.
    """
    amps = np.zeros(N, dtype=complex)
    coeffs = spssv_coefficients(p, N // 2)
    amps[1:2 * len(coeffs) + 1:2] = coeffs
    amps /= np.linalg.norm(amps)
    return _check_tail(StateVector(1, N, amps), tail_tol)


def tmsv_coefficients(p: TwoModeSqueezeParams, count: int) -> np.ndarray:
    """Diagonal amplitudes of S(chi)|0,0>: entry n multiplies |n,n>.

    c_n = (e^{i zeta} tanh eta)^n / cosh(eta).
    """
    n = np.arange(count)
    t = math.tanh(p.eta)
    return (t ** n) * np.exp(1j * n * p.zeta) / math.cosh(p.eta)


def tmsv(p: TwoModeSqueezeParams, N: int,
         tail_tol: float = DEFAULT_TAIL_TOL) -> StateVector:
    """Two-mode squeezed vacuum on the N^2 basis; support on |n,n> only."""
    m = np.zeros((N, N), dtype=complex)
    np.fill_diagonal(m, tmsv_coefficients(p, N))
    amps = m.reshape(-1)
    amps /= np.linalg.norm(amps)
    return _check_tail(StateVector(2, N, amps), tail_tol)
