"""Post-selected von Neumann measurement of a polarization qubit with a
radiation-field pointer.

The system observable is sigma_x; pre-selection is
|psi_i> = cos(alpha/2)|H> + e^{i delta} sin(alpha/2)|V>, post-selection |H>.
The qubit never appears explicitly: post-selection folds it into the
branch weights t_pm = 1 +/- w, where w = e^{i delta} tan(alpha/2) is the
weak value, leaving the (unnormalized) pointer state

    |Phi~> = (cos(alpha/2)/2) [t_+ D(s/2) + t_- D^dag(s/2)] |phi>.

For the two-mode pointer the displacement acts on mode a only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateSelectionError, OrthogonalSelectionError
from .fock import (
    DEFAULT_N_SINGLE,
    DEFAULT_N_TWO,
    StateVector,
    apply_mode_a,
    displacement_matrix,
    normalize,
)
from .report import DEFAULT_REL_TOL, MetricReport, compare
from .states import SqueezeParams, TwoModeSqueezeParams, spssv, tmsv

NORM_FLOOR = 1e-14


@dataclass(frozen=True)
class PrePostSelection:
    """Selection angles alpha in [0, pi), delta in [0, 2 pi)."""

    alpha: float
    delta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.alpha < math.pi:
            raise OrthogonalSelectionError(
                f"need 0 <= alpha < pi (overlap cos(alpha/2) != 0), got {self.alpha}")
        object.__setattr__(self, "delta", self.delta % (2.0 * math.pi))

    @property
    def overlap(self) -> float:
        """<psi_f|psi_i> = cos(alpha/2)."""
        return math.cos(self.alpha / 2.0)


@dataclass(frozen=True)
class CouplingConfig:
    """Dimensionless coupling strength s = g t / sigma (weak s<<1, strong s>>1).

    Optional g and sigma turn the dimensionless shift ratios into
    dimensionful displacements.
    """

    s: float
    g: float | None = None
    sigma: float | None = None

    def __post_init__(self):
        if self.s < 0:
            raise ValueError(f"need s >= 0, got {self.s}")
        if (self.g is None) != (self.sigma is None):
            raise ValueError("g and sigma must be provided together")
        if self.g is not None and (self.g <= 0 or self.sigma <= 0):
            raise ValueError("g and sigma must be positive")


@dataclass(frozen=True)
class WeakValue:
    """Weak value of sigma_x for the housed selection: e^{i delta} tan(alpha/2)."""

    value: complex

    @property
    def re(self) -> float:
        return self.value.real

    @property
    def im(self) -> float:
        return self.value.imag

    @property
    def t_plus(self) -> complex:
        return 1.0 + self.value

    @property
    def t_minus(self) -> complex:
        return 1.0 - self.value


def weak_value(sel: PrePostSelection) -> WeakValue:
    return WeakValue(np.exp(1j * sel.delta) * math.tan(sel.alpha / 2.0))


def abl_conditional(sel: PrePostSelection) -> float:
    """Conditional expectation of sigma_x between the selections: cos(delta) sin(alpha)."""
    return math.cos(sel.delta) * math.sin(sel.alpha)


# --------------------------------------------------------------------------
# displaced-state overlaps
# --------------------------------------------------------------------------

def displacement_in_squeezed_frame(cfg: CouplingConfig, p: SqueezeParams) -> complex:
    """beta = -s [cosh r - e^{i theta} sinh r]: D(-s) seen from inside S(xi)."""
    return -cfg.s * (math.cosh(p.r) - np.exp(1j * p.theta) * math.sinh(p.r))


def overlap_P(cfg: CouplingConfig, p: SqueezeParams) -> float:
    """<phi_1|D(+-s)|phi_1> = (1 - |beta|^2) exp(-|beta|^2 / 2).

    Real for every theta and identical for both displacement signs; goes
    negative once |beta| > 1 and decays to zero at large s.
    """
    b2 = abs(displacement_in_squeezed_frame(cfg, p)) ** 2
    return (1.0 - b2) * math.exp(-b2 / 2.0)


def overlap_K(cfg: CouplingConfig, p: TwoModeSqueezeParams) -> float:
    """<phi_2|D_a(+-s)|phi_2> = exp(-s^2 cosh(2 eta) / 2), in (0, 1]."""
    return math.exp(-cfg.s ** 2 * math.cosh(2.0 * p.eta) / 2.0)


def _branch_weight(sel: PrePostSelection, cfg: CouplingConfig, overlap: float) -> float:
    """1 + |w|^2 + (1 - |w|^2) * overlap — the bracket every normalizer shares."""
    w2 = abs(weak_value(sel).value) ** 2
    return 1.0 + w2 + (1.0 - w2) * overlap


# --------------------------------------------------------------------------
# final pointer states
# --------------------------------------------------------------------------

def suggest_truncation_single(s: float, r: float, N_min: int = DEFAULT_N_SINGLE) -> int:
    """Truncation comfortably above the support of the displaced squeezed pointer."""
    return max(N_min, int(math.ceil((s / 2.0 + 6.0 * math.exp(r)) ** 2)))


def suggest_truncation_two(s: float, eta: float, N_min: int = DEFAULT_N_TWO) -> int:
    return max(N_min, int(math.ceil((s / 2.0 + 5.0 * math.exp(eta)) ** 2)))


def branch_superposition_spssv(sel: PrePostSelection, cfg: CouplingConfig,
                               p: SqueezeParams, N: int | None = None) -> StateVector:
    """[t_+ D(s/2) + t_- D^dag(s/2)] |phi_1>, unnormalized."""
    N = N or DEFAULT_N_SINGLE
    wv = weak_value(sel)
    phi = spssv(p, N).amplitudes
    D = displacement_matrix(cfg.s / 2.0, N)
    amps = wv.t_plus * (D @ phi) + wv.t_minus * (D.conj().T @ phi)
    return StateVector(1, N, amps)


def branch_superposition_tmsv(sel: PrePostSelection, cfg: CouplingConfig,
                              p: TwoModeSqueezeParams, N: int | None = None) -> StateVector:
    """[t_+ D_a(s/2) + t_- D_a^dag(s/2)] |phi_2>, unnormalized; mode a only."""
    N = N or DEFAULT_N_TWO
    wv = weak_value(sel)
    phi = tmsv(p, N)
    D = displacement_matrix(cfg.s / 2.0, N)
    plus = apply_mode_a(D, phi).amplitudes
    minus = apply_mode_a(D.conj().T, phi).amplitudes
    return StateVector(2, N, wv.t_plus * plus + wv.t_minus * minus)


def _final_pointer(branches: StateVector) -> StateVector:
    if branches.norm() < NORM_FLOOR:
        raise DegenerateSelectionError("post-selection annihilates the pointer state")
    return normalize(branches)


def final_pointer_spssv(sel: PrePostSelection, cfg: CouplingConfig,
                        p: SqueezeParams, N: int | None = None) -> StateVector:
    """Normalized pointer state after post-selection, single-mode pointer."""
    return _final_pointer(branch_superposition_spssv(sel, cfg, p, N))


def final_pointer_tmsv(sel: PrePostSelection, cfg: CouplingConfig,
                       p: TwoModeSqueezeParams, N: int | None = None) -> StateVector:
    """Normalized pointer state after post-selection, two-mode pointer."""
    return _final_pointer(branch_superposition_tmsv(sel, cfg, p, N))


def normalizer_spssv(sel: PrePostSelection, cfg: CouplingConfig, p: SqueezeParams) -> float:
    """lambda: coefficient of the normalized branch superposition.

    lambda = (1/sqrt 2) [1 + |w|^2 + (1 - |w|^2) P]^{-1/2}; equals
    1 / ||t_+ D |phi_1> + t_- D^dag |phi_1>||.
    """
    return 1.0 / math.sqrt(2.0 * _branch_weight(sel, cfg, overlap_P(cfg, p)))


def normalizer_tmsv(sel: PrePostSelection, cfg: CouplingConfig, p: TwoModeSqueezeParams) -> float:
    """kappa, the two-mode analogue of lambda with K in place of P."""
    return 1.0 / math.sqrt(2.0 * _branch_weight(sel, cfg, overlap_K(cfg, p)))


# --------------------------------------------------------------------------
# success probabilities and transition values
# --------------------------------------------------------------------------

def success_prob_spssv_closed(sel: PrePostSelection, cfg: CouplingConfig,
                              p: SqueezeParams) -> float:
    """P_S = (cos^2(alpha/2) / 2) [1 + |w|^2 + (1 - |w|^2) P]."""
    return sel.overlap ** 2 / 2.0 * _branch_weight(sel, cfg, overlap_P(cfg, p))


def success_prob_tmsv_closed(sel: PrePostSelection, cfg: CouplingConfig,
                             p: TwoModeSqueezeParams) -> float:
    return sel.overlap ** 2 / 2.0 * _branch_weight(sel, cfg, overlap_K(cfg, p))


def success_prob_spssv(sel: PrePostSelection, cfg: CouplingConfig, p: SqueezeParams,
                       N: int | None = None,
                       threshold: float = DEFAULT_REL_TOL) -> MetricReport:
    """Closed-form P_S paired with the oracle norm of the post-selected state."""
    branches = branch_superposition_spssv(sel, cfg, p, N)
    oracle = (sel.overlap / 2.0) ** 2 * branches.norm() ** 2
    return compare(success_prob_spssv_closed(sel, cfg, p), oracle, threshold)


def success_prob_tmsv(sel: PrePostSelection, cfg: CouplingConfig, p: TwoModeSqueezeParams,
                      N: int | None = None,
                      threshold: float = DEFAULT_REL_TOL) -> MetricReport:
    branches = branch_superposition_tmsv(sel, cfg, p, N)
    oracle = (sel.overlap / 2.0) ** 2 * branches.norm() ** 2
    return compare(success_prob_tmsv_closed(sel, cfg, p), oracle, threshold)


def _transition_value(sel: PrePostSelection, overlap: float) -> complex:
    """2 [Re w + i overlap Im w] / [1 + |w|^2 + (1 - |w|^2) overlap].

    Interpolates from the weak value (overlap = 1 at s = 0) to the
    conditional expectation cos(delta) sin(alpha) (overlap -> 0).
    """
    w = weak_value(sel).value
    denom = 1.0 + abs(w) ** 2 + (1.0 - abs(w) ** 2) * overlap
    return 2.0 * (w.real + 1j * overlap * w.imag) / denom


def transition_value_spssv(sel: PrePostSelection, cfg: CouplingConfig,
                           p: SqueezeParams) -> complex:
    return _transition_value(sel, overlap_P(cfg, p))


def transition_value_tmsv(sel: PrePostSelection, cfg: CouplingConfig,
                          p: TwoModeSqueezeParams) -> complex:
    return _transition_value(sel, overlap_K(cfg, p))


def transition_value_spssv_oracle(sel: PrePostSelection, cfg: CouplingConfig,
                                  p: SqueezeParams, N: int | None = None) -> complex:
    """<Phi~|Psi'>/<Phi~|Phi~> with both vectors built in the truncated basis."""
    N = N or DEFAULT_N_SINGLE
    wv = weak_value(sel)
    phi = spssv(p, N).amplitudes
    D = displacement_matrix(cfg.s / 2.0, N)
    plus, minus = D @ phi, D.conj().T @ phi
    tilde = wv.t_plus * plus + wv.t_minus * minus
    flipped = wv.t_plus * plus - wv.t_minus * minus
    return complex(np.vdot(tilde, flipped) / np.vdot(tilde, tilde))


def transition_value_tmsv_oracle(sel: PrePostSelection, cfg: CouplingConfig,
                                 p: TwoModeSqueezeParams, N: int | None = None) -> complex:
    N = N or DEFAULT_N_TWO
    wv = weak_value(sel)
    phi = tmsv(p, N)
    D = displacement_matrix(cfg.s / 2.0, N)
    plus = apply_mode_a(D, phi).amplitudes
    minus = apply_mode_a(D.conj().T, phi).amplitudes
    tilde = wv.t_plus * plus + wv.t_minus * minus
    flipped = wv.t_plus * plus - wv.t_minus * minus
    return complex(np.vdot(tilde, flipped) / np.vdot(tilde, tilde))
