"""Non-classicality metrics of the post-selected pointer states.

Each metric comes in two routes: a reference closed form (analytic
expressions assembled from displaced-squeezed-frame brackets) and the
truncated Fock-space oracle.  The oracle is authoritative; the closed
forms are claims under test, and several of them are known to disagree
with the oracle away from s = 0 — the audit module records every
residual rather than hiding it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatchError
from .fock import (
    StateVector,
    annihilation_matrix,
    expectation,
    expectation_two,
    laguerre_assoc,
    number_matrix,
)
from .measurement import (
    CouplingConfig,
    PrePostSelection,
    displacement_in_squeezed_frame,
    final_pointer_spssv,
    final_pointer_tmsv,
    normalizer_spssv,
    normalizer_tmsv,
    overlap_K,
    weak_value,
)
from .report import DEFAULT_REL_TOL, MetricReport, compare
from .states import SqueezeParams, TwoModeSqueezeParams, spssv_coefficients


@dataclass(frozen=True)
class SingleModeExpectations:
    """<a>, <a^2>, <a^dag a>, <a^dag^2 a^2> on a single-mode state."""

    a: complex
    a2: complex
    n: float
    a2dag_a2: float


@dataclass(frozen=True)
class TwoModeExpectations:
    """<n_a>, <n_b>, <ab>, <n_a n_b>, <a^2 b^2> on a two-mode state."""

    na: float
    nb: float
    ab: complex
    na_nb: float
    a2b2: complex


# --------------------------------------------------------------------------
# oracle routes
# --------------------------------------------------------------------------

def expectations_oracle_single(state: StateVector) -> SingleModeExpectations:
    if state.modes != 1:
        raise DimensionMismatchError("expected a single-mode state")
    a = annihilation_matrix(state.truncation)
    a2 = a @ a
    return SingleModeExpectations(
        a=expectation(state, a),
        a2=expectation(state, a2),
        n=expectation(state, number_matrix(state.truncation)).real,
        a2dag_a2=expectation(state, a2.conj().T @ a2).real,
    )


def fourth_moment_oracle(state: StateVector) -> complex:
    """<a^4>; no closed form is provided for it, so it is oracle-only."""
    a = annihilation_matrix(state.truncation)
    return expectation(state, np.linalg.matrix_power(a, 4))


def expectations_oracle_two(state: StateVector) -> TwoModeExpectations:
    if state.modes != 2:
        raise DimensionMismatchError("expected a two-mode state")
    N = state.truncation
    a = annihilation_matrix(N)
    n = number_matrix(N)
    eye = np.eye(N, dtype=complex)
    a2 = a @ a
    return TwoModeExpectations(
        na=expectation_two(state, n, eye).real,
        nb=expectation_two(state, eye, n).real,
        ab=expectation_two(state, a, a),
        na_nb=expectation_two(state, n, n).real,
        a2b2=expectation_two(state, a2, a2),
    )


def expectations_oracle_spssv(sel: PrePostSelection, cfg: CouplingConfig,
                              p: SqueezeParams, N: int | None = None) -> SingleModeExpectations:
    return expectations_oracle_single(final_pointer_spssv(sel, cfg, p, N))


def expectations_oracle_tmsv(sel: PrePostSelection, cfg: CouplingConfig,
                             p: TwoModeSqueezeParams, N: int | None = None) -> TwoModeExpectations:
    return expectations_oracle_two(final_pointer_tmsv(sel, cfg, p, N))


# --------------------------------------------------------------------------
# reference closed forms, single mode
# --------------------------------------------------------------------------

def _brackets_single(s: float, p: SqueezeParams):
    """Auxiliary bracket functions of the closed single-mode moments.

    All five share the damping factor exp(-|b|^2/2), with
    b = -s [cosh r - e^{i theta} sinh r] the displacement seen from
    inside the squeezed frame.
    """
    b = displacement_in_squeezed_frame(CouplingConfig(s), p)
    b2 = b * b
    ab2 = abs(b) ** 2
    eth = np.exp(1j * p.theta)
    emth = np.exp(-1j * p.theta)
    ch, sh = math.cosh(p.r), math.sinh(p.r)
    cth = ch / sh
    damp = math.exp(-ab2 / 2.0)

    amp_cross = (b * ch * (b2 * emth * cth + 3.0)
                 + s / 2.0 * (2.0 * b2 * emth * cth - ab2 + 3.0)) * damp

    sq_cross = (b2 * ch ** 2 * (b2 * emth * cth + 6.0) + 1.5 * eth * math.sinh(2 * p.r)
                - 2.0 * s * b * ch * (b2 * emth * cth + 3.0)
                + s ** 2 / 4.0 * (2.0 * b2 * emth * cth - ab2 + 3.0)) * damp

    num_cross = (b2 * emth * (cth * ch ** 2 + 2.5 * math.sinh(2 * p.r) + b2 * emth * ch ** 2)
                 + 1.0 + 3.0 * sh ** 2
                 + 1.5 * s * b * emth * ((cth + b2 * emth) * ch + 3.0 * sh)
                 + s ** 2 / 2.0 * emth * (cth + b2 * emth)
                 + s / 2.0 * b * ch * (emth * b2 * cth + 3.0)
                 + s ** 2 / 4.0 * (2.0 * b2 * emth * cth - ab2 + 3.0)) * damp

    num2_direct = (3.0 * sh ** 2 * (3.0 + 5.0 * sh ** 2)
                   + s ** 2 / 2.0 * (1.5 * math.cos(p.theta) * math.sinh(2 * p.r)
                                     + 2.0 * (1.0 + 3.0 * sh ** 2))
                   + s ** 4 / 16.0) * damp

    em2 = np.exp(-2j * p.theta)
    em3 = np.exp(-3j * p.theta)
    c1 = (b2 * emth * ch * (b2 ** 2 * em2 * sh * ch ** 2
                            + 3.0 * b2 * emth * ch * (1.0 + 5.0 * sh ** 2)
                            + 9.0 * sh * (2.0 + 5.0 * sh ** 2))
          + 3.0 * sh ** 2 * (3.0 + 5.0 * sh ** 2))
    c2 = (b ** 5 * em3 * sh * ch ** 2 + b ** 3 * em2 * ch * (3.0 + 10.0 * sh ** 2)
          + 3.0 * b * emth * sh * (3.0 + 5.0 * sh ** 2))
    c3 = emth * (b2 ** 2 * em2 / 2.0 * math.sinh(2 * p.r)
                 + 3.0 * b2 * emth * math.cosh(2 * p.r) + 1.5 * math.sinh(2 * p.r))
    c4 = (b ** 5 * em2 * ch ** 3 + b ** 3 * emth * ch ** 2 * (ch * cth + 9.0 * sh)
          + 3.0 * b * ch * (ch ** 2 + 4.0 * sh ** 2))
    c5 = b * em2 * (b2 * emth * sh + 3.0 * ch)
    c6 = b * ch * (b2 * emth * cth + 3.0)
    c7 = b2 * emth * cth + 1.0
    c8 = b2 * ch ** 2 * (b2 * emth * cth + 6.0) + 1.5 * eth * math.sinh(2 * p.r)
    c9 = b2 * emth * (cth * ch ** 2 + 5.0 * sh * ch + b2 * emth * ch ** 2) + 1.0 + 3.0 * sh ** 2
    c10 = b * emth * (1.0 / sh + 3.0 * sh + b2 * emth * ch)
    c11 = emth * (cth + b2 * emth)
    num2_cross = ((c1 + s * c2) + s * ((c2 + s * c3) + (c4 + s * c9))
                  + s ** 2 / 4.0 * ((c3 + s * c5) + (c8 + s * c6) + 4.0 * (c9 + s * c10))
                  + s ** 3 / 4.0 * ((c10 + s * c11) + (c6 + s * c7))
                  + s ** 4 / 16.0) * damp

    return amp_cross, sq_cross, num_cross, num2_direct, num2_cross


def expectations_closed_spssv(sel: PrePostSelection, cfg: CouplingConfig,
                              p: SqueezeParams) -> SingleModeExpectations:
    """Reference closed-form moments of the post-selected single-mode pointer.

    Exact at s = 0 and, for <a>, whenever delta = 0; elsewhere audited
    against the oracle (known residuals are recorded by the audit).
    """
    w = weak_value(sel).value
    aw2 = abs(w) ** 2
    two_lam2 = 2.0 * normalizer_spssv(sel, cfg, p) ** 2
    amp_cross, sq_cross, num_cross, num2_direct, num2_cross = _brackets_single(cfg.s, p)
    a = two_lam2 * (w.real * cfg.s - 1j * w.imag * amp_cross)
    a2 = two_lam2 * (0.5 * (1.0 + aw2) * (3.0 * np.exp(1j * p.theta) * math.sinh(2 * p.r)
                                          + cfg.s ** 2 / 2.0)
                     + (1.0 - aw2) * sq_cross.real)
    n = two_lam2 * ((1.0 + aw2) * (1.0 + 3.0 * math.sinh(p.r) ** 2 + cfg.s ** 2 / 4.0)
                    + (1.0 - aw2) * num_cross.real)
    n2 = two_lam2 * ((1.0 + aw2) * num2_direct + 2.0 * (1.0 - aw2) * num2_cross.real)
    return SingleModeExpectations(a=complex(a), a2=complex(a2), n=float(n.real),
                                  a2dag_a2=float(n2.real))


# --------------------------------------------------------------------------
# reference closed forms, two modes
# --------------------------------------------------------------------------

def expectations_closed_tmsv(sel: PrePostSelection, cfg: CouplingConfig,
                             p: TwoModeSqueezeParams) -> TwoModeExpectations:
    """Reference closed-form moments of the post-selected two-mode pointer.

    The shared prefactor is |kappa|^2 = 2 / [1 + |w|^2 + (1 - |w|^2) K],
    i.e. four times the squared normalization coefficient.  <n_a> is exact;
    the remaining four moments carry known defects audited downstream.
    """
    w = weak_value(sel).value
    aw2 = abs(w) ** 2
    s = cfg.s
    K = overlap_K(cfg, p)
    kap2 = 4.0 * normalizer_tmsv(sel, cfg, p) ** 2
    sh, ch = math.sinh(p.eta), math.cosh(p.eta)
    sh2, ch2 = math.sinh(2 * p.eta), math.cosh(2 * p.eta)

    na = kap2 / 2.0 * ((1 + aw2) * (sh ** 2 + s ** 2 / 4)
                       + (1 - aw2) * (sh ** 2 * (1 - s ** 2 * ch ** 2) - s ** 2 / 4) * K)
    nb = kap2 / 2.0 * ((1 + aw2) * (sh ** 2 + s ** 2 / 4)
                       + (1 - aw2) * (sh ** 2 * (1 - s ** 2 * ch ** 2) + s ** 2 / 4) * K)
    ab = kap2 / 4.0 * ((1 - aw2) * (sh2 * (1 - s ** 2 * ch ** 2)
                                    - s ** 2 * (ch ** 2 - 0.5 * sh2 + 0.5)) * K
                       + (1 + aw2) * (sh2 + s ** 2 / 2))

    j0 = sh ** 2 * ch2 + s ** 4 / 16 + s ** 2 / 2 * sh * (sh + ch)
    j1 = sh ** 2 * ch2 + s ** 2 * sh2 ** 2 / 4 * (s ** 2 / 4 * sh2 ** 2 - 4 * sh ** 2 - 1)
    j2 = s * sh2 / 8 * (4 * ch2 - s ** 2 * sh2 ** 2)
    j3 = s * sh2 * sh ** 2 / 2 * (s ** 2 * ch ** 2 - 2)
    j4 = sh ** 2 * (s ** 2 * sh ** 2 * ch ** 2 - ch2)
    j5 = s * sh2 ** 2 / 4 * (2 - s ** 2 * ch ** 2)
    na_nb = kap2 / 2.0 * ((1 + aw2) * j0
                          + (1 - aw2) * (j1 - s / 2 * (j2 + j3 + j4 + j5)
                                         + s ** 2 / 4 * (2 * sh ** 2 * (1 - s ** 2 * ch ** 2) + sh2)
                                         - s ** 4 / 16) * K)

    u0 = sh2 ** 2 / 4 * (s ** 4 * ch ** 4 - 4 * s ** 2 * ch ** 2 + 2) * K
    u1 = s * sh2 * ch ** 2 / 2 * (2 - s ** 2 * ch ** 2) * K
    u2 = K * s ** 2 * ch ** 4
    u3 = K * s ** 2 * sh2 ** 2 / 4
    u4 = sh2 / 2 * (1 - s ** 2 * ch ** 2) * K
    a2b2 = kap2 / 2.0 * ((1 + aw2) * 0.5 * (sh2 * (1 + s ** 2) + s ** 4 / 8)
                         + (1 - aw2) * (u0 - s * (u1 + j5) + s ** 2 / 4 * (u2 + u3 + 4 * u4)
                                        - s ** 4 / 4 * (ch * (ch - sh) + 0.25) * K))
    return TwoModeExpectations(na=float(na), nb=float(nb), ab=complex(ab),
                               na_nb=float(na_nb), a2b2=complex(a2b2))


# --------------------------------------------------------------------------
# skew information
# --------------------------------------------------------------------------

def skew_information(state: StateVector) -> float:
    """1/2 + <a^dag a> - |<a>|^2 for a pure single-mode state.

    Bounded below by 1/2, with equality exactly on coherent states.
    """
    if state.modes != 1:
        raise DimensionMismatchError("skew information is defined here for one mode")
    e = expectations_oracle_single(state)
    return 0.5 + e.n - abs(e.a) ** 2


def skew_from_expectations(e: SingleModeExpectations) -> float:
    return 0.5 + e.n - abs(e.a) ** 2


def skew_closed_spssv(sel: PrePostSelection, cfg: CouplingConfig, p: SqueezeParams,
                      N: int | None = None,
                      threshold: float = DEFAULT_REL_TOL) -> MetricReport:
    """Closed-form skew information of the post-selected pointer vs the oracle."""
    closed = skew_from_expectations(expectations_closed_spssv(sel, cfg, p))
    oracle = skew_information(final_pointer_spssv(sel, cfg, p, N))
    return compare(closed, oracle, threshold)


def skew_initial_spssv(p: SqueezeParams) -> float:
    """Skew information of the pointer before any coupling: 3 (1/2 + sinh^2 r)."""
    return 3.0 * (0.5 + math.sinh(p.r) ** 2)


# --------------------------------------------------------------------------
# amplitude-squared squeezing
# --------------------------------------------------------------------------

def as_squeezing(e: SingleModeExpectations, a4: complex) -> float:
    """Normalized amplitude-squared squeezing factor.

    [<a^dag^2 a^2> - |<a^2>|^2 - |<a^4> - <a^2>^2|] / (<a^dag a>/2 + 1);
    negative values signal squeezing of the squared field amplitude.  The
    sharp lower bound implied by non-negative variances is
    -4 (<n> + 1/2) / (<n> + 2), which lies in (-4, -1].
    """
    num = e.a2dag_a2 - abs(e.a2) ** 2 - abs(a4 - e.a2 ** 2)
    return num / (0.5 * e.n + 1.0)


def as_oracle(state: StateVector) -> float:
    return as_squeezing(expectations_oracle_single(state),
                        fourth_moment_oracle(state))


def as_closed_s0(p: SqueezeParams) -> float:
    """Reference closed form of the uncoupled pointer's squeezing factor.

    sech(2r) [sinh^2 r (3 + 5 sinh^2 r) - (5/4) e^{-2 theta} sinh^2(2r)],
    with the e^{-2 theta} factor implemented verbatim (it equals 1 at
    theta = 0, the only phase at which this expression is certified; the
    oracle disagrees with it quantitatively even there, which the audit
    records).
    """
    sh2 = math.sinh(p.r) ** 2
    return (1.0 / math.cosh(2 * p.r)) * (sh2 * (3.0 + 5.0 * sh2)
                                         - 1.25 * math.exp(-2.0 * p.theta)
                                         * math.sinh(2 * p.r) ** 2)


# --------------------------------------------------------------------------
# sum squeezing
# --------------------------------------------------------------------------

def sum_squeezing_from_moments(e: TwoModeExpectations, Theta: float) -> float:
    """Degree of two-mode sum squeezing assembled from moments.

    2 [Re(e^{-2i Theta} <a^2 b^2>) - 2 Re(e^{-i Theta} <ab>)^2 + <n_a n_b>]
    / (<n_a> + <n_b> + 1); equals 4 Var(V_Theta)/<n_a+n_b+1> - 1 for
    V_Theta = (e^{i Theta} a^dag b^dag + e^{-i Theta} a b)/2.  S >= -1,
    and S < 0 signals sum squeezing.
    """
    num = 2.0 * ((np.exp(-2j * Theta) * e.a2b2).real
                 - 2.0 * ((np.exp(-1j * Theta) * e.ab).real) ** 2
                 + e.na_nb)
    return float(num / (e.na + e.nb + 1.0))


def sum_squeezing(state: StateVector, Theta: float) -> float:
    """Oracle sum-squeezing degree of a two-mode state."""
    if state.modes != 2:
        raise DimensionMismatchError("sum squeezing needs a two-mode state")
    return sum_squeezing_from_moments(expectations_oracle_two(state), Theta)


def sum_closed(sel: PrePostSelection, cfg: CouplingConfig, p: TwoModeSqueezeParams,
               Theta: float, N: int | None = None,
               threshold: float = DEFAULT_REL_TOL) -> MetricReport:
    """Closed-form sum squeezing (from the closed moments) vs the oracle."""
    closed = sum_squeezing_from_moments(expectations_closed_tmsv(sel, cfg, p), Theta)
    oracle = sum_squeezing(final_pointer_tmsv(sel, cfg, p, N), Theta)
    return compare(closed, oracle, threshold)


def sum_squeezing_s0(p: TwoModeSqueezeParams, Theta: float) -> float:
    """Closed form for the uncoupled two-mode pointer (exact).

    sinh^2(2 eta) [cos(2 Theta) - cos^2 Theta] / (1 + 2 sinh^2 eta)
    + 2 sinh^2 eta.
    """
    sh2 = math.sinh(p.eta) ** 2
    return (math.sinh(2 * p.eta) ** 2 * (math.cos(2 * Theta) - math.cos(Theta) ** 2)
            / (1.0 + 2.0 * sh2) + 2.0 * sh2)


# --------------------------------------------------------------------------
# photon statistics
# --------------------------------------------------------------------------

def photon_dist_oracle(state: StateVector) -> np.ndarray:
    """P(n) = |amplitude_n|^2; sums to 1 minus the truncation tail."""
    if state.modes != 1:
        raise DimensionMismatchError("photon distribution here is single mode")
    return np.abs(state.amplitudes) ** 2


def photon_dist_closed(sel: PrePostSelection, cfg: CouplingConfig, p: SqueezeParams,
                       n_max: int) -> np.ndarray:
    """Reference closed-form photon distribution, implemented verbatim.

    P(n) = |lambda C_n (t_+ I_+ + t_- I_-)|^2 with
    I_pm = sqrt(n!/(2n+1)!) e^{-s^2/8} (-/+ s/2)^{n+1} L_n^{n+1}(s^2/4).

    This expression pairs each n with the single source level 2n+1, so it
    is NOT the squared amplitude of the post-selected state (which mixes
    all source levels); in particular it returns all zeros at s = 0.  The
    oracle route gives the true distribution; the audit records the gap.
    """
    wv = weak_value(sel)
    lam = normalizer_spssv(sel, cfg, p)
    s = cfg.s
    coeffs = spssv_coefficients(p, n_max + 1)
    out = np.zeros(n_max + 1)
    x = s ** 2 / 4.0
    for n in range(n_max + 1):
        root = math.exp(0.5 * (math.lgamma(n + 1) - math.lgamma(2 * n + 2)))
        lag = laguerre_assoc(n, n + 1, x)
        base = root * math.exp(-s ** 2 / 8.0) * lag
        i_plus = base * (-s / 2.0) ** (n + 1)
        i_minus = base * (+s / 2.0) ** (n + 1)
        out[n] = abs(lam * coeffs[n] * (wv.t_plus * i_plus + wv.t_minus * i_minus)) ** 2
    return out
