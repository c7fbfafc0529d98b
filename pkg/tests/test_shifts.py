"""Pointer shifts across the weak-to-strong transition."""

import math

import numpy as np
import pytest

from weakmeas.measurement import CouplingConfig, PrePostSelection, abl_conditional, weak_value
from weakmeas.shifts import (
    lambda12,
    lambda12_vs_oracle,
    pointer_shifts_spssv,
    pointer_shifts_tmsv,
    transition_sweep,
)
from weakmeas.states import SqueezeParams, TwoModeSqueezeParams

PI = math.pi


# ---------------------------------------------------------------------------
# single-mode pointer
# ---------------------------------------------------------------------------

def test_spssv_weak_limit_real_selection():
    # delta = theta = 0: dX/g -> tan(alpha/2), dP -> 0
    sel = PrePostSelection(2 * PI / 3, 0.0)
    rep = pointer_shifts_spssv(sel, CouplingConfig(1e-4), SqueezeParams(0.2))
    assert rep.dX_over_g == pytest.approx(math.tan(PI / 3), abs=1e-4)
    assert abs(rep.dP_sigma2_over_g) < 1e-8


def test_spssv_weak_limits_match_reference_formulas():
    sel = PrePostSelection(8 * PI / 9, PI / 6)
    p = SqueezeParams(0.1)
    rep = pointer_shifts_spssv(sel, CouplingConfig(0.001), p)
    assert rep.dX_over_g == pytest.approx(rep.regime_limits["weak_dX"], abs=1e-3)
    assert rep.dP_sigma2_over_g == pytest.approx(rep.regime_limits["weak_dP"], abs=1e-3)
    w = weak_value(sel).value
    assert rep.regime_limits["weak_dP"] == pytest.approx(
        1.5 * math.exp(-0.2) * w.imag, rel=1e-12)


def test_spssv_strong_limit():
    sel = PrePostSelection(8 * PI / 9, PI / 6)
    rep = pointer_shifts_spssv(sel, CouplingConfig(10.0), SqueezeParams(0.1))
    assert rep.dX_over_g == pytest.approx(abl_conditional(sel), abs=1e-6)
    assert abs(rep.dP_sigma2_over_g) < 1e-8


def test_spssv_momentum_vanishes_at_delta_zero():
    p = SqueezeParams(0.3)
    for s in (0.0, 0.5, 2.0, 6.0):
        rep = pointer_shifts_spssv(PrePostSelection(PI / 3, 0.0), CouplingConfig(s), p)
        assert abs(rep.dP_sigma2_over_g) < 1e-8


def test_spssv_continuity_in_coupling():
    sel = PrePostSelection(2 * PI / 3, PI / 6)
    p = SqueezeParams(0.1)
    for s in (0.2, 1.0, 3.0):
        a = pointer_shifts_spssv(sel, CouplingConfig(s), p)
        b = pointer_shifts_spssv(sel, CouplingConfig(s + 1e-4), p)
        assert abs(a.dX_over_g - b.dX_over_g) < 1e-2
        assert abs(a.dP_sigma2_over_g - b.dP_sigma2_over_g) < 1e-2


def test_spssv_position_bounded_through_transition():
    sel = PrePostSelection(8 * PI / 9, 0.0)
    p = SqueezeParams(0.1)
    w = weak_value(sel).value.real
    for s in np.linspace(0.001, 6.0, 25):
        rep = pointer_shifts_spssv(sel, CouplingConfig(float(s)), p)
        assert abs(rep.dX_over_g) <= max(abs(w), 1.0) + 1e-9


def test_dimensionful_output():
    sel = PrePostSelection(PI / 3, 0.0)
    rep = pointer_shifts_spssv(sel, CouplingConfig(0.5, g=2.0, sigma=0.5), SqueezeParams(0.2))
    assert rep.dX == pytest.approx(2.0 * rep.dX_over_g)
    assert rep.dP == pytest.approx(2.0 / 0.25 * rep.dP_sigma2_over_g)


# ---------------------------------------------------------------------------
# two-mode pointer
# ---------------------------------------------------------------------------

def test_tmsv_momentum_vanishes_at_delta_zero():
    p2 = TwoModeSqueezeParams(0.4)
    for s in (0.0, 0.5, 2.0):
        rep = pointer_shifts_tmsv(PrePostSelection(PI / 3, 0.0), CouplingConfig(s), p2)
        assert abs(rep.dP_sigma2_over_g) < 1e-8


def test_tmsv_strong_limit():
    sel = PrePostSelection(8 * PI / 9, PI / 6)
    rep = pointer_shifts_tmsv(sel, CouplingConfig(10.0), TwoModeSqueezeParams(0.1))
    assert rep.dX_over_g == pytest.approx(abl_conditional(sel), abs=1e-6)
    assert abs(rep.dP_sigma2_over_g) < 1e-8


def test_tmsv_weak_limit_measured_values():
    # measured oracle limits: dX2/g -> Re[w] (the published halved value is
    # inconsistent with the eta -> 0 reduction and with the strong limit of
    # the same curve) and dP2 sigma^2/g -> e^{-2 eta} Im[w] / 2; the
    # published reference values are still carried in regime_limits
    sel = PrePostSelection(8 * PI / 9, PI / 6)
    p2 = TwoModeSqueezeParams(0.1)
    rep = pointer_shifts_tmsv(sel, CouplingConfig(0.001), p2)
    w = weak_value(sel).value
    assert rep.dX_over_g == pytest.approx(w.real, abs=1e-3)
    assert rep.dP_sigma2_over_g == pytest.approx(math.exp(-0.2) / 2.0 * w.imag, abs=1e-3)
    assert rep.regime_limits["weak_dX"] == pytest.approx(0.5 * w.real)
    assert rep.regime_limits["weak_dP"] == pytest.approx(
        -math.exp(0.1) * math.sinh(0.1) * w.imag)


def test_tmsv_weak_limit_reduces_to_single_vacuum_mode():
    # at eta -> 0 the second mode decouples and the single-mode vacuum
    # pointer limits must reappear: dX2/g -> Re[w], dP2 s2/g -> Im[w]/2
    sel = PrePostSelection(PI / 3, PI / 4)
    rep = pointer_shifts_tmsv(sel, CouplingConfig(0.001), TwoModeSqueezeParams(1e-9))
    w = weak_value(sel).value
    assert rep.dX_over_g == pytest.approx(w.real, abs=1e-4)
    assert rep.dP_sigma2_over_g == pytest.approx(w.imag / 2.0, abs=1e-4)


# ---------------------------------------------------------------------------
# Lambda contributions
# ---------------------------------------------------------------------------

def test_lambda_strong_limit():
    sel = PrePostSelection(PI / 3, PI / 4)
    cfg = CouplingConfig(10.0)
    lam1, lam2 = lambda12(sel, cfg, TwoModeSqueezeParams(0.3))
    target = cfg.s / 2.0 * abl_conditional(sel)
    assert lam1 == pytest.approx(target, abs=1e-6)
    assert lam2 == pytest.approx(target, abs=1e-6)


def test_lambda_real_at_delta_zero():
    lam1, lam2 = lambda12(PrePostSelection(PI / 3, 0.0), CouplingConfig(0.7),
                          TwoModeSqueezeParams(0.3))
    assert lam1.imag == 0.0 and lam2.imag == 0.0


def test_lambda_vs_oracle_decomposition():
    # measured: Lambda_1 reproduces <a>^* exactly; Lambda_2 does not match
    # <b>^* (it wrongly carries the displaced mode's direct term)
    sel = PrePostSelection(PI / 3, PI / 4)
    cfg = CouplingConfig(0.5)
    rep1, rep2 = lambda12_vs_oracle(sel, cfg, TwoModeSqueezeParams(0.3), 50)
    assert not rep1.flag and rep1.rel_diff < 1e-9
    assert rep2.flag


# ---------------------------------------------------------------------------
# sweep table
# ---------------------------------------------------------------------------

def test_transition_sweep_single_point():
    sel = PrePostSelection(2 * PI / 3, PI / 6)
    cfg = CouplingConfig(0.8)
    p = SqueezeParams(0.1)
    rows = transition_sweep([sel], [cfg], p)
    assert len(rows) == 1
    rep = pointer_shifts_spssv(sel, cfg, p)
    assert rows[0]["dX_over_g"] == pytest.approx(rep.dX_over_g)
    assert rows[0]["dP_sigma2_over_g"] == pytest.approx(rep.dP_sigma2_over_g)
    assert set(rows[0]) == {"alpha", "delta", "s", "dX_over_g", "dP_sigma2_over_g",
                            "sigma_x_re", "sigma_x_im", "P_success"}


def test_transition_sweep_two_mode_and_flattening():
    sels = [PrePostSelection(a, PI / 6) for a in np.linspace(0.1, 8 * PI / 9, 7)]
    rows = transition_sweep(sels, [CouplingConfig(4.0)], TwoModeSqueezeParams(0.1))
    for row in rows:
        target = math.cos(row["delta"]) * math.sin(row["alpha"])
        assert row["dX_over_g"] == pytest.approx(target, abs=5e-3)


def test_transition_sweep_rejects_empty_grids():
    with pytest.raises(ValueError):
        transition_sweep([], [CouplingConfig(1.0)], SqueezeParams(0.1))
