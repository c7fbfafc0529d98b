"""The closed-form-vs-oracle audit: complete coverage, honest flags."""

import math

import pytest

from weakmeas.audit import (
    DEFAULT_ALPHAS,
    DEFAULT_COUPLINGS,
    DEFAULT_SQUEEZES,
    audit_appendix,
    audit_overlaps,
    audit_photon,
    audit_transition,
    flagged,
    records_to_rows,
    run_audit,
)
from weakmeas.exceptions import ConfigError

GRID = len(DEFAULT_ALPHAS) * len(DEFAULT_COUPLINGS) * len(DEFAULT_SQUEEZES)


def test_overlap_audit_is_clean():
    records = audit_overlaps()
    assert len(records) == GRID * 6
    assert not flagged(records)  # P, K, lambda, kappa, P_S, P_T are all exact


def test_transition_audit_flags_only_lambda2():
    records = audit_transition()
    assert len(records) == GRID * 4
    bad = {r.quantity for r in flagged(records)}
    assert bad == {"Lambda_2"}
    # at delta = 0 the defective closed Lambda_2 keeps a spurious real part
    for r in flagged(records):
        assert abs(r.report.closed_form.real) > 0.0


def test_appendix_audit_records_known_defects():
    records = audit_appendix()
    assert len(records) == GRID * 9
    by_quantity = {}
    for r in records:
        by_quantity.setdefault(r.quantity, []).append(r)
    # exact at delta = theta = zeta = 0
    assert not any(r.flag for r in by_quantity["single.a"])
    assert not any(r.flag for r in by_quantity["two.na"])
    # <a^2> and <n> defects live in the cross bracket, which carries a
    # (1 - |w|^2) weight: they vanish exactly at alpha = pi/2 (|w| = 1)
    # and flag everywhere else on the grid
    half = math.pi / 2.0
    for name in ("single.a2", "single.n"):
        for r in by_quantity[name]:
            assert r.flag == (r.params["alpha"] != half), (name, r.params)
    # these carry defects in the direct bracket too: flagged at every point
    for name in ("single.a2dag_a2", "two.nb", "two.ab", "two.na_nb", "two.a2b2"):
        assert all(r.flag for r in by_quantity[name]), name
    # every flagged record carries a finite recorded residual
    for r in flagged(records):
        assert math.isfinite(r.report.rel_diff) and r.report.rel_diff > 0.0


def test_photon_audit_documents_uncoupled_gap():
    records = audit_photon()
    assert all(r.report.closed_form == 0.0 for r in records)
    odd = [r for r in records if r.params["n"] % 2 == 1]
    assert all(r.flag for r in odd)   # oracle weight on odd levels, closed says 0
    even = [r for r in records if r.params["n"] % 2 == 0]
    assert not any(r.flag for r in even)


def test_run_audit_presets():
    with pytest.raises(ConfigError):
        run_audit("bogus")
    records = run_audit("overlaps")
    assert len(records) == GRID * 6


def test_rows_are_flat_and_complete():
    records = audit_transition(alphas=(math.pi / 3,), couplings=(0.5,), squeezes=(0.2,))
    rows = records_to_rows(records)
    assert len(rows) == 4
    for row in rows:
        assert {"quantity", "alpha", "s", "closed_re", "oracle_re", "rel_diff", "flag"} <= set(row)


def test_full_audit_zero_silent_failures():
    records = run_audit("all")
    # one record per quantity per grid point, every one evaluated both ways
    expected = GRID * 6 + GRID * 4 + GRID * 9 + len(DEFAULT_ALPHAS) * len(DEFAULT_SQUEEZES) * 9
    assert len(records) == expected
    for r in records:
        assert r.report.oracle is not None
        assert math.isfinite(abs(r.report.closed_form))
        assert r.flag == (r.report.rel_diff > r.report.threshold)
