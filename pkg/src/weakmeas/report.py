"""Paired closed-form / oracle values with a disagreement flag."""

from __future__ import annotations

from dataclasses import dataclass

# Below this magnitude a relative difference is meaningless; fall back to absolute.
ABS_FALLBACK = 1e-6
DEFAULT_REL_TOL = 1e-6


@dataclass(frozen=True)
class MetricReport:
    """A scalar quantity computed along two independent routes.

    ``closed_form`` is the analytic expression, ``oracle`` the truncated
    Fock-space evaluation (``None`` when the oracle path is unavailable,
    e.g. behind a truncation guard).  ``rel_diff`` is relative to the
    oracle unless |oracle| < 1e-6, in which case it is the absolute
    difference.  ``flag`` is true iff ``rel_diff`` exceeds ``threshold``.
    """

    closed_form: complex
    oracle: complex | None
    abs_diff: float
    rel_diff: float
    flag: bool
    threshold: float = DEFAULT_REL_TOL

    @property
    def agree(self) -> bool:
        return not self.flag


def compare(closed_form: complex, oracle: complex | None,
            threshold: float = DEFAULT_REL_TOL) -> MetricReport:
    """Build a MetricReport for a closed-form value against its oracle."""
    if oracle is None:
        return MetricReport(closed_form, None, float("nan"), float("nan"), False, threshold)
    abs_diff = abs(closed_form - oracle)
    scale = abs(oracle)
    rel_diff = abs_diff if scale < ABS_FALLBACK else abs_diff / scale
    return MetricReport(closed_form, oracle, float(abs_diff), float(rel_diff),
                        bool(rel_diff > threshold), threshold)
