"""Husimi Q functions of the initial and post-selected pointer states.

Q(mu) = |<mu|Phi>|^2 / pi (single mode) and
Q(mu1, mu2) = |<mu1, mu2|Phi>|^2 / pi^2 (two modes), evaluated along two
routes: an analytic closed form built from displaced squeezed-state
overlaps, and the truncated-basis oracle via coherent-state projection.
The single-mode closed form is certified against the oracle at theta = 0
only (its phase factors do not extend consistently to theta != 0, which
the pointwise reports flag); the two-mode closed form is exact for any
zeta.

Grid evaluation is vectorized and embarrassingly parallel: every point is
an independent pure function of the inputs, chunks are farmed to a thread
pool, and the assembled result is bit-identical to sequential evaluation.
"""

from __future__ import annotations

import io
import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import maximum_filter

from .exceptions import ConfigError, TruncationRiskError
from .fock import DEFAULT_N_SINGLE, DEFAULT_N_TWO, StateVector
from .measurement import (
    CouplingConfig,
    PrePostSelection,
    final_pointer_spssv,
    final_pointer_tmsv,
    normalizer_spssv,
    normalizer_tmsv,
    suggest_truncation_single,
    suggest_truncation_two,
    weak_value,
)
from .report import DEFAULT_REL_TOL, MetricReport, compare
from .states import SqueezeParams, TwoModeSqueezeParams

DEFAULT_REGION = ((-6.0, 6.0), (-6.0, 6.0))
DEFAULT_RESOLUTION = 201

_BINARY_HEADER_LEN = 8  # float64 values: modes, res_x, res_y, x0, x1, y0, y1, reserved


@dataclass(frozen=True)
class PhaseGrid:
    """Rectangular grid of phase-space points with per-point Q values.

    ``values[i, j]`` belongs to (x_axis[i], y_axis[j]).  For two-mode
    slices the axes are the two swept real coordinates and ``slice_spec``
    records which of re1/im1/re2/im2 were pinned.
    """

    modes: int
    x_axis: np.ndarray
    y_axis: np.ndarray
    values: np.ndarray
    slice_spec: dict = field(default_factory=dict)

    def cell_area(self) -> float:
        return float((self.x_axis[1] - self.x_axis[0]) * (self.y_axis[1] - self.y_axis[0]))

    def integral(self) -> float:
        """Riemann sum times cell area; ~1 when the grid covers the support."""
        return float(self.values.sum() * self.cell_area())

    def to_csv(self, fh) -> None:
        """Write rows x,y,Q with fixed %.12e formatting (deterministic)."""
        fh.write("x,y,Q\n")
        for i, x in enumerate(self.x_axis):
            for j, y in enumerate(self.y_axis):
                fh.write(f"{x:.12e},{y:.12e},{self.values[i, j]:.12e}\n")

    def to_binary(self) -> bytes:
        """Little-endian float64 block: 8-value header then row-major values.

        Header: [modes, res_x, res_y, x_min, x_max, y_min, y_max, 0.0].
        """
        header = struct.pack(
            "<8d", float(self.modes), float(len(self.x_axis)), float(len(self.y_axis)),
            float(self.x_axis[0]), float(self.x_axis[-1]),
            float(self.y_axis[0]), float(self.y_axis[-1]), 0.0)
        body = np.ascontiguousarray(self.values, dtype="<f8").tobytes()
        return header + body

    @classmethod
    def from_binary(cls, blob: bytes) -> "PhaseGrid":
        header = struct.unpack("<8d", blob[:8 * _BINARY_HEADER_LEN])
        modes, res_x, res_y = int(header[0]), int(header[1]), int(header[2])
        x = np.linspace(header[3], header[4], res_x)
        y = np.linspace(header[5], header[6], res_y)
        values = np.frombuffer(blob[8 * _BINARY_HEADER_LEN:], dtype="<f8").reshape(res_x, res_y)
        return cls(modes, x, y, values.copy())


# --------------------------------------------------------------------------
# closed-form amplitudes
# --------------------------------------------------------------------------

def _overlap_pieces(nu: np.ndarray, p: SqueezeParams):
    """Vacuum and one-photon overlaps with the displaced squeezed vacuum.

    A0(nu) = <0|D(nu) S|0>, A1(nu) = <1|D(nu) S|0>; principal branches, so
    phases are only guaranteed consistent across branches at theta = 0.
    """
    t = math.tanh(p.r)
    eth = np.exp(1j * p.theta)
    envelope = np.exp(0.5 * (np.conj(nu) ** 2 * eth * t - np.abs(nu) ** 2))
    a0 = envelope / math.sqrt(math.cosh(p.r))
    a1 = np.sqrt(np.exp(-0.5j * p.theta) / math.cosh(p.r)) * (nu - eth * t * np.conj(nu)) * envelope
    return a0, a1


def _branch_single(mu: np.ndarray, s: float, p: SqueezeParams, sign: int) -> np.ndarray:
    """<mu|D(sign s/2)|phi_1>, vectorized over mu."""
    nu = sign * s / 2.0 - mu
    a0, a1 = _overlap_pieces(nu, p)
    phase = np.exp(-sign * 0.5j * s * np.imag(mu))
    return phase / math.sinh(p.r) * (a1 + (mu - sign * s / 2.0) * a0)


def q_single_closed(sel: PrePostSelection, cfg: CouplingConfig, p: SqueezeParams,
                    mu) -> np.ndarray | float:
    """Closed-form Q(mu) = |lam|^2/pi |t_+ R_+ + t_- R_-|^2 (exact at theta = 0)."""
    mu = np.asarray(mu, dtype=complex)
    wv = weak_value(sel)
    lam2 = normalizer_spssv(sel, cfg, p) ** 2
    amp = (wv.t_plus * _branch_single(mu, cfg.s, p, +1)
           + wv.t_minus * _branch_single(mu, cfg.s, p, -1))
    out = lam2 / math.pi * np.abs(amp) ** 2
    return float(out) if out.ndim == 0 else out


def _branch_two(mu1: np.ndarray, mu2: np.ndarray, s: float,
                p: TwoModeSqueezeParams, sign: int) -> np.ndarray:
    """<mu1, mu2|D_a(sign s/2)|phi_2>, vectorized; exact for any zeta."""
    t = math.tanh(p.eta)
    shifted = mu1 - sign * s / 2.0
    expo = (np.exp(1j * p.zeta) * t * np.conj(shifted) * np.conj(mu2)
            - 0.5 * np.abs(shifted) ** 2 - 0.5 * np.abs(mu2) ** 2)
    return np.exp(-sign * 0.5j * s * np.imag(mu1)) * np.exp(expo) / math.cosh(p.eta)


def q_two_closed(sel: PrePostSelection, cfg: CouplingConfig, p: TwoModeSqueezeParams,
                 mu1, mu2) -> np.ndarray | float:
    """Closed-form Q(mu1, mu2) = |kap|^2/pi^2 |t_+ R'_+ + t_- R'_-|^2."""
    mu1 = np.asarray(mu1, dtype=complex)
    mu2 = np.asarray(mu2, dtype=complex)
    wv = weak_value(sel)
    kap2 = normalizer_tmsv(sel, cfg, p) ** 2
    amp = (wv.t_plus * _branch_two(mu1, mu2, cfg.s, p, +1)
           + wv.t_minus * _branch_two(mu1, mu2, cfg.s, p, -1))
    out = kap2 / math.pi ** 2 * np.abs(amp) ** 2
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# oracle route
# --------------------------------------------------------------------------

def _coherent_rows(mu_flat: np.ndarray, N: int) -> np.ndarray:
    """Matrix of coherent amplitudes, one row per phase-space point.

    Raw truncated projection (no guard): rows for large |mu| lose tail
    mass, but overlaps with a converged pointer state are unaffected
    because the state itself has no weight there.
    """
    n = np.arange(N)
    lg = np.array([math.lgamma(k + 1) for k in range(N)])
    absmu = np.abs(mu_flat)
    safe = np.where(absmu == 0.0, 1.0, absmu)
    logmag = np.outer(np.log(safe), n) - 0.5 * lg - (absmu ** 2 / 2.0)[:, None]
    rows = np.exp(logmag) * np.exp(1j * np.outer(np.angle(mu_flat), n))
    zero = absmu == 0.0
    if np.any(zero):
        rows[zero] = 0.0
        rows[zero, 0] = 1.0
    return rows


def q_single_oracle_values(state: StateVector, mu: np.ndarray) -> np.ndarray:
    mu = np.asarray(mu, dtype=complex)
    rows = _coherent_rows(mu.reshape(-1), state.truncation)
    vals = np.abs(rows.conj() @ state.amplitudes) ** 2 / math.pi
    return vals.reshape(mu.shape)


def q_two_oracle_values(state: StateVector, mu1: np.ndarray, mu2: np.ndarray) -> np.ndarray:
    """|C1* M C2*^T|^2/pi^2 on the amplitude matrix M; mu1, mu2 same shape."""
    mu1 = np.asarray(mu1, dtype=complex)
    mu2 = np.asarray(mu2, dtype=complex)
    m = state.as_matrix()
    r1 = _coherent_rows(mu1.reshape(-1), state.truncation).conj()
    r2 = _coherent_rows(mu2.reshape(-1), state.truncation).conj()
    amps = np.einsum("pn,nm,pm->p", r1, m, r2)
    return (np.abs(amps) ** 2 / math.pi ** 2).reshape(mu1.shape)


# --------------------------------------------------------------------------
# point evaluations (paired report) and grids
# --------------------------------------------------------------------------

def q_single(sel: PrePostSelection, cfg: CouplingConfig, p: SqueezeParams,
             mu: complex, N: int | None = None,
             threshold: float = DEFAULT_REL_TOL) -> MetricReport:
    """Closed-form vs oracle Q at one point.

    If |mu|^2 exceeds the truncation guard the oracle path is disabled and
    only the closed form is reported.
    """
    closed = q_single_closed(sel, cfg, p, mu)
    N = N or suggest_truncation_single(cfg.s, p.r)
    if abs(mu) ** 2 >= N / 4.0:
        return compare(closed, None, threshold)
    state = final_pointer_spssv(sel, cfg, p, N)
    oracle = float(q_single_oracle_values(state, np.asarray(mu)))
    return compare(closed, oracle, threshold)


def q_two(sel: PrePostSelection, cfg: CouplingConfig, p: TwoModeSqueezeParams,
          mu1: complex, mu2: complex, N: int | None = None,
          threshold: float = DEFAULT_REL_TOL) -> MetricReport:
    closed = q_two_closed(sel, cfg, p, mu1, mu2)
    N = N or suggest_truncation_two(cfg.s, p.eta)
    if max(abs(mu1), abs(mu2)) ** 2 >= N / 4.0:
        return compare(closed, None, threshold)
    state = final_pointer_tmsv(sel, cfg, p, N)
    oracle = float(q_two_oracle_values(state, np.asarray(mu1), np.asarray(mu2)))
    return compare(closed, oracle, threshold)


def _axes(region, resolution) -> tuple[np.ndarray, np.ndarray]:
    (x0, x1), (y0, y1) = region
    if resolution < 2:
        raise ConfigError("grid resolution must be at least 2")
    return np.linspace(x0, x1, resolution), np.linspace(y0, y1, resolution)


def _parallel_rows(eval_rows, n_rows: int, parallel: bool) -> np.ndarray:
    """Evaluate row blocks concurrently; assembly order is deterministic."""
    if not parallel:
        return eval_rows(np.arange(n_rows))
    workers = min(4, os.cpu_count() or 1)
    bounds = np.array_split(np.arange(n_rows), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        blocks = list(pool.map(eval_rows, bounds))
    return np.concatenate(blocks, axis=0)


def q_single_grid(sel: PrePostSelection, cfg: CouplingConfig, p: SqueezeParams,
                  region=DEFAULT_REGION, resolution: int = DEFAULT_RESOLUTION,
                  engine: str = "closed", N: int | None = None,
                  parallel: bool = True) -> PhaseGrid:
    """Q over a rectangular grid of mu = x + iy (values[i, j] at x_i, y_j)."""
    x, y = _axes(region, resolution)
    state = None
    if engine == "oracle":
        N = N or suggest_truncation_single(cfg.s, p.r)
        state = final_pointer_spssv(sel, cfg, p, N)
    elif engine != "closed":
        raise ConfigError(f"unknown grid engine {engine!r}")

    def eval_rows(rows: np.ndarray) -> np.ndarray:
        mu = x[rows][:, None] + 1j * y[None, :]
        if state is not None:
            return q_single_oracle_values(state, mu)
        return q_single_closed(sel, cfg, p, mu)

    values = _parallel_rows(eval_rows, len(x), parallel)
    return PhaseGrid(1, x, y, values)


_SLICE_KEYS = ("re1", "im1", "re2", "im2")


def _resolve_slice(slice_spec: dict):
    unknown = set(slice_spec) - set(_SLICE_KEYS)
    if unknown:
        raise ConfigError(f"unknown slice coordinates {sorted(unknown)}")
    swept = [k for k in _SLICE_KEYS if k not in slice_spec]
    if len(swept) != 2:
        raise ConfigError("slice must pin exactly two of re1, im1, re2, im2")
    return swept


def q_two_slice(sel: PrePostSelection, cfg: CouplingConfig, p: TwoModeSqueezeParams,
                slice_spec: dict, region=DEFAULT_REGION,
                resolution: int = DEFAULT_RESOLUTION, engine: str = "closed",
                N: int | None = None, parallel: bool = True) -> PhaseGrid:
    """2-D slice of the two-mode Q: pin two real coordinates, sweep the rest.

    Example: ``slice_spec={"im1": 0.0, "im2": 0.0}`` sweeps (Re mu1, Re mu2).
    """
    swept = _resolve_slice(slice_spec)
    x, y = _axes(region, resolution)
    state = None
    if engine == "oracle":
        N = N or suggest_truncation_two(cfg.s, p.eta)
        state = final_pointer_tmsv(sel, cfg, p, N)
    elif engine != "closed":
        raise ConfigError(f"unknown grid engine {engine!r}")

    def coords(rows: np.ndarray):
        u = x[rows][:, None] + np.zeros_like(y)[None, :]
        v = np.zeros_like(x[rows])[:, None] + y[None, :]
        parts = {k: float(slice_spec.get(k, 0.0)) + np.zeros(u.shape) for k in _SLICE_KEYS}
        parts[swept[0]] = u
        parts[swept[1]] = v
        return parts["re1"] + 1j * parts["im1"], parts["re2"] + 1j * parts["im2"]

    def eval_rows(rows: np.ndarray) -> np.ndarray:
        mu1, mu2 = coords(rows)
        if state is not None:
            return q_two_oracle_values(state, mu1, mu2)
        return q_two_closed(sel, cfg, p, mu1, mu2)

    values = _parallel_rows(eval_rows, len(x), parallel)
    return PhaseGrid(2, x, y, values, dict(slice_spec))


# --------------------------------------------------------------------------
# peak structure
# --------------------------------------------------------------------------

def split_detector(grid: PhaseGrid, height_frac: float = 0.05,
                   min_distance: int = 3) -> dict:
    """Count well-separated local maxima and measure the top-two separation.

    Peaks must exceed ``height_frac`` of the global maximum and sit at
    least ``min_distance`` cells apart (taller peaks win ties).
    ``separation`` is the physical distance between the two highest peaks,
    0.0 when the landscape is unimodal or flat.
    """
    v = grid.values
    if float(v.max() - v.min()) == 0.0:
        return {"n_peaks": 0, "separation": 0.0}
    local_max = (v == maximum_filter(v, size=3, mode="nearest")) & (v > height_frac * v.max())
    candidates = sorted(map(tuple, np.argwhere(local_max)), key=lambda ij: (-v[ij], ij))
    kept: list[tuple[int, int]] = []
    for ij in candidates:
        if all(math.hypot(ij[0] - k[0], ij[1] - k[1]) >= min_distance for k in kept):
            kept.append(ij)
    if len(kept) < 2:
        return {"n_peaks": len(kept), "separation": 0.0}
    (i1, j1), (i2, j2) = kept[0], kept[1]
    sep = math.hypot(grid.x_axis[i1] - grid.x_axis[i2], grid.y_axis[j1] - grid.y_axis[j2])
    return {"n_peaks": len(kept), "separation": float(sep)}
