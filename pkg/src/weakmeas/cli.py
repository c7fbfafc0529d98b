"""Command-line front end: parameter sweeps, figure presets, and the audit.

Output is deterministic — fixed %.12e float formatting, fixed row order,
no timestamps — so identical invocations produce byte-identical files.

Exit codes: 0 success, 2 audit flags raised under --strict, 64 usage
error, 65 truncation guard breached without --force.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import audit as audit_mod
from . import husimi, nonclassicality as ncl
from .exceptions import ConfigError, TruncationRiskError
from .fock import guards_disabled
from .expr import parse_scalar, parse_values
from .measurement import (
    CouplingConfig,
    PrePostSelection,
    final_pointer_spssv,
    final_pointer_tmsv,
    success_prob_spssv,
    success_prob_spssv_closed,
    success_prob_tmsv,
    success_prob_tmsv_closed,
    suggest_truncation_single,
    suggest_truncation_two,
    transition_value_spssv,
    transition_value_spssv_oracle,
    transition_value_tmsv,
    transition_value_tmsv_oracle,
)
from .shifts import pointer_shifts_spssv, pointer_shifts_tmsv
from .states import SqueezeParams, TwoModeSqueezeParams

QUANTITIES = ("prob_s", "prob_t", "skew", "as_squeeze", "sum_squeeze", "photon_dist",
              "shifts", "transition", "qfunc_single", "qfunc_two", "audit")
ENGINES = ("oracle", "closed", "both")
FIG_PRESETS = ("fig2", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9")

EXIT_OK = 0
EXIT_AUDIT_FLAGS = 2
EXIT_USAGE = 64
EXIT_TRUNCATION = 65


class UsageError(Exception):
    pass


@dataclass
class SweepSpec:
    """Everything one invocation needs: quantity, grids, engine, output."""

    quantity: str
    alpha: list = field(default_factory=lambda: [0.0])
    delta: list = field(default_factory=lambda: [0.0])
    s: list = field(default_factory=lambda: [0.0])
    r: list = field(default_factory=lambda: [0.1])
    eta: list = field(default_factory=lambda: [0.1])
    theta: float = 0.0
    zeta: float = 0.0
    Theta: float = 0.0
    n_max: int = 20
    region: tuple = husimi.DEFAULT_REGION
    resolution: int = husimi.DEFAULT_RESOLUTION
    slice_spec: dict = field(default_factory=lambda: {"im1": 0.0, "im2": 0.0})
    pointer: str = "single"
    engine: str = "both"
    preset: str = "all"
    truncation: int | None = None
    output: str | None = None
    fmt: str = "csv"
    strict: bool = False
    force: bool = False

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ConfigError(f"unknown quantity {self.quantity!r}")
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown engine {self.engine!r}")
        if self.quantity == "audit" and self.engine != "both":
            raise ConfigError("the audit requires --engine both")
        if not (self.alpha and self.delta and self.s and self.r and self.eta):
            raise ConfigError("parameter grids must be non-empty")


# --------------------------------------------------------------------------
# row emitters
# --------------------------------------------------------------------------

def _with_engine(row: dict, name: str, closed, oracle, engine: str) -> dict:
    if engine == "closed":
        row[name] = closed
    elif engine == "oracle":
        row[name] = oracle
    else:
        rep = audit_mod.compare(closed, oracle)
        if isinstance(closed, complex) or isinstance(oracle, complex):
            row[f"{name}_closed_re"], row[f"{name}_closed_im"] = complex(closed).real, complex(closed).imag
            row[f"{name}_oracle_re"], row[f"{name}_oracle_im"] = complex(oracle).real, complex(oracle).imag
        else:
            row[f"{name}_closed"], row[f"{name}_oracle"] = closed, oracle
        row["rel_diff"], row["flag"] = rep.rel_diff, int(rep.flag)
    return row


def _rows_prob(spec: SweepSpec, two_mode: bool) -> list[dict]:
    rows = []
    for alpha in spec.alpha:
        for delta in spec.delta:
            sel = PrePostSelection(alpha, delta)
            for s in spec.s:
                cfg = CouplingConfig(s)
                for x in (spec.eta if two_mode else spec.r):
                    if two_mode:
                        p = TwoModeSqueezeParams(x, spec.zeta)
                        row = {"alpha": alpha, "delta": delta, "s": s, "eta": x, "zeta": spec.zeta}
                        closed = success_prob_tmsv_closed(sel, cfg, p)
                        if spec.engine != "closed":
                            N = spec.truncation or suggest_truncation_two(2 * s, x)
                            oracle = success_prob_tmsv(sel, cfg, p, N).oracle
                        name = "P_T"
                    else:
                        p = SqueezeParams(x, spec.theta)
                        row = {"alpha": alpha, "delta": delta, "s": s, "r": x, "theta": spec.theta}
                        closed = success_prob_spssv_closed(sel, cfg, p)
                        if spec.engine != "closed":
                            N = spec.truncation or suggest_truncation_single(2 * s, x)
                            oracle = success_prob_spssv(sel, cfg, p, N).oracle
                        name = "P_S"
                    if spec.engine == "closed":
                        oracle = None
                    rows.append(_with_engine(row, name, closed, oracle, spec.engine))
    return rows


def _rows_skew(spec: SweepSpec) -> list[dict]:
    rows = []
    for alpha in spec.alpha:
        for delta in spec.delta:
            sel = PrePostSelection(alpha, delta)
            for s in spec.s:
                cfg = CouplingConfig(s)
                for r in spec.r:
                    p = SqueezeParams(r, spec.theta)
                    row = {"alpha": alpha, "delta": delta, "s": s, "r": r}
                    closed = ncl.skew_from_expectations(ncl.expectations_closed_spssv(sel, cfg, p))
                    oracle = None
                    if spec.engine != "closed":
                        N = spec.truncation or suggest_truncation_single(s, r)
                        oracle = ncl.skew_information(final_pointer_spssv(sel, cfg, p, N))
                    rows.append(_with_engine(row, "W", closed, oracle, spec.engine))
    return rows


def _rows_as(spec: SweepSpec) -> list[dict]:
    """Squared-amplitude squeezing is oracle-only away from s = 0."""
    rows = []
    for alpha in spec.alpha:
        for delta in spec.delta:
            sel = PrePostSelection(alpha, delta)
            for s in spec.s:
                cfg = CouplingConfig(s)
                for r in spec.r:
                    p = SqueezeParams(r, spec.theta)
                    N = spec.truncation or suggest_truncation_single(s, r)
                    value = ncl.as_oracle(final_pointer_spssv(sel, cfg, p, N))
                    row = {"alpha": alpha, "delta": delta, "s": s, "r": r, "AS": value}
                    row["AS_s0_closed"] = ncl.as_closed_s0(p) if s == 0.0 else float("nan")
                    rows.append(row)
    return rows


def _rows_sum(spec: SweepSpec) -> list[dict]:
    rows = []
    for alpha in spec.alpha:
        for delta in spec.delta:
            sel = PrePostSelection(alpha, delta)
            for s in spec.s:
                cfg = CouplingConfig(s)
                for eta in spec.eta:
                    p = TwoModeSqueezeParams(eta, spec.zeta)
                    row = {"alpha": alpha, "delta": delta, "s": s, "eta": eta, "Theta": spec.Theta}
                    closed = ncl.sum_squeezing_from_moments(
                        ncl.expectations_closed_tmsv(sel, cfg, p), spec.Theta)
                    oracle = None
                    if spec.engine != "closed":
                        N = spec.truncation or suggest_truncation_two(s, eta)
                        oracle = ncl.sum_squeezing(final_pointer_tmsv(sel, cfg, p, N), spec.Theta)
                    rows.append(_with_engine(row, "S", closed, oracle, spec.engine))
    return rows


def _rows_photon(spec: SweepSpec) -> list[dict]:
    rows = []
    for alpha in spec.alpha:
        for delta in spec.delta:
            sel = PrePostSelection(alpha, delta)
            for s in spec.s:
                cfg = CouplingConfig(s)
                for r in spec.r:
                    p = SqueezeParams(r, spec.theta)
                    closed = ncl.photon_dist_closed(sel, cfg, p, spec.n_max)
                    N = spec.truncation or suggest_truncation_single(s, r)
                    oracle = ncl.photon_dist_oracle(final_pointer_spssv(sel, cfg, p, N))
                    for n in range(spec.n_max + 1):
                        row = {"alpha": alpha, "delta": delta, "s": s, "r": r, "n": n}
                        rows.append(_with_engine(row, "P_n", float(closed[n]),
                                                 float(oracle[n]), spec.engine))
    return rows


def _rows_shifts(spec: SweepSpec) -> list[dict]:
    two = spec.pointer == "two"
    rows = []
    for alpha in spec.alpha:
        for delta in spec.delta:
            sel = PrePostSelection(alpha, delta)
            for s in spec.s:
                cfg = CouplingConfig(s)
                for x in (spec.eta if two else spec.r):
                    if two:
                        rep = pointer_shifts_tmsv(sel, cfg, TwoModeSqueezeParams(x, spec.zeta),
                                                  spec.truncation)
                        prob = success_prob_tmsv_closed(sel, cfg, TwoModeSqueezeParams(x, spec.zeta))
                    else:
                        rep = pointer_shifts_spssv(sel, cfg, SqueezeParams(x, spec.theta),
                                                   spec.truncation)
                        prob = success_prob_spssv_closed(sel, cfg, SqueezeParams(x, spec.theta))
                    rows.append({
                        "pointer": spec.pointer, "alpha": alpha, "delta": delta, "s": s,
                        ("eta" if two else "r"): x,
                        "dX_over_g": rep.dX_over_g,
                        "dP_sigma2_over_g": rep.dP_sigma2_over_g,
                        "P_success": prob,
                    })
    return rows


def _rows_transition(spec: SweepSpec) -> list[dict]:
    two = spec.pointer == "two"
    rows = []
    for alpha in spec.alpha:
        for delta in spec.delta:
            sel = PrePostSelection(alpha, delta)
            for s in spec.s:
                cfg = CouplingConfig(s)
                for x in (spec.eta if two else spec.r):
                    if two:
                        p = TwoModeSqueezeParams(x, spec.zeta)
                        closed = transition_value_tmsv(sel, cfg, p)
                        oracle = (transition_value_tmsv_oracle(
                            sel, cfg, p, spec.truncation or suggest_truncation_two(s, x))
                            if spec.engine != "closed" else None)
                        name = "sigma_x_T"
                    else:
                        p = SqueezeParams(x, spec.theta)
                        closed = transition_value_spssv(sel, cfg, p)
                        oracle = (transition_value_spssv_oracle(
                            sel, cfg, p, spec.truncation or suggest_truncation_single(s, x))
                            if spec.engine != "closed" else None)
                        name = "sigma_x_S"
                    row = {"pointer": spec.pointer, "alpha": alpha, "delta": delta,
                           "s": s, ("eta" if two else "r"): x}
                    if spec.engine == "closed":
                        row[f"{name}_re"], row[f"{name}_im"] = closed.real, closed.imag
                        rows.append(row)
                    else:
                        rows.append(_with_engine(row, name, closed, oracle, spec.engine))
    return rows


def _grid_rows(grid: husimi.PhaseGrid, extra: dict) -> list[dict]:
    rows = []
    for i, x in enumerate(grid.x_axis):
        for j, y in enumerate(grid.y_axis):
            rows.append({**extra, "x": float(x), "y": float(y),
                         "Q": float(grid.values[i, j])})
    return rows


def _rows_qfunc(spec: SweepSpec, two_mode: bool) -> list[dict]:
    engines = ("closed", "oracle") if spec.engine == "both" else (spec.engine,)
    rows = []
    for alpha in spec.alpha:
        for delta in spec.delta:
            sel = PrePostSelection(alpha, delta)
            for s in spec.s:
                cfg = CouplingConfig(s)
                for engine in engines:
                    if two_mode:
                        for eta in spec.eta:
                            grid = husimi.q_two_slice(
                                sel, cfg, TwoModeSqueezeParams(eta, spec.zeta), spec.slice_spec,
                                spec.region, spec.resolution, engine, spec.truncation)
                            extra = {"alpha": alpha, "delta": delta, "s": s, "eta": eta,
                                     "engine": engine}
                            rows.extend(_grid_rows(grid, extra))
                    else:
                        for r in spec.r:
                            grid = husimi.q_single_grid(
                                sel, cfg, SqueezeParams(r, spec.theta),
                                spec.region, spec.resolution, engine, spec.truncation)
                            extra = {"alpha": alpha, "delta": delta, "s": s, "r": r,
                                     "engine": engine}
                            rows.extend(_grid_rows(grid, extra))
    return rows


def _single_grid_for_binary(spec: SweepSpec, two_mode: bool) -> husimi.PhaseGrid:
    if len(spec.alpha) != 1 or len(spec.delta) != 1 or len(spec.s) != 1:
        raise ConfigError("binary output holds exactly one grid; use scalar parameters")
    sel = PrePostSelection(spec.alpha[0], spec.delta[0])
    cfg = CouplingConfig(spec.s[0])
    engine = "closed" if spec.engine == "both" else spec.engine
    if two_mode:
        return husimi.q_two_slice(sel, cfg, TwoModeSqueezeParams(spec.eta[0], spec.zeta),
                                  spec.slice_spec, spec.region, spec.resolution,
                                  engine, spec.truncation)
    return husimi.q_single_grid(sel, cfg, SqueezeParams(spec.r[0], spec.theta),
                                spec.region, spec.resolution, engine, spec.truncation)


# --------------------------------------------------------------------------
# figure presets
# --------------------------------------------------------------------------

def _preset_rows(name: str) -> list[dict]:
    pi = math.pi
    if name == "fig2":
        alphas = [k * pi / 9 for k in range(1, 9)]
        rows = []
        for alpha in alphas:
            sel = PrePostSelection(alpha, 0.0)
            for s in np.arange(0.0, 6.0 + 1e-12, 0.05):
                cfg = CouplingConfig(float(s))
                rows.append({
                    "alpha": alpha, "s": float(s),
                    "P_S": success_prob_spssv_closed(sel, cfg, SqueezeParams(0.1)),
                    "P_T": success_prob_tmsv_closed(sel, cfg, TwoModeSqueezeParams(0.1)),
                })
        return rows
    if name == "fig4":
        panels = (("a", [8 * pi / 9], (0.0, 0.25, 0.5, 1.0), np.arange(0.02, 1.2001, 0.02), (0.1,)),
                  ("b", [pi / 9, 4 * pi / 9, 8 * pi / 9], (0.5,), np.arange(0.02, 1.2001, 0.02), (0.1,)),
                  ("c", [pi / 9, 4 * pi / 9, 8 * pi / 9], np.arange(0.0, 1.0001, 0.02), None, (0.1,)))
        rows = []
        for panel, alphas, ss, rr, r_fixed in panels:
            r_values = rr if rr is not None else r_fixed
            for alpha in alphas:
                sel = PrePostSelection(alpha, 0.0)
                for s in ss:
                    cfg = CouplingConfig(float(s))
                    for r in r_values:
                        p = SqueezeParams(float(r))
                        N = suggest_truncation_single(float(s), float(r))
                        w = ncl.skew_information(final_pointer_spssv(sel, cfg, p, N))
                        rows.append({"panel": panel, "alpha": alpha, "s": float(s),
                                     "r": float(r), "W": w})
        return rows
    if name == "fig5":
        rows = []
        sel = PrePostSelection(8 * pi / 9, 0.0)
        for s in (0.0, 0.3, 0.6, 1.0):
            cfg = CouplingConfig(s)
            for r in np.arange(0.02, 1.2001, 0.02):
                p = SqueezeParams(float(r))
                N = suggest_truncation_single(s, float(r))
                rows.append({"alpha": 8 * pi / 9, "s": s, "r": float(r),
                             "AS": ncl.as_oracle(final_pointer_spssv(sel, cfg, p, N))})
        return rows
    if name == "fig6":
        rows = []
        sel = PrePostSelection(8 * pi / 9, 0.0)
        for s in (0.0, 0.5, 0.7, 1.0):
            cfg = CouplingConfig(s)
            for eta in np.arange(0.01, 0.8001, 0.01):
                p = TwoModeSqueezeParams(float(eta))
                N = suggest_truncation_two(s, float(eta))
                value = ncl.sum_squeezing(final_pointer_tmsv(sel, cfg, p, N), pi / 4)
                rows.append({"alpha": 8 * pi / 9, "s": s, "eta": float(eta),
                             "Theta": pi / 4, "S": value})
        return rows
    if name == "fig7":
        rows = []
        for pointer in ("single", "two"):
            for s in (0.001, 0.5, 1.0, 4.0):
                cfg = CouplingConfig(s)
                for alpha in np.linspace(0.0, 8 * pi / 9, 49):
                    sel = PrePostSelection(float(alpha), pi / 6)
                    if pointer == "single":
                        rep = pointer_shifts_spssv(sel, cfg, SqueezeParams(0.1))
                    else:
                        rep = pointer_shifts_tmsv(sel, cfg, TwoModeSqueezeParams(0.1))
                    rows.append({"pointer": pointer, "s": s, "alpha": float(alpha),
                                 "dX_over_g": rep.dX_over_g,
                                 "dP_sigma2_over_g": rep.dP_sigma2_over_g})
        return rows
    if name == "fig8":
        rows = []
        sel = PrePostSelection(8 * pi / 9, 0.0)
        for s in (0.0, 0.5, 1.0, 3.0):
            grid = husimi.q_single_grid(sel, CouplingConfig(s), SqueezeParams(1.0))
            rows.extend(_grid_rows(grid, {"s": s}))
        return rows
    if name == "fig9":
        rows = []
        sel = PrePostSelection(8 * pi / 9, 0.0)
        slices = (("real", {"im1": 0.0, "im2": 0.0}), ("imag", {"re1": 0.0, "re2": 0.0}))
        for label, spec in slices:
            for s in (0.0, 0.5, 1.0, 2.0):
                grid = husimi.q_two_slice(sel, CouplingConfig(s), TwoModeSqueezeParams(1.0), spec)
                rows.extend(_grid_rows(grid, {"slice": label, "s": s}))
        return rows
    raise ConfigError(f"unknown preset {name!r}; choose from {FIG_PRESETS}")


# --------------------------------------------------------------------------
# writers
# --------------------------------------------------------------------------

def _fmt_cell(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{value:.12e}"
    if isinstance(value, complex):
        return f"{value.real:.12e}{value.imag:+.12e}j"
    return str(value)


def write_rows_csv(rows: list[dict], fh) -> None:
    if not rows:
        fh.write("\n")
        return
    cols = list(rows[0].keys())
    fh.write(",".join(cols) + "\n")
    for row in rows:
        fh.write(",".join(_fmt_cell(row[c]) for c in cols) + "\n")


def write_rows_json(rows: list[dict], fh) -> None:
    fh.write("[\n")
    for i, row in enumerate(rows):
        cells = []
        for key, value in row.items():
            if isinstance(value, str):
                cells.append(f'"{key}": "{value}"')
            elif isinstance(value, (float, np.floating)) and math.isnan(value):
                cells.append(f'"{key}": NaN')
            else:
                cells.append(f'"{key}": {_fmt_cell(value)}')
        comma = "," if i < len(rows) - 1 else ""
        fh.write("  {" + ", ".join(cells) + "}" + comma + "\n")
    fh.write("]\n")


def _emit(rows_or_bytes, spec: SweepSpec) -> None:
    if isinstance(rows_or_bytes, bytes):
        if spec.output is None:
            sys.stdout.buffer.write(rows_or_bytes)
        else:
            with open(spec.output, "wb") as fh:
                fh.write(rows_or_bytes)
        return
    buffer = io.StringIO()
    writer = write_rows_json if spec.fmt == "json" else write_rows_csv
    writer(rows_or_bytes, buffer)
    if spec.output is None:
        sys.stdout.write(buffer.getvalue())
    else:
        with open(spec.output, "w") as fh:
            fh.write(buffer.getvalue())


# --------------------------------------------------------------------------
# driver
# --------------------------------------------------------------------------

def run(spec: SweepSpec) -> int:
    """Execute one sweep spec; returns the process exit code."""
    try:
        with guards_disabled() if spec.force else _null_context():
            if spec.quantity == "audit":
                records = audit_mod.run_audit(spec.preset)
                rows = audit_mod.records_to_rows(records)
                _emit(rows, spec)
                if spec.strict and any(r.flag for r in records):
                    return EXIT_AUDIT_FLAGS
                return EXIT_OK
            if spec.quantity in ("qfunc_single", "qfunc_two") and spec.fmt == "bin":
                grid = _single_grid_for_binary(spec, spec.quantity == "qfunc_two")
                _emit(grid.to_binary(), spec)
                return EXIT_OK
            rows = {
                "prob_s": lambda: _rows_prob(spec, False),
                "prob_t": lambda: _rows_prob(spec, True),
                "skew": lambda: _rows_skew(spec),
                "as_squeeze": lambda: _rows_as(spec),
                "sum_squeeze": lambda: _rows_sum(spec),
                "photon_dist": lambda: _rows_photon(spec),
                "shifts": lambda: _rows_shifts(spec),
                "transition": lambda: _rows_transition(spec),
                "qfunc_single": lambda: _rows_qfunc(spec, False),
                "qfunc_two": lambda: _rows_qfunc(spec, True),
            }[spec.quantity]()
    except TruncationRiskError as exc:
        print(f"truncation guard: {exc} (pass --force to override)", file=sys.stderr)
        return EXIT_TRUNCATION
    flagged = any(row.get("flag") for row in rows)
    _emit(rows, spec)
    if spec.strict and flagged:
        return EXIT_AUDIT_FLAGS
    return EXIT_OK


class _null_context:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def run_preset(name: str, output: str | None, fmt: str) -> int:
    rows = _preset_rows(name)
    _emit(rows, SweepSpec(quantity="prob_s", output=output, fmt=fmt))
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_config(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"config line is not key=value: {line!r}")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


_LIST_KEYS = ("alpha", "delta", "s", "r", "eta")
_SCALAR_KEYS = ("theta", "zeta", "Theta")


def _build_parser() -> _Parser:
    parser = _Parser(prog="weakmeas", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    for key in _LIST_KEYS:
        common.add_argument(f"--{key}", help="value, comma list, a,b,...,c, or lo:hi:step; pi arithmetic ok")
    for key in _SCALAR_KEYS:
        common.add_argument(f"--{key}", help="scalar; pi arithmetic ok")
    common.add_argument("--n-max", type=int, dest="n_max")
    common.add_argument("--region", help="grid region as x0:x1[,y0:y1]")
    common.add_argument("--resolution", type=int)
    common.add_argument("--pin", help="two-mode slice pins, e.g. im1=0,im2=0")
    common.add_argument("--pointer", choices=("single", "two"))
    common.add_argument("--engine", choices=ENGINES)
    common.add_argument("--preset", help="audit preset name")
    common.add_argument("--truncation", type=int)
    common.add_argument("--output", "-o")
    common.add_argument("--format", choices=("csv", "json", "bin"), dest="fmt")
    common.add_argument("--strict", action="store_true", default=None)
    common.add_argument("--force", action="store_true", default=None)
    common.add_argument("--config", help="key=value file; flags override it")

    for q in QUANTITIES:
        sub.add_parser(q, parents=[common])

    preset = sub.add_parser("preset", help="emit the data behind a published figure")
    preset.add_argument("name", choices=FIG_PRESETS)
    preset.add_argument("--output", "-o")
    preset.add_argument("--format", choices=("csv", "json"), dest="fmt", default="csv")
    return parser


def _spec_from_args(args) -> SweepSpec:
    merged: dict = {}
    if args.config:
        merged.update(_read_config(args.config))
    for key in (*_LIST_KEYS, *_SCALAR_KEYS, "n_max", "region", "resolution", "pin",
                "pointer", "engine", "preset", "truncation", "output", "fmt",
                "strict", "force"):
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val

    spec_kwargs: dict = {"quantity": args.command}
    for key in _LIST_KEYS:
        if key in merged:
            spec_kwargs[key] = parse_values(str(merged[key]))
    for key in _SCALAR_KEYS:
        if key in merged:
            spec_kwargs[key] = parse_scalar(str(merged[key]))
    if "region" in merged:
        parts = str(merged["region"]).split(",")
        first = tuple(parse_scalar(p) for p in parts[0].split(":"))
        second = tuple(parse_scalar(p) for p in parts[1].split(":")) if len(parts) > 1 else first
        if len(first) != 2 or len(second) != 2:
            raise ConfigError("region must be x0:x1[,y0:y1]")
        spec_kwargs["region"] = (first, second)
    if "pin" in merged:
        pins = {}
        for item in str(merged["pin"]).split(","):
            key, _, val = item.partition("=")
            pins[key.strip()] = parse_scalar(val)
        spec_kwargs["slice_spec"] = pins
    for key in ("n_max", "resolution", "truncation"):
        if key in merged:
            spec_kwargs[key] = int(merged[key])
    for key in ("pointer", "engine", "preset", "output", "fmt"):
        if key in merged:
            spec_kwargs[key] = str(merged[key])
    for key in ("strict", "force"):
        if key in merged:
            value = merged[key]
            spec_kwargs[key] = value if isinstance(value, bool) else value.lower() in ("1", "true", "yes")
    return SweepSpec(**spec_kwargs)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "preset":
            return run_preset(args.name, args.output, args.fmt)
        return run(_spec_from_args(args))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
