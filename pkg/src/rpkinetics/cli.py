"""Command-line front end.

Subcommands:

* ``simulate``  - integrate one model and write a time series (CSV/JSON)
* ``compare``   - run two models on shared parameters, write differences
* ``decompose`` - write decomposition weights and the two-versus-three
  weight state distance over time
* ``verify``    - run the built-in numerical check suite
* ``plot``      - render columns of a CSV table to a figure file

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 runtime invariant violation. Parameters come from flags, optionally
seeded by a strict JSON config file; flags win over file values.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from .errors import (
    ConfigError,
    DomainError,
    NormalizationError,
    RPKineticsError,
)
from .integrate import IntegratorConfig, propagate, time_grid
from .models import ModelKind, RateParams
from .output import (
    compare_table,
    decompose_table,
    read_csv,
    trajectory_table,
    write_csv,
    write_json,
)
from .spinsys import BasisKind, InitialState, make_basis
from .verify import run_all_checks

CONFIG_KEYS = {"model", "basis", "alpha", "beta", "ks", "t_end", "step", "stride", "output", "format"}

DEFAULTS = {
    "model": "qm",
    "basis": "pst",
    "alpha": complex(1.0 / math.sqrt(2.0)),
    "beta": complex(1.0 / math.sqrt(2.0)),
    "ks": 1.0,
    "t_end": 5.0,
    "step": None,  # resolved to 1e-3 / k_s
    "stride": 10,
    "output": "-",
    "format": "csv",
}


def parse_complex(value) -> complex:
    """Accept a number, "re", "re,im", or a [re, im] pair."""
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(f"complex value needs [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        parts = value.split(",")
        try:
            if len(parts) == 1:
                return complex(float(parts[0]))
            if len(parts) == 2:
                return complex(float(parts[0]), float(parts[1]))
        except ValueError:
            pass
        raise ConfigError(f"cannot parse complex value {value!r}; use 're' or 're,im'")
    raise ConfigError(f"cannot parse complex value {value!r}")


@dataclass
class RunConfig:
    """Validated parameters shared by the table-producing subcommands."""

    model: ModelKind
    basis: BasisKind
    alpha: complex
    beta: complex
    ks: float
    t_end: float
    step: float
    stride: int
    output: str
    format: str

    def initial_state(self) -> InitialState:
        return InitialState(self.alpha, self.beta)

    def rate_params(self) -> RateParams:
        return RateParams(k_s=self.ks)

    def integrator_config(self) -> IntegratorConfig:
        return IntegratorConfig(step=self.step, t_end=self.t_end, record_stride=self.stride)


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config file: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"config file is not valid JSON: {err}") from err
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(raw) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    return raw


def _resolve(args: argparse.Namespace, model_field: str = "model") -> RunConfig:
    """Merge flag values over config-file values over defaults."""
    file_cfg = _load_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(key: str, flag_value):
        if flag_value is not None:
            return flag_value
        if key in file_cfg:
            return file_cfg[key]
        return DEFAULTS[key]

    try:
        model = ModelKind(str(pick("model", getattr(args, model_field, None))).lower())
    except ValueError as err:
        raise ConfigError(f"field model: unknown model {err}") from None
    try:
        basis = BasisKind(str(pick("basis", getattr(args, "basis", None))).lower())
    except ValueError:
        raise ConfigError("field basis: must be 'st' or 'pst'") from None

    alpha = parse_complex(pick("alpha", getattr(args, "alpha", None)))
    beta = parse_complex(pick("beta", getattr(args, "beta", None)))
    ks = float(pick("ks", getattr(args, "ks", None)))
    t_end = float(pick("t_end", getattr(args, "t_end", None)))
    step = pick("step", getattr(args, "step", None))
    if step is None:
        step = 1e-3 / ks if ks > 0 else t_end / 1000.0
    stride = int(pick("stride", getattr(args, "stride", None)))
    output = str(pick("output", getattr(args, "output", None)))
    fmt = str(pick("format", getattr(args, "format", None))).lower()
    if fmt not in ("csv", "json"):
        raise ConfigError(f"field format: must be 'csv' or 'json', got {fmt!r}")
    if model is ModelKind.NORMALIZED_QM and basis is not BasisKind.ST:
        raise ConfigError("field basis: model 'nqm' evolves the pair space and needs basis 'st'")

    try:
        cfg = RunConfig(
            model=model, basis=basis, alpha=alpha, beta=beta, ks=ks,
            t_end=t_end, step=float(step), stride=stride, output=output, format=fmt,
        )
        cfg.initial_state()
        cfg.rate_params()
        cfg.integrator_config()
    except NormalizationError as err:
        raise ConfigError(f"field alpha/beta: {err}") from err
    except DomainError as err:
        raise ConfigError(f"field validation failed: {err}") from err
    return cfg


def _emit(output: str, writer) -> None:
    if output == "-":
        writer(sys.stdout)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            writer(fh)


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    traj = propagate(
        cfg.model, cfg.initial_state(), cfg.rate_params(), make_basis(cfg.basis),
        cfg.integrator_config(),
    )
    columns, rows = trajectory_table(traj, dimensionless=args.dimensionless)
    meta = {"model": cfg.model.value, "basis": cfg.basis.value, "ks": cfg.ks}
    if cfg.format == "json":
        _emit(cfg.output, lambda fh: write_json(fh, columns, rows, meta))
    else:
        _emit(cfg.output, lambda fh: write_csv(fh, columns, rows))
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    cfg_a = _resolve(args, model_field="model_a")
    cfg_b = _resolve(args, model_field="model_b")
    basis = make_basis(cfg_a.basis)
    ics = cfg_a.integrator_config()
    traj_a = propagate(cfg_a.model, cfg_a.initial_state(), cfg_a.rate_params(), basis, ics)
    traj_b = propagate(cfg_b.model, cfg_b.initial_state(), cfg_b.rate_params(), basis, ics)
    columns, rows = compare_table(traj_a, traj_b, dimensionless=args.dimensionless)
    _emit(cfg_a.output, lambda fh: write_csv(fh, columns, rows))
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    times = time_grid(cfg.integrator_config())
    columns, rows = decompose_table(
        cfg.initial_state(), cfg.ks, times, dimensionless=args.dimensionless
    )
    _emit(cfg.output, lambda fh: write_csv(fh, columns, rows))
    return 0


def _parse_tolerances(pairs: list[str] | None) -> dict[str, float]:
    overrides = {}
    for pair in pairs or []:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise ConfigError(f"tolerance override must look like name=value, got {pair!r}")
        try:
            overrides[name] = float(value)
        except ValueError:
            raise ConfigError(f"tolerance value for {name!r} is not a number: {value!r}") from None
    return overrides


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_all_checks(_parse_tolerances(args.tolerance))
    print(report.format_text())
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report.to_json_dict(), fh, indent=2)
            fh.write("\n")
    return 0 if report.overall_pass else 1


def cmd_plot(args: argparse.Namespace) -> int:
    from . import plotting  # deferred: matplotlib import is slow

    try:
        with open(args.csv_path, encoding="utf-8") as fh:
            columns, data = read_csv(fh)
    except OSError as err:
        raise ConfigError(f"cannot read CSV: {err}") from err
    except (DomainError, ValueError) as err:
        raise ConfigError(str(err)) from err
    wanted = [c.strip() for c in args.columns.split(",") if c.strip()]
    try:
        plotting.render_line_chart(columns, data, wanted, args.output)
    except DomainError as err:
        raise ConfigError(str(err)) from err
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rpkinetics",
        description="Spin-selective radical-pair recombination kinetics simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_shared(p: argparse.ArgumentParser, with_format: bool) -> None:
        p.add_argument("--basis", choices=["st", "pst"], default=None, help="spin basis")
        p.add_argument("--alpha", default=None, help="singlet amplitude, 're' or 're,im'")
        p.add_argument("--beta", default=None, help="triplet amplitude, 're' or 're,im'")
        p.add_argument("--ks", type=float, default=None, help="singlet recombination rate (1/time)")
        p.add_argument("--t-end", dest="t_end", type=float, default=None, help="end time")
        p.add_argument("--step", type=float, default=None, help="integrator step (default 1e-3/ks)")
        p.add_argument("--stride", type=int, default=None, help="record every Nth step")
        p.add_argument("--output", default=None, help="output path ('-' for stdout)")
        p.add_argument("--config", default=None, help="JSON config file (flags override it)")
        p.add_argument(
            "--dimensionless", action="store_true",
            help="write ks*t in the time column instead of absolute time",
        )
        if with_format:
            p.add_argument("--format", choices=["csv", "json"], default=None, help="output format")

    p_sim = sub.add_parser("simulate", help="integrate one model and write a time series")
    p_sim.add_argument("--model", choices=["qm", "hk", "nqm"], default=None, help="reaction model")
    add_shared(p_sim, with_format=True)
    p_sim.set_defaults(func=cmd_simulate)

    p_cmp = sub.add_parser("compare", help="run two models and write observable differences")
    p_cmp.add_argument("--model-a", choices=["qm", "hk", "nqm"], default=None, help="first model")
    p_cmp.add_argument("--model-b", choices=["qm", "hk", "nqm"], default=None, help="second model")
    add_shared(p_cmp, with_format=False)
    p_cmp.set_defaults(func=cmd_compare)

    p_dec = sub.add_parser("decompose", help="write decomposition weights over time")
    add_shared(p_dec, with_format=False)
    p_dec.set_defaults(func=cmd_decompose)

    p_ver = sub.add_parser("verify", help="run the numerical check suite")
    p_ver.add_argument(
        "--tolerance", action="append", metavar="NAME=VALUE",
        help="override a check threshold (repeatable)",
    )
    p_ver.add_argument("--json", default=None, help="also write the report as JSON to this path")
    p_ver.set_defaults(func=cmd_verify)

    p_plot = sub.add_parser("plot", help="render CSV columns to a figure file")
    p_plot.add_argument("csv_path", help="CSV table written by simulate/compare/decompose")
    p_plot.add_argument("--columns", required=True, help="comma-separated column names")
    p_plot.add_argument("--output", required=True, help="figure path (.svg for vector output)")
    p_plot.set_defaults(func=cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except RPKineticsError as err:
        print(f"runtime error: {err}", file=sys.stderr)
        return 3


def entry_point() -> None:
    raise SystemExit(main())
