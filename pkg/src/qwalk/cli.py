"""Command-line interface.

    qwalk simulate    --coin hadamard --alpha 0 --beta 0 --local --steps 100
    qwalk asymptotics --coin fourier --gaussian --sigma0 50 --beta 1.5708
    qwalk sweep       --coin hadamard --grid-step 0.1 --local
    qwalk figure 3    --steps 3000 --out fig3.csv

All output is CSV (header row, comma separated, floats with 17 significant
digits). Errors go to stderr; exit codes are 0 on success, 2 for usage errors,
3 for out-of-domain arguments and 4 for configurations that need a fair coin.
Flags override values read from ``--config FILE`` (JSON), which override defaults.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Sequence

from .core import FOURIER, HADAMARD, CoinParams, GaussianProfile, Qubit, build_gaussian_state, build_local_state
from .ensemble import QubitGrid, sweep
from .errors import DomainError, UnsupportedConfigurationError
from .evolution import time_series
from .kspace import DEFAULT_NODES, asymptotic_report
from . import figures

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_UNSUPPORTED = 0, 2, 3, 4

COIN_ALIASES = {"hadamard": HADAMARD, "fourier": FOURIER}

COMMANDS = ("simulate", "asymptotics", "sweep", "figure")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str = "simulate"
    coin: str = "hadamard"
    alpha: float = 0.0
    beta: float = 0.0
    state_kind: str = "local"
    sigma0: float = 10.0
    steps: int | None = None
    stride: int = 1
    grid_step: float = 0.1
    nodes: int = DEFAULT_NODES
    method: str = "closed"
    figure: int | None = None
    subsample: int = 1
    out: str | None = None

    def coin_params(self) -> CoinParams:
        return parse_coin(self.coin)

    def qubit(self) -> Qubit:
        return Qubit(self.alpha, self.beta)

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.state_kind not in ("local", "gaussian"):
            raise UsageError(f"state kind must be local or gaussian, got {self.state_kind!r}")
        if self.method not in ("closed", "quadrature"):
            raise UsageError(f"--method must be closed or quadrature, got {self.method!r}")
        if self.steps is not None and self.steps < 0:
            raise UsageError("--steps must be non-negative")
        if self.stride < 1 or self.subsample < 1:
            raise UsageError("--stride and --subsample must be >= 1")
        if self.nodes < 2:
            raise UsageError("--nodes must be >= 2")
        if not self.grid_step > 0:
            raise UsageError("--grid-step must be positive")
        if self.command == "figure" and self.figure not in (1, 2, 3, 4, 5):
            raise UsageError(f"figure number must be 1..5, got {self.figure!r}")
        self.coin_params()
        self.qubit()
        if self.state_kind == "gaussian":
            GaussianProfile(self.sigma0)
        return self


def parse_coin(text: str) -> CoinParams:
    """``hadamard``, ``fourier`` or ``q,theta,phi``."""
    key = text.strip().lower()
    if key in COIN_ALIASES:
        return COIN_ALIASES[key]
    parts = key.split(",")
    if len(parts) != 3:
        raise UsageError(f"--coin expects hadamard, fourier or q,theta,phi; got {text!r}")
    try:
        q, theta, phi = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--coin components must be numbers; got {text!r}") from None
    return CoinParams(q, theta, phi)


# --------------------------------------------------------------------------- CSV


def format_value(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def write_csv(rows: Sequence[dict], stream, columns: Sequence[str] | None = None) -> None:
    if columns is None:
        columns = list(rows[0]) if rows else []
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(row[c]) for c in columns])


def read_csv(stream) -> list[dict]:
    """Parse CSV emitted by ``write_csv``; numeric fields become floats."""
    out = []
    for row in csv.DictReader(stream):
        parsed = {}
        for k, v in row.items():
            try:
                parsed[k] = float(v)
            except ValueError:
                parsed[k] = v
        out.append(parsed)
    return out


# --------------------------------------------------------------------------- commands


def _report_row(rep) -> dict:
    return {
        "I": rep.I,
        "R": rep.R,
        "A_bar": rep.A_bar,
        "re_gamma_bar": rep.gamma_bar.real,
        "im_gamma_bar": rep.gamma_bar.imag,
        "Delta": rep.Delta,
        "S_E_bar": rep.S_E_bar,
        "u": rep.u,
        "var_rate": rep.var_rate,
        "regime": rep.regime,
    }


def cmd_simulate(cfg: RunConfig) -> list[dict]:
    coin = cfg.coin_params()
    qubit = cfg.qubit()
    if cfg.state_kind == "local":
        state = build_local_state(qubit)
    else:
        state = build_gaussian_state(qubit, GaussianProfile(cfg.sigma0))
    steps = 100 if cfg.steps is None else cfg.steps
    ts = time_series(state, coin, steps, cfg.stride)
    return [
        {
            "t": int(ts.t[i]),
            "mean_j": ts.mean[i],
            "variance": ts.variance[i],
            "A": ts.A[i],
            "re_gamma": ts.gamma[i].real,
            "im_gamma": ts.gamma[i].imag,
            "entropy": ts.entropy[i],
        }
        for i in range(ts.t.size)
    ]


def cmd_asymptotics(cfg: RunConfig) -> list[dict]:
    coin = cfg.coin_params()
    sigma0 = cfg.sigma0 if cfg.state_kind == "gaussian" else None
    rep = asymptotic_report(cfg.qubit(), coin, cfg.state_kind, sigma0, cfg.method, cfg.nodes)
    return [_report_row(rep)]


def cmd_sweep(cfg: RunConfig) -> list[dict]:
    coin = cfg.coin_params()
    grid = QubitGrid.stepped(cfg.grid_step)
    sigma0 = cfg.sigma0 if cfg.state_kind == "gaussian" else None
    records = sweep(grid, [coin], cfg.state_kind, sigma0, cfg.method, cfg.steps or None, cfg.nodes)
    rows = []
    for r in records:
        row = {"alpha": r.alpha, "beta": r.beta, "q": r.coin.q, "theta": r.coin.theta, "phi": r.coin.phi}
        row.update(_report_row(r.report))
        if r.sim_var_rate is not None:
            row["sim_var_rate"] = r.sim_var_rate
            row["sim_entropy"] = r.sim_entropy
        rows.append(row)
    return rows


def cmd_figure(cfg: RunConfig) -> list[dict]:
    n = cfg.figure
    if n == 1:
        return figures.figure1("table" if cfg.method == "closed" else "quadrature")
    if n == 2:
        return figures.figure2()
    if n == 3:
        steps = 3000 if cfg.steps is None else cfg.steps
        return figures.figure3(steps, cfg.sigma0, cfg.subsample, cfg.stride)
    if n == 4:
        return figures.figure4()
    if n == 5:
        return figures.figure5()
    raise UsageError(f"figure number must be 1..5, got {n!r}")


DISPATCH = {
    "simulate": cmd_simulate,
    "asymptotics": cmd_asymptotics,
    "sweep": cmd_sweep,
    "figure": cmd_figure,
}


# --------------------------------------------------------------------------- argument handling


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--coin", help="hadamard, fourier or q,theta,phi")
    common.add_argument("--alpha", type=float, help="polar angle of the initial qubit")
    common.add_argument("--beta", type=float, help="azimuth of the initial qubit")
    kind = common.add_mutually_exclusive_group()
    kind.add_argument("--local", dest="state_kind", action="store_const", const="local")
    kind.add_argument("--gaussian", dest="state_kind", action="store_const", const="gaussian")
    common.add_argument("--sigma0", type=float, help="Gaussian width (>= 1)")
    common.add_argument("--steps", type=int)
    common.add_argument("--stride", type=int, help="sampling stride for time series")
    common.add_argument("--nodes", type=int, help="quadrature nodes")
    common.add_argument("--grid-step", dest="grid_step", type=float)
    common.add_argument("--method", choices=("closed", "quadrature"))
    common.add_argument("--subsample", type=int, help="keep every n-th qubit of the figure-3 grid")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--dump-config", dest="dump_config", action="store_true",
                        help="print the resolved configuration as JSON and exit")

    parser = _Parser(prog="qwalk", description="Discrete-time quantum walk simulation and asymptotics.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("simulate", parents=[common], help="time series of one walk")
    sub.add_parser("asymptotics", parents=[common], help="long-time report for one qubit")
    sub.add_parser("sweep", parents=[common], help="reports over a Bloch-angle grid")
    fig = sub.add_parser("figure", parents=[common], help="figure datasets 1..5")
    fig.add_argument("figure", type=int)
    return parser


def resolve_config(argv: Sequence[str]) -> tuple[RunConfig, bool]:
    ns = vars(build_parser().parse_args(argv))
    dump = ns.pop("dump_config", False)
    merged: dict = {}
    path = ns.pop("config", None)
    if path is not None:
        try:
            with open(path) as fh:
                merged.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path!r}: {exc}") from None
    merged.update(ns)
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(merged) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**merged), dump


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg, dump = resolve_config(argv)
        cfg.validate()
        if dump:
            json.dump(dataclasses.asdict(cfg), sys.stdout, indent=2, sort_keys=True)
            sys.stdout.write("\n")
            return EXIT_OK
        rows = DISPATCH[cfg.command](cfg)
    except UsageError as exc:
        print(f"qwalk: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedConfigurationError as exc:
        print(f"qwalk: unsupported configuration: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except DomainError as exc:
        print(f"qwalk: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            write_csv(rows, fh)
    else:
        buf = io.StringIO()
        write_csv(rows, buf)
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
