"""Command line front end.

    pilotcap validate --matrix C.txt
    pilotcap capacity --matrix C.txt --power 100 --block-length 100 --t-tau 4
    pilotcap sweep    --matrix C.txt --power 100 --block-length 100 [--format csv|json|svg] [--out F]
    pilotcap optimize --matrix C.txt --power 0.01 --block-length 100
    pilotcap simulate --matrix C.txt --power 100 --block-length 100 --t-tau 4 --seed 1 --trials 200000
    pilotcap oracle   --matrix C.txt --power 100 --block-length 100 --t-tau 4 --seed 1 --trials 1000
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .capacity import capacity
from .errors import InvalidConfig, NotPsd, NotSquare, ParseError, PilotCapError
from .estimation import ChannelStats, LinkBudget, TrainingPlan, error_covariance
from .montecarlo import SimConfig, amgm_oracle, run_estimation_sim
from .optimizer import CapacityCurve, sweep
from .plotting import render_curve_svg
from .rng import CounterRng
from .spd_core import SymMatrix, check_spd

COMMANDS = ("validate", "capacity", "sweep", "optimize", "simulate", "oracle")
FORMATS = ("csv", "json", "svg")
CSV_HEADER = "t_tau,bits_per_block,bits_per_symbol"

EXIT_CODES_HELP = """\
exit codes:
  0  success
  2  matrix file could not be parsed
  3  invalid matrix (not square, asymmetric, or not positive semidefinite)
  4  invalid configuration (missing/out-of-range arguments)
  5  numeric failure (factorization or eigensolver breakdown)
"""


class SingularCovarianceWarning(UserWarning):
    """Covariance is PSD but its smallest eigenvalue is within tolerance of zero."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    matrix_path: str
    power: Optional[float] = None
    block_length: Optional[int] = None
    t_tau: Optional[int] = None
    seed: Optional[int] = None
    trials: Optional[int] = None
    output_path: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidConfig(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise InvalidConfig(f"unknown format {self.format!r}")
        needed = []
        if self.command != "validate":
            needed += ["power", "block_length"]
        if self.command in ("capacity", "simulate", "oracle"):
            needed.append("t_tau")
        if self.command in ("simulate", "oracle"):
            needed += ["seed", "trials"]
        missing = [n for n in needed if getattr(self, n) is None]
        if missing:
            flags = ", ".join("--" + n.replace("_", "-") for n in missing)
            raise InvalidConfig(f"{self.command} requires {flags}")
        if self.trials is not None and self.trials < 1:
            raise InvalidConfig("--trials must be >= 1")
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise InvalidConfig("--seed must be an unsigned 64-bit integer")


def _parse_json_matrix(text, path):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise ParseError(f'{path}: JSON input must be an object with a "matrix" key')
    rows = obj["matrix"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError(f'{path}: "matrix" must be a nonempty array of arrays')
    out = []
    for i, row in enumerate(rows, 1):
        vals = []
        for j, v in enumerate(row, 1):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ParseError(f"{path}: row {i} entry {j} is not a finite number")
            vals.append(float(v))
        out.append(vals)
    return out


def _parse_text_matrix(text, path):
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        vals = []
        col = 0
        for tok in body.split():
            col = body.index(tok, col)
            try:
                v = float(tok)
            except ValueError:
                raise ParseError(f"{path}: cannot parse {tok!r} as a number", lineno, col + 1) from None
            if not math.isfinite(v):
                raise ParseError(f"{path}: non-finite value {tok!r}", lineno, col + 1)
            vals.append(v)
            col += len(tok)
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise ParseError(f"{path}: row has {len(vals)} entries, expected {width}", lineno)
        rows.append(vals)
    if not rows:
        raise ParseError(f"{path}: no matrix rows found")
    return rows


def parse_matrix_file(path) -> SymMatrix:
    """Read a covariance matrix from a whitespace text file or a JSON file.

    Text format: one matrix row per line, whitespace separated, ``#`` starts
    a comment.  JSON format: ``{"matrix": [[...], ...]}``.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidConfig(f"cannot read {path}: {exc.strerror}") from None
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        rows = _parse_json_matrix(text, path)
    else:
        rows = _parse_text_matrix(text, path)
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ParseError(f"{path}: rows have different lengths")
    if widths.pop() != len(rows):
        raise NotSquare(f"{path}: {len(rows)} rows but {len(rows[0])} columns")
    mat = SymMatrix(np.array(rows))
    report = check_spd(mat)
    if not report.is_psd:
        raise NotPsd(report.min_eigenvalue, report.tolerance)
    if not report.is_pd:
        warnings.warn(
            f"{path}: covariance is singular to tolerance (min eigenvalue {report.min_eigenvalue:.3g})",
            SingularCovarianceWarning,
            stacklevel=2,
        )
    return mat


def _num(x) -> str:
    return format(x, ".15g")


def curve_to_csv(curve: CapacityCurve) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    T = curve.block_length
    for t, bits in curve.entries:
        buf.write(f"{t},{_num(bits)},{_num(bits / T)}\n")
    buf.write(f"# {summary_line(curve)}\n")
    return buf.getvalue()


def read_sweep_csv(text):
    """Parse sweep CSV text back into ``[(t_tau, bits_per_block, bits_per_symbol)]``."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    if not lines or lines[0] != CSV_HEADER:
        raise ParseError("missing sweep CSV header")
    out = []
    for ln in lines[1:]:
        t, b, s = ln.split(",")
        out.append((int(t), float(b), float(s)))
    return out


def summary_line(curve: CapacityCurve) -> str:
    return (
        f"argmax={curve.argmax_t_tau} max_bits_per_block={_num(curve.max_bits)} "
        f"max_bits_per_symbol={_num(curve.max_bits / curve.block_length)}"
    )


def curve_to_json(curve: CapacityCurve) -> str:
    T = curve.block_length
    return json.dumps(
        {
            "block_length": T,
            "t_tau": curve.t_tau.tolist(),
            "bits_per_block": curve.bits.tolist(),
            "bits_per_symbol": (curve.bits / T).tolist(),
            "argmax": curve.argmax_t_tau,
            "max_bits_per_block": curve.max_bits,
        },
        indent=2,
    ) + "\n"


def _emit(text, config: RunConfig, stdout):
    if config.output_path:
        try:
            Path(config.output_path).write_text(text)
        except OSError as exc:
            raise InvalidConfig(f"cannot write {config.output_path}: {exc.strerror}") from None
    else:
        stdout.write(text)


def _build_stats(config):
    stats = ChannelStats(parse_matrix_file(config.matrix_path))
    budget = LinkBudget(config.power, config.block_length)
    return stats, budget


def run(config: RunConfig, stdout=None) -> int:
    """Execute one command; errors propagate as :class:`PilotCapError`."""
    stdout = stdout or sys.stdout
    cmd = config.command
    if cmd == "validate":
        mat = parse_matrix_file(config.matrix_path)
        r = check_spd(mat)
        stdout.write(
            f"dim={mat.dim} is_psd={str(r.is_psd).lower()} is_pd={str(r.is_pd).lower()} "
            f"min_eigenvalue={_num(r.min_eigenvalue)}\n"
        )
        return 0

    stats, budget = _build_stats(config)
    if cmd == "capacity":
        value = capacity(stats, budget, TrainingPlan(config.t_tau))
        if config.format == "json":
            stdout.write(json.dumps({"t_tau": config.t_tau, "bits_per_block": value.bits_per_block,
                                     "bits_per_symbol": value.bits_per_symbol}) + "\n")
        else:
            stdout.write(f"{value.bits_per_block:.6f} bits ({value.bits_per_symbol:.6f} bits/symbol)\n")
        return 0

    if cmd in ("sweep", "optimize"):
        curve = sweep(stats, budget)
        if cmd == "optimize":
            stdout.write(summary_line(curve) + "\n")
            return 0
        if config.format == "csv":
            _emit(curve_to_csv(curve), config, stdout)
        elif config.format == "json":
            _emit(curve_to_json(curve), config, stdout)
        else:
            title = f"{stats.m}x1 channel, P = {config.power:g}, T = {config.block_length}"
            _emit(render_curve_svg(curve.t_tau, curve.bits, curve.argmax_t_tau, title), config, stdout)
        if config.output_path:
            stdout.write(summary_line(curve) + "\n")
        return 0

    plan = TrainingPlan(config.t_tau)
    if cmd == "simulate":
        report = run_estimation_sim(SimConfig(config.seed, config.trials, stats, budget, plan))
        _emit(json.dumps(report.to_dict(), indent=2) + "\n", config, stdout)
        return 0

    # oracle
    t_d = budget.block_length - plan.t_tau
    result = amgm_oracle(stats, error_covariance(stats, budget, plan), budget.power, t_d,
                         config.trials, CounterRng(config.seed))
    dominated = result.max_random_mi <= result.equal_power_mi + 1e-9
    stdout.write(
        f"max_random_mi={_num(result.max_random_mi)} equal_power_mi={_num(result.equal_power_mi)} "
        f"dominated={str(dominated).lower()}\n"
    )
    return 0 if dominated else 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(InvalidConfig.exit_code, f"{self.prog}: error: {message}\n")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--matrix", required=True, dest="matrix_path", help="covariance matrix file (text or JSON)")
    common.add_argument("--power", type=float, help="per-symbol power P (linear scale)")
    common.add_argument("--block-length", type=int, help="coherence block length T")
    common.add_argument("--t-tau", type=int, help="number of training symbols")
    common.add_argument("--seed", type=int, help="RNG seed (unsigned 64-bit)")
    common.add_argument("--trials", type=int, help="Monte Carlo trials / random spectra")
    common.add_argument("--out", dest="output_path", help="write output here instead of stdout")
    common.add_argument("--format", choices=FORMATS, default="csv")

    parser = _Parser(
        prog="pilotcap",
        description="Worst-case capacity versus pilot length for block-fading SIMO links.",
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "validate": "check that the matrix is a valid covariance",
        "capacity": "capacity for one training length",
        "sweep": "capacity for every training length 1..T",
        "optimize": "capacity-maximizing training length",
        "simulate": "Monte Carlo check of the MMSE estimator statistics (JSON)",
        "oracle": "random-spectrum check that equal power maximizes mutual information",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name], epilog=EXIT_CODES_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(**{k: v for k, v in vars(args).items()})
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = _show_warning
            return run(config)
    except PilotCapError as exc:
        print(f"pilotcap: error: {exc}", file=sys.stderr)
        return exc.exit_code


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"pilotcap: warning: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
