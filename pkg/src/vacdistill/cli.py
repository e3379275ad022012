"""Command-line entry point: ``vacdistill {fig1,table-1q,table-2q,distill} [flags]``."""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .errors import ConfigurationError, DegenerateProtocolError, VacDistillError
from .harness import ExperimentConfig, fig1_csv, run_fig1, run_table, table_csv, write_output
from .models import KINDS, ONE_QUBIT, SCHWINGER, ModelSpec

log = logging.getLogger("vacdistill")

# per-subcommand defaults; flags and --config values override them
SUBCOMMANDS = {
    "fig1": dict(model=ONE_QUBIT, j=1.0, rounds=0),
    "table-1q": dict(model=ONE_QUBIT, j=1.0, rounds=5),
    "table-2q": dict(model=SCHWINGER, j=1.0, rounds=6),
    "distill": dict(model=ONE_QUBIT, j=1.0, rounds=1),
}
COMMON_DEFAULTS = dict(
    t_total=36.0, dt=1 / 24, shots=10**5, reps=1, seed=0,
    u_mode="trotter", twirl_steps=100, initial=None, workers=1, out=None,
)
FULL_SCALE_SHOTS = {"fig1": 10**6, "table-1q": 10**8, "table-2q": 10**8, "distill": 10**8}


def _number(text: str) -> float:
    """Float that also accepts fractions such as ``1/24``."""
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _count(text: str) -> int:
    """Integer that also accepts ``1e6`` style input."""
    value = float(text)
    if value != int(value):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


CONVERTERS = {
    "model": str, "j": _number, "t_total": _number, "dt": _number, "rounds": _count,
    "shots": _count, "reps": _count, "seed": _count, "u_mode": str, "twirl_steps": _count,
    "initial": str, "workers": _count, "out": Path,
}


def read_config_file(path: Path) -> dict[str, object]:
    """Plain ``key = value`` lines; ``#`` starts a comment and keys may use dashes."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in CONVERTERS:
            raise ConfigurationError(f"{path}:{lineno}: cannot parse {raw!r}")
        try:
            values[key] = CONVERTERS[key](val.strip())
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise ConfigurationError(f"{path}:{lineno}: {exc}") from exc
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vacdistill",
        description="Adiabatic vacuum preparation followed by ancilla twirling; writes CSV.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "fig1": "observable trace during and after adiabatic preparation",
        "table-1q": "one-qubit X + JZ table over twirl rounds",
        "table-2q": "two-site Schwinger table over twirl rounds",
        "distill": "generic distillation run (choose --model)",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        # None defaults mark "not given" so config-file values can fill in
        if name == "distill":
            p.add_argument("--model", choices=KINDS, default=None)
        p.add_argument("--j", type=_number, default=None, help="coupling J")
        p.add_argument("--t-total", type=_number, default=None, help="adiabatic time T (default 36)")
        p.add_argument("--dt", type=_number, default=None, help="time step (default 1/24)")
        if name != "fig1":
            p.add_argument("--rounds", type=_count, default=None, help="number of twirl rounds")
            p.add_argument("--reps", type=_count, default=None, help="independent repetitions to average")
            p.add_argument("--u-mode", choices=("exact", "trotter"), default=None)
            p.add_argument("--twirl-steps", type=_count, default=None, help="Trotter sub-steps per twirl")
            p.add_argument("--workers", type=_count, default=None, help="threads for repetitions")
        p.add_argument("--shots", type=_count, default=None, help="shots per point (default 1e5)")
        p.add_argument("--full-scale", action="store_true", help="use the full-size shot counts (1e6 for fig1, 1e8 for tables)")
        p.add_argument("--seed", type=_count, default=None)
        p.add_argument("--initial", default=None, help="starting bitstring, qubit 0 first")
        p.add_argument("--out", type=Path, default=None, help="CSV path (stdout if omitted)")
        p.add_argument("--config", type=Path, default=None, help="key=value file; flags win")
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    values: dict[str, object] = {**COMMON_DEFAULTS, **SUBCOMMANDS[args.command]}
    if args.full_scale:
        values["shots"] = FULL_SCALE_SHOTS[args.command]
    if args.config is not None:
        values.update(read_config_file(args.config))
    for key in CONVERTERS:
        given = getattr(args, key, None)
        if given is not None:
            values[key] = given
    model = ModelSpec(str(values.pop("model")), float(values.pop("j")))
    return ExperimentConfig(model=model, **values)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        if args.command == "fig1":
            text = fig1_csv(cfg, run_fig1(cfg))
        else:
            text = table_csv(cfg, run_table(cfg))
        write_output(text, cfg.out)
    except DegenerateProtocolError as exc:
        print(f"vacdistill: protocol error: {exc}", file=sys.stderr)
        return 3
    except (ConfigurationError, VacDistillError) as exc:
        print(f"vacdistill: configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"vacdistill: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
