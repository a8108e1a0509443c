"""Command-line interface.

One subcommand per canned experiment (fig2, fig3, figs1, appendix-c) plus
generic monotone evaluators (rom, channel-robustness, mana) and a bisection
threshold finder.  Renormalization factors and LP statuses are logged to
stderr at info level; data goes to --out (default stdout).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .channels import (
    DensityOperator,
    KrausChannel,
    compose_channels,
    depolarizing_channel,
    noisy_th_channel,
    qutrit_k2_variant_report,
    qutrit_noisy_th_channel,
    unitary_channel,
)
from .experiments import (
    MEASURES,
    BracketError,
    default_config,
    find_threshold,
    parse_config_file,
    run_appendix_c,
    run_experiment,
    write_rows,
)
from .gates import HADAMARD, T_GATE, basis_state, plus_state, qutrit_t_gate
from .lp import channel_robustness, rom_state
from .phasespace import build_frame, mana_channel, mana_state
from .qswitch import effective_t_channels
from .stabilizers import cspo_choi_atoms, enumerate_stabilizer_states

logger = logging.getLogger(__name__)

_JOBS_ENV = "MAGIC_SWITCH_JOBS"


def _resolve_jobs(flag_value: int) -> int:
    env = os.environ.get(_JOBS_ENV, "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise SystemExit(f"{_JOBS_ENV}={env!r} is not an integer")
    return flag_value


def _parse_grid(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must look like start:stop:step")
    try:
        return tuple(float(x) for x in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _parse_tols(text: str) -> dict:
    out = {}
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        key, _, val = piece.partition("=")
        key = key.strip()
        if key not in ("lp", "threshold"):
            raise argparse.ArgumentTypeError(f"unknown tolerance {key!r} (use lp=, threshold=)")
        out[key] = float(val)
    return out


def _add_sweep_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", default=None, help="output path ('-' for stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default=None)
    sub.add_argument("--grid", type=_parse_grid, default=None, metavar="START:STOP:STEP")
    sub.add_argument("--tol", type=_parse_tols, default=None, metavar="lp=..,threshold=..")
    sub.add_argument("--jobs", type=int, default=1)
    sub.add_argument("--config", default=None, help="key=value config file; flags override it")


def _sweep_config(args) -> "SweepConfig":
    from .experiments import SweepConfig  # local to keep module import light

    if args.config:
        base = parse_config_file(args.config)
        values = dict(
            experiment=base.experiment,
            start=base.start,
            stop=base.stop,
            step=base.step,
            lp_tol=base.lp_tol,
            threshold_tol=base.threshold_tol,
            output_path=base.output_path,
            format=base.format,
            jobs=base.jobs,
        )
    else:
        base = default_config(args.experiment)
        values = dict(
            experiment=base.experiment,
            start=base.start,
            stop=base.stop,
            step=base.step,
            lp_tol=base.lp_tol,
            threshold_tol=base.threshold_tol,
            output_path=base.output_path,
            format=base.format,
            jobs=base.jobs,
        )
    values["experiment"] = args.experiment
    if args.grid:
        values["start"], values["stop"], values["step"] = args.grid
    if args.tol:
        if "lp" in args.tol:
            values["lp_tol"] = args.tol["lp"]
        if "threshold" in args.tol:
            values["threshold_tol"] = args.tol["threshold"]
    if args.out is not None:
        values["output_path"] = args.out
    if args.format is not None:
        values["format"] = args.format
    values["jobs"] = _resolve_jobs(args.jobs)
    return SweepConfig(**values)


# ---------------------------------------------------------------------------
# Named states and channels for the generic subcommands
# ---------------------------------------------------------------------------

def _parse_kwargs(spec: str) -> tuple[str, dict]:
    name, _, tail = spec.partition(":")
    kwargs = {}
    if tail:
        for piece in tail.split(","):
            key, _, val = piece.partition("=")
            kwargs[key.strip()] = float(val)
    return name.strip().lower(), kwargs


def _named_state(spec: str) -> DensityOperator:
    name, kwargs = _parse_kwargs(spec)
    presets = {
        "zero": lambda: DensityOperator.pure(basis_state(2, 0)),
        "one": lambda: DensityOperator.pure(basis_state(2, 1)),
        "plus": lambda: DensityOperator.pure(plus_state(2)),
        "t-plus": lambda: DensityOperator.pure(T_GATE @ plus_state(2)),
        "mixed": lambda: DensityOperator.maximally_mixed(2),
        "qutrit-plus": lambda: DensityOperator.pure(plus_state(3)),
        "qutrit-t-plus": lambda: DensityOperator.pure(qutrit_t_gate() @ plus_state(3)),
        "qutrit-mixed": lambda: DensityOperator.maximally_mixed(3),
    }
    if name not in presets:
        raise SystemExit(f"unknown state {name!r}; choices: {sorted(presets)}")
    if kwargs:
        raise SystemExit(f"state {name!r} takes no parameters")
    return presets[name]()


def _state_from_file(path: str) -> DensityOperator:
    with open(path) as fh:
        payload = json.load(fh)
    entries = np.array([[complex(re, im) for re, im in row] for row in payload["matrix"]])
    return DensityOperator(entries, normalized=bool(payload.get("normalized", True)))


def _named_channel(spec: str) -> KrausChannel:
    name, kwargs = _parse_kwargs(spec)
    if name == "noisy-th":
        return noisy_th_channel(kwargs.pop("p"))
    if name == "qutrit-noisy-th":
        return qutrit_noisy_th_channel(kwargs.pop("p"))
    if name == "t":
        return unitary_channel(T_GATE)
    if name == "h":
        return unitary_channel(HADAMARD)
    if name == "qutrit-t":
        return unitary_channel(qutrit_t_gate())
    if name == "depolarizing":
        d = int(kwargs.pop("d", 2))
        return depolarizing_channel(d, kwargs.pop("p"))
    if name == "depol-squared-t":
        p = kwargs.pop("p")
        noise = depolarizing_channel(2, p)
        return compose_channels(noise, compose_channels(noise, unitary_channel(T_GATE)))
    if name == "switch-plus-t":
        return effective_t_channels(kwargs.pop("p"))[0].channel
    if name == "switch-minus-t":
        return effective_t_channels(kwargs.pop("p", 0.0))[1].channel
    raise SystemExit(
        f"unknown channel {name!r}; choices: noisy-th, qutrit-noisy-th, t, h, qutrit-t, "
        "depolarizing, depol-squared-t, switch-plus-t, switch-minus-t"
    )


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _cmd_sweep(args) -> int:
    config = _sweep_config(args)
    rows = run_experiment(config)
    write_rows(rows, config)
    return 0


def _cmd_appendix_c(args) -> int:
    d_values = tuple(int(x) for x in args.dims.split(","))
    report = run_appendix_c(d_values=d_values, n_points=args.points)
    _emit(report, args.out)
    return 0 if report["strictly_negative"] else 1


def _cmd_threshold(args) -> int:
    tols = args.tol or {}
    try:
        result = find_threshold(
            args.measure,
            lo=args.bracket[0],
            hi=args.bracket[1],
            lp_tol=tols.get("lp", 1e-6),
            threshold_tol=tols.get("threshold", 1e-3),
        )
    except BracketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(
        {
            "measure": result.measure,
            "threshold": result.threshold,
            "bracket": list(result.bracket),
            "iterations": result.iterations,
        },
        args.out,
    )
    return 0


def _cmd_rom(args) -> int:
    rho = _state_from_file(args.state_file) if args.state_file else _named_state(args.state)
    if rho.dim not in (2, 4):
        raise SystemExit("rom supports 1- and 2-qubit states")
    n = 1 if rho.dim == 2 else 2
    solution = rom_state(rho, enumerate_stabilizer_states(n))
    _emit(
        {"value": solution.value, "status": solution.status,
         "renorm_factor": solution.renorm_factor},
        args.out,
    )
    return 0 if solution.status == "optimal" else 1


def _cmd_channel_robustness(args) -> int:
    ch = _named_channel(args.channel)
    atoms = cspo_choi_atoms(enumerate_stabilizer_states(2))
    solution = channel_robustness(ch, atoms)
    _emit({"value": solution.value, "status": solution.status}, args.out)
    return 0 if solution.status == "optimal" else 1


def _cmd_mana(args) -> int:
    frame = build_frame(args.d)
    if args.channel:
        value = mana_channel(_named_channel(args.channel), frame)
        kind = "channel"
    elif args.state_file:
        value = mana_state(_state_from_file(args.state_file), frame)
        kind = "state"
    else:
        value = mana_state(_named_state(args.state), frame)
        kind = "state"
    _emit({"kind": kind, "d": args.d, "mana": value}, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magicswitch",
        description="Coherent-order channel composition and non-stabilizerness monotones",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress info logging")
    subs = parser.add_subparsers(dest="command", required=True)

    for exp, blurb in (
        ("fig2", "robustness sweep of the noisy TH channel and its switch outputs"),
        ("fig3", "robustness sweep of a T gate behind sequential vs switched noise"),
        ("figs1", "mana sweep of the qutrit channel and its switch outputs"),
    ):
        sub = subs.add_parser(exp, help=blurb)
        _add_sweep_options(sub)
        sub.set_defaults(handler=_cmd_sweep, experiment=exp)

    sub = subs.add_parser("appendix-c", help="strict inequality report for switched depolarizing noise")
    sub.add_argument("--dims", default="2,3,5,10", help="comma-separated dimensions")
    sub.add_argument("--points", type=int, default=10_000, help="grid points in (0, 1]")
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=_cmd_appendix_c)

    sub = subs.add_parser("threshold", help="bisect a measure onto its faithfulness floor")
    sub.add_argument("--measure", required=True, choices=sorted(MEASURES))
    sub.add_argument("--bracket", type=_parse_grid_pair, required=True, metavar="LO:HI")
    sub.add_argument("--tol", type=_parse_tols, default=None, metavar="lp=..,threshold=..")
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=_cmd_threshold)

    sub = subs.add_parser("rom", help="robustness of a state over the stabilizer dictionary")
    sub.add_argument("--state", default="t-plus")
    sub.add_argument("--state-file", default=None, help="JSON with 'matrix': [[ [re,im], ...], ...]")
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=_cmd_rom)

    sub = subs.add_parser("channel-robustness", help="channel robustness of a named channel")
    sub.add_argument("--channel", required=True, help="e.g. noisy-th:p=0.3, t, depol-squared-t:p=0.2")
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=_cmd_channel_robustness)

    sub = subs.add_parser("mana", help="mana of a state or channel in odd prime dimension")
    sub.add_argument("--d", type=int, default=3)
    sub.add_argument("--channel", default=None)
    sub.add_argument("--state", default="qutrit-t-plus")
    sub.add_argument("--state-file", default=None)
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=_cmd_mana)

    sub = subs.add_parser("k2-check", help="completeness residuals of both qutrit reset-row variants")
    sub.add_argument("--p", type=float, default=0.5)
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=_cmd_k2_check)

    return parser


def _parse_grid_pair(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("bracket must look like lo:hi")
    return float(parts[0]), float(parts[1])


def _cmd_k2_check(args) -> int:
    _emit(qutrit_k2_variant_report(args.p), args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
