"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 argument error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import ast
import json
import math
import operator
import os
import shlex
import sys
from typing import Optional, Sequence

from . import entanglement as ent
from . import sweep
from . import teleport as tp
from . import verify
from .states import CHANNEL_PARAMS, ChannelKind, ParameterError, input_state, make_channel
from .sweep import format_float

EXIT_OK, EXIT_VERIFY, EXIT_ARGS, EXIT_IO = 0, 1, 2, 3
CHANNEL_FLAGS = ("r", "theta", "p", "s", "g", "eps")
REQUIRED = {
    ChannelKind.NOES: ("r",),
    ChannelKind.WERNER: ("p",),
    ChannelKind.NMES: ("s",),
    ChannelKind.NONORTH_MIXED: ("r",),
    ChannelKind.GHZW_MIX: ("p",),
}


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_ARGS):
        super().__init__(message)
        self.code = code


_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_real(text: str) -> float:
    """Real number; accepts ``pi`` and simple arithmetic such as ``3pi/4`` or ``2/3``."""
    src = text.strip().lower().replace("π", "pi")
    # "3pi" -> "3*pi"
    for d in "0123456789":
        src = src.replace(f"{d}pi", f"{d}*pi")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError

    try:
        value = ev(ast.parse(src, mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def parse_bloch(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected THETA_B,PHI, got {text!r}")
    return parse_real(parts[0]), parse_real(parts[1])


def _add_channel_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--channel", required=required, choices=[k.value for k in ChannelKind])
    p.add_argument("--r", type=parse_real, help="non-orthogonality modulus")
    p.add_argument("--theta", type=parse_real, help="overlap phase (radians)")
    p.add_argument("--p", type=parse_real, help="Werner noise / GHZ weight")
    p.add_argument("--s", type=parse_real, help="rescaled non-maximality")
    p.add_argument("--g", type=parse_real, help="pure-state weight of the mixture")
    p.add_argument("--eps", type=parse_real, help="distance of g above separability")


def _output_flags(p: argparse.ArgumentParser, formats: Sequence[str], default: str) -> None:
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--out", help="write to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teleportlab",
        description="Teleportation through non-orthogonal, noisy and non-maximally entangled channels.",
        epilog="Use --args-from FILE to read extra flags from a response file.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metrics", help="entanglement metrics of one channel")
    _add_channel_flags(p)
    _output_flags(p, ("text", "json"), "text")

    p = sub.add_parser("teleport", help="run the protocol for one input state")
    _add_channel_flags(p)
    p.add_argument("--input-bloch", type=parse_bloch, required=True, metavar="THETA_B,PHI")
    _output_flags(p, ("text", "json"), "text")

    p = sub.add_parser("sweep", help="metrics over a parameter grid")
    _add_channel_flags(p)
    p.add_argument("--param", required=True)
    p.add_argument("--from", dest="start", type=parse_real, required=True)
    p.add_argument("--to", dest="stop", type=parse_real, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--metrics", required=True, help=f"comma list from: {', '.join(sweep.METRICS)}")
    p.add_argument("--quadrature-n", type=int, default=64)
    _output_flags(p, ("csv", "json"), "csv")

    p = sub.add_parser("figure", help="dataset behind one of the five figures")
    p.add_argument("--id", type=int, required=True, choices=range(1, 6))
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--eps", type=parse_real, help="eps for figures 4 and 5 (defaults 0.2 / 0.4)")
    p.add_argument("--emit-gnuplot", action="store_true", help="also write <out>.gp next to the data")
    _output_flags(p, ("csv", "json"), "csv")

    p = sub.add_parser("threshold", help="where a curve crosses a target value")
    p.add_argument("--curve", required=True, choices=sweep.CURVES)
    p.add_argument("--target", type=parse_real, default=2.0 / 3.0)
    p.add_argument("--ysq", type=parse_real)
    p.add_argument("--eps", type=parse_real)

    p = sub.add_parser("crossing", help="where two curves cross on [0, 1]")
    p.add_argument("--curve-a", required=True, choices=sweep.CURVES)
    p.add_argument("--curve-b", required=True, choices=sweep.CURVES)
    p.add_argument("--ysq", type=parse_real)
    p.add_argument("--eps", type=parse_real)

    p = sub.add_parser("verify", help="run the oracle-vs-formula suite")
    p.add_argument("--tol", type=parse_real, help="replace every check tolerance")
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--mc-samples", type=int, default=verify.MC_SAMPLES)
    p.add_argument("--out")
    return parser


def expand_args_from(argv: list[str]) -> list[str]:
    """Splice the contents of ``--args-from FILE`` into the argument list."""
    out: list[str] = []
    it = iter(argv)
    for arg in it:
        if arg == "--args-from" or arg.startswith("--args-from="):
            path = arg.split("=", 1)[1] if "=" in arg else next(it, None)
            if path is None:
                raise CliError("--args-from needs a file path")
            try:
                with open(path, encoding="utf-8") as fh:
                    out.extend(shlex.split(fh.read(), comments=True))
            except OSError as exc:
                raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from None
        else:
            out.append(arg)
    return out


def channel_params(args, skip: Sequence[str] = ()) -> tuple[ChannelKind, dict]:
    """Validated family and parameter map from the channel flags."""
    kind = ChannelKind.parse(args.channel)
    given = {k: getattr(args, k) for k in CHANNEL_FLAGS if getattr(args, k) is not None}
    allowed = CHANNEL_PARAMS[kind]
    for name in given:
        if name not in allowed:
            raise CliError(f"--{name} does not apply to --channel {kind.value}")
    for name in REQUIRED[kind]:
        if name not in given and name not in skip:
            raise CliError(f"--{name} is required for --channel {kind.value}")
    if kind is ChannelKind.NONORTH_MIXED:
        if "g" in given and "eps" in given:
            raise CliError("--g and --eps are mutually exclusive")
        if "g" not in given and "eps" not in given and not {"g", "eps"} & set(skip):
            raise CliError("--channel nonorth-mixed needs --g or --eps")
    return kind, given


def _params_text(params: dict) -> str:
    return ", ".join(f"{k}={format_float(v)}" for k, v in params.items())


def _num(x) -> float:
    return float(format_float(x))


def cmd_metrics(args) -> str:
    kind, params = channel_params(args)
    rep = ent.report(make_channel(kind, **params))
    if args.format == "json":
        payload = {
            "channel": kind.value,
            "params": {k: _num(v) for k, v in params.items()},
            "concurrence": _num(rep.concurrence),
            "negativity": _num(rep.negativity),
            "nu": _num(rep.nu),
            "useful": rep.useful,
        }
        return json.dumps(payload, indent=2) + "\n"
    return (
        f"channel: {kind.value} ({_params_text(params)})\n"
        f"concurrence: {format_float(rep.concurrence)}\n"
        f"negativity: {format_float(rep.negativity)}\n"
        f"nu: {format_float(rep.nu)}\n"
        f"useful: {'true' if rep.useful else 'false'}\n"
    )


def _state_json(state):
    if state is None:
        return None
    if state.ndim == 1:
        return [_num(v) for z in state for v in (z.real, z.imag)]
    return [[[_num(z.real), _num(z.imag)] for z in row] for row in state]


def cmd_teleport(args) -> str:
    kind, params = channel_params(args)
    channel = make_channel(kind, **params)
    theta_b, phi = args.input_bloch
    res = tp.teleport(input_state(theta_b, phi), channel)
    key = "state" if channel.is_pure else "rho"
    if args.format == "json":
        payload = {
            "channel": kind.value,
            "params": {k: _num(v) for k, v in params.items()},
            "input": {"theta_b": _num(theta_b), "phi": _num(phi)},
            "outcomes": [
                {"tag": o.tag.name, "prob": _num(o.probability), key: _state_json(o.state)}
                for o in res.outcomes
            ],
            "fidelity": _num(res.fidelity),
        }
        return json.dumps(payload, indent=2) + "\n"
    lines = [f"channel: {kind.value} ({_params_text(params)})",
             f"input: theta_b={format_float(theta_b)}, phi={format_float(phi)}"]
    for o in res.outcomes:
        f = "absent" if o.state is None else format_float(o.fidelity)
        lines.append(f"{o.tag.name:<10} prob={format_float(o.probability)}  fidelity={f}")
    lines.append(f"fidelity: {format_float(res.fidelity)}")
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> str:
    kind, fixed = channel_params(args, skip=(args.param,))
    if args.param in fixed:
        raise CliError(f"--{args.param} is swept; do not also fix it")
    metrics = tuple(m.strip() for m in args.metrics.split(",") if m.strip())
    spec = sweep.SweepSpec(kind, args.param, args.start, args.stop, args.steps, metrics, fixed,
                           quadrature_n=args.quadrature_n)
    table = sweep.sweep_table(spec, sweep.run_sweep(spec))
    return table.to_json() if args.format == "json" else table.to_csv()


def cmd_figure(args) -> tuple[str, Optional[tuple[str, str]]]:
    if args.eps is not None and args.id not in (4, 5):
        raise CliError("--eps only applies to figures 4 and 5")
    table = sweep.figure_dataset(args.id, args.points, args.eps)
    text = table.to_json() if args.format == "json" else table.to_csv()
    extra = None
    if args.emit_gnuplot:
        if not args.out:
            raise CliError("--emit-gnuplot needs --out")
        if args.format != "csv":
            raise CliError("--emit-gnuplot needs --format csv")
        script_path = os.path.splitext(args.out)[0] + ".gp"
        extra = (script_path, sweep.gnuplot_script(args.id, table, os.path.basename(args.out)))
    return text, extra


def _curve(name: str, args):
    fixed = {}
    if name in ("noes_point", "nmes_point"):
        if args.ysq is None:
            raise CliError(f"curve {name} needs --ysq")
        fixed["ysq"] = args.ysq
    if name == "nonorth_mixed_avg":
        if args.eps is None:
            raise CliError(f"curve {name} needs --eps")
        fixed["eps"] = args.eps
    return sweep.curve(name, **fixed)


def write_output(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from None


def run(args) -> int:
    if args.command == "metrics":
        write_output(cmd_metrics(args), args.out)
    elif args.command == "teleport":
        write_output(cmd_teleport(args), args.out)
    elif args.command == "sweep":
        write_output(cmd_sweep(args), args.out)
    elif args.command == "figure":
        text, extra = cmd_figure(args)
        write_output(text, args.out)
        if extra:
            write_output(extra[1], extra[0])
    elif args.command == "threshold":
        t = sweep.find_threshold(_curve(args.curve, args), args.target)
        write_output(f"{format_float(t)}\n", None)
    elif args.command == "crossing":
        t = sweep.find_crossing(_curve(args.curve_a, args), _curve(args.curve_b, args))
        write_output(f"{format_float(t)}\n", None)
    elif args.command == "verify":
        if args.mc_samples < 1000:
            raise CliError("--mc-samples must be at least 1000")
        results = verify.run_checks(args.tol, args.seed, args.mc_samples)
        write_output(verify.format_report(results, verify.findings()), args.out)
        return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        argv = expand_args_from(list(sys.argv[1:] if argv is None else argv))
    except CliError as exc:
        parser.print_usage(sys.stderr)
        print(f"teleportlab: error: {exc}", file=sys.stderr)
        return exc.code
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run(args)
    except CliError as exc:
        print(f"teleportlab: error: {exc}", file=sys.stderr)
        return exc.code
    except ParameterError as exc:
        print(f"teleportlab: error: --{exc.param}: {str(exc).split(': ', 1)[1]}", file=sys.stderr)
        return EXIT_ARGS
    except ValueError as exc:
        print(f"teleportlab: error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
