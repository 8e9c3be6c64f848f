"""
Command-line front end.

    qfid bound --n 25 --t 3 --p 0.01
    qfid code-info five_qubit.stab
    qfid decode-table steane.stab --format csv
    qfid channel-info depolarizing:0.04
    qfid simulate --code five_qubit.stab --channel dep004.json --state basis:0
    qfid sweep --alpha 0.2 --p 0.01 --n 10:200:10 --plot sweep.png

Exit status: 0 on success, 1 on bad input, 2 when a simulation falls below
one of its bounds.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .bound import (
    asymptotic_bound,
    binomial_bound,
    bounded_distance_bound,
    iid_product_bound,
    sweep_asymptotic,
)
from .channel import TOL, Channel, ChannelError, load_channel, parse_channel_kind, pauli_mass, validate
from .simulator import DOMINANCE_SLACK, ZERO_BRANCH, average_fidelity, parse_mode
from .stabilizer import CodeError, code_params, decoding_table, load_code

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def _channel(arg: str) -> Channel:
    path = Path(arg)
    if path.exists() or arg.endswith(".json"):
        return load_channel(path)
    return parse_channel_kind(arg)


def _int_list(text: str) -> list[int]:
    """'10,20,30' or 'start:stop:step' (stop inclusive)."""
    if ":" in text:
        parts = [int(v) for v in text.split(":")]
        if len(parts) == 2:
            parts.append(1)
        start, stop, step = parts
        if step <= 0:
            raise InputError(f"step must be positive in {text!r}")
        return list(range(start, stop + 1, step))
    return [int(v) for v in text.split(",") if v]


def _fmt(x: Any) -> str:
    if isinstance(x, bool) or x is None:
        return str(x)
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def _envelope(command: str, inputs: dict, results: dict, tol: float) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "results": results,
        "tolerances": {"kraus_completeness": tol, "dominance_slack": DOMINANCE_SLACK, "zero_branch": ZERO_BRANCH},
        "version": __version__,
    }


def _table_text(rows: list[dict]) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    cells = [[_fmt(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def _csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: _fmt(v) for k, v in r.items()})
    return buf.getvalue()


def _scalar(v: Any) -> bool:
    return not isinstance(v, (dict, list))


def _kv_text(d: dict, indent: str = "") -> str:
    lines = []
    for k, v in d.items():
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.append(_kv_text(v, indent + "  "))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{indent}{k}:")
            if all(_scalar(x) for row in v for x in row.values()):
                lines.extend(indent + "  " + line for line in _table_text(v).splitlines())
            else:
                for i, row in enumerate(v):
                    lines.append(f"{indent}  [{i}]")
                    lines.append(_kv_text(row, indent + "    "))
        elif isinstance(v, list) and v and isinstance(v[0], list):
            lines.append(f"{indent}{k}:")
            lines.extend(f"{indent}  " + "  ".join(_fmt(x) for x in row) for row in v)
        elif isinstance(v, list):
            lines.append(f"{indent}{k}: " + ", ".join(_fmt(x) for x in v))
        else:
            lines.append(f"{indent}{k}: {_fmt(v)}")
    return "\n".join(lines)


# subcommands return (inputs, results, rows-for-csv, exit code)


def cmd_bound(args) -> tuple[dict, dict, list[dict], int]:
    if args.code or args.channel:
        if not (args.code and args.channel):
            raise InputError("--code and --channel must be given together")
        code = load_code(args.code)
        ch = _channel(args.channel)
        n = code.n
        t = args.t if args.t is not None else code_params(code, args.weight_budget).t
        p = min(max(pauli_mass(ch, args.tolerance).p, 0.0), 1.0)
        inputs = {"code": str(args.code), "channel": str(args.channel), "n": n, "t": t, "p": p}
    else:
        if args.n is None or args.t is None or args.p is None:
            raise InputError("bound needs --n, --t and --p (or --code and --channel)")
        n, t, p = args.n, args.t, args.p
        inputs = {"n": n, "t": t, "p": p}
    binom = binomial_bound(n, t, p)
    results = {
        "binomial": binom.as_dict(),
        "product": {"label": "exact product form (i.i.d.)", "epsilon": iid_product_bound(n, t, p)},
        "asymptotic": {"label": "p^(t+1) 2^n", "epsilon": asymptotic_bound(n, t, p)},
    }
    if args.tprime is not None:
        inputs["tprime"] = args.tprime
        results["bounded-distance"] = bounded_distance_bound(n, args.tprime, p).as_dict()
    if args.plot:
        from .plotting import plot_bound_curve

        results["figure"] = str(plot_bound_curve(n, t, max(p, 1e-3), args.plot))
    rows = [{"bound": k, "epsilon": v["epsilon"]} for k, v in results.items() if isinstance(v, dict)]
    return inputs, results, rows, EXIT_OK


def cmd_code_info(args):
    code = load_code(args.code)
    params = code_params(code, args.weight_budget)
    results = {
        "n": code.n,
        "k": code.k,
        "d": params.d,
        "d_prime": params.d_prime,
        "t": params.t,
        "pure": params.pure,
        "complete": params.complete,
        "generators": [str(g) for g in code.generators],
    }
    inputs = {"code": str(args.code), "weight_budget": args.weight_budget}
    return inputs, results, [{k: v for k, v in results.items() if k != "generators"}], EXIT_OK


def cmd_decode_table(args):
    code = load_code(args.code)
    table = decoding_table(code)
    rows = [
        {"syndrome": "".join(map(str, s)), "leader": m.pattern(), "weight": m.weight, "ambiguous": amb}
        for s, (m, amb) in table.items()
    ]
    results = {"n": code.n, "k": code.k, "entries": rows}
    return {"code": str(args.code)}, results, rows, EXIT_OK


def cmd_channel_info(args):
    ch = _channel(args.channel)
    report = validate(ch, args.tolerance)
    results: dict = {"q": ch.q, "kraus_rank": ch.rank, "valid": report.ok, "deviation": report.deviation}
    rows = []
    if report.ok:
        mass = pauli_mass(ch, args.tolerance)
        grid = [[float(v) for v in row] for row in mass.masses]
        results.update({"ell0": mass.ell0, "ell1": mass.ell1, "p": mass.p, "total_mass": mass.total, "masses": grid})
        rows = [{"i": i, "j": j, "mass": grid[i][j]} for i in range(ch.q) for j in range(ch.q)]
    return {"channel": str(args.channel)}, results, rows, EXIT_OK if report.ok else EXIT_INPUT


def cmd_simulate(args):
    if not args.code or not args.channel:
        raise InputError("simulate needs --code and --channel")
    code = load_code(args.code)
    chs = [_channel(c) for c in args.channel]
    if len(chs) == 1:
        chs = chs * code.n
    parse_mode(args.mode)
    states = args.state or ["basis:0"]
    reports = [average_fidelity(code, chs, s, args.mode, tol=args.tolerance) for s in states]
    per_state = [r.as_dict() for r in reports]
    worst = min(reports, key=lambda r: r.average_fidelity)
    results = {
        "states": per_state,
        "min_average_fidelity": worst.average_fidelity,
        "bounds_hold": all(r.bounds_hold for r in reports),
        "verdict": "bound holds" if all(r.bounds_hold for r in reports) else "BOUND VIOLATED",
    }
    if args.plot:
        from .plotting import plot_branches

        results["figure"] = str(plot_branches(worst, args.plot))
    rows = []
    for r in reports:
        for b in r.branches:
            rows.append({"state": r.state, **{k: v for k, v in b.as_dict().items()}})
    inputs = {"code": str(args.code), "channel": list(args.channel), "state": states, "mode": args.mode or "full"}
    return inputs, results, rows, EXIT_OK if results["bounds_hold"] else EXIT_VIOLATION


def cmd_sweep(args):
    if args.alpha is None or args.p is None:
        raise InputError("sweep needs --alpha and --p")
    ns = _int_list(args.n) if args.n else list(range(10, 201, 10))
    points = sweep_asymptotic(args.alpha, args.p, ns)
    rows = [pt.as_dict() for pt in points]
    results = {"feasible": points[0].feasible if points else None, "points": rows}
    if args.plot:
        from .plotting import plot_sweep

        results["figure"] = str(plot_sweep(points, args.alpha, args.p, args.plot))
    return {"alpha": args.alpha, "p": args.p, "n": ns}, results, rows, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--tolerance", type=float, default=TOL, help="Kraus completeness tolerance")
    common.add_argument("--weight-budget", type=int, default=None, dest="weight_budget")
    common.add_argument("--plot", default=None, metavar="PATH", help="write a figure to PATH")

    parser = _Parser(prog="qfid", description="Fidelity bounds for stabilizer codes over memoryless channels.")
    parser.add_argument("--version", action="version", version=f"qfid {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("bound", parents=[common], help="evaluate the analytic bounds")
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--tprime", type=int)
    p.add_argument("--code")
    p.add_argument("--channel")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("code-info", parents=[common], help="code parameters n, k, d, d', t")
    p.add_argument("code")
    p.set_defaults(func=cmd_code_info)

    p = sub.add_parser("decode-table", parents=[common], help="minimum-weight coset leaders")
    p.add_argument("code")
    p.set_defaults(func=cmd_decode_table)

    p = sub.add_parser("channel-info", parents=[common], help="Pauli masses of a channel")
    p.add_argument("channel", help="JSON file or kind spec such as depolarizing:0.04")
    p.set_defaults(func=cmd_channel_info)

    p = sub.add_parser("simulate", parents=[common], help="exact simulation against the bounds")
    p.add_argument("--code")
    p.add_argument("--channel", action="append", help="once for all qubits, or once per qubit")
    p.add_argument("--state", action="append", help="basis:<i> or random:<seed>; repeatable")
    p.add_argument("--mode", default="full", help="full or bounded:<t'>")
    p.add_argument("--seed", type=int, help="shorthand for --state random:<seed>")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", parents=[common], help="t = floor(alpha n) sweep of the bound")
    p.add_argument("--alpha", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--n", help="comma list or start:stop:step")
    p.set_defaults(func=cmd_sweep)
    return parser


def render(fmt: str, envelope: dict, rows: list[dict]) -> str:
    if fmt == "json":
        return json.dumps(envelope, indent=2) + "\n"
    if fmt == "csv":
        return _csv(rows)
    head = f"qfid {envelope['command']} (v{envelope['version']})"
    body = _kv_text({"inputs": envelope["inputs"], "results": envelope["results"]})
    return head + "\n" + body + "\n"


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise InputError("a subcommand is required: " + ", ".join(parser._subparsers._group_actions[0].choices))
        if getattr(args, "seed", None) is not None:
            args.state = (args.state or []) + [f"random:{args.seed}"]
        inputs, results, rows, code = args.func(args)
    except (InputError, CodeError, ChannelError, ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    stdout.write(render(args.format, _envelope(args.command, inputs, results, args.tolerance), rows))
    if code == EXIT_VIOLATION:
        print("error: simulated fidelity fell below a bound", file=stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
