"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 verification failure.
Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from . import __version__
from .averaging import iterate_average
from .bounds import lower_bound
from .core import MAX_EXACT_N, NetworkTopology, TimeModel, load_topology, validate
from .errors import DiscoveryError, NoConvergence, TooManyNeighbors
from .expectation import expected_discovery_time, expected_time_quadrature, slotted_expected_time
from .simulator import simulate_discovery
from .verification import run_all

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class AnalysisOptions:
    exact: bool = True
    simulate: bool = False
    model: TimeModel = TimeModel.CONTINUOUS_EXPONENTIAL
    reps: int = 100_000
    seed: int = 42
    workers: int = 1
    max_exact_n: int = MAX_EXACT_N


def analyze_topology(topology: NetworkTopology, options: AnalysisOptions | None = None) -> list[dict]:
    """One row per node, sorted by node id. A failing node gets an ``error``
    entry in its row; the other nodes are still analysed."""
    options = options or AnalysisOptions()
    rows = []
    for node_id, p in sorted(topology.nodes.items()):
        row = {"node_id": node_id, "n": p.n, "exact": None, "bound": None, "gap": None}
        errors = []
        rep = lower_bound(p, with_exact=False)
        row["bound"] = rep.bound
        if options.exact:
            try:
                exact = expected_discovery_time(p, options.max_exact_n).value
            except TooManyNeighbors as exc:
                errors.append(f"TooManyNeighbors: {exc}")
            else:
                row["exact"] = exact
                row["gap"] = exact - rep.bound
        if options.simulate:
            row.update(sim_mean=None, ci95_low=None, ci95_high=None)
            try:
                sim = simulate_discovery(p, options.model, options.reps, options.seed, options.workers)
            except DiscoveryError as exc:
                errors.append(f"{type(exc).__name__}: {exc}")
            else:
                row.update(sim_mean=sim.mean, ci95_low=sim.ci95_low, ci95_high=sim.ci95_high)
        row["error"] = "; ".join(errors) or None
        rows.append(row)
    return rows


# -- output -----------------------------------------------------------------

def _fmt_csv(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _fmt_table(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def emit(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        json.dump(rows, out, indent=2, allow_nan=False)
        out.write("\n")
        return
    columns = list(dict.fromkeys(k for row in rows for k in row))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt_csv(row.get(c)) for c in columns])
        out.write(buf.getvalue())
        return
    cells = [columns] + [[_fmt_table(row.get(c)) for c in columns] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    for r in cells:
        out.write("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n")


# -- subcommands ------------------------------------------------------------

def cmd_exact(args) -> list[dict]:
    p = validate(args.probabilities)
    if args.quadrature:
        rep = expected_time_quadrature(p, args.rel_tol)
    elif args.model is TimeModel.SLOTTED_GEOMETRIC:
        rep = slotted_expected_time(p, args.max_exact_n)
    else:
        rep = expected_discovery_time(p, args.max_exact_n)
    return [rep.to_json()]


def cmd_bound(args) -> list[dict]:
    return [lower_bound(args.probabilities, max_exact_n=args.max_exact_n).to_json()]


def cmd_simulate(args) -> list[dict]:
    rep = simulate_discovery(args.probabilities, args.model, args.reps, args.seed, args.workers)
    return [rep.to_json()]


def cmd_analyze(args) -> list[dict]:
    if args.topology == "-":
        topology = load_topology(sys.stdin)
    else:
        try:
            with open(args.topology, encoding="utf-8") as fp:
                topology = load_topology(fp)
        except OSError as exc:
            raise UsageError(f"cannot read {args.topology}: {exc}") from exc
    opts = AnalysisOptions(
        exact=not args.no_exact,
        simulate=args.simulate,
        model=args.model,
        reps=args.reps,
        seed=args.seed,
        workers=args.workers,
        max_exact_n=args.max_exact_n,
    )
    return analyze_topology(topology, opts)


def _model(name: str) -> TimeModel:
    try:
        return TimeModel(name)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown model {name!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--max-exact-n", type=int, default=MAX_EXACT_N)

    sim = _Parser(add_help=False)
    sim.add_argument("--model", type=_model, default=TimeModel.CONTINUOUS_EXPONENTIAL,
                     help="exponential (default) or slotted")
    sim.add_argument("--reps", type=int, default=100_000)
    sim.add_argument("--seed", type=int, default=42)
    sim.add_argument("--workers", type=int, default=1)

    parser = _Parser(prog="ndbound", description="Expected neighbor-discovery times and their lower bound.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("exact", parents=[common], help="exact expected discovery time")
    p.add_argument("probabilities", type=float, nargs="+")
    p.add_argument("--model", type=_model, default=TimeModel.CONTINUOUS_EXPONENTIAL)
    p.add_argument("--quadrature", action="store_true", help="integrate the survival function instead")
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("bound", parents=[common], help="harmonic lower bound and gap")
    p.add_argument("probabilities", type=float, nargs="+")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("simulate", parents=[common, sim], help="Monte Carlo estimate")
    p.add_argument("probabilities", type=float, nargs="+")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("converge", help="CSV trace of repeated pair-averaging sweeps")
    p.add_argument("values", type=float, nargs="+")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iters", type=int, default=100_000)
    p.set_defaults(func=None)

    p = sub.add_parser("verify", parents=[common], help="run the randomised inequality sweeps")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--x-step", type=float, default=0.01)
    p.add_argument("--t-max", type=float, default=50.0)
    p.add_argument("--t-step", type=float, default=0.1)
    p.add_argument("--limit-power", type=int, default=2000)
    p.set_defaults(func=None)

    p = sub.add_parser("analyze", parents=[common, sim], help="analyse every node of a JSON topology")
    p.add_argument("topology", help="path to topology JSON, or - for stdin")
    p.add_argument("--no-exact", action="store_true")
    p.add_argument("--simulate", action="store_true")
    p.set_defaults(func=cmd_analyze)
    return parser


def _converge(args, out) -> int:
    try:
        trace = iterate_average(args.values, args.tol, args.max_iters)
        code = EXIT_OK
    except NoConvergence as exc:
        trace = exc.partial
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_VERIFY
    writer = csv.writer(out, lineterminator="\r\n")
    writer.writerow(["iteration", "max_deviation"])
    for i, dev in enumerate(trace.deviations):
        writer.writerow([i, format(dev, ".17g")])
    return code


def _verify(args, out) -> int:
    results = run_all(args.seed, args.instances, args.max_n, args.x_step, args.t_max, args.t_step,
                      args.limit_power)
    emit([r.to_json() for r in results], args.format, out)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("verification failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "converge":
            return _converge(args, out)
        if args.command == "verify":
            return _verify(args, out)
        rows = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DiscoveryError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    emit(rows, args.format, out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
