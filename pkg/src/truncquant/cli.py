"""Command-line interface.

Usage::

    truncquant quantile --input measure.json --c 0.75
    truncquant bound --c 0.75 --mu3 2 --mu1 0.6666666666666666
    truncquant compare --input measure.json --format table
    truncquant extremal --c 0.75 --mu3 2 --mu1 0.6666666666666666
    truncquant mu-xi --input rvs.json | truncquant quantile --input - --c 0.5
    truncquant verify --seed 7 --trials 1000 --out report.json

Exit codes: 0 success, 1 verification found violations, 2 malformed input or
usage, 3 mathematically invalid parameters.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .bounds import bound_report, chen_shao_bound, optimal_bound
from .errors import (
    EmptyMeasureError,
    InputError,
    NonpositiveAtomError,
    SchemaError,
)
from .extremal import extremal_measure
from .measure import build_mu_xi, moment, moment_profile
from .serialize import dumps, format_float, load_measure, load_rvs, measure_to_dict, parse_json, read_text, to_plain
from .trunc_cdf import eval_L, quantile
from .verify import DEFAULT_C_GRID, DEFAULT_P_GRID, TrialConfig, run_bound_suite, run_strictness_suite

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_SCHEMA = 2
EXIT_DOMAIN = 3


class UsageError(Exception):
    pass


def _cell(v: Any) -> str:
    if isinstance(v, float):
        return format_float(v)
    if v is None:
        return ""
    return str(to_plain(v))


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _render_record(record: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(record)
    flat = {k: v for k, v in record.items() if not isinstance(v, (dict, list))}
    if fmt == "csv":
        return ",".join(flat) + "\n" + ",".join(_cell(v) for v in flat.values()) + "\n"
    width = max(len(k) for k in flat)
    return "".join(f"{k:<{width}}  {_cell(v)}\n" for k, v in flat.items())


def _render_rows(rows: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "json":
        return dumps(rows)
    cells = [[_cell(r[c]) for c in columns] for r in rows]
    if fmt == "csv":
        return "".join(",".join(line) + "\n" for line in [columns] + cells)
    widths = [max(len(c), *(len(line[i]) for line in cells)) for i, c in enumerate(columns)]
    lines = [columns] + cells
    return "".join("  ".join(s.rjust(w) for s, w in zip(line, widths)) + "\n" for line in lines)


def _grid(text: str, name: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise UsageError(f"--{name} must list at least one value")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--{name}: not a comma-separated list of numbers: {text!r}") from None


# -- subcommands ------------------------------------------------------------


def cmd_quantile(args) -> int:
    if args.input is None or args.c is None:
        raise UsageError("quantile requires --input and --c")
    m = load_measure(args.input)
    res = quantile(m, args.c)
    record = {
        "c": res.c,
        "delta": res.delta,
        "segment_index": res.segment_index,
        "method": res.method.value,
        "L_delta": eval_L(m, res.delta),
    }
    _write(_render_record(record, args.format), args.out)
    return EXIT_OK


def cmd_bound(args) -> int:
    if args.c is None:
        raise UsageError("bound requires --c")
    exact = None
    if args.input is not None:
        if args.mu1 is not None or args.mu3 is not None:
            raise UsageError("give either --input or --mu1/--mu3, not both")
        m = load_measure(args.input)
        prof = moment_profile(m)
        mu3, mu1 = prof.mu3, prof.mu1
        exact = quantile(m, args.c).delta
    else:
        if args.mu3 is None:
            raise UsageError("bound requires --mu3 (and --mu1 when c > 1/2) or --input")
        mu3, mu1 = args.mu3, args.mu1
    rep = bound_report(args.c, mu3, mu1, exact_delta=exact)
    record = {"mu3": mu3, "mu1": mu1, **to_plain(rep)}
    _write(_render_record(record, args.format), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    if args.input is None:
        raise UsageError("compare requires --input")
    c_grid = _grid(args.c_grid, "c-grid") if args.c_grid is not None else DEFAULT_C_GRID
    p_grid = _grid(args.p_grid, "p-grid") if args.p_grid is not None else DEFAULT_P_GRID
    m = load_measure(args.input)
    prof = moment_profile(m)
    rows = []
    for c in c_grid:
        delta = quantile(m, c).delta
        ds = optimal_bound(c, prof.mu3, prof.mu1)
        for p in p_grid:
            rows.append({"c": c, "p": p, "delta": delta, "delta_star": ds, "chen_shao": chen_shao_bound(p, moment(m, p))})
    _write(_render_rows(rows, ["c", "p", "delta", "delta_star", "chen_shao"], args.format), args.out)
    return EXIT_OK


def cmd_extremal(args) -> int:
    if args.c is None or args.mu3 is None:
        raise UsageError("extremal requires --c and --mu3 (and --mu1 when c > 1/2)")
    spec = extremal_measure(args.c, args.mu3, args.mu1)
    prof = moment_profile(spec.measure)
    record = {
        "c": spec.c,
        "mu3_target": spec.mu3_target,
        "mu1_target": spec.mu1_target,
        "u_star": spec.u_star,
        "v_star": spec.v_star,
        "pi": spec.pi,
        "delta": spec.delta,
        "delta_star": spec.delta_star,
        "realized_mu1": prof.mu1,
        "realized_mu3": prof.mu3,
        "measure": measure_to_dict(spec.measure),
    }
    text = _render_record(record, args.format)
    if args.format != "json":
        text += dumps(record["measure"])
    _write(text, args.out)
    return EXIT_OK


def cmd_mu_xi(args) -> int:
    if args.input is None:
        raise UsageError("mu-xi requires --input")
    m = build_mu_xi(load_rvs(args.input))
    if args.format == "csv":
        text = "x,w\n" + "".join(f"{format_float(x)},{format_float(w)}\n" for x, w in m.atoms)
    else:
        text = dumps(measure_to_dict(m))
    _write(text, args.out)
    return EXIT_OK


def _load_config(args) -> TrialConfig:
    data: dict = {}
    if args.input is not None:
        data = parse_json(read_text(args.input), args.input)
        # a previously written report carries its config and replays it
        if isinstance(data, dict) and isinstance(data.get("config"), dict):
            data = data["config"]
        if not isinstance(data, dict):
            raise SchemaError("expected a JSON object", where="$")
    data = dict(data)
    if args.seed is not None:
        data["seed"] = args.seed
    if args.trials is not None:
        data["n_trials"] = args.trials
    if args.workers is not None:
        data["workers"] = args.workers
    return TrialConfig.from_dict(data)


def cmd_verify(args) -> int:
    cfg = _load_config(args)
    bound = run_bound_suite(cfg)
    strict = run_strictness_suite(cfg)
    config = cfg.to_dict()
    config.pop("workers")
    report = {
        "config": config,
        "trials_run": bound.trials_run,
        "checks": bound.checks,
        "violations": bound.violations,
        "max_gap_ratio": bound.max_gap_ratio,
        "strictness_checks": strict.checks,
        "strictness_failures": strict.strictness_failures,
        "ok": bound.ok and strict.ok,
    }
    summary = (
        f"bound suite: {bound.trials_run} trials, {bound.checks} checks, "
        f"{len(bound.violations)} violations, max delta/delta* = {format_float(bound.max_gap_ratio)}\n"
        f"strictness suite: {strict.checks} checks, {len(strict.strictness_failures)} failures\n"
        f"result: {'PASS' if report['ok'] else 'FAIL'}\n"
    )
    if args.out:
        Path(args.out).write_text(dumps(report))
        sys.stdout.write(summary)
    elif args.format == "json":
        sys.stdout.write(dumps(report))
    else:
        sys.stdout.write(summary)
    return EXIT_OK if report["ok"] else EXIT_VIOLATIONS


COMMANDS = {
    "quantile": cmd_quantile,
    "bound": cmd_bound,
    "compare": cmd_compare,
    "extremal": cmd_extremal,
    "mu-xi": cmd_mu_xi,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="truncquant", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "quantile": "exact c-quantile of the truncation CDF of a measure",
        "bound": "optimal bound delta* from moments or from a measure file",
        "compare": "exact quantile vs optimal and Chen-Shao bounds over grids",
        "extremal": "measure attaining delta* for given c and moments",
        "mu-xi": "measure induced by a collection of random variables",
        "verify": "randomized bound and strictness suites",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--input", metavar="PATH", help="input file; '-' reads standard input")
        p.add_argument("--out", metavar="PATH", help="write output here instead of standard output")
        default_fmt = "table" if name == "compare" else "json"
        p.add_argument("--format", choices=("json", "csv", "table"), default=default_fmt)
        if name in ("quantile", "bound", "extremal"):
            p.add_argument("--c", type=float, help="quantile level in (0, 1)")
        if name in ("bound", "extremal"):
            p.add_argument("--mu1", type=float)
            p.add_argument("--mu3", type=float)
        if name == "compare":
            p.add_argument("--c-grid", metavar="LIST", help="comma-separated levels (default 0.1,...,0.9)")
            p.add_argument("--p-grid", metavar="LIST", help="comma-separated orders in (2, 6]")
        if name == "verify":
            p.add_argument("--seed", type=int)
            p.add_argument("--trials", type=int)
            p.add_argument("--workers", type=int)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (SchemaError, NonpositiveAtomError, EmptyMeasureError) as exc:
        print(f"truncquant: invalid input: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except InputError as exc:
        print(f"truncquant: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
