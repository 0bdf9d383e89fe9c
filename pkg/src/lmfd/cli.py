"""Command-line interface: discover, synth, grammar, eval, rank."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from .errors import EmptyResult, LmfdError
from .evaluation import Binding, evaluate
from .fit import FitBudget
from .grammar import enumerate_structures, get_structure, render
from .metrics import abs_monotonicity
from .parsing import parse
from .search import SearchConfig, SearchReport, evaluate_result_series, run_search
from .synth import SynthConfig, generate_artificial, write_csv
from .timeseries import TimeSeriesTable, load_csv, z_normalize

log = logging.getLogger("lmfd")


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=42, help="seed for all randomized steps")
    parser.add_argument("--jobs", default="auto", help="worker count for the search (default: auto)")
    parser.add_argument(
        "--log-level",
        default="warning",
        choices=["debug", "info", "warning", "error"],
        help="logging verbosity on stderr",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmfd",
        description="Discover latent monotonic features (age proxies) in multivariate time series",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discover", help="run the full search and write a JSON report")
    p.add_argument("--input", required=True, help="CSV file with a header row")
    p.add_argument("--time-column", default=None, help="index column (integer or ISO-8601)")
    p.add_argument("--threshold", type=float, default=1.0,
                   help="drop sensors whose raw |rho| exceeds this (default: 1.0, keep all)")
    p.add_argument("--top-k", type=int, default=5, help="number of ranked results to report")
    p.add_argument("--budget", type=int, default=200, help="objective evaluations per candidate")
    p.add_argument("--refinement-fraction", type=float, default=0.5,
                   help="share of the budget spent on local refinement")
    p.add_argument("--output", default=None, help="report path (default: standard output)")
    p.add_argument("--emit-series", default=None, metavar="DIR",
                   help="also write one proxy-series CSV per result into DIR")
    _common_flags(p)

    p = sub.add_parser("synth", help="generate the artificial benchmark dataset")
    p.add_argument("--out", required=True, help="CSV path to write")
    p.add_argument("--n", type=int, default=1000, help="number of rows")
    p.add_argument("--noise-sigma", type=float, default=0.01, help="noise standard deviation")
    _common_flags(p)

    p = sub.add_parser("grammar", help="list the 55 canonical equation structures")
    p.add_argument("--count", action="store_true", help="print only the structure count")
    _common_flags(p)

    p = sub.add_parser("eval", help="score one equation on a dataset")
    p.add_argument("--input", required=True, help="CSV file with a header row")
    p.add_argument("--time-column", default=None, help="index column (integer or ISO-8601)")
    p.add_argument("--equation", required=True, help="equation text, e.g. 's2 + 0.642*exp(-0.982*s1)'")
    p.add_argument("--emit-series", default=None, metavar="FILE",
                   help="write the evaluated proxy series as CSV")
    _common_flags(p)

    p = sub.add_parser("rank", help="print per-sensor |rho| of the z-normalized input")
    p.add_argument("--input", required=True, help="CSV file with a header row")
    p.add_argument("--time-column", default=None, help="index column (integer or ISO-8601)")
    _common_flags(p)

    return parser


def _format_index(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def _write_series_csv(path: Path, index, proxy, s1, s2) -> None:
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write("index,proxy,s1,s2\n")
        for i in range(len(proxy)):
            s1_cell = repr(float(s1[i])) if s1 is not None else ""
            s2_cell = repr(float(s2[i])) if s2 is not None else ""
            handle.write(
                f"{_format_index(index[i])},{repr(float(proxy[i]))},{s1_cell},{s2_cell}\n"
            )


def _emit_discover_series(report: SearchReport, table: TimeSeriesTable, directory: str) -> None:
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # constant-column warnings already shown
        normalized = z_normalize(table)
    for row in report.results:
        proxy = evaluate_result_series(
            normalized, row.structure_id, row.s1, row.s2, row.constants
        )
        _write_series_csv(
            out_dir / f"result_{row.rank:02d}.csv",
            table.index,
            proxy,
            normalized.columns.get(row.s1) if row.s1 else None,
            normalized.columns.get(row.s2) if row.s2 else None,
        )


def _parse_jobs(raw: str) -> int | str:
    if raw == "auto":
        return raw
    try:
        return int(raw)
    except ValueError:
        raise LmfdError(f"--jobs must be an integer or 'auto', not {raw!r}") from None


def _cmd_discover(args) -> int:
    table = load_csv(args.input, time_column=args.time_column)
    config = SearchConfig(
        threshold=args.threshold,
        top_k=args.top_k,
        budget=FitBudget(
            max_evaluations=args.budget,
            seed=args.seed,
            refinement_fraction=args.refinement_fraction,
        ),
        parallelism=_parse_jobs(args.jobs),
    )
    report = run_search(table, config)
    payload = json.dumps(report.to_dict(), indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    for row in report.results:
        pretty = render(
            get_structure(row.structure_id),
            row.s1 or "s1",
            row.s2 or "s2",
            row.constants,
            precision=3,
        )
        log.info("rank %d  |rho| = %.4f  %s", row.rank, row.abs_rho, pretty)
    if args.emit_series:
        _emit_discover_series(report, table, args.emit_series)
    return 0


def _cmd_synth(args) -> int:
    table = generate_artificial(
        SynthConfig(n=args.n, seed=args.seed, noise_sigma=args.noise_sigma)
    )
    write_csv(table, args.out)
    log.info("wrote %d rows to %s", table.n, args.out)
    return 0


def _cmd_grammar(args) -> int:
    structures = enumerate_structures()
    if args.count:
        print(len(structures))
        return 0
    for structure in structures:
        print(f"{structure.structure_id}\t{render(structure)}")
    return 0


def _cmd_eval(args) -> int:
    table = load_csv(args.input, time_column=args.time_column)
    normalized = z_normalize(table)
    structure, values, names = parse(args.equation)
    binding_series = {}
    for role in ("s1", "s2"):
        name = names[role]
        if name is None:
            continue
        if name not in normalized.columns:
            raise LmfdError(f"unknown sensor {name!r}; columns: {', '.join(normalized.names)}")
        binding_series[role] = normalized.columns[name]
    missing = [s.id for s in structure.slots if s.id not in values]
    if missing:
        raise LmfdError(f"equation leaves constants unassigned: {', '.join(missing)}")
    series, valid = evaluate(
        structure,
        Binding(
            s1=binding_series.get("s1"), s2=binding_series.get("s2"), constants=values
        ),
    )
    if not valid:
        raise LmfdError("equation evaluates to non-finite values on this data")
    print(repr(abs_monotonicity(series)))
    if args.emit_series:
        _write_series_csv(
            Path(args.emit_series),
            table.index,
            series,
            binding_series.get("s1"),
            binding_series.get("s2"),
        )
    return 0


def _cmd_rank(args) -> int:
    table = load_csv(args.input, time_column=args.time_column)
    normalized = z_normalize(table)
    scores = [(name, abs_monotonicity(col)) for name, col in normalized.columns.items()]
    scores.sort(key=lambda item: (-item[1], item[0]))
    print("name,abs_rho")
    for name, rho in scores:
        print(f"{name},{rho!r}")
    return 0


_COMMANDS = {
    "discover": _cmd_discover,
    "synth": _cmd_synth,
    "grammar": _cmd_grammar,
    "eval": _cmd_eval,
    "rank": _cmd_rank,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level.upper()),
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return _COMMANDS[args.command](args)
    except EmptyResult as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LmfdError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
