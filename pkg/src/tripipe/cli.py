"""Command-line front end.

Subcommands: count, verify, baseline, generate, profile.  Output is
line-oriented ``key: value`` text; report paths get a rendered figure
next to the delimited file unless --no-figure is passed.  Exit codes:
0 success, 1 invariant or verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys

from . import baseline_mr, figures, verify
from .engine import (
    BoundExceeded,
    ConfigError,
    Deadlock,
    RunConfig,
    run_instrumented,
    run_two_rounds,
)
from .graph_io import (
    EOF,
    EdgeSource,
    FileSource,
    GeneratorSource,
    GeneratorSpec,
    GraphInputError,
    generate,
    write_edge_list,
)
from .stage import ProtocolViolation

_RULE_FLAGS = {"product": "product", "paper-min": "paper_min"}


def _capacity(text: str):
    if text == "unbounded":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"capacity must be an integer or 'unbounded', got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("capacity must be >= 1")
    return value


def _add_input_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", metavar="PATH", help="edge-list file to read")
    group.add_argument("--gen", metavar="MODEL",
                       choices=("complete", "path", "cycle", "gnp"),
                       help="generate the input instead of reading a file")
    parser.add_argument("--n", type=int, metavar="N", help="node count for --gen")
    parser.add_argument("--p", type=float, metavar="P",
                        help="edge probability for --gen gnp")
    parser.add_argument("--seed", type=int, default=0, metavar="S",
                        help="seed for --gen gnp (default 0)")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", choices=("set", "list", "multiset"), default="set",
                        help="adjacency collection mode (default set)")
    parser.add_argument("--multiset-rule", choices=tuple(_RULE_FLAGS), default="product",
                        help="triangle increment rule in multiset mode (default product)")
    sched = parser.add_mutually_exclusive_group()
    sched.add_argument("--threads", type=int, metavar="K",
                       help="run with K worker threads")
    sched.add_argument("--cooperative", action="store_true",
                       help="single-threaded run (the default)")
    parser.add_argument("--capacity", type=_capacity, default=1024, metavar="C",
                        help="channel capacity, an integer or 'unbounded' (default 1024)")


def _source_from_args(args) -> EdgeSource:
    if args.input is not None:
        return FileSource(args.input)
    if args.n is None:
        raise ConfigError("--gen requires --n")
    spec = GeneratorSpec(args.gen, args.n, args.p, args.seed)
    return GeneratorSource(spec)


def _config_from_args(args, profile_path=None) -> RunConfig:
    if args.threads is not None:
        scheduler, workers = "threads", args.threads
    else:
        scheduler, workers = "cooperative", 1
    return RunConfig(
        mode=args.mode,
        multiset_rule=_RULE_FLAGS[args.multiset_rule],
        scheduler=scheduler,
        workers=workers,
        channel_capacity=args.capacity,
        profile_path=profile_path,
    )


def _emit_figure(render, payload, csv_path, no_figure: bool) -> None:
    if no_figure:
        return
    png = figures.figure_path_for(csv_path)
    render(payload, png)
    print(f"figure: {png}")


def cmd_count(args) -> int:
    source = _source_from_args(args)
    config = _config_from_args(args, profile_path=args.profile)
    if args.profile is not None:
        diag = run_instrumented(source, config)
        result = diag.result
        _emit_figure(figures.render_profile_figure, diag.profile, args.profile,
                     args.no_figure)
    else:
        result = run_two_rounds(source, config)
    if args.per_responsible:
        for label, count in result.per_responsible:
            print(f"{label}: {count}")
        print(f"total: {result.total}")
    else:
        print(f"triangles: {result.total}")
    return 0


def cmd_verify(args) -> int:
    source = _source_from_args(args)
    config = _config_from_args(args)
    checks = verify.run_verification(source, config)
    for check in checks:
        line = f"{check.name}: {check.label}"
        if check.detail:
            line += f" ({check.detail})"
        print(line)
    return 0 if verify.all_passed(checks) else 1


def cmd_baseline(args) -> int:
    source = _source_from_args(args)
    edges = [item for item in source.replay() if item is not EOF]
    graph_id = (args.graph_id or source.describe()).replace(",", "_")
    report = baseline_mr.compare_volumes(edges, graph_id=graph_id)
    print(baseline_mr.VOLUME_CSV_HEADER)
    print(report.csv_row())
    if args.output is not None:
        baseline_mr.export_volume_csv([report], args.output)
        _emit_figure(figures.render_volume_figure, [report], args.output,
                     args.no_figure)
    return 0


def cmd_generate(args) -> int:
    spec = GeneratorSpec(args.model, args.n, args.p, args.seed)
    lines = write_edge_list(args.output, generate(spec))
    print(f"edges: {lines}")
    print(f"output: {args.output}")
    return 0


def cmd_profile(args) -> int:
    source = _source_from_args(args)
    config = _config_from_args(args, profile_path=args.output)
    diag = run_instrumented(source, config)
    _emit_figure(figures.render_profile_figure, diag.profile, args.output,
                 args.no_figure)
    print(f"steps: {len(diag.profile)}")
    print(f"max_fireable: {diag.profile.max_fireable()}")
    print(f"stages: {diag.spawn_count}")
    print(f"triangles: {diag.result.total}")
    print(f"profile: {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tripipe",
        description="Count triangles in an edge stream with a dynamic two-pass pipeline.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_count = sub.add_parser("count", help="run the pipeline and print the triangle count")
    _add_input_flags(p_count)
    _add_run_flags(p_count)
    p_count.add_argument("--profile", metavar="PATH",
                         help="record the parallelism profile to this CSV path")
    p_count.add_argument("--per-responsible", action="store_true",
                         help="print one 'responsible: count' line per stage")
    p_count.add_argument("--no-figure", action="store_true",
                         help="skip figure rendering next to report files")
    p_count.set_defaults(handler=cmd_count)

    p_verify = sub.add_parser("verify", help="run invariant and oracle checks")
    _add_input_flags(p_verify)
    _add_run_flags(p_verify)
    p_verify.set_defaults(handler=cmd_verify)

    p_base = sub.add_parser("baseline",
                            help="compare mapreduce wedge volume with pipeline storage")
    _add_input_flags(p_base)
    p_base.add_argument("--output", "-o", metavar="PATH", help="write the CSV report here")
    p_base.add_argument("--graph-id", metavar="NAME", help="label for the CSV row")
    p_base.add_argument("--no-figure", action="store_true")
    p_base.set_defaults(handler=cmd_baseline)

    p_gen = sub.add_parser("generate", help="write a generated edge list to a file")
    p_gen.add_argument("--model", required=True,
                       choices=("complete", "path", "cycle", "gnp"))
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--p", type=float)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--output", "-o", required=True, metavar="PATH")
    p_gen.set_defaults(handler=cmd_generate)

    p_prof = sub.add_parser("profile",
                            help="run under lockstep accounting and export the profile")
    _add_input_flags(p_prof)
    _add_run_flags(p_prof)
    p_prof.add_argument("--output", "-o", required=True, metavar="PATH",
                        help="CSV path for the per-step profile")
    p_prof.add_argument("--no-figure", action="store_true")
    p_prof.set_defaults(handler=cmd_profile)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (GraphInputError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ProtocolViolation, Deadlock, BoundExceeded, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())
