"""Command-line driver: ``check``, ``graph`` and ``run``.

Exit codes: 0 success, 1 compile errors, 2 usage or I/O error,
3 runtime fault or divergence. Payloads go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from archlang.arch import export_graph
from archlang.diagnostics import Reporter
from archlang.pipeline import Compilation, UnknownRoot, compile_files
from archlang.sim import RunConfig, RunError, UsageError, Verbosity, run, serialize_trace, stimulus_values
from archlang.syntax import parse_stimulus

EXIT_OK = 0
EXIT_ERRORS = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3


def _print_diagnostics(rep: Reporter) -> None:
    for d in rep.sorted():
        print(d, file=sys.stderr)


def _compile(paths, root) -> Compilation | int:
    rep = Reporter()
    try:
        comp = compile_files(paths, [root] if root else None, rep)
    except OSError as exc:
        print(f"archlang: cannot read {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    except UnicodeDecodeError as exc:
        print(f"archlang: source is not valid UTF-8: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownRoot as exc:
        _print_diagnostics(rep)
        print(f"archlang: unknown root component '{exc.args[0]}'", file=sys.stderr)
        return EXIT_USAGE
    _print_diagnostics(rep)
    if not comp.ok:
        return EXIT_ERRORS
    return comp


def cmd_check(args) -> int:
    comp = _compile(args.files, args.root)
    if isinstance(comp, int):
        return comp
    warnings = len(comp.reporter.diagnostics)
    print(f"ok: {len(comp.analysis.components)} component(s), {warnings} warning(s)",
          file=sys.stderr)
    return EXIT_OK


def cmd_graph(args) -> int:
    comp = _compile(args.files, args.root)
    if isinstance(comp, int):
        return comp
    ea, _ = comp.system(args.root)
    sys.stdout.write(export_graph(ea, args.format))
    return EXIT_OK


def cmd_run(args) -> int:
    comp = _compile(args.files, args.root)
    if isinstance(comp, int):
        return comp
    ea, rt = comp.system(args.root)

    stimuli = []
    if args.stimuli:
        try:
            text = Path(args.stimuli).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            print(f"archlang: cannot read stimuli {args.stimuli}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        rep = Reporter()
        parsed = parse_stimulus(text, args.stimuli, reporter=rep)
        if rep.has_errors:
            _print_diagnostics(rep)
            return EXIT_USAGE
        stimuli = stimulus_values(parsed)

    verbosity = Verbosity(args.trace)
    try:
        result = run(ea, rt, stimuli, RunConfig(args.max_steps, verbosity))
    except UsageError as exc:
        print(f"archlang: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RunError as exc:
        sys.stdout.write(serialize_trace(exc.trace, verbosity))
        sys.stdout.flush()
        if exc.fault is not None:
            print(f"error E0401 {exc.fault.pos} {exc}", file=sys.stderr)
        else:
            print(f"error E0402 {ea.components[ea.root_type].decl.pos} {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    sys.stdout.write(serialize_trace(result.trace, verbosity))
    return EXIT_OK


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="archlang",
        description="Check, render and simulate component architectures (.arc files).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and check sources, print diagnostics")
    p.add_argument("files", nargs="+", help=".arc source files")
    p.add_argument("--root", help="only elaborate this component (default: every structural one)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("graph", help="print the elaborated architecture")
    p.add_argument("files", nargs="+", help=".arc source files")
    p.add_argument("--root", required=True, help="component to elaborate")
    p.add_argument("--format", choices=("dot", "json"), default="dot", help="output format (default: dot)")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("run", help="simulate the architecture on a stimulus file")
    p.add_argument("files", nargs="+", help=".arc source files")
    p.add_argument("--root", required=True, help="component to run")
    p.add_argument("--stimuli", help="stimulus file, one '<port> <literal>' per line (default: none)")
    p.add_argument("--max-steps", type=_positive, default=10000,
                   help="abort with exit 3 after this many steps without quiescence (default: 10000)")
    p.add_argument("--trace", choices=("boundary", "full"), default="full",
                   help="boundary: INJECT and SYSTEM_OUT only; full: every event (default: full)")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
