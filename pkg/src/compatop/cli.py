"""Command-line entry point: ``compatop <command> --input workspace.json``.

Exit status: 0 when every verdict passes, 1 when some check fails, 2 for
input or usage problems and 3 for internal consistency failures.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .commands import COMMANDS, COMPLEXES, UsageError, emit_report, induced_workspace, run_command
from .linalg import ContainmentError
from .report import DomainError
from .workspace import MissingBlockError, WorkspaceError, dump_workspace, load_workspace

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_LOGIC = 0, 1, 2, 3

log = logging.getLogger("compatop")

_HELP = {
    "check": "run every structural check the workspace supports",
    "cohomology": "cohomology dimensions of one of the cochain complexes",
    "mc": "Maurer-Cartan defect of the operator pair",
    "obstruct": "obstruction class of a deformation",
    "extend": "try to extend a deformation by one order",
    "aybe": "Yang-Baxter checks and induced operators for the tensors block",
    "dendriform": "dendriform axioms, square-zero check and cohomology",
    "induce": "induced compatible algebra, bimodule and dendriform structure",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", required=True, help="workspace JSON file ('-' for stdin)")
    common.add_argument("--format", "-f", choices=("json", "text", "tsv"), default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="compatop", description="Compatible O-operator toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=_HELP[name], description=_HELP[name])
        if name == "cohomology":
            p.add_argument("--complex", "-c", required=True, choices=COMPLEXES)
            p.add_argument("--operator", type=int, choices=(1, 2), default=1, help="which operator for --complex o")
        if name in ("cohomology", "dendriform"):
            p.add_argument("--degree", "-d", type=int, nargs="+", help="degrees (default 0 1 2)")
        if name == "cohomology":
            p.add_argument("--figure", help="render a bar chart of the dimensions to this file")
        if name in ("obstruct", "extend"):
            p.add_argument("--order", type=int, help="truncate the workspace deformation to this order")
        if name == "induce":
            p.add_argument("--write-workspace", metavar="PATH",
                           help="write the workspace with the induced dendriform block")
    return parser


def _load(path: str):
    if path == "-":
        from .workspace import parse_workspace

        return parse_workspace(sys.stdin.buffer.read())
    return load_workspace(path)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        doc = _load(args.input)
        for w in doc.warnings:
            log.warning("%s", w)
        report = run_command(
            args.command,
            doc,
            complex=getattr(args, "complex", None),
            degrees=getattr(args, "degree", None),
            order=getattr(args, "order", None),
            operator=getattr(args, "operator", 1),
            input_name=args.input,
        )
    except OSError as exc:
        print(f"compatop: cannot read {args.input}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_INPUT
    except WorkspaceError as exc:
        print(f"compatop: invalid workspace {args.input}:", file=sys.stderr)
        for e in exc.errors:
            print(f"  {e}", file=sys.stderr)
        return EXIT_INPUT
    except (UsageError, MissingBlockError, DomainError) as exc:
        print(f"compatop {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ContainmentError, ArithmeticError) as exc:
        print(f"compatop {args.command}: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_LOGIC
    log.debug("finished in %.3f s", report.timing.get("total", 0.0))

    text = emit_report(report, args.format, include_timing=args.timing)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if getattr(args, "figure", None) and "cohomology" in report.results:
        from .plotting import cohomology_figure

        cohomology_figure(report.results["cohomology"], args.figure, f"complex {args.complex}")
    if getattr(args, "write_workspace", None) and report.passed:
        with open(args.write_workspace, "w", encoding="utf-8") as fh:
            fh.write(dump_workspace(induced_workspace(doc)))
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
