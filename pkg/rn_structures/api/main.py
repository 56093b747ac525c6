import argparse
import json
import sys
from collections.abc import Sequence

from pydantic import ValidationError

from rn_structures.api import commands, utils
from rn_structures.api.contracts import CheckResult, Report
from rn_structures.api.reports import emit_report
from rn_structures.core.errors import Errors, RNStructuresError

# a mathematical precondition failing is a negative answer, not bad input
MATHEMATICAL_ERRORS = frozenset(
    {
        Errors.NOT_AN_R_MATRIX,
        Errors.NOT_NIJENHUIS,
        Errors.NOT_AN_RN_STRUCTURE,
        Errors.INCOMPATIBLE,
        Errors.NOT_AN_AUTOMORPHISM,
    }
)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise Errors.INVALID_DOCUMENT.as_exc(f"usage: {message}")


def create_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rn-structures", description="Exact r-matrix and r-n structure toolkit.")
    parser.add_argument("--json", action="store_true", help="emit the report as a JSON document")
    parser.add_argument("--log-level", default=None, help=f"overrides ${utils.LOG_LEVEL_ENV}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, handler, help_text in (
        ("verify-algebra", commands.verify_algebra, "Jacobi identity"),
        ("verify-r", commands.verify_r, "classical Yang-Baxter equation"),
        ("verify-n", commands.verify_n, "vanishing Nijenhuis torsion"),
        ("verify-rn", commands.verify_rn, "the four r-n conditions"),
        ("dual", commands.dual, "Sklyanin bracket on the dual"),
    ):
        command = sub.add_parser(name, help=help_text)
        command.add_argument("file")
        command.set_defaults(handler=handler)

    command = sub.add_parser("hierarchy", help="r_k = n^k r for k <= K")
    command.add_argument("file")
    command.add_argument("--k", type=int, default=4)
    command.set_defaults(handler=commands.hierarchy_)

    command = sub.add_parser("compat", help="compatibility of two r, n or r-n documents")
    command.add_argument("file1")
    command.add_argument("file2")
    command.set_defaults(handler=commands.compat)

    command = sub.add_parser("construct-n", help="n = r2 r^-1")
    command.add_argument("file_r")
    command.add_argument("file_r2")
    command.set_defaults(handler=commands.construct_n)

    command = sub.add_parser("equiv", help="automorphism witness for r ~ r2")
    command.add_argument("file1")
    command.add_argument("file2")
    mode = command.add_mutually_exclusive_group()
    mode.add_argument("--witness", help="document with an automorphism section")
    mode.add_argument("--search", action="store_true", help="search the catalog family (default)")
    command.add_argument("--family", help="catalog entry id; defaults to the algebra name")
    command.add_argument("--assign", action="append", help="algebra parameter, name=value")
    command.add_argument("--budget", type=int, default=2000, help="random trials after the grid")
    command.add_argument("--seed", type=int, default=0)
    command.set_defaults(handler=commands.equiv)

    catalog = sub.add_parser("catalog", help="the embedded classification tables")
    catalog_sub = catalog.add_subparsers(dest="catalog_command", required=True, parser_class=_Parser)
    catalog_sub.add_parser("list").set_defaults(handler=commands.catalog_list)

    command = catalog_sub.add_parser("show")
    command.add_argument("entry")
    command.add_argument("--instance", default="rn", help="class id: r/<id>, rn, n/<id> or automorphism")
    command.add_argument("--seed", type=int, default=0)
    command.set_defaults(handler=commands.catalog_show)

    command = catalog_sub.add_parser("verify")
    command.add_argument("--seed", type=int, default=1)
    command.add_argument("--samples", type=int, default=5)
    command.add_argument("--workers", type=int, default=None)
    command.add_argument(
        "--vary-algebra", action="store_true", help="sample algebra family parameters within their ranges"
    )
    command.set_defaults(handler=commands.catalog_verify)

    command = sub.add_parser("invariants", help="Lax matrix invariants of an integrable system")
    command.add_argument("file", nargs="?")
    command.add_argument("--example", action="store_true", help="use the embedded A4,1 system")
    command.add_argument("--kmax", type=int, default=3)
    command.add_argument("--trials", type=int, default=5)
    command.add_argument("--seed", type=int, default=0)
    command.set_defaults(handler=commands.invariants_)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Exit code 0 when every check passes, 1 on a negative answer, 2 on bad input."""
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = False
    try:
        args = create_parser().parse_args(argv)
        as_json = args.json
        utils.configure_logging(args.log_level)
        report = args.handler(args)
    except RNStructuresError as e:
        if e.error not in MATHEMATICAL_ERRORS:
            print(utils.describe_error(e), file=sys.stderr)
            return utils.EXIT_INPUT_ERROR
        report = Report(
            command=" ".join(argv),
            checks=[CheckResult(name=e.error.lower(), passed=False, detail=e.detail or "")],
        )
    except (ValidationError, json.JSONDecodeError, OSError) as e:
        print(utils.describe_error(e), file=sys.stderr)
        return utils.EXIT_INPUT_ERROR

    sys.stdout.write(emit_report(report, as_json))
    return utils.EXIT_OK if report.ok else utils.EXIT_FAILED


def main() -> None:
    sys.exit(run())
