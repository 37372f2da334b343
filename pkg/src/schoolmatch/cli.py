"""Command line front end.

Exit codes: 0 success, 1 invalid input (bad flags, unreadable or
malformed instance files), 2 internal invariant violation, 3 resource
guard tripped, 141 when the output pipe closes early. All report text
goes to stdout; run_command captures it so callers and tests can treat
an invocation as a pure function.
"""

import argparse
import contextlib
import io
import os
import sys
from typing import List, Optional, Sequence, Tuple

from . import verification
from .errors import InvalidInstanceError, ResourceLimitError
from .instances import FamilySpec
from .mechanisms import da_ttc, deferred_acceptance, eada
from .model import ConsentStructure, SchoolChoiceProblem
from .oracle import improvement_ratio
from .report import (
    build_comparison,
    render_comparison,
    render_cycles,
    render_feedback_sets,
    render_frontier,
    render_max_improve,
    render_solve,
)
from .textio import parse_instance_with_consent, serialize_instance

FAMILY_NAMES = ("example1", "example2", "example3")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # raise instead of exiting so run_command can map usage problems to
    # exit code 1 uniformly
    def error(self, message):
        raise _UsageError(message)


def _load(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return parse_instance_with_consent(text)


def _resolve_consent(
    problem: SchoolChoiceProblem,
    flag: Optional[str],
    from_file: Optional[ConsentStructure],
    default_all: bool,
) -> ConsentStructure:
    """Precedence: --consent flag, then the file's consent line, then
    the subcommand default."""
    if flag is not None:
        if flag.strip() == "all":
            return ConsentStructure.everyone(problem)
        names = [t for t in flag.replace(",", " ").split() if t]
        known = set(problem.students)
        for name in names:
            if name not in known:
                raise InvalidInstanceError(f"unknown student in --consent: {name}")
        return ConsentStructure(frozenset(names))
    if from_file is not None:
        return from_file
    if default_all:
        return ConsentStructure.everyone(problem)
    return ConsentStructure.nobody()


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_solve(ns) -> int:
    problem, file_consent = _load(ns.input)
    consent = None
    if ns.mechanism == "da":
        matching, _ = deferred_acceptance(problem)
    elif ns.mechanism == "da-school":
        matching, _ = deferred_acceptance(problem, proposing_side="schools")
    elif ns.mechanism == "da-ttc":
        matching = da_ttc(problem)
    else:
        consent = _resolve_consent(problem, ns.consent, file_consent, default_all=False)
        matching = eada(problem, consent)
    sys.stdout.write(render_solve(problem, ns.mechanism, matching, consent))
    return 0


def _cmd_cycles(ns) -> int:
    problem, _ = _load(ns.input)
    sys.stdout.write(render_cycles(problem))
    return 0


def _cmd_feedback_sets(ns) -> int:
    problem, _ = _load(ns.input)
    sys.stdout.write(render_feedback_sets(problem))
    return 0


def _cmd_max_improve(ns) -> int:
    problem, _ = _load(ns.input)
    sys.stdout.write(render_max_improve(problem))
    return 0


def _cmd_frontier(ns) -> int:
    problem, _ = _load(ns.input)
    sys.stdout.write(render_frontier(problem))
    return 0


def _cmd_compare(ns) -> int:
    problem, file_consent = _load(ns.input)
    consent = _resolve_consent(problem, ns.consent, file_consent, default_all=True)
    report = build_comparison(problem, consent)
    sys.stdout.write(render_comparison(report, consent))
    return 0


def _cmd_family(ns) -> int:
    problem = FamilySpec(family_name=ns.family, n=ns.n).build()
    text = serialize_instance(problem)
    if ns.emit:
        with open(ns.emit, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_ratio(ns) -> int:
    problem = FamilySpec(family_name=ns.family, n=ns.n).build()
    if ns.mechanism == "eada":
        matching = eada(problem, ConsentStructure.everyone(problem))
    else:
        matching = da_ttc(problem)
    value = improvement_ratio(problem, matching)
    print("undefined" if value is None else str(value))
    return 0


def _cmd_verify_paper(ns) -> int:
    total = failures = 0
    for key, description, checks in verification.run_all():
        print(f"criterion {key}: {description}")
        for check in checks:
            total += 1
            if check.passed:
                print(f"  PASS {check.label} = {check.actual}")
            else:
                failures += 1
                print(f"  FAIL {check.label}")
                print(f"       expected: {check.expected}")
                print(f"       actual:   {check.actual}")
        print()
    print("trading cycles over example1(7) and the blocking pairs each creates:")
    sys.stdout.write(verification.reference_cycle_table())
    print()
    print(f"{total} checks: {total - failures} passed, {failures} failed")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="schoolmatch", description="school choice matching reports")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    def command(name, handler, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(handler=handler)
        return p

    def add_input(p):
        p.add_argument("--input", required=True, metavar="FILE", help="instance file")

    p = command("solve", _cmd_solve, "run one mechanism on an instance file")
    p.add_argument(
        "--mechanism", required=True, choices=["da", "da-school", "eada", "da-ttc"]
    )
    add_input(p)
    p.add_argument(
        "--consent",
        metavar="all|LIST",
        help="all, or a comma separated student list; eada only; overrides "
        "the file's consent line (default: nobody consents)",
    )

    p = command(
        "cycles", _cmd_cycles, "trading cycles over the deferred acceptance result"
    )
    add_input(p)

    p = command(
        "feedback-sets",
        _cmd_feedback_sets,
        "disjoint cycle families clearing the envy digraph",
    )
    add_input(p)

    p = command(
        "max-improve",
        _cmd_max_improve,
        "exhaustive maximum of improved students over dominating matchings",
    )
    add_input(p)

    p = command(
        "frontier",
        _cmd_frontier,
        "efficient dominating matchings and minimal blocking sets",
    )
    add_input(p)

    p = command(
        "compare", _cmd_compare, "side by side mechanism report with oracle verdicts"
    )
    add_input(p)
    p.add_argument(
        "--consent",
        metavar="all|LIST",
        help="consent for the eada row (default: all consent)",
    )

    p = command("family", _cmd_family, "print or write a bundled instance family")
    p.add_argument("family", choices=list(FAMILY_NAMES))
    p.add_argument("--n", type=int, help="size parameter (example1 only)")
    p.add_argument("--emit", metavar="FILE", help="write the instance here instead")

    p = command("ratio", _cmd_ratio, "maximum improvement over the mechanism's count")
    p.add_argument("--family", required=True, choices=list(FAMILY_NAMES))
    p.add_argument("--n", type=int, help="size parameter (example1 only)")
    p.add_argument("--mechanism", required=True, choices=["eada", "da-ttc"])

    p = command(
        "verify-paper",
        _cmd_verify_paper,
        "replay the bundled reference checklist, printing expected vs. actual",
    )

    return parser


def _run(argv: List[str]) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}")
        return 1
    except SystemExit as exc:  # --help prints and exits
        return int(exc.code or 0)
    try:
        return ns.handler(ns)
    except (InvalidInstanceError, OSError) as exc:
        print(f"error: {exc}")
        return 1
    except ResourceLimitError as exc:
        print(f"error: {exc}")
        return 3
    except Exception as exc:
        print(f"internal error: {exc!r}")
        return 2


def run_command(argv: Sequence[str]) -> Tuple[int, str]:
    """Run one invocation and capture its report text."""
    buffer = io.StringIO()
    with contextlib.redirect_stdout(buffer):
        code = _run(list(argv))
    return code, buffer.getvalue()


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, text = run_command(sys.argv[1:] if argv is None else argv)
    try:
        sys.stdout.write(text)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader closed the pipe (say, piping into head); repoint stdout
        # at devnull so the interpreter's exit flush cannot raise again
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 141
    return code


if __name__ == "__main__":
    raise SystemExit(main())
