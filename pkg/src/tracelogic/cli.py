"""Command-line front end.

Exit codes: 0 on success, 1 when ``equiv`` distinguishes its states or
``laws`` reports a failure, 2 on usage, file or parse errors.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from typing import Sequence, TextIO

from .automaton import AutomatonError, check_dist_law_axioms, format_automaton, parse_automaton
from .branching import check_monad_and_strength_laws
from .logic import (
    FormulaSyntaxError,
    actions,
    distinguish,
    evaluate,
    format_formula,
    format_normal_form,
    normal_form,
    parse_formula,
    refute,
)
from .semiring import SEMIRINGS, check_semiring_laws, get_semiring
from .trace import boolean_witness, first_difference, format_word, rational_span, trace_report


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tracelogic",
        description="Finite trace semantics and trace logic for weighted automata.",
        epilog='Quote formulas for the shell, e.g. --formula "<a>(<b>end + <c>end)".',
    )
    sub = p.add_subparsers(dest="command", required=True)

    def depth_arg(sp, required=True):
        sp.add_argument("--depth", type=int, required=required, metavar="N")

    sp = sub.add_parser("traces", help="print the trace table tr_N")
    sp.add_argument("file")
    depth_arg(sp)
    sp.add_argument("--state")

    sp = sub.add_parser("equiv", help="decide trace equivalence of two states")
    sp.add_argument("file")
    sp.add_argument("x")
    sp.add_argument("y")
    depth_arg(sp, required=False)
    sp.add_argument("--exact", action="store_true",
                    help="unbounded decision (boolean and rational only)")

    sp = sub.add_parser("eval", help="evaluate a formula at a state")
    sp.add_argument("file")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--state", required=True)

    sp = sub.add_parser("nf", help="print the normal form of a formula")
    sp.add_argument("--semiring", required=True, choices=list(SEMIRINGS))
    sp.add_argument("--alphabet", required=True)
    sp.add_argument("--formula", required=True)

    sp = sub.add_parser("distinguish", help="find a formula separating two states")
    sp.add_argument("file")
    sp.add_argument("x")
    sp.add_argument("y")
    depth_arg(sp)

    sp = sub.add_parser("refute", help="build a model separating two formulas")
    sp.add_argument("--semiring", required=True, choices=list(SEMIRINGS))
    sp.add_argument("--alphabet", required=True)
    sp.add_argument("phi")
    sp.add_argument("psi")

    sp = sub.add_parser("laws", help="run the sampled law suites")
    sp.add_argument("--semiring", required=True, choices=list(SEMIRINGS))
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    return p


def _load(path: str, stdin: TextIO):
    if path == "-":
        text = stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        return parse_automaton(text)
    except AutomatonError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _alphabet(text: str) -> tuple[str, ...]:
    letters = tuple(text.split())
    if not letters:
        raise UsageError("empty alphabet")
    return letters


def _formula(text: str, semiring, alphabet=None):
    f = parse_formula(text, semiring)
    if alphabet is not None:
        unknown = actions(f) - set(alphabet)
        if unknown:
            raise UsageError(f"unknown action(s) {', '.join(sorted(unknown))}")
    return f


def _cmd_traces(args, out, stdin):
    aut = _load(args.file, stdin)
    out.write(trace_report(aut, args.depth, args.state))
    return 0


def _cmd_equiv(args, out, stdin):
    aut = _load(args.file, stdin)
    aut.check_state(args.x)
    aut.check_state(args.y)
    if args.exact:
        if aut.semiring.name == "boolean":
            word = boolean_witness(aut, args.x, args.y)
        elif aut.semiring.name == "rational":
            word = rational_span(aut, args.x, args.y).witness
        else:
            raise UsageError(f"--exact is not available for semiring {aut.semiring.name}")
    elif args.depth is None:
        raise UsageError("equiv needs --depth N or --exact")
    else:
        word = first_difference(aut, args.x, args.y, args.depth)
    if word is None:
        out.write("equivalent\n")
        return 0
    out.write(f"distinguished at depth {len(word) + 1} by word "
              f"{format_word(word, aut.alphabet)}\n")
    return 1


def _cmd_eval(args, out, stdin):
    aut = _load(args.file, stdin)
    f = _formula(args.formula, aut.semiring, aut.alphabet)
    out.write(aut.semiring.format(evaluate(aut, f, args.state)) + "\n")
    return 0


def _cmd_nf(args, out, stdin):
    s = get_semiring(args.semiring)
    alphabet = _alphabet(args.alphabet)
    f = _formula(args.formula, s, alphabet)
    out.write(format_normal_form(normal_form(f, s), alphabet) + "\n")
    return 0


def _cmd_distinguish(args, out, stdin):
    aut = _load(args.file, stdin)
    f = distinguish(aut, args.x, args.y, args.depth)
    out.write(("none" if f is None else format_formula(f, aut.semiring)) + "\n")
    return 0


def _cmd_refute(args, out, stdin):
    s = get_semiring(args.semiring)
    alphabet = _alphabet(args.alphabet)
    phi = _formula(args.phi, s, alphabet)
    psi = _formula(args.psi, s, alphabet)
    found = refute(s, alphabet, phi, psi)
    if found is None:
        out.write("equal under axioms\n")
        return 0
    aut, state = found
    out.write(format_automaton(aut))
    out.write(f"# witness {state}: {s.format(evaluate(aut, phi, state))} "
              f"vs {s.format(evaluate(aut, psi, state))}\n")
    return 0


def _cmd_laws(args, out, stdin):
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    s = get_semiring(args.semiring)
    results = [
        *check_semiring_laws(s, args.samples, args.seed),
        *check_monad_and_strength_laws(s, args.samples, args.seed),
        *check_dist_law_axioms(s, args.samples, args.seed),
    ]
    for r in results:
        out.write(f"{s.name} {r}\n")
    failed = sum(not r.passed for r in results)
    out.write(f"{len(results) - failed}/{len(results)} laws passed\n")
    return 1 if failed else 0


_COMMANDS = {
    "traces": _cmd_traces,
    "equiv": _cmd_equiv,
    "eval": _cmd_eval,
    "nf": _cmd_nf,
    "distinguish": _cmd_distinguish,
    "refute": _cmd_refute,
    "laws": _cmd_laws,
}


def run(argv: Sequence[str], stdin: TextIO | None = None, stdout: TextIO | None = None,
        stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = _parser().parse_args(list(argv))
    except SystemExit as exc:
        return 2 if exc.code else 0
    if getattr(args, "depth", None) is not None and args.depth < 0:
        stderr.write("error: --depth must be nonnegative\n")
        return 2
    try:
        return _COMMANDS[args.command](args, stdout, stdin)
    except (UsageError, FormulaSyntaxError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except KeyError as exc:
        stderr.write(f"error: {exc.args[0]}\n")
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
