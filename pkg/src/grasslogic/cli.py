"""Command line surface: print canonical symbols, run verification suites,
and evaluate automaton words.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys

from .automaton import (
    EmptyWordError,
    Letter,
    MissingExponentialFormError,
    evolve_word,
    word_symbol_convolution,
    word_symbol_path_integral,
)
from .compose import CircuitNode, CompositionError, build_circuit
from .gates import GateConsistencyError
from .grassmann import GeneratorPool
from .parser import ParseError, parse_text, render_circuit
from .symbols import covariant_symbol, render_symbol
from .verify import run_scope


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def cmd_symbol(args) -> int:
    try:
        parsed = parse_text(_read(args.path))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not isinstance(parsed, CircuitNode):
        print("error: symbol expects a circuit file, not a word file", file=sys.stderr)
        return 2
    pool = GeneratorPool()
    try:
        gate = build_circuit(pool, parsed)
    except (CompositionError, GateConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sym = gate.covariant_sym if gate.is_square else gate.matrix_sym
    print(render_symbol(sym))
    return 0


def cmd_verify(args) -> int:
    try:
        results = run_scope(args.scope)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def _sliced(word, slices: int):
    if slices <= 1:
        return word
    out = []
    for letter in word:
        if letter.param is None:
            out.extend([letter] * slices)
        else:
            out.extend([Letter(letter.gate_name, letter.param / slices)] * slices)
    return tuple(out)


def cmd_automaton(args) -> int:
    try:
        parsed = parse_text(_read(args.path))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if isinstance(parsed, CircuitNode):
        print("error: automaton expects a word file, not a circuit", file=sys.stderr)
        return 2
    word = _sliced(parsed, args.slices)
    include_odd = not args.drop_odd_term
    try:
        if args.method == "compare":
            report = evolve_word(word, include_odd_cross=include_odd)
            print(report.table())
            return 0 if report.passed else 1
        pool = GeneratorPool()
        if args.method == "matrix":
            from .automaton import word_matrix

            sym = covariant_symbol(word_matrix(word, pool), pool)
        elif args.method == "convolution":
            sym = word_symbol_convolution(word, pool)
        else:
            sym = word_symbol_path_integral(word, pool, include_odd_cross=include_odd)
        print(render_symbol(sym))
        return 0
    except (EmptyWordError, MissingExponentialFormError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grasslogic",
        description="Symbol calculus for qubit logic gates and quantum automata",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_symbol = sub.add_parser("symbol", help="print the canonical symbol of a circuit file")
    p_symbol.add_argument("path")
    p_symbol.set_defaults(func=cmd_symbol)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument(
        "scope",
        choices=["algebra", "symbols", "gates", "composer", "automaton", "all"],
    )
    p_verify.set_defaults(func=cmd_verify)

    p_auto = sub.add_parser("automaton", help="evaluate a word file")
    p_auto.add_argument("path")
    p_auto.add_argument(
        "--method",
        choices=["matrix", "convolution", "pathint", "compare"],
        default="compare",
    )
    p_auto.add_argument(
        "--slices",
        type=int,
        default=1,
        help="subdivide every letter parameter into this many equal steps",
    )
    p_auto.add_argument(
        "--drop-odd-term",
        action="store_true",
        help="debug: drop the odd cross terms from the path-integral action",
    )
    p_auto.set_defaults(func=cmd_automaton)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
