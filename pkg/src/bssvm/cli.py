"""Command-line front end: ``bssvm run|transform|validate|list|encode|decode``.

Exit codes: 0 success, 2 divergence (budget exhausted or faulted run),
1 run-time errors, 64 usage errors, 65 malformed input files or values.
The default step budget can be set with the BSSVM_BUDGET environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import stdlib, transforms
from .exactnum import format_rational, parse_rational
from .execute import (
    Diverged, Mode, StreamFormatError, Terminated, UndecidedComparison, Valid, dump_stream,
    dump_trace, load_stream, record_path, run_bss, run_strong, run_weak, validate_strong,
)
from .machine import AssemblyError, DecodeError, decode_machine, encode_machine, format_program, parse_program
from .oracle import Budgeted, Layered, Oracle, TableFormatError, UnknownQuery, parse_table

EXIT_OK, EXIT_ERROR, EXIT_DIVERGED, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65
DEFAULT_BUDGET = 10**6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_budget() -> int:
    raw = os.environ.get("BSSVM_BUDGET")
    if not raw:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"BSSVM_BUDGET must be an integer, not {raw!r}") from None
    if value < 1:
        raise UsageError("BSSVM_BUDGET must be >= 1")
    return value


def load_program(ref: str):
    """A ``stdlib:NAME`` reference or a path to a ``.bss`` file."""
    if ref.startswith("stdlib:"):
        return stdlib.load(ref[len("stdlib:"):])
    path = Path(ref)
    return parse_program(path.read_text(encoding="utf-8"), name=path.stem)


def parse_inputs(text: str | None) -> list:
    if not text:
        return []
    return [stdlib.resolve_token(t.strip()) for t in text.split(",")]


def parse_oracle(spec: str | None):
    """``budget:N``, ``layered:N`` or ``table:FILE``."""
    if not spec or spec == "none":
        return None
    kind, _, arg = spec.partition(":")
    if kind in ("budget", "layered"):
        try:
            n = int(arg)
        except ValueError:
            raise UsageError(f"oracle {spec!r}: expected an integer step count") from None
        return Oracle(Budgeted(n) if kind == "budget" else Layered(n))
    if kind == "table":
        return Oracle(parse_table(Path(arg).read_text(encoding="utf-8")))
    raise UsageError(f"unknown oracle policy {spec!r} (use budget:N, layered:N or table:FILE)")


def _values(vec) -> str:
    return ", ".join(format_rational(v) for v in vec)


def cmd_run(args) -> int:
    program = load_program(args.program)
    inputs = parse_inputs(args.input)
    budget = args.budget if args.budget is not None else _default_budget()
    if budget < 1:
        raise UsageError("--budget must be >= 1")
    oracle = parse_oracle(args.oracle)
    mode = Mode(args.mode)
    out = sys.stdout
    if mode is Mode.BSS:
        if args.trace:
            trace = record_path(program, inputs, budget=budget, oracle=oracle)
            Path(args.trace).write_text(dump_trace(trace), encoding="utf-8")
        result = run_bss(program, inputs, budget=budget, oracle=oracle)
        if args.format == "json":
            rec = ({"outcome": "terminated", "output": [format_rational(v) for v in result.output],
                    "steps": result.steps} if isinstance(result, Terminated)
                   else {"outcome": "diverged", "budget": result.budget, "reason": result.reason})
            out.write(json.dumps(rec, separators=(", ", ": ")) + "\n")
        elif isinstance(result, Terminated):
            out.write(f"Terminated({_values(result.output)})\n")
        else:
            out.write(f"{result}\n")
            if result.reason:
                print(f"reason: {result.reason}", file=sys.stderr)
        return EXIT_OK if isinstance(result, Terminated) else EXIT_DIVERGED
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    run = run_strong if mode is Mode.STRONG else run_weak
    stream = run(program, inputs, count=args.count, budget=budget, oracle=oracle)
    if args.format == "json":
        out.write(dump_stream(stream))
    else:
        for vec in stream.vectors:
            out.write(_values(vec) + "\n")
    if stream.fault:
        print(f"fault after {len(stream.vectors)} outputs: {stream.fault}", file=sys.stderr)
        return EXIT_DIVERGED
    if stream.exhausted_budget:
        print(f"Diverged({budget}) after {len(stream.vectors)} outputs", file=sys.stderr)
        return EXIT_DIVERGED
    if stream.halted and len(stream.vectors) < args.count:
        print(f"halted after {len(stream.vectors)} outputs", file=sys.stderr)
    return EXIT_OK


def _load_scheme(path: str) -> transforms.ApproximationScheme:
    """JSON: {"dim", "n_max", "m_max", "poly", "moduli_offset"}.

    ``poly`` is one polynomial used at every (n, m), or an object keyed by
    "n,m" with optional "*" fallback.  A polynomial is a coefficient list
    (one variable) or a list of [exponents, coefficient] pairs.
    """
    try:
        spec = json.loads(Path(path).read_text(encoding="utf-8"))
        dim = int(spec.get("dim", 1))

        def conv(p):
            if p and isinstance(p[0], list):
                return {tuple(e): parse_rational(str(c)) for e, c in p}
            return [parse_rational(str(c)) for c in p]

        raw = spec["poly"]
        table = {k: conv(v) for k, v in raw.items()} if isinstance(raw, dict) else {"*": conv(raw)}

        def poly(n, m):
            return table.get(f"{n},{m}", table.get("*"))

        offset = spec.get("moduli_offset")
        moduli = None if offset is None else (lambda n, m, o=int(offset): n + o)
        return transforms.ApproximationScheme(poly, dim=dim, n_max=int(spec.get("n_max", 12)),
                                              m_max=int(spec.get("m_max", 4)), moduli=moduli)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: bad scheme: {exc}") from None


def cmd_transform(args) -> int:
    name = args.name
    if name not in transforms.TRANSFORMERS:
        raise UsageError(f"unknown transformer {name!r}; known: {', '.join(transforms.TRANSFORMERS)}")
    progs = [load_program(p) for p in args.programs]
    want = {"epihypo": 2, "continuous-eval": 0}.get(name, 1)
    if len(progs) != want:
        raise UsageError(f"{name} takes {want} program argument(s), got {len(progs)}")
    if name in ("continuous-eval", "compose"):
        if not args.scheme:
            raise UsageError(f"{name} needs --scheme FILE")
        scheme = _load_scheme(args.scheme)
        result = transforms.TRANSFORMERS[name](*progs, scheme)
    elif name == "strong-oracle-to-weak":
        result = transforms.strong_oracle_to_weak(progs[0], dim=args.dim)
    else:
        result = transforms.TRANSFORMERS[name](*progs)
    text = format_program(result)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    vectors = load_stream(Path(args.stream).read_text(encoding="utf-8"))
    verdict = validate_strong(vectors, upto=args.upto)
    if isinstance(verdict, Valid):
        print("Valid")
        return EXIT_OK
    n, m = verdict.n, verdict.m
    print(f"{verdict}: y_{n} = ({_values(vectors[n - 1])}), y_{m} = ({_values(vectors[m - 1])})")
    return EXIT_ERROR


def cmd_list(args) -> int:
    for name in stdlib.names():
        e = stdlib.entry(name)
        tag = "helper" if e.helper else e.mode.value
        print(f"{name:<24} {tag:<7} {e.contract}")
    return EXIT_OK


def cmd_encode(args) -> int:
    print(format(encode_machine(load_program(args.program)), "x"))
    return EXIT_OK


def cmd_decode(args) -> int:
    text = args.code.strip().lower().removeprefix("0x")
    try:
        code = int(text, 16)
    except ValueError:
        raise DecodeError(f"not a hexadecimal code: {args.code!r}") from None
    sys.stdout.write(format_program(decode_machine(code)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bssvm", description="Exact real-RAM machines, analytic streams and their transformations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="run a program")
    r.add_argument("program", help="path to a .bss file or stdlib:NAME")
    r.add_argument("--input", help="comma-separated rationals p/q (also sqrt:q, code:NAME)")
    r.add_argument("--mode", choices=[m.value for m in Mode], default="bss")
    r.add_argument("--count", type=int, default=10, help="stream length (strong/weak)")
    r.add_argument("--budget", type=int, help="step budget (default: $BSSVM_BUDGET or 10^6)")
    r.add_argument("--oracle", help="budget:N | layered:N | table:FILE")
    r.add_argument("--format", choices=["human", "json"], default="human")
    r.add_argument("--trace", help="bss mode: also write the branch trace to this file")
    r.set_defaults(func=cmd_run)

    t = sub.add_parser("transform", help="apply a machine transformer")
    t.add_argument("name", help=", ".join(transforms.TRANSFORMERS))
    t.add_argument("programs", nargs="*", help="input programs (.bss paths or stdlib:NAME)")
    t.add_argument("-o", "--output", help="output .bss path (default stdout)")
    t.add_argument("--dim", type=int, default=1, help="output dimension (strong-oracle-to-weak)")
    t.add_argument("--scheme", help="JSON approximation scheme (continuous-eval, compose)")
    t.set_defaults(func=cmd_transform)

    v = sub.add_parser("validate", help="check a JSON-lines stream for the strong error bound")
    v.add_argument("stream")
    v.add_argument("--upto", type=int)
    v.set_defaults(func=cmd_validate)

    ls = sub.add_parser("list", help="list stdlib programs")
    ls.set_defaults(func=cmd_list)

    e = sub.add_parser("encode", help="print the Gödel code (hex) of a program")
    e.add_argument("program")
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="print the program with the given hex code")
    d.add_argument("code")
    d.set_defaults(func=cmd_decode)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"bssvm: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AssemblyError, DecodeError, StreamFormatError, TableFormatError, ValueError) as exc:
        print(f"bssvm: {exc}", file=sys.stderr)
        return EXIT_DATA
    except stdlib.UnknownEntry as exc:
        print(f"bssvm: {exc.args[0]}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, UnknownQuery, UndecidedComparison) as exc:
        print(f"bssvm: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
