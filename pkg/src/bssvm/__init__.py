"""Exact-arithmetic virtual machine for BSS (real-RAM) programs."""

from .exactnum import (
    DivisionByZero, DyadicInterval, Interval, Polynomial, Rational, RationalFunction, RealApprox,
    dyadic_round, format_rational, parse_rational, rat_op, ratfun_op, rational,
)
from .execute import (
    Configuration, Diverged, Mode, OutputStream, PathTrace, SymbolicMode, Terminated, Valid, Violation,
    dump_stream, load_stream, record_path, run_bss, run_strong, run_weak, step, symbolic_test,
    validate_strong,
)
from .machine import (
    AsmSyntaxError, DecodeError, Instruction, Program, ValidationError, decode_machine, encode_machine,
    format_program, parse_program,
)

__version__ = "0.1.0"
