"""BSS programs: instruction set, assembler, pretty-printer and Goedel coding.

Assembly is line oriented::

    # leading comment lines become the program's doc
    .const c0 = 3/4
    loop:
      ADD r0 r1          # r0 := r0 + r1
      JLT r0 r2 loop
      OUT 1
      HALT

Real registers are ``r<k>``, index registers ``i<k>``, constants ``c<k>``.
Jump targets are labels or absolute instruction numbers (0-based).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import NamedTuple

import gmpy2

from .exactnum import Rational, format_rational, parse_rational

# operand kinds
REAL, INDEX, CONST, LIT, TARGET = "r", "i", "c", "#", "@"

# Allowed operand kinds per position, one tuple per accepted arity.
_ARITH = (("r", "r"), ("r", "r", "r"))
SIGNATURES: dict[str, tuple[tuple[str, ...], ...]] = {
    "ADD": _ARITH,
    "SUB": _ARITH,
    "MUL": _ARITH,
    "DIV": _ARITH,
    "SETC": (("r", "c"),),
    "MOVR": (("r", "ri"),),
    "MOVI": (("i", "ir#"),),
    "INCI": (("i",),),
    "DECI": (("i",),),
    "LOADI": (("r", "i"),),
    "STOREI": (("i", "r"),),
    "JEQ": (("ri#", "ri#", "@"),),
    "JLT": (("ri#", "ri#", "@"),),
    "JMP": (("@",),),
    "OUT": (("i#",),),
    "HALT": ((),),
    # oracle query: code, input base, input dimension -> r0
    "QRY": (("rc", "r", "i#"),),
    # universal simulation: does the machine halt within `steps` (-1: unbounded) -> r0
    "UHALT": (("rc", "r", "i#", "i#"),),
    # universal simulation up to the n-th output:
    # code, input base, input dim, n, oracle budget (-1: ask the host's oracle),
    # output base, stride (0: n-th output only), status register
    "USIM": (("rc", "r", "i#", "i#", "i#", "r", "i#", "i"),),
}
OPCODES = tuple(SIGNATURES)
_OPCODE_BYTE = {op: k + 1 for k, op in enumerate(OPCODES)}
_KIND_BYTE = {REAL: 1, INDEX: 2, CONST: 3, LIT: 4, TARGET: 5}
_BYTE_KIND = {v: k for k, v in _KIND_BYTE.items()}


class Operand(NamedTuple):
    kind: str
    value: int

    def __str__(self):
        if self.kind == LIT or self.kind == TARGET:
            return str(self.value)
        return f"{self.kind}{self.value}"


class Instruction(NamedTuple):
    opcode: str
    operands: tuple[Operand, ...] = ()

    def __str__(self):
        return " ".join([self.opcode, *map(str, self.operands)])


class AssemblyError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


class AsmSyntaxError(AssemblyError):
    """Malformed token or line."""


class ValidationError(AssemblyError):
    """Well-formed text with a bad register, target or constant reference."""


class DecodeError(ValueError):
    """A natural number that is not the code of any program."""


@dataclass(frozen=True, eq=False)
class Program:
    instructions: tuple[Instruction, ...]
    constants: tuple[Rational, ...] = ()
    name: str = ""
    labels: dict = field(default_factory=dict)  # label -> instruction index
    doc: tuple[str, ...] = ()

    def __post_init__(self):
        validate(self)

    # Structural identity ignores cosmetic fields (name, labels, doc).
    def __eq__(self, other):
        if not isinstance(other, Program):
            return NotImplemented
        return self.instructions == other.instructions and self.constants == other.constants

    def __hash__(self):
        return hash((self.instructions, self.constants))

    def __len__(self):
        return len(self.instructions)

    @property
    def code(self) -> int:
        return encode_machine(self)


def validate(p: Program) -> None:
    if not p.instructions:
        raise ValidationError("empty program")
    n = len(p.instructions)
    for pc, ins in enumerate(p.instructions):
        sigs = SIGNATURES.get(ins.opcode)
        if sigs is None:
            raise ValidationError(f"instruction {pc}: unknown opcode {ins.opcode}")
        sig = next((s for s in sigs if len(s) == len(ins.operands)), None)
        if sig is None:
            raise ValidationError(f"instruction {pc}: {ins.opcode} takes "
                                  f"{' or '.join(str(len(s)) for s in sigs)} operands")
        for allowed, op in zip(sig, ins.operands):
            if op.kind not in allowed:
                raise ValidationError(f"instruction {pc}: operand {op} not allowed for {ins.opcode}")
            if op.kind in (REAL, INDEX, CONST) and op.value < 0:
                raise ValidationError(f"instruction {pc}: negative register {op}")
            if op.kind == TARGET and not 0 <= op.value < n:
                raise ValidationError(f"instruction {pc}: jump target {op.value} out of range")
            if op.kind == CONST and op.value >= len(p.constants):
                raise ValidationError(f"instruction {pc}: undefined constant {op}")


# -- assembler ---------------------------------------------------------------

_LABEL_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_.]*):")
_CONST_RE = re.compile(r"^\.const\s+c(\d+)\s*=\s*(\S+)\s*$")
_INT_RE = re.compile(r"^[+-]?\d+$")
_REG_RE = re.compile(r"^([ric])(\d+)$")
_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.]*$")


def parse_program(source: str, name: str = "") -> Program:
    doc: list[str] = []
    consts: dict[int, Rational] = {}
    labels: dict[str, int] = {}
    pending: list[tuple[str, list[tuple[str, int]], int]] = []  # opcode, raw operands, line
    in_header = True

    for lineno, raw in enumerate(source.splitlines(), start=1):
        stripped = raw.strip()
        if in_header and stripped.startswith("#") and not consts and not pending and not labels:
            doc.append(stripped[1:])
            continue
        text = raw.split("#", 1)[0]
        col = len(text) - len(text.lstrip()) + 1
        text = text.strip()
        if not text:
            continue
        if text.startswith("."):
            m = _CONST_RE.match(text)
            if not m:
                raise AsmSyntaxError(f"bad directive {text!r}", lineno, col)
            if not in_header:
                raise AsmSyntaxError(".const after the first instruction", lineno, col)
            k = int(m.group(1))
            if k != len(consts):
                raise ValidationError(f"constants must be declared in order; expected c{len(consts)}", lineno, col)
            try:
                consts[k] = parse_rational(m.group(2))
            except ValueError as exc:
                raise AsmSyntaxError(str(exc), lineno, col + text.find(m.group(2))) from None
            continue
        in_header = False
        while True:
            m = _LABEL_RE.match(text)
            if not m:
                break
            label = m.group(1)
            if label in labels:
                raise ValidationError(f"duplicate label {label!r}", lineno, col)
            labels[label] = len(pending)
            rest = text[m.end():]
            col += m.end() + (len(rest) - len(rest.lstrip()))
            text = rest.strip()
        if not text:
            continue
        tokens = []
        for tm in re.finditer(r"\S+", text):
            tokens.append((tm.group(0), col + tm.start()))
        opcode = tokens[0][0].upper()
        if opcode not in SIGNATURES:
            raise AsmSyntaxError(f"unknown opcode {tokens[0][0]!r}", lineno, tokens[0][1])
        pending.append((opcode, tokens[1:], lineno))

    if not pending:
        raise ValidationError("empty program")
    n = len(pending)
    for label, idx in labels.items():
        if idx >= n:
            raise ValidationError(f"label {label!r} does not precede an instruction")

    instructions = []
    for opcode, raw_ops, lineno in pending:
        sigs = SIGNATURES[opcode]
        sig = next((s for s in sigs if len(s) == len(raw_ops)), None)
        if sig is None:
            raise ValidationError(f"{opcode} takes {' or '.join(str(len(s)) for s in sigs)} operands",
                                  lineno, raw_ops[0][1] if raw_ops else None)
        ops = []
        for allowed, (tok, tcol) in zip(sig, raw_ops):
            ops.append(_operand(tok, allowed, labels, n, consts, lineno, tcol))
        instructions.append(Instruction(opcode, tuple(ops)))

    return Program(tuple(instructions), tuple(consts[k] for k in range(len(consts))),
                   name=name, labels=labels, doc=tuple(doc))


def _operand(tok, allowed, labels, n, consts, lineno, col) -> Operand:
    if allowed == TARGET:
        if _INT_RE.match(tok):
            v = int(tok)
        elif _IDENT_RE.match(tok):
            if tok not in labels:
                raise ValidationError(f"undefined label {tok!r}", lineno, col)
            v = labels[tok]
        else:
            raise AsmSyntaxError(f"bad jump target {tok!r}", lineno, col)
        if not 0 <= v < n:
            raise ValidationError(f"jump target {v} out of range", lineno, col)
        return Operand(TARGET, v)
    m = _REG_RE.match(tok)
    if m:
        kind, v = m.group(1), int(m.group(2))
        if kind not in allowed:
            raise ValidationError(f"operand {tok!r} not allowed here", lineno, col)
        if kind == CONST and v not in consts:
            raise ValidationError(f"undefined constant {tok!r}", lineno, col)
        return Operand(kind, v)
    if _INT_RE.match(tok):
        if LIT not in allowed:
            raise ValidationError(f"literal {tok!r} not allowed here", lineno, col)
        return Operand(LIT, int(tok))
    raise AsmSyntaxError(f"bad operand {tok!r}", lineno, col)


def format_program(p: Program) -> str:
    """Canonical assembly text; ``parse_program(format_program(p)) == p``."""
    lines = ["#" + d for d in p.doc]
    if p.doc:
        lines.append("")
    for k, c in enumerate(p.constants):
        lines.append(f".const c{k} = {format_rational(c)}")
    if p.constants:
        lines.append("")
    by_index: dict[int, list[str]] = {}
    for label, idx in sorted(p.labels.items(), key=lambda t: (t[1], t[0])):
        by_index.setdefault(idx, []).append(label)
    for pc, ins in enumerate(p.instructions):
        for label in by_index.get(pc, ()):
            lines.append(f"{label}:")
        parts = [ins.opcode]
        for op in ins.operands:
            if op.kind == TARGET and by_index.get(op.value):
                parts.append(by_index[op.value][0])
            else:
                parts.append(str(op))
        lines.append("  " + " ".join(parts))
    return "\n".join(lines) + "\n"


# -- Goedel coding -----------------------------------------------------------

def _put_varint(out: bytearray, n: int) -> None:
    if n < 0:
        raise ValueError("varint must be non-negative")
    while True:
        b = n & 0x7F
        n >>= 7
        if n:
            out.append(b | 0x80)
        else:
            out.append(b)
            return


def _zigzag(n: int) -> int:
    return 2 * n if n >= 0 else -2 * n - 1


def _unzigzag(z: int) -> int:
    return z // 2 if z % 2 == 0 else -(z + 1) // 2


def _serialize(p: Program) -> bytes:
    out = bytearray()
    _put_varint(out, len(p.constants))
    for c in p.constants:
        _put_varint(out, _zigzag(int(c.numerator)))
        _put_varint(out, int(c.denominator))
    _put_varint(out, len(p.instructions))
    for ins in p.instructions:
        out.append(_OPCODE_BYTE[ins.opcode])
        _put_varint(out, len(ins.operands))
        for op in ins.operands:
            out.append(_KIND_BYTE[op.kind])
            _put_varint(out, _zigzag(op.value))
    return bytes(out)


def encode_machine(p: Program) -> int:
    """Goedel number of ``p``: its byte serialization behind a 0x01 sentinel, base 256."""
    return int.from_bytes(b"\x01" + _serialize(p), "big")


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def byte(self) -> int:
        if self.pos >= len(self.data):
            raise DecodeError("truncated code")
        b = self.data[self.pos]
        self.pos += 1
        return b

    def varint(self) -> int:
        n, shift = 0, 0
        while True:
            b = self.byte()
            n |= (b & 0x7F) << shift
            shift += 7
            if not b & 0x80:
                return n


@lru_cache(maxsize=4096)
def decode_machine(code: int) -> Program:
    code = int(code)
    if code <= 0:
        raise DecodeError(f"{code} is not a program code")
    raw = code.to_bytes((code.bit_length() + 7) // 8, "big")
    if raw[0] != 1:
        raise DecodeError("missing sentinel byte")
    r = _Reader(raw[1:])
    consts = []
    for _ in range(r.varint()):
        num, den = _unzigzag(r.varint()), r.varint()
        if den == 0 or gcd(num, den) != 1:
            raise DecodeError("constant not in lowest terms")
        consts.append(gmpy2.mpq(num, den))
    instructions = []
    for _ in range(r.varint()):
        opb = r.byte()
        if not 1 <= opb <= len(OPCODES):
            raise DecodeError(f"bad opcode byte {opb}")
        ops = []
        for _ in range(r.varint()):
            kb = r.byte()
            if kb not in _BYTE_KIND:
                raise DecodeError(f"bad operand kind {kb}")
            ops.append(Operand(_BYTE_KIND[kb], _unzigzag(r.varint())))
        instructions.append(Instruction(OPCODES[opb - 1], tuple(ops)))
    if r.pos != len(r.data):
        raise DecodeError("trailing bytes")
    try:
        p = Program(tuple(instructions), tuple(consts), name=f"decoded")
    except ValidationError as exc:
        raise DecodeError(f"invalid program: {exc}") from None
    if _serialize(p) != raw[1:]:
        raise DecodeError("non-canonical encoding")
    return p
