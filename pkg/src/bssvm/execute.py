"""Step semantics and run modes of the machine.

Three ways to run a program:

* :func:`run_bss` -- classical run; the result is the last output vector on HALT.
* :func:`run_strong` / :func:`run_weak` -- the program prints an (ideally
  infinite) sequence of output vectors; the n-th vector of a strong stream
  claims error at most 2^-n, a weak stream only claims convergence.

Divergence is approximated by step budgets throughout.  A run that faults
(division by exact zero, bad address) is treated as a run that never halts.

Registers normally hold Rationals.  In symbolic mode some inputs or program
constants are reals known only through approximations; registers then hold
:class:`~bssvm.exactnum.RationalFunction` values and every test is decided
by interval refinement, falling back to an oracle when refinement stalls.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

import gmpy2

from .exactnum import (
    ZERO, DivisionByZero, Interval, Rational, RationalFunction, RealApprox,
    dyadic_round, format_rational, interval_sign, parse_rational, rational,
)
from .machine import CONST, INDEX, LIT, REAL, Instruction, Program, decode_machine

Vector = tuple  # tuple of Rational


class Mode(str, Enum):
    BSS = "bss"
    STRONG = "strong"
    WEAK = "weak"


class MachineFault(RuntimeError):
    """Run-time error that aborts a run (treated as divergence)."""


class UndecidedComparison(RuntimeError):
    """Symbolic mode could not decide a test and had no oracle to ask."""

    def __init__(self, pc: int, value):
        super().__init__(f"instruction {pc}: cannot decide the sign of {value}")
        self.pc = pc
        self.value = value


class BudgetExhausted(Exception):
    """Raised inside nested simulations when the host's step budget runs out."""


# -- outcomes ----------------------------------------------------------------

@dataclass(frozen=True)
class Terminated:
    output: Vector
    steps: int


@dataclass(frozen=True)
class Diverged:
    budget: int
    reason: str | None = None  # set when the run aborted on a fault

    def __str__(self):
        return f"Diverged({self.budget})"


@dataclass
class OutputStream:
    mode: Mode
    vectors: list[Vector]
    exhausted_budget: bool = False
    halted: bool = False
    fault: str | None = None
    steps: int = 0

    def __len__(self):
        return len(self.vectors)

    @property
    def values(self) -> list[Rational]:
        """First coordinates; convenient for scalar streams."""
        return [v[0] if v else None for v in self.vectors]


@dataclass(frozen=True)
class Valid:
    def __bool__(self):
        return True

    def __str__(self):
        return "Valid"


@dataclass(frozen=True)
class Violation:
    n: int
    m: int

    def __bool__(self):
        return False

    def __str__(self):
        return f"Violation n={self.n} m={self.m}"


@dataclass(frozen=True)
class BranchRecord:
    pc: int
    test: str          # "JEQ" or "JLT"
    taken: bool
    value: object      # lhs - rhs: Rational, or RationalFunction in symbolic mode
    lhs: object = None
    rhs: object = None


@dataclass
class PathTrace:
    branches: list[BranchRecord]
    halted: bool
    steps: int

    @property
    def decisions(self) -> list[tuple[int, str, bool]]:
        return [(b.pc, b.test, b.taken) for b in self.branches]


# -- configuration -----------------------------------------------------------

@dataclass
class Configuration:
    program: Program
    pc: int = 0
    real_regs: dict = field(default_factory=dict)
    index_regs: dict = field(default_factory=dict)
    steps_taken: int = 0
    output_log: list = field(default_factory=list)
    halted: bool = False
    fault: str | None = None

    def copy(self) -> Configuration:
        return Configuration(self.program, self.pc, dict(self.real_regs), dict(self.index_regs),
                             self.steps_taken, list(self.output_log), self.halted, self.fault)

    def snapshot(self):
        """Hashable view of the full state, for determinism checks."""
        return (self.pc, tuple(sorted(self.real_regs.items())), tuple(sorted(self.index_regs.items())),
                self.steps_taken, tuple(self.output_log), self.halted, self.fault)


def initial_configuration(program: Program, inputs: Sequence) -> Configuration:
    """Inputs go to r0..r(d-1) and the dimension d to i0."""
    regs = {k: _coerce_input(v) for k, v in enumerate(inputs)}
    return Configuration(program, real_regs={k: v for k, v in regs.items()}, index_regs={0: len(regs)})


def _coerce_input(v):
    if isinstance(v, (RationalFunction, RealApprox)):
        return v
    return rational(v)


# -- symbolic mode -----------------------------------------------------------

class Undecided:
    def __repr__(self):
        return "Undecided"


UNDECIDED = Undecided()


def symbolic_test(f, approx: Mapping[str, RealApprox], max_precision: int = 64):
    """Sign of ``f`` (-1, 0 or +1), or :data:`UNDECIDED`.

    Variables with exactly known values are substituted first; the others are
    enclosed in dyadic intervals of width 2^-p for p = 1..max_precision until
    the interval image of ``f`` excludes 0.
    """
    if not isinstance(f, RationalFunction):
        q = rational(f)
        return (q > 0) - (q < 0)
    if f.is_zero():
        return 0
    exact = {v: approx[v].exact for v in f.variables() if v in approx and approx[v].exact is not None}
    if exact:
        f = f.substitute(exact)
    if f.is_constant():
        q = f.constant_value()
        return (q > 0) - (q < 0)
    variables = f.variables()
    missing = [v for v in variables if v not in approx]
    if missing:
        raise KeyError(f"no approximation for {', '.join(missing)}")
    for p in range(1, max_precision + 1):
        boxes = {v: approx[v].interval(p).as_interval() for v in variables}
        try:
            iv = f.interval(boxes)
        except DivisionByZero:
            continue
        s = interval_sign(iv)
        if s is not None:
            return s
    return UNDECIDED


def approximate(value, approx: Mapping[str, RealApprox], bits: int) -> Rational:
    """Dyadic rational within 2^-bits of a (possibly symbolic) value."""
    if not isinstance(value, RationalFunction):
        return value
    exact = {v: approx[v].exact for v in value.variables() if approx[v].exact is not None}
    if exact:
        value = value.substitute(exact)
    if value.is_constant():
        return value.constant_value()
    variables = value.variables()
    for p in range(bits + 1, 8 * bits + 64):
        boxes = {v: approx[v].interval(p).as_interval() for v in variables}
        try:
            iv = value.interval(boxes)
        except DivisionByZero:
            continue
        if iv.hi - iv.lo <= gmpy2.mpq(1, 1 << (bits + 1)):
            return dyadic_round((iv.lo + iv.hi) / 2, bits + 1)
    raise MachineFault(f"could not approximate {value} to {bits} bits")


@dataclass
class SymbolicMode:
    """Approximations for the variables that may appear in registers.

    ``constants`` maps program-constant indices to variable names: SETC on such
    a constant loads the variable instead of the table's rational stand-in.
    ``escalate`` decides signs that interval refinement leaves open.
    """

    approx: dict[str, RealApprox]
    constants: dict[int, str] = field(default_factory=dict)
    max_precision: int = 64
    output_bits: int = 64
    escalate: object = None  # callable(f, approx) -> sign, see oracle.zero_test

    def sign(self, f, pc: int) -> int:
        s = symbolic_test(f, self.approx, self.max_precision)
        if s is UNDECIDED:
            if self.escalate is None:
                raise UndecidedComparison(pc, f)
            s = self.escalate(f, self.approx)
        return s


def _prepare_symbolic(inputs: Sequence, constants: Mapping[int, RealApprox] | None,
                      symbolic: SymbolicMode | None):
    """Replace RealApprox inputs/constants by variables x<k>/c<k>."""
    needs = any(isinstance(v, (RealApprox, RationalFunction)) for v in inputs) or constants
    if not needs and symbolic is None:
        return list(inputs), None
    mode = symbolic or SymbolicMode(approx={})
    out = []
    for k, v in enumerate(inputs):
        if isinstance(v, RealApprox):
            name = f"x{k + 1}"
            mode.approx.setdefault(name, v)
            out.append(RationalFunction.variable(name))
        else:
            out.append(v)
    for k, v in (constants or {}).items():
        name = f"c{k}"
        mode.approx.setdefault(name, v)
        mode.constants[k] = name
    return out, mode


# -- the interpreter ---------------------------------------------------------

(ADD2, ADD3, SUB2, SUB3, MUL2, MUL3, DIV2, DIV3, SETC, MOVR, MOVI, INCI, DECI, LOADI, STOREI,
 JEQ, JLT, JMP, OUT, HALT, QRY, UHALT, USIM, END) = range(24)

_ARITH_CODES = {"ADD": (ADD2, ADD3), "SUB": (SUB2, SUB3), "MUL": (MUL2, MUL3), "DIV": (DIV2, DIV3)}
_SIMPLE_CODES = {"SETC": SETC, "MOVR": MOVR, "MOVI": MOVI, "INCI": INCI, "DECI": DECI, "LOADI": LOADI,
                 "STOREI": STOREI, "JEQ": JEQ, "JLT": JLT, "JMP": JMP, "OUT": OUT, "HALT": HALT,
                 "QRY": QRY, "UHALT": UHALT, "USIM": USIM}

_compiled_cache: dict[int, tuple] = {}


def _compile(p: Program) -> tuple:
    key = id(p)
    hit = _compiled_cache.get(key)
    if hit is not None and hit[0] is p:
        return hit[1]
    code = []
    for ins in p.instructions:
        ops = ins.operands
        if ins.opcode in _ARITH_CODES:
            two, three = _ARITH_CODES[ins.opcode]
            if len(ops) == 2:
                code.append((two, ops[0].value, ops[0].value, ops[1].value))
            else:
                code.append((three, ops[0].value, ops[1].value, ops[2].value))
        else:
            flat = []
            for op in ops:
                flat.extend((op.kind, op.value))
            code.append((_SIMPLE_CODES[ins.opcode], *flat))
    code.append((END,))  # running past the last instruction faults
    code = tuple(code)
    if len(_compiled_cache) > 2048:
        _compiled_cache.clear()
    _compiled_cache[key] = (p, code)
    return code


class _Meter:
    __slots__ = ("used", "cap")

    def __init__(self, cap: int):
        self.used = 0
        self.cap = cap


class _Engine:
    """Executes one configuration; nested simulations get their own engines."""

    def __init__(self, cfg: Configuration, meter: _Meter, oracle=None, symbolic: SymbolicMode | None = None,
                 trace: list | None = None, depth: int = 0):
        self.cfg = cfg
        self.meter = meter
        self.oracle = oracle
        self.symbolic = symbolic
        self.trace = trace
        self.depth = depth
        self._bounded_oracles: dict = {}

    # Runs until halt, fault, `until_outputs` outputs, or the step limit.
    # Returns False if stopped by the limit.
    def run(self, limit: int | None = None, until_outputs: int | None = None, nested: bool = False) -> bool:
        cfg = self.cfg
        meter = self.meter
        code = _compile(cfg.program)
        R, I = cfg.real_regs, cfg.index_regs
        out_log = cfg.output_log
        sym = self.symbolic
        trace = self.trace
        pc = cfg.pc
        used = meter.used
        start = used
        stop = meter.cap if limit is None else min(meter.cap, used + limit)
        want = until_outputs if until_outputs is not None else -1
        if cfg.halted or cfg.fault:
            return True
        try:
            while True:
                if len(out_log) == want:
                    return True
                if used >= stop:
                    if nested and used >= meter.cap:
                        raise BudgetExhausted
                    return False
                ins = code[pc]
                op = ins[0]
                used += 1
                if op <= DIV3:
                    a = R.get(ins[2], ZERO)
                    b = R.get(ins[3], ZERO)
                    if op <= ADD3:
                        r = a + b
                    elif op <= SUB3:
                        r = a - b
                    elif op <= MUL3:
                        r = a * b
                    else:
                        if sym is None:
                            if b == 0:
                                raise DivisionByZero(f"instruction {pc}: division by zero")
                        elif not isinstance(b, RationalFunction) and b == 0:
                            raise DivisionByZero(f"instruction {pc}: division by zero")
                        r = a / b
                    if sym is not None and isinstance(r, RationalFunction) and r.is_constant():
                        r = r.constant_value()
                    R[ins[1]] = r
                    pc += 1
                elif op == JLT or op == JEQ:
                    x = self._value(ins[1], ins[2], R, I)
                    y = self._value(ins[3], ins[4], R, I)
                    d = x - y
                    if sym is not None and isinstance(d, RationalFunction):
                        s = sym.sign(d, pc)
                        taken = s < 0 if op == JLT else s == 0
                    else:
                        taken = d < 0 if op == JLT else d == 0
                    if trace is not None:
                        trace.append(BranchRecord(pc, "JLT" if op == JLT else "JEQ", taken, d, x, y))
                    pc = ins[6] if taken else pc + 1
                elif op == JMP:
                    pc = ins[2]
                elif op == INCI:
                    I[ins[2]] = I.get(ins[2], 0) + 1
                    pc += 1
                elif op == DECI:
                    I[ins[2]] = I.get(ins[2], 0) - 1
                    pc += 1
                elif op == LOADI:
                    addr = I.get(ins[4], 0)
                    if addr < 0:
                        raise MachineFault(f"instruction {pc}: negative address {addr}")
                    R[ins[2]] = R.get(addr, ZERO)
                    pc += 1
                elif op == STOREI:
                    addr = I.get(ins[2], 0)
                    if addr < 0:
                        raise MachineFault(f"instruction {pc}: negative address {addr}")
                    R[addr] = R.get(ins[4], ZERO)
                    pc += 1
                elif op == MOVR:
                    R[ins[2]] = R.get(ins[4], ZERO) if ins[3] == REAL else gmpy2.mpq(I.get(ins[4], 0))
                    pc += 1
                elif op == MOVI:
                    kind, v = ins[3], ins[4]
                    if kind == LIT:
                        I[ins[2]] = v
                    elif kind == INDEX:
                        I[ins[2]] = I.get(v, 0)
                    else:
                        I[ins[2]] = self._natural(R.get(v, ZERO), pc, signed=True)
                    pc += 1
                elif op == SETC:
                    k = ins[4]
                    if sym is not None and k in sym.constants:
                        R[ins[2]] = RationalFunction.variable(sym.constants[k])
                    else:
                        R[ins[2]] = cfg.program.constants[k]
                    pc += 1
                elif op == OUT:
                    n = ins[2] if ins[1] == LIT else I.get(ins[2], 0)
                    if n < 0:
                        raise MachineFault(f"instruction {pc}: negative output dimension")
                    out_log.append(tuple(R.get(k, ZERO) for k in range(n)))
                    pc += 1
                elif op == HALT:
                    cfg.halted = True
                    return True
                else:
                    meter.used = used
                    cfg.pc = pc
                    self._universal(op, ins, R, I, pc)
                    used = meter.used
                    pc += 1
        except (DivisionByZero, MachineFault) as exc:
            cfg.fault = str(exc)
            return True
        finally:
            cfg.pc = pc
            meter.used = used
            cfg.steps_taken += used - start

    @staticmethod
    def _value(kind, v, R, I):
        if kind == REAL:
            return R.get(v, ZERO)
        if kind == INDEX:
            return I.get(v, 0)
        return v

    def _natural(self, value, pc: int, signed: bool = False) -> int:
        if isinstance(value, RationalFunction):
            if not value.is_constant():
                raise MachineFault(f"instruction {pc}: symbolic value used as an integer")
            value = value.constant_value()
        if value.denominator != 1 or (value < 0 and not signed):
            raise MachineFault(f"instruction {pc}: {value} is not a natural number")
        return int(value.numerator)

    def _code_and_input(self, ins, R, I, pc):
        kind, v = ins[1], ins[2]
        code = self.cfg.program.constants[v] if kind == CONST else R.get(v, ZERO)
        code = self._natural(code, pc)
        base = ins[4]
        d = ins[6] if ins[5] == LIT else I.get(ins[6], 0)
        if d < 0:
            raise MachineFault(f"instruction {pc}: negative input dimension")
        return code, [R.get(base + k, ZERO) for k in range(d)]

    def _child(self, code: int, inputs: list, pc: int, bound: int):
        try:
            program = decode_machine(code)
        except ValueError as exc:
            raise MachineFault(f"instruction {pc}: {exc}") from None
        cfg = initial_configuration(program, [])
        for k, v in enumerate(inputs):
            cfg.real_regs[k] = v
        cfg.index_regs[0] = len(inputs)
        if bound < 0:
            oracle = self.oracle
        else:
            oracle = self._bounded_oracles.get(bound)
            if oracle is None:
                from .oracle import Budgeted, Oracle
                oracle = self._bounded_oracles[bound] = Oracle(Budgeted(bound))
        return _Engine(cfg, self.meter, oracle, self.symbolic, None, self.depth + 1)

    def _universal(self, op, ins, R, I, pc):
        if op == END:
            raise MachineFault(f"instruction {pc}: ran past the last instruction")
        if op == QRY:
            if self.oracle is None:
                raise MachineFault(f"instruction {pc}: QRY needs an oracle")
            code, inputs = self._code_and_input(ins, R, I, pc)
            from .oracle import OracleQuery
            try:
                q = OracleQuery(code, tuple(inputs))
            except ValueError as exc:
                raise MachineFault(f"instruction {pc}: {exc}") from None
            R[0] = gmpy2.mpq(1 if self.oracle.ask(q) else 0)
            return
        code, inputs = self._code_and_input(ins, R, I, pc)
        if op == UHALT:
            bound = ins[8] if ins[7] == LIT else I.get(ins[8], 0)
            child = self._child(code, inputs, pc, bound)
            if bound < 0:
                child.run(nested=True)
                if child.cfg.fault:
                    self._diverge()
                R[0] = gmpy2.mpq(1)
            else:
                child.run(limit=bound, nested=True)
                R[0] = gmpy2.mpq(1 if child.cfg.halted else 0)
            return
        # USIM
        n = ins[8] if ins[7] == LIT else I.get(ins[8], 0)
        bound = ins[10] if ins[9] == LIT else I.get(ins[10], 0)
        obase = ins[12]
        stride = ins[14] if ins[13] == LIT else I.get(ins[14], 0)
        status = ins[16]
        if n < 1 or stride < 0:
            raise MachineFault(f"instruction {pc}: bad USIM operands")
        child = self._child(code, inputs, pc, bound)
        child.run(until_outputs=n, nested=True)
        if child.cfg.fault:
            self._diverge()
        outs = child.cfg.output_log
        if len(outs) < n:
            I[status] = -1
            return
        if stride == 0:
            for k, v in enumerate(outs[n - 1]):
                R[obase + k] = v
        else:
            for j in range(n):
                vec = outs[j]
                for k in range(stride):
                    R[obase + j * stride + k] = vec[k] if k < len(vec) else ZERO
        I[status] = len(outs[n - 1])

    def _diverge(self):
        # A simulated machine that faults never halts; the host waits forever.
        self.meter.used = self.meter.cap
        raise BudgetExhausted


# -- public API --------------------------------------------------------------

def step(c: Configuration, oracle=None, symbolic: SymbolicMode | None = None) -> Configuration:
    """Apply exactly one instruction to a copy of ``c``.

    Raises DivisionByZero / MachineFault instead of recording the fault.
    """
    if c.halted:
        raise ValueError("configuration already halted")
    nxt = c.copy()
    meter = _Meter(c.steps_taken + 1)
    meter.used = c.steps_taken
    nxt.steps_taken = c.steps_taken
    _Engine(nxt, meter, oracle, symbolic).run()
    if nxt.fault:
        msg = nxt.fault
        raise DivisionByZero(msg) if "division by zero" in msg else MachineFault(msg)
    return nxt


def _start(program, inputs, budget, oracle, symbolic, constants, trace=None):
    if budget < 1:
        raise ValueError("budget must be >= 1")
    inputs, symbolic = _prepare_symbolic(inputs, constants, symbolic)
    cfg = initial_configuration(program, inputs)
    return _Engine(cfg, _Meter(budget), oracle, symbolic, trace)


def _drive(engine: _Engine, until_outputs=None) -> bool:
    try:
        return engine.run(until_outputs=until_outputs)
    except BudgetExhausted:
        return False


def run_bss(p: Program, inputs: Sequence = (), budget: int = 10**6, oracle=None,
            symbolic: SymbolicMode | None = None, constants: Mapping[int, RealApprox] | None = None):
    """Terminated(last output vector) if HALT is reached within ``budget`` steps."""
    engine = _start(p, inputs, budget, oracle, symbolic, constants)
    _drive(engine)
    cfg = engine.cfg
    if cfg.halted:
        out = cfg.output_log[-1] if cfg.output_log else ()
        if engine.symbolic is not None:
            out = tuple(approximate(v, engine.symbolic.approx, engine.symbolic.output_bits) for v in out)
        return Terminated(out, cfg.steps_taken)
    return Diverged(budget, cfg.fault)


def _run_stream(mode, p, inputs, count, budget, oracle, symbolic, constants) -> OutputStream:
    if count < 1:
        raise ValueError("count must be >= 1")
    engine = _start(p, inputs, budget, oracle, symbolic, constants)
    _drive(engine, until_outputs=count)
    cfg = engine.cfg
    vectors = list(cfg.output_log[:count])
    if engine.symbolic is not None:
        bits = engine.symbolic.output_bits
        vectors = [tuple(approximate(v, engine.symbolic.approx, bits) for v in vec) for vec in vectors]
    short = len(vectors) < count
    return OutputStream(mode, vectors, exhausted_budget=short and not cfg.halted and not cfg.fault,
                        halted=cfg.halted, fault=cfg.fault, steps=cfg.steps_taken)


def run_strong(p: Program, inputs: Sequence = (), count: int = 10, budget: int = 10**6, oracle=None,
               symbolic: SymbolicMode | None = None,
               constants: Mapping[int, RealApprox] | None = None) -> OutputStream:
    """First ``count`` output vectors; validity is checked separately by validate_strong."""
    return _run_stream(Mode.STRONG, p, inputs, count, budget, oracle, symbolic, constants)


def run_weak(p: Program, inputs: Sequence = (), count: int = 10, budget: int = 10**6, oracle=None,
             symbolic: SymbolicMode | None = None,
             constants: Mapping[int, RealApprox] | None = None) -> OutputStream:
    return _run_stream(Mode.WEAK, p, inputs, count, budget, oracle, symbolic, constants)


def record_path(p: Program, inputs: Sequence = (), budget: int = 10**6, oracle=None,
                symbolic: SymbolicMode | None = None,
                constants: Mapping[int, RealApprox] | None = None) -> PathTrace:
    trace: list = []
    engine = _start(p, inputs, budget, oracle, symbolic, constants, trace)
    _drive(engine)
    return PathTrace(trace, engine.cfg.halted, engine.cfg.steps_taken)


def norm1(u: Vector, v: Vector) -> Rational:
    return sum((abs(a - b) for a, b in zip(u, v)), ZERO)


def validate_strong(s, upto: int | None = None):
    """Check ||y_n - y_m|| <= 2^-n + 2^-m for all 1 <= n < m <= upto.

    Returns :class:`Valid` or the lexicographically first :class:`Violation`;
    a dimension mismatch counts as a violation of the pair.
    """
    vectors = s.vectors if isinstance(s, OutputStream) else list(s)
    if upto is None:
        upto = len(vectors)
    if len(vectors) < upto:
        raise ValueError(f"stream has {len(vectors)} entries, fewer than {upto}")
    vectors = [tuple(rational(x) for x in v) for v in vectors[:upto]]
    for n in range(1, upto + 1):
        yn = vectors[n - 1]
        en = gmpy2.mpq(1, 1 << n)
        for m in range(n + 1, upto + 1):
            ym = vectors[m - 1]
            if len(ym) != len(yn) or norm1(yn, ym) > en + gmpy2.mpq(1, 1 << m):
                return Violation(n, m)
    return Valid()


# -- JSON-lines dumps --------------------------------------------------------

def stream_records(vectors: Sequence[Vector]) -> list[str]:
    return [json.dumps({"n": k, "dim": len(v), "values": [format_rational(x) for x in v]},
                       separators=(", ", ": "))
            for k, v in enumerate(vectors, start=1)]


def dump_stream(s) -> str:
    vectors = s.vectors if isinstance(s, OutputStream) else s
    lines = stream_records(vectors)
    return "".join(line + "\n" for line in lines)


class StreamFormatError(ValueError):
    pass


def load_stream(text: str) -> list[Vector]:
    vectors = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            values = tuple(parse_rational(x) for x in rec["values"])
            if rec["n"] != len(vectors) + 1 or rec["dim"] != len(values):
                raise ValueError("index or dimension mismatch")
        except (ValueError, KeyError, TypeError) as exc:
            raise StreamFormatError(f"line {lineno}: {exc}") from None
        vectors.append(values)
    return vectors


def dump_trace(t: PathTrace) -> str:
    lines = []
    for k, b in enumerate(t.branches, start=1):
        value = format_rational(b.value) if not isinstance(b.value, RationalFunction) else str(b.value)
        lines.append(json.dumps({"n": k, "pc": b.pc, "test": b.test, "taken": b.taken, "value": value},
                                separators=(", ", ": ")))
    return "".join(line + "\n" for line in lines)
