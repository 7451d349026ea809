"""Answering halting queries (QRY) at desk scale.

The true halting oracle is not computable.  Three executable stand-ins:

``Budgeted(steps)``
    "halts" iff the queried machine halts within ``steps`` steps.  Sound for
    positive answers and monotone in ``steps``.
``Table(answers)``
    curated ground truth for a declared finite set of queries.
``Layered(level)``
    a budgeted answer at budget ``level``; the simulation-level algorithm
    re-asks the same query at growing levels.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .exactnum import Rational, format_rational, parse_rational, rational
from .machine import DecodeError, Program, decode_machine, encode_machine


class UnknownQuery(KeyError):
    """A Table policy was asked about an undeclared query."""


@dataclass(frozen=True)
class OracleQuery:
    machine_code: int
    input: tuple[Rational, ...] = ()

    def __post_init__(self):
        code = int(self.machine_code)
        decode_machine(code)  # raises DecodeError on non-codes
        object.__setattr__(self, "machine_code", code)
        object.__setattr__(self, "input", tuple(rational(v) for v in self.input))

    @classmethod
    def of(cls, program: Program, inputs: Sequence = ()) -> OracleQuery:
        return cls(encode_machine(program), tuple(inputs))

    @property
    def program(self) -> Program:
        return decode_machine(self.machine_code)

    def key(self) -> tuple:
        return (self.machine_code, self.input)


@dataclass(frozen=True)
class Budgeted:
    steps: int

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError("steps must be >= 0")


@dataclass(frozen=True)
class Layered:
    level: int

    @property
    def steps(self) -> int:
        return self.level


@dataclass(frozen=True)
class Table:
    answers: Mapping[tuple, bool] = field(default_factory=dict)

    @classmethod
    def of(cls, entries: Mapping[OracleQuery, bool] | Sequence[tuple[OracleQuery, bool]]) -> Table:
        items = entries.items() if isinstance(entries, Mapping) else entries
        return cls({q.key(): bool(a) for q, a in items})

    def lookup(self, q: OracleQuery) -> bool:
        try:
            return self.answers[q.key()]
        except KeyError:
            raise UnknownQuery(f"query not in table: code {q.machine_code:x}, input "
                               f"{','.join(map(format_rational, q.input)) or '-'}") from None


@dataclass(frozen=True)
class LogEntry:
    query: OracleQuery
    budget: int | None  # None for Table answers
    answer: bool


class OracleAnswerLog:
    """Append-only record of answered queries; safe for concurrent appends."""

    def __init__(self):
        self._entries: list[LogEntry] = []
        self._lock = threading.Lock()

    def append(self, entry: LogEntry) -> None:
        with self._lock:
            self._entries.append(entry)

    @property
    def entries(self) -> tuple[LogEntry, ...]:
        with self._lock:
            return tuple(self._entries)

    def __len__(self):
        return len(self._entries)

    def dump(self) -> str:
        return "".join(format_table_line(e.query, e.answer) + "\n" for e in self.entries)

    def replay(self) -> Table:
        """A Table policy that answers exactly as recorded."""
        return Table({e.query.key(): e.answer for e in self.entries})


def _budget_halts(q: OracleQuery, steps: int) -> bool:
    from .execute import Terminated, run_bss
    if steps < 1:
        return False
    # Queried machines that themselves ask QRY get the same budgeted answers.
    return isinstance(run_bss(q.program, q.input, budget=steps, oracle=Oracle(Budgeted(steps))), Terminated)


def halting_query(q: OracleQuery, policy, log: OracleAnswerLog | None = None) -> bool:
    """Does the machine coded in ``q`` halt on ``q.input``, according to ``policy``?"""
    if isinstance(policy, Table):
        answer, budget = policy.lookup(q), None
    elif isinstance(policy, (Budgeted, Layered)):
        budget = policy.steps
        answer = _budget_halts(q, budget)
    else:
        raise TypeError(f"unknown oracle policy {policy!r}")
    if log is not None:
        log.append(LogEntry(q, budget, answer))
    return answer


class Oracle:
    """Policy plus answer cache and log; this is what runs consult on QRY."""

    def __init__(self, policy, log: OracleAnswerLog | None = None):
        self.policy = policy
        self.log = log if log is not None else OracleAnswerLog()
        self._cache: dict = {}
        self._lock = threading.Lock()

    def ask(self, q: OracleQuery) -> bool:
        key = q.key()
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        answer = halting_query(q, self.policy, self.log)
        with self._lock:
            self._cache[key] = answer
        return answer

    __call__ = ask

    def zero_test(self, f, approx) -> int:
        """Sign of a symbolic value whose interval refinement stalled.

        Asks whether refining further ever separates ``f`` from 0.  A budgeted
        policy refines up to its budget in bits and answers "= 0" otherwise;
        a Table cannot know such queries.
        """
        from .execute import UNDECIDED, symbolic_test
        if isinstance(self.policy, Table):
            raise UnknownQuery(f"sign of {f} is not a declared query")
        s = symbolic_test(f, approx, max(self.policy.steps, 1))
        return 0 if s is UNDECIDED else s


# -- table files ---------------------------------------------------------------

def format_table_line(q: OracleQuery, answer: bool) -> str:
    inputs = ",".join(format_rational(v) for v in q.input) or "-"
    return f"{q.machine_code:x} {inputs} {int(bool(answer))}"


class TableFormatError(ValueError):
    pass


def parse_table(text: str) -> Table:
    """Lines ``code_hex input_rationals answer``; ``-`` is the empty input, ``#`` starts a comment."""
    answers = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[2] not in ("0", "1"):
            raise TableFormatError(f"line {lineno}: expected 'code_hex inputs 0|1'")
        try:
            inputs = () if parts[1] == "-" else tuple(parse_rational(t) for t in parts[1].split(","))
            q = OracleQuery(int(parts[0], 16), inputs)
        except (ValueError, DecodeError) as exc:
            raise TableFormatError(f"line {lineno}: {exc}") from None
        answers[q.key()] = parts[2] == "1"
    return Table(answers)


def dump_table(table: Table) -> str:
    lines = []
    for (code, inputs), answer in sorted(table.answers.items()):
        lines.append(format_table_line(OracleQuery(code, inputs), answer))
    return "".join(line + "\n" for line in lines)


# -- boundedness semidecision ------------------------------------------------

@dataclass(frozen=True)
class Accept:
    bound: int


@dataclass(frozen=True)
class NoAnswer:
    tried: int


def semidecide_bounded(code: int, inputs: Sequence, policy, bound_cap: int,
                       log: OracleAnswerLog | None = None):
    """Is the output sequence of machine ``code`` on ``inputs`` bounded?

    For n = 1, 2, ... ask the oracle whether a searcher halts, where the
    searcher halts iff some output has 1-norm above n.  The first n the
    oracle reports as never exceeded is a bound.  Gives up after ``bound_cap``.
    """
    if bound_cap < 1:
        raise ValueError("bound_cap must be >= 1")
    from .stdlib import exceed_searcher
    searcher = encode_machine(exceed_searcher())
    code = int(code)
    inputs = tuple(rational(v) for v in inputs)
    for n in range(1, bound_cap + 1):
        q = OracleQuery(searcher, (Rational(code), Rational(n)) + inputs)
        if not halting_query(q, policy, log):
            return Accept(n)
    return NoAnswer(bound_cap)
