"""Shipped example machines.

Each entry is a ``.bss`` file in this directory plus a contract note and a
list of curated input vectors.  Input tokens are rationals (``"3/7"``),
square roots for symbolic runs (``"sqrt:2"``), or Gödel codes of the small
sample machines below (``"code:loop"``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from ..exactnum import Rational, RealApprox, parse_rational
from ..execute import Mode
from ..machine import Program, encode_machine, parse_program

HERE = Path(__file__).parent

SAMPLE_SOURCES = {
    "halt": "HALT\n",
    "loop": "loop:\n  JMP loop\n",
    "echo": "OUT 1\nHALT\n",
    # halts after exactly 12 steps
    "countdown": "  MOVI i1 5\nloop:\n  DECI i1\n  JLT 0 i1 loop\n  HALT\n",
    # halts iff the first input is 0
    "zero_test": "  JEQ r0 0 done\nloop:\n  JMP loop\ndone:\n  HALT\n",
}


@lru_cache(maxsize=None)
def sample_machine(name: str) -> Program:
    return parse_program(SAMPLE_SOURCES[name], name=name)


def sample_code(name: str) -> int:
    return encode_machine(sample_machine(name))


def resolve_token(token: str):
    """Turn a curated input token into a machine input value."""
    if token.startswith("code:"):
        return Rational(sample_code(token[5:]))
    if token.startswith("sqrt:"):
        return RealApprox.sqrt(parse_rational(token[5:]))
    return parse_rational(token)


@dataclass(frozen=True)
class Vector:
    tokens: tuple[str, ...]
    in_domain: bool = True
    # expected limit / output, as a rational token or a tuple of them
    expect: object = None

    @property
    def inputs(self) -> tuple:
        return tuple(resolve_token(t) for t in self.tokens)

    @property
    def symbolic(self) -> bool:
        return any(t.startswith("sqrt:") for t in self.tokens)


@dataclass(frozen=True)
class StdlibEntry:
    name: str
    mode: Mode
    contract: str
    vectors: tuple[Vector, ...] = ()
    helper: bool = False

    @property
    def path(self) -> Path:
        return HERE / f"{self.name}.bss"

    @property
    def program(self) -> Program:
        return load(self.name)


def _v(*tokens, expect=None, in_domain=True) -> Vector:
    return Vector(tuple(tokens), in_domain, expect)


def _grid_pairs():
    vals = ["0", "1/2", "1/4", "3/4", "1/3", "2/3", "-1", "5/2", "-7/3", "9/8"]
    out = []
    for i, x in enumerate(vals):
        for y in vals[i % 3::3]:
            out.append(_v(x, y))
    return out


def _thomae_vectors():
    out = [_v("1/3", expect="1/3"), _v("0", expect="1"), _v("4/6", expect="1/3")]
    for p, q in [(1, 2), (-1, 2), (5, 7), (-3, 8), (7, 1), (10, 3), (22, 7), (1, 60), (13, 64),
                 (-17, 9), (2, 5), (9, 11), (1, 97), (31, 16), (-5, 1), (3, 100), (49, 50), (-1, 127),
                 (6, 35), (8, 21), (11, 13), (1, 1000)]:
        from math import gcd
        g = gcd(p, q)
        out.append(_v(f"{p}/{q}", expect=f"1/{q // g}"))
    return out


def _cantor_vectors():
    xs = ["0", "1", "1/4", "3/4", "1/2", "1/3", "2/3", "1/9", "2/9", "1/10", "1/5", "4/5",
          "7/9", "8/9", "1/27", "13/27", "5/12", "19/20", "1/40", "-1/2", "3/2", "2", "-3",
          "1/13", "3/10"]
    return [_v(x) for x in xs]


def _unpair_vectors():
    zs = ["0", "3/8", "1/2", "1/3", "5/7", "1/1024", "99/100", "1", "5/4", "3/2", "7/4",
          "1/7", "21/32", "13/16", "9/5", "17/10", "11/8", "1/64", "63/64", "2/3"]
    return [_v(z) for z in zs]


ENTRIES: dict[str, StdlibEntry] = {}


def _register(entry: StdlibEntry) -> None:
    ENTRIES[entry.name] = entry


_register(StdlibEntry(
    "pair", Mode.STRONG,
    "strong stream for an injective h: R^2 -> [0, 2); interleaves binary "
    "expansions on [0,1)^2 and sign/length-prefixed expansions elsewhere",
    tuple([_v("1/2", "1/4", expect="3/8"), _v("0", "0", expect="0")] + _grid_pairs())))
_register(StdlibEntry(
    "unpair", Mode.STRONG,
    "strong stream of 2-vectors inverting pair on its range; no output off the range",
    tuple(_unpair_vectors() + [_v("5/2", in_domain=False), _v("-1", in_domain=False)])))
_register(StdlibEntry(
    "cantor_dist", Mode.STRONG,
    "strong stream for the distance from x to the Cantor set",
    tuple(_cantor_vectors())))
_register(StdlibEntry(
    "thomae", Mode.STRONG,
    "strong stream for Thomae's function: 1/q at p/q in lowest terms, 1 at 0",
    tuple(_thomae_vectors())))
_register(StdlibEntry(
    "rational_semidecide", Mode.BSS,
    "halts (output 1) iff x is rational; every numeric input is rational, so "
    "non-membership is only testable on symbolic inputs",
    (_v("3/7"), _v("22/7"), _v("-5/3"), _v("0"), _v("sqrt:2", in_domain=False))))
_register(StdlibEntry(
    "char_unit_interval", Mode.BSS,
    "always halts with the characteristic function of [0, 1)",
    (_v("0", expect="1"), _v("1", expect="0"), _v("1/2", expect="1"), _v("-1/9", expect="0"),
     _v("99/100", expect="1"), _v("7/2", expect="0"))))
_register(StdlibEntry(
    "halting_flag", Mode.BSS,
    "input (code, x...): halts with 1 iff the coded machine halts on x",
    (_v("code:halt"), _v("code:countdown"), _v("code:zero_test", "0"),
     _v("code:loop", in_domain=False), _v("code:zero_test", "1", in_domain=False))))
_register(StdlibEntry(
    "cohalting_flag", Mode.STRONG,
    "input (code, x...): 1, 1, ... while the simulation runs, alternating 0, 1 after it "
    "halts; strong (limit 1) exactly when the coded machine never halts, which a finite "
    "budget can only corroborate",
    (_v("code:loop", expect="1"), _v("code:zero_test", "1", expect="1"),
     _v("code:zero_test", "5/2", expect="1"), _v("code:zero_test", "-1", expect="1"),
     _v("code:loop", "3", expect="1"),
     _v("code:halt", in_domain=False), _v("code:countdown", in_domain=False))))
_register(StdlibEntry(
    "q_cross_irrational", Mode.STRONG,
    "input (x, y): strong stream of 2^-n (limit 0) when x is rational and y is not; "
    "finitely many outputs when y is rational, so numeric runs halt and only symbolic "
    "runs can show the irrational side",
    (_v("1/2", "sqrt:2", expect="0"), _v("3", "sqrt:3", expect="0"), _v("-2/5", "sqrt:5", expect="0"),
     _v("0", "sqrt:7", expect="0"), _v("7/4", "sqrt:11", expect="0"),
     _v("1/2", "1/3", in_domain=False), _v("1", "5", in_domain=False))))
_register(StdlibEntry(
    "rational_weak_char", Mode.WEAK,
    "weak stream for the characteristic function of Q: 0 while searching, then 1 forever",
    (_v("3/7", expect="1"), _v("0", expect="1"), _v("sqrt:2", expect="0"))))
_register(StdlibEntry(
    "chi_bounded_one", Mode.WEAK,
    "input (code, x...) of a weak characteristic-function machine: 1/max(y_n, 1/n), "
    "bounded iff y_n tends to 1",
    (_v("code:echo"),)))
_register(StdlibEntry(
    "chi_bounded_zero", Mode.WEAK,
    "input (code, x...) of a weak characteristic-function machine: 1/max(1 - y_n, 1/n), "
    "bounded iff y_n tends to 0",
    (_v("code:echo"),)))
_register(StdlibEntry(
    "exceed_searcher", Mode.BSS,
    "input (code, n, x...): halts iff some output of the coded machine on x has 1-norm > n",
    (), helper=True))
_register(StdlibEntry(
    "counterexample_searcher", Mode.BSS,
    "input (code, K, k, x...): halts iff the coded machine on x has an output y_K and, for "
    "some m > K, y_m is missing, differs in dimension, or has ||y_K - y_m|| > 2^-k + 2^-m",
    (), helper=True))


class UnknownEntry(KeyError):
    pass


@lru_cache(maxsize=None)
def load(name: str) -> Program:
    """The shipped program ``name`` (from its ``.bss`` file)."""
    path = HERE / f"{name}.bss"
    if name not in ENTRIES or not path.exists():
        raise UnknownEntry(f"no stdlib program named {name!r}")
    return parse_program(path.read_text(encoding="utf-8"), name=name)


def names() -> list[str]:
    return list(ENTRIES)


def entry(name: str) -> StdlibEntry:
    try:
        return ENTRIES[name]
    except KeyError:
        raise UnknownEntry(f"no stdlib program named {name!r}") from None


def exceed_searcher() -> Program:
    return load("exceed_searcher")


def counterexample_searcher() -> Program:
    return load("counterexample_searcher")
