"""Machine-to-machine constructions.

Every transformer takes programs and returns a new :class:`Program` in the
assembly language.  Machines that must simulate their arguments carry the
arguments' Gödel codes in the constant table and call USIM / UHALT / QRY.

Register layout of emitted programs::

    r0 ...        inputs on entry; staging area for OUT
    r100-r199     scratch
    r1000 ...     saved copy of the inputs
    r2000 ...     argument block for simulated machines
    r3000 ...     a single simulated output vector
    r10000 ...    buffered outputs of a simulated machine
    r100000 ...   per-process state of dovetailed searches

i0 (input dimension) is never written.  Scalars are rationals throughout,
integer arguments included.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .asm import Asm
from .exactnum import Rational, rational
from .machine import Program, encode_machine

XB, QB, YB, BUF, STATE = 1000, 2000, 3000, 10000, 100000


class SchemeViolation(AssertionError):
    """An approximation scheme missed its declared 2^-n accuracy."""


@dataclass(frozen=True)
class DeciderSpec:
    program: Program
    arity: str  # "sigma2" | "sigma3"

    def __post_init__(self):
        if self.arity not in ("sigma2", "sigma3"):
            raise ValueError(f"arity must be sigma2 or sigma3, not {self.arity!r}")


# A polynomial is either a coefficient list in one variable (ascending powers)
# or a mapping from exponent tuples to coefficients.
Poly = Sequence | Mapping


@dataclass(frozen=True)
class ApproximationScheme:
    """Polynomials p(n, m) within 2^-n of a target on [-m, m]^dim.

    Emitted machines are finite: levels n = 1..n_max and boxes m = 1..m_max
    are unrolled into straight-line code.
    """

    poly: Callable[[int, int], Poly]
    dim: int = 1
    n_max: int = 12
    m_max: int = 4
    moduli: Callable[[int, int], int] | None = None

    def terms(self, n: int, m: int) -> dict[tuple[int, ...], Rational]:
        p = self.poly(n, m)
        if isinstance(p, Mapping):
            items = {tuple(e): rational(c) for e, c in p.items()}
        else:
            if self.dim != 1:
                raise ValueError("coefficient lists describe polynomials in one variable")
            items = {(k,): rational(c) for k, c in enumerate(p)}
        for e in items:
            if len(e) != self.dim:
                raise ValueError(f"exponent {e} does not match dimension {self.dim}")
        return {e: c for e, c in items.items() if c != 0}

    def evaluate(self, n: int, m: int, x: Sequence) -> Rational:
        total = Rational(0)
        for e, c in self.terms(n, m).items():
            t = c
            for xi, k in zip(x, e):
                t *= rational(xi) ** k
            total += t
        return total


def spot_check(scheme: ApproximationScheme, reference: Callable, points: Sequence,
               levels: Sequence[int] | None = None) -> None:
    """Raise SchemeViolation unless |p(n, m)(x) - f(x)| <= 2^-n at the points.

    ``reference(x, n)`` must return f(x) to well within 2^-n (a rational).
    Each point is checked in the smallest box [-m, m]^dim containing it.
    """
    for x in points:
        x = tuple(rational(v) for v in (x if isinstance(x, (tuple, list)) else (x,)))
        m = _box(x)
        if m > scheme.m_max:
            continue
        for n in levels or range(1, scheme.n_max + 1):
            err = abs(scheme.evaluate(n, m, x) - rational(reference(x, n + 8)))
            if err > Rational(1, 2 ** n):
                raise SchemeViolation(f"level {n}, box {m}, point {x}: error {float(err):.3g}")


def _box(x: Sequence) -> int:
    b = max((abs(v) for v in x), default=Rational(0))
    m = int(b.numerator // b.denominator)
    return max(1, m if m == b else m + 1)


# -- emission helpers ----------------------------------------------------------

class _Builder(Asm):
    """Asm with the constants and block moves the transformers share."""

    def __init__(self, doc):
        super().__init__(doc)
        self.zero, self.one, self.half = "r190", "r191", "r192"
        self.setq(self.zero, 0)
        self.setq(self.one, 1)
        self.setq(self.half, "1/2")

    def copy(self, src: int | str, dst: int | str, count: str | int) -> None:
        """r[dst..] := r[src..] for ``count`` registers; src/dst are numbers or i-registers."""
        loop, done = self.fresh("copy"), self.fresh("copied")
        for reg, v in (("i41", src), ("i42", dst)):
            self("MOVI", reg, v)
        self("MOVI", "i43", count)
        self.label(loop)
        self("JEQ", "i43", 0, done)
        self("LOADI", "r199", "i41")
        self("STOREI", "i42", "r199")
        self("INCI", "i41")
        self("INCI", "i42")
        self("DECI", "i43")
        self("JMP", loop)
        self.label(done)

    def address(self, ireg: str, base: int, offset: str, scale: int = 1) -> None:
        """ireg := base + scale * offset, with ``offset`` a real register."""
        self.setq("r198", base)
        if scale != 1:
            self.setq("r197", scale)
            self("MUL", "r197", "r197", offset)
            self("ADD", "r198", "r198", "r197")
        else:
            self("ADD", "r198", "r198", offset)
        self("MOVI", ireg, "r198")

    def norm1(self, pa: str, pb: str, dim: int, acc: str) -> None:
        """acc := ||r[pa..] - r[pb..]||_1 over ``dim`` coordinates (advances pa, pb)."""
        self("MOVR", acc, self.zero)
        for _ in range(dim):
            self("LOADI", "r195", pa)
            self("LOADI", "r196", pb)
            self("SUB", "r195", "r195", "r196")
            self.abs("r195", "r195", self.zero)
            self("ADD", acc, acc, "r195")
            self("INCI", pa)
            self("INCI", pb)

    def save_inputs(self) -> None:
        self.copy(0, XB, "i0")

    def block_slot(self, ireg: str, extra: int) -> None:
        """ireg := QB + i0 + extra (the argument slot after the inputs)."""
        self("MOVR", "r198", "i0")
        self.setq("r197", QB + extra)
        self("ADD", "r198", "r198", "r197")
        self("MOVI", ireg, "r198")

    def block_dim(self, ireg: str, extra: int) -> None:
        self("MOVI", ireg, "i0")
        for _ in range(extra):
            self("INCI", ireg)

    def forever(self) -> None:
        spin = self.fresh("forever")
        self.label(spin)
        self("JMP", spin)


def _code(a: Asm, p: Program) -> str:
    return a.const(encode_machine(p))


# -- limit lemma -----------------------------------------------------------------

def weak_to_strong(p: Program) -> Program:
    """Strong machine (with QRY) printing a subsequence of p's outputs.

    For k = 1, 2, ... it asks the oracle whether a counterexample searcher
    halts on (p, K, k, x), that is whether some later output y_m strays from
    y_K by more than 2^-k + 2^-m; K grows until the answer is no, and then
    y_K is printed.  K carries over between levels.
    """
    from .stdlib import counterexample_searcher
    a = _Builder(f"weak_to_strong({p.name or 'p'}): certified subsequence of a weak stream")
    search, prog = _code(a, counterexample_searcher()), _code(a, p)
    a("SETC", f"r{QB}", prog)
    a.copy(0, QB + 3, "i0")
    a.block_dim("i5", 3)
    a("MOVR", "r101", a.one)   # K
    a("MOVR", "r102", a.one)   # k
    a.label("ask")
    a("MOVR", f"r{QB + 1}", "r101")
    a("MOVR", f"r{QB + 2}", "r102")
    a("QRY", search, f"r{QB}", "i5")
    a("JEQ", "r0", 0, "emit")
    a("ADD", "r101", "r101", a.one)
    a("JMP", "ask")
    a.label("emit")
    a("MOVI", "i6", "r101")
    a("USIM", prog, f"r{QB + 3}", "i0", "i6", -1, f"r{YB}", 0, "i7")
    a("JEQ", "i7", -1, "stop")
    a.copy(YB, 0, "i7")
    a("OUT", "i7")
    a("ADD", "r102", "r102", a.one)
    a("JMP", "ask")
    a.label("stop")
    a("HALT")
    return a.build(f"weak_to_strong_{p.name}" if p.name else "weak_to_strong")


def strong_oracle_to_weak(p: Program, dim: int = 1) -> Program:
    """Weak machine (no QRY) for a strong oracle machine p with ``dim``-vector outputs.

    Level n simulates p up to its n-th output while queries are answered
    "halts" only if the queried machine halts within m steps, starting from
    m = n.  If some output is missing or two outputs i < j <= n break
    ||y_i - y_j|| <= 2^-i + 2^-j, m is doubled and the level repeated;
    otherwise y_n is printed.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    a = _Builder(f"strong_oracle_to_weak({p.name or 'p'}): simulation levels with growing query budgets")
    prog = _code(a, p)
    a.save_inputs()
    a("MOVR", "r101", a.one)        # n
    a.label("level")
    a("MOVR", "r102", "r101")       # m
    a.label("try")
    a("MOVI", "i5", "r101")
    a("MOVI", "i6", "r102")
    a("USIM", prog, f"r{XB}", "i0", "i5", "i6", f"r{BUF}", dim, "i7")
    a("JEQ", "i7", -1, "raise")
    a("MOVR", "r103", a.one)        # i
    a("MOVR", "r105", a.half)       # 2^-i
    a.label("pair_i")
    a("JEQ", "r103", "r101", "ok")
    a("ADD", "r104", "r103", a.one)   # j
    a("MUL", "r106", "r105", a.half)  # 2^-j
    a.label("pair_j")
    a("JLT", "r101", "r104", "next_i")
    a("SUB", "r107", "r103", a.one)
    a.address("i8", BUF, "r107", dim)
    a("SUB", "r107", "r104", a.one)
    a.address("i9", BUF, "r107", dim)
    a.norm1("i8", "i9", dim, "r108")
    a("ADD", "r109", "r105", "r106")
    a("JLT", "r109", "r108", "raise")
    a("ADD", "r104", "r104", a.one)
    a("MUL", "r106", "r106", a.half)
    a("JMP", "pair_j")
    a.label("next_i")
    a("ADD", "r103", "r103", a.one)
    a("MUL", "r105", "r105", a.half)
    a("JMP", "pair_i")
    a.label("ok")
    a("SUB", "r107", "r101", a.one)
    a.address("i8", BUF, "r107", dim)
    a.copy("i8", 0, dim)
    a("OUT", dim)
    a("ADD", "r101", "r101", a.one)
    a("JMP", "level")
    a.label("raise")
    a("ADD", "r102", "r102", "r102")
    a("JMP", "try")
    return a.build(f"strong_oracle_to_weak_{p.name}" if p.name else "strong_oracle_to_weak")


# -- evaluation from epigraph and hypograph -------------------------------------

def epihypo_to_strong(m_epi: Program, m_hypo: Program) -> Program:
    """Strong machine for f from semideciders of its strict epi- and hypograph.

    Level n dovetails, by total weight of (j, s), over candidates
    q_j = (c + z_j) / 2^n, with c = 2^n * (previous output) and
    z = 0, 1, -1, 2, -2, ..., and over step bounds s.  When the epigraph
    machine accepts (x, q + 2^-n) and the hypograph machine accepts
    (x, q - 2^-n) within s steps each, q is printed: |q - f(x)| < 2^-n.
    """
    a = _Builder("epihypo_to_strong: dovetailed search for q with f(x) in (q - 2^-n, q + 2^-n)")
    epi, hypo = _code(a, m_epi), _code(a, m_hypo)
    a.copy(0, QB, "i0")
    a.block_slot("i10", 0)
    a.block_dim("i5", 1)
    a("MOVR", "r101", a.zero)      # previous output
    a("MOVR", "r102", a.one)       # 2^n
    a("MOVR", "r103", a.one)       # 2^-n
    a.label("level")
    a("ADD", "r102", "r102", "r102")
    a("MUL", "r103", "r103", a.half)
    a("MUL", "r104", "r101", "r102")   # c
    a("MOVR", "r105", a.one)           # weight
    a.label("weight")
    a("ADD", "r105", "r105", a.one)
    a("MOVR", "r106", a.one)           # j
    a("MOVR", "r107", a.zero)          # z_j
    a.label("cand")
    a("JEQ", "r106", "r105", "weight")
    a("SUB", "r108", "r105", "r106")   # s
    a("MOVI", "i6", "r108")
    a("ADD", "r109", "r104", "r107")
    a("DIV", "r109", "r109", "r102")   # q
    a("ADD", "r110", "r109", "r103")
    a("STOREI", "i10", "r110")
    a("UHALT", epi, f"r{QB}", "i5", "i6")
    a("JEQ", "r0", 0, "next")
    a("SUB", "r110", "r109", "r103")
    a("STOREI", "i10", "r110")
    a("UHALT", hypo, f"r{QB}", "i5", "i6")
    a("JEQ", "r0", 0, "next")
    a("MOVR", "r0", "r109")
    a("OUT", 1)
    a("MOVR", "r101", "r109")
    a("JMP", "level")
    a.label("next")
    a("ADD", "r106", "r106", a.one)
    a("JLT", a.zero, "r107", "flip")
    a("SUB", "r107", a.one, "r107")
    a("JMP", "cand")
    a.label("flip")
    a("SUB", "r107", a.zero, "r107")
    a("JMP", "cand")
    return a.build("epihypo_to_strong")


def strong_charfn_to_decider(p: Program) -> Program:
    """Decider from a strong machine for a characteristic function.

    |y_2 - chi(x)| <= 1/4, so y_2 > 1/2 exactly when chi(x) = 1.
    """
    a = _Builder(f"strong_charfn_to_decider({p.name or 'p'}): read off the second output")
    prog = _code(a, p)
    a("USIM", prog, "r0", "i0", 2, -1, "r100", 0, "i1")
    a("JEQ", "i1", -1, "missing")
    a("JLT", a.half, "r100", "yes")
    a("MOVR", "r0", a.zero)
    a("OUT", 1)
    a("HALT")
    a.label("yes")
    a("MOVR", "r0", a.one)
    a("OUT", 1)
    a("HALT")
    a.label("missing")
    a.forever()
    return a.build(f"charfn_decider_{p.name}" if p.name else "charfn_decider")


# -- arithmetical hierarchy --------------------------------------------------------

def _dovetail_processes(a: _Builder, width: int, step_body: Callable[[], None]) -> None:
    """Round r runs one step of processes u = 1..r (diagonal order).

    Process state lives at STATE + width*u ...; ``step_body`` finds the
    pointer in i22, u in i21 and 2^-u in r121, and must fall through.
    """
    a("MOVI", "i20", 0)
    a.label("round")
    a("INCI", "i20")
    a("MOVI", "i21", 0)
    a("MOVI", "i22", STATE)
    a("MOVR", "r121", a.one)
    a.label("proc")
    a("INCI", "i21")
    a("JLT", "i20", "i21", "round")
    a("MUL", "r121", "r121", a.half)
    step_body()
    for _ in range(width):
        a("INCI", "i22")
    a("JMP", "proc")


def _state_load(a: _Builder, regs: Sequence[str]) -> None:
    a("MOVI", "i23", "i22")
    for k, r in enumerate(regs):
        if k:
            a("INCI", "i23")
        a("LOADI", r, "i23")


def _state_store(a: _Builder, regs: Sequence[str]) -> None:
    a("MOVI", "i23", "i22")
    for k, r in enumerate(regs):
        if k:
            a("INCI", "i23")
        a("STOREI", "i23", r)


def cauchy_transform(p: Program) -> Program:
    """Stream that converges to 0 iff p's scalar output stream is Cauchy.

    For every u (dovetailed) a process keeps a start index v and walks the
    pairs (a, b) in diagonal order; each step prints 0, and when
    |y_{v+a} - y_{v+b}| >= 2^-u it prints 2^-u, moves to v + 1 and restarts
    the walk.  So 2^-u recurs forever iff the sequence is not eventually
    2^-u-close, and no other nonzero values occur.  p's outputs are cached,
    doubling the cached prefix when needed.  A finite p stream (not
    convergent by convention) makes the transformed stream finite.
    """
    a = _Builder(f"cauchy_transform({p.name or 'p'}): per-u restart searches for 2^-u-far pairs")
    prog = _code(a, p)
    a.save_inputs()
    a("MOVR", "r120", a.zero)      # cached outputs

    def body():
        _state_load(a, ("r122", "r123", "r124"))   # v - 1, a, b
        a("MOVR", "r0", a.zero)
        a("OUT", 1)
        a("ADD", "r125", "r122", a.one)
        a("ADD", "r126", "r125", "r124")
        a("ADD", "r125", "r125", "r123")
        a("MOVR", "r127", "r125")
        a("JLT", "r126", "r127", "need")
        a("MOVR", "r127", "r126")
        a.label("need")
        a("JLT", "r120", "r127", "extend")
        a("JMP", "cached")
        a.label("extend")
        a("ADD", "r120", "r120", "r120")
        a("JLT", "r127", "r120", "sim")
        a("MOVR", "r120", "r127")
        a.label("sim")
        a("MOVI", "i24", "r120")
        a("USIM", prog, f"r{XB}", "i0", "i24", -1, f"r{BUF}", 1, "i25")
        a("JEQ", "i25", -1, "stop")
        a.label("cached")
        a.address("i26", BUF - 1, "r125")
        a("LOADI", "r128", "i26")
        a.address("i26", BUF - 1, "r126")
        a("LOADI", "r129", "i26")
        a("SUB", "r128", "r128", "r129")
        a.abs("r128", "r128", a.zero)
        a("JLT", "r128", "r121", "close")
        a("MOVR", "r0", "r121")
        a("OUT", 1)
        a("ADD", "r122", "r122", a.one)
        a("MOVR", "r123", a.zero)
        a("MOVR", "r124", a.zero)
        a("JMP", "store")
        a.label("close")
        a("JEQ", "r124", a.zero, "diag")
        a("ADD", "r123", "r123", a.one)
        a("SUB", "r124", "r124", a.one)
        a("JMP", "store")
        a.label("diag")
        a("ADD", "r124", "r123", a.one)
        a("MOVR", "r123", a.zero)
        a.label("store")
        _state_store(a, ("r122", "r123", "r124"))

    _dovetail_processes(a, 3, body)
    a.label("stop")
    a("HALT")
    return a.build(f"cauchy_{p.name}" if p.name else "cauchy")


def _decide(a: _Builder, prog: str, dim: str, yes: str, no: str) -> None:
    """Run a decider on the argument block; no output counts as 0."""
    a("USIM", prog, f"r{QB}", dim, 1, -1, "r100", 0, "i6")
    a("JEQ", "i6", -1, no)
    a("JEQ", "r100", a.one, yes)
    a("JMP", no)


def sigma2_to_boundedness(w: DeciderSpec | Program) -> Program:
    """Output sequence bounded iff there is y with (x, y, z) in W for all z.

    For y = 1, 2, ...: search z = 1, 2, ... for (x, y, z) not in W; on
    success print y and move to y + 1.
    """
    w = _spec(w, "sigma2")
    a = _Builder("sigma2_to_boundedness: print y whenever some z refutes y")
    prog = _code(a, w.program)
    a.copy(0, QB, "i0")
    a.block_slot("i10", 0)
    a.block_slot("i11", 1)
    a.block_dim("i5", 2)
    a("MOVR", "r101", a.one)       # y
    a.label("next_y")
    a("MOVR", "r102", a.one)       # z
    a.label("test")
    a("STOREI", "i10", "r101")
    a("STOREI", "i11", "r102")
    _decide(a, prog, "i5", "member", "refuted")
    a.label("refuted")
    a("MOVR", "r0", "r101")
    a("OUT", 1)
    a("ADD", "r101", "r101", a.one)
    a("JMP", "next_y")
    a.label("member")
    a("ADD", "r102", "r102", a.one)
    a("JMP", "test")
    return a.build("sigma2_boundedness")


def sigma3_to_nonconvergence(w: DeciderSpec | Program) -> Program:
    """Stream failing to converge iff some u has: for all v exists w, (x, u, v, w) in W.

    Process u (dovetailed) starts with v = 1 and for w = 1, 2, ... prints 0;
    on (x, u, v, w) in W it prints 2^-u, increments v and restarts w.
    """
    w = _spec(w, "sigma3")
    a = _Builder("sigma3_to_nonconvergence: 2^-u recurs iff every v of process u finds a w")
    prog = _code(a, w.program)
    a.copy(0, QB, "i0")
    a.block_slot("i10", 0)
    a.block_slot("i11", 1)
    a.block_slot("i12", 2)
    a.block_dim("i5", 3)

    def body():
        _state_load(a, ("r122", "r123"))   # v - 1, w - 1
        a("MOVR", "r0", a.zero)
        a("OUT", 1)
        a("MOVR", "r124", "i21")
        a("STOREI", "i10", "r124")
        a("ADD", "r124", "r122", a.one)
        a("STOREI", "i11", "r124")
        a("ADD", "r124", "r123", a.one)
        a("STOREI", "i12", "r124")
        _decide(a, prog, "i5", "hit", "miss")
        a.label("miss")
        a("ADD", "r123", "r123", a.one)
        a("JMP", "store")
        a.label("hit")
        a("MOVR", "r0", "r121")
        a("OUT", 1)
        a("ADD", "r122", "r122", a.one)
        a("MOVR", "r123", a.zero)
        a.label("store")
        _state_store(a, ("r122", "r123"))

    _dovetail_processes(a, 2, body)
    return a.build("sigma3_nonconvergence")


def sigma2_to_weak_semidecision(rectangles: Program) -> Program:
    """Bounded output iff x lies in V = union of closed sets A_n.

    ``rectangles`` maps (n, m) to (flag, a_1..a_d, b_1..b_d): flag 1 means
    the m-th open box exhausting the complement of A_n is (a, b); flag 0
    (or no output) means there is no such box.  Stage n checks boxes m = 1,
    2, ..., printing n after each check, and moves to n + 1 once x is
    inside a box.
    """
    a = _Builder("sigma2_to_weak_semidecision: stage n advances once a box of the complement of A_n holds x")
    prog = _code(a, rectangles)
    a.save_inputs()
    a("MOVR", "r101", a.one)       # n
    a.label("stage")
    a("MOVR", "r102", a.one)       # m
    a.label("check")
    a("MOVR", f"r{QB}", "r101")
    a("MOVR", f"r{QB + 1}", "r102")
    a("USIM", prog, f"r{QB}", 2, 1, -1, f"r{YB}", 0, "i6")
    a("JEQ", "i6", -1, "outside")
    a("JEQ", f"r{YB}", a.zero, "outside")
    a("MOVI", "i7", XB)            # x_k
    a("MOVI", "i8", YB + 1)        # a_k
    a("MOVR", "r103", "i0")
    a.address("i9", YB + 1, "r103")  # b_k
    a("MOVI", "i11", "i0")
    a.label("coord")
    a("JEQ", "i11", 0, "inside")
    a("LOADI", "r104", "i7")
    a("LOADI", "r105", "i8")
    a("LOADI", "r106", "i9")
    a("JLT", "r105", "r104", "above")
    a("JMP", "outside")
    a.label("above")
    a("JLT", "r104", "r106", "within")
    a("JMP", "outside")
    a.label("within")
    a("INCI", "i7")
    a("INCI", "i8")
    a("INCI", "i9")
    a("DECI", "i11")
    a("JMP", "coord")
    a.label("inside")
    a("MOVR", "r0", "r101")
    a("OUT", 1)
    a("ADD", "r101", "r101", a.one)
    a("JMP", "stage")
    a.label("outside")
    a("MOVR", "r0", "r101")
    a("OUT", 1)
    a("ADD", "r102", "r102", a.one)
    a("JMP", "check")
    return a.build("sigma2_weak_semidecision")


def _spec(w, arity: str) -> DeciderSpec:
    if isinstance(w, Program):
        return DeciderSpec(w, arity)
    if w.arity != arity:
        raise ValueError(f"expected a {arity} decider, got {w.arity}")
    return w


# -- continuous functions ------------------------------------------------------------

def _emit_poly(a: _Builder, terms: Mapping[tuple, Rational], xregs: Sequence[str], acc: str) -> None:
    """acc := sum of c * prod x_i^e_i."""
    a("MOVR", acc, a.zero)
    for e, c in sorted(terms.items()):
        a.setq("r150", c)
        for x, k in zip(xregs, e):
            for _ in range(k):
                a("MUL", "r150", "r150", x)
        a("ADD", acc, acc, "r150")


def _emit_box_dispatch(a: _Builder, xregs: Sequence[str], bound: str, m_max: int, block: str) -> None:
    """Jump to ``block``_m for the least m <= m_max with |x_i| + bound <= m; else spin."""
    a("MOVR", "r151", a.zero)
    for x in xregs:
        a.abs("r152", x, a.zero)
        keep = a.fresh("max")
        a("JLT", "r152", "r151", keep)
        a("MOVR", "r151", "r152")
        a.label(keep)
    a("ADD", "r151", "r151", bound)
    for m in range(1, m_max + 1):
        skip = a.fresh("skip")
        a.setq("r153", m)
        a("JLT", "r153", "r151", skip)
        a("JMP", f"{block}_{m}")
        a.label(skip)
    a.forever()


def continuous_eval(scheme: ApproximationScheme) -> Program:
    """Print p(n, m)(x) for n = 1..n_max, with m the least box holding x."""
    d = scheme.dim
    a = _Builder(f"continuous_eval: levels 1..{scheme.n_max} of a polynomial scheme on boxes 1..{scheme.m_max}")
    a.save_inputs()
    xregs = [f"r{XB + k}" for k in range(d)]
    _emit_box_dispatch(a, xregs, a.zero, scheme.m_max, "box")
    for m in range(1, scheme.m_max + 1):
        a.label(f"box_{m}")
        for n in range(1, scheme.n_max + 1):
            _emit_poly(a, scheme.terms(n, m), xregs, "r0")
            a("OUT", 1)
        a("HALT")
    return a.build("continuous_eval")


def compose_strong_continuous(g: Program, scheme: ApproximationScheme) -> Program:
    """Strong machine for f(g(x)), f given by a scheme with moduli.

    The first output y_1 of g bounds g(x) by |y_1| + 1/2, which picks the
    box m; level n then simulates g to output mu(n+1, m+1) and prints
    p(n+1, m+1) at that output.  Both error terms are at most 2^-(n+1).
    """
    if scheme.moduli is None:
        raise ValueError("composition needs moduli of continuity")
    d = scheme.dim
    if scheme.m_max < 2:
        raise ValueError("m_max must be >= 2 (box m + 1 is used)")
    a = _Builder(f"compose_strong_continuous({g.name or 'g'}): levels 1..{scheme.n_max - 1}")
    prog = _code(a, g)
    a.save_inputs()
    a("USIM", prog, f"r{XB}", "i0", 1, -1, f"r{YB}", 0, "i6")
    a("JEQ", "i6", -1, "stop")
    yregs = [f"r{YB + k}" for k in range(d)]
    _emit_box_dispatch(a, yregs, a.half, scheme.m_max - 1, "box")
    for m in range(1, scheme.m_max):
        a.label(f"box_{m}")
        for n in range(1, scheme.n_max):
            mu = max(1, int(scheme.moduli(n + 1, m + 1)))
            a("USIM", prog, f"r{XB}", "i0", mu, -1, f"r{YB}", 0, "i6")
            a("JEQ", "i6", -1, "stop")
            _emit_poly(a, scheme.terms(n + 1, m + 1), yregs, "r0")
            a("OUT", 1)
        a("HALT")
    a.label("stop")
    a("HALT")
    return a.build(f"compose_{g.name}" if g.name else "compose")


TRANSFORMERS = {
    "weak-to-strong": weak_to_strong,
    "strong-oracle-to-weak": strong_oracle_to_weak,
    "epihypo": epihypo_to_strong,
    "charfn-decider": strong_charfn_to_decider,
    "cauchy": cauchy_transform,
    "sigma2-boundedness": sigma2_to_boundedness,
    "sigma3-nonconvergence": sigma3_to_nonconvergence,
    "sigma2-weak-semidecision": sigma2_to_weak_semidecision,
    "continuous-eval": continuous_eval,
    "compose": compose_strong_continuous,
}
