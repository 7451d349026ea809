"""Generators for the shipped ``.bss`` programs.

The ``.bss`` files next to this module are the artifacts; this module is how
they were produced.  Run ``python -m bssvm.stdlib.sources`` to regenerate them.
Workspace registers start at r100 in programs that take a machine code plus an
input vector, so inputs of dimension below 100 are never clobbered.
"""

from __future__ import annotations

from pathlib import Path

from ..asm import Asm
from ..machine import Program, format_program


def char_unit_interval() -> Program:
    a = Asm("char_unit_interval: outputs 1 if 0 <= x < 1, else 0, then halts")
    a("JLT", "r0", 0, "no")
    a("JLT", "r0", 1, "yes")
    a.label("no")
    a.setq("r0", 0)
    a("OUT", 1)
    a("HALT")
    a.label("yes")
    a.setq("r0", 1)
    a("OUT", 1)
    a("HALT")
    return a.build("char_unit_interval")


def rational_semidecide() -> Program:
    a = Asm("""rational_semidecide: halts (output 1) iff x is rational
search over (a, s), s >= 1, by weight w = a + s; accept when x*s = +-a""")
    a("MOVR", "r10", "r0")
    a.setq("r11", 1)          # one
    a.setq("r12", 0)          # zero
    a("MOVR", "r13", "r11")   # w
    a.label("weight")
    a("MOVR", "r14", "r11")   # s
    a.label("split")
    a("SUB", "r15", "r13", "r14")   # a = w - s
    a("MUL", "r16", "r10", "r14")   # x*s
    a("JEQ", "r16", "r15", "found")
    a("SUB", "r17", "r12", "r15")
    a("JEQ", "r16", "r17", "found")
    a("JEQ", "r14", "r13", "next")
    a("ADD", "r14", "r14", "r11")
    a("JMP", "split")
    a.label("next")
    a("ADD", "r13", "r13", "r11")
    a("JMP", "weight")
    a.label("found")
    a("MOVR", "r0", "r11")
    a("OUT", 1)
    a("HALT")
    return a.build("rational_semidecide")


def _frac_abs(a: Asm, t: str, p: str, one: str, two: str, half: str, zero: str) -> None:
    """t := frac(|t|) by doubling up to a power of two above t, then subtracting."""
    a.abs(t, t, zero)
    a("MOVR", p, one)
    up, down, skip, done = a.fresh("up"), a.fresh("down"), a.fresh("skip"), a.fresh("frac")
    a.label(up)
    a("JLT", t, p, down)
    a("MUL", p, p, two)
    a("JMP", up)
    a.label(down)
    a("JLT", p, one, done)
    a("JLT", t, p, skip)
    a("SUB", t, t, p)
    a.label(skip)
    a("MUL", p, p, half)
    a("JMP", down)
    a.label(done)


def thomae() -> Program:
    a = Asm("""thomae: strong stream for h(p/q) = 1/q, h(0) = 1
for q = 1, 2, ... test whether q*x is an integer (via frac(q*|x|));
until one is found, the value 0 is printed at q = 2, 4, 8, ...;
afterwards 1/q is printed forever""")
    a.setq("r20", 0)
    a.setq("r21", 1)
    a.setq("r22", 2)
    a.setq("r23", "1/2")
    a("MOVR", "r10", "r0")
    _frac_abs(a, "r10", "r12", "r21", "r22", "r23", "r20")
    a("MOVR", "r13", "r20")   # frac(q*|x|)
    a("MOVR", "r14", "r20")   # q
    a("MOVR", "r15", "r22")   # next q at which to print
    a.label("loop")
    a("ADD", "r14", "r14", "r21")
    a("ADD", "r13", "r13", "r10")
    a("JLT", "r13", "r21", "nowrap")
    a("SUB", "r13", "r13", "r21")
    a.label("nowrap")
    a("JEQ", "r13", "r20", "found")
    a("JEQ", "r14", "r15", "print")
    a("JMP", "loop")
    a.label("print")
    a("MOVR", "r0", "r20")
    a("OUT", 1)
    a("MUL", "r15", "r15", "r22")
    a("JMP", "loop")
    a.label("found")
    a("DIV", "r0", "r21", "r14")
    a.label("stay")
    a("OUT", 1)
    a("JMP", "stay")
    return a.build("thomae")


def cantor_dist() -> Program:
    a = Asm("""cantor_dist: strong stream for the distance from x to the Cantor set
inside [0,1], descend through the ternary cover [a, a+L]; the n-th output
is 0 once L <= 2^(1-n), and the exact distance once x falls into an open
middle third (whose endpoints lie in the set)""")
    a.setq("r20", 0)
    a.setq("r21", 1)
    a.setq("r22", "1/2")
    a.setq("r23", "1/3")
    a("MOVR", "r10", "r0")
    a("JLT", "r10", "r20", "below")
    a("JLT", "r21", "r10", "above")
    a("MOVR", "r11", "r20")   # a
    a("MOVR", "r12", "r21")   # L
    a("MOVR", "r13", "r21")   # 2^(1-n)
    a.label("loop")
    a("JLT", "r13", "r12", "descend")
    a("MOVR", "r0", "r20")
    a("OUT", 1)
    a("MUL", "r13", "r13", "r22")
    a("JMP", "loop")
    a.label("descend")
    a("MUL", "r12", "r12", "r23")
    a("ADD", "r16", "r11", "r12")   # a + L/3
    a("ADD", "r17", "r16", "r12")   # a + 2L/3
    a("JLT", "r16", "r10", "right")
    a("JMP", "loop")
    a.label("right")
    a("JLT", "r10", "r17", "gap")
    a("MOVR", "r11", "r17")
    a("JMP", "loop")
    a.label("gap")
    a("SUB", "r18", "r10", "r16")
    a("SUB", "r19", "r17", "r10")
    a("MOVR", "r0", "r19")
    a("JLT", "r19", "r18", "stay")
    a("MOVR", "r0", "r18")
    a("JMP", "stay")
    a.label("below")
    a("SUB", "r0", "r20", "r10")
    a("JMP", "stay")
    a.label("above")
    a("SUB", "r0", "r10", "r21")
    a.label("stay")
    a("OUT", 1)
    a("JMP", "stay")
    return a.build("cantor_dist")


def _extend(a: Asm, t: str, p: str, s: str) -> None:
    """t := s/2 + 1/2 - 1/(2P) + |t|/(4P^2), P the least power of two above |t|.

    This is the real whose binary expansion is: sign bit, k ones, a zero,
    then the bits of |t|/2^k (P = 2^k).  Uses r20..r24 constants.
    """
    a("MOVR", s, "r20")
    pos = a.fresh("pos")
    a("JLT", "r20", t, pos)
    a("JEQ", t, "r20", pos)
    a("MOVR", s, "r21")
    a("SUB", t, "r20", t)
    a.label(pos)
    a("MOVR", p, "r21")
    up, done = a.fresh("up"), a.fresh("len")
    a.label(up)
    a("JLT", t, p, done)
    a("ADD", p, p, p)
    a("JMP", up)
    a.label(done)
    a("MUL", s, s, "r22")          # s/2
    a("ADD", s, s, "r22")          # + 1/2
    a("ADD", "r30", p, p)
    a("DIV", "r31", "r21", "r30")
    a("SUB", s, s, "r31")          # - 1/(2P)
    a("MUL", "r30", "r30", "r30")  # 4P^2
    a("DIV", "r31", t, "r30")
    a("ADD", t, s, "r31")


def pair() -> Program:
    a = Asm("""pair: strong stream for a bijection h: R^2 -> [0, 2)
on [0,1)^2, h interleaves binary expansions (finitely many 1s):
c(2n-1) = n-th bit of y, c(2n) = n-th bit of x;
elsewhere h = 1 + interleaving of e(x), e(y), where the expansion of e(t) is
sign bit, k ones, a zero, then the bits of |t| with 2^(k-1) <= floor|t| < 2^k""")
    a.setq("r20", 0)
    a.setq("r21", 1)
    a.setq("r22", "1/2")
    a("MOVR", "r10", "r0")   # u
    a("MOVR", "r11", "r1")   # v
    a("MOVR", "r12", "r20")  # partial sum
    a("JLT", "r10", "r20", "ext")
    a("JLT", "r11", "r20", "ext")
    a("JLT", "r10", "r21", "core1")
    a("JMP", "ext")
    a.label("core1")
    a("JLT", "r11", "r21", "bits")
    a.label("ext")
    _extend(a, "r10", "r13", "r14")
    _extend(a, "r11", "r13", "r14")
    a("MOVR", "r12", "r21")
    a.label("bits")
    a("MOVR", "r13", "r22")  # weight 2^-n
    a.label("loop")
    for src, tag in (("r11", "y"), ("r10", "x")):
        zero = a.fresh("zero" + tag)
        a("ADD", src, src, src)
        a("JLT", src, "r21", zero)
        a("SUB", src, src, "r21")
        a("ADD", "r12", "r12", "r13")
        a.label(zero)
        a("MUL", "r13", "r13", "r22")
        a("MOVR", "r0", "r12")
        a("OUT", 1)
    a("JMP", "loop")
    return a.build("pair")


def unpair() -> Program:
    a = Asm("""unpair: strong stream for the inverse of pair, as 2-vectors (x, y)
z in [0,1): split the bits of z into odd (y) and even (x) positions;
z in [1,2): split the bits of z - 1 the same way and decode each stream
as sign bit, k ones, a zero, then bits with leading weight 2^(k-1);
the n-th vector is printed once both tails are at most 2^-n in total;
z outside [0,2) is not a value of pair and produces no output""")
    a.setq("r20", 0)
    a.setq("r21", 1)
    a.setq("r22", "1/2")
    a.setq("r23", 2)
    a("MOVR", "r10", "r0")           # remaining bits
    a("MOVR", "r11", "r22")          # weight x
    a("MOVR", "r12", "r22")          # weight y
    a("MOVR", "r13", "r20")          # |x| so far
    a("MOVR", "r14", "r20")          # |y| so far
    a("MOVR", "r15", "r20")          # sign x
    a("MOVR", "r16", "r20")          # sign y
    a("MOVR", "r17", "r21")          # 2^-n
    a("JLT", "r10", "r20", "hang")
    a("JLT", "r10", "r21", "core")
    a("SUB", "r10", "r10", "r21")
    a("JLT", "r10", "r21", "ext")
    a.label("hang")
    a("JMP", "hang")
    a.label("core")
    a("MOVI", "i1", 2)               # phase y: 0 sign, 1 header, 2 body
    a("MOVI", "i2", 2)               # phase x
    a("JMP", "loop")
    a.label("ext")
    a("MOVI", "i1", 0)
    a("MOVI", "i2", 0)
    a.label("loop")
    a("MUL", "r17", "r17", "r22")
    a.label("check")
    a("JEQ", "i1", 2, "check_x")
    a("JMP", "read")
    a.label("check_x")
    a("JEQ", "i2", 2, "check_w")
    a("JMP", "read")
    a.label("check_w")
    a("ADD", "r18", "r11", "r12")
    a("ADD", "r18", "r18", "r18")
    a("JLT", "r17", "r18", "read")
    a("MOVR", "r0", "r13")
    a("JEQ", "r15", "r20", "sx")
    a("SUB", "r0", "r20", "r0")
    a.label("sx")
    a("MOVR", "r1", "r14")
    a("JEQ", "r16", "r20", "sy")
    a("SUB", "r1", "r20", "r1")
    a.label("sy")
    a("OUT", 2)
    a("JMP", "loop")
    a.label("read")
    for phase, w, v, s, tag in (("i1", "r12", "r14", "r16", "y"), ("i2", "r11", "r13", "r15", "x")):
        zero, done = a.fresh("zero" + tag), a.fresh("done" + tag)
        sign1, head1, sign0, head0 = (a.fresh(t + tag) for t in ("sign1", "head1", "sign0", "head0"))
        a("ADD", "r10", "r10", "r10")
        a("JLT", "r10", "r21", zero)
        a("SUB", "r10", "r10", "r21")
        a("JEQ", phase, 0, sign1)
        a("JEQ", phase, 1, head1)
        a("ADD", v, v, w)
        a("MUL", w, w, "r22")
        a("JMP", done)
        a.label(sign1)
        a("MOVR", s, "r21")
        a("MOVI", phase, 1)
        a("JMP", done)
        a.label(head1)
        a("MUL", w, w, "r23")
        a("JMP", done)
        a.label(zero)
        a("JEQ", phase, 0, sign0)
        a("JEQ", phase, 1, head0)
        a("MUL", w, w, "r22")
        a("JMP", done)
        a.label(sign0)
        a("MOVI", phase, 1)
        a("JMP", done)
        a.label(head0)
        a("MOVI", phase, 2)
        a.label(done)
    a("JMP", "check")
    return a.build("unpair")


def halting_flag() -> Program:
    a = Asm("""halting_flag: input (code, x...); halts with output 1 iff the coded
machine halts on x, and runs forever otherwise""")
    a("MOVR", "r100", "r0")
    a("MOVI", "i1", "i0")
    a("DECI", "i1")
    a("UHALT", "r100", "r1", "i1", -1)
    a.setq("r0", 1)
    a("OUT", 1)
    a("HALT")
    return a.build("halting_flag")


def cohalting_flag() -> Program:
    a = Asm("""cohalting_flag: input (code, x...); prints 1 after each further step
of simulating the coded machine on x; once the simulation halts, the
outputs alternate 0, 1, 0, 1, ...; the stream converges (to 1) iff the
machine never halts""")
    a("MOVR", "r100", "r0")
    a("MOVI", "i1", "i0")
    a("DECI", "i1")
    a("MOVI", "i2", 0)
    a.label("loop")
    a("INCI", "i2")
    a("UHALT", "r100", "r1", "i1", "i2")
    a("JEQ", "r0", 1, "alt")
    a.setq("r0", 1)
    a("OUT", 1)
    a("JMP", "loop")
    a.label("alt")
    a.setq("r0", 0)
    a("OUT", 1)
    a.setq("r0", 1)
    a("OUT", 1)
    a("JMP", "alt")
    return a.build("cohalting_flag")


def q_cross_irrational() -> Program:
    a = Asm("""q_cross_irrational: input (x, y); strong stream of 2^-n (limit 0) on
rational x and irrational y; otherwise only finitely many outputs
first searches, silently, for x = +-a/s; then for n = 1, 2, ... compares
y with the n-th candidate +-a/s of the same enumeration, printing 2^-n
while they differ and halting when y is hit""")
    a.setq("r20", 0)
    a.setq("r21", 1)
    a.setq("r22", "1/2")
    for phase in ("x", "y"):
        src = "r0" if phase == "x" else "r1"
        a("MOVR", "r13", "r21")          # w
        a.label(f"weight_{phase}")
        a("MOVR", "r14", "r21")          # s
        a.label(f"split_{phase}")
        a("SUB", "r15", "r13", "r14")
        a("MUL", "r16", src, "r14")
        if phase == "x":
            a("JEQ", "r16", "r15", "found_x")
            a("SUB", "r17", "r20", "r15")
            a("JEQ", "r16", "r17", "found_x")
        else:
            a("JEQ", "r16", "r15", "hit")
            a("SUB", "r17", "r20", "r15")
            a("JEQ", "r16", "r17", "hit")
            a("MUL", "r18", "r18", "r22")
            a("MOVR", "r0", "r18")
            a("OUT", 1)
        a("JEQ", "r14", "r13", f"next_{phase}")
        a("ADD", "r14", "r14", "r21")
        a("JMP", f"split_{phase}")
        a.label(f"next_{phase}")
        a("ADD", "r13", "r13", "r21")
        a("JMP", f"weight_{phase}")
        if phase == "x":
            a.label("found_x")
            a("MOVR", "r18", "r21")      # 2^-n before halving
    a.label("hit")
    a("HALT")
    return a.build("q_cross_irrational")


def rational_weak_char() -> Program:
    a = Asm("""rational_weak_char: weak stream for the characteristic function of Q
prints 0 per failed candidate of the search x = +-a/s and 1 forever
once a match is found""")
    a.setq("r20", 0)
    a.setq("r21", 1)
    a("MOVR", "r10", "r0")
    a("MOVR", "r13", "r21")
    a.label("weight")
    a("MOVR", "r14", "r21")
    a.label("split")
    a("SUB", "r15", "r13", "r14")
    a("MUL", "r16", "r10", "r14")
    a("JEQ", "r16", "r15", "found")
    a("SUB", "r17", "r20", "r15")
    a("JEQ", "r16", "r17", "found")
    a("MOVR", "r0", "r20")
    a("OUT", 1)
    a("JEQ", "r14", "r13", "next")
    a("ADD", "r14", "r14", "r21")
    a("JMP", "split")
    a.label("next")
    a("ADD", "r13", "r13", "r21")
    a("JMP", "weight")
    a.label("found")
    a("MOVR", "r0", "r21")
    a.label("stay")
    a("OUT", 1)
    a("JMP", "stay")
    return a.build("rational_weak_char")


def _chi_bounded(one: bool) -> Program:
    name = "chi_bounded_one" if one else "chi_bounded_zero"
    what = "u_n = 1/max(y_n, 1/n)" if one else "v_n = 1/max(1 - y_n, 1/n)"
    tends = "1" if one else "0"
    a = Asm(f"""{name}: input (code, x...) of a weak machine for a characteristic
function with outputs y_n; prints {what}, which stays bounded iff
y_n tends to {tends}""")
    a.setq("r20", 0)
    a.setq("r21", 1)
    a("MOVR", "r100", "r0")
    a("MOVI", "i1", "i0")
    a("DECI", "i1")
    a("MOVI", "i2", 0)                 # n
    a("MOVR", "r101", "r20")           # n as a real
    a.label("loop")
    a("INCI", "i2")
    a("ADD", "r101", "r101", "r21")
    a("USIM", "r100", "r1", "i1", "i2", -1, "r102", 0, "i3")
    a("JEQ", "i3", -1, "done")
    if not one:
        a("SUB", "r102", "r21", "r102")
    a("DIV", "r103", "r21", "r101")    # 1/n
    a("JLT", "r103", "r102", "big")
    a("MOVR", "r102", "r103")
    a.label("big")
    a("DIV", "r0", "r21", "r102")
    a("OUT", 1)
    a("JMP", "loop")
    a.label("done")
    a("HALT")
    return a.build(name)


def chi_bounded_one() -> Program:
    return _chi_bounded(True)


def chi_bounded_zero() -> Program:
    return _chi_bounded(False)


def _norm_diff(a: Asm, base1: int, base2: int | None, dim: str, acc: str, tmp: str, zero: str) -> None:
    """acc := 1-norm of the dim-vector at base1 (minus the one at base2)."""
    loop, done = a.fresh("norm"), a.fresh("normed")
    a("MOVR", acc, zero)
    a("MOVI", "i10", dim)
    a("MOVI", "i11", base1)
    if base2 is not None:
        a("MOVI", "i12", base2)
    a.label(loop)
    a("JEQ", "i10", 0, done)
    a("LOADI", tmp, "i11")
    if base2 is not None:
        a("LOADI", "r99", "i12")
        a("SUB", tmp, tmp, "r99")
        a("INCI", "i12")
    a.abs(tmp, tmp, zero)
    a("ADD", acc, acc, tmp)
    a("INCI", "i11")
    a("DECI", "i10")
    a("JMP", loop)
    a.label(done)


def exceed_searcher() -> Program:
    a = Asm("""exceed_searcher: input (code, n, x...); halts iff some output of the
coded machine on x has 1-norm greater than n""")
    a.setq("r120", 0)
    a("MOVR", "r100", "r0")
    a("MOVI", "i1", "i0")
    a("DECI", "i1")
    a("DECI", "i1")
    a("MOVI", "i2", 0)
    a.label("next")
    a("INCI", "i2")
    a("USIM", "r100", "r2", "i1", "i2", -1, "r200", 0, "i3")
    a("JEQ", "i3", -1, "forever")
    _norm_diff(a, 200, None, "i3", "r101", "r102", "r120")
    a("JLT", "r1", "r101", "found")
    a("JMP", "next")
    a.label("found")
    a("HALT")
    a.label("forever")
    a("JMP", "forever")
    return a.build("exceed_searcher")


def counterexample_searcher() -> Program:
    a = Asm("""counterexample_searcher: input (code, K, k, x...); halts iff the
coded machine on x has an output y_K and some m > K for which y_m is
missing, of another dimension, or has ||y_K - y_m|| > 2^-k + 2^-m;
runs forever if y_K does not exist or no such m exists""")
    a.setq("r120", 0)
    a.setq("r121", 1)
    a.setq("r122", "1/2")
    a("MOVR", "r100", "r0")
    a("MOVI", "i1", "i0")
    a("DECI", "i1")
    a("DECI", "i1")
    a("DECI", "i1")
    a("MOVI", "i2", "r1")             # K
    a("USIM", "r100", "r3", "i1", "i2", -1, "r1000", 0, "i4")
    a("JEQ", "i4", -1, "forever")
    # 2^-k
    a("MOVR", "r103", "r121")
    a("MOVI", "i5", "r2")
    a.label("pow")
    a("JEQ", "i5", 0, "powed")
    a("MUL", "r103", "r103", "r122")
    a("DECI", "i5")
    a("JMP", "pow")
    a.label("powed")
    # 2^-m for m = K
    a("MOVR", "r104", "r121")
    a("MOVI", "i5", "i2")
    a.label("pow2")
    a("JEQ", "i5", 0, "search")
    a("MUL", "r104", "r104", "r122")
    a("DECI", "i5")
    a("JMP", "pow2")
    a.label("search")
    a("INCI", "i2")
    a("MUL", "r104", "r104", "r122")
    a("USIM", "r100", "r3", "i1", "i2", -1, "r2000", 0, "i6")
    a("JEQ", "i6", -1, "found")
    a("JEQ", "i6", "i4", "same")
    a("HALT")
    a.label("same")
    _norm_diff(a, 1000, 2000, "i4", "r101", "r102", "r120")
    a("ADD", "r105", "r103", "r104")
    a("JLT", "r105", "r101", "found")
    a("JMP", "search")
    a.label("found")
    a("HALT")
    a.label("forever")
    a("JMP", "forever")
    return a.build("counterexample_searcher")


GENERATORS = {
    "pair": pair,
    "unpair": unpair,
    "cantor_dist": cantor_dist,
    "thomae": thomae,
    "rational_semidecide": rational_semidecide,
    "char_unit_interval": char_unit_interval,
    "halting_flag": halting_flag,
    "cohalting_flag": cohalting_flag,
    "q_cross_irrational": q_cross_irrational,
    "rational_weak_char": rational_weak_char,
    "chi_bounded_one": chi_bounded_one,
    "chi_bounded_zero": chi_bounded_zero,
    "exceed_searcher": exceed_searcher,
    "counterexample_searcher": counterexample_searcher,
}


def write_all(directory: Path | None = None) -> list[Path]:
    directory = Path(directory or Path(__file__).parent)
    paths = []
    for name, gen in GENERATORS.items():
        path = directory / f"{name}.bss"
        path.write_text(format_program(gen()), encoding="utf-8")
        paths.append(path)
    return paths


if __name__ == "__main__":
    for p in write_all():
        print(p)
