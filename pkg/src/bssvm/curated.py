"""Small hand-written machines used to exercise the transformers.

Each is a few lines of assembly whose behaviour can be traced by hand; the
docstring of each group says what is known about them.
"""

from __future__ import annotations

from functools import lru_cache

from .machine import Program, parse_program


def _prog(name: str, text: str) -> Program:
    return parse_program(text, name=name)


# -- scalar output sequences y_1, y_2, ... ------------------------------------

SEQUENCES = {
    # 2^-n
    "geometric": """
.const c0 = 1
.const c1 = 1/2
  SETC r1 c0
  SETC r2 c1
loop:
  MUL r1 r2
  MOVR r0 r1
  OUT 1
  JMP loop
""",
    # 1/n
    "harmonic": """
.const c0 = 1
  SETC r2 c0
loop:
  ADD r1 r2
  DIV r0 r2 r1
  OUT 1
  JMP loop
""",
    # 1 - 1/n
    "one_minus_harmonic": """
.const c0 = 1
  SETC r2 c0
loop:
  ADD r1 r2
  DIV r3 r2 r1
  SUB r0 r2 r3
  OUT 1
  JMP loop
""",
    # 3/2 forever
    "constant": """
.const c0 = 3/2
  SETC r0 c0
loop:
  OUT 1
  JMP loop
""",
    # 1, 0, 1, 0, ...
    "alternating": """
.const c0 = 1
.const c1 = 0
loop:
  SETC r0 c0
  OUT 1
  SETC r0 c1
  OUT 1
  JMP loop
""",
    # (-1)^n
    "sign_flip": """
.const c0 = -1
.const c1 = 1
loop:
  SETC r0 c0
  OUT 1
  SETC r0 c1
  OUT 1
  JMP loop
""",
    # n
    "counting": """
.const c0 = 1
  SETC r2 c0
loop:
  ADD r1 r2
  MOVR r0 r1
  OUT 1
  JMP loop
""",
    # 1, 1/2, 1/4 and halt
    "finite": """
.const c0 = 1
.const c1 = 1/2
  SETC r0 c0
  OUT 1
  SETC r1 c1
  MUL r0 r1
  OUT 1
  MUL r0 r1
  OUT 1
  HALT
""",
}

# limits of the convergent ones (None: not convergent)
LIMITS = {"geometric": 0, "harmonic": 0, "one_minus_harmonic": 1, "constant": "3/2",
          "alternating": None, "sign_flip": None, "counting": None, "finite": None}


@lru_cache(maxsize=None)
def sequence(name: str) -> Program:
    return _prog(name, SEQUENCES[name])


# -- deciders for Sigma2 sets: input (x, y, z), output 1/0 -----------------------

SIGMA2 = {
    # exists y forall z: y >= 2 -- true
    "y_at_least_2": ("""
  JLT r1 2 no
  MOVI i1 1
  MOVR r0 i1
  OUT 1
  HALT
no:
  MOVI i1 0
  MOVR r0 i1
  OUT 1
  HALT
""", True, None),
    "empty": ("""
  MOVI i1 0
  MOVR r0 i1
  OUT 1
  HALT
""", False, None),
    "everything": ("""
  MOVI i1 1
  MOVR r0 i1
  OUT 1
  HALT
""", True, 0),
    # y*z != 6: true (y = 4); outputs 1, 2, 3 then stall
    "product_not_6": ("""
  MUL r4 r1 r2
  JEQ r4 6 no
  MOVI i1 1
  MOVR r0 i1
  OUT 1
  HALT
no:
  MOVI i1 0
  MOVR r0 i1
  OUT 1
  HALT
""", True, 3),
}


def sigma2_member(name: str, y: int, z: int) -> bool:
    """Direct evaluation of the curated Sigma2 predicates (independent of the VM)."""
    return {"y_at_least_2": y >= 2, "empty": False, "everything": True,
            "product_not_6": y * z != 6}[name]


@lru_cache(maxsize=None)
def sigma2(name: str) -> Program:
    return _prog(name, SIGMA2[name][0])


# -- deciders for Sigma3 sets: input (x, u, v, w) -------------------------------

SIGMA3 = {
    # u = 1 and w >= v: true, 1/2 recurs
    "u1_w_ge_v": ("""
  JEQ r1 1 u1
  JMP no
u1:
  JLT r3 r2 no
  MOVI i1 1
  MOVR r0 i1
  OUT 1
  HALT
no:
  MOVI i1 0
  MOVR r0 i1
  OUT 1
  HALT
""", True),
    "empty": (SIGMA2["empty"][0], False),
    # u = 1 and v = 1: false, 1/2 appears once
    "u1_v1": ("""
  JEQ r1 1 u1
  JMP no
u1:
  JEQ r2 1 yes
  JMP no
yes:
  MOVI i1 1
  MOVR r0 i1
  OUT 1
  HALT
no:
  MOVI i1 0
  MOVR r0 i1
  OUT 1
  HALT
""", False),
}


def sigma3_member(name: str, u: int, v: int, w: int) -> bool:
    return {"u1_w_ge_v": u == 1 and w >= v, "empty": False, "u1_v1": u == 1 and v == 1}[name]


@lru_cache(maxsize=None)
def sigma3(name: str) -> Program:
    return _prog(name, SIGMA3[name][0])


# -- box enumerations for sigma2_to_weak_semidecision -----------------------------

RECTANGLES = {
    # complement of {0}: box m is (-k-1, -1/k) for odd m, (1/k, k+1) for even m, k = ceil(m/2)
    "origin": """
.const c0 = 1
.const c1 = 2
  SETC r10 c0
  SETC r11 c1
  MOVR r12 r1
parity:
  JLT r12 r11 split
  SUB r12 r11
  JMP parity
split:
  ADD r13 r1 r12
  DIV r13 r11
  MOVR r0 r10
  JEQ r12 r10 odd
  DIV r1 r10 r13
  ADD r2 r13 r10
  OUT 3
  HALT
odd:
  MOVI i1 0
  MOVR r1 i1
  SUB r1 r13
  SUB r1 r10
  MOVR r2 i1
  DIV r14 r10 r13
  SUB r2 r14
  OUT 3
  HALT
""",
    # V = R: no boxes at all
    "everywhere": """
  MOVI i1 0
  MOVR r0 i1
  OUT 3
  HALT
""",
}


@lru_cache(maxsize=None)
def rectangles(name: str) -> Program:
    return _prog(name, RECTANGLES[name])


# -- semideciders of strict epigraph / hypograph: input (x, y) -------------------

EPIHYPO = {
    # f(x) = x
    "identity": ("""
  JLT r0 r1 yes
loop:
  JMP loop
yes:
  HALT
""", """
  JLT r1 r0 yes
loop:
  JMP loop
yes:
  HALT
"""),
    # f = 0
    "zero": ("""
  JLT 0 r1 yes
loop:
  JMP loop
yes:
  HALT
""", """
  JLT r1 0 yes
loop:
  JMP loop
yes:
  HALT
"""),
    # f(x) = x on x >= 0; both loop for x < 0
    "identity_nonneg": ("""
  JLT r0 0 loop
  JLT r0 r1 yes
loop:
  JMP loop
yes:
  HALT
""", """
  JLT r0 0 loop
  JLT r1 r0 yes
loop:
  JMP loop
yes:
  HALT
"""),
}


@lru_cache(maxsize=None)
def epihypo(name: str) -> tuple[Program, Program]:
    e, h = EPIHYPO[name]
    return _prog(f"{name}_epi", e), _prog(f"{name}_hypo", h)


# -- strong machines for characteristic functions of [0, 1) ----------------------

CHARFN = {
    # chi exactly, repeated
    "exact": """
.const c0 = 0
.const c1 = 1
  MOVR r1 r0
  SETC r0 c0
  JLT r1 0 emit
  JLT r1 1 inside
  JMP emit
inside:
  SETC r0 c1
emit:
  OUT 1
  JMP emit
""",
    # 1 - 2^-(n+1) inside, 2^-(n+1) outside: y_2 = 7/8 or 1/8
    "approaching": """
.const c0 = 1/2
.const c1 = 1
  MOVR r1 r0
  SETC r2 c0
  SETC r3 c1
  SETC r4 c0
  MOVI i1 0
  JLT r1 0 loop
  JLT r1 1 inside
  JMP loop
inside:
  MOVI i1 1
loop:
  MUL r2 r4
  MOVR r0 r2
  JEQ i1 0 emit
  SUB r0 r3 r2
emit:
  OUT 1
  JMP loop
""",
}


@lru_cache(maxsize=None)
def charfn(name: str) -> Program:
    return _prog(name, CHARFN[name])


# -- strong machines with halting queries ------------------------------------------

def oracle_machine(target_code: int, name: str) -> Program:
    """Strong machine printing 1, 1, ... if the coded machine halts on (), else 0, 0, ..."""
    return _prog(name, f"""
.const c0 = {target_code}
  QRY c0 r100 0
loop:
  OUT 1
  JMP loop
""")
