"""Small emitter for generating assembly programs from Python.

Generated text goes through :func:`~bssvm.machine.parse_program`, so every
emitted program is validated exactly like hand-written source.
"""

from __future__ import annotations

from .exactnum import format_rational, rational
from .machine import Program, format_program, parse_program


class Asm:
    def __init__(self, doc: str | list[str] = ()):
        if isinstance(doc, str):
            doc = doc.strip("\n").splitlines()
        self.doc = [(" " + d) if d else "" for d in doc]
        self.consts: list = []
        self.lines: list[str] = []
        self._fresh = 0

    def const(self, q) -> str:
        """Constant-table reference for ``q``; equal values share a slot."""
        q = rational(q)
        for k, c in enumerate(self.consts):
            if c == q:
                return f"c{k}"
        self.consts.append(q)
        return f"c{len(self.consts) - 1}"

    def fresh(self, stem: str = "L") -> str:
        self._fresh += 1
        return f"{stem}_{self._fresh}"

    def label(self, name: str) -> str:
        self.lines.append(f"{name}:")
        return name

    def __call__(self, opcode: str, *operands) -> None:
        self.lines.append("  " + " ".join([opcode, *map(str, operands)]))

    def setq(self, reg: str, q) -> None:
        self("SETC", reg, self.const(q))

    def out(self, reg: str) -> None:
        """Emit the scalar held in ``reg`` as a one-dimensional output."""
        if reg != "r0":
            self("MOVR", "r0", reg)
        self("OUT", 1)

    def abs(self, dst: str, src: str, zero: str) -> None:
        """dst := |src|; ``zero`` must hold 0."""
        done = self.fresh("abs")
        if dst != src:
            self("MOVR", dst, src)
        self("JLT", zero, dst, done)
        self("SUB", dst, zero, dst)
        self.label(done)

    def source(self) -> str:
        head = ["#" + d for d in self.doc]
        head += [f".const c{k} = {format_rational(c)}" for k, c in enumerate(self.consts)]
        return "\n".join(head + self.lines) + "\n"

    def build(self, name: str = "") -> Program:
        p = parse_program(self.source(), name=name)
        # canonical text and structure
        return parse_program(format_program(p), name=name)
