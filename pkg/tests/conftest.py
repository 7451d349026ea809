import random
from collections.abc import Mapping

import gmpy2
import pytest

from bssvm.machine import SIGNATURES, Instruction, Operand, Program, encode_machine
from bssvm.stdlib import counterexample_searcher


def random_program(rng: random.Random, max_len: int = 12) -> Program:
    """A statically valid program drawn from every opcode and operand kind."""
    n = rng.randint(1, max_len)
    consts = tuple(gmpy2.mpq(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(rng.randint(0, 4)))
    ins = []
    for _ in range(n):
        while True:
            op = rng.choice(list(SIGNATURES))
            sig = rng.choice(SIGNATURES[op])
            ops = []
            ok = True
            for kinds in sig:
                choices = [k for k in kinds if k != "c" or consts]
                if not choices:
                    ok = False
                    break
                k = rng.choice(choices)
                if k == "r":
                    ops.append(Operand("r", rng.randint(0, 300)))
                elif k == "i":
                    ops.append(Operand("i", rng.randint(0, 20)))
                elif k == "c":
                    ops.append(Operand("c", rng.randrange(len(consts))))
                elif k == "#":
                    ops.append(Operand("#", rng.randint(-3, 40)))
                else:
                    ops.append(Operand("@", rng.randrange(n)))
            if ok:
                break
        ins.append(Instruction(op, tuple(ops)))
    return Program(tuple(ins), consts)


@pytest.fixture
def rng():
    return random.Random(20240601)


SEARCHER = encode_machine(counterexample_searcher())


class FormulaAnswers(Mapping):
    """Table answers for the counterexample searcher given by a hand formula.

    Keys are (searcher code, (code of p, K, k, x...)); queries about other
    machines or outside ``K <= k_max`` levels are undeclared.
    """

    def __init__(self, program: Program, formula, k_max: int = 60):
        self.code = encode_machine(program)
        self.formula = formula
        self.k_max = k_max

    def __getitem__(self, key):
        code, inputs = key
        if code != SEARCHER or not inputs or inputs[0] != self.code:
            raise KeyError(key)
        K, k = int(inputs[1]), int(inputs[2])
        if not 1 <= k <= self.k_max:
            raise KeyError(key)
        return bool(self.formula(K, k))

    def __iter__(self):
        return iter(())

    def __len__(self):
        return 0


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
