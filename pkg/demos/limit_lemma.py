"""Both directions of the limit lemma on small machines.

weak_to_strong needs a halting oracle; here the oracle answers come from a
hand formula (a Table), and from a step budget to show what goes wrong
when the budget is too small.
"""

from collections.abc import Mapping

from bssvm import curated, stdlib
from bssvm.exactnum import format_rational
from bssvm.execute import run_strong, run_weak, validate_strong
from bssvm.machine import encode_machine
from bssvm.oracle import Budgeted, Oracle, Table
from bssvm.transforms import strong_oracle_to_weak, weak_to_strong

SEARCHER = encode_machine(stdlib.counterexample_searcher())


class Formula(Mapping):
    """Answers "does y_K stray from a later output by more than 2^-k + 2^-m?"."""

    def __init__(self, program, formula):
        self.code, self.formula = encode_machine(program), formula

    def __getitem__(self, key):
        code, inputs = key
        if code != SEARCHER or inputs[0] != self.code:
            raise KeyError(key)
        return self.formula(int(inputs[1]), int(inputs[2]))

    def __iter__(self):
        return iter(())

    def __len__(self):
        return 0


def fmt(stream):
    return " ".join(format_rational(v[0]) for v in stream.vectors)


if __name__ == "__main__":
    p = curated.sequence("one_minus_harmonic")
    print("weak stream 1 - 1/n:        ", fmt(run_weak(p, count=8)))
    oracle = Oracle(Table(Formula(p, lambda K, k: K < 2 ** k)))
    s = run_strong(weak_to_strong(p), count=6, oracle=oracle, budget=10**7)
    print("weak_to_strong, exact oracle:", fmt(s), validate_strong(s.vectors))
    s = run_strong(weak_to_strong(p), count=6, oracle=Oracle(Budgeted(300)), budget=10**7)
    print("weak_to_strong, budget 300:  ", fmt(s), validate_strong(s.vectors))

    asks = curated.oracle_machine(stdlib.sample_code("countdown"), "asks_countdown")
    print("strong_oracle_to_weak on a machine asking whether countdown halts:")
    print("  ", fmt(run_weak(strong_oracle_to_weak(asks), count=16)))
