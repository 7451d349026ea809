"""Run a few shipped machines and show their streams converging."""

import gmpy2

from bssvm import stdlib
from bssvm.exactnum import format_rational
from bssvm.execute import run_bss, run_strong, validate_strong

Q = gmpy2.mpq


def show(name, inputs, count=8):
    s = run_strong(stdlib.load(name), [Q(x) for x in inputs], count=count)
    vals = ["(" + ", ".join(format_rational(v) for v in vec) + ")" for vec in s.vectors]
    print(f"{name}({', '.join(inputs)}): {' '.join(vals)}")
    print(f"  {validate_strong(s.vectors)}")


if __name__ == "__main__":
    show("thomae", ["4/6"])
    show("cantor_dist", ["1/2"])
    show("pair", ["1/2", "1/4"])
    show("unpair", ["3/8"], count=6)
    print("rational_semidecide(22/7):", run_bss(stdlib.load("rational_semidecide"), [Q(22, 7)]))
    print("char_unit_interval(1):", run_bss(stdlib.load("char_unit_interval"), [Q(1)]))
