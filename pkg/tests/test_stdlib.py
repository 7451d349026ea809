from fractions import Fraction
from math import gcd

import gmpy2
import pytest

from bssvm import stdlib
from bssvm.execute import Mode, Terminated, Valid, run_bss, run_strong, run_weak, validate_strong
from bssvm.machine import validate

from reference import F, cantor_distance, extended, h

Q = gmpy2.mpq


def test_reference_h_examples():
    assert h(Fraction(1, 2), Fraction(1, 4)) == Fraction(3, 8)
    assert h(Fraction(0), Fraction(0)) == 0
    # 1/3 = 0.0101..., 0 = 0.000...: interleaving y first gives 0.00100010... = 2/15
    assert h(Fraction(0), Fraction(1, 3)) == Fraction(2, 15)
    assert extended(Fraction(3)) == Fraction(1, 4) + Fraction(1, 8) + Fraction(3, 4) / 16


def test_reference_cantor():
    assert cantor_distance(Fraction(1, 2), 20) == Fraction(1, 6)
    assert cantor_distance(Fraction(1, 4), 20) <= Fraction(1, 3 ** 18)


# -- entries ----------------------------------------------------------------------------

def test_entries_parse_and_validate():
    for name in stdlib.names():
        e = stdlib.entry(name)
        validate(e.program)
        assert e.path.exists() and e.contract


def test_unknown_entry():
    with pytest.raises(stdlib.UnknownEntry):
        stdlib.load("nosuch")


GRID = [Fraction(i - 25, 7) for i in range(50)]
GRID_Y = [Fraction(j - 10, 16) + Fraction(1, 3 * (1 + j % 4)) for j in range(50)]


def _nth(name, inputs, n):
    s = run_strong(stdlib.load(name), [Q(v.numerator, v.denominator) for v in inputs], count=n)
    assert len(s.vectors) == n
    return s.vectors[-1]


def test_pair_examples():
    assert F(_nth("pair", [Fraction(1, 2), Fraction(1, 4)], 8)[0]) == Fraction(3, 8)
    assert _nth("pair", [Fraction(0), Fraction(0)], 5) == (0,)
    z = h(Fraction(3, 5), Fraction(1, 7))
    back = _nth("unpair", [z], 30)
    assert abs(F(back[0]) - Fraction(3, 5)) <= Fraction(1, 2 ** 30)
    assert abs(F(back[1]) - Fraction(1, 7)) <= Fraction(1, 2 ** 30)


def test_pair_matches_reference_and_is_injective():
    eps = Fraction(1, 2 ** 40)
    seen = []
    for x in GRID:
        for y in GRID_Y:
            v = F(_nth("pair", [x, y], 40)[0])
            assert abs(v - h(x, y)) <= eps, (x, y)
            seen.append(v)
    seen.sort()
    assert all(b - a > 2 * eps for a, b in zip(seen, seen[1:]))


def test_unpair_inverts_pair():
    eps = Fraction(1, 2 ** 30)
    for x in GRID[::3]:
        for y in GRID_Y[::3]:
            u, v = _nth("unpair", [h(x, y)], 30)
            assert abs(F(u) - x) <= eps and abs(F(v) - y) <= eps, (x, y)


def test_unpair_off_range_is_silent():
    for z in ("5/2", "-1"):
        s = run_strong(stdlib.load("unpair"), [Q(z)], count=3, budget=2000)
        assert s.vectors == []


CANTOR_XS = [Fraction(k, 99) for k in range(100)]


def test_cantor_examples():
    assert abs(F(_nth("cantor_dist", [Fraction(1, 2)], 30)[0]) - Fraction(1, 6)) <= Fraction(1, 2 ** 30)
    assert _nth("cantor_dist", [Fraction(0)], 10) == (0,)
    assert abs(F(_nth("cantor_dist", [Fraction(1, 4)], 30)[0])) <= Fraction(1, 3 ** 18)


def test_cantor_matches_cover():
    tol = Fraction(1, 3 ** 18)
    for x in CANTOR_XS:
        got = F(_nth("cantor_dist", [x], 30)[0])
        assert abs(got - cantor_distance(x, 20)) <= tol, x


def _fractions_200():
    out = []
    q = 1
    while len(out) < 200:
        for p in range(-q, 2 * q + 1):
            if gcd(p, q) == 1 and len(out) < 200:
                out.append(Fraction(p, q))
        q += 1 if q < 12 else 17
    return out


def test_thomae_examples():
    assert _nth("thomae", [Fraction(1, 3)], 6) == (Q(1, 3),)
    assert _nth("thomae", [Fraction(0)], 3) == (1,)
    assert _nth("thomae", [Fraction(4, 6)], 6) == (Q(1, 3),)


def test_thomae_stationary():
    for x in _fractions_200():
        q = x.denominator
        vals = run_strong(stdlib.load("thomae"), [Q(x.numerator, q)], count=14).vectors
        n0 = q.bit_length() + 1
        assert all(v == (Q(1, q),) for v in vals[n0 - 1:]), x


def test_rational_semidecide():
    p = stdlib.load("rational_semidecide")
    assert isinstance(run_bss(p, [Q(22, 7)], budget=10**6), Terminated)


def test_char_unit_interval():
    p = stdlib.load("char_unit_interval")
    assert run_bss(p, [Q(1)]).output == (0,)
    assert run_bss(p, [Q(0)]).output == (1,)


def test_cohalting_on_loop():
    code = Q(stdlib.sample_code("loop"))
    s = run_strong(stdlib.load("cohalting_flag"), [code], count=40, budget=10**4)
    assert s.vectors and set(s.vectors) == {(1,)}
    assert validate_strong(s.vectors) == Valid()


def test_halting_flag():
    p = stdlib.load("halting_flag")
    assert run_bss(p, [Q(stdlib.sample_code("countdown"))]).output == (1,)
    assert not isinstance(run_bss(p, [Q(stdlib.sample_code("loop"))], budget=5000), Terminated)


def test_q_cross_rational_side_halts():
    s = run_strong(stdlib.load("q_cross_irrational"), [Q(1, 2), Q(1, 3)], count=20, budget=10**5)
    assert s.halted


def _strong_cases():
    for name in stdlib.names():
        e = stdlib.entry(name)
        if e.mode is Mode.STRONG and not e.helper:
            for vec in e.vectors:
                if vec.in_domain:
                    yield pytest.param(name, vec, id=f"{name}-{'-'.join(vec.tokens)}")


@pytest.mark.parametrize("name, vec", list(_strong_cases()))
def test_strong_entries_valid(name, vec):
    s = run_strong(stdlib.load(name), list(vec.inputs), count=50, budget=10**6)
    assert len(s.vectors) == 50
    assert validate_strong(s.vectors) == Valid()
    if vec.expect is not None:
        target = Q(vec.expect)
        assert abs(s.vectors[-1][0] - target) <= Q(1, 2 ** 50)


@pytest.mark.parametrize("name", ["rational_semidecide", "char_unit_interval", "halting_flag"])
def test_bss_vectors(name):
    e = stdlib.entry(name)
    for vec in e.vectors:
        r = run_bss(e.program, list(vec.inputs), budget=10**5)
        assert isinstance(r, Terminated) == vec.in_domain, vec.tokens
        if vec.expect is not None:
            assert r.output == (Q(vec.expect),)


def test_weak_vectors():
    e = stdlib.entry("rational_weak_char")
    for vec in e.vectors:
        s = run_weak(e.program, list(vec.inputs), count=120)
        assert s.vectors[-1] == (Q(vec.expect),), vec.tokens


def test_chi_bounded():
    # rational_weak_char on 3/7 prints 0s and then 1 forever, so y_n tends to 1
    code = Q(stdlib.entry("rational_weak_char").program.code)
    one = run_weak(stdlib.load("chi_bounded_one"), [code, Q(3, 7)], count=150, budget=10**6)
    zero = run_weak(stdlib.load("chi_bounded_zero"), [code, Q(3, 7)], count=150, budget=10**6)
    weak = [v[0] for v in run_weak(stdlib.load("rational_weak_char"), [Q(3, 7)], count=150).vectors]
    k = weak.index(1)
    u = [v[0] for v in one.vectors]
    w = [v[0] for v in zero.vectors]
    assert u[:k] == list(range(1, k + 1)) and set(u[k:]) == {1}
    assert set(w[:k]) == {1} and w[k:] == list(range(k + 1, 151))


def test_chi_bounded_finite_child():
    # echo prints one output and halts; the transformed stream stops with it
    code = Q(stdlib.sample_code("echo"))
    for name in ("chi_bounded_one", "chi_bounded_zero"):
        s = run_weak(stdlib.load(name), [code, Q(1)], count=5)
        assert s.vectors == [(1,)] and s.halted
