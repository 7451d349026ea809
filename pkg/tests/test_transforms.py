from decimal import Decimal, localcontext
from fractions import Fraction
from math import factorial

import gmpy2
import pytest

from bssvm import curated, stdlib, transforms
from bssvm.execute import Terminated, Valid, run_bss, run_strong, run_weak, validate_strong
from bssvm.machine import encode_machine, format_program, parse_program, validate
from bssvm.oracle import Budgeted, Oracle, OracleQuery, Table
from bssvm.transforms import (
    ApproximationScheme, DeciderSpec, SchemeViolation, compose_strong_continuous, continuous_eval,
    cauchy_transform, epihypo_to_strong, sigma2_to_boundedness, sigma2_to_weak_semidecision,
    sigma3_to_nonconvergence, spot_check, strong_charfn_to_decider, strong_oracle_to_weak, weak_to_strong,
)

from conftest import FormulaAnswers

Q = gmpy2.mpq


def values(stream):
    return [v[0] for v in stream.vectors]


def test_emitted_programs_are_valid_and_print_back():
    built = [
        weak_to_strong(curated.sequence("harmonic")),
        strong_oracle_to_weak(stdlib.load("thomae")),
        epihypo_to_strong(*curated.epihypo("identity")),
        strong_charfn_to_decider(curated.charfn("exact")),
        cauchy_transform(curated.sequence("harmonic")),
        sigma2_to_boundedness(curated.sigma2("empty")),
        sigma3_to_nonconvergence(curated.sigma3("empty")),
        sigma2_to_weak_semidecision(curated.rectangles("origin")),
        continuous_eval(ApproximationScheme(lambda n, m: [0, 1], n_max=3, m_max=2)),
    ]
    for p in built:
        validate(p)
        assert parse_program(format_program(p)) == p


def test_decider_spec_arity():
    with pytest.raises(ValueError):
        DeciderSpec(curated.sigma2("empty"), "sigma4")


# -- limit lemma, backward --------------------------------------------------------

def test_weak_to_strong_geometric():
    p = curated.sequence("geometric")
    # y_K = 2^-K strays by more than 2^-k + 2^-m from some later y_m iff K < k
    oracle = Oracle(Table(FormulaAnswers(p, lambda K, k: K < k)))
    s = run_strong(weak_to_strong(p), count=20, oracle=oracle, budget=10**6)
    assert len(s.vectors) == 20 and validate_strong(s.vectors) == Valid()
    assert values(s) == [Q(1, 2 ** n) for n in range(1, 21)]


def test_weak_to_strong_constant():
    p = curated.sequence("constant")
    oracle = Oracle(Table(FormulaAnswers(p, lambda K, k: False)))
    assert values(run_strong(weak_to_strong(p), count=6, oracle=oracle)) == [Q(3, 2)] * 6


def test_weak_to_strong_alternating_gadget():
    # cohalting_flag on a halting machine: 1s, then 0, 1, 0, ...; every K has a far later output
    gadget = stdlib.load("cohalting_flag")
    oracle = Oracle(Table(FormulaAnswers(gadget, lambda K, k: True)))
    code = Q(stdlib.sample_code("countdown"))
    s = run_strong(weak_to_strong(gadget), [code], count=3, oracle=oracle, budget=20000)
    assert s.vectors == [] and s.exhausted_budget


def test_weak_to_strong_finite_input_stream():
    p = curated.sequence("finite")  # 1, 1/2, 1/4, then halt
    s = run_strong(weak_to_strong(p), count=5, oracle=Oracle(Budgeted(10**4)), budget=10**6)
    assert s.vectors == [] and s.halted


def test_weak_to_strong_budget_false_positive():
    # 0 for fifty outputs, then 1: with a small budget the searcher never reaches
    # the jump, so the oracle wrongly certifies y_1 = 0 (a budget artefact)
    p = parse_program(""".const c0 = 1
  MOVI i1 50
  SETC r1 c0
zeros:
  OUT 1
  DECI i1
  JLT 0 i1 zeros
  MOVR r0 r1
ones:
  OUT 1
  JMP ones""")
    s = run_strong(weak_to_strong(p), count=1, oracle=Oracle(Budgeted(200)), budget=10**6)
    assert values(s) == [0]
    truth = Oracle(Table(FormulaAnswers(p, lambda K, k: K <= 50)))
    assert values(run_strong(weak_to_strong(p), count=2, oracle=truth, budget=10**6)) == [1, 1]


# -- limit lemma, forward ------------------------------------------------------------

def test_strong_oracle_to_weak_halt_query():
    p = curated.oracle_machine(stdlib.sample_code("halt"), "asks_halt")
    ideal = run_strong(p, count=10, oracle=Oracle(Budgeted(10))).vectors
    w = run_weak(strong_oracle_to_weak(p), count=10, budget=10**6)
    assert w.vectors == ideal == [(1,)] * 10


def test_strong_oracle_to_weak_countdown_query():
    p = curated.oracle_machine(stdlib.sample_code("countdown"), "asks_countdown")
    w = values(run_weak(strong_oracle_to_weak(p), count=16, budget=10**6))
    # countdown halts at step 12, so levels below 12 simulate it too briefly
    assert w == [0] * 11 + [1] * 5


def test_strong_oracle_to_weak_loop_query():
    p = curated.oracle_machine(stdlib.sample_code("loop"), "asks_loop")
    w = values(run_weak(strong_oracle_to_weak(p), count=10, budget=10**6))
    assert w == [0] * 10
    truth = Oracle(Table.of({OracleQuery.of(stdlib.sample_machine("loop")): False}))
    assert values(run_strong(p, count=10, oracle=truth)) == w


def test_strong_oracle_to_weak_without_queries():
    for name, xs in [("thomae", ["5/7"]), ("cantor_dist", ["1/2"]), ("pair", ["1/2", "1/4"])]:
        s = stdlib.load(name)
        inputs = [Q(x) for x in xs]
        own = run_strong(s, inputs, count=12).vectors
        assert run_weak(strong_oracle_to_weak(s), inputs, count=12, budget=10**6).vectors == own


def test_strong_oracle_to_weak_vectors():
    s = stdlib.load("unpair")
    own = run_strong(s, [Q(3, 8)], count=8).vectors
    assert run_weak(strong_oracle_to_weak(s, dim=2), [Q(3, 8)], count=8, budget=10**6).vectors == own


# -- limit lemma roundtrip -------------------------------------------------------------

def _roundtrip_cases():
    yield "thomae", ["5/7"], [Q(1, 7)]
    yield "thomae", ["0"], [Q(1)]
    yield "pair", ["1/2", "1/4"], [Q(3, 8)]
    yield "cantor_dist", ["1/2"], [Q(1, 6)]
    yield "cantor_dist", ["1/4"], [Q(0)]
    yield "unpair", ["3/8"], [Q(1, 2), Q(1, 4)]
    yield "cohalting_flag", ["code:loop"], [Q(1)]


@pytest.mark.parametrize("name, tokens, limit", list(_roundtrip_cases()))
def test_limit_lemma_roundtrip(name, tokens, limit):
    s = stdlib.load(name)
    dim = len(limit)
    inputs = [stdlib.resolve_token(t) for t in tokens]
    own = run_strong(s, inputs, count=40).vectors
    w = strong_oracle_to_weak(s, dim=dim)

    def stray(K, k):
        # for a strong stream, some later y_m is farther than 2^-k + 2^-m from y_K
        # exactly when ||y_K - limit|| > 2^-k
        return sum(abs(a - b) for a, b in zip(own[K - 1], limit)) > Q(1, 2 ** k)

    oracle = Oracle(Table(FormulaAnswers(w, stray, k_max=30)))
    out = run_strong(weak_to_strong(w), inputs, count=8, oracle=oracle, budget=10**7).vectors
    assert len(out) == 8 and validate_strong(out) == Valid()
    for n, (y, mine) in enumerate(zip(out, own), start=1):
        assert sum(abs(a - b) for a, b in zip(y, mine)) <= Q(2, 2 ** n)


# -- epigraph / hypograph ----------------------------------------------------------------

def test_epihypo_identity():
    s = run_strong(epihypo_to_strong(*curated.epihypo("identity")), [Q(2, 3)], count=12, budget=10**7)
    assert len(s.vectors) == 12 and validate_strong(s.vectors) == Valid()
    for n, y in enumerate(values(s), start=1):
        assert abs(y - Q(2, 3)) <= Q(2, 2 ** n)


def test_epihypo_zero():
    s = run_strong(epihypo_to_strong(*curated.epihypo("zero")), [Q(5)], count=10, budget=10**7)
    for n, y in enumerate(values(s), start=1):
        assert abs(y) <= Q(2, 2 ** n)


def test_epihypo_outside_domain():
    p = epihypo_to_strong(*curated.epihypo("identity_nonneg"))
    for budget in (10**3, 10**4, 10**5):
        assert run_strong(p, [Q(-1)], count=1, budget=budget).vectors == []
    assert validate_strong(run_strong(p, [Q(7, 5)], count=10, budget=10**7).vectors) == Valid()


@pytest.mark.parametrize("x", ["0", "1/3", "-5/7", "9/4", "-3"])
def test_epihypo_streams_valid(x):
    s = run_strong(epihypo_to_strong(*curated.epihypo("identity")), [Q(x)], count=10, budget=10**7)
    assert len(s.vectors) == 10 and validate_strong(s.vectors) == Valid()


# -- characteristic functions ------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(curated.CHARFN))
@pytest.mark.parametrize("x", ["1/2", "3/2", "0", "1", "-1/4", "99/100"])
def test_charfn_decider_agrees_with_membership(name, x):
    decider = strong_charfn_to_decider(curated.charfn(name))
    r = run_bss(decider, [Q(x)], budget=10**5)
    assert isinstance(r, Terminated)
    assert r.output == (int(0 <= Q(x) < 1),)


def test_charfn_approaching_second_output():
    assert values(run_strong(curated.charfn("approaching"), [Q(1, 2)], count=2))[1] == Q(7, 8)


# -- Cauchy transform --------------------------------------------------------------------

def test_cauchy_examples():
    harm = values(run_strong(cauchy_transform(curated.sequence("harmonic")), count=4000))
    assert max(harm[2000:]) <= Q(1, 8)
    flip = values(run_strong(cauchy_transform(curated.sequence("sign_flip")), count=4000))
    hits = [i for i, v in enumerate(flip) if v == Q(1, 2)]
    assert hits and hits[-1] > 3000
    const = values(run_strong(cauchy_transform(curated.sequence("constant")), count=500))
    assert set(const) == {0}


@pytest.mark.parametrize("name", ["geometric", "harmonic", "one_minus_harmonic", "constant",
                                  "alternating", "sign_flip", "counting"])
def test_cauchy_values_are_powers_of_two(name):
    vals = values(run_strong(cauchy_transform(curated.sequence(name)), count=3000))
    allowed = {Q(0)} | {Q(1, 2 ** u) for u in range(1, 3001)}
    assert set(vals) <= allowed
    tails = [max(vals[N:]) for N in range(0, 3000, 250)]
    assert tails == sorted(tails, reverse=True)
    if curated.LIMITS[name] is None:
        assert tails[-1] >= Q(1, 4)


def test_cauchy_finite_input():
    s = run_strong(cauchy_transform(curated.sequence("finite")), count=50, budget=10**6)
    assert s.halted and len(s.vectors) < 50


# -- Sigma2 / Sigma3 generators ---------------------------------------------------------------

def brute_sigma2(name, Y=20, Z=20):
    return any(all(curated.sigma2_member(name, y, z) for z in range(1, Z + 1)) for y in range(1, Y + 1))


def brute_sigma3(name, U=6, V=20, W=20):
    return any(all(any(curated.sigma3_member(name, u, v, w) for w in range(1, W + 1))
                   for v in range(1, V + 1)) for u in range(1, U + 1))


@pytest.mark.parametrize("name, expect", [("y_at_least_2", [1]), ("everything", []), ("product_not_6", [1, 2, 3])])
def test_sigma2_examples(name, expect):
    out = values(run_weak(sigma2_to_boundedness(curated.sigma2(name)), [Q(0)], count=20, budget=10**5))
    assert out == expect


def test_sigma2_empty_unbounded():
    out = values(run_weak(sigma2_to_boundedness(curated.sigma2("empty")), [Q(0)], count=30, budget=10**6))
    assert out == list(range(1, 31))


@pytest.mark.parametrize("name", sorted(curated.SIGMA2))
def test_sigma2_boundedness_matches_brute_force(name):
    p = sigma2_to_boundedness(DeciderSpec(curated.sigma2(name), "sigma2"))
    small = values(run_weak(p, [Q(0)], count=10**6, budget=10**4))
    big = values(run_weak(p, [Q(0)], count=10**6, budget=10**5))
    bounded = max(big, default=0) == max(small, default=0)
    assert bounded == brute_sigma2(name) == curated.SIGMA2[name][1]


def test_sigma3_examples():
    def run(name, count=3000):
        return values(run_weak(sigma3_to_nonconvergence(curated.sigma3(name)), [Q(0)], count=count, budget=10**7))

    recur = run("u1_w_ge_v")
    assert set(recur) == {0, Q(1, 2)}
    # the v-th witness appears later and later, but it keeps appearing
    hits = [i for i, v in enumerate(recur) if v]
    assert len(hits) >= 10 and all(b - a < 1000 for a, b in zip(hits, hits[1:]))
    assert set(run("empty")) == {0}
    once = run("u1_v1")
    assert [v for v in once if v] == [Q(1, 2)]


@pytest.mark.parametrize("name", sorted(curated.SIGMA3))
def test_sigma3_values_and_truth(name):
    vals = values(run_weak(sigma3_to_nonconvergence(curated.sigma3(name)), [Q(0)], count=10**4, budget=10**8))
    assert set(vals) <= {Q(0)} | {Q(1, 2 ** u) for u in range(1, 30)}
    late = any(vals[7000:])
    assert late == brute_sigma3(name) == curated.SIGMA3[name][1]


def test_weak_semidecision_examples():
    gen = sigma2_to_weak_semidecision(curated.rectangles("origin"))
    at0 = values(run_weak(gen, [Q(0)], count=200, budget=10**5))
    assert set(at0) == {1}
    third = values(run_weak(gen, [Q(1, 3)], count=200, budget=10**5))
    assert third == sorted(third) and third[-1] > 3
    every = sigma2_to_weak_semidecision(curated.rectangles("everywhere"))
    for x in ("0", "1/3", "-7"):
        assert set(values(run_weak(every, [Q(x)], count=50, budget=10**5))) == {1}


# -- continuous evaluation and composition ---------------------------------------------------

def exp_reference(x, n):
    """e^x from the decimal module, good to far more than 2^-n."""
    x = Q(x[0] if isinstance(x, tuple) else x)
    x = Fraction(int(x.numerator), int(x.denominator))
    with localcontext() as ctx:
        ctx.prec = 60 + n
        v = (Decimal(x.numerator) / Decimal(x.denominator)).exp()
    return Q(Fraction(v).numerator, Fraction(v).denominator)


def _taylor_degree(n, m):
    k = 0
    while Fraction(3 ** m * m ** (k + 1), factorial(k + 1)) > Fraction(1, 2 ** (n + 1)):
        k += 1
    return k


def exp_scheme(n_max=12, m_max=2):
    def poly(n, m):
        return [Fraction(1, factorial(j)) for j in range(_taylor_degree(n, m) + 1)]
    return ApproximationScheme(poly, n_max=n_max, m_max=m_max)


def test_exp_scheme_spot_check():
    spot_check(exp_scheme(), exp_reference, [Q(k, 8) for k in range(-16, 17)])


def test_spot_check_catches_bad_scheme():
    bad = ApproximationScheme(lambda n, m: [1, 1], n_max=6, m_max=1)
    with pytest.raises(SchemeViolation):
        spot_check(bad, exp_reference, [Q(1)])


def test_continuous_eval_examples():
    ident = ApproximationScheme(lambda n, m: [0, 1], n_max=5, m_max=3)
    assert values(run_strong(continuous_eval(ident), [Q(-5, 2)], count=5)) == [Q(-5, 2)] * 5
    square = ApproximationScheme(lambda n, m: [0, 0, 1], n_max=5, m_max=1)
    assert values(run_strong(continuous_eval(square), [Q(-2, 3)], count=5)) == [Q(4, 9)] * 5
    s = run_strong(continuous_eval(exp_scheme()), [Q(1)], count=13)
    assert s.halted and len(s.vectors) == 12 and validate_strong(s.vectors) == Valid()
    e = exp_reference(1, 60)
    for n, y in enumerate(values(s), start=1):
        assert abs(y - e) <= Q(1, 2 ** n)


def test_continuous_eval_outside_boxes():
    s = run_strong(continuous_eval(exp_scheme(m_max=2)), [Q(3)], count=3, budget=10**4)
    assert s.vectors == []


def test_continuous_eval_two_dims():
    prod = ApproximationScheme(lambda n, m: {(1, 1): 1, (0, 0): Fraction(1, 2)}, dim=2, n_max=4, m_max=2)
    assert values(run_strong(continuous_eval(prod), [Q(3, 2), Q(-1, 3)], count=4)) == [Q(0)] * 4


def test_compose_with_identity():
    ident = ApproximationScheme(lambda n, m: [0, 1], n_max=12, m_max=3, moduli=lambda n, m: n)
    g = stdlib.load("cantor_dist")
    for x in ("1/2", "1/10", "5/4"):
        comp = values(run_strong(compose_strong_continuous(g, ident), [Q(x)], count=11))
        own = values(run_strong(g, [Q(x)], count=12))
        assert len(comp) == 11
        for n, y in enumerate(comp, start=1):
            assert abs(y - own[n]) <= Q(1, 2 ** n)


def test_compose_constant_zero():
    zero = parse_program(".const c0 = 0\nSETC r0 c0\nL:\n  OUT 1\n  JMP L")
    scheme = ApproximationScheme(exp_scheme().poly, n_max=10, m_max=2, moduli=lambda n, m: n + 3)
    s = run_strong(compose_strong_continuous(zero, scheme), count=9)
    for n, y in enumerate(values(s), start=1):
        assert abs(y - 1) <= Q(1, 2 ** n)


def test_compose_double_pair():
    double = ApproximationScheme(lambda n, m: [0, 2], n_max=12, m_max=4, moduli=lambda n, m: n + 1)
    for x, y in [("1/2", "1/4"), ("1/3", "2/3"), ("-1", "5/2")]:
        s = run_strong(compose_strong_continuous(stdlib.load("pair"), double), [Q(x), Q(y)], count=11)
        ref = values(run_strong(stdlib.load("pair"), [Q(x), Q(y)], count=40))[-1]
        assert validate_strong(s.vectors) == Valid()
        for n, v in enumerate(values(s), start=1):
            assert abs(v - 2 * ref) <= Q(1, 2 ** n) + Q(2, 2 ** 40)


def test_compose_requires_moduli():
    with pytest.raises(ValueError):
        compose_strong_continuous(stdlib.load("pair"), ApproximationScheme(lambda n, m: [0, 1]))


def test_transformer_registry():
    assert set(transforms.TRANSFORMERS) == {
        "weak-to-strong", "strong-oracle-to-weak", "epihypo", "charfn-decider", "cauchy",
        "sigma2-boundedness", "sigma3-nonconvergence", "sigma2-weak-semidecision", "continuous-eval", "compose"}
    assert encode_machine(transforms.TRANSFORMERS["cauchy"](curated.sequence("harmonic"))) > 0
