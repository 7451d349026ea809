import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bssvm import curated, stdlib
from bssvm.machine import DecodeError, encode_machine, parse_program
from bssvm.oracle import (
    Accept, Budgeted, Layered, NoAnswer, Oracle, OracleAnswerLog, OracleQuery, Table, TableFormatError,
    UnknownQuery, dump_table, halting_query, parse_table, semidecide_bounded,
)

Q = gmpy2.mpq
HALT = stdlib.sample_machine("halt")
LOOP = stdlib.sample_machine("loop")
COUNTDOWN = stdlib.sample_machine("countdown")  # halts after exactly 12 steps


def test_halting_query_examples():
    assert halting_query(OracleQuery.of(HALT, [Q(5)]), Budgeted(1))
    assert not halting_query(OracleQuery.of(LOOP), Budgeted(10**6))
    assert halting_query(OracleQuery.of(stdlib.load("rational_semidecide"), [Q(3, 7)]), Budgeted(10**5))


def test_zero_budget_never_halts():
    assert not halting_query(OracleQuery.of(HALT), Budgeted(0))


def test_layered_is_budgeted():
    q = OracleQuery.of(COUNTDOWN)
    assert [halting_query(q, Layered(n)) for n in (11, 12)] == [False, True]


def test_table_policy_and_unknown_query():
    t = Table.of({OracleQuery.of(LOOP): True})
    assert halting_query(OracleQuery.of(LOOP), t)  # a table is ground truth, even a wrong one
    with pytest.raises(UnknownQuery):
        halting_query(OracleQuery.of(HALT), t)


def test_query_rejects_non_codes():
    with pytest.raises(DecodeError):
        OracleQuery(3)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=30), st.integers(min_value=0, max_value=30))
def test_budget_monotone(b, extra):
    for prog in (HALT, LOOP, COUNTDOWN):
        q = OracleQuery.of(prog)
        if halting_query(q, Budgeted(b)):
            assert halting_query(q, Budgeted(b + extra))


# machines that halt early or loop syntactically, with their true answers
GROUND_TRUTH = [
    (HALT, (), True), (LOOP, (), False), (COUNTDOWN, (), True),
    (stdlib.sample_machine("zero_test"), (Q(0),), True), (stdlib.sample_machine("zero_test"), (Q(1),), False),
    (stdlib.load("rational_semidecide"), (Q(-2, 5),), True),
]


def test_budgeted_converges_to_table():
    table = Table.of([(OracleQuery.of(p, xs), truth) for p, xs, truth in GROUND_TRUTH])
    for p, xs, truth in GROUND_TRUTH:
        q = OracleQuery.of(p, xs)
        answers = [halting_query(q, Budgeted(b)) for b in (1, 10, 100, 10**4, 10**5)]
        assert answers[-1] == halting_query(q, table) == truth


def test_log_and_replay():
    log = OracleAnswerLog()
    oracle = Oracle(Budgeted(50), log)
    qs = [OracleQuery.of(HALT, [Q(1, 3)]), OracleQuery.of(LOOP), OracleQuery.of(COUNTDOWN)]
    answers = [oracle(q) for q in qs]
    oracle(qs[0])  # cached, not logged twice
    assert len(log) == 3 and [e.budget for e in log.entries] == [50] * 3
    replay = Oracle(log.replay())
    assert [replay(q) for q in qs] == answers
    assert parse_table(log.dump()) == log.replay()


def test_table_file_roundtrip():
    code = encode_machine(HALT)
    text = f"# ground truth\n{code:x} 1/2,-3 1\n{encode_machine(LOOP):x} - 0\n\n"
    t = parse_table(text)
    assert halting_query(OracleQuery(code, (Q(1, 2), Q(-3))), t)
    assert not halting_query(OracleQuery.of(LOOP), t)
    assert parse_table(dump_table(t)) == t
    assert dump_table(t).splitlines()[0].split()[0] in (f"{code:x}", f"{encode_machine(LOOP):x}")


@pytest.mark.parametrize("text", ["zz - 1", "1 - 1", f"{encode_machine(HALT):x} - 2",
                                  f"{encode_machine(HALT):x} 1/0 1", "only two"])
def test_table_format_errors(text):
    with pytest.raises(TableFormatError):
        parse_table(text)


def test_zero_test_escalation_policy():
    from bssvm.exactnum import RationalFunction, RealApprox
    c0, c1 = RationalFunction.variable("c0"), RationalFunction.variable("c1")
    env = {"c0": RealApprox.sqrt(2), "c1": RealApprox.sqrt(2)}
    assert Oracle(Budgeted(20)).zero_test(c0 - c1, env) == 0
    assert Oracle(Budgeted(20)).zero_test(c0 - RationalFunction.constant(1), env) == 1
    with pytest.raises(UnknownQuery):
        Oracle(Table()).zero_test(c0 - c1, env)


# -- boundedness --------------------------------------------------------------------

def _code(src):
    return encode_machine(parse_program(src))


ONES = ".const c0 = 1\nSETC r0 c0\nL:\n  OUT 1\n  JMP L"


def test_semidecide_bounded_examples():
    assert semidecide_bounded(_code(ONES), [], Budgeted(2000), 5) == Accept(1)
    counting = encode_machine(curated.sequence("counting"))
    assert semidecide_bounded(counting, [], Budgeted(2000), 6) == NoAnswer(6)
    assert semidecide_bounded(_code("HALT"), [], Budgeted(2000), 3) == Accept(1)


BOUNDED = {"geometric": True, "harmonic": True, "constant": True, "alternating": True,
           "sign_flip": True, "finite": True, "counting": False}


@pytest.mark.parametrize("name", sorted(BOUNDED))
def test_semidecide_bounded_curated(name):
    code = encode_machine(curated.sequence(name))
    first = semidecide_bounded(code, [], Budgeted(3000), 4)
    assert isinstance(first, Accept) == BOUNDED[name]
    if BOUNDED[name]:
        # the true sup norm is at most 3/2 on these
        assert first.bound <= 2
        assert semidecide_bounded(code, [], Budgeted(3000), 8) == first


def test_semidecide_logs_queries():
    log = OracleAnswerLog()
    semidecide_bounded(encode_machine(curated.sequence("counting")), [], Budgeted(500), 3, log)
    assert len(log) == 3 and all(e.answer for e in log.entries)
    with pytest.raises(ValueError):
        semidecide_bounded(_code("HALT"), [], Budgeted(1), 0)
