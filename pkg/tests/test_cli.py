import json

import pytest

from bssvm import curated, stdlib
from bssvm.cli import main
from bssvm.execute import load_stream
from bssvm.machine import format_program, parse_program

LOOP = "loop:\n  JMP loop\n"


@pytest.fixture
def loop_file(tmp_path):
    p = tmp_path / "loop.bss"
    p.write_text(LOOP)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_run_thomae(capsys):
    code, out, _ = run(capsys, "run", "stdlib:thomae", "--input", "1/3", "--mode", "strong", "--count", "6")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 6 and lines[-1] == "1/3" and lines[-2] == "1/3"


def test_run_loop_diverges(capsys, loop_file):
    code, out, _ = run(capsys, "run", loop_file, "--mode", "bss", "--budget", "100")
    assert code == 2 and out == "Diverged(100)\n"


def test_run_pair_json(capsys):
    code, out, _ = run(capsys, "run", "stdlib:pair", "--input", "1/2,1/4", "--mode", "strong", "--count", "8",
                       "--format", "json")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and [r["n"] for r in recs] == list(range(1, 9))
    assert recs[-1]["values"] == ["3/8"] and all(r["dim"] == 1 for r in recs)


def test_run_terminated(capsys):
    code, out, _ = run(capsys, "run", "stdlib:char_unit_interval", "--input", "1/2")
    assert code == 0 and out == "Terminated(1/1)\n"
    code, out, _ = run(capsys, "run", "stdlib:char_unit_interval", "--input", "1/2", "--format", "json")
    assert json.loads(out) == {"outcome": "terminated", "output": ["1/1"], "steps": json.loads(out)["steps"]}


def test_json_byte_identical(capsys):
    argv = ["run", "stdlib:cantor_dist", "--input", "1/10", "--mode", "strong", "--count", "20", "--format", "json"]
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first and first


def test_env_budget(capsys, loop_file, monkeypatch):
    monkeypatch.setenv("BSSVM_BUDGET", "77")
    assert run(capsys, "run", loop_file)[1] == "Diverged(77)\n"
    monkeypatch.setenv("BSSVM_BUDGET", "many")
    assert run(capsys, "run", loop_file)[0] == 64


def test_stream_budget_exhaustion(capsys, loop_file):
    code, out, err = run(capsys, "run", loop_file, "--mode", "weak", "--budget", "50")
    assert code == 2 and out == "" and "Diverged(50)" in err


def test_stream_fault(capsys, tmp_path):
    f = tmp_path / "div.bss"
    f.write_text("OUT 1\nDIV r0 r1\nOUT 1\nHALT\n")
    code, out, err = run(capsys, "run", str(f), "--mode", "strong", "--input", "1")
    assert code == 2 and out == "1/1\n" and "division by zero" in err


def test_trace_file(capsys, tmp_path):
    t = tmp_path / "trace.json"
    code, _, _ = run(capsys, "run", "stdlib:char_unit_interval", "--input", "1/2", "--trace", str(t))
    assert code == 0 and t.read_text()


@pytest.mark.parametrize("argv, status", [
    (["run", "stdlib:thomae", "--mode", "sideways"], 64),
    (["run", "stdlib:thomae", "--budget", "0"], 64),
    (["run", "stdlib:thomae", "--mode", "strong", "--count", "0"], 64),
    (["run", "stdlib:thomae", "--input", "1/0"], 65),
    (["run", "stdlib:nosuch"], 1),
    (["run", "/nonexistent/file.bss"], 1),
    (["run", "stdlib:thomae", "--oracle", "magic:3"], 64),
    (["transform", "nosuch"], 64),
    (["transform", "cauchy"], 64),
    (["transform", "continuous-eval"], 64),
    (["decode", "zz"], 65),
    (["decode", "3"], 65),
    ([], 64),
])
def test_error_statuses(capsys, argv, status):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse rejects before dispatch
        code = exc.code
    assert code == status


def test_bad_program_file(capsys, tmp_path):
    f = tmp_path / "bad.bss"
    f.write_text("FOO r1\n")
    code, _, err = run(capsys, "run", str(f))
    assert code == 65 and "line 1" in err


def test_transform_cauchy_roundtrip(capsys, tmp_path):
    src = tmp_path / "in.bss"
    src.write_text(format_program(curated.sequence("harmonic")))
    out = tmp_path / "out.bss"
    assert run(capsys, "transform", "cauchy", str(src), "-o", str(out))[0] == 0
    text = out.read_text()
    run(capsys, "transform", "cauchy", str(src), "-o", str(out))
    assert out.read_text() == text
    code, stream, _ = run(capsys, "run", str(out), "--mode", "strong", "--count", "4000", "--format", "json")
    vals = [v[0] for v in load_stream(stream)]
    assert code == 0 and max(vals[2000:]) <= 1 / 8


def test_transform_charfn_decider(capsys, tmp_path):
    src = tmp_path / "chi.bss"
    src.write_text(format_program(curated.charfn("exact")))
    d = tmp_path / "d.bss"
    assert run(capsys, "transform", "charfn-decider", str(src), "-o", str(d))[0] == 0
    for x, want in [("1/2", "1/1"), ("3/2", "0/1"), ("0", "1/1"), ("1", "0/1")]:
        assert run(capsys, "run", str(d), "--input", x)[1] == f"Terminated({want})\n"


def test_transform_scheme(capsys, tmp_path):
    scheme = tmp_path / "s.json"
    scheme.write_text(json.dumps({"poly": [0, 0, 1], "n_max": 4, "m_max": 2}))
    out = tmp_path / "sq.bss"
    assert run(capsys, "transform", "continuous-eval", "--scheme", str(scheme), "-o", str(out))[0] == 0
    code, text, _ = run(capsys, "run", str(out), "--mode", "strong", "--input=-3/2", "--count", "4")
    assert text.splitlines() == ["9/4"] * 4
    scheme.write_text("{}")
    assert run(capsys, "transform", "continuous-eval", "--scheme", str(scheme))[0] == 65


def test_validate(capsys, tmp_path):
    good = tmp_path / "c.jsonl"
    run(capsys, "run", "stdlib:cantor_dist", "--input", "1/4", "--mode", "strong", "--count", "20", "--format", "json")
    code, out, _ = run(capsys, "run", "stdlib:cantor_dist", "--input", "1/4", "--mode", "strong", "--count", "20",
                       "--format", "json")
    good.write_text(out)
    assert run(capsys, "validate", str(good)) == (0, "Valid\n", "")
    bad = tmp_path / "b.jsonl"
    bad.write_text('{"n": 1, "dim": 1, "values": ["0/1"]}\n{"n": 2, "dim": 1, "values": ["1/1"]}\n')
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 1 and out.startswith("Violation n=1 m=2")
    assert run(capsys, "validate", str(bad), "--upto", "1")[0] == 0
    empty = tmp_path / "e.jsonl"
    empty.write_text("")
    assert run(capsys, "validate", str(empty))[:2] == (0, "Valid\n")
    broken = tmp_path / "x.jsonl"
    broken.write_text("{oops\n")
    assert run(capsys, "validate", str(broken))[0] == 65


def test_list_encode_decode(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and {line.split()[0] for line in out.splitlines()} == set(stdlib.names())
    code, hexcode, _ = run(capsys, "encode", "stdlib:thomae")
    assert code == 0
    code, text, _ = run(capsys, "decode", hexcode.strip())
    # codes carry no labels or comments
    assert code == 0 and parse_program(text) == stdlib.load("thomae")


def test_oracle_option(capsys, tmp_path):
    f = tmp_path / "q.bss"
    f.write_text(format_program(curated.oracle_machine(stdlib.sample_code("halt"), "q")))
    code, out, _ = run(capsys, "run", str(f), "--mode", "strong", "--count", "3", "--oracle", "budget:5")
    assert code == 0 and out == "1/1\n1/1\n1/1\n"
    table = tmp_path / "t.txt"
    table.write_text(f"{stdlib.sample_code('halt'):x} - 0\n")
    code, out, _ = run(capsys, "run", str(f), "--mode", "strong", "--count", "2", "--oracle", f"table:{table}")
    assert out == "0/1\n0/1\n"
