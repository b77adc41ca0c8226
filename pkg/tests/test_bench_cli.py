import os

import pytest

from rrunfold import bench, cli
from rrunfold.bench import (CSV_HEADER, BenchConfig, checksum, format_csv, format_markdown,
                            parse_sizes, ratio_lines, run_bench, run_case)
from rrunfold.errors import VerificationMismatch
from rrunfold.programs import EXAMPLES
from rrunfold.terms import make_list


def test_parse_sizes():
    assert parse_sizes("2^3..2^5") == [("2^3", 8), ("2^4", 16), ("2^5", 32)]
    assert parse_sizes("2^3-1..2^4-1, 2^10+1, 12") == [("2^3-1", 7), ("2^4-1", 15),
                                                        ("2^10+1", 1025), ("12", 12)]
    assert parse_sizes("2^200")[0][1] == 2 ** 200


@pytest.mark.parametrize("bad", ["2^3..2^2", "2^3+1..2^4", "abc", "0", "2^0-1"])
def test_parse_sizes_rejects(bad):
    with pytest.raises(ValueError):
        parse_sizes(bad)


@pytest.mark.parametrize("kw", [dict(example="fib"), dict(example="sorting", mode="fast"),
                                dict(example="sorting", repetitions=0),
                                dict(example="sorting", fmt="json")])
def test_config_invariants(kw):
    with pytest.raises(ValueError):
        BenchConfig(**kw)


def test_run_case_rows_are_verified_and_consistent():
    a = run_case("sorting", "2^6", 64, "unfolded", repetitions=2, seed=3)
    b = run_case("sorting", "2^6", 64, "original", seed=3)
    assert a.checksum == b.checksum == checksum(make_list(range(1, 65)))
    assert a.total_s == pytest.approx(a.unfolder_s + a.interpreter_s)
    assert a.rules_generated == 6 and a.applied_indices == [6]
    assert b.unfolder_s == 0.0 and b.rules_generated == 0


def test_mismatch_aborts(monkeypatch):
    ex = EXAMPLES["reversal"]
    broken = type(ex)(ex.name, ex.file, ex.scheme, ex.make_input, lambda xs: xs, ex.depth)
    monkeypatch.setitem(bench.EXAMPLES, "reversal", broken)
    with pytest.raises(VerificationMismatch):
        run_case("reversal", "4", 4, "unfolded")


def test_csv_schema_and_ratios():
    cfg = BenchConfig("reversal", "both", "2^4..2^5", seed=9)
    rows = run_bench(cfg)
    text = format_csv(rows, cfg)
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER
    assert len([l for l in lines[1:] if not l.startswith("#")]) == 4
    assert "# seed=9 repetitions=1 cache=on" in lines
    assert any(l.startswith("# ratio reversal original T(2^5)/T(2^4)") for l in lines)
    assert any(l.startswith("# speedup reversal at 2^5") for l in lines)
    md = format_markdown(rows, cfg)
    assert md.startswith("| example | size | mode |")
    assert len(ratio_lines(rows)) == 4


def test_parallel_jobs_give_same_checksums():
    cfg = BenchConfig("summation", "unfolded", "2^10,2^20+1", jobs=2)
    seq = BenchConfig("summation", "unfolded", "2^10,2^20+1")
    assert [r.checksum for r in run_bench(cfg)] == [r.checksum for r in run_bench(seq)]


# -- command line -----------------------------------------------------------

def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_run_unfolded_summation(capsys):
    code, out, _ = run_cli(capsys, "run", "--program", "summation", "--goal", "sum(10,S)",
                           "--mode", "unfolded")
    assert code == 0
    assert out.splitlines()[0] == "S = 55"
    assert "applied rules: [3, 0]" in out


def test_cli_run_original(capsys):
    code, out, _ = run_cli(capsys, "run", "--program", "reversal", "--goal", "r([1,2,3],X)",
                           "--mode", "original")
    assert code == 0 and out.splitlines()[0] == "X = [3,2,1]"


def test_cli_run_program_file(capsys, tmp_path):
    f = tmp_path / "tri.chr"
    f.write_text("t(A,C) <=> A>1 | B is A-1, t(B,D), C is 1*A-0+D.\nt(A,C) <=> A=1 | C=1.\n")
    code, out, _ = run_cli(capsys, "run", "--program", str(f), "--goal", "t(2000,S)")
    assert code == 0 and out.splitlines()[0] == "S = 2001000"


def test_cli_user_program_outside_templates(capsys, tmp_path):
    f = tmp_path / "dbl.chr"
    f.write_text("d(A,C) <=> A>0 | B is A-1, d(B,D), C is D*2.\nd(A,C) <=> A=0 | C=1.\n")
    code, out, _ = run_cli(capsys, "run", "--program", str(f), "--goal", "d(10,X)", "--mode", "original")
    assert code == 0 and out.startswith("X = 1024")
    code, _, err = run_cli(capsys, "run", "--program", str(f), "--goal", "d(10,X)")
    assert code == 2 and "TemplateMismatch" in err


@pytest.mark.parametrize("argv,code,needle", [
    (["run", "--program", "summation", "--goal", "sum(0,S)"], 3, "NoRuleApplicable"),
    (["run", "--program", "countdown", "--goal", "p(0)", "--mode", "original", "--max-steps", "100"],
     3, "StepLimitExceeded"),
    (["run", "--program", "countdown", "--goal", "p(0)", "--unfold-cap", "64"], 3, "UnfoldCapExceeded"),
    (["run", "--program", "summation", "--goal", "sum(10,"], 2, "RuleSyntaxError"),
    (["run", "--program", "summation", "--goal", "q(10,S,T)"], 2, "NotRegistered"),
    (["run", "--program", "/nonexistent.chr", "--goal", "sum(1,S)"], 1, "cannot read"),
    (["frobnicate"], 1, "invalid choice"),
    (["bench", "--example", "summation", "--sizes", "2^3..2^1"], 1, "bad size range"),
])
def test_cli_errors(capsys, argv, code, needle):
    if argv[0] == "frobnicate":
        with pytest.raises(SystemExit) as e:
            cli.main(argv)
        assert e.value.code == code
        assert needle in capsys.readouterr().err
        return
    got, _, err = run_cli(capsys, *argv)
    assert got == code and needle in err


def test_cli_rules_summation_ladder(capsys):
    code, out, _ = run_cli(capsys, "rules", "--example", "summation", "--goal", "s(100,S)")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 8
    assert lines[0] == "s(A,B) <=> A>64 | C is A-64, s(C,D), B is 64*A-2016+D"
    assert lines[-1] == "s(A,B) <=> A=1 | B=1, true, true"


def test_cli_rules_small_goal(capsys):
    _, out, _ = run_cli(capsys, "rules", "--example", "summation", "--goal", "s(2,S)")
    assert out.splitlines() == ["s(A,B) <=> A>1 | C is A-1, s(C,D), B is 1*A-0+D",
                                "s(A,B) <=> A=1 | B=1, true, true"]


def test_cli_bench_writes_to_output_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(bench.OUT_DIR_ENV, str(tmp_path))
    code, out, _ = run_cli(capsys, "bench", "--example", "summation", "--mode", "both",
                           "--sizes", "2^5,2^6", "--reps", "2", "--seed", "1", "--format", "md",
                           "--out", "t.md")
    assert code == 0 and out == ""
    text = (tmp_path / "t.md").read_text()
    assert "| summation | 2^6 | unfolded |" in text


def test_cli_bench_mismatch_exit_code(capsys, monkeypatch):
    ex = EXAMPLES["summation"]
    broken = type(ex)(ex.name, ex.file, ex.scheme, ex.make_input, lambda n: n, ex.depth)
    monkeypatch.setitem(bench.EXAMPLES, "summation", broken)
    code, _, err = run_cli(capsys, "bench", "--example", "summation", "--sizes", "8")
    assert code == 4 and "verification failed" in err
