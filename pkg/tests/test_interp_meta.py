import pytest

from rrunfold.errors import ComputationFailed, NoRuleApplicable, StepLimitExceeded
from rrunfold.interp import recursion_depth, run_original
from rrunfold.meta import count_applications, run_unfolded
from rrunfold.parser import parse_goal, parse_program
from rrunfold.programs import EXAMPLES, countdown_program, load
from rrunfold.terms import Var, deref
from rrunfold.unfold import unfold_runtime

from oracles import to_py, triangular


def test_original_summation_of_three():
    g, _ = parse_goal("sum(3,R)")
    a = run_original(g, load("summation"))
    assert a["R"] == 6
    assert a.stats.rule_applications == 3
    assert a.stats.recursive_applications == 2


def test_original_reversal_small():
    g, _ = parse_goal("r([1,2,3],X)")
    assert to_py(run_original(g, load("reversal"))["X"]) == [3, 2, 1]


def test_original_sorting_small():
    g, _ = parse_goal("s([3,1,2],X)")
    assert to_py(run_original(g, load("sorting"))["X"]) == [1, 2, 3]


def test_caller_goal_is_not_bound():
    g, vs = parse_goal("sum(5,R)")
    run_original(g, load("summation"))
    assert deref(vs["R"]) is vs["R"]


def test_no_rule_applies_to_zero():
    g, _ = parse_goal("sum(0,R)")
    with pytest.raises(NoRuleApplicable):
        run_original(g, load("summation"))


def test_step_limit():
    g, _ = parse_goal("p(0)")
    with pytest.raises(StepLimitExceeded):
        run_original(g, countdown_program(), max_steps=500)


def test_body_failure_after_commit():
    p = parse_program("q(A,B) <=> A>0 | C is A-1, q(C,D), B=D.\nq(A,B) <=> A=0 | B=1.")
    g, _ = parse_goal("q(3,7)")
    with pytest.raises(ComputationFailed):
        run_original(g, p)


def test_deep_recursion_is_not_limited_by_the_host_stack():
    g, _ = parse_goal("sum(50000,R)")
    assert run_original(g, load("summation"))["R"] == triangular(50000)


def test_on_step_sees_every_application():
    seen = []
    g, _ = parse_goal("sum(4,R)")
    run_original(g, load("summation"), on_step=lambda r, s: seen.append(r.is_recursive))
    assert seen == [True, True, True, False]


def test_recursion_depth():
    ex = EXAMPLES["reversal"]
    assert recursion_depth(ex.goal([1, 2, 3, 4])[0], ex.program) == 4
    assert recursion_depth(parse_goal("sum(9,R)")[0], load("summation")) == 8


def test_unfolded_matches_worked_computation():
    g, _ = parse_goal("sum(10,R)")
    ladder = unfold_runtime(g, load("summation"), EXAMPLES["summation"].scheme)
    a = run_unfolded(g, ladder)
    assert a["R"] == 55
    assert count_applications(a) == [3, 0]


def test_unfolded_tries_each_rule_at_most_once():
    g, _ = parse_goal("sum(100,R)")
    ladder = unfold_runtime(g, load("summation"), EXAMPLES["summation"].scheme)
    a = run_unfolded(g, ladder)
    assert a.stats.guard_checks <= len(ladder)
    assert a["R"] == 5050


def test_ladder_without_base_runs_out():
    g, _ = parse_goal("sum(10,R)")
    ladder = unfold_runtime(g, load("summation"), EXAMPLES["summation"].scheme)
    with pytest.raises(NoRuleApplicable):
        run_unfolded(g, ladder.rules[:-1])


def test_unfolded_step_limit():
    g, _ = parse_goal("sum(100,R)")
    ladder = unfold_runtime(g, load("summation"), EXAMPLES["summation"].scheme)
    with pytest.raises(StepLimitExceeded):
        run_unfolded(g, ladder, max_steps=2)
