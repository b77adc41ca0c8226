import threading

import pytest

from rrunfold.engine import Engine, Registration
from rrunfold.errors import DuplicateRegistration, NotRegistered, SchemeMismatch, ValidationError
from rrunfold.parser import parse_goal, parse_program
from rrunfold.programs import EXAMPLES, load
from rrunfold.schemes import REVERSAL, SUMMATION

from oracles import to_py, triangular, unfolded_rules_for


def engine_with_summation(**kw):
    e = Engine(**kw)
    e.register(("sum", 2), load("summation"), SUMMATION)
    return e


def call(e, text):
    return e.call(parse_goal(text)[0])


def test_register_checks():
    e = engine_with_summation()
    with pytest.raises(DuplicateRegistration):
        e.register(("sum", 2), load("summation"), SUMMATION)
    with pytest.raises(SchemeMismatch):
        e.register(("r", 2), load("reversal"), SUMMATION)
    with pytest.raises(SchemeMismatch):
        e.register(("q", 2), load("reversal"), REVERSAL)
    bad = parse_program("r(A,B) <=> A=[X|T] | r(T,C), r(C,B).")
    with pytest.raises(ValidationError):
        e.register(("r", 2), bad, REVERSAL)


def test_unregistered_goal():
    with pytest.raises(NotRegistered):
        call(engine_with_summation(), "r([1],X)")


def test_worked_example_and_cache_growth():
    e = engine_with_summation()
    reg = e.registrations[("sum", 2)]
    a = call(e, "sum(10,S)")
    assert a["S"] == 55 and a.stats.applied_rule_indices == [3, 0]
    assert a.stats.cache_extended and a.stats.rules_built == 4

    b = call(e, "sum(100,S)")
    assert b["S"] == 5050 and b.stats.rules_built == 3
    assert b.stats.rules_generated == 6
    assert reg.cached_rules == 7

    c = call(e, "sum(7,S)")
    assert c["S"] == 28 and not c.stats.cache_extended and c.stats.rules_built == 0
    assert c.stats.applied_rule_indices == [2, 1]


@pytest.mark.parametrize("use_cache", [True, False])
def test_cache_does_not_change_answers(use_cache):
    e = engine_with_summation(use_cache=use_cache)
    for n in [5, 300, 2, 1000, 17, 1]:
        a = call(e, f"sum({n},S)")
        assert a["S"] == triangular(n)
        assert a.stats.rules_generated == unfolded_rules_for(n - 1)


def test_no_cache_rebuilds_every_call():
    e = engine_with_summation(use_cache=False)
    assert call(e, "sum(100,S)").stats.rules_built == 7
    assert call(e, "sum(100,S)").stats.rules_built == 7


def test_concurrent_calls_share_one_registration():
    ex = EXAMPLES["reversal"]
    e = Engine()
    e.register(("r", 2), ex.program, ex.scheme)
    errors = []

    def worker(n):
        try:
            for k in range(1, n):
                g, _ = ex.goal(list(range(k)))
                assert to_py(e.call(g)["Out"]) == list(range(k))[::-1]
        except Exception as exc:  # pragma: no cover - reported below
            errors.append(exc)

    ts = [threading.Thread(target=worker, args=(n,)) for n in (40, 70, 100, 130)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    assert not errors


def test_registration_uses_goal_predicate_renaming():
    p = load("summation").renamed("s")
    reg = Registration(("s", 2), p, SUMMATION.for_predicate(("s", 2)))
    assert reg.call(parse_goal("s(100,S)")[0])["S"] == 5050
