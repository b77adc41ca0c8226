"""Meta-interpreter for rule ladders.

Each ladder rule is tried once, most unfolded first, and applied at most
once.  A rule whose guard fails is skipped for good; a base rule ends the
descent.  Like the baseline it keeps pending post-goals on its own stack:
summation ladders for huge inputs have hundreds of rules.
"""

from __future__ import annotations

from typing import List, Sequence, Union

from .builtins import Work
from .errors import NoRuleApplicable, StepLimitExceeded
from .interp import DEFAULT_MAX_STEPS, run_goals, try_rule
from .rules import Answer, Rule, StepStats, isolate, make_answer
from .terms import BindingStore, VarGen, deref, format_term


def run_unfolded(goal, ladder, max_steps: int = DEFAULT_MAX_STEPS, stats: StepStats = None) -> Answer:
    rules: Sequence[Rule] = getattr(ladder, "rules", ladder)
    if stats is None:
        stats = StepStats(rules_generated=getattr(ladder, "rules_generated", 0))
    store = BindingStore()
    gen = VarGen()
    work = Work()
    pending = []
    copy, mapping = isolate(goal)
    call = copy
    j, n = 0, len(rules)
    while True:
        if j >= n:
            raise NoRuleApplicable(f"ladder exhausted at {format_term(call)}")
        rule = rules[j]
        j += 1
        stats.guard_checks += 1
        res = try_rule(rule, call, gen, store, work)
        if res is None:
            continue
        stats.rule_applications += 1
        if stats.rule_applications > max_steps:
            raise StepLimitExceeded(f"more than {max_steps} rule applications")
        if rule.level is not None:
            stats.applied_rule_indices.append(rule.level)
        pre, rec, post = res
        run_goals(pre, store, work)
        if rec is None:
            break
        stats.recursive_applications += 1
        if post:
            pending.append(post)
        call = deref(rec)
    while pending:
        run_goals(pending.pop(), store, work)
    stats.builtin_work += work.units
    return make_answer(copy, mapping, stats)


def count_applications(answer: Answer) -> List[int]:
    return list(answer.stats.applied_rule_indices)
